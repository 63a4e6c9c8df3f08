"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure (report carries a witness),
2 input error.  ``--json`` prints exactly one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any

from . import beck, brauer, ext, lrin, rlie, uenv
from .commalg import AlgebraError, derivation_space, hochschild_relation_check, p_power_derivation, random_derivation
from .document import AlgebraDocument, DocumentError, load
from .expr import ExprError
from .linalg import Matrix
from .report import Check, Report

SAMPLES_ENV = "RESTRICT_LR_SAMPLES"


class InputError(ValueError):
    pass


class Outcome:
    def __init__(self, ok: bool, payload: dict, text: str):
        self.ok = ok
        self.payload = payload
        self.text = text


def _from_report(rep: Report, extra: dict | None = None) -> Outcome:
    payload = rep.to_json()
    if extra:
        payload.update(extra)
    return Outcome(rep.passed, payload, rep.summary())


def _doc(args) -> AlgebraDocument:
    if not args.file:
        raise InputError("this command needs a document file")
    path = Path(args.file)
    if not path.exists():
        bundled = resources.files("restrict_lr") / "corpus" / args.file
        if bundled.is_file():
            path = Path(str(bundled))
        else:
            raise InputError(f"no such file: {args.file}")
    return load(path)


def _lie(doc: AlgebraDocument):
    try:
        return doc.lie_rinehart()
    except (lrin.LieRinehartError, rlie.PMapCriterionError, AlgebraError) as exc:
        raise InputError(f"invalid lie block: {exc}") from None


def _element(L, text: str) -> tuple:
    """Parse an element of L over k from an expression over the k-basis names."""
    from .document import _FieldRing, _VecElem
    from .expr import evaluate

    F = L.field
    env = {nm: _VecElem([F.one if i == j else F.zero for j in range(L.dim)], _FieldRing(F)) for i, nm in enumerate(L.names)}
    if hasattr(F, "t"):
        env["t"] = F.t
    try:
        res = evaluate(text, env, F)
    except ExprError as exc:
        raise InputError(f"bad element {text!r}: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad element {text!r}: {exc}") from None
    if not isinstance(res, _VecElem):
        raise InputError(f"{text!r} is not an element of L")
    return tuple(res.coeffs)


def _mat_json(M: Matrix) -> list:
    return M.tolist()


# --- commands -------------------------------------------------------------------------


def cmd_check_axioms(args) -> Outcome:
    doc = _doc(args)
    if doc.lie is None:
        A = doc.commalg()
        rep = Report("commutative algebra")
        bad = A.axiom_violation()
        rep.add(Check("commutative, associative, unital on basis triples", bad is None, A.dim**3, None if bad is None else {"triple": str(bad)}))
        return _from_report(rep)
    X = _lie(doc)
    rep = lrin.check_lrr_axioms(X, samples=args.samples, seed=args.seed)
    if doc.module is not None:
        M = doc.beck_module(X)
        rep.extend(beck.beck_module_check(M, X, samples=args.samples, seed=args.seed))
    return _from_report(rep)


def cmd_derivations(args) -> Outcome:
    doc = _doc(args)
    A = doc.commalg()
    basis = derivation_space(A)
    rep = Report("derivations", notes={"dimension": len(basis)})
    import random

    rng = random.Random(args.seed)
    ders = []
    for D in basis:
        ders.append({"matrix": _mat_json(D), "p_power": _mat_json(p_power_derivation(A, D))})
    bad = None
    for _ in range(args.samples if basis else 0):
        D = random_derivation(A, basis, rng)
        a = A.random_element(rng)
        c = hochschild_relation_check(A, a, D)
        if not c.passed:
            bad = c.witness
            break
    rep.add(Check("hochschild relation (aD)^p = a^p D^p + (aD)^(p-1)(a) D", bad is None, args.samples if basis else 0, bad))
    return _from_report(rep, {"derivations": ders})


def cmd_s_coefficients(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    if args.x is None or args.y is None:
        raise InputError("s-coefficients needs --x and --y")
    x, y = _element(X, args.x), _element(X, args.y)
    s = rlie.s_coefficients(X.lie, x, y)
    rep = Report("s coefficients", notes={"x": args.x, "y": args.y})
    payload = {"s": [X.format(v) for v in s]}
    if X.is_restricted:
        lhs = X.p_map(tuple(a + b for a, b in zip(x, y)))
        rhs = tuple(a + b for a, b in zip(X.p_map(x), X.p_map(y)))
        for v in s:
            rhs = tuple(a + b for a, b in zip(rhs, v))
        rep.add(Check("(x+y)^[p] = x^[p] + y^[p] + sum s_i(x,y)", lhs == rhs, 1, None if lhs == rhs else {"lhs": X.format(lhs), "rhs": X.format(rhs)}))
    else:
        rep.add(Check("computed", True))
    return _from_report(rep, payload)


def cmd_p_extend(args) -> Outcome:
    doc = _doc(args)
    if doc.lie is None or doc.lie.pmap is None:
        raise InputError("p-extend needs lie.pmap images")
    X = _lie(doc)
    try:
        rlie.extend_p_map_from_basis(X.lie.forget_pmap(), X.lie.pimages)
    except rlie.PMapCriterionError as exc:
        rep = Report("p-map extension")
        witness = {"index": exc.index, "name": exc.name, "difference": exc.difference.tolist()}
        rep.add(Check("ad(u_i)^p = ad(u_i^[p]) for every basis vector", False, 1, witness))
        return _from_report(rep)
    except ValueError as exc:
        rep = Report("p-map extension")
        rep.add(Check("Lie axioms", False, 1, {"error": str(exc)}))
        return _from_report(rep)
    rep = rlie.check_restricted(X.lie, samples=args.samples, seed=args.seed)
    payload: dict[str, Any] = {"pmap": {X.names[j]: X.format(X.lie.pimages[j]) for j in range(X.dim)}}
    if args.element:
        v = _element(X, args.element)
        payload["element"] = args.element
        payload["p_image"] = X.format(X.p_map(v))
    return _from_report(rep, payload)


def cmd_free_lie(args) -> Outcome:
    from .field import GF

    F = GF(args.p)
    L = rlie.free_restricted_lie(F, args.generators, args.degree)
    rep = rlie.check_restricted(L, samples=args.samples, seed=args.seed)
    rep.notes.update(generators=args.generators, degree_bound=args.degree, p=args.p, dimension=L.dim)
    return _from_report(rep, {"basis": list(L.names), "degrees": list(L.degrees)})


def cmd_pbw(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    try:
        rep = uenv.pbw_rank_check(X, samples=min(args.samples, 30), seed=args.seed)
        payload: dict[str, Any] = {}
        if args.word:
            U = uenv.Enveloping(X, restricted=True)
            nf = U.normal_form(U.parse_word(args.word.split()))
            payload["word"] = args.word
            payload["normal_form"] = U.to_json(nf)
    except uenv.RewriteError as exc:
        raise InputError(str(exc)) from None
    return _from_report(rep, payload)


def cmd_rinehart_basis(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    try:
        rep = uenv.rinehart_basis_check(X, degree_bound=args.degree)
    except uenv.RewriteError as exc:
        raise InputError(str(exc)) from None
    return _from_report(rep)


def cmd_universal_check(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    if args.target == "anchor":
        B, phi_A, phi_L = uenv.anchor_representation(X)
    else:
        B, phi_A, phi_L = uenv.canonical_maps(X)
    try:
        h = uenv.universal_property_check(X, B, phi_A, phi_L, samples=args.samples, seed=args.seed)
    except uenv.UniversalPropertyError as exc:
        rep = Report("universal property of U_p(A,L)")
        rep.add(Check(f"{exc.hypothesis} hypothesis", False, 1, exc.witness))
        return _from_report(rep)
    h.report.notes["target"] = args.target
    h.report.notes["source_dim"] = h.source.dim
    h.report.notes["target_dim"] = h.target.dim
    return _from_report(h.report)


def cmd_beck_derivations(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    M = doc.beck_module(X)
    mrep = beck.beck_module_check(M, X, samples=args.samples, seed=args.seed)
    if not mrep.passed:
        return _from_report(mrep)
    try:
        ders = beck.beck_derivations(X, M)
    except beck.BeckError as exc:
        raise InputError(str(exc)) from None
    rep = Report("Beck derivations", notes={"dimension": len(ders)})
    E = beck.beck_module_assemble(M, X, samples=min(args.samples, 30), seed=args.seed) if M.dim else X
    for i, d in enumerate(ders):
        r = beck.is_beck_derivation(X, M, d, samples=min(args.samples, 30), seed=args.seed)
        rep.add(Check(f"basis element {i} is a Beck derivation", r.passed, 1, None if r.passed else r.first_failure().witness))
        f = beck.section_from_derivation(M, X, d)
        s = beck.check_section_hom(E, X, f, samples=min(args.samples, 30), seed=args.seed)
        rep.add(Check(f"basis element {i} gives a section homomorphism f_d = d + gamma", s.passed, 1, None if s.passed else s.first_failure().witness))
    if not ders:
        rep.add(Check("only the zero derivation", True))
    return _from_report(rep, {"derivations": [_mat_json(d) for d in ders]})


def cmd_ext_classify(args) -> Outcome:
    doc = _doc(args)
    X = _lie(doc)
    M = doc.beck_module(X)
    try:
        C = ext.classify_ext(X, M, samples=min(args.samples, 20), seed=args.seed)
    except ext.ExtensionError as exc:
        raise InputError(str(exc)) from None
    except beck.BeckError as exc:
        raise InputError(str(exc)) from None
    reps = []
    for r in C.representatives:
        reps.append({"label": r.label, "h": {f"{X.names[i]},{X.names[j]}": [str(c) for c in v] for (i, j), v in sorted(r.h.items())}, "g": {X.names[j]: [str(c) for c in v] for j, v in enumerate(r.g)}})
    payload = {"classes": C.order, "group": C.group_name(), "table": C.table, "class_sizes": C.class_sizes, "representatives": reps}
    return _from_report(C.report, payload)


def _extensions(doc: AlgebraDocument, need: int):
    X = _lie(doc)
    M = doc.beck_module(X)
    if len(doc.extensions) < need:
        raise InputError(f"document needs {need} entries in 'extensions'")
    datas = [doc.extension_data(X, M, b, f"extensions[{i}]") for i, b in enumerate(doc.extensions)]
    return X, M, datas


def _ext_json(X, e) -> dict:
    return {
        "h": {f"{X.names[i]},{X.names[j]}": [str(c) for c in v] for (i, j), v in sorted(e.h.items()) if any(v)},
        "g": {X.names[j]: [str(c) for c in v] for j, v in enumerate(e.g) if any(v)},
    }


def cmd_baer_sum(args) -> Outcome:
    doc = _doc(args)
    X, M, (e1, e2, *_) = _extensions(doc, 2)
    for e in (e1, e2):
        try:
            ext.build_extension(e, samples=min(args.samples, 30), seed=args.seed)
        except ext.ExtensionError as exc:
            rep = Report("Baer sum")
            rep.add(Check(f"{e.label} is a valid extension", False, 1, {"error": str(exc)}))
            return _from_report(rep)
    s = ext.baer_sum(e1, e2, seed=args.seed)
    rep = s.report
    try:
        ext.build_extension(s, samples=min(args.samples, 30), seed=args.seed)
        rep.add(Check("sum is a valid extension", True))
    except ext.ExtensionError as exc:
        rep.add(Check("sum is a valid extension", False, 1, {"error": str(exc)}))
    return _from_report(rep, {"sum": _ext_json(X, s)})


def cmd_equiv(args) -> Outcome:
    doc = _doc(args)
    X, M, (e1, e2, *_) = _extensions(doc, 2)
    rep = Report("equivalence of extensions")
    if not X.field.is_prime_field:
        if not args.gamma:
            raise InputError("over F_p(t) only witness verification is available: pass --gamma")
    if args.gamma:
        rows = json.loads(args.gamma)
        gamma = Matrix(X.field, rows, X.dim)
        vr = ext.verify_equivalence(e1, e2, gamma, samples=min(args.samples, 30), seed=args.seed)
        return _from_report(vr, {"gamma": _mat_json(gamma)})
    gamma = ext.equivalent(e1, e2)
    if gamma is None:
        rep.add(Check("a section shift gamma exists", False, 1, {"reason": "the linear system for gamma is inconsistent"}))
        return _from_report(rep, {"equivalent": False})
    vr = ext.verify_equivalence(e1, e2, gamma, samples=min(args.samples, 30), seed=args.seed)
    rep.extend(vr)
    return _from_report(rep, {"equivalent": True, "gamma": _mat_json(gamma)})


def cmd_brauer_demo(args) -> Outcome:
    try:
        rep = brauer.ext_to_brauer_demo(args.p, args.beta, args.gamma, samples=min(args.samples, 4), seed=args.seed)
    except brauer.BrauerError as exc:
        rep = Report("Ext -> Brauer correspondence", notes={"p": args.p, "beta": args.beta})
        rep.add(Check("beta defines a regular extension", False, 1, exc.witness))
        return _from_report(rep)
    except (ExprError, ValueError) as exc:
        raise InputError(str(exc)) from None
    payload: dict[str, Any] = {k: rep.notes[k] for k in ("beta", "center_dim", "sandwich_rank", "split_witness", "residue") if k in rep.notes}
    if args.gamma is not None:
        S = brauer.setup(args.p)
        E = brauer.regular_extension(S, args.beta)
        sw = brauer.verify_split_witness(E, args.gamma)
        C = brauer.crossed_product(E)
        payload["split_result"] = sw.to_json(C)
        if sw.iso is not None:
            payload["isomorphism"] = _mat_json(sw.iso)
        if not sw.split:
            rep.add(Check("gamma is a split witness: (u + gamma)^p = 0", False, 1, {"residue": C.format(sw.residue)}))
    return _from_report(rep, payload)


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "derivations": cmd_derivations,
    "s-coefficients": cmd_s_coefficients,
    "p-extend": cmd_p_extend,
    "free-lie": cmd_free_lie,
    "pbw": cmd_pbw,
    "rinehart-basis": cmd_rinehart_basis,
    "universal-check": cmd_universal_check,
    "beck-derivations": cmd_beck_derivations,
    "ext-classify": cmd_ext_classify,
    "baer-sum": cmd_baer_sum,
    "equiv": cmd_equiv,
    "brauer-demo": cmd_brauer_demo,
}


def default_samples() -> int:
    raw = os.environ.get(SAMPLES_ENV)
    if raw is None:
        return 100
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{SAMPLES_ENV} must be an integer") from None
    if n < 0:
        raise InputError(f"{SAMPLES_ENV} must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="restrict-lr", description="Restricted Lie-Rinehart algebra toolkit")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file", nargs="?", help="JSON document (paths or bundled corpus names)")
    ap.add_argument("--json", action="store_true", help="emit one JSON object")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=None, help=f"random samples per identity (default 100 or ${SAMPLES_ENV})")
    ap.add_argument("--x", help="s-coefficients: first element")
    ap.add_argument("--y", help="s-coefficients: second element")
    ap.add_argument("--element", help="p-extend: element whose p-image is printed")
    ap.add_argument("--word", help="pbw: space-separated generator names to normalize")
    ap.add_argument("--degree", type=int, default=None, help="free-lie / rinehart-basis degree bound")
    ap.add_argument("--generators", type=int, default=1, help="free-lie: number of generators")
    ap.add_argument("--p", type=int, default=2, help="free-lie / brauer-demo: characteristic")
    ap.add_argument("--beta", default="t", help="brauer-demo: p-curvature in k")
    ap.add_argument("--gamma", default=None, help="brauer-demo: element of K; equiv: JSON matrix")
    ap.add_argument("--target", choices=("self", "anchor"), default="self", help="universal-check target algebra")
    return ap


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run a command; returns (exit code, output text)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    as_json = args.json
    try:
        if args.samples is None:
            args.samples = default_samples()
        if args.samples < 0:
            raise InputError("--samples must be non-negative")
        if args.command == "free-lie" and args.degree is None:
            args.degree = 2
        out = COMMANDS[args.command](args)
    except DocumentError as exc:
        return 2, _error_text(as_json, args.command, [e.__dict__ for e in exc.errors], str(exc))
    except (InputError, ExprError, ValueError, KeyError) as exc:
        return 2, _error_text(as_json, args.command, [{"message": str(exc)}], str(exc))
    except OSError as exc:
        return 2, _error_text(as_json, args.command, [{"message": str(exc)}], str(exc))
    code = 0 if out.ok else 1
    if as_json:
        payload = {"command": args.command, "exit_code": code, "seed": args.seed, "samples": args.samples}
        payload.update(out.payload)
        return code, json.dumps(payload, sort_keys=True, indent=2, default=str)
    return code, out.text


def _error_text(as_json: bool, command: str, errors: list, text: str) -> str:
    if as_json:
        return json.dumps({"command": command, "exit_code": 2, "errors": errors}, sort_keys=True, indent=2, default=str)
    return f"input error: {text}"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    if text:
        stream = sys.stderr if code == 2 and not text.startswith("{") else sys.stdout
        print(text, file=stream)
    return code


# --- corpus ------------------------------------------------------------------------------


def corpus_dir() -> Path:
    return Path(str(resources.files("restrict_lr") / "corpus"))


def corpus_manifest() -> list[list[str]]:
    with open(corpus_dir() / "manifest.json", encoding="utf-8") as fh:
        return json.load(fh)["runs"]


def run_corpus(seed: int = 0, samples: int | None = None) -> str:
    """Every manifest run with --json; one combined, deterministic JSON document."""
    results = []
    for argv in corpus_manifest():
        full = list(argv) + ["--json", "--seed", str(seed)]
        if samples is not None:
            full += ["--samples", str(samples)]
        code, text = run(full)
        results.append({"argv": argv, "exit_code": code, "report": json.loads(text) if text else None})
    return json.dumps({"seed": seed, "runs": results}, sort_keys=True, indent=2)


if __name__ == "__main__":
    sys.exit(main())
