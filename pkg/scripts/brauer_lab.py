"""Desk-scale Brauer lab: crossed products A_beta over k = F_p(t) for K = k(s), s^p = t.

    python3 scripts/brauer_lab.py --p 2 --beta t
"""

import argparse
import time

from restrict_lr.brauer import (
    central_simple_check,
    crossed_product,
    ext_side_shift,
    regular_extension,
    setup,
    shift_isomorphism,
    shifted_beta,
    verify_split_witness,
    witness_search,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2, choices=(2, 3))
    ap.add_argument("--beta", default="t")
    ap.add_argument("--degree", type=int, default=2, help="witness search degree bound")
    args = ap.parse_args()

    t0 = time.perf_counter()
    S = setup(args.p)
    E = regular_extension(S, args.beta)
    C = crossed_product(E)
    cs = central_simple_check(C)
    print(f"A_beta, beta = {E.beta_str()}: dim {C.dim}, center dim {cs.notes['center_dim']}, sandwich rank {cs.notes['sandwich_rank']}")

    found = witness_search(S, args.beta, degree=args.degree)
    print(f"witness search (evidence only, degree <= {args.degree}): {found}")
    if found["found"]:
        g = found["gamma"]
        sw = verify_split_witness(E, g, C)
        print(f"  (u + {g})^p = 0 and A_beta = End_k(K): {sw.split}")
        _, rep = shift_isomorphism(S, "0", g)
        print(f"  u -> u + {g} carries A_{S.K.format(shifted_beta(S, '0', g))} onto A_0: {rep.passed}")
        print(f"  extension side agrees: {ext_side_shift(S, '0', g).passed}")

    for gamma in ("s", "1", "t*s"):
        sw = verify_split_witness(E, gamma, C)
        tail = "split" if sw.split else f"residue {C.format(sw.residue)}"
        print(f"  gamma = {gamma}: {tail}")
    print(f"done in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
