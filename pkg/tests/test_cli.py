import json
import subprocess
import sys


from restrict_lr.brauer import regular_extension, setup, verify_split_witness
from restrict_lr.cli import SAMPLES_ENV, corpus_dir, main, run


def jrun(*argv):
    code, text = run(list(argv) + ["--json"])
    return code, json.loads(text)


def test_check_axioms_witt():
    code, out = jrun("check-axioms", "witt_p2.json")
    assert code == 0 and out["passed"]


def test_ext_classify_example():
    code, out = jrun("ext-classify", "ext_F2_example.json")
    assert code == 0
    assert out["classes"] == 2 and out["group"] == "Z/2" and out["table"] == [[0, 1], [1, 0]]


def test_brauer_split_confirmed():
    code, out = jrun("brauer-demo", "--p", "2", "--beta", "t", "--gamma", "1+s")
    assert code == 0
    assert out["split_witness"] == "1+s" and out["center_dim"] == 1 and out["sandwich_rank"] == 16
    assert len(out["isomorphism"]) == 4


def test_brauer_failure_witness_reproduces():
    code, out = jrun("brauer-demo", "--p", "2", "--beta", "t", "--gamma", "s")
    assert code == 1
    assert out["residue"] == "1"
    # re-run the named identity on the witness
    S = setup(2)
    sw = verify_split_witness(regular_extension(S, out["beta"]), out["notes"]["gamma"])
    assert not sw.split


def test_equiv_exit_codes():
    assert run(["equiv", "ext_F2_torus.json"])[0] == 0
    code, out = jrun("equiv", "equiv_F2_distinct.json")
    assert code == 1 and out["equivalent"] is False


def test_input_errors_exit_2(tmp_path):
    assert run(["check-axioms", "missing.json"])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 2,\n "lie": {"basis": ["d"], "pmap": {"d": ["1", "1"]}}}')
    code, text = run(["check-axioms", str(bad), "--json"])
    err = json.loads(text)["errors"][0]
    assert code == 2 and err["key"] == "lie.pmap.d" and err["line"] == 2
    assert run(["no-such-command"])[0] == 2
    assert run(["check-axioms", "witt_p2.json", "--samples", "x"])[0] == 2
    assert run(["s-coefficients", "witt_p3.json"])[0] == 2


def test_p_extend_criterion_failure(tmp_path):
    f = tmp_path / "bad_pmap.json"
    f.write_text(json.dumps({"p": 2, "lie": {"basis": ["d", "xd"], "brackets": {"d,xd": "d"}, "pmap": {"d": "xd", "xd": "xd"}}}))
    code, out = jrun("p-extend", str(f))
    assert code == 1
    assert out["checks"][0]["witness"]["name"] == "d"


def test_samples_env(monkeypatch):
    monkeypatch.setenv(SAMPLES_ENV, "7")
    code, out = jrun("check-axioms", "witt_p2.json")
    assert out["samples"] == 7
    code, out = jrun("check-axioms", "witt_p2.json", "--samples", "3")
    assert out["samples"] == 3
    monkeypatch.setenv(SAMPLES_ENV, "many")
    assert run(["check-axioms", "witt_p2.json"])[0] == 2


def test_other_commands():
    assert jrun("derivations", "der_F3x3.json")[1]["notes"]["dimension"] == 3
    code, out = jrun("s-coefficients", "witt_p3.json", "--x", "d", "--y", "x2d")
    assert code == 0 and len(out["s"]) == 2
    code, out = jrun("free-lie", "--generators", "2", "--degree", "3")
    assert code == 0 and len(out["basis"]) == 7
    code, out = jrun("pbw", "witt_p2.json", "--word", "xd d")
    assert code == 0 and out["notes"]["rank"] == 4
    assert jrun("rinehart-basis", "witt_p2.json", "--degree", "4")[0] == 0
    assert jrun("universal-check", "der_F2x2.json", "--target", "anchor")[0] == 0
    code, out = jrun("beck-derivations", "beck_natural_F2x2.json")
    assert code == 0 and out["notes"]["dimension"] == 1
    code, out = jrun("baer-sum", "ext_F2_plane.json")
    assert code == 0 and out["sum"]["g"] == {"x": ["1"], "y": ["1"]}


def test_deterministic_json():
    a = run(["check-axioms", "insep_p2.json", "--json", "--seed", "5"])
    b = run(["check-axioms", "insep_p2.json", "--json", "--seed", "5"])
    assert a == b


def test_main_prints(capsys):
    assert main(["check-axioms", "witt_p2.json"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "restrict_lr.cli", "check-axioms", str(corpus_dir() / "witt_p2.json"), "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    json.loads(proc.stdout)
