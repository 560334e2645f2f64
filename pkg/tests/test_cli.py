import os
import subprocess
import sys

import pytest

from stratkit.cli import run_command


def cli(*args, env=None):
    full = dict(os.environ, **(env or {}))
    proc = subprocess.run([sys.executable, "-m", "stratkit", *args], capture_output=True,
                          text=True, env=full, timeout=300)
    return proc.returncode, proc.stdout, proc.stderr


def test_strata_report():
    code, out, _ = cli("strata", "pinched_torus")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# command: stratkit strata pinched_torus"
    assert lines[1].startswith("# input: pinched_torus:S sha256=")
    assert "stratum=0 dim=0 codim=2 singular simplices=1 lexmin=(x)" in lines
    assert lines[-1] == "# verdict: pass"


def test_ih_pinched_torus():
    code, out, _ = cli("ih", "pinched_torus", "--perversity", "zero", "--ring", "Z", "--oracle")
    assert code == 0
    assert "IH[0] rank=1 torsion=[] ring=Z" in out
    assert "IH[1] rank=0 torsion=[] ring=Z" in out
    assert "IH[2] rank=1 torsion=[] ring=Z" in out


def test_output_is_deterministic():
    args = ("perv-check", "susp_chain:SR", "--perversity", "top")
    first, second = cli(*args), cli(*args)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]


@pytest.mark.parametrize("args", [(), ("ih",), ("ih", "nosuch"), ("bogus", "x"),
                                  ("ih", "pinched_torus", "--ring", "R"),
                                  ("ih", "pinched_torus", "--perversity", "codim:1,x")])
def test_usage_errors(args):
    code, out, err = cli(*args)
    assert code == 2 and err.startswith(("error:", "usage:")) and out == ""


def test_domain_error_exit_one():
    code, out, _ = cli("pi0", "pinched_torus", "--perversity", "const:1")
    assert code == 1 and "PerversityTooLarge" in out


def test_failed_check_exit_one():
    code, out, _ = cli("perv-check", "line_point:forget")
    assert code == 1
    assert "check K-perversity: FAIL" in out and out.rstrip().endswith("# verdict: fail")


def test_emit_round_trip(tmp_path):
    code, out, _ = cli("emit", "susp_torus")
    assert code == 0
    path = tmp_path / "mine.strat"
    path.write_text(out)
    code, a, _ = cli("ih", str(path), "--perversity", "top")
    assert code == 0
    assert "IH[2] rank=2" in a


def test_corpus_dir_override(tmp_path):
    text = "dim 1\nfacets\na m\nm b\nskeleton 0:\nm\n"
    (tmp_path / "pinched_torus.strat").write_text(text)
    code, out, _ = cli("strata", "pinched_torus", env={"STRATUM_CORPUS_DIR": str(tmp_path)})
    assert code == 0 and "n=1 strata=3" in out


def test_calc():
    code, out, _ = cli("calc", "Cone(S2)", "--perversity", "apex=1", "--degree", "1", "--degree", "2")
    assert code == 0
    assert "pi[1]^{apex=1}(Cone(S2)) = 1" in out and "consistent=yes" in out


def test_calc_atoms_file(tmp_path):
    from importlib.resources import files
    text = files("stratkit").joinpath("data", "atoms.decl").read_text()
    bad = tmp_path / "atoms.decl"
    bad.write_text(text + "\nrecord S2 zero 1 Z planted\n")
    code, out, _ = cli("calc", "S2", "--atoms", str(bad))
    assert code == 1 and "consistent=no" in out


def test_verify_single_suite():
    code, out, err = cli("verify", "poincare-bookkeeping")
    assert code == 0
    assert "check poincare-bookkeeping (criterion 8): pass" in out
    assert "# time:" in err and "# time:" not in out


def test_figures(tmp_path):
    code, _, _ = cli("ih", "pinched_torus", "--figures", str(tmp_path))
    assert code == 0
    pngs = list(tmp_path.glob("*.png"))
    assert pngs and pngs[0].read_bytes()[:4] == b"\x89PNG"


def test_in_process_matches_subprocess():
    text, code = run_command(["classify", "pinched_torus"])
    assert code == 0
    assert text == cli("classify", "pinched_torus")[1]
