import subprocess
import sys
from pathlib import Path

import pytest

from ilw import io
from ilw.cli import main, run_command

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def s(name):
    return str(SAMPLES / name)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_eval(capsys):
    code, out = run(capsys, "eval", "--structure", s("two_points.toml"), "--formula", "int x. R(x)")
    assert code == 0
    assert out.splitlines()[:2] == ['status = "ok"', 'value = "1/2"']


def test_eval_with_assignment(capsys):
    _, out = run(capsys, "eval", "--structure", s("two_points.toml"), "--formula", "abs(-2*R(x))",
                 "--assign", "x=p1")
    assert 'value = "2"' in out


def test_check_theory(capsys):
    _, out = run(capsys, "check-theory", "--structure", s("two_points.toml"), "--theory", s("two_points.theory"))
    assert out.startswith('status = "ok"')


def test_invariant_measure(capsys):
    _, out = run(capsys, "invariant-measure", "--action", s("cyc3.toml"))
    assert 'measure = ["1/3", "1/3", "1/3"]' in out
    _, out = run(capsys, "invariant-measure", "--action", s("constant_maps.toml"))
    assert "feasible = false" in out


def test_duality_witness(capsys):
    _, out = run(capsys, "duality-witness", "--action", s("constant_maps.toml"))
    assert 'norm = "0"' in out
    code, out = run(capsys, "duality-witness", "--action", s("cyc3.toml"))
    assert code == 2 and "feasible" in out


def test_ladder(capsys):
    _, out = run(capsys, "ladder", "--matrix", s("halfgraph8.txt"), "--thresholds", "1", "0")
    assert "index = 8" in out
    assert "witness_valid = true" in out


def test_dk_and_nip(capsys):
    _, out = run(capsys, "dk-measure", "--family", s("two_boxes.toml"), "--thresholds", "1", "0", "--k", "1")
    assert 'dk = "1/2"' in out
    _, out = run(capsys, "nip-check", "--family", s("two_boxes.toml"), "--thresholds", "1", "0", "--kmax", "2")
    assert "k = 1" in out


def test_cb(capsys):
    _, out = run(capsys, "cb", "--space", s("chain4.toml"), "--epsilon", "1/2")
    assert "rank = 3" in out


def test_paradox_verify_reports_property_failure(capsys):
    code, out = run(capsys, "paradox-verify", "--f2ball", "2", "--prefix-certificate", "2")
    assert code == 0
    assert out.startswith('status = "property-fails"')
    assert "uncovered_1_count = 9" in out


@pytest.mark.parametrize("argv", [
    ["eval", "--structure", "missing.toml", "--formula", "R(x)"],
    ["eval", "--structure", str(SAMPLES / "two_points.toml"), "--formula", "R(x"],
    ["ladder", "--matrix", str(SAMPLES / "halfgraph8.txt"), "--thresholds", "0", "1"],
    ["cb", "--space", str(SAMPLES / "chain4.toml"), "--epsilon", "-1"],
])
def test_input_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2
    assert out.startswith('status = "input-error"')


def test_reports_are_deterministic():
    argv = ["ladder", "--matrix", s("halfgraph8.txt"), "--thresholds", "1", "0"]
    assert run_command(argv).render() == run_command(argv).render()


@pytest.mark.parametrize("kind", ["structure", "formula", "matrix", "family", "space"])
def test_gen_corpus(kind):
    a = run_command(["gen-corpus", "--kind", kind, "--seed", "3"]).render()
    assert a == run_command(["gen-corpus", "--kind", kind, "--seed", "3"]).render()
    assert a.startswith('status = "ok"')


def test_gen_corpus_output_parses():
    report = run_command(["gen-corpus", "--kind", "space", "--seed", "11"])
    text = dict(report.payload)["content"]
    assert len(io.parse_space(text)) >= 1


def test_help_lists_concepts():
    out = subprocess.run([sys.executable, "-m", "ilw.cli", "ladder", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "concept:" in out
