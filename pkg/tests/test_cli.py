import io
from pathlib import Path

import pytest

from defectkit.cli import EXIT_EXPECT, EXIT_INPUT, EXIT_OK, EXIT_UNDETERMINED, run

DEMO = str(Path(__file__).resolve().parents[1] / "inputs" / "demo.txt")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_invariants_from_file():
    code, out, _ = call("-f", DEMO, "invariants", "A")
    assert code == EXIT_OK
    assert "invariant_factors: 0, [2,12]" in out


def test_options_after_subcommand():
    assert call("invariants", "A", "-f", DEMO)[1] == call("-f", DEMO, "invariants", "A")[1]


def test_hom_literals():
    code, out, _ = call("hom", "Z/2", "Z/4")
    assert code == EXIT_OK and "invariant_factors: 0, [2]" in out and "order: 2" in out


def test_ext_literal():
    code, out, _ = call("ext", "Z/6", "Z/4")
    assert "invariant_factors: 0, [2]" in out


def test_expect_mismatch_exit():
    assert call("-f", DEMO, "check", "split-pair", "twice", "h", "--expect", "no")[0] == EXIT_OK
    assert call("-f", DEMO, "check", "split-pair", "twice", "h", "--expect", "yes")[0] == EXIT_EXPECT


def test_require_certified_exit():
    # at window 0 the Hom-vanishing argument for the lift has nothing to inspect yet
    code, out, _ = call("examples", "ex42", "--window", "0", "--require-certified")
    assert "lift: Undetermined" in out and code == EXIT_UNDETERMINED
    assert call("examples", "ex42", "--window", "0")[0] == EXIT_OK
    code, out, _ = call("examples", "ex42", "--window", "1", "--require-certified")
    assert code == EXIT_OK and "lift: CertifiedNo" in out


def test_undetermined_never_trips_expect():
    assert call("examples", "ex42", "--window", "0", "--expect", "yes")[0] == EXIT_OK
    assert call("examples", "ex42", "--window", "0", "--expect", "no")[0] == EXIT_OK


@pytest.mark.parametrize("text,line", [
    ("group G\ngens 2\nrels\n1 2 3\nend\n", 4),
    ("group G\ngens x\nend\n", 2),
    ("morphism m : Z -> Q9\nmatrix\n1\nend\n", 1),
    ("widget W\nend\n", 1),
    ("group G\ngens 1\n", 1),
])
def test_parse_errors_report_lines(tmp_path, text, line):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    code, _, err = call("-f", str(f), "invariants", "Z")
    assert code == EXIT_INPUT and f"line {line}:" in err


def test_missing_file():
    code, _, err = call("-f", "/nonexistent/input.txt", "invariants", "Z")
    assert code == EXIT_INPUT and "cannot read" in err


def test_bad_arguments():
    assert call("hom", "Z/2")[0] == EXIT_INPUT
    assert call("invariants", "Z/x")[0] == EXIT_INPUT
    assert call("--window", "-1", "examples", "ex32")[0] == EXIT_INPUT


def test_verify_witness():
    code, out, _ = call("examples", "ex32", "--window", "4", "--verify-witness")
    assert code == EXIT_OK and "witness_verified: true" in out
    code, out, _ = call("-f", DEMO, "check", "split-small", "beta", "Fam", "sigma", "min", "--verify-witness")
    assert code == EXIT_OK and "witness_verified: true" in out


@pytest.mark.parametrize("argv", [
    ("-f", DEMO, "dev", "beta", "A"),
    ("-f", DEMO, "dev-vs-ext", "beta", "Z/4", "--map", "epi"),
    ("-f", DEMO, "seq23", "beta", "A"),
    ("-f", DEMO, "sixterm", "beta", "S"),
    ("-f", DEMO, "phi", "twice", "U", "--property", "epi"),
    ("-f", DEMO, "check", "thm41", "twice", "sub"),
    ("-f", DEMO, "check", "def-omega", "twice", "C"),
    ("-f", DEMO, "snf", "A"),
    ("-f", DEMO, "oracle", "hom", "A", "Z/4"),
    ("examples", "devp", "--prime", "3"),
])
def test_commands_run(argv):
    code, out, err = call(*argv)
    assert code == EXIT_OK, err
    assert out.strip() and not err


def test_deterministic_reports():
    a = call("selftest", "--seed", "3")
    b = call("selftest", "--seed", "3")
    assert a == b and a[0] == EXIT_OK
