"""
Tests for the pqnorm command line.
"""

import json

import pytest

from app.main import main

LINE_2 = {"kind": "schatten", "base": {"kind": "lp", "n": 1, "p": 1.0}, "p": 2.0}
L1_MAX = {"kind": "schatten", "base": {"kind": "lp", "n": 2, "p": 1.0}, "p": 1.0}
DIAG_3_4 = {
    "ambient": LINE_2,
    "terms": [{"matrix": [[[3.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [4.0, 0.0]]], "vector": [[1.0, 0.0]]}],
}


def _run(capsys, *argv: str) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestNormCommand:
    """Tests for pqnorm norm."""

    def test_inline_element(self, capsys):
        """Test that diag(3, 4) in ^(2)ℂ prints the interval [5, 5]."""
        code, payload = _run(capsys, "norm", "--in", json.dumps(DIAG_3_4))
        assert code == 0
        assert payload["lower"] == pytest.approx(5.0)
        assert payload["upper"] == pytest.approx(5.0)
        assert payload["level"] == 2
        assert payload["heuristic"] is False

    def test_file_input_and_out(self, capsys, tmp_path):
        """Test that inputs can be files and results can go to --out."""
        source = tmp_path / "element.json"
        source.write_text(json.dumps(DIAG_3_4), encoding="utf-8")
        target = tmp_path / "result.json"
        code = main(["norm", "--in", str(source), "--out", str(target)])
        assert code == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["upper"] == pytest.approx(5.0)

    def test_parse_error(self, capsys):
        """Test that invalid JSON exits with code 2."""
        code, payload = _run(capsys, "norm", "--in", "{not json")
        assert code == 2
        assert payload["error"] == "ParseError"

    def test_dimension_error(self, capsys):
        """Test that a vector of the wrong length exits with code 3."""
        bad = {"ambient": L1_MAX, "terms": [{"matrix": [[[1.0, 0.0]]], "vector": [[1.0, 0.0]]}]}
        code, payload = _run(capsys, "norm", "--in", json.dumps(bad))
        assert code == 3
        assert payload["error"] == "DimensionError"

    def test_bad_flag_exits_two(self):
        """Test that argparse rejects a non-positive budget with code 2."""
        with pytest.raises(SystemExit) as exc:
            main(["norm", "--in", "{}", "--budget", "0"])
        assert exc.value.code == 2


class TestCBNormCommand:
    """Tests for pqnorm cbnorm."""

    def test_identity(self, capsys):
        """Test the estimate of id: ^(2)ℂ -> ^(1)ℂ at level 2."""
        line_1 = {**LINE_2, "p": 1.0}
        doc = {"domain": LINE_2, "codomain": line_1, "action": [[[1.0, 0.0]]]}
        code, payload = _run(capsys, "cbnorm", "--in", json.dumps(doc), "--level-cap", "2", "--budget", "4")
        assert code == 0
        assert payload["kind"] == "linear"
        assert payload["upper"] is None
        assert payload["lower"] == pytest.approx(2**0.5, rel=1e-9)


class TestTensorCommand:
    """Tests for pqnorm tensor."""

    def test_pop_descriptor(self, capsys):
        """Test that two spaces give their pop tensor and its dimension."""
        request = {"kind": "pop", "left": L1_MAX, "right": LINE_2}
        code, payload = _run(capsys, "tensor", "--in", json.dumps(request))
        assert code == 0
        assert payload["ambient"]["kind"] == "pop_tensor"
        assert payload["dimension"] == 2

    def test_diamond_of_elements(self, capsys):
        """Test that two elements give their diamond product and certificate."""
        request = {"left": DIAG_3_4, "right": DIAG_3_4}
        code, payload = _run(capsys, "tensor", "--in", json.dumps(request), "--norm")
        assert code == 0
        assert payload["element"]["level"] == 4
        assert payload["certificate"]["upper"] == pytest.approx(25.0, rel=1e-6)

    def test_pr_diamond_rejected(self, capsys):
        """Test that diamond products are refused in pr mode."""
        request = {"kind": "pr", "left": DIAG_3_4, "right": DIAG_3_4}
        code, payload = _run(capsys, "tensor", "--in", json.dumps(request))
        assert code == 3
        assert payload["error"] == "DomainMismatchError"


class TestVnCommand:
    """Tests for pqnorm vn."""

    def test_family_with_split(self, capsys, tmp_path):
        """Test the V_2 report, the triangle section and the element files."""
        code, payload = _run(capsys, "vn", "2", "--m", "1", "--budget", "8", "--out-dir", str(tmp_path))
        assert code == 0
        assert payload["reference"] == {"pop": 2.0, "op": 4.0}
        assert payload["pop"]["upper"] == pytest.approx(2.0, abs=1e-6)
        assert payload["op"]["witness_cost"] == pytest.approx(4.0)
        assert payload["gap_present"] is True
        assert payload["triangle"]["reference"] == {"V_m": 1, "V_n-V_m": 1, "V_n": 4}
        assert len(payload["files"]) == 3
        assert (tmp_path / "V_2.json").is_file()

    def test_invalid_split(self, capsys):
        """Test that m >= n is a semantic error."""
        code, payload = _run(capsys, "vn", "2", "--m", "2", "--budget", "4")
        assert code == 3
        assert payload["error"] == "InvalidParameterError"


class TestVerifyCommand:
    """Tests for pqnorm verify."""

    def test_list(self, capsys):
        """Test that --list prints the registered checks."""
        code, payload = _run(capsys, "verify", "--list")
        assert code == 0
        assert any(row["check"] == "pop_op_gap" for row in payload["checks"])

    def test_passing_check(self, capsys):
        """Test that a passing check exits 0."""
        code, payload = _run(capsys, "verify", "--check", "pinching_roots_of_unity", "--seed", "0")
        assert code == 0
        assert payload["all_passed"] is True

    def test_failing_check_exits_four(self, capsys):
        """Test that a zero tolerance makes the suite fail with code 4."""
        code, payload = _run(
            capsys, "verify", "--check", "diamond_schatten_multiplicativity", "--tol", "0"
        )
        assert code == 4
        assert payload["all_passed"] is False
        assert payload["checks"][0]["verdict"] == "fail"

    def test_unknown_check(self, capsys):
        """Test that an unknown check name is a semantic error."""
        code, payload = _run(capsys, "verify", "--check", "nonexistent")
        assert code == 3
