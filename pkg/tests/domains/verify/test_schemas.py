"""
Tests for check outcomes, results and suite reports.
"""

import math

import pytest

from app.domains.verify.schemas import (
    CheckContext,
    CheckOutcome,
    CheckResult,
    CheckSizes,
    Profile,
    SuiteReport,
    Verdict,
)


def _result(name: str, verdict: Verdict, margin: float = 0.0) -> CheckResult:
    return CheckResult(
        check=name,
        anchor="property",
        seed=0,
        sizes=CheckSizes.for_profile(Profile.QUICK),
        margin=margin,
        gap=0.0,
        tolerance=1e-9,
        verdict=verdict,
    )


class TestCheckResult:
    """Tests for CheckResult."""

    @pytest.mark.parametrize(
        "margin,gap,expected",
        [
            (0.0, 0.0, Verdict.PASS),
            (1e-12, 1e-12, Verdict.PASS),
            (1e-3, 0.0, Verdict.FAIL),
            (1e-3, 1.0, Verdict.FAIL),
            (0.0, 1e-3, Verdict.INCONCLUSIVE),
        ],
    )
    def test_judge(self, margin, gap, expected):
        """Test that violations fail before gaps make a result inconclusive."""
        assert CheckResult.judge(margin, gap, 1e-9) == expected

    def test_infinite_margin_serializes(self):
        """Test that infinite values are written as "inf"."""
        payload = _result("x", Verdict.FAIL, margin=math.inf).to_dict()
        assert payload["margin"] == "inf"
        assert payload["verdict"] == "fail"


class TestCheckOutcome:
    """Tests for CheckOutcome."""

    def test_record_keeps_maxima(self):
        """Test that margin and gap are running maxima and negatives clamp to zero."""
        out = CheckOutcome()
        out.record(-1.0, 0.5, n=1)
        out.record(0.25, 0.1, n=2)
        assert out.margin == 0.25
        assert out.gap == 0.5
        assert out.instances[0] == {"margin": 0.0, "gap": 0.5, "n": 1}


class TestSizes:
    """Tests for CheckSizes and CheckContext."""

    def test_profiles(self):
        """Test the quick and full instance sizes."""
        quick = CheckSizes.for_profile(Profile.QUICK)
        full = CheckSizes.for_profile(Profile.FULL)
        assert (quick.d, quick.n) == (2, 2)
        assert full.diamond_samples == 10_000

    def test_context_rng_is_seeded(self):
        """Test that equal seeds give equal streams."""
        ctx = CheckContext(seed=5, sizes=CheckSizes.for_profile(Profile.QUICK), budget=8, level_cap=2)
        assert ctx.rng().random() == ctx.rng().random()
        assert ctx.rng(0).random() != ctx.rng(1).random()


class TestSuiteReport:
    """Tests for SuiteReport."""

    def test_summary(self):
        """Test counts and the all-passed flag."""
        report = SuiteReport(
            seed=0,
            profile=Profile.QUICK,
            results=[_result("a", Verdict.PASS), _result("b", Verdict.INCONCLUSIVE)],
        )
        payload = report.to_dict()
        assert not report.all_passed
        assert payload["summary"] == {"total": 2, "pass": 1, "fail": 0, "inconclusive": 1}
        assert [c["check"] for c in payload["checks"]] == ["a", "b"]
