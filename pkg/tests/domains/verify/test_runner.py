"""
Tests for the check registry and runner.
"""

import pytest

from app.cli.io import dumps

from app.core.exceptions import InvalidParameterError
from app.domains.verify.schemas import CheckSizes, Profile, Verdict
from app.domains.verify.services.registry import build_registry, resolve
from app.domains.verify.services.runner import list_checks, run_all, run_check


class TestRegistry:
    """Tests for the check registry."""

    def test_sorted_and_anchored(self):
        """Test that checks are name-ordered and carry an anchor and tolerance."""
        registry = build_registry()
        assert list(registry) == sorted(registry)
        assert all(check.anchor and check.tolerance > 0 for check in registry.values())

    def test_core_checks_registered(self):
        """Test that the headline properties are present."""
        registry = build_registry()
        for name in ("pop_op_gap", "op_triangle_failure", "pinching_roots_of_unity", "certificate_soundness"):
            assert name in registry

    def test_resolve_prefix(self):
        """Test that a unique prefix resolves."""
        assert resolve("pinch", build_registry()).name == "pinching_roots_of_unity"

    @pytest.mark.parametrize("name", ["nonexistent", "pop"])
    def test_resolve_rejects_unknown_or_ambiguous(self, name):
        """Test that unknown and ambiguous names raise."""
        with pytest.raises(InvalidParameterError):
            resolve(name, build_registry())

    def test_list_checks(self):
        """Test that the listing mirrors the registry."""
        listing = list_checks()
        assert [row["check"] for row in listing] == list(build_registry())


class TestRunner:
    """Tests for run_check and run_all."""

    def test_pinching_passes(self):
        """Test that the pinching identity passes on the quick profile."""
        result = run_check("pinching_roots_of_unity", seed=0)
        assert result.verdict == Verdict.PASS
        assert result.margin < 1e-9

    def test_multiplicativity_passes(self):
        """Test that Schatten multiplicativity passes."""
        assert run_check("diamond_schatten", seed=1).verdict == Verdict.PASS

    def test_zero_tolerance_override_fails(self):
        """Test that an impossible tolerance turns rounding error into a failure."""
        result = run_check("diamond_schatten_multiplicativity", seed=0, tolerance=0.0)
        assert result.tolerance == 0.0
        assert result.verdict == Verdict.FAIL

    def test_run_all_subset(self):
        """Test that a named subset runs once per check in name order."""
        report = run_all(
            seed=0,
            names=["pinching_roots_of_unity", "diamond_schatten_multiplicativity", "pinch"],
        )
        assert [r.check for r in report.results] == [
            "diamond_schatten_multiplicativity",
            "pinching_roots_of_unity",
        ]
        assert report.all_passed
        assert report.to_dict()["summary"]["total"] == 2

    def test_deterministic(self):
        """Test that a seeded run reproduces its margins."""
        first = run_check("diamond_schatten_multiplicativity", seed=4)
        second = run_check("diamond_schatten_multiplicativity", seed=4)
        assert first.margin == second.margin

    def test_size_overrides(self):
        """Test that keyword sizes adjust the profile and a full sizes object replaces it."""
        result = run_check("pop_op_gap", seed=1, n=3)
        assert result.sizes.n == 3
        assert result.sizes.d == CheckSizes.for_profile(Profile.QUICK).d
        assert [inst["n"] for inst in result.instances] == [1, 2, 3]
        assert result.verdict == Verdict.PASS

        sizes = CheckSizes(d=3, n=2, samples=1, diamond_samples=4)
        assert run_check("pinching_roots_of_unity", seed=1, sizes=sizes).sizes == sizes

    @pytest.mark.parametrize("overrides", [{"depth": 2}, {"n": 0}])
    def test_size_overrides_checked(self, overrides):
        """Test that unknown sizes and sizes below one are rejected."""
        with pytest.raises(InvalidParameterError):
            run_check("pinching_roots_of_unity", seed=0, **overrides)

    def test_l1_sequence_space_is_not_the_max_quantization(self):
        """Test that ℓ1 over the operator-norm line sums operator norms, below ^(1)ℓ1."""
        result = run_check("l1_sequence_factorization", seed=0)
        assert result.verdict == Verdict.PASS
        corner = next(inst for inst in result.instances if inst["case"] == "identity_at_one_atom")
        assert corner["sequence"] == pytest.approx(1.0)
        assert corner["maximal"] == pytest.approx(2.0)

    def test_atom_regrouping_brackets_the_closed_form(self):
        """Test that the functional bound and the searched representation bracket the atom sum."""
        result = run_check("l1_atom_regrouping", seed=0)
        assert result.verdict == Verdict.PASS
        for inst in result.instances:
            assert inst["functional_lower"] <= inst["reference"] * (1 + 1e-9)
            assert inst["upper"] >= inst["reference"] - 1e-3 * max(1.0, inst["reference"])


class TestSuite:
    """Tests for whole-registry runs."""

    def test_quick_profile_passes(self):
        """Test that every registered check passes on the quick profile."""
        report = run_all(seed=0, profile=Profile.QUICK)
        failing = {r.check: r.verdict.value for r in report.results if r.verdict != Verdict.PASS}
        assert failing == {}
        assert report.all_passed
        assert len(report.results) == len(build_registry())

    @pytest.mark.slow
    def test_full_profile_is_reproducible(self):
        """Test that two full-profile runs with one seed give byte-identical reports."""
        first = dumps(run_all(seed=7, profile=Profile.FULL).to_dict())
        second = dumps(run_all(seed=7, profile=Profile.FULL).to_dict())
        assert first == second
        assert len(build_registry()) >= 25
