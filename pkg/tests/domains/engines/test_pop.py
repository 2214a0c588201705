"""
Tests for diamond-projective norms and the witness families.
"""

import numpy as np
import pytest

from app.core.exceptions import DomainMismatchError, InvalidParameterError
from app.domains.amplification.schemas import AmpElem
from app.domains.engines.schemas import PopRepresentation
from app.domains.engines.services.families import (
    projection_pair_diagonal,
    projection_pair_reference,
    vn_family,
    vn_reference,
    vn_split,
    vn_witness,
)
from app.domains.engines.services.pop import (
    op_norm_upper,
    pop_certificate,
    pop_upper,
    pad_single_diamond,
    recheck_single_diamond,
    sample_single_diamonds,
    solve_single_diamond,
    solve_single_diamonds,
)
from app.domains.spaces.schemas import l1_sequence_space, pop_tensor, schatten_line


class TestFamilies:
    """Tests for the witness families."""

    def test_reference(self):
        """Test the known pop and op values of V_n."""
        assert vn_reference(3).to_dict() == {"pop": 3.0, "op": 9.0}
        assert projection_pair_reference().pop == 2.0

    def test_vn_shape(self):
        """Test that V_n lives at level n over the pop square of ℓ1^n."""
        v = vn_family(3)
        assert v.level == 3
        assert v.ambient == pop_tensor(l1_sequence_space(3), l1_sequence_space(3))
        coords = v.coordinates()
        assert coords.shape == (9, 3, 3)
        assert coords[4, 1, 1] == 1.0
        assert np.count_nonzero(coords) == 3

    def test_vn_order_checked(self):
        """Test that n must be positive."""
        with pytest.raises(InvalidParameterError):
            vn_family(0)

    def test_split(self):
        """Test that the split pieces add up to V_n."""
        head, tail, whole = vn_split(3, 1)
        assert np.allclose((head + tail).coordinates(), whole.coordinates())

    @pytest.mark.parametrize("m", [0, 3])
    def test_split_range(self, m):
        """Test that the split index must satisfy 1 <= m < n."""
        with pytest.raises(InvalidParameterError):
            vn_split(3, m)

    def test_witness_reconstructs(self):
        """Test that the explicit single diamond represents V_n with cost n squared."""
        residual, cost = recheck_single_diamond(vn_witness(2), vn_family(2), budget=8, seed=0)
        assert residual < 1e-12
        assert cost == pytest.approx(4.0)

    def test_projection_pair_ambient(self):
        """Test that the two-term element has two nonzero coordinates."""
        u = projection_pair_diagonal()
        assert u.level == 2
        assert np.count_nonzero(np.abs(u.coordinates()).sum(axis=(1, 2))) == 2


class TestPopNorm:
    """Tests for pop certificates and upper bounds."""

    def test_vn_pop_norm(self):
        """Test that ||V_2||_pop = 2 through the L1 reduction."""
        cert = pop_certificate(vn_family(2), budget=8, seed=0)
        assert cert.lower == pytest.approx(2.0, abs=1e-6)
        assert cert.upper == pytest.approx(2.0, abs=1e-6)

    def test_op_upper_is_sound(self):
        """Test that single-diamond upper bounds never drop below n squared."""
        value, rep = op_norm_upper(vn_family(2), budget=8, seed=0)
        assert rep.is_single_diamond
        assert value >= 4.0 - 1e-9

    def test_pop_upper_below_op_upper(self):
        """Test that the pop search never ends above the single-diamond search."""
        v = vn_family(2)
        pop_value, _ = pop_upper(v, budget=8, seed=0)
        op_value, _ = op_norm_upper(v, budget=8, seed=0)
        assert 2.0 - 1e-9 <= pop_value <= op_value + 1e-9

    def test_sampled_rewritings_are_sound(self):
        """Test that random rewritings of the witness never beat n squared."""
        costs = sample_single_diamonds(vn_witness(2), 3, seed=0, budget=8)
        assert len(costs) == 3
        assert min(costs) >= 4.0 - 1e-9

    def test_padded_factorization_represents_the_element(self):
        """Test that padding both factors with random blocks leaves the element unchanged."""
        rng = np.random.default_rng(5)
        term = vn_witness(3).terms[0]
        padded = pad_single_diamond(term, rng)
        assert padded.u.level > term.u.level
        assert padded.v.level > term.v.level
        rep = PopRepresentation(terms=(padded,), origin="padded")
        residual, cost = recheck_single_diamond(rep, vn_family(3))
        assert residual < 1e-10
        assert cost >= 9.0 - 1e-9

    def test_solved_factorization_of_a_scalar_diamond(self):
        """Test that the least-squares fit reproduces V_1 at cost one."""
        rep = solve_single_diamond(vn_family(1), 1, 1, np.random.default_rng(0))
        assert rep is not None
        residual, cost = recheck_single_diamond(rep, vn_family(1))
        assert residual < 1e-9
        assert cost == pytest.approx(1.0, rel=1e-9)

    def test_solved_factorizations_never_beat_n_squared(self):
        """Test that every independently fitted representation of V_2 costs at least 4."""
        solved = solve_single_diamonds(vn_family(2), 2, 2, count=3, seed=0, budget=8)
        assert len(solved) <= 3
        for cost, rep in solved:
            residual, _ = recheck_single_diamond(rep, vn_family(2))
            assert residual < 1e-8
            assert cost >= 4.0 - 1e-6

    def test_zero(self):
        """Test that the zero tensor has norm zero."""
        ambient = pop_tensor(schatten_line(1.0), schatten_line(1.0))
        cert = pop_certificate(AmpElem.zero(ambient, 2))
        assert (cert.lower, cert.upper) == (0.0, 0.0)

    def test_ambient_checked(self):
        """Test that non-pop ambients are rejected."""
        with pytest.raises(DomainMismatchError):
            pop_certificate(AmpElem.elementary([[1.0]], [1.0], schatten_line(1.0)))
