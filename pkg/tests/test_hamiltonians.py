"""Tests for the closed-form Hamiltonians."""

import pytest

from cs_fermionic.algebra import BETA, BetaScalar, PPoly
from cs_fermionic.dunkl import hk_finite_p
from cs_fermionic.hamiltonians import (
    CorrectionVariant,
    bosonic_comparison,
    cut_operator,
    euler_operator,
    h_limit,
    h_limit_expanded,
    hk_explicit_finite,
    hk_explicit_limit,
    join_operator,
    projective_correction,
    weighted_euler,
)
from cs_fermionic.pdiff import (
    PDiffOp,
    apply_pdiffop,
    commutator_check,
    monomial_basis,
    restore_finite,
)
from cs_fermionic.symfun import alpha_N, lambda_N_project, reduce_p

p1, p2 = PPoly.p(1), PPoly.p(2)
N = BetaScalar.formal_n()


class TestBuildingBlocks:
    """Test the grading, cut and join operators."""

    def test_euler_measures_grade(self):
        """The Euler operator multiplies a monomial by its grade."""
        state = p2 * p1**3
        assert apply_pdiffop(euler_operator(5), state) == state * 5

    def test_weighted_euler(self):
        """Each p_n counts n^2."""
        assert apply_pdiffop(weighted_euler(3), p2 * p1) == p2 * p1 * 5

    def test_cut_and_join(self):
        """Cut merges two parts; join splits one."""
        assert apply_pdiffop(cut_operator(2), p1**2) == p2 * 2
        assert apply_pdiffop(join_operator(2), p2) == p1**2 * 2
        assert apply_pdiffop(cut_operator(2), p2).is_zero()


class TestFiniteHamiltonians:
    """Test H_k^(N) in closed form."""

    def test_unsupported_index(self):
        """Only k <= 2 has a closed form."""
        with pytest.raises(ValueError, match="No closed form for k=3"):
            hk_explicit_finite(3, 2, 4)

    def test_h0_is_particle_number(self):
        """H_0 is the scalar N."""
        assert hk_explicit_finite(0, 3, 4) == PDiffOp.scalar(3)

    def test_h1_on_vacuum(self):
        """The vacuum energy of H_1 is (1 + 2b) N (N - 1) / 2."""
        image = apply_pdiffop(hk_explicit_finite(1, 3, 2), PPoly.const(1))
        assert image == PPoly.const(3 + 6 * BETA)

    @pytest.mark.parametrize("state", monomial_basis(3), ids=str)
    @pytest.mark.parametrize("k", [1, 2])
    @pytest.mark.parametrize("n", [2, 3])
    def test_closed_form_matches_dunkl_route(self, state, k, n):
        """Closed forms agree with antisymmetrized Dunkl powers, also past grade N."""
        closed = apply_pdiffop(hk_explicit_finite(k, n, 3), state)
        assert reduce_p(closed, n) == hk_finite_p(k, n, state)

    def test_h1_on_p3_with_two_particles(self):
        """Two p-forms of one function compare equal after reduction."""
        closed = apply_pdiffop(hk_explicit_finite(1, 2, 3), PPoly.p(3))
        assert closed == PPoly.p(3) * (4 + 2 * BETA)
        assert hk_finite_p(1, 2, PPoly.p(3)) == reduce_p(closed, 2)


class TestLimitHamiltonians:
    """Test the limit Hamiltonians with p0 free."""

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_restore_finite_formal(self, k):
        """p0 -> N recovers the finite Hamiltonians."""
        restored = restore_finite(hk_explicit_limit(k, 4), N)
        assert restored == hk_explicit_finite(k, N, 4)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_restore_finite_integer(self, n):
        """p0 -> N for an integer N."""
        assert restore_finite(hk_explicit_limit(2, 3), n) == hk_explicit_finite(2, n, 3)

    def test_limit_hamiltonians_commute(self):
        """[H_1, H_2] vanishes up to grade 4 with p0 up to degree 2."""
        h1, h2 = hk_explicit_limit(1, 4), hk_explicit_limit(2, 4)
        assert commutator_check(h1, h2, 4, p0_degree=2)

    def test_h0_is_p0(self):
        """H_0 is multiplication by p0."""
        assert hk_explicit_limit(0, 3) == PDiffOp.p(0)

    def test_combination_expands(self):
        """The combined Hamiltonian equals its written-out expansion."""
        assert h_limit(5) == h_limit_expanded(5)

    def test_bosonic_comparison(self):
        """At p0 = 0 and b -> b - 1 only cut, join and the weighted Euler remain."""
        expected = (
            cut_operator(4)
            + join_operator(4) * BETA
            - weighted_euler(4) * BETA
            + weighted_euler(4)
        )
        comparison = bosonic_comparison(4)
        assert not comparison.has_p0()
        assert comparison == expected


class TestProjectiveCorrection:
    """Test the corrected Hamiltonians under removal of a variable."""

    def _consistent(self, variant, f, n):
        bigger = apply_pdiffop(projective_correction(2, n + 1, variant, 2), f)
        smaller = apply_pdiffop(projective_correction(2, n, variant, 2), f)
        return lambda_N_project(alpha_N(bigger, n + 1)) == alpha_N(smaller, n)

    def test_first_correction_is_euler(self):
        """Removing the vacuum energy of H_1 leaves the Euler operator."""
        assert projective_correction(1, 3, "as-printed", 4) == euler_operator(4)

    def test_p0_subtraction_is_n_free(self):
        """The p0-subtraction reading contains no N."""
        op = projective_correction(2, N, CorrectionVariant.P0_SUBTRACTION, 3)
        assert op == projective_correction(2, 7, CorrectionVariant.P0_SUBTRACTION, 3)

    @pytest.mark.parametrize("f", [p1, p2, p1**2 + p2], ids=str)
    @pytest.mark.parametrize("n", [2, 3])
    def test_only_p0_subtraction_is_consistent(self, f, n):
        """Only the p0-subtraction reading commutes with lambda_N."""
        assert self._consistent(CorrectionVariant.P0_SUBTRACTION, f, n)
        assert not self._consistent(CorrectionVariant.AS_PRINTED, f, n)

    def test_unknown_variant(self):
        """Variant names are validated."""
        with pytest.raises(ValueError):
            projective_correction(2, 3, "sideways", 3)
