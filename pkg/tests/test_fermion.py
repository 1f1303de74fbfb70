"""Tests for semi-infinite wedges, bosonization and the cut to N particles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cs_fermionic.algebra import PPoly, XPoly
from cs_fermionic.errors import PartitionTooLong
from cs_fermionic.fermion import (
    FiniteWedge,
    WedgeCombination,
    a_n_apply,
    basis_wedges,
    bf_to_boson,
    bf_to_boson_combination,
    boson_apply_a,
    check_prop6,
    finite_wedge_to_poly,
    from_maya,
    maya_set,
    omega_N,
    omega_N_combination,
    pi_tilde_N,
    psi_k_apply,
    psi_star_k_apply,
    shift_Q,
)
from cs_fermionic.symfun import (
    Partition,
    homogeneous_in_p,
    partitions_up_to,
    schur_in_x,
    vandermonde,
)

vac = WedgeCombination.vacuum


def ket(parts, charge=0):
    return WedgeCombination.basis(Partition(tuple(parts)), charge)


WEDGES = [vac(0), vac(-1), ket((1,)), ket((2, 1), 1), ket((1, 1, 1), -2)]

small_wedges = st.builds(
    WedgeCombination.basis,
    st.sampled_from(partitions_up_to(3)),
    st.integers(-2, 2),
)


class TestMaya:
    """Test Maya sets of partitions."""

    def test_maya_set(self):
        """Elements are lambda_i + c - i in decreasing order."""
        assert maya_set(Partition((2, 1)), 0, 3) == [1, -1, -3]
        assert maya_set(Partition(), 2, 2) == [1, 0]

    def test_from_maya(self):
        """The partition is recovered from a prefix."""
        assert from_maya([1, -1, -3], 0) == Partition((2, 1))
        assert from_maya([0, -1], 1) == Partition()


class TestWedgeCombination:
    """Test linear combinations of basis wedges."""

    def test_arithmetic(self):
        """Cancelling terms leave zero."""
        w = ket((1,)) * 2 - vac()
        assert (w - w).is_zero()
        assert w.pairing(ket((1,))) == 2
        assert w.pairing(vac()) == -1

    def test_str(self):
        """Kets print as |partition,charge>."""
        assert str(ket((1,)) * 2 - vac()) == "-|0,0> + 2*|1,0>"

    def test_basis_wedges(self):
        """Every basis wedge up to a weight in each charge."""
        assert len(basis_wedges(2, range(0, 2))) == 8


class TestClifford:
    """Test the fermion operators."""

    def test_psi_on_vacuum(self):
        """psi removes the top of the sea; psi* fills the next level."""
        assert psi_k_apply(vac(0), -1) == vac(-1)
        assert psi_k_apply(vac(0), 0).is_zero()
        assert psi_star_k_apply(vac(0), 0) == vac(1)
        assert psi_star_k_apply(vac(0), -1).is_zero()

    def test_sign_from_larger_factors(self):
        """Removing a deeper element picks up a sign."""
        assert psi_k_apply(ket((1,)), -2) == ket((2,), -1) * -1

    @settings(max_examples=40, deadline=None)
    @given(small_wedges, st.integers(-4, 4), st.integers(-4, 4))
    def test_anticommutators(self, w, i, j):
        """{psi_i, psi*_j} = delta_ij and psi, psi* anticommute among themselves."""
        mixed = psi_k_apply(psi_star_k_apply(w, j), i) + psi_star_k_apply(
            psi_k_apply(w, i), j
        )
        assert mixed == (w if i == j else WedgeCombination())
        plain = psi_k_apply(psi_k_apply(w, j), i)
        assert (plain + psi_k_apply(psi_k_apply(w, i), j)).is_zero()
        star = psi_star_k_apply(psi_star_k_apply(w, j), i)
        assert (star + psi_star_k_apply(psi_star_k_apply(w, i), j)).is_zero()

    @pytest.mark.parametrize("w", WEDGES, ids=str)
    @pytest.mark.parametrize("i", range(-4, 4))
    def test_charge_shift_conjugation(self, w, i):
        """e^Q psi_i e^-Q = psi_(i+1)."""
        conjugated = shift_Q(psi_k_apply(shift_Q(w, -1), i), 1)
        assert conjugated == psi_k_apply(w, i + 1)

    def test_shift_q_moves_charge(self):
        """e^(sQ) keeps the partition and moves the charge."""
        assert shift_Q(ket((2,), 1), -3) == ket((2,), -2)


class TestBosonization:
    """Test the Heisenberg operators and the boson-fermion map."""

    def test_creation_on_vacuum(self):
        """a_-1|0> = |1> and a_-2|0> = |2> - |1,1>."""
        assert a_n_apply(vac(), -1) == ket((1,))
        assert a_n_apply(vac(), -2) == ket((2,)) - ket((1, 1))

    def test_annihilation_on_vacuum(self):
        """a_n|0> = 0 for n > 0."""
        for n in range(1, 4):
            assert a_n_apply(vac(), n).is_zero()

    def test_a0_is_charge(self):
        """a_0 multiplies by the charge."""
        assert a_n_apply(ket((1,), 3), 0) == ket((1,), 3) * 3

    @pytest.mark.parametrize("w", WEDGES, ids=str)
    @pytest.mark.parametrize("k", range(-3, 4))
    @pytest.mark.parametrize("m", range(-3, 4))
    def test_heisenberg_relations(self, w, k, m):
        """[a_k, a_m] = k delta_(k+m,0)."""
        bracket = a_n_apply(a_n_apply(w, m), k) - a_n_apply(a_n_apply(w, k), m)
        assert bracket == (w * k if k + m == 0 else WedgeCombination())

    def test_bf_to_boson(self):
        """Basis wedges map to Schur functions in their charge sector."""
        assert bf_to_boson(Partition((2,)), -1) == (-1, homogeneous_in_p(2))
        assert bf_to_boson_combination(a_n_apply(vac(), -2)) == {0: PPoly.p(2)}
        assert bf_to_boson_combination(ket((1,)) - ket((1,))) == {}

    def test_boson_apply_a(self):
        """a_-n = p_n, a_n = n d/dp_n, a_0 = charge."""
        state = PPoly.p(2) * PPoly.p(1)
        assert boson_apply_a(-3, 0, state) == PPoly.p(3) * state
        assert boson_apply_a(2, 0, state) == PPoly.p(1) * 2
        assert boson_apply_a(0, 4, state) == state * 4

    @pytest.mark.parametrize("w", WEDGES, ids=str)
    @pytest.mark.parametrize("n", range(-3, 4))
    def test_dictionary(self, w, n):
        """The boson-fermion map intertwines a_n with its bosonic form."""
        image = bf_to_boson_combination(a_n_apply(w, n))
        expected = {
            c: boson_apply_a(n, c, state)
            for c, state in bf_to_boson_combination(w).items()
        }
        assert image == {c: s for c, s in expected.items() if not s.is_zero()}


class TestCut:
    """Test cutting wedges to N factors."""

    def test_finite_wedge_validation(self):
        """Exponents must strictly decrease."""
        with pytest.raises(ValueError, match="strictly decrease"):
            FiniteWedge((0, 1))
        with pytest.raises(ValueError, match="strictly decrease"):
            FiniteWedge((1, 1))

    def test_omega_N(self):
        """The first N factors of a charge-N wedge."""
        assert omega_N(Partition((1,)), 2, 2) == FiniteWedge((2, 0))
        assert omega_N(Partition((1,)), 1, 2) is None

    def test_omega_N_partition_too_long(self):
        """A partition longer than N cannot be cut."""
        with pytest.raises(PartitionTooLong):
            omega_N(Partition((1, 1, 1)), 2, 2)

    def test_laurent_wedge(self):
        """Negative exponents give a Laurent alternant."""
        poly = finite_wedge_to_poly(FiniteWedge((0, -1)))
        assert poly == XPoly(2, {(0, -1): 1, (-1, 0): -1})

    def test_cut_is_schur_times_vandermonde(self):
        """Cutting |lambda, N> gives s_lambda times the Vandermonde."""
        lam = Partition((2, 1))
        poly = finite_wedge_to_poly(omega_N(lam, 3, 3))
        assert poly == schur_in_x(lam, 3) * vandermonde(3)

    def test_omega_N_combination(self):
        """Other charges are dropped from a combination."""
        w = ket((1,), 2) * 3 + ket((1,), 1)
        expected = finite_wedge_to_poly(FiniteWedge((2, 0))) * 3
        assert omega_N_combination(w, 2) == expected

    def test_pi_tilde_other_sector(self):
        """Only the charge-N sector survives evaluation."""
        assert pi_tilde_N(1, PPoly.p(1), 2).is_zero()

    @pytest.mark.parametrize("lam", partitions_up_to(5), ids=str)
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cut_commutes_with_bosonization(self, lam, n):
        """Cutting a wedge equals evaluating its bosonic image."""
        if lam.length > n:
            pytest.skip("partition longer than N")
        assert check_prop6(lam, n, n)

    @pytest.mark.parametrize("charge", [1, 3])
    def test_other_charges_vanish_on_both_sides(self, charge):
        """Charges other than N give zero on both sides."""
        assert check_prop6(Partition((1,)), charge, 2)
