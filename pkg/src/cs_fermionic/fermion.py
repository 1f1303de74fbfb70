"""Semi-infinite wedges, the Clifford action, bosonization and the cut to N.

A basis wedge |lambda, c> is z^(l_1+c-1) ^ z^(l_2+c-2) ^ ...; its Maya set
is {l_i + c - i}. Only a finite prefix is ever materialised: beyond the
partition the set continues with consecutive integers.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .algebra import ZERO, BetaScalar, PPoly, ScalarLike, XPoly, format_sum
from .fock import pi_N_closed
from .logging_config import get_logger
from .symfun import Partition, alternant, partitions_up_to, schur_in_p

logger = get_logger(__name__)

BasisKey = tuple[int, Partition]
# (sign, partition, charge) after moving one fermion
Moved = tuple[int, Partition, int]


def maya_set(lam: Partition, charge: int, length: int) -> list[int]:
    """The first ``length`` elements of the Maya set, in decreasing order."""
    padded = lam.parts + (0,) * max(length - lam.length, 0)
    return [padded[i] + charge - (i + 1) for i in range(max(length, lam.length))]


def from_maya(elements: list[int], charge: int) -> Partition:
    """Partition of a decreasing Maya prefix whose tail is consecutive below."""
    parts = [s - charge + i for i, s in enumerate(elements, start=1)]
    while parts and parts[-1] == 0:
        parts.pop()
    return Partition(tuple(parts))


class WedgeCombination:
    """Finite linear combination of basis wedges |lambda, c>."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[BasisKey, ScalarLike]] = None):
        self._terms: dict[BasisKey, BetaScalar] = {}
        for key, coeff in (terms or {}).items():
            total = self._terms.get(key, ZERO) + BetaScalar.coerce(coeff)
            if total.is_zero():
                self._terms.pop(key, None)
            else:
                self._terms[key] = total

    @classmethod
    def basis(cls, lam: Partition, charge: int) -> "WedgeCombination":
        return cls({(charge, lam): 1})

    @classmethod
    def vacuum(cls, charge: int = 0) -> "WedgeCombination":
        return cls.basis(Partition(), charge)

    def items(self) -> list[tuple[BasisKey, BetaScalar]]:
        return sorted(self._terms.items(), key=lambda kv: (kv[0][0], kv[0][1].parts))

    def is_zero(self) -> bool:
        return not self._terms

    def __iter__(self) -> Iterator[tuple[BasisKey, BetaScalar]]:
        return iter(self.items())

    def __add__(self, other: "WedgeCombination") -> "WedgeCombination":
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, ZERO) + coeff
        return WedgeCombination(terms)

    def __neg__(self) -> "WedgeCombination":
        return WedgeCombination({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "WedgeCombination") -> "WedgeCombination":
        return self + (-other)

    def __mul__(self, scalar: ScalarLike) -> "WedgeCombination":
        return WedgeCombination({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WedgeCombination):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def pairing(self, other: "WedgeCombination") -> BetaScalar:
        """<self|other> with the basis orthonormal."""
        total = ZERO
        for key, coeff in self._terms.items():
            if key in other._terms:
                total = total + coeff * other._terms[key]
        return total

    def __str__(self) -> str:
        return format_sum(
            (coeff, [f"|{lam},{c}>"]) for (c, lam), coeff in self.items()
        )

    def __repr__(self) -> str:
        return f"WedgeCombination({self})"


def _prefix_length(lam: Partition, charge: int, index: int) -> int:
    """Prefix holding every Maya element >= index, plus one tail element."""
    return max(lam.length, charge - index) + 1


def _remove(lam: Partition, charge: int, n: int) -> Optional[Moved]:
    elements = maya_set(lam, charge, _prefix_length(lam, charge, n))
    if n not in elements:
        return None
    position = elements.index(n)
    del elements[position]
    return (-1) ** position, from_maya(elements, charge - 1), charge - 1


def _insert(lam: Partition, charge: int, n: int) -> Optional[Moved]:
    elements = maya_set(lam, charge, _prefix_length(lam, charge, n))
    if n in elements:
        return None
    position = sum(1 for s in elements if s > n)
    elements.insert(position, n)
    return (-1) ** position, from_maya(elements, charge + 1), charge + 1


def psi_k_apply(w: WedgeCombination, n: int) -> WedgeCombination:
    """psi_n: remove z^n, signed by the number of larger factors in front of it."""
    terms: dict[BasisKey, BetaScalar] = {}
    for (charge, lam), coeff in w.items():
        moved = _remove(lam, charge, n)
        if moved is None:
            continue
        sign, new_lam, new_charge = moved
        key = (new_charge, new_lam)
        terms[key] = terms.get(key, ZERO) + coeff * sign
    return WedgeCombination(terms)


def psi_star_k_apply(w: WedgeCombination, n: int) -> WedgeCombination:
    """psi*_n = z^n wedged in front, then moved to its sorted position."""
    terms: dict[BasisKey, BetaScalar] = {}
    for (charge, lam), coeff in w.items():
        moved = _insert(lam, charge, n)
        if moved is None:
            continue
        sign, new_lam, new_charge = moved
        key = (new_charge, new_lam)
        terms[key] = terms.get(key, ZERO) + coeff * sign
    return WedgeCombination(terms)


def a_n_apply(w: WedgeCombination, n: int) -> WedgeCombination:
    """Bosonization a_n = sum_j :psi*_j psi_(j+n):; a_0 is the charge."""
    if n == 0:
        terms: dict[BasisKey, BetaScalar] = {}
        for (charge, lam), coeff in w.items():
            terms[(charge, lam)] = coeff * charge
        return WedgeCombination(terms)
    result = WedgeCombination()
    for (charge, lam), coeff in w.items():
        basis = WedgeCombination.basis(lam, charge)
        # deep in the tail both indices are occupied and the term vanishes
        for s in maya_set(lam, charge, lam.length + abs(n) + 1):
            moved = psi_star_k_apply(psi_k_apply(basis, s), s - n)
            result = result + moved * coeff
    return result


def shift_Q(w: WedgeCombination, s: int) -> WedgeCombination:
    """e^(sQ): |lambda, c> -> |lambda, c + s>."""
    return WedgeCombination({(c + s, lam): coeff for (c, lam), coeff in w.items()})


@dataclass(frozen=True)
class FiniteWedge:
    """z^(k_1) ^ ... ^ z^(k_N) with k_1 > k_2 > ... > k_N."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a <= b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError(
                f"Wedge exponents must strictly decrease: {self.exponents}"
            )


def omega_N(lam: Partition, charge: int, n: int) -> Optional[FiniteWedge]:
    """Keep the first N factors of a charge-N wedge; other charges map to zero (None).

    Raises:
        PartitionTooLong: If the partition has more than N parts
    """
    if charge != n:
        return None
    padded = lam.padded(n)
    return FiniteWedge(tuple(padded[j] + n - 1 - j for j in range(n)))


def finite_wedge_to_poly(fw: FiniteWedge) -> XPoly:
    """The alternant det(x_i^(k_j)); negative exponents give a Laurent polynomial."""
    return alternant(fw.exponents)


def omega_N_combination(w: WedgeCombination, n: int) -> XPoly:
    total = XPoly(n)
    for (charge, lam), coeff in w.items():
        fw = omega_N(lam, charge, n)
        if fw is not None:
            total = total + finite_wedge_to_poly(fw) * coeff
    return total


def bf_to_boson(lam: Partition, charge: int) -> tuple[int, PPoly]:
    """|lambda, c> -> s_lambda(p) in the charge-c sector."""
    return charge, schur_in_p(lam)


def bf_to_boson_combination(w: WedgeCombination) -> dict[int, PPoly]:
    sectors: dict[int, PPoly] = {}
    for (charge, lam), coeff in w.items():
        sectors[charge] = sectors.get(charge, PPoly()) + schur_in_p(lam) * coeff
    return {c: v for c, v in sectors.items() if not v.is_zero()}


def boson_apply_a(n: int, charge: int, state: PPoly) -> PPoly:
    """Bosonic side of the dictionary: a_-n = p_n, a_n = n d/dp_n, a_0 = charge."""
    if n == 0:
        return state * charge
    if n < 0:
        return PPoly.p(-n) * state
    return state.derivative(n) * n


def pi_tilde_N(charge: int, state: PPoly, n: int) -> XPoly:
    """Evaluation of a charged bosonic state; only the sector c = N survives."""
    if charge != n:
        return XPoly(n)
    return pi_N_closed(state, n)


def check_prop6(lam: Partition, charge: int, n: int) -> bool:
    """Cutting the wedge agrees with evaluating its bosonic image."""
    fw = omega_N(lam, charge, n)
    fermionic = finite_wedge_to_poly(fw) if fw is not None else XPoly(n)
    bosonic = pi_tilde_N(*bf_to_boson(lam, charge), n)
    if fermionic != bosonic:
        logger.debug(
            "Cut and bosonization disagree",
            extra={"extra_fields": {"partition": str(lam), "charge": charge, "n": n}},
        )
        return False
    return True


def basis_wedges(max_weight: int, charges: Iterable[int]) -> list[WedgeCombination]:
    """Every basis wedge with |lambda| <= max_weight in the given charges."""
    return [
        WedgeCombination.basis(lam, c)
        for c in charges
        for lam in partitions_up_to(max_weight)
    ]
