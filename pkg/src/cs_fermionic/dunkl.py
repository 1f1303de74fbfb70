"""Finite-N Dunkl operators and Hamiltonians, in x-coordinates and in power sums.

A MixedPoly h stands for the function
    (-1)^(i+1) * Vandermonde(x without x_i) * sum_m x_i^m h_m(p over x without x_i),
so the antisymmetrization of h over the N slots is the plain sum of these
signed representatives.
"""

from typing import Mapping, Optional

from .algebra import (
    BETA,
    PPoly,
    ScalarLike,
    XPoly,
    ZSeries,
    series_residue,
    xpoly_divide_exact,
)
from .debug_utils import trace_kernel
from .errors import NotAntisymmetric
from .logging_config import get_logger
from .symfun import (
    complete_series,
    elementary_series,
    power_sums_substitute,
    reduce_p,
    symmetric_to_p,
    vandermonde,
)

logger = get_logger(__name__)


class MixedPoly:
    """Polynomial in a slot variable with PPoly coefficients.

    ``nvars`` is the number of variables the p's refer to.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[int, PPoly]] = None):
        self.nvars = nvars
        self._terms: dict[int, PPoly] = {}
        for power, coeff in (terms or {}).items():
            if power < 0:
                raise ValueError(f"Negative slot power {power}")
            if coeff.is_zero():
                continue
            if power in self._terms:
                coeff = self._terms[power] + coeff
            self._terms[power] = coeff

    @classmethod
    def slot_power(
        cls, power: int, nvars: int, coeff: Optional[PPoly] = None
    ) -> "MixedPoly":
        return cls(nvars, {power: coeff if coeff is not None else PPoly.const(1)})

    def items(self) -> list[tuple[int, PPoly]]:
        return sorted(self._terms.items())

    def coefficient(self, power: int) -> PPoly:
        return self._terms.get(power, PPoly())

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max(self._terms, default=0)

    def reduced(self) -> "MixedPoly":
        """Coefficients in normal form over ``nvars`` variables.

        Equal functions have equal reduced forms.
        """
        return MixedPoly(
            self.nvars, {p: reduce_p(c, self.nvars) for p, c in self._terms.items()}
        )

    def _check(self, other: "MixedPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"Variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "MixedPoly") -> "MixedPoly":
        self._check(other)
        terms = dict(self._terms)
        for power, coeff in other._terms.items():
            terms[power] = terms[power] + coeff if power in terms else coeff
        kept = {p: c for p, c in terms.items() if not c.is_zero()}
        return MixedPoly(self.nvars, kept)

    def __neg__(self) -> "MixedPoly":
        return MixedPoly(self.nvars, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "MixedPoly") -> "MixedPoly":
        return self + (-other)

    def __mul__(self, other: ScalarLike) -> "MixedPoly":
        return MixedPoly(self.nvars, {p: c * other for p, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"x^{p}*({c})" for p, c in self.items())

    def __repr__(self) -> str:
        return f"MixedPoly({self.nvars}, {self})"


def _check_pair(i: int, j: int, n: int) -> None:
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError(f"Invalid variable pair ({i}, {j}) for N={n}")


def exchange(f: XPoly, i: int, j: int) -> XPoly:
    """K_ij: swap x_i and x_j."""
    _check_pair(i, j, f.nvars)
    return f.swap(i, j)


def dunkl(f: XPoly, i: int, n: int) -> XPoly:
    """D_i f = x_i d_i f + b * sum_{j != i} x_i (f - K_ij f) / (x_i - x_j)."""
    if f.nvars != n:
        raise ValueError(f"Expected {n} variables, got {f.nvars}")
    x_i = XPoly.var(i, n)
    exchange_part = XPoly(n)
    for j in range(1, n + 1):
        if j != i:
            exchange_part = exchange_part + f.divided_difference(i, j)
    return f.partial_euler(i) + x_i * exchange_part * BETA


def dunkl_power(f: XPoly, i: int, n: int, k: int) -> XPoly:
    for _ in range(k):
        f = dunkl(f, i, n)
    return f


def _require_antisymmetric(g: XPoly, what: str) -> None:
    if not g.is_antisymmetric():
        logger.error(
            f"{what} is not antisymmetric", extra={"extra_fields": {"poly": str(g)}}
        )
        raise NotAntisymmetric(f"{what} is not antisymmetric: {g}")


def hbar_k(g: XPoly, k: int, n: int) -> XPoly:
    """sum_i D_i^k restricted to antisymmetric polynomials."""
    _require_antisymmetric(g, "Input")
    result = XPoly(n)
    for i in range(1, n + 1):
        result = result + dunkl_power(g, i, n, k)
    _require_antisymmetric(result, f"hbar_{k} output")
    return result


def _pair_term(f: XPoly, i: int, j: int, exchange_image: XPoly) -> XPoly:
    """[(x_i+x_j)(x_i-x_j)(E_i-E_j)f - 2 x_i x_j (f - exchange_image)] / (x_i-x_j)^2."""
    n = f.nvars
    x_i, x_j = XPoly.var(i, n), XPoly.var(j, n)
    numerator = (x_i + x_j) * (x_i - x_j) * (f.partial_euler(i) - f.partial_euler(j))
    numerator = numerator - x_i * x_j * (f - exchange_image) * 2
    return xpoly_divide_exact(numerator, (x_i - x_j) ** 2)


def _kinetic(f: XPoly, n: int) -> XPoly:
    result = XPoly(n)
    for i in range(1, n + 1):
        result = result + f.partial_euler(i).partial_euler(i)
    return result


def hamiltonian_full(f: XPoly, n: int) -> XPoly:
    """The CS Hamiltonian in exponential variables, with exchange operators."""
    result = _kinetic(f, n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            result = result + _pair_term(f, i, j, f.swap(i, j)) * BETA
    return result


def hamiltonian_antisym(g: XPoly, n: int) -> XPoly:
    """The Hamiltonian on antisymmetric polynomials, where K_ij g = -g."""
    _require_antisymmetric(g, "Input")
    result = _kinetic(g, n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            result = result + _pair_term(g, i, j, -g) * BETA
    return result


def hamiltonian_eq5(g: XPoly, n: int) -> XPoly:
    """hbar_2 - 2b(N-1) hbar_1 + b^2 N (N-1)^2 applied to g."""
    shift = BETA * (2 * (n - 1))
    constant = BETA * BETA * (n * (n - 1) ** 2)
    return hbar_k(g, 2, n) - hbar_k(g, 1, n) * shift + g * constant


def _substitute_over(f: PPoly, n: int, positions: list[int]) -> XPoly:
    """Power-sum substitution into the listed variables of an n-variable ring."""
    if not positions:
        return XPoly.const(f.vacuum_value(), n)
    return power_sums_substitute(f, len(positions)).embed(n, positions)


def mixed_to_x(h: MixedPoly, n: int, i: int) -> XPoly:
    """Signed slot representative (-1)^(i+1) Vandermonde(x without x_i) h(x_i)."""
    if h.nvars != n - 1:
        raise ValueError(f"Mixed polynomial over {h.nvars} variables used with N={n}")
    others = [j for j in range(1, n + 1) if j != i]
    delta = vandermonde(n - 1).embed(n, others) if others else XPoly.const(1, n)
    total = XPoly(n)
    for power, coeff in h.items():
        exps = [0] * n
        exps[i - 1] = power
        total = total + XPoly.monomial(exps) * _substitute_over(coeff, n, others)
    return total * delta * (-1) ** (i + 1)


def x_to_mixed(g: XPoly, n: int, i: int) -> MixedPoly:
    """Inverse of mixed_to_x for g antisymmetric in the variables other than x_i."""
    others_count = n - 1
    terms: dict[int, PPoly] = {}
    for power, coeff in g.collect(i).items():
        coeff = coeff * (-1) ** (i + 1)
        if others_count == 0:
            ((_, scalar),) = coeff.items()
            terms[power] = PPoly.const(scalar)
            continue
        symmetric = xpoly_divide_exact(coeff, vandermonde(others_count))
        terms[power] = symmetric_to_p(symmetric, others_count)
    return MixedPoly(others_count, terms)


def direct_antisymmetrize(h: MixedPoly, n: int) -> XPoly:
    """Sum of the signed slot representatives over all N slots."""
    total = XPoly(n)
    for i in range(1, n + 1):
        total = total + mixed_to_x(h, n, i)
    return total


def iota_embed(f: PPoly, n: int) -> MixedPoly:
    """Re-express f (times the Vandermonde) through one slot: V_-(z) V_+(z) f."""
    if f.has_p0():
        raise ValueError("Substitute p_0 before embedding a finite-N state")
    shifted = f.power_shift(+1)
    v_minus = elementary_series(n - 1)
    terms: dict[int, PPoly] = {}
    for t, coeff in shifted.items():
        for s, e in v_minus.items():
            terms[t + s] = terms[t + s] + coeff * e if t + s in terms else coeff * e
    return MixedPoly(n - 1, terms).reduced()


def antisymmetrize_EN(h: MixedPoly, n: int) -> PPoly:
    """Residue form of the antisymmetrization: res_z V'_-(z) V'_+(z) h(z)."""
    if h.nvars != n - 1:
        raise ValueError(f"Mixed polynomial over {h.nvars} variables used with N={n}")
    if h.is_zero():
        return PPoly()
    integrand: dict[int, PPoly] = {}
    for power, coeff in h.items():
        for t, piece in coeff.power_shift(-1).items():
            e = power + t
            integrand[e] = integrand[e] + piece if e in integrand else piece
    series: ZSeries[PPoly] = ZSeries(integrand)
    top = series.top
    if top is None:
        return PPoly()
    depth = max(top - n + 1, 0)
    return series_residue(series * complete_series(n, depth))


def dunkl_p(h: MixedPoly, n: int) -> MixedPoly:
    """The Dunkl operator of the slot particle acting on a mixed polynomial."""
    if h.nvars != n - 1:
        raise ValueError(f"Mixed polynomial over {h.nvars} variables used with N={n}")
    weighted = {power: coeff * power for power, coeff in h.items() if power}
    euler = MixedPoly(n - 1, weighted)
    if n < 2:
        return euler.reduced()

    # A(x, z) = V_-(z) V_+(z) h(x), with p's over the remaining N-2 variables
    v_minus = elementary_series(n - 2)
    two_var: dict[tuple[int, int], PPoly] = {}
    for power, coeff in h.items():
        for t, piece in coeff.power_shift(+1).items():
            for s, e in v_minus.items():
                key = (power, t + s)
                two_var[key] = two_var[key] + piece * e if key in two_var else piece * e

    # x (A(x,z) - A(z,x)) / (x - z), monomial by monomial
    quotient: dict[int, dict[int, PPoly]] = {}
    for (a, b), coeff in two_var.items():
        if a == b:
            continue
        sign = 1 if a > b else -1
        lo, hi = min(a, b), max(a, b)
        for t in range(hi - lo):
            x_exp, z_exp = lo + t + 1, hi - 1 - t
            bucket = quotient.setdefault(x_exp, {})
            piece = coeff * sign
            bucket[z_exp] = bucket[z_exp] + piece if z_exp in bucket else piece

    exchange_part: dict[int, PPoly] = {}
    for x_exp, z_terms in quotient.items():
        value = antisymmetrize_EN(MixedPoly(n - 2, z_terms), n - 1)
        if not value.is_zero():
            exchange_part[x_exp] = value * BETA
    return (euler + MixedPoly(n - 1, exchange_part)).reduced()


def dunkl_p_power(h: MixedPoly, n: int, k: int) -> MixedPoly:
    for _ in range(k):
        h = dunkl_p(h, n)
    return h


@trace_kernel
def hk_finite_p(k: int, n: int, f: PPoly) -> PPoly:
    """H_k^(N) on a power-sum state: antisymmetrize(D^k iota(f)), in normal form."""
    return reduce_p(antisymmetrize_EN(dunkl_p_power(iota_embed(f, n), n, k), n), n)
