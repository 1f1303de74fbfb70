"""Symmetric functions: partitions, Newton identities, alternants and alpha_N."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from threading import Lock
from typing import Iterator, Optional

from .algebra import BetaScalar, PPoly, XPoly, ZSeries, xpoly_divide_exact
from .errors import NonzeroRemainder, NotSymmetric, PartitionTooLong
from .logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(p <= 0 for p in self.parts):
            raise ValueError(f"Partition parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"Partition parts must be weakly decreasing: {self.parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse a literal such as "3,1,1"; an empty string is the empty partition."""
        text = text.strip()
        if not text or text == "0":
            return cls(())
        try:
            parts = tuple(int(piece) for piece in text.split(","))
        except ValueError as e:
            raise ValueError(f"Invalid partition literal {text!r}") from e
        return cls(parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def padded(self, n: int) -> tuple[int, ...]:
        if self.length > n:
            raise PartitionTooLong(
                f"Partition {self.parts} has more than {n} parts",
                {"partition": list(self.parts), "n": n},
            )
        return self.parts + (0,) * (n - self.length)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(
            tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))
        )

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts) or "0"


def partitions_of(n: int, max_part: Optional[int] = None) -> list[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [Partition(())]
    result: list[Partition] = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            result.append(Partition((first,) + rest.parts))
    return result


def partitions_up_to(n: int) -> list[Partition]:
    return [lam for k in range(n + 1) for lam in partitions_of(k)]


class NewtonCache:
    """Thread-safe memo of e_k and h_k in the power-sum basis."""

    def __init__(self) -> None:
        self.elementary: list[PPoly] = [PPoly.const(1)]
        self.homogeneous: list[PPoly] = [PPoly.const(1)]
        self.lock = Lock()

    def get_elementary(self, k: int) -> PPoly:
        with self.lock:
            while len(self.elementary) <= k:
                m = len(self.elementary)
                # m e_m = sum_{i=1..m} (-1)^(i-1) e_{m-i} p_i
                total = PPoly()
                for i in range(1, m + 1):
                    term = self.elementary[m - i] * PPoly.p(i)
                    total = total + term * (-1) ** (i - 1)
                self.elementary.append(total * Fraction(1, m))
            return self.elementary[k]

    def get_homogeneous(self, k: int) -> PPoly:
        with self.lock:
            while len(self.homogeneous) <= k:
                m = len(self.homogeneous)
                total = PPoly()
                for i in range(1, m + 1):
                    total = total + self.homogeneous[m - i] * PPoly.p(i)
                self.homogeneous.append(total * Fraction(1, m))
            return self.homogeneous[k]


_newton_cache = NewtonCache()


def elementary_in_p(k: int) -> PPoly:
    """e_k in terms of power sums; independent of the number of variables."""
    if k < 0:
        return PPoly()
    return _newton_cache.get_elementary(k)


def homogeneous_in_p(k: int) -> PPoly:
    """h_k in terms of power sums."""
    if k < 0:
        return PPoly()
    return _newton_cache.get_homogeneous(k)


@lru_cache(maxsize=None)
def power_sum_x(k: int, n: int) -> XPoly:
    """x_1^k + ... + x_n^k (p_0 is the count n)."""
    if k == 0:
        return XPoly.const(n, n)
    total = XPoly(n)
    for i in range(n):
        exps = [0] * n
        exps[i] = k
        total = total + XPoly.monomial(exps)
    return total


@lru_cache(maxsize=None)
def elementary_in_x(k: int, n: int) -> XPoly:
    """Direct monomial expansion of e_k(x_1..x_n)."""
    if k < 0 or k > n:
        return XPoly(n)
    terms = {}
    for subset in combinations(range(n), k):
        exps = [0] * n
        for i in subset:
            exps[i] = 1
        terms[tuple(exps)] = 1
    return XPoly(n, terms)


def power_sums_substitute(f: PPoly, n: int) -> XPoly:
    """Replace p_0 by n and p_k by the n-variable power sum."""
    if n < 1:
        raise ValueError(f"Need at least one variable, got {n}")
    result = XPoly(n)
    for mono, coeff in f.items():
        term = XPoly.const(coeff, n)
        for k in mono:
            term = term * power_sum_x(k, n)
        result = result + term
    return result


def permutations_with_sign(n: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (permutation, sign) pairs of range(n)."""
    for perm in permutations(range(n)):
        inversions = sum(
            1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]
        )
        yield perm, -1 if inversions % 2 else 1


def alternant(exponents: tuple[int, ...]) -> XPoly:
    """det(x_i^{k_j}) over len(exponents) variables."""
    n = len(exponents)
    terms: dict[tuple[int, ...], int] = {}
    for perm, sign in permutations_with_sign(n):
        key = tuple(exponents[perm[i]] for i in range(n))
        terms[key] = terms.get(key, 0) + sign
    return XPoly(n, terms)


@lru_cache(maxsize=None)
def vandermonde(n: int) -> XPoly:
    """prod_{i<j} (x_i - x_j)."""
    if n < 1:
        raise ValueError(f"Need at least one variable, got {n}")
    return alternant(tuple(range(n - 1, -1, -1)))


def schur_in_x(lam: Partition, n: int) -> XPoly:
    """Schur polynomial by the Weyl formula: alternant divided by the Vandermonde."""
    padded = lam.padded(n)
    exponents = tuple(padded[j] + n - 1 - j for j in range(n))
    return xpoly_divide_exact(alternant(exponents), vandermonde(n))


def alpha_N(f: PPoly, n: int) -> XPoly:
    """Canonical map to antisymmetric polynomials: Vandermonde times substitution."""
    return vandermonde(n) * power_sums_substitute(f, n)


def symmetric_to_p(g: XPoly, n: int) -> PPoly:
    """Express a symmetric polynomial through p_1..p_n.

    Rewrites g in elementary symmetric polynomials by leading-monomial
    elimination, then uses the Newton expressions for e_k.

    Raises:
        NotSymmetric: If g is not invariant under variable exchanges
    """
    if g.nvars != n:
        raise ValueError(f"Expected {n} variables, got {g.nvars}")
    if not g.is_symmetric():
        logger.debug("Rejecting non-symmetric input", extra={"extra_fields": {"n": n}})
        raise NotSymmetric(f"{g} is not symmetric in {n} variables")
    result = PPoly()
    remainder = g
    while not remainder.is_zero():
        exps, coeff = max(remainder.items(), key=lambda kv: kv[0])
        powers = [exps[k] - exps[k + 1] for k in range(n - 1)] + [exps[n - 1]]
        x_product = XPoly.const(coeff, n)
        p_product = PPoly.const(coeff)
        for k, power in enumerate(powers, start=1):
            if power:
                x_product = x_product * elementary_in_x(k, n) ** power
                p_product = p_product * elementary_in_p(k) ** power
        remainder = remainder - x_product
        result = result + p_product
    return result


def reduce_p(f: PPoly, n: int) -> PPoly:
    """Normal form of f as a function of n variables, written in p_1..p_n.

    Two p-polynomials agree on n variables iff their normal forms are equal.
    p_0 is read as n.
    """
    if n == 0:
        return PPoly.const(f.substitute_p0(0).vacuum_value())
    if f.max_index() <= n:
        return f.substitute_p0(n)
    return symmetric_to_p(power_sums_substitute(f, n), n)


def lambda_N_project(g: XPoly) -> XPoly:
    """Set the last variable to zero and divide by the product of the others.

    Raises:
        NonzeroRemainder: If the restriction is not divisible by x_1...x_N
    """
    n = g.nvars - 1
    terms: dict[tuple[int, ...], BetaScalar] = {}
    for exps, coeff in g.items():
        if exps[-1] != 0:
            continue
        head = exps[:-1]
        if any(e == 0 for e in head):
            raise NonzeroRemainder(
                f"Restriction of {g} is not divisible by x_1...x_{n}",
                {"monomial": list(exps)},
            )
        terms[tuple(e - 1 for e in head)] = coeff
    return XPoly(n, terms)


def schur_in_p(lam: Partition) -> PPoly:
    """s_lambda in the power-sum basis via Jacobi-Trudi, det(h_{lambda_i - i + j})."""
    n = lam.length
    if n == 0:
        return PPoly.const(1)
    total = PPoly()
    for perm, sign in permutations_with_sign(n):
        term = PPoly.const(sign)
        for i in range(n):
            term = term * homogeneous_in_p(lam.parts[i] - i + perm[i])
            if term.is_zero():
                break
        total = total + term
    return total


def lemma1_alternating_sum(k: int, n: int) -> XPoly:
    """sum_i (-1)^(i+1) x_i^k Vandermonde(x without x_i)."""
    total = XPoly(n)
    for i in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != i]
        rest = vandermonde(n - 1).embed(n, others) if n > 1 else XPoly.const(1, n)
        exps = [0] * n
        exps[i - 1] = k
        total = total + XPoly.monomial(exps) * rest * (-1) ** (i + 1)
    return total


def elementary_series(m: int) -> ZSeries[PPoly]:
    """prod_{j<=m}(z - x_j) = sum_k (-1)^k e_k z^(m-k), as an exact series."""
    return ZSeries({m - k: elementary_in_p(k) * (-1) ** k for k in range(m + 1)})


def complete_series(n: int, depth: int) -> ZSeries[PPoly]:
    """z^(-n) sum_{j<=depth} h_j z^(-j), exact down to z^(-n-depth)."""
    return ZSeries(
        {-n - j: homogeneous_in_p(j) for j in range(depth + 1)}, lo=-n - depth
    )
