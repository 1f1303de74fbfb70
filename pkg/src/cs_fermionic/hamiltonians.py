"""Closed-form Hamiltonians as operators in the Heisenberg generators.

The infinite sums over indices are cut at ``grade``: the resulting operator
agrees with the full one on every state whose grade does not exceed it.
"""

from enum import Enum
from fractions import Fraction
from typing import Union

from .algebra import BETA, ONE, BetaScalar
from .logging_config import get_logger
from .pdiff import PDiffOp

logger = get_logger(__name__)

Count = Union[int, BetaScalar]


class CorrectionVariant(str, Enum):
    """Two readings of the projective correction for the second Hamiltonian."""

    AS_PRINTED = "as-printed"
    P0_SUBTRACTION = "p0-subtraction"


def _check_k(k: int, supported: tuple[int, ...]) -> None:
    if k not in supported:
        raise ValueError(f"No closed form for k={k}; supported: {supported}")


def euler_operator(grade: int) -> PDiffOp:
    """sum_n n p_n d_n, the grading operator."""
    return PDiffOp({((n,), (n,)): n for n in range(1, grade + 1)})


def weighted_euler(grade: int) -> PDiffOp:
    """sum_n n^2 p_n d_n."""
    return PDiffOp({((n,), (n,)): n * n for n in range(1, grade + 1)})


def cut_operator(grade: int) -> PDiffOp:
    """sum_{n,k>0} n k p_{n+k} d_n d_k over ordered pairs."""
    terms: dict = {}
    for n in range(1, grade):
        for k in range(1, grade - n + 1):
            key = ((n + k,), (n, k))
            terms[key] = terms.get(key, 0) + n * k
    return PDiffOp(terms)


def join_operator(grade: int) -> PDiffOp:
    """sum_{n,k>0} (n+k) p_n p_k d_{n+k} over ordered pairs."""
    terms: dict = {}
    for n in range(1, grade):
        for k in range(1, grade - n + 1):
            key = ((n, k), (n + k,))
            terms[key] = terms.get(key, 0) + n + k
    return PDiffOp(terms)


def _cubic_constant(count: PDiffOp) -> PDiffOp:
    """(2c^3-3c^2+c)/6 + b(7c^3-12c^2+5c)/6 + b^2(c^3-2c^2+c) for a central c."""
    c2 = count * count
    c3 = c2 * count
    plain = (c3 * 2 - c2 * 3 + count) * Fraction(1, 6)
    linear = (c3 * 7 - c2 * 12 + count * 5) * (BETA * Fraction(1, 6))
    quadratic = (c3 - c2 * 2 + count) * (BETA * BETA)
    return plain + linear + quadratic


def _finite_count(n: Count) -> PDiffOp:
    return PDiffOp.scalar(BetaScalar.coerce(n))


def hk_explicit_finite(k: int, n: Count, grade: int) -> PDiffOp:
    """H_k^(N) for k <= 2 with integer or formal N."""
    _check_k(k, (0, 1, 2))
    count = _finite_count(n)
    if k == 0:
        return count
    one_plus_2b = ONE + BETA * 2
    if k == 1:
        pairs = (count * count - count) * (one_plus_2b * Fraction(1, 2))
        return euler_operator(grade) + pairs
    euler = euler_operator(grade)
    return (
        cut_operator(grade)
        + join_operator(grade) * (ONE + BETA)
        - weighted_euler(grade) * BETA
        - euler * one_plus_2b
        + count * euler * (BETA * 3 + 2)
        + _cubic_constant(count)
    )


def hk_explicit_limit(k: int, grade: int) -> PDiffOp:
    """The limit Hamiltonians H_0, H_1, H_2 with p_0 a free generator."""
    _check_k(k, (0, 1, 2))
    p0 = PDiffOp.p(0)
    if k == 0:
        return p0
    one_plus_2b = ONE + BETA * 2
    euler = euler_operator(grade)
    if k == 1:
        return euler + (p0 * p0 - p0) * (one_plus_2b * Fraction(1, 2))
    # the n=0 and k=0 rows of the join sum each give p_0 * euler
    return (
        cut_operator(grade)
        + (join_operator(grade) + p0 * euler * 2) * (ONE + BETA)
        - weighted_euler(grade) * BETA
        - euler * one_plus_2b
        + p0 * euler * BETA
        + _cubic_constant(p0)
    )


def h_limit(grade: int) -> PDiffOp:
    """H = H_2 - 2b(p_0-1) H_1 + b^2 p_0 (p_0-1)^2."""
    p0 = PDiffOp.p(0)
    shifted = p0 - 1
    return (
        hk_explicit_limit(2, grade)
        - shifted * hk_explicit_limit(1, grade) * (BETA * 2)
        + p0 * shifted * shifted * (BETA * BETA)
    )


def h_limit_expanded(grade: int) -> PDiffOp:
    """The normal-ordered expansion of h_limit, written out term by term."""
    p0 = PDiffOp.p(0)
    euler = euler_operator(grade)
    p0_cubed = p0 * p0 * p0
    return (
        cut_operator(grade)
        + (join_operator(grade) + p0 * euler) * (ONE + BETA)
        - weighted_euler(grade) * BETA
        + (p0 - 1) * euler
        + (p0_cubed * 2 - p0 * p0 * 3 + p0) * Fraction(1, 6)
        + (p0_cubed - p0) * (BETA * Fraction(1, 6))
    )


def projective_correction(
    k: int, n: Count, variant: Union[CorrectionVariant, str], grade: int
) -> PDiffOp:
    """The corrected finite Hamiltonian meant to commute with removing a variable.

    ``p0-subtraction`` drops every term of the limit expression containing p_0
    (then restores p_0 -> N, which leaves no N at all). ``as-printed`` keeps the
    -3bN multiple of the corrected first Hamiltonian.
    """
    _check_k(k, (1, 2))
    variant = CorrectionVariant(variant)
    count = _finite_count(n)
    hpr_1 = hk_explicit_finite(1, n, grade) - (count * count - count) * (
        (ONE + BETA * 2) * Fraction(1, 2)
    )
    if k == 1:
        return hpr_1
    base = hk_explicit_finite(2, n, grade) - _cubic_constant(count)
    if variant is CorrectionVariant.AS_PRINTED:
        return base - count * hpr_1 * (BETA * 3)
    return base - count * euler_operator(grade) * (BETA * 3 + 2)


def bosonic_comparison(grade: int) -> PDiffOp:
    """H + H_1 with b -> b - 1 and p_0 = 0.

    Recorded for comparison with the bosonic limit; nothing here asserts it.
    """
    combined = h_limit(grade) + hk_explicit_limit(1, grade)
    shifted = combined.map_coefficients(lambda c: c.substitute_beta(BETA - 1))
    result = shifted.substitute_p0(0)
    logger.debug(
        "Bosonic comparison operator built",
        extra={"extra_fields": {"grade": grade, "terms": len(result)}},
    )
    return result

