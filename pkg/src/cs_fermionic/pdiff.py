"""Normal-ordered polynomial differential operators in the Fock generators."""

from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Union

from pydantic import BaseModel

from .algebra import (
    ZERO,
    BetaScalar,
    PKey,
    PPoly,
    ScalarLike,
    format_power,
    format_sum,
    pkey,
)
from .logging_config import get_logger, log_execution_time
from .symfun import partitions_of

logger = get_logger(__name__)

# (p-monomial including p_0 factors, derivative monomial with indices >= 1)
OpKey = tuple[PKey, PKey]
RawTerms = Mapping[tuple[Iterable[int], Iterable[int]], ScalarLike]


class PDiffOp:
    """Finite sum c * p^a * d^b with every derivative to the right.

    There are no d/dp_0 factors, so p_0 behaves like a central parameter.
    """

    __slots__ = ("_terms",)

    def __init__(
        self,
        terms: Optional[RawTerms] = None,
    ):
        self._terms: dict[OpKey, BetaScalar] = {}
        for (pmono, dmono), coeff in (terms or {}).items():
            dkey = pkey(dmono)
            if dkey and dkey[-1] < 1:
                raise ValueError("Derivatives with respect to p_0 are not allowed")
            key = (pkey(pmono), dkey)
            total = self._terms.get(key, ZERO) + BetaScalar.coerce(coeff)
            if total.is_zero():
                self._terms.pop(key, None)
            else:
                self._terms[key] = total

    @classmethod
    def _from_dict(cls, terms: Mapping[OpKey, BetaScalar]) -> "PDiffOp":
        op = cls()
        op._terms = {k: v for k, v in terms.items() if not v.is_zero()}
        return op

    @classmethod
    def scalar(cls, value: ScalarLike) -> "PDiffOp":
        return cls({((), ()): value})

    @classmethod
    def identity(cls) -> "PDiffOp":
        return cls.scalar(1)

    @classmethod
    def multiplication(cls, poly: PPoly) -> "PDiffOp":
        return cls._from_dict({(mono, ()): coeff for mono, coeff in poly.items()})

    @classmethod
    def p(cls, n: int) -> "PDiffOp":
        return cls({((n,), ()): 1})

    @classmethod
    def d(cls, n: int) -> "PDiffOp":
        return cls({((), (n,)): 1})

    def items(self) -> list[tuple[OpKey, BetaScalar]]:
        """Terms ordered by p_0 degree, graded p-monomial, then derivative monomial."""

        def order(kv: tuple[OpKey, BetaScalar]) -> tuple[Any, ...]:
            (pmono, dmono), _ = kv
            plain = tuple(n for n in pmono if n)
            return (pmono.count(0), sum(plain), plain, sum(dmono), dmono)

        return sorted(self._terms.items(), key=order, reverse=True)

    def coefficient(self, pmono: Iterable[int], dmono: Iterable[int]) -> BetaScalar:
        return self._terms.get((pkey(pmono), pkey(dmono)), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def _coerce(self, other: Any) -> Optional["PDiffOp"]:
        if isinstance(other, PDiffOp):
            return other
        if isinstance(other, PPoly):
            return PDiffOp.multiplication(other)
        if isinstance(other, (BetaScalar, int, Fraction)):
            return PDiffOp.scalar(other)
        return None

    def __add__(self, other: Any) -> "PDiffOp":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for key, coeff in rhs._terms.items():
            terms[key] = terms.get(key, ZERO) + coeff
        return PDiffOp._from_dict(terms)

    __radd__ = __add__

    def __neg__(self) -> "PDiffOp":
        return PDiffOp._from_dict({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Any) -> "PDiffOp":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "PDiffOp":
        return (-self) + other

    def __mul__(self, other: Any) -> "PDiffOp":
        """Operator composition (self after other); scalars scale."""
        if isinstance(other, (BetaScalar, int, Fraction)):
            scalar = BetaScalar.coerce(other)
            return PDiffOp._from_dict({k: c * scalar for k, c in self._terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return compose(self, rhs)

    def __rmul__(self, other: Any) -> "PDiffOp":
        if isinstance(other, (BetaScalar, int, Fraction)):
            return self * other
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return compose(lhs, self)

    def __pow__(self, exponent: int) -> "PDiffOp":
        result = PDiffOp.identity()
        for _ in range(exponent):
            result = compose(result, self)
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (BetaScalar, int, Fraction, PPoly)):
            other = self._coerce(other)
        if not isinstance(other, PDiffOp):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def map_coefficients(self, func: Any) -> "PDiffOp":
        return PDiffOp._from_dict({k: func(c) for k, c in self._terms.items()})

    def substitute_p0(self, value: ScalarLike) -> "PDiffOp":
        """Replace every p_0 factor by a number or scalar."""
        scalar = BetaScalar.coerce(value)
        terms: dict[OpKey, BetaScalar] = {}
        for (pmono, dmono), coeff in self._terms.items():
            zeros = pmono.count(0)
            key = (pmono[: len(pmono) - zeros], dmono)
            terms[key] = terms.get(key, ZERO) + coeff * scalar**zeros
        return PDiffOp._from_dict(terms)

    def has_p0(self) -> bool:
        return any(pmono and pmono[-1] == 0 for pmono, _ in self._terms)

    def __str__(self) -> str:
        def factors(key: OpKey) -> list[str]:
            pmono, dmono = key
            out: list[str] = []
            for symbol, mono in (("p", pmono), ("d", dmono)):
                counts: dict[int, int] = {}
                for n in mono:
                    counts[n] = counts.get(n, 0) + 1
                for n, m in sorted(counts.items()):
                    out.append(format_power(f"{symbol}{n}", m))
            return out

        return format_sum((coeff, factors(key)) for key, coeff in self.items())

    def __repr__(self) -> str:
        return f"PDiffOp({self})"


def _left_derivative(n: int, op: PDiffOp) -> dict[OpKey, BetaScalar]:
    """Normal-order d_n composed with op: d_n p^a d^b = (d_n p^a) d^b + p^a d^b d_n."""
    terms: dict[OpKey, BetaScalar] = {}
    for (pmono, dmono), coeff in op._terms.items():
        mult = pmono.count(n)
        if mult:
            pos = pmono.index(n)
            key = (pmono[:pos] + pmono[pos + 1 :], dmono)
            terms[key] = terms.get(key, ZERO) + coeff * mult
        key = (pmono, pkey(dmono + (n,)))
        terms[key] = terms.get(key, ZERO) + coeff
    return terms


def compose(a: PDiffOp, b: PDiffOp) -> PDiffOp:
    """Normal-ordered product a * b (apply b first)."""
    result: dict[OpKey, BetaScalar] = {}
    for (a_p, a_d), a_coeff in a._terms.items():
        current = b
        for n in a_d:
            current = PDiffOp._from_dict(_left_derivative(n, current))
        for (c_p, c_d), c_coeff in current._terms.items():
            key = (pkey(a_p + c_p), c_d)
            result[key] = result.get(key, ZERO) + a_coeff * c_coeff
    return PDiffOp._from_dict(result)


def commutator(a: PDiffOp, b: PDiffOp) -> PDiffOp:
    return compose(a, b) - compose(b, a)


def apply_pdiffop(op: PDiffOp, v: PPoly) -> PPoly:
    """Act on a Fock state: differentiate, then multiply."""
    result: dict[PKey, BetaScalar] = {}
    cache: dict[PKey, PPoly] = {}
    for (pmono, dmono), coeff in op._terms.items():
        derived = cache.get(dmono)
        if derived is None:
            derived = v
            for n in dmono:
                derived = derived.derivative(n)
                if derived.is_zero():
                    break
            cache[dmono] = derived
        for mono, c in derived.items():
            key = pkey(pmono + mono)
            result[key] = result.get(key, ZERO) + coeff * c
    return PPoly.from_dict(result)


def monomial_basis(grade: int, p0_degree: int = 0) -> list[PPoly]:
    """Monomials of grade <= grade times p_0^j, j <= p0_degree."""
    basis: list[PPoly] = []
    for g in range(grade + 1):
        for lam in partitions_of(g):
            for j in range(p0_degree + 1):
                basis.append(PPoly({lam.parts + (0,) * j: 1}))
    return basis


def commutator_check(a: PDiffOp, b: PDiffOp, grade: int, p0_degree: int = 0) -> bool:
    """True iff [a, b] annihilates every monomial within the bounds."""
    bracket = commutator(a, b)
    for mono in monomial_basis(grade, p0_degree):
        image = apply_pdiffop(bracket, mono)
        if not image.is_zero():
            logger.debug(
                "Commutator does not vanish",
                extra={"extra_fields": {"monomial": str(mono), "image": str(image)}},
            )
            return False
    return True


def restore_finite(op: PDiffOp, n: Union[int, BetaScalar]) -> PDiffOp:
    """Finite-N operator from a limit operator by p_0 -> N (integer or formal)."""
    return op.substitute_p0(n)


class OperatorMatrix(BaseModel):
    """Matrix of an operator on a graded monomial basis.

    Column j is the image of basis[j].
    """

    grade: int
    p0: str
    basis: list[str]
    rows: list[list[str]]


@log_execution_time()
def pdiffop_matrix(
    op: PDiffOp, grade: int, p0: Union[int, str] = "formal"
) -> OperatorMatrix:
    """Matrix of op on the p-monomials of one grade, with p_0 specialised.

    Args:
        op: Grade-preserving operator
        grade: Grade of the basis monomials
        p0: Integer value for p_0, or "formal" for the symbol N

    Returns:
        The matrix with entries rendered as text
    """
    value = BetaScalar.formal_n() if p0 == "formal" else BetaScalar.const(int(p0))
    finite = restore_finite(op, value)
    basis = [lam.parts for lam in partitions_of(grade)]
    index = {mono: i for i, mono in enumerate(basis)}
    columns: list[list[BetaScalar]] = []
    for mono in basis:
        image = apply_pdiffop(finite, PPoly({mono: 1}))
        column = [ZERO] * len(basis)
        for out_mono, coeff in image.items():
            if out_mono not in index:
                raise ValueError(f"Operator leaves grade {grade}: produced {out_mono}")
            column[index[out_mono]] = coeff
        columns.append(column)
    rows = [[str(columns[j][i]) for j in range(len(basis))] for i in range(len(basis))]
    return OperatorMatrix(
        grade=grade,
        p0=str(p0),
        basis=[str(PPoly({mono: 1})) for mono in basis],
        rows=rows,
    )
