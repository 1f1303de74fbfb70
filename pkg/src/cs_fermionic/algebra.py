"""Exact coefficient ring, sparse polynomials and windowed Laurent series."""

from fractions import Fraction
from itertools import product
from math import comb
from typing import (
    Any,
    Callable,
    Generic,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    TypeVar,
    Union,
)

from .errors import NonzeroRemainder, WindowTooNarrow

Number = Union[int, Fraction]

# (beta degree, formal-N degree)
ScalarKey = tuple[int, int]


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_power(symbol: str, exponent: int) -> str:
    return symbol if exponent == 1 else f"{symbol}^{exponent}"


class BetaScalar:
    """Polynomial in the coupling ``b`` and optionally a formal particle number ``N``.

    Stored as a mapping (beta degree, N degree) -> Fraction with no zero entries.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[ScalarKey, Number]] = None):
        self._terms: dict[ScalarKey, Fraction] = {
            key: Fraction(value) for key, value in (terms or {}).items() if value != 0
        }

    @classmethod
    def const(cls, value: Number) -> "BetaScalar":
        return cls({(0, 0): value})

    @classmethod
    def beta(cls) -> "BetaScalar":
        return cls({(1, 0): 1})

    @classmethod
    def formal_n(cls) -> "BetaScalar":
        return cls({(0, 1): 1})

    @classmethod
    def coerce(cls, value: "ScalarLike") -> "BetaScalar":
        if isinstance(value, BetaScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"Cannot use {type(value).__name__} as a coefficient")

    def items(self) -> list[tuple[ScalarKey, Fraction]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return self._terms.get((0, 0), Fraction(0))

    @property
    def beta_degree(self) -> int:
        return max((a for a, _ in self._terms), default=0)

    @property
    def n_degree(self) -> int:
        return max((b for _, b in self._terms), default=0)

    def __add__(self, other: "ScalarLike") -> "BetaScalar":
        if not isinstance(other, (BetaScalar, int, Fraction)):
            return NotImplemented
        other = BetaScalar.coerce(other)
        terms = dict(self._terms)
        for key, value in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + value
        return BetaScalar(terms)

    __radd__ = __add__

    def __neg__(self) -> "BetaScalar":
        return BetaScalar({key: -value for key, value in self._terms.items()})

    def __sub__(self, other: "ScalarLike") -> "BetaScalar":
        if not isinstance(other, (BetaScalar, int, Fraction)):
            return NotImplemented
        return self + (-BetaScalar.coerce(other))

    def __rsub__(self, other: "ScalarLike") -> "BetaScalar":
        return BetaScalar.coerce(other) - self

    def __mul__(self, other: "ScalarLike") -> "BetaScalar":
        if isinstance(other, (int, Fraction)):
            return BetaScalar({key: v * other for key, v in self._terms.items()})
        if not isinstance(other, BetaScalar):
            return NotImplemented
        terms: dict[ScalarKey, Fraction] = {}
        for (a1, b1), v1 in self._terms.items():
            for (a2, b2), v2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                terms[key] = terms.get(key, Fraction(0)) + v1 * v2
        return BetaScalar(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BetaScalar":
        if exponent < 0:
            raise ValueError("Negative powers are not supported")
        result = BetaScalar.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other: "ScalarLike") -> "BetaScalar":
        divisor = BetaScalar.coerce(other).constant_value()
        if divisor == 0:
            raise ZeroDivisionError("division of a coefficient by zero")
        return BetaScalar({key: value / divisor for key, value in self._terms.items()})

    def divide_exact(self, other: "ScalarLike") -> "BetaScalar":
        """Exact quotient in Q[b, N].

        Raises:
            NonzeroRemainder: If other does not divide self
        """
        divisor = BetaScalar.coerce(other)
        if divisor.is_zero():
            raise ZeroDivisionError("division of a coefficient by zero")
        lead_key, lead = max(divisor._terms.items())
        quotient: dict[ScalarKey, Fraction] = {}
        remainder = self
        while not remainder.is_zero():
            key, value = max(remainder._terms.items())
            shift = (key[0] - lead_key[0], key[1] - lead_key[1])
            if shift[0] < 0 or shift[1] < 0:
                raise NonzeroRemainder(
                    f"{divisor} does not divide {self}", {"stuck_at": str(remainder)}
                )
            quotient[shift] = value / lead
            remainder = remainder - BetaScalar({shift: value / lead}) * divisor
        return BetaScalar(quotient)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BetaScalar.const(other)
        if not isinstance(other, BetaScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def substitute_n(self, value: "ScalarLike") -> "BetaScalar":
        """Replace the formal symbol N by a number or another scalar."""
        value = BetaScalar.coerce(value)
        result = BetaScalar()
        for (a, b), coeff in self._terms.items():
            result = result + BetaScalar({(a, 0): coeff}) * value**b
        return result

    def substitute_beta(self, value: "ScalarLike") -> "BetaScalar":
        """Replace b by a number or another scalar (e.g. b - 1)."""
        value = BetaScalar.coerce(value)
        result = BetaScalar()
        for (a, b), coeff in self._terms.items():
            result = result + BetaScalar({(0, b): coeff}) * value**a
        return result

    def monomial_count(self) -> int:
        return len(self._terms)

    def is_signed_monomial(self) -> bool:
        return len(self._terms) == 1

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for (a, b), coeff in self.items():
            symbols = [format_power("b", a)] if a else []
            if b:
                symbols.append(format_power("N", b))
            magnitude = abs(coeff)
            if symbols and magnitude == 1:
                body = "*".join(symbols)
            else:
                body = "*".join([_format_rational(magnitude)] + symbols)
            sign = "-" if coeff < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"BetaScalar({self})"


ScalarLike = Union[BetaScalar, int, Fraction]

BETA = BetaScalar.beta()
ONE = BetaScalar.const(1)
ZERO = BetaScalar()


def format_sum(terms: Iterable[tuple[BetaScalar, list[str]]]) -> str:
    """Render coefficient/factor pairs as a deterministic sum.

    Args:
        terms: (coefficient, factor strings) in the order they should print

    Returns:
        Text accepted back by the literal parser
    """
    pieces: list[tuple[str, str]] = []
    for coeff, factors in terms:
        if coeff.is_signed_monomial():
            ((key, value),) = coeff.items()
            negative = value < 0
            magnitude = -coeff if negative else coeff
            scalar = str(magnitude)
            if not factors:
                body = scalar
            elif scalar == "1":
                body = "*".join(factors)
            else:
                body = "*".join([scalar] + factors)
        else:
            negative = False
            body = "*".join([f"({coeff})"] + factors) if factors else f"({coeff})"
        pieces.append(("-" if negative else "+", body))
    if not pieces:
        return "0"
    text = " ".join(f"{sign} {body}" for sign, body in pieces)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


XKey = tuple[int, ...]


class XPoly:
    """Sparse polynomial in x_1..x_N with BetaScalar coefficients.

    Exponents are normally non-negative; finite wedges with negative exponents
    produce Laurent monomials, which every operation here tolerates.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[XKey, ScalarLike]] = None):
        self.nvars = nvars
        self._terms: dict[XKey, BetaScalar] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError(
                    f"Exponent vector {exps} does not have {nvars} entries"
                )
            scalar = BetaScalar.coerce(coeff)
            if not scalar.is_zero():
                self._terms[tuple(exps)] = scalar

    @classmethod
    def const(cls, value: ScalarLike, nvars: int) -> "XPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, i: int, nvars: int) -> "XPoly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"Variable index {i} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: ScalarLike = 1) -> "XPoly":
        key = tuple(exps)
        return cls(len(key), {key: coeff})

    def items(self) -> list[tuple[XKey, BetaScalar]]:
        """Terms in descending graded-lex order."""
        return sorted(
            self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True
        )

    def coefficient(self, exps: Iterable[int]) -> BetaScalar:
        return self._terms.get(tuple(exps), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps in self._terms), default=0)

    def leading_term(self) -> tuple[XKey, BetaScalar]:
        if not self._terms:
            raise ValueError("The zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def _check_compatible(self, other: "XPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"Variable counts differ: {self.nvars} vs {other.nvars}")

    def _coerce(self, other: Any) -> Optional["XPoly"]:
        if isinstance(other, XPoly):
            self._check_compatible(other)
            return other
        if isinstance(other, (BetaScalar, int, Fraction)):
            return XPoly.const(other, self.nvars)
        return None

    def __add__(self, other: Any) -> "XPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in rhs._terms.items():
            terms[exps] = terms.get(exps, ZERO) + coeff
        return XPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "XPoly":
        return XPoly(self.nvars, {exps: -c for exps, c in self._terms.items()})

    def __sub__(self, other: Any) -> "XPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "XPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "XPoly":
        if isinstance(other, (BetaScalar, int, Fraction)):
            scalar = BetaScalar.coerce(other)
            scaled = {exps: c * scalar for exps, c in self._terms.items()}
            return XPoly(self.nvars, scaled)
        if not isinstance(other, XPoly):
            return NotImplemented
        self._check_compatible(other)
        terms: dict[XKey, BetaScalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, ZERO) + c1 * c2
        return XPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "XPoly":
        result = XPoly.const(1, self.nvars)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (BetaScalar, int, Fraction)):
            other = XPoly.const(other, self.nvars)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def map_coefficients(self, func: Callable[[BetaScalar], BetaScalar]) -> "XPoly":
        return XPoly(self.nvars, {exps: func(c) for exps, c in self._terms.items()})

    def swap(self, i: int, j: int) -> "XPoly":
        """Exchange x_i and x_j (1-based)."""
        a, b = i - 1, j - 1
        terms: dict[XKey, BetaScalar] = {}
        for exps, coeff in self._terms.items():
            swapped = list(exps)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            terms[tuple(swapped)] = coeff
        return XPoly(self.nvars, terms)

    def substitute(self, i: int, value: ScalarLike) -> "XPoly":
        """Set x_i to a scalar; the variable count is unchanged."""
        scalar = BetaScalar.coerce(value)
        terms: dict[XKey, BetaScalar] = {}
        for exps, coeff in self._terms.items():
            key = exps[: i - 1] + (0,) + exps[i:]
            power = exps[i - 1]
            factor = ONE if power == 0 else scalar**power
            terms[key] = terms.get(key, ZERO) + coeff * factor
        return XPoly(self.nvars, terms)

    def partial_euler(self, i: int) -> "XPoly":
        """Apply x_i d/dx_i."""
        return XPoly(
            self.nvars,
            {exps: coeff * exps[i - 1] for exps, coeff in self._terms.items()},
        )

    def is_symmetric(self) -> bool:
        return all(self.swap(i, i + 1) == self for i in range(1, self.nvars))

    def is_antisymmetric(self) -> bool:
        return all(self.swap(i, i + 1) == -self for i in range(1, self.nvars))

    def divided_difference(self, i: int, j: int) -> "XPoly":
        """Exact (f - K_ij f) / (x_i - x_j) via the monomial formula."""
        a_idx, b_idx = i - 1, j - 1
        terms: dict[XKey, BetaScalar] = {}
        for exps, coeff in self._terms.items():
            a, b = exps[a_idx], exps[b_idx]
            if a == b:
                continue
            sign = 1 if a > b else -1
            hi, lo = max(a, b), min(a, b)
            for t in range(hi - lo):
                key = list(exps)
                key[a_idx] = lo + t
                key[b_idx] = lo + (hi - lo - 1 - t)
                tkey = tuple(key)
                terms[tkey] = terms.get(tkey, ZERO) + coeff * sign
        return XPoly(self.nvars, terms)

    def collect(self, i: int) -> dict[int, "XPoly"]:
        """Coefficients of powers of x_i as polynomials in the remaining variables."""
        result: dict[int, dict[XKey, BetaScalar]] = {}
        for exps, coeff in self._terms.items():
            rest = exps[: i - 1] + exps[i:]
            result.setdefault(exps[i - 1], {})[rest] = coeff
        return {power: XPoly(self.nvars - 1, terms) for power, terms in result.items()}

    def embed(self, nvars: int, positions: list[int]) -> "XPoly":
        """Rename variable k to x_{positions[k]} inside an nvars-variable ring."""
        terms: dict[XKey, BetaScalar] = {}
        for exps, coeff in self._terms.items():
            key = [0] * nvars
            for exp, pos in zip(exps, positions):
                key[pos - 1] = exp
            terms[tuple(key)] = coeff
        return XPoly(nvars, terms)

    def __str__(self) -> str:
        def factors(exps: XKey) -> list[str]:
            return [format_power(f"x{k + 1}", e) for k, e in enumerate(exps) if e]

        return format_sum((coeff, factors(exps)) for exps, coeff in self.items())

    def __repr__(self) -> str:
        return f"XPoly({self.nvars}, {self})"


def xpoly_divide_exact(f: XPoly, g: XPoly) -> XPoly:
    """Exact quotient f / g by graded-lex leading-term division.

    Args:
        f: Dividend
        g: Nonzero divisor

    Returns:
        q with f = q * g

    Raises:
        NonzeroRemainder: If g does not divide f
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    g_exps, lead = g.leading_term()
    quotient: dict[XKey, BetaScalar] = {}
    remainder = f
    while not remainder.is_zero():
        r_exps, r_coeff = remainder.leading_term()
        shift = tuple(a - b for a, b in zip(r_exps, g_exps))
        if any(s < 0 for s in shift):
            stuck = XPoly(f.nvars, {r_exps: r_coeff})
            raise NonzeroRemainder(f"{g} does not divide {f}", {"stuck_at": str(stuck)})
        step = r_coeff.divide_exact(lead)
        term = XPoly(f.nvars, {shift: step})
        quotient[shift] = quotient.get(shift, ZERO) + step
        remainder = remainder - term * g
    return XPoly(f.nvars, quotient)


PKey = tuple[int, ...]


def pkey(indices: Iterable[int]) -> PKey:
    return tuple(sorted(indices, reverse=True))


class PPoly:
    """Sparse polynomial in the Fock generators p_0, p_1, p_2, ...

    A monomial is a descending tuple of generator indices, so (2, 1, 1, 0)
    is p_2 p_1^2 p_0. Its grade is the index sum.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Iterable[int], ScalarLike]] = None):
        self._terms: dict[PKey, BetaScalar] = {}
        for mono, coeff in (terms or {}).items():
            scalar = BetaScalar.coerce(coeff)
            if scalar.is_zero():
                continue
            key = pkey(mono)
            if key and key[-1] < 0:
                raise ValueError(f"Negative generator index in {key}")
            total = self._terms.get(key, ZERO) + scalar
            if total.is_zero():
                self._terms.pop(key, None)
            else:
                self._terms[key] = total

    @classmethod
    def const(cls, value: ScalarLike) -> "PPoly":
        return cls({(): value})

    @classmethod
    def p(cls, n: int) -> "PPoly":
        return cls({(n,): 1})

    @classmethod
    def from_dict(cls, terms: Mapping[PKey, BetaScalar]) -> "PPoly":
        """Build from already canonical keys without re-validating."""
        poly = cls()
        poly._terms = {k: v for k, v in terms.items() if not v.is_zero()}
        return poly

    def items(self) -> list[tuple[PKey, BetaScalar]]:
        """Terms in descending graded order."""
        return sorted(
            self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True
        )

    def monomials(self) -> list[PKey]:
        return [mono for mono, _ in self.items()]

    def coefficient(self, mono: Iterable[int]) -> BetaScalar:
        return self._terms.get(pkey(mono), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def grade(self) -> int:
        return max((sum(mono) for mono in self._terms), default=0)

    @property
    def p0_degree(self) -> int:
        return max((mono.count(0) for mono in self._terms), default=0)

    def has_p0(self) -> bool:
        return any(mono and mono[-1] == 0 for mono in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(mono) for mono in self._terms}) <= 1

    def max_index(self) -> int:
        return max((mono[0] for mono in self._terms if mono), default=0)

    def _coerce(self, other: Any) -> Optional["PPoly"]:
        if isinstance(other, PPoly):
            return other
        if isinstance(other, (BetaScalar, int, Fraction)):
            return PPoly.const(other)
        return None

    def __add__(self, other: Any) -> "PPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            terms[mono] = terms.get(mono, ZERO) + coeff
        return PPoly.from_dict(terms)

    __radd__ = __add__

    def __neg__(self) -> "PPoly":
        return PPoly.from_dict({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other: Any) -> "PPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> "PPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "PPoly":
        if isinstance(other, (BetaScalar, int, Fraction)):
            scalar = BetaScalar.coerce(other)
            scaled = {mono: c * scalar for mono, c in self._terms.items()}
            return PPoly.from_dict(scaled)
        if not isinstance(other, PPoly):
            return NotImplemented
        terms: dict[PKey, BetaScalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = pkey(m1 + m2)
                terms[key] = terms.get(key, ZERO) + c1 * c2
        return PPoly.from_dict(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PPoly":
        result = PPoly.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (BetaScalar, int, Fraction)):
            other = PPoly.const(other)
        if not isinstance(other, PPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def map_coefficients(self, func: Callable[[BetaScalar], BetaScalar]) -> "PPoly":
        return PPoly.from_dict({mono: func(c) for mono, c in self._terms.items()})

    def substitute_p0(self, value: ScalarLike) -> "PPoly":
        """Replace p_0 by a number or scalar (e.g. the formal N)."""
        scalar = BetaScalar.coerce(value)
        terms: dict[PKey, BetaScalar] = {}
        for mono, coeff in self._terms.items():
            zeros = mono.count(0)
            key = mono[: len(mono) - zeros]
            terms[key] = terms.get(key, ZERO) + coeff * scalar**zeros
        return PPoly.from_dict(terms)

    def shift_p0(self, delta: Number) -> "PPoly":
        """Substitute p_0 -> p_0 + delta."""
        if delta == 0:
            return self
        terms: dict[PKey, BetaScalar] = {}
        for mono, coeff in self._terms.items():
            zeros = mono.count(0)
            rest = mono[: len(mono) - zeros]
            for r in range(zeros + 1):
                key = rest + (0,) * r
                weight = comb(zeros, r) * Fraction(delta) ** (zeros - r)
                terms[key] = terms.get(key, ZERO) + coeff * weight
        return PPoly.from_dict(terms)

    def derivative(self, n: int) -> "PPoly":
        """Partial derivative with respect to p_n."""
        terms: dict[PKey, BetaScalar] = {}
        for mono, coeff in self._terms.items():
            mult = mono.count(n)
            if not mult:
                continue
            pos = mono.index(n)
            key = mono[:pos] + mono[pos + 1 :]
            terms[key] = terms.get(key, ZERO) + coeff * mult
        return PPoly.from_dict(terms)

    def substitute(self, images: Mapping[int, "PPoly"]) -> "PPoly":
        """Replace each p_n with images[n] (generators without an image stay)."""
        result = PPoly()
        for mono, coeff in self._terms.items():
            term = PPoly.const(coeff)
            kept: list[int] = []
            for n in mono:
                if n in images:
                    term = term * images[n]
                else:
                    kept.append(n)
            result = result + term * PPoly({tuple(kept): 1})
        return result

    def taylor_shift(self, shifts: Mapping[int, "PPoly"]) -> "PPoly":
        """Substitute p_n -> p_n + shifts[n]."""
        return self.substitute({n: PPoly.p(n) + s for n, s in shifts.items()})

    def power_shift(self, sign: int = 1) -> dict[int, "PPoly"]:
        """Expand p_n -> p_n + sign * t^n (n >= 1) as a polynomial in t.

        Returns:
            Mapping t-exponent -> PPoly coefficient
        """
        result: dict[int, dict[PKey, BetaScalar]] = {}
        for mono, coeff in self._terms.items():
            counts: dict[int, int] = {}
            for n in mono:
                counts[n] = counts.get(n, 0) + 1
            zeros = counts.pop(0, 0)
            distinct = sorted(counts.items())
            choices = [range(m + 1) for _, m in distinct]
            for picks in product(*choices):
                exponent = 0
                weight = 1
                rest: list[int] = [0] * zeros
                for (n, m), j in zip(distinct, picks):
                    exponent += n * j
                    weight *= comb(m, j) * sign**j
                    rest.extend([n] * (m - j))
                key = pkey(rest)
                bucket = result.setdefault(exponent, {})
                bucket[key] = bucket.get(key, ZERO) + coeff * weight
        return {e: PPoly.from_dict(terms) for e, terms in result.items() if terms}

    def vacuum_value(self) -> BetaScalar:
        """Pairing with the vacuum: every p_n, p_0 included, set to zero."""
        return self._terms.get((), ZERO)

    def __str__(self) -> str:
        def factors(mono: PKey) -> list[str]:
            counts: dict[int, int] = {}
            for n in mono:
                counts[n] = counts.get(n, 0) + 1
            return [format_power(f"p{n}", m) for n, m in sorted(counts.items())]

        return format_sum((coeff, factors(mono)) for mono, coeff in self.items())

    def __repr__(self) -> str:
        return f"PPoly({self})"


def grade_components(v: PPoly) -> list[tuple[int, PPoly]]:
    """Split v into homogeneous components, ascending by grade."""
    buckets: dict[int, dict[PKey, BetaScalar]] = {}
    for mono, coeff in v.items():
        buckets.setdefault(sum(mono), {})[mono] = coeff
    return [(grade, PPoly.from_dict(terms)) for grade, terms in sorted(buckets.items())]


T = TypeVar("T")


class ZSeries(Generic[T]):
    """Laurent series in one variable z, exact from exponent ``lo`` upwards.

    Coefficients below ``lo`` are unknown; ``lo=None`` means the series is
    known exactly everywhere. Every series here is polynomial towards positive
    powers, so there is no upper truncation: exponents above the top stored
    term are exactly zero, and ``window`` reports (lo, top) with top the
    highest nonzero exponent. Stored exponents are always within the window.
    """

    __slots__ = ("_terms", "lo", "zero")

    def __init__(
        self, terms: Mapping[int, T], lo: Optional[int] = None, zero: Any = None
    ):
        self.zero = zero if zero is not None else PPoly()
        self.lo = lo
        self._terms: dict[int, T] = {
            e: c
            for e, c in terms.items()
            if not c.is_zero() and (lo is None or e >= lo)  # type: ignore[attr-defined]
        }

    @property
    def top(self) -> Optional[int]:
        return max(self._terms, default=None)

    @property
    def window(self) -> tuple[Optional[int], Optional[int]]:
        return (self.lo, self.top)

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def items(self) -> Iterator[tuple[int, T]]:
        for e in sorted(self._terms):
            yield e, self._terms[e]

    def is_exact_at(self, e: int) -> bool:
        return self.lo is None or e >= self.lo

    def coefficient(self, e: int) -> T:
        if not self.is_exact_at(e):
            raise WindowTooNarrow(
                f"z^{e} lies outside the exact window {self.window}",
                needed=None,
                window=self.window,
            )
        return self._terms.get(e, self.zero)

    def __add__(self, other: "ZSeries[T]") -> "ZSeries[T]":
        lo = _max_lo(self.lo, other.lo)
        terms: dict[int, T] = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms[e] + c if e in terms else c  # type: ignore[operator]
        return type(self)(terms, lo, self.zero)

    def __neg__(self) -> "ZSeries[T]":
        terms = {e: -c for e, c in self._terms.items()}  # type: ignore[operator]
        return type(self)(terms, self.lo, self.zero)

    def __sub__(self, other: "ZSeries[T]") -> "ZSeries[T]":
        return self + (-other)

    def __mul__(self, other: Any) -> "ZSeries[T]":
        if not isinstance(other, ZSeries):
            scaled = {e: c * other for e, c in self._terms.items()}  # type: ignore
            return type(self)(scaled, self.lo, self.zero)
        lo = product_window(self.lo, self.top, other.lo, other.top)
        terms: dict[int, T] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if lo is not None and e < lo:
                    continue
                prod = c1 * c2  # type: ignore[operator]
                terms[e] = terms[e] + prod if e in terms else prod  # type: ignore
        return type(self)(terms, lo, self.zero)

    def shift(self, k: int) -> "ZSeries[T]":
        """Multiply by z^k."""
        lo = None if self.lo is None else self.lo + k
        return type(self)({e + k: c for e, c in self._terms.items()}, lo, self.zero)

    def truncate(self, lo: int) -> "ZSeries[T]":
        """Forget everything below z^lo."""
        return type(self)(self._terms, _max_lo(self.lo, lo), self.zero)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.lo == other.lo and self._terms == other._terms

    def __repr__(self) -> str:
        body = ", ".join(f"z^{e}: {c}" for e, c in self.items())
        return f"ZSeries({{{body}}}, lo={self.lo})"


def _max_lo(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def product_window(
    lo_a: Optional[int], top_a: Optional[int], lo_b: Optional[int], top_b: Optional[int]
) -> Optional[int]:
    """Lowest exponent at which a product of two windowed series is exact.

    An unknown coefficient of one factor only reaches exponents below
    lo + top of the other factor.
    """
    bounds = []
    if lo_a is not None and top_b is not None:
        bounds.append(lo_a + top_b)
    if lo_b is not None and top_a is not None:
        bounds.append(lo_b + top_a)
    return max(bounds) if bounds else None


def series_residue(s: ZSeries[T]) -> T:
    """Coefficient of z^-1.

    Raises:
        WindowTooNarrow: If z^-1 is outside the exact window
    """
    if not s.is_exact_at(-1):
        raise WindowTooNarrow(
            "Residue requested outside the exact window",
            needed=None,
            window=s.window,
        )
    return s.coefficient(-1)
