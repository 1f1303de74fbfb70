"""Vertex operators on the bosonic Fock space and the large-N Dunkl limit.

Exponents of distinguished variables are stored as ``mult * p_0 + offset``
with ``mult`` in {-1, 0, 1}; a shift p_0 -> p_0 + d moves every offset by
``mult * d`` and shifts p_0 in every coefficient.

With p_0 symbolic the residues defining the antisymmetrization and the limit
Dunkl operator are infinite sums. They are evaluated in a charge sector N,
where every offset below -(N-1) vanishes after evaluation in N-1 variables,
and the p_0 dependence is recovered by interpolating over sectors.
"""

from fractions import Fraction
from typing import Callable, Iterator, Optional

from .algebra import BETA, PPoly, ScalarLike, XPoly, ZSeries, product_window
from .debug_utils import trace_kernel
from .dunkl import MixedPoly, mixed_to_x
from .errors import CSAlgebraError, WindowTooNarrow
from .logging_config import get_logger
from .symfun import alpha_N, elementary_in_p, homogeneous_in_p, power_sums_substitute
from .window import WindowPolicy, widen_on_narrow_window, with_policy

logger = get_logger(__name__)

DEFAULT_DEPTH = 4

OffsetKey = tuple[int, ...]


class ChargedSeries(ZSeries[PPoly]):
    """sum_k z^(p_0 + k) v_k, exact for offsets k >= lo."""

    def substitute_p0(self, value: ScalarLike) -> "ChargedSeries":
        return ChargedSeries(
            {k: v.substitute_p0(value) for k, v in self.items()}, self.lo, self.zero
        )

    def __str__(self) -> str:
        if self.top is None:
            return "0"
        terms = reversed(list(self.items()))
        body = " + ".join(f"z^(p0{k:+d})*({v})" for k, v in terms)
        return body if self.lo is None else f"{body} + O(z^(p0{self.lo:+d}))"

    def __repr__(self) -> str:
        return f"ChargedSeries({self})"


def _psi_factor(m: int) -> PPoly:
    return elementary_in_p(m) * (-1) ** m


def _psi_star_factor(m: int) -> PPoly:
    return homogeneous_in_p(m)


class MultiSeries:
    """Laurent series in several charged variables with Fock-state coefficients.

    The coefficients are exact inside the box offset_i >= lows[i]; a low of
    None means the variable is exact everywhere. Only terms inside the box
    are stored.
    """

    __slots__ = ("variables", "lows", "_terms")

    def __init__(
        self,
        variables: tuple[tuple[str, int], ...],
        terms: dict[OffsetKey, PPoly],
        lows: tuple[Optional[int], ...],
    ):
        if len(variables) != len(lows):
            raise ValueError("Every variable needs a window bound")
        self.variables = variables
        self.lows = lows
        self._terms: dict[OffsetKey, PPoly] = {}
        for key, coeff in terms.items():
            if coeff.is_zero():
                continue
            if any(lo is not None and e < lo for e, lo in zip(key, lows)):
                continue
            self._terms[key] = coeff

    @classmethod
    def from_state(cls, v: PPoly) -> "MultiSeries":
        return cls((), {(): v}, ())

    @classmethod
    def from_charged(cls, series: ChargedSeries, name: str) -> "MultiSeries":
        return cls(((name, 1),), {(k,): v for k, v in series.items()}, (series.lo,))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"No variable named {name!r} in {self.names}") from None

    def items(self) -> Iterator[tuple[OffsetKey, PPoly]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def is_zero(self) -> bool:
        return not self._terms

    def top(self, name: str) -> Optional[int]:
        i = self._index(name)
        return max((key[i] for key in self._terms), default=None)

    def coefficient(self, key: OffsetKey) -> PPoly:
        for e, lo in zip(key, self.lows):
            if lo is not None and e < lo:
                raise WindowTooNarrow(
                    f"Offset {key} lies outside the exact box {self.lows}",
                    window=(lo, None),
                )
        return self._terms.get(key, PPoly())

    def _combine(self, other: "MultiSeries", sign: int) -> "MultiSeries":
        if self.variables != other.variables:
            raise ValueError(f"Variables differ: {self.variables} vs {other.variables}")
        lows = tuple(
            a if b is None else b if a is None else max(a, b)
            for a, b in zip(self.lows, other.lows)
        )
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            piece = coeff * sign
            terms[key] = terms[key] + piece if key in terms else piece
        return MultiSeries(self.variables, terms, lows)

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        return self._combine(other, 1)

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self._combine(other, -1)

    def __mul__(self, scalar: ScalarLike) -> "MultiSeries":
        return MultiSeries(
            self.variables, {k: c * scalar for k, c in self._terms.items()}, self.lows
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.lows == other.lows
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.lows, frozenset(self._terms.items())))

    def shift_charge(self, delta: int) -> "MultiSeries":
        """Substitute p_0 -> p_0 + delta in exponents and coefficients."""
        if delta == 0:
            return self
        mults = [mult for _, mult in self.variables]
        lows = tuple(
            None if lo is None else lo + mult * delta
            for lo, mult in zip(self.lows, mults)
        )
        terms = {
            tuple(e + m * delta for e, m in zip(key, mults)): coeff.shift_p0(delta)
            for key, coeff in self._terms.items()
        }
        return MultiSeries(self.variables, terms, lows)

    def _attach(
        self, name: str, mult: int, lo: int, sign: int, factor: Callable[[int], PPoly]
    ) -> "MultiSeries":
        if name in self.names:
            raise ValueError(f"Variable {name!r} already present")
        shifted = self.shift_charge(mult)
        terms: dict[OffsetKey, PPoly] = {}
        for key, coeff in shifted._terms.items():
            for t, piece in coeff.power_shift(sign).items():
                for m in range(t - lo + 1):
                    weight = factor(m)
                    new_key = key + (t - m,)
                    product = piece * weight
                    if new_key in terms:
                        product = terms[new_key] + product
                    terms[new_key] = product
        variables = shifted.variables + ((name, mult),)
        return MultiSeries(variables, terms, shifted.lows + (lo,))

    def apply_psi(self, name: str, lo: int) -> "MultiSeries":
        """Psi(name), exact for the new variable's offsets >= lo."""
        return self._attach(name, 1, lo, 1, _psi_factor)

    def apply_psi_star(self, name: str, lo: int) -> "MultiSeries":
        """Psi*(name), exact for the new variable's offsets >= lo."""
        return self._attach(name, -1, lo, -1, _psi_star_factor)

    def swap(self, a: str, b: str) -> "MultiSeries":
        i, j = self._index(a), self._index(b)
        if self.variables[i][1] != self.variables[j][1]:
            raise ValueError(f"Cannot swap {a!r} and {b!r}: charges differ")

        def exchange(seq: tuple) -> tuple:
            items = list(seq)
            items[i], items[j] = items[j], items[i]
            return tuple(items)

        return MultiSeries(
            self.variables,
            {exchange(key): coeff for key, coeff in self._terms.items()},
            exchange(self.lows),
        )

    def reorder(self, names: tuple[str, ...]) -> "MultiSeries":
        if sorted(names) != sorted(self.names):
            raise ValueError(f"{names} is not a permutation of {self.names}")
        order = [self._index(name) for name in names]
        return MultiSeries(
            tuple(self.variables[i] for i in order),
            {tuple(key[i] for i in order): c for key, c in self._terms.items()},
            tuple(self.lows[i] for i in order),
        )

    def restrict(self, name: str, lo: int) -> "MultiSeries":
        """Narrow the exact box of one variable."""
        i = self._index(name)
        current = self.lows[i]
        lows = list(self.lows)
        lows[i] = lo if current is None else max(current, lo)
        return MultiSeries(self.variables, self._terms, tuple(lows))

    def truncate_sector(self, name: str, lo: int) -> "MultiSeries":
        """Drop offsets below lo, which vanish in the sector under evaluation.

        Raises:
            WindowTooNarrow: If the series is not exact down to lo
        """
        i = self._index(name)
        current = self.lows[i]
        if current is not None and current > lo:
            raise WindowTooNarrow(
                f"Variable {name!r} is exact only from {current}, sector needs {lo}",
                window=(current, self.top(name)),
            )
        lows = list(self.lows)
        lows[i] = None
        terms = {key: c for key, c in self._terms.items() if key[i] >= lo}
        return MultiSeries(self.variables, terms, tuple(lows))

    def collapse(self, src: str, dst: str) -> "MultiSeries":
        """Set the variable src equal to dst."""
        i, j = self._index(src), self._index(dst)
        lo = product_window(self.lows[i], self.top(src), self.lows[j], self.top(dst))
        variables = list(self.variables)
        variables[j] = (dst, variables[j][1] + variables[i][1])
        lows = list(self.lows)
        lows[j] = lo
        terms: dict[OffsetKey, PPoly] = {}
        for key, coeff in self._terms.items():
            merged = list(key)
            merged[j] += merged[i]
            del merged[i]
            new_key = tuple(merged)
            terms[new_key] = terms[new_key] + coeff if new_key in terms else coeff
        del variables[i]
        del lows[i]
        return MultiSeries(tuple(variables), terms, tuple(lows))

    def residue(self, name: str) -> "MultiSeries":
        """Coefficient of name^-1; the variable must carry no charge."""
        i = self._index(name)
        if self.variables[i][1] != 0:
            raise ValueError(f"Residue in {name!r} needs an integer exponent")
        lo = self.lows[i]
        if lo is not None and lo > -1:
            raise WindowTooNarrow(
                f"Residue in {name!r} outside the exact window",
                window=(lo, self.top(name)),
            )
        terms = {
            key[:i] + key[i + 1 :]: c for key, c in self._terms.items() if key[i] == -1
        }
        return MultiSeries(
            self.variables[:i] + self.variables[i + 1 :],
            terms,
            self.lows[:i] + self.lows[i + 1 :],
        )

    def at_charge(self, charge: int) -> "MultiSeries":
        """Specialise p_0 to an integer; every exponent becomes a plain integer."""
        mults = [mult for _, mult in self.variables]
        lows = tuple(
            None if lo is None else lo + mult * charge
            for lo, mult in zip(self.lows, mults)
        )
        terms: dict[OffsetKey, PPoly] = {}
        for key, coeff in self._terms.items():
            new_key = tuple(e + mult * charge for e, mult in zip(key, mults))
            value = coeff.substitute_p0(charge)
            terms[new_key] = terms[new_key] + value if new_key in terms else value
        return MultiSeries(tuple((name, 0) for name in self.names), terms, lows)

    def exchange_quotient(self, slot: str, other: str) -> "MultiSeries":
        """slot * (F - F with slot and other swapped) / (slot - other).

        Needs every variable exact; the division is carried out monomial by
        monomial, so the result is again finite.
        """
        i, j = self._index(slot), self._index(other)
        if self.variables[i][1] != self.variables[j][1]:
            raise ValueError(f"{slot!r} and {other!r} carry different charges")
        if self.lows[i] is not None or self.lows[j] is not None:
            raise WindowTooNarrow(
                "Exchange quotient needs exact series",
                window=(self.lows[i], self.lows[j]),
            )
        terms: dict[OffsetKey, PPoly] = {}

        def add(key: list[int], slot_exp: int, other_exp: int, coeff: PPoly) -> None:
            key[i], key[j] = slot_exp, other_exp
            new_key = tuple(key)
            terms[new_key] = terms[new_key] + coeff if new_key in terms else coeff

        for key, coeff in self._terms.items():
            c, a = key[i], key[j]
            if c > a:
                for t in range(c - a):
                    add(list(key), c - t, a + t, coeff)
            elif a > c:
                for t in range(a - c):
                    add(list(key), a - t, c + t, -coeff)
        return MultiSeries(self.variables, terms, self.lows)

    def to_charged(self, name: str) -> ChargedSeries:
        if self.variables != ((name, 1),):
            raise ValueError(
                f"Expected exactly the charged variable {name!r}, got {self.variables}"
            )
        terms = {key[0]: c for key, c in self._terms.items()}
        return ChargedSeries(terms, self.lows[0])

    def scalar_state(self) -> PPoly:
        if self.variables:
            raise ValueError(f"Variables {self.names} remain")
        return self._terms.get((), PPoly())

    def pair_vacuum(self) -> XPoly:
        """<0| ... with p_0 = 0 and every p_n = 0; variables become x_1, x_2, ...

        Raises:
            WindowTooNarrow: If some non-negative exponent is not exact
            ValueError: If a negative exponent survives the pairing
        """
        charged = self.at_charge(0)
        for name, lo in zip(self.names, charged.lows):
            if lo is not None and lo > 0:
                raise WindowTooNarrow(
                    f"Variable {name!r} exact only from {lo}", window=(lo, None)
                )
        terms = {}
        for key, coeff in charged._terms.items():
            value = coeff.vacuum_value()
            if value.is_zero():
                continue
            if any(e < 0 for e in key):
                raise ValueError(f"Negative exponent {key} in a vacuum matrix element")
            terms[key] = value
        return XPoly(len(self.variables), terms)

    def __str__(self) -> str:
        def monomial(key: OffsetKey) -> str:
            parts = []
            for (name, mult), e in zip(self.variables, key):
                charge = {1: "p0", -1: "-p0", 0: ""}[mult]
                parts.append(f"{name}^({charge}{e:+d})" if charge else f"{name}^{e}")
            return "*".join(parts)

        if not self._terms:
            return "0"
        return " + ".join(f"{monomial(k)}*({c})" for k, c in self.items())

    def __repr__(self) -> str:
        return f"MultiSeries({self.names}, lows={self.lows}, {len(self._terms)} terms)"


def psi_apply(v: PPoly, depth: int = DEFAULT_DEPTH) -> ChargedSeries:
    """Psi(z) v, exact for offsets >= grade(v) - depth."""
    return MultiSeries.from_state(v).apply_psi("z", lo=v.grade - depth).to_charged("z")


def iota_limit(v: PPoly, depth: int = DEFAULT_DEPTH) -> ChargedSeries:
    """The inclusion of a Fock state as a charged series in z."""
    return psi_apply(v, depth)


def restrict_to_sector(series: ChargedSeries, n: int) -> ChargedSeries:
    """Keep the offsets that survive evaluation with N-1 spectator variables.

    Raises:
        WindowTooNarrow: If the series is not exact down to -(N-1)
    """
    floor = -(n - 1)
    if series.lo is not None and series.lo > floor:
        top = series.top if series.top is not None else 0
        raise WindowTooNarrow(
            f"Sector N={n} needs offsets down to {floor}, "
            f"series is exact from {series.lo}",
            needed=top + n - 1,
            window=series.window,
        )
    return ChargedSeries({k: v for k, v in series.items() if k >= floor})


def pi_N_closed(v: PPoly, n: int) -> XPoly:
    """Evaluation map: Vandermonde times v with p_0 -> N and p_k -> power sums."""
    return alpha_N(v.substitute_p0(n), n)


def pi_slot(series: ChargedSeries, n: int) -> MixedPoly:
    """Slot form of the evaluation: z^(p_0+k) v -> x^(k+N-1) v at p_0 = N-1.

    The p's of the result refer to the N-1 variables other than the slot,
    in normal form.
    """
    sector = restrict_to_sector(series, n)
    terms = {k + n - 1: v.substitute_p0(n - 1) for k, v in sector.items()}
    return MixedPoly(n - 1, terms).reduced()


def pi_Nminus1_i(series: ChargedSeries, n: int, i: int) -> XPoly:
    """The evaluation with x_i as the distinguished variable, as an x-polynomial."""
    return mixed_to_x(pi_slot(series, n), n, i)


def in_polynomial_image(series: ChargedSeries, n: int) -> bool:
    """True iff every known offset below -(N-1) evaluates to zero in N-1 variables."""
    for k, v in series.items():
        if k >= -(n - 1):
            continue
        value = v.substitute_p0(n - 1)
        vanishes = (
            value.vacuum_value().is_zero()
            if n == 1
            else power_sums_substitute(value, n - 1).is_zero()
        )
        if not vanishes:
            logger.debug(
                "Negative slot power survives evaluation",
                extra={"extra_fields": {"offset": k, "n": n}},
            )
            return False
    return True


def _integrate_out(series: MultiSeries, name: str) -> MultiSeries:
    """Double residue of Psi*(u) F / (u - name) in the variable name."""
    top = series.top(name)
    if top is None:
        return MultiSeries(
            tuple(v for v in series.variables if v[0] != name),
            {},
            tuple(lo for v, lo in zip(series.variables, series.lows) if v[0] != name),
        )
    staged = series.apply_psi_star("u", lo=-top)
    return staged.collapse("u", name).residue(name)


def E_limit(series: ChargedSeries, n: int) -> PPoly:
    """Antisymmetrization of a charged series in the sector of N particles."""
    sector = restrict_to_sector(series, n)
    state = _integrate_out(MultiSeries.from_charged(sector, "z"), "z").scalar_state()
    return state.substitute_p0(n)


def D_limit(series: ChargedSeries, n: int) -> ChargedSeries:
    """z d/dz + b * (exchange residue), restricted to the sector of N particles."""
    sector = restrict_to_sector(series, n)
    p0 = PPoly.p(0)
    euler = ChargedSeries({k: v * (p0 + k) for k, v in sector.items()}, lo=-(n - 1))
    if n < 2:
        return euler
    created = MultiSeries.from_charged(sector, "z").apply_psi("w", lo=-(n - 2))
    paired = created.truncate_sector("w", -(n - 2))
    quotient = paired.exchange_quotient("z", "w")
    exchange = _integrate_out(quotient, "w").to_charged("z")
    exchange = ChargedSeries(
        {k: v * BETA for k, v in exchange.items() if k >= -(n - 1)}, lo=-(n - 1)
    )
    logger.debug(
        "Applied limit Dunkl operator",
        extra={
            "extra_fields": {
                "n": n,
                "terms_in": len(sector.exponents()),
                "terms_out": len(exchange.exponents()),
            }
        },
    )
    return euler + exchange


@widen_on_narrow_window()
def hk_pipeline_sector(k: int, v: PPoly, n: int, *, depth: int) -> PPoly:
    """H_k v evaluated at p_0 = N through iota, D^k and the antisymmetrization."""
    series = restrict_to_sector(iota_limit(v, depth), n)
    for _ in range(k):
        series = D_limit(series, n)
    return E_limit(series, n)


def _interpolate_p0(samples: list[tuple[int, PPoly]]) -> PPoly:
    """Lagrange interpolation in p_0 through (N, value) samples."""
    p0 = PPoly.p(0)
    result = PPoly()
    for i, (xi, yi) in enumerate(samples):
        basis = PPoly.const(1)
        for j, (xj, _) in enumerate(samples):
            if j != i:
                basis = basis * (p0 - xj) * Fraction(1, xi - xj)
        result = result + yi * basis
    return result


@trace_kernel
def hk_pipeline(k: int, v: PPoly, policy: Optional[WindowPolicy] = None) -> PPoly:
    """H_k v with p_0 symbolic, interpolated from charge sectors.

    Sectors start at N = max(2, grade(v)), where the evaluation is injective
    on the grade. One sector beyond the interpolation degree is used as a check.

    Raises:
        CSAlgebraError: If the check sector disagrees with the interpolant
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    run = with_policy(hk_pipeline_sector, policy)
    start = max(2, v.grade)
    degree = v.p0_degree + k + 1
    samples = [(n, run(k, v, n)) for n in range(start, start + degree + 2)]
    result = _interpolate_p0(samples[:-1])
    check_n, check_value = samples[-1]
    if result.substitute_p0(check_n) != check_value:
        logger.error(
            "Sector interpolation inconsistent",
            extra={"extra_fields": {"k": k, "state": str(v), "check_sector": check_n}},
        )
        raise CSAlgebraError(
            f"Interpolated H_{k} disagrees with sector N={check_n}",
            {"k": k, "state": str(v)},
        )
    return result


def vacuum_matrix_element(v: PPoly, n: int) -> XPoly:
    """<0| Psi(x_N) ... Psi(x_1) |v> by iterated vertex operators."""
    series = MultiSeries.from_state(v)
    for j in range(1, n + 1):
        # x_j is shifted N-j more times; exponents must end non-negative
        series = series.apply_psi(f"x{j}", lo=-(n - j))
    return series.pair_vacuum()


def _normal_ordered_pair(v: PPoly, lo: int) -> MultiSeries:
    """:Psi(z) Psi(w): v = (zw)^p_0 E(z) E(w) v(p_0 + 2, p + z^n + w^n), in (w, z)."""
    terms: dict[OffsetKey, PPoly] = {}
    for t_z, piece_z in v.shift_p0(2).power_shift(+1).items():
        for t_w, piece in piece_z.power_shift(+1).items():
            for m_z in range(t_z - lo + 1):
                for m_w in range(t_w - lo + 1):
                    key = (t_w - m_w, t_z - m_z)
                    value = piece * _psi_factor(m_z) * _psi_factor(m_w)
                    terms[key] = terms[key] + value if key in terms else value
    return MultiSeries((("w", 1), ("z", 1)), terms, (lo, lo))


def ope_psi_psi_check(v: PPoly, depth: int) -> bool:
    """Psi(z) Psi(w) v = (w - z) :Psi(z) Psi(w): v on offsets >= -depth."""
    lo = -depth
    lhs = MultiSeries.from_state(v).apply_psi("w", lo=lo - 1).apply_psi("z", lo=lo)
    normal = _normal_ordered_pair(v, lo - 1)
    rhs_terms: dict[OffsetKey, PPoly] = {}
    for (a, b), coeff in normal.items():
        for key, sign in (((a + 1, b), 1), ((a, b + 1), -1)):
            piece = coeff * sign
            rhs_terms[key] = rhs_terms[key] + piece if key in rhs_terms else piece
    rhs = MultiSeries(normal.variables, rhs_terms, (lo, lo))
    lhs = lhs.restrict("w", lo).restrict("z", lo)
    if lhs != rhs:
        logger.debug(
            "Operator product expansion mismatch",
            extra={"extra_fields": {"state": str(v), "depth": depth}},
        )
        return False
    return True


def unit_residue_check(v: PPoly, charge: int, depth: int) -> bool:
    """The contour integral of Psi(w) Psi*(z) around z = w is the identity.

    Both operator orderings are expanded, summed and residued in z at a
    fixed charge; what remains must be v(charge) * w^0 on the exact window.
    E(w) H(w) = 1 is checked on the same depth.
    """
    lo = -depth
    inner = (
        MultiSeries.from_state(v).apply_psi_star("z", lo=lo).apply_psi("w", lo=lo)
    )
    outer = MultiSeries.from_state(v).apply_psi("w", lo=lo).apply_psi_star("z", lo=lo)
    total = (inner + outer.reorder(inner.names)).at_charge(charge).residue("z")
    expected = v.substitute_p0(charge)
    window = total.lows[0]
    if window is not None and window > 0:
        raise WindowTooNarrow(
            f"w^0 outside the exact window from {window}", window=(window, None)
        )
    coefficients = dict(total.items())
    if coefficients.get((0,), PPoly()) != expected or any(
        not c.is_zero() for key, c in coefficients.items() if key != (0,)
    ):
        logger.debug(
            "Unit residue relation fails",
            extra={"extra_fields": {"state": str(v), "charge": charge, "depth": depth}},
        )
        return False

    e_series = ZSeries({-m: _psi_factor(m) for m in range(depth + 1)}, lo=lo)
    h_series = ZSeries({-m: _psi_star_factor(m) for m in range(depth + 1)}, lo=lo)
    return e_series * h_series == ZSeries({0: PPoly.const(1)}, lo=lo)
