"""Named verification suites and the runner that turns them into reports.

Every suite expands a parameter grid into cases up front (randomized inputs
are drawn sequentially from a seeded generator), evaluates the cases on a
thread pool and assembles a report in case order.
"""

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional

from pydantic import BaseModel, Field

from .algebra import BetaScalar, PPoly
from .config import CSConfig
from .debug_utils import DebugContext, DebugStats, dump_debug_info
from .dunkl import (
    MixedPoly,
    antisymmetrize_EN,
    direct_antisymmetrize,
    dunkl,
    dunkl_p,
    hamiltonian_antisym,
    hamiltonian_eq5,
    hbar_k,
    hk_finite_p,
    iota_embed,
    mixed_to_x,
)
from .errors import UnknownSuite
from .fermion import (
    WedgeCombination,
    a_n_apply,
    basis_wedges,
    bf_to_boson_combination,
    boson_apply_a,
    check_prop6,
    psi_k_apply,
    psi_star_k_apply,
    shift_Q,
)
from .fock import (
    ChargedSeries,
    D_limit,
    E_limit,
    hk_pipeline,
    iota_limit,
    ope_psi_psi_check,
    pi_N_closed,
    pi_slot,
    unit_residue_check,
    vacuum_matrix_element,
)
from .hamiltonians import (
    CorrectionVariant,
    bosonic_comparison,
    euler_operator,
    h_limit,
    h_limit_expanded,
    hk_explicit_finite,
    hk_explicit_limit,
    projective_correction,
)
from .logging_config import LogContext, get_logger, with_case_id
from .pdiff import (
    PDiffOp,
    apply_pdiffop,
    commutator_check,
    monomial_basis,
    restore_finite,
)
from .symfun import (
    Partition,
    alpha_N,
    homogeneous_in_p,
    lambda_N_project,
    lemma1_alternating_sum,
    partitions_of,
    partitions_up_to,
    reduce_p,
)
from .window import WindowPolicy

logger = get_logger(__name__)

Outcome = tuple[bool, dict[str, Any]]


class SuiteGrid(BaseModel):
    """Parameter grid shared by all suites; each suite caps what it needs."""

    n: int = Field(default=4, ge=2, le=6, description="Largest particle number")
    grade: int = Field(
        default=6, ge=0, le=8, description="Largest p-grade / partition weight"
    )
    kmax: int = Field(default=3, ge=0, le=4, description="Largest Hamiltonian index")
    trials: int = Field(default=10, ge=1, description="Random cases per grid point")
    timings: bool = Field(default=False, description="Include wall times in the report")


class CaseResult(BaseModel):
    suite: str
    index: int
    params: dict[str, Any]
    status: str = Field(pattern="^(pass|fail)$")
    payload: dict[str, Any] = Field(default_factory=dict)
    elapsed_ms: Optional[int] = None


class SuiteReport(BaseModel):
    suite: str
    seed: int
    grid: dict[str, Any]
    passed: int
    failed: int
    cases: list[CaseResult]
    summary: dict[str, str] = Field(default_factory=dict)
    elapsed_ms: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class Case:
    params: dict[str, Any]
    check: Callable[[], Outcome]


@dataclass
class Suite:
    name: str
    description: str
    build: Callable[[SuiteGrid, random.Random, CSConfig], list[Case]]
    summarize: Optional[Callable[[list[CaseResult]], dict[str, str]]] = None


def _same(lhs: Any, rhs: Any) -> Outcome:
    if lhs == rhs:
        return True, {}
    return False, {"lhs": str(lhs), "rhs": str(rhs)}


def _ns(grid: SuiteGrid, cap: int) -> range:
    return range(2, min(grid.n, cap) + 1)


# Random inputs


def random_ppoly(
    rng: random.Random, grade: int, p0_degree: int = 0, terms: int = 3
) -> PPoly:
    """A few monomials of grade <= grade with small nonzero integer coefficients."""
    pool = [lam for g in range(grade + 1) for lam in partitions_of(g)]
    result = PPoly()
    for _ in range(terms):
        lam = rng.choice(pool)
        zeros = rng.randint(0, p0_degree)
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        result = result + PPoly({lam.parts + (0,) * zeros: coeff})
    if result.is_zero():
        result = PPoly.p(1) if grade else PPoly.const(1)
    return result


def random_mixed(
    rng: random.Random, nvars: int, grade: int, max_power: int = 3
) -> MixedPoly:
    terms = {
        power: random_ppoly(rng, max(grade - power, 0), terms=2)
        for power in rng.sample(range(max_power + 1), 2)
    }
    return MixedPoly(nvars, terms)


# Finite-N suites


def _lemma1(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 5):
        for k in range(2 * n + 1):

            def check(k: int = k, n: int = n) -> Outcome:
                expected = alpha_N(homogeneous_in_p(k + 1 - n), n)
                return _same(lemma1_alternating_sum(k, n), expected)

            cases.append(Case({"n": n, "k": k}, check))
    return cases


def _prop1(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for trial in range(grid.trials):
            f = random_ppoly(rng, grid.grade)

            def check(f: PPoly = f, n: int = n) -> Outcome:
                embedded = iota_embed(f, n)
                expected = alpha_N(f, n)
                for i in range(1, n + 1):
                    ok, payload = _same(mixed_to_x(embedded, n, i), expected)
                    if not ok:
                        return False, {**payload, "slot": i}
                return True, {}

            cases.append(Case({"n": n, "trial": trial, "f": str(f)}, check))
    return cases


def _prop2(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for trial in range(grid.trials):
            h = random_mixed(rng, n - 1, grid.grade)

            def check(h: MixedPoly = h, n: int = n) -> Outcome:
                lhs = alpha_N(antisymmetrize_EN(h, n), n)
                return _same(lhs, direct_antisymmetrize(h, n))

            cases.append(Case({"n": n, "trial": trial, "h": str(h)}, check))
    return cases


def _prop3(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for trial in range(grid.trials):
            h = random_mixed(rng, n - 1, min(grid.grade, 5))

            def check(h: MixedPoly = h, n: int = n) -> Outcome:
                image = dunkl_p(h, n)
                for i in range(1, n + 1):
                    ok, payload = _same(
                        mixed_to_x(image, n, i), dunkl(mixed_to_x(h, n, i), i, n)
                    )
                    if not ok:
                        return False, {**payload, "slot": i}
                return True, {}

            cases.append(Case({"n": n, "trial": trial, "h": str(h)}, check))
    return cases


def _eq5(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for trial in range(grid.trials):
            g = alpha_N(random_ppoly(rng, min(grid.grade, 4)), n)

            def check(g: Any = g, n: int = n) -> Outcome:
                return _same(hamiltonian_antisym(g, n), hamiltonian_eq5(g, n))

            cases.append(Case({"n": n, "trial": trial, "g": str(g)}, check))
    return cases


def _sec38_vs_eq23(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for k in range(1, min(grid.kmax, 2) + 1):
            op = hk_explicit_finite(k, n, grid.grade)
            for mono in monomial_basis(grid.grade):

                def check(
                    k: int = k, n: int = n, mono: PPoly = mono, op: Any = op
                ) -> Outcome:
                    expected = reduce_p(apply_pdiffop(op, mono), n)
                    return _same(hk_finite_p(k, n, mono), expected)

                cases.append(Case({"n": n, "k": k, "state": str(mono)}, check))
    return cases


def _hbar_commute(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    top = min(max(grid.kmax, 1), 3)
    for n in _ns(grid, 4):
        for trial in range(max(grid.trials // 2, 1)):
            g = alpha_N(random_ppoly(rng, min(grid.grade, 3)), n)
            for k in range(1, top + 1):
                for m in range(k + 1, top + 1):

                    def check(
                        g: Any = g, n: int = n, k: int = k, m: int = m
                    ) -> Outcome:
                        return _same(
                            hbar_k(hbar_k(g, m, n), k, n), hbar_k(hbar_k(g, k, n), m, n)
                        )

                    cases.append(Case({"n": n, "trial": trial, "k": k, "m": m}, check))
    return cases


# Limit suites


def _sector_depth(v: PPoly, n: int) -> int:
    return v.grade + n + 1


def _lemma2(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 3):
        for trial in range(grid.trials):
            v = random_ppoly(rng, min(grid.grade, 4), p0_degree=1)

            def check(v: PPoly = v, n: int = n) -> Outcome:
                lhs = pi_slot(iota_limit(v, _sector_depth(v, n)), n)
                return _same(lhs, iota_embed(v.substitute_p0(n), n))

            cases.append(Case({"n": n, "trial": trial, "v": str(v)}, check))
    return cases


def _random_charged(rng: random.Random, n: int, grade: int) -> ChargedSeries:
    floor = -(n - 1)
    offsets = rng.sample(range(floor, 3), 2)
    return ChargedSeries(
        {k: random_ppoly(rng, grade, p0_degree=1, terms=2) for k in offsets}, lo=floor
    )


def _lemma3(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 3):
        for trial in range(grid.trials):
            series = _random_charged(rng, n, min(grid.grade, 3))

            def check(series: ChargedSeries = series, n: int = n) -> Outcome:
                lhs = alpha_N(E_limit(series, n), n)
                rhs = alpha_N(antisymmetrize_EN(pi_slot(series, n), n), n)
                return _same(lhs, rhs)

            cases.append(Case({"n": n, "trial": trial, "series": str(series)}, check))
    return cases


def _diagram35(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 3):
        for trial in range(grid.trials):
            v = random_ppoly(rng, min(grid.grade, 4), p0_degree=1)

            def check(v: PPoly = v, n: int = n) -> Outcome:
                series = iota_limit(v, _sector_depth(v, n))
                lhs = pi_slot(D_limit(series, n), n)
                return _same(lhs, dunkl_p(pi_slot(series, n), n))

            cases.append(Case({"n": n, "trial": trial, "v": str(v)}, check))
    return cases


def _diagram37(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    grade = min(grid.grade, 5)
    policy = WindowPolicy.from_config(config)
    for n in _ns(grid, 3):
        for k in range(0, min(grid.kmax, 3) + 1):
            for trial in range(max(grid.trials // 2, 1)):
                v = random_ppoly(rng, grade, p0_degree=1, terms=2)

                def check(v: PPoly = v, n: int = n, k: int = k) -> Outcome:
                    if k <= 2:
                        image = apply_pdiffop(hk_explicit_limit(k, grade), v)
                    else:
                        image = hk_pipeline(k, v, policy)
                    return _same(pi_N_closed(image, n), hbar_k(pi_N_closed(v, n), k, n))

                route = "closed-form" if k <= 2 else "pipeline"
                params = {"n": n, "k": k, "trial": trial, "route": route, "v": str(v)}
                cases.append(Case(params, check))
    return cases


def _pipeline(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    grade = min(grid.grade, 5)
    policy = WindowPolicy.from_config(config)
    for k in range(0, min(grid.kmax, 2) + 1):
        op = hk_explicit_limit(k, grade)
        for mono in monomial_basis(grade, p0_degree=2):

            def check(k: int = k, mono: PPoly = mono, op: Any = op) -> Outcome:
                return _same(hk_pipeline(k, mono, policy), apply_pdiffop(op, mono))

            cases.append(Case({"k": k, "state": str(mono)}, check))
    return cases


def _limit_commute(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    grade = grid.grade
    ops = {f"H{k}": hk_explicit_limit(k, grade) for k in range(3)}
    ops["euler"] = euler_operator(grade)
    pairs = [("H1", "H2"), ("H0", "H1"), ("H0", "H2"), ("H1", "euler")]
    cases = []
    for a, b in pairs:

        def check(a: str = a, b: str = b) -> Outcome:
            return commutator_check(ops[a], ops[b], grade, p0_degree=2), {}

        cases.append(Case({"a": a, "b": b, "grade": grade, "p0_degree": 2}, check))
    return cases


def _restore_finite(
    grid: SuiteGrid, rng: random.Random, config: CSConfig
) -> list[Case]:
    formal = BetaScalar.formal_n()
    cases = []
    for k in range(3):

        def check(k: int = k) -> Outcome:
            restored = restore_finite(hk_explicit_limit(k, grid.grade), formal)
            return _same(restored, hk_explicit_finite(k, formal, grid.grade))

        cases.append(Case({"k": k, "n": "formal"}, check))
    for n in _ns(grid, 6):

        def check_int(n: int = n) -> Outcome:
            restored = restore_finite(hk_explicit_limit(0, grid.grade), n)
            return _same(restored, PDiffOp.scalar(n))

        cases.append(Case({"k": 0, "n": n}, check_int))
    return cases


def _h_combination(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    def check() -> Outcome:
        return _same(h_limit(grid.grade), h_limit_expanded(grid.grade))

    def bosonic() -> Outcome:
        # b -> b - 1 at p0 = 0; recorded for comparison, nothing to assert
        return True, {"operator": str(bosonic_comparison(grid.grade))}

    return [
        Case({"grade": grid.grade}, check),
        Case({"grade": grid.grade, "record": "bosonic-comparison"}, bosonic),
    ]


def _summarize_h_combination(results: list[CaseResult]) -> dict[str, str]:
    recorded = [r.payload["operator"] for r in results if "operator" in r.payload]
    return {"bosonic_comparison": recorded[0]} if recorded else {}


def _projective_consistent(
    variant: CorrectionVariant, f: PPoly, n: int, grade: int
) -> bool:
    bigger = apply_pdiffop(projective_correction(2, n + 1, variant, grade), f)
    smaller = apply_pdiffop(projective_correction(2, n, variant, grade), f)
    return lambda_N_project(alpha_N(bigger, n + 1)) == alpha_N(smaller, n)


def _projective(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 3):
        for trial in range(grid.trials):
            # grade <= N keeps alpha_N injective on the test state
            f = random_ppoly(rng, n)
            if f.grade == 0:
                f = f + PPoly.p(1)

            def check(f: PPoly = f, n: int = n) -> Outcome:
                consistent = [
                    variant.value
                    for variant in CorrectionVariant
                    if _projective_consistent(variant, f, n, max(f.grade, 1))
                ]
                verdict = ",".join(consistent) or "none"
                return len(consistent) == 1, {"consistent": verdict}

            cases.append(Case({"n": n, "trial": trial, "f": str(f)}, check))
    return cases


def _summarize_projective(results: list[CaseResult]) -> dict[str, str]:
    verdicts = {r.payload.get("consistent", "none") for r in results}
    if len(verdicts) == 1:
        verdict = verdicts.pop()
    else:
        verdict = "mixed"
    return {"consistent_variant": verdict}


def _vertex(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    grade = min(grid.grade, 3)
    for g in range(grade + 1):
        for lam in partitions_of(g):
            v = PPoly({lam.parts: 1})
            depth = g + 2

            def ope(v: PPoly = v, depth: int = depth) -> Outcome:
                return ope_psi_psi_check(v, depth), {}

            cases.append(Case({"identity": "ope", "v": str(v)}, ope))
            for charge in range(3):

                def unit(
                    v: PPoly = v, depth: int = depth, charge: int = charge
                ) -> Outcome:
                    return unit_residue_check(v, charge, depth + 1), {}

                params = {"identity": "unit-residue", "v": str(v), "charge": charge}
                cases.append(Case(params, unit))
            for n in _ns(grid, 3):

                def matrix_element(v: PPoly = v, n: int = n) -> Outcome:
                    return _same(vacuum_matrix_element(v, n), pi_N_closed(v, n))

                params = {"identity": "vacuum-matrix-element", "v": str(v), "n": n}
                cases.append(Case(params, matrix_element))
    return cases


# Fermionic suites


def _anticommutator(
    first: Callable[[WedgeCombination, int], WedgeCombination],
    second: Callable[[WedgeCombination, int], WedgeCombination],
    w: WedgeCombination,
    i: int,
    j: int,
) -> WedgeCombination:
    return first(second(w, j), i) + second(first(w, i), j)


def _clifford(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    bound = min(grid.grade, 6)
    cases = []
    for w in basis_wedges(min(grid.grade, 5), range(-2, 3)):

        def check(w: WedgeCombination = w) -> Outcome:
            for i in range(-bound, bound + 1):
                for j in range(-bound, bound + 1):
                    mixed = _anticommutator(psi_k_apply, psi_star_k_apply, w, i, j)
                    expected = w if i == j else WedgeCombination()
                    both = _anticommutator(psi_k_apply, psi_k_apply, w, i, j)
                    star = _anticommutator(psi_star_k_apply, psi_star_k_apply, w, i, j)
                    if mixed != expected or not (both.is_zero() and star.is_zero()):
                        return False, {"i": i, "j": j}
                # e^Q psi_i e^-Q = psi_(i+1)
                conjugated = shift_Q(psi_k_apply(shift_Q(w, -1), i), 1)
                if conjugated != psi_k_apply(w, i + 1):
                    return False, {"conjugation_index": i}
            return True, {}

        cases.append(Case({"wedge": str(w)}, check))
    return cases


def _boson_relations(
    grid: SuiteGrid, rng: random.Random, config: CSConfig
) -> list[Case]:
    cases = []
    for w in basis_wedges(min(grid.grade, 4), range(-1, 2)):

        def check(w: WedgeCombination = w) -> Outcome:
            for k in range(-4, 5):
                for m in range(-4, 5):
                    bracket = a_n_apply(a_n_apply(w, m), k)
                    bracket = bracket - a_n_apply(a_n_apply(w, k), m)
                    expected = w * k if k + m == 0 else WedgeCombination()
                    if bracket != expected:
                        return False, {"k": k, "m": m, "bracket": str(bracket)}
            sectors = bf_to_boson_combination(w)
            for n in range(-4, 5):
                image = bf_to_boson_combination(a_n_apply(w, n))
                expected = {
                    c: boson_apply_a(n, c, state) for c, state in sectors.items()
                }
                expected = {c: s for c, s in expected.items() if not s.is_zero()}
                if image != expected:
                    return False, {"n": n, "lhs": str(image), "rhs": str(expected)}
            return True, {}

        cases.append(Case({"wedge": str(w)}, check))
    return cases


def _prop6(grid: SuiteGrid, rng: random.Random, config: CSConfig) -> list[Case]:
    cases = []
    for n in _ns(grid, 4):
        for lam in partitions_up_to(grid.grade):
            if lam.length > n:
                continue

            def check(lam: Partition = lam, n: int = n) -> Outcome:
                return check_prop6(lam, n, n), {}

            cases.append(Case({"n": n, "charge": n, "partition": str(lam)}, check))
        for lam in partitions_up_to(2):
            for charge in (n - 1, n + 1):

                def mismatch(
                    lam: Partition = lam, n: int = n, charge: int = charge
                ) -> Outcome:
                    return check_prop6(lam, charge, n), {}

                params = {"n": n, "charge": charge, "partition": str(lam)}
                cases.append(Case(params, mismatch))
    return cases


SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in [
        Suite(
            "lemma1",
            "Alternating sums of slot powers against Vandermonde times h",
            _lemma1,
        ),
        Suite(
            "prop1", "Slot embedding reproduces the antisymmetric polynomial", _prop1
        ),
        Suite(
            "prop2", "Residue antisymmetrization against the alternating sum", _prop2
        ),
        Suite(
            "prop3", "Slot Dunkl operator against the x-space Dunkl operator", _prop3
        ),
        Suite("eq5", "Hamiltonian from the first two commuting Hamiltonians", _eq5),
        Suite(
            "sec38-vs-eq23",
            "Closed-form finite Hamiltonians against the pipeline",
            _sec38_vs_eq23,
        ),
        Suite("hbar-commute", "Finite Hamiltonians commute", _hbar_commute),
        Suite(
            "lemma2", "Evaluation after inclusion equals the slot embedding", _lemma2
        ),
        Suite(
            "lemma3",
            "Evaluation after antisymmetrization, limit against finite",
            _lemma3,
        ),
        Suite(
            "diagram35",
            "Slot evaluation intertwines the limit Dunkl operator",
            _diagram35,
        ),
        Suite("diagram37", "Evaluation intertwines the limit Hamiltonians", _diagram37),
        Suite(
            "pipeline", "Vertex-operator pipeline against the closed forms", _pipeline
        ),
        Suite("limit-commute", "Limit Hamiltonians commute", _limit_commute),
        Suite(
            "restore-finite",
            "p0 -> N restores the finite Hamiltonians",
            _restore_finite,
        ),
        Suite(
            "h-combination",
            "Combined Hamiltonian normal-orders to its expansion",
            _h_combination,
            _summarize_h_combination,
        ),
        Suite(
            "projective",
            "Which correction commutes with removing a variable",
            _projective,
            _summarize_projective,
        ),
        Suite(
            "vertex",
            "Operator product and unit residue of the vertex operators",
            _vertex,
        ),
        Suite("clifford", "Anticommutators and charge-shift conjugation", _clifford),
        Suite(
            "boson-relations",
            "Heisenberg relations and the bosonization dictionary",
            _boson_relations,
        ),
        Suite("prop6", "Cutting a wedge against evaluating its bosonic image", _prop6),
    ]
}


def list_suites() -> list[tuple[str, str]]:
    return [(name, suite.description) for name, suite in SUITES.items()]


def _evaluate(
    suite: str,
    index: int,
    case: Case,
    grid: SuiteGrid,
    config: CSConfig,
    stats: DebugStats,
) -> CaseResult:
    start = time.perf_counter()

    @with_case_id(f"{suite}:{index}")
    def run() -> Outcome:
        if not config.enable_debug_mode:
            return case.check()
        with DebugContext(f"{suite}:{index}") as ctx:
            ctx.checkpoint("case_start", case.params)
            outcome = case.check()
            ctx.checkpoint("case_done", {"passed": outcome[0]})
            return outcome

    try:
        passed, payload = run()
    except Exception as e:
        passed, payload = False, {"error_type": type(e).__name__, "message": str(e)}
    elapsed = time.perf_counter() - start
    stats.record("case_seconds", elapsed)

    if config.log_slow_cases and elapsed > config.log_slow_case_threshold:
        logger.warning(
            f"Slow case detected: {elapsed:.2f}s > "
            f"{config.log_slow_case_threshold}s threshold",
            extra={"extra_fields": {"suite": suite, "index": index, "slow_case": True}},
        )
    if not passed:
        logger.warning(
            f"Case failed: {suite}:{index}",
            extra={"extra_fields": {"params": case.params, "payload": payload}},
        )
    return CaseResult(
        suite=suite,
        index=index,
        params=case.params,
        status="pass" if passed else "fail",
        payload=payload,
        elapsed_ms=int(elapsed * 1000) if grid.timings else None,
    )


def run_suite(
    name: str,
    seed: Optional[int] = None,
    grid: Optional[SuiteGrid] = None,
    config: Optional[CSConfig] = None,
) -> SuiteReport:
    """Run one named suite.

    Args:
        name: Suite name from the catalog
        seed: Seed for randomized inputs (defaults to the config seed)
        grid: Parameter grid (defaults to the acceptance grid)
        config: Runtime configuration

    Returns:
        Report with one record per case, in case order

    Raises:
        UnknownSuite: If the name is not in the catalog
    """
    cfg = config or CSConfig()
    if name not in SUITES:
        logger.error(f"Unknown suite: {name}", extra={"extra_fields": {"suite": name}})
        raise UnknownSuite(f"Unknown suite {name!r}", {"known": sorted(SUITES)})
    suite = SUITES[name]
    seed = cfg.seed if seed is None else seed
    grid = grid or SuiteGrid(trials=cfg.trials)

    start = time.perf_counter()
    cases = suite.build(grid, random.Random(seed), cfg)
    logger.info(
        f"Running suite {name}",
        extra={
            "extra_fields": {"cases": len(cases), "seed": seed, "workers": cfg.workers}
        },
    )
    stats = DebugStats()
    with LogContext(logger, suite=name, seed=seed):
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [
                pool.submit(_evaluate, name, index, case, grid, cfg, stats)
                for index, case in enumerate(cases)
            ]
            results = sorted((f.result() for f in futures), key=lambda r: r.index)
    elapsed = time.perf_counter() - start

    failed = sum(1 for r in results if r.status == "fail")
    report = SuiteReport(
        suite=name,
        seed=seed,
        grid=grid.model_dump(exclude={"timings"}),
        passed=len(results) - failed,
        failed=failed,
        cases=results,
        summary=suite.summarize(results) if suite.summarize else {},
        elapsed_ms=int(elapsed * 1000) if grid.timings else None,
    )
    level = logger.info if report.ok else logger.warning
    level(
        f"Suite {name} finished: {report.passed} passed, {report.failed} failed",
        extra={"extra_fields": {"elapsed_s": round(elapsed, 3), **report.summary}},
    )
    if cfg.enable_debug_mode:
        stats.log_summary()
        if not report.ok:
            dump_debug_info(report, cfg)
    return report
