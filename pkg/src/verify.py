"""Coefficient inequality suites, power checks and the reference suite.

This module provides:

- Clause-by-clause reports for the inequalities forced by a Cohen-Macaulay
  associated graded ring, each clause carrying the integers it compares
- The chain 10e_0 >= 2e_1 >= e_2 >= e_3 >= 2e_4 >= 10e_5 >= 0
- Invariance of e_d under powers and polynomial growth of e_i(I^n) in n
- The e_1 lower bound, the curve bound 0 <= e_1 <= delta and a
  brute-force colength oracle
- The reference suite of worked examples run as independent rows
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import partial
from typing import Any

from sympy import Poly, Symbol, expand, interpolate

from src.algebra_core import MonomialOrder, RingContext
from src.budget import ComputationBudget
from src.config import EngineConfig
from src.corpus import (
    NON_CM_COEFFICIENTS,
    PAIR_RANGE,
    CorpusIdeal,
    curve_corpus,
    curve_ideal_pairs,
    hyperelliptic_pair_ideal,
    jacobian_ideal,
    non_cm_space_ideal,
    parameter_corpus,
    power_corpus,
)
from src.curves import PlaneCurve, delta, is_hironaka
from src.errors import InvariantViolation, PreconditionError, ToolkitError
from src.groebner import INFINITE, colength
from src.hilbert import HilbertSamuelData, choose, e_coefficients, ev91_e_from_a
from src.ideals import Ideal, iter_powers, length_I_mod_I2, minimal_generator_count
from src.metrics import PerformanceTracker
from src.parallel_executor import ParallelExecutor, Task, TaskPriority

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Comparison:
    """A chain v_0 <= v_1 <= ... of exact integers."""

    label: str
    chain: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return all(a <= b for a, b in zip(self.chain, self.chain[1:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "chain": [str(v) for v in self.chain],
            "holds": self.holds,
        }


@dataclass(frozen=True)
class HHCReport:
    """Coefficient inequalities for one ideal.

    Attributes:
        data: Hilbert-Samuel data of the ideal
        colength_squared_quotient: length(I/I^2)
        mu: Minimal number of generators
        clause_i_printed: s <= e_0 + d + 1 - length(I/I^2) <= e_0
        clause_i_mu: s <= e_0 + d + 1 - mu(I) <= e_0
        a1_readings: a_1 against length(I/I^2) - d and mu(I) - d
        vanishing: e_i = 0 for s < i <= d
        ratios: 0 <= (i+1) e_(i+1) <= (s-i) e_i for i = 0..s
        binomial_bounds: 0 <= e_i <= C(s, i) e_0 for i = 0..d
        a_positive: a_i > 0 for each i = 0..s
    """

    data: HilbertSamuelData
    colength_squared_quotient: int
    mu: int
    clause_i_printed: Comparison
    clause_i_mu: Comparison
    a1_readings: tuple[Comparison, ...]
    vanishing: tuple[Comparison, ...]
    ratios: tuple[Comparison, ...]
    binomial_bounds: tuple[Comparison, ...]
    a_positive: tuple[bool, ...]

    @property
    def hypotheses_witnessed(self) -> bool:
        """All a_i positive, the observable consequence of a Cohen-Macaulay gr."""
        return all(self.a_positive)

    @property
    def clauses_ii_to_iv_hold(self) -> bool:
        return all(c.holds for c in self.vanishing + self.ratios + self.binomial_bounds)

    def to_dict(self) -> dict[str, Any]:
        return {
            "e": [str(x) for x in self.data.e],
            "a": [str(x) for x in self.data.a],
            "s": str(self.data.s),
            "length_I_mod_I2": str(self.colength_squared_quotient),
            "mu": str(self.mu),
            "clause_i": {
                "printed": self.clause_i_printed.to_dict(),
                "mu": self.clause_i_mu.to_dict(),
            },
            "a1": [c.to_dict() for c in self.a1_readings],
            "clause_ii": [c.to_dict() for c in self.vanishing],
            "clause_iii": [c.to_dict() for c in self.ratios],
            "clause_iv": [c.to_dict() for c in self.binomial_bounds],
            "a_positive": list(self.a_positive),
            "hypotheses_witnessed": self.hypotheses_witnessed,
        }


def check_hhc(
    ideal: Ideal,
    config: EngineConfig | None = None,
    strict: bool = False,
    data: HilbertSamuelData | None = None,
    budget: ComputationBudget | None = None,
) -> HHCReport:
    """Evaluate every clause of the coefficient inequalities.

    Clauses are reported, not enforced: the Cohen-Macaulay hypothesis is not
    decided here. With ``strict`` set, clauses (ii) to (iv) are enforced
    whenever every a_i is positive.

    Raises:
        NotStabilizedError: If the coefficients cannot be computed
        InvariantViolation: In strict mode, if a clause fails for a positive a-vector
    """
    data = data or e_coefficients(ideal, config, budget=budget)
    d, s, e0 = data.d, data.s, data.e[0]
    extended = ev91_e_from_a(data.a, max(d, s) + 1)
    length_quotient = length_I_mod_I2(ideal, budget)
    mu = minimal_generator_count(ideal, budget)
    a1 = data.a[1] if s >= 1 else 0

    report = HHCReport(
        data=data,
        colength_squared_quotient=length_quotient,
        mu=mu,
        clause_i_printed=Comparison("s <= e0+d+1-length(I/I^2) <= e0", (s, e0 + d + 1 - length_quotient, e0)),
        clause_i_mu=Comparison("s <= e0+d+1-mu <= e0", (s, e0 + d + 1 - mu, e0)),
        a1_readings=(
            Comparison("a1 = length(I/I^2)-d", (a1, length_quotient - d, a1)),
            Comparison("a1 = mu-d", (a1, mu - d, a1)),
        ),
        vanishing=tuple(Comparison(f"e{i} = 0", (0, data.e[i], 0)) for i in range(s + 1, d + 1)),
        ratios=tuple(
            Comparison(f"0 <= {i + 1}e{i + 1} <= {s - i}e{i}", (0, (i + 1) * extended[i + 1], (s - i) * extended[i]))
            for i in range(s + 1)
        ),
        binomial_bounds=tuple(
            Comparison(f"0 <= e{i} <= C({s},{i})e0", (0, data.e[i], choose(s, i) * e0)) for i in range(d + 1)
        ),
        a_positive=tuple(x > 0 for x in data.a),
    )
    if not report.hypotheses_witnessed:
        logger.info("%s: a-vector %s has non-positive entries, hypotheses not witnessed", ideal, data.a)
    elif strict and not report.clauses_ii_to_iv_hold:
        raise InvariantViolation(
            f"coefficient inequalities fail for {ideal} with positive a-vector", e=data.e, a=data.a
        )
    return report


@dataclass(frozen=True)
class ChainReport:
    """Links of the chain 10e_0 >= 2e_1 >= e_2 >= e_3 >= 2e_4 >= 10e_5 >= 0."""

    values: tuple[int, ...]
    links: tuple[bool, ...]

    @property
    def holds(self) -> bool:
        return all(self.links)


S5_WEIGHTS = (10, 2, 1, 1, 2, 10)


def check_s5_chain(e: tuple[int, ...] | list[int]) -> ChainReport:
    """Per-link truth values of the chain for a numerator of degree five.

    Raises:
        PreconditionError: Unless exactly six coefficients are given
    """
    if len(e) != 6:
        raise PreconditionError(f"the chain needs 6 coefficients, got {len(e)}")
    values = tuple(w * x for w, x in zip(S5_WEIGHTS, e)) + (0,)
    return ChainReport(values, tuple(a >= b for a, b in zip(values, values[1:])))


@dataclass(frozen=True)
class PowerReport:
    """e-vectors of I^n for n = 1..n_max.

    Attributes:
        table: e-vector of I^n at index n - 1
        fits: For growth checks, e_i(I^n) as a polynomial in n, per i
        degrees: Degree in n of each fitted polynomial (-1 for zero)
        first: Full Hilbert-Samuel data of I itself
    """

    table: tuple[tuple[int, ...], ...]
    fits: tuple[str, ...] = ()
    degrees: tuple[int, ...] = ()
    first: HilbertSamuelData | None = field(default=None, compare=False)

    @property
    def d(self) -> int:
        return len(self.table[0]) - 1

    @property
    def last_constant(self) -> bool:
        """e_d(I^n) is the same for every n."""
        return len({row[-1] for row in self.table}) == 1

    @property
    def degrees_bounded(self) -> bool:
        return all(deg <= self.d for deg in self.degrees)

    def to_dict(self) -> dict[str, Any]:
        return {
            "table": [[str(x) for x in row] for row in self.table],
            "e_d_constant": self.last_constant,
            "fits": list(self.fits),
            "degrees": [str(x) for x in self.degrees],
        }


def _power_table(
    ideal: Ideal, n_max: int, config: EngineConfig | None, budget: ComputationBudget | None
) -> tuple[tuple[tuple[int, ...], ...], HilbertSamuelData]:
    table = []
    first = None
    for n, power in enumerate(iter_powers(ideal, budget), start=1):
        if n > n_max:
            break
        data = e_coefficients(power, config, budget=budget)
        if first is None:
            first = data
        table.append(data.e)
        logger.debug("e(I^%d) = %s", n, table[-1])
    assert first is not None
    return tuple(table), first


def check_power_invariance(
    ideal: Ideal,
    n_max: int = 3,
    config: EngineConfig | None = None,
    budget: ComputationBudget | None = None,
) -> PowerReport:
    """e_d(I^n) = e_d(I) for n = 1..n_max.

    Raises:
        PreconditionError: If n_max < 2
        InvariantViolation: If e_d changes with n
    """
    if n_max < 2:
        raise PreconditionError("power checks need n_max >= 2", n_max=n_max)
    table, first = _power_table(ideal, n_max, config, budget)
    report = PowerReport(table, first=first)
    if not report.last_constant:
        raise InvariantViolation(
            f"e_d of the powers of {ideal} is not constant",
            column=[row[-1] for row in report.table],
        )
    return report


def check_power_polynomial_growth(
    ideal: Ideal,
    n_max: int | None = None,
    config: EngineConfig | None = None,
    budget: ComputationBudget | None = None,
) -> PowerReport:
    """Fit e_i(I^n) as polynomials in n.

    Raises:
        PreconditionError: If n_max < d + 2
        InvariantViolation: Unless e_0(I^n) = n^d e_0(I)
    """
    d = ideal.ring.dimension
    n_max = d + 2 if n_max is None else n_max
    if n_max < d + 2:
        raise PreconditionError(f"growth fits need n_max >= {d + 2}", n_max=n_max)
    table, first = _power_table(ideal, n_max, config, budget)

    for n, row in enumerate(table, start=1):
        if row[0] != n**d * table[0][0]:
            raise InvariantViolation(f"e_0(I^{n}) = {row[0]} != {n}^{d} * {table[0][0]}")

    n = Symbol("n")
    fits, degrees = [], []
    for i in range(d + 1):
        points = [(k, row[i]) for k, row in enumerate(table, start=1)]
        poly = expand(interpolate(points, n))
        fits.append(str(poly))
        degrees.append(-1 if poly == 0 else Poly(poly, n).degree())
    return PowerReport(table, tuple(fits), tuple(degrees), first)


@dataclass(frozen=True)
class NorthcottReport:
    """e_1 >= e_0 - length(R/I) >= 0, with the equality flag and the sign of e_2."""

    e: tuple[int, ...]
    colength: int

    @property
    def bound(self) -> Comparison:
        return Comparison("0 <= e0-length(R/I) <= e1", (0, self.e[0] - self.colength, self.e[1]))

    @property
    def equality(self) -> bool:
        return self.e[1] == self.e[0] - self.colength

    @property
    def e2_nonnegative(self) -> bool | None:
        return self.e[2] >= 0 if len(self.e) > 2 else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "e": [str(x) for x in self.e],
            "colength": str(self.colength),
            "bound": self.bound.to_dict(),
            "equality": self.equality,
            "e2_nonnegative": self.e2_nonnegative,
        }


def check_northcott_bound(
    ideal: Ideal, config: EngineConfig | None = None, budget: ComputationBudget | None = None
) -> NorthcottReport:
    """Lower bound for e_1 of an m-primary ideal of positive dimension.

    Raises:
        PreconditionError: If the ring has dimension zero
    """
    n = ideal.require_m_primary(budget)
    data = e_coefficients(ideal, config, budget=budget)
    if data.d < 1:
        raise PreconditionError("the e_1 bound needs a ring of positive dimension")
    return NorthcottReport(data.e, n)


@dataclass(frozen=True)
class CurveBoundReport:
    """0 <= e_1(K) <= delta over a family of ideals of one curve."""

    delta: int
    e1: tuple[int, ...]
    witnesses: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return all(0 <= e1 <= self.delta for e1 in self.e1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "delta": str(self.delta),
            "e1": [str(x) for x in self.e1],
            "witnesses": [str(x) for x in self.witnesses],
            "holds": self.holds,
        }


def check_curve_bound(
    curve: PlaneCurve,
    ideals: list[Ideal],
    config: EngineConfig | None = None,
    budget: ComputationBudget | None = None,
) -> CurveBoundReport:
    """e_1 of each ideal lies in [0, delta]; ideals with e_1 = delta are witnesses.

    Raises:
        InequalityViolation: If some e_1 leaves [0, delta]
    """
    value = delta(curve.f, config, budget=budget).delta
    reports = [is_hironaka(curve, ideal, config, value, budget) for ideal in ideals]
    witnesses = tuple(i for i, r in enumerate(reports) if r.hironaka)
    return CurveBoundReport(value, tuple(r.e1 for r in reports), witnesses)


@dataclass(frozen=True)
class OracleReport:
    """Groebner colength against a lattice count, per random monomial ideal."""

    rows: tuple[tuple[str, int, int], ...]

    @property
    def mismatches(self) -> list[tuple[str, int, int]]:
        return [row for row in self.rows if row[1] != row[2]]


def lattice_colength(exponents: list[tuple[int, ...]], box: tuple[int, ...]) -> int:
    """Lattice points of the box outside the monomial ideal."""
    return sum(
        1
        for point in itertools.product(*(range(b) for b in box))
        if not any(all(e <= p for e, p in zip(gen, point)) for gen in exponents)
    )


def random_monomial_ideal(rng: random.Random) -> tuple[RingContext, list[tuple[int, ...]], tuple[int, ...]]:
    """A random m-primary monomial ideal in at most three variables."""
    arity = rng.randint(1, 3)
    context = RingContext(("x", "y", "z")[:arity])
    box = tuple(rng.randint(1, 7) for _ in range(arity))
    gens = [tuple(b if k == i else 0 for k in range(arity)) for i, b in enumerate(box)]
    for _ in range(rng.randint(0, 4)):
        gens.append(tuple(rng.randint(0, b) for b in box))
    return context, [g for g in gens if any(g)], box


def check_oracle_equivalence(
    seed: int = 0, count: int = 50, budget: ComputationBudget | None = None
) -> OracleReport:
    """Compare colength with brute-force counting on random monomial ideals."""
    rng = random.Random(seed)
    rows = []
    for _ in range(count):
        context, gens, box = random_monomial_ideal(rng)
        polys = [context.monomial(g) for g in gens]
        computed = colength(polys, context, MonomialOrder.DEGREVLEX, budget)
        text = ", ".join(p.to_text() for p in polys)
        rows.append((text, -1 if computed is INFINITE else computed, lattice_colength(gens, box)))
    return OracleReport(tuple(rows))


@dataclass(frozen=True)
class SuiteRow:
    """One reference computation.

    Attributes:
        key: Stable row identifier
        expected: Expected values as decimal strings
        computed: Computed values as decimal strings
        informational: Row reported but never failing
        duration_ms: Wall time of the row
    """

    key: str
    expected: dict[str, str]
    computed: dict[str, str]
    informational: bool = False
    duration_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.informational or self.expected == self.computed

    def to_dict(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
            "informational": self.informational,
        }


@dataclass
class SuiteReport:
    """Rows of the reference suite in a fixed order."""

    rows: list[SuiteRow] = field(default_factory=list)
    tracker: PerformanceTracker = field(default_factory=PerformanceTracker)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> list[SuiteRow]:
        return [row for row in self.rows if not row.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "rows": [row.to_dict() for row in self.rows],
        }


def _strs(values: Any) -> str:
    if isinstance(values, (tuple, list)):
        return "(" + ",".join(str(v) for v in values) + ")"
    return str(values)


def _row(key: str, expected: dict[str, Any], computed: dict[str, Any], informational: bool = False) -> SuiteRow:
    return SuiteRow(
        key,
        {k: _strs(v) for k, v in expected.items()},
        {k: _strs(v) for k, v in computed.items()},
        informational,
    )


def non_cm_rows(config: EngineConfig, budget: ComputationBudget | None = None) -> list[SuiteRow]:
    """Coefficients of the non-Cohen-Macaulay space ideal, computed once for both rows.

    The second row sets the last coefficient against geometric genus 0; the
    bound fails without a Cohen-Macaulay gr, so the row is informational.
    """
    data = e_coefficients(non_cm_space_ideal(), config, budget=budget)
    return [
        _row("non-cm", {"e": NON_CM_COEFFICIENTS}, {"e": data.e}),
        _row("non-cm-genus", {"p_g": 0}, {"e_3": data.e[3]}, informational=True),
    ]


def pair_row(n: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    ideal = hyperelliptic_pair_ideal(n)
    curve = PlaneCurve(ideal.ring.modulus)
    report = is_hironaka(curve, ideal, config, budget=budget)
    return _row(
        f"pair-{n}",
        {"e0": 12, "e1": 4, "delta": n // 2, "hironaka": n in (8, 9)},
        {"e0": report.e0, "e1": report.e1, "delta": report.delta, "hironaka": report.hironaka},
    )


def jacobian_row(n: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    report = check_northcott_bound(jacobian_ideal(n), config, budget)
    return _row(
        f"jacobian-{n}",
        {"e1": 1, "e0-length": 1},
        {"e1": report.e[1], "e0-length": report.e[0] - report.colength},
    )


def delta_row(name: str, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    f = dict(curve_corpus())[name]
    report = delta(f, config, strict=False, budget=budget)
    return _row(
        f"delta {name}",
        {"delta": report.delta_combinatorial},
        {"delta": report.delta_northcott},
    )


def power_row(index: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    entry = power_corpus()[index]
    report = check_power_invariance(entry.ideal, config.power_checks, config, budget)
    data = report.first
    assert data is not None
    return _row(
        f"powers {entry.name}",
        {"e_d": [report.table[0][-1]] * len(report.table), "ev91": data.e},
        {"e_d": [row[-1] for row in report.table], "ev91": ev91_e_from_a(data.a, data.d)},
    )


def parameter_row(index: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    entry: CorpusIdeal = parameter_corpus()[index]
    data = e_coefficients(entry.ideal, config, budget=budget)
    return _row(f"regular {entry.name}", {"e_d": 0}, {"e_d": data.e[-1]})


def hhc_row(index: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    entry = power_corpus()[index]
    report = check_hhc(entry.ideal, config, budget=budget)
    return _row(
        f"hhc {entry.name}",
        {"clauses ii-iv": True},
        {"clauses ii-iv": report.clauses_ii_to_iv_hold},
        informational=not report.hypotheses_witnessed,
    )


def curve_pair_row(index: int, config: EngineConfig, budget: ComputationBudget | None = None) -> SuiteRow:
    name, f, ideal = curve_ideal_pairs()[index]
    report = check_curve_bound(PlaneCurve(f), [ideal], config, budget)
    return _row(f"bound {name}", {"0 <= e1 <= delta": True}, {"0 <= e1 <= delta": report.holds})


def oracle_row(seed: int, budget: ComputationBudget | None = None) -> SuiteRow:
    report = check_oracle_equivalence(seed, budget=budget)
    return _row("oracle", {"mismatches": 0}, {"mismatches": len(report.mismatches)})


def suite_tasks(
    config: EngineConfig, skip_slow: bool = False, budget: ComputationBudget | None = None
) -> list[Task]:
    """Tasks computing every suite row, slow rows last.

    A task returns one SuiteRow, or a list of rows sharing one computation.
    """
    tasks = [Task(f"pair-{n}", "pair", partial(pair_row, n, config, budget)) for n in PAIR_RANGE]
    tasks += [
        Task(f"jacobian-{n}", "jacobian", partial(jacobian_row, n, config, budget)) for n in PAIR_RANGE
    ]
    tasks += [
        Task(f"delta-{i}", "delta", partial(delta_row, name, config, budget))
        for i, (name, _) in enumerate(curve_corpus())
    ]
    tasks += [
        Task(f"powers-{i}", "powers", partial(power_row, i, config, budget))
        for i in range(len(power_corpus()))
    ]
    tasks += [
        Task(f"hhc-{i}", "hhc", partial(hhc_row, i, config, budget)) for i in range(len(power_corpus()))
    ]
    tasks += [
        Task(f"regular-{i}", "regular", partial(parameter_row, i, config, budget))
        for i in range(len(parameter_corpus()))
    ]
    tasks += [
        Task(f"bound-{i}", "bound", partial(curve_pair_row, i, config, budget))
        for i in range(len(curve_ideal_pairs()))
    ]
    tasks.append(Task("oracle", "oracle", partial(oracle_row, 0, budget)))
    if not skip_slow:
        tasks.append(
            Task("non-cm", "non-cm", partial(non_cm_rows, config, budget), priority=TaskPriority.LOW)
        )
    return tasks


def run_reference_suite(
    config: EngineConfig | None = None,
    skip_slow: bool = False,
    executor: ParallelExecutor | None = None,
    budget: ComputationBudget | None = None,
) -> SuiteReport:
    """Run every reference row and collect expected against computed values.

    Every row shares one budget, built from ``config`` unless given.

    Raises:
        ToolkitError: The first row failure in row order, with the row key
            added to its context
    """
    config = config or EngineConfig()
    executor = executor or ParallelExecutor(config.workers, config.backend)
    budget = budget or ComputationBudget(config.max_basis_size, config.timeout_secs)
    tasks = suite_tasks(config, skip_slow, budget)
    results = executor.run(tasks)

    report = SuiteReport()
    for task in tasks:
        result = results[task.task_id]
        if not result.success:
            error = result.error
            if isinstance(error, ToolkitError):
                error.context["row"] = task.task_id
            assert error is not None
            raise error
        report.tracker.record(task.name, result.duration_ms)
        rows = result.value if isinstance(result.value, list) else [result.value]
        for row in rows:
            row = SuiteRow(row.key, row.expected, row.computed, row.informational, result.duration_ms)
            report.rows.append(row)
            logger.info("%s: %s", row.key, "ok" if row.passed else "MISMATCH")
    return report
