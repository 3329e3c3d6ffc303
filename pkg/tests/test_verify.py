"""Tests for inequality reports, power checks and the reference suite."""

import random

import pytest

from src.algebra_core import RingContext
from src.budget import ComputationBudget
from src.config import EngineConfig
from src.corpus import PAIR_RANGE, curve_corpus, hyperelliptic_pair_ideal, power_corpus
from src.curves import PlaneCurve
from src.errors import InvariantViolation, PreconditionError, TimeBudgetExceeded
from src.hilbert import HilbertSamuelData
from src.ideals import maximal_ideal, maximal_ideal_power
from src.parallel_executor import ParallelExecutor, Task, TaskPriority
from src.verify import (
    Comparison,
    SuiteRow,
    check_curve_bound,
    check_hhc,
    check_northcott_bound,
    check_oracle_equivalence,
    check_power_invariance,
    check_power_polynomial_growth,
    check_s5_chain,
    delta_row,
    jacobian_row,
    lattice_colength,
    pair_row,
    parameter_row,
    power_row,
    random_monomial_ideal,
    run_reference_suite,
    suite_tasks,
)

QXY = RingContext(("x", "y"))


class TestComparison:
    """Tests for integer chains."""

    def test_holds(self):
        """A nondecreasing chain should hold."""
        assert Comparison("c", (1, 4, 4)).holds
        assert not Comparison("c", (1, 0, 4)).holds

    def test_to_dict(self):
        """Values should be decimal strings."""
        assert Comparison("c", (0, 2)).to_dict() == {"label": "c", "chain": ["0", "2"], "holds": True}


class TestHHC:
    """Tests for the clause-by-clause report."""

    def test_square_of_maximal_ideal(self):
        """m^2 should fail the printed clause (i) and pass the mu reading."""
        report = check_hhc(maximal_ideal_power(QXY, 2))
        assert report.data.e == (4, 1, 0)
        assert report.colength_squared_quotient == 7
        assert report.mu == 3
        assert report.clause_i_printed.chain == (1, 0, 4)
        assert not report.clause_i_printed.holds
        assert report.clause_i_mu.chain == (1, 4, 4)
        assert report.clause_i_mu.holds
        assert [c.holds for c in report.a1_readings] == [False, True]
        assert report.hypotheses_witnessed
        assert report.clauses_ii_to_iv_hold

    def test_report_dict(self):
        """The report should carry the a-vector and witness flag."""
        data = check_hhc(maximal_ideal_power(QXY, 2)).to_dict()
        assert data["a"] == ["3", "1"]
        assert data["s"] == "1"
        assert data["hypotheses_witnessed"] is True
        assert data["clause_i"]["mu"]["holds"] is True

    def test_strict_raises_on_failed_clause(self):
        """A failing clause with a positive a-vector should raise in strict mode."""
        ideal = maximal_ideal_power(QXY, 2)
        bogus = HilbertSamuelData((3, 10, 21), 2, 0, (4, 5, 0), (3, 1))
        report = check_hhc(ideal, data=bogus)
        assert not report.clauses_ii_to_iv_hold
        with pytest.raises(InvariantViolation):
            check_hhc(ideal, strict=True, data=bogus)

    def test_curve_ideal(self):
        """Clauses (ii) to (iv) should hold for (x^6, x^2 y) on y^2 = x^8."""
        report = check_hhc(hyperelliptic_pair_ideal(8))
        assert report.data.a == (8, 4)
        assert report.clauses_ii_to_iv_hold


class TestChain:
    """Tests for the degree-five chain."""

    def test_holds(self):
        """Binomial coefficients of (1 + Z)^6 should satisfy the chain."""
        report = check_s5_chain((6, 15, 20, 15, 6, 1))
        assert report.values == (60, 30, 20, 15, 12, 10, 0)
        assert report.holds

    def test_failing_link(self):
        """e = (1, 0, 0, 0, 0, 1) should fail 2e_4 >= 10e_5 only."""
        report = check_s5_chain([1, 0, 0, 0, 0, 1])
        assert report.links == (True, True, True, True, False, True)
        assert not report.holds

    def test_wrong_length(self):
        """Five coefficients should be rejected."""
        with pytest.raises(PreconditionError):
            check_s5_chain((1, 2, 3, 4, 5))


class TestPowers:
    """Tests for e-vectors of powers."""

    def test_invariance(self):
        """e(m^n) in the plane should be (n^2, n(n-1)/2, 0)."""
        report = check_power_invariance(maximal_ideal(QXY), 3)
        assert report.table == ((1, 0, 0), (4, 1, 0), (9, 3, 0))
        assert report.last_constant
        assert report.to_dict()["e_d_constant"] is True
        assert report.first.e == report.table[0]

    def test_invariance_shares_the_budget(self):
        """An exhausted budget should stop the power table."""
        with pytest.raises(TimeBudgetExceeded):
            check_power_invariance(maximal_ideal(QXY), 3, budget=ComputationBudget(timeout_secs=0))

    def test_invariance_needs_two_powers(self):
        """n_max below two should be rejected."""
        with pytest.raises(PreconditionError):
            check_power_invariance(maximal_ideal(QXY), 1)

    def test_growth(self):
        """e_i(m^n) should be polynomials in n of degree at most d."""
        report = check_power_polynomial_growth(maximal_ideal(QXY))
        assert len(report.table) == 4
        assert report.fits[0] == "n**2"
        assert report.fits[2] == "0"
        assert report.degrees == (2, 2, -1)
        assert report.degrees_bounded

    def test_growth_needs_enough_powers(self):
        """n_max below d + 2 should be rejected."""
        with pytest.raises(PreconditionError):
            check_power_polynomial_growth(maximal_ideal(QXY), 3)


class TestNorthcott:
    """Tests for the e_1 lower bound."""

    def test_pair_equality(self):
        """(x^6, x^2 y) should reach e_1 = e_0 - length(R/I)."""
        report = check_northcott_bound(hyperelliptic_pair_ideal(8))
        assert report.bound.chain == (0, 4, 4)
        assert report.equality
        assert report.e2_nonnegative is None

    def test_plane_ideal(self):
        """m^2 should have e_2 = 0."""
        report = check_northcott_bound(maximal_ideal_power(QXY, 2))
        assert report.bound.holds
        assert report.e2_nonnegative is True

    def test_dimension_zero(self):
        """An Artinian ring should be rejected."""
        line = RingContext(("x",))
        x = line.variable("x")
        artinian = line.with_modulus(x**2)
        with pytest.raises(PreconditionError):
            check_northcott_bound(maximal_ideal(artinian))


class TestCurveBound:
    """Tests for 0 <= e_1 <= delta over a family."""

    def test_family(self):
        """(x^6, x^2 y) should witness equality, m should not."""
        ideal = hyperelliptic_pair_ideal(8)
        curve = PlaneCurve(ideal.ring.modulus)
        report = check_curve_bound(curve, [ideal, maximal_ideal(ideal.ring)])
        assert report.delta == 4
        assert report.e1 == (4, 1)
        assert report.witnesses == (0,)
        assert report.holds


class TestOracle:
    """Tests for the brute-force colength oracle."""

    def test_lattice_colength(self):
        """Lattice counting should match hand counts."""
        assert lattice_colength([(2, 0), (0, 3)], (2, 3)) == 6
        assert lattice_colength([(2, 0), (0, 2), (1, 1)], (2, 2)) == 3

    def test_random_ideals_are_primary(self):
        """Random ideals should contain a pure power of every variable."""
        rng = random.Random(7)
        for _ in range(20):
            context, gens, box = random_monomial_ideal(rng)
            for i, b in enumerate(box):
                assert tuple(b if k == i else 0 for k in range(context.arity)) in gens

    def test_no_mismatches(self):
        """Groebner colengths should match lattice counts."""
        report = check_oracle_equivalence(seed=3, count=15)
        assert len(report.rows) == 15
        assert report.mismatches == []


class TestSuiteRows:
    """Tests for individual reference rows."""

    def test_row_passes_on_equal_values(self):
        """Rows should compare string dictionaries."""
        assert SuiteRow("k", {"e": "1"}, {"e": "1"}).passed
        assert not SuiteRow("k", {"e": "1"}, {"e": "2"}).passed
        assert SuiteRow("k", {"e": "1"}, {"e": "2"}, informational=True).passed

    @pytest.mark.parametrize("n", PAIR_RANGE)
    def test_pair_rows(self, n):
        """(x^6, x^2 y) should be Hironaka exactly for n = 8, 9."""
        row = pair_row(n, EngineConfig())
        assert row.key == f"pair-{n}"
        assert row.passed
        assert row.computed["delta"] == str(n // 2)
        assert row.computed["hironaka"] == str(n in (8, 9))

    @pytest.mark.parametrize("n", PAIR_RANGE)
    def test_jacobian_row(self, n):
        """The Jacobian ideal should reach the lower bound with e_1 = 1."""
        row = jacobian_row(n, EngineConfig())
        assert row.key == f"jacobian-{n}"
        assert row.passed

    def test_delta_row(self):
        """Both delta routes should agree on the corpus."""
        name = curve_corpus()[0][0]
        assert delta_row(name, EngineConfig()).passed

    @pytest.mark.parametrize("name", ["(x, y) in Q[x,y]", "m^2 in Q[x,y,z]"])
    def test_power_row(self, name):
        """Power rows should pass for maximal ideal powers."""
        index = [entry.name for entry in power_corpus()].index(name)
        assert power_row(index, EngineConfig()).passed

    def test_parameter_row(self):
        """Parameter ideals should have e_d = 0."""
        assert parameter_row(0, EngineConfig()).passed

    def test_skip_slow(self):
        """Skipping slow rows should drop only the non-CM task."""
        fast = {task.task_id for task in suite_tasks(EngineConfig(), skip_slow=True)}
        full = {task.task_id for task in suite_tasks(EngineConfig())}
        assert full - fast == {"non-cm"}

    def test_slow_task_runs_last(self):
        """The non-CM task should come last with low priority and bound arguments."""
        task = suite_tasks(EngineConfig())[-1]
        assert task.task_id == "non-cm"
        assert task.args == ()
        assert task.priority == TaskPriority.LOW

    def test_task_ids_are_unique(self):
        """Every task id should appear once."""
        ids = [task.task_id for task in suite_tasks(EngineConfig())]
        assert len(ids) == len(set(ids))

    def test_list_results_are_flattened(self, monkeypatch):
        """A task returning several rows should add them in order."""
        rows = [SuiteRow("first", {"e": "1"}, {"e": "1"}), SuiteRow("second", {"e": "2"}, {"e": "2"})]
        tasks = [
            Task("single", "single", lambda: SuiteRow("single", {}, {})),
            Task("several", "several", lambda: rows, priority=TaskPriority.LOW),
        ]
        monkeypatch.setattr("src.verify.suite_tasks", lambda *args: tasks)
        report = run_reference_suite(executor=ParallelExecutor(workers=1))
        assert [row.key for row in report.rows] == ["single", "first", "second"]
        assert report.passed
        assert set(report.tracker.to_report()) == {"single", "several"}


@pytest.mark.slow
class TestReferenceSuite:
    """Tests running the full reference suite."""

    def test_fast_rows(self):
        """Every fast row should pass."""
        report = run_reference_suite(skip_slow=True)
        assert report.passed, [row.key for row in report.failures]
        assert "pair" in report.tracker.to_report()

    def test_non_cm_space_ideal(self):
        """The three-variable example should have e = (76, 48, 4, 1)."""
        report = run_reference_suite()
        rows = {row.key: row for row in report.rows}
        assert rows["non-cm"].computed == {"e": "(76,48,4,1)"}
        assert rows["non-cm-genus"].informational
