"""Plane curve singularities, blow-ups and the delta invariant.

This module provides:

- ``PlaneCurve``: a plane curve through the origin over the rationals
- Blow-ups of the origin in the two standard charts
- The resolution tree of infinitely near points and its multiplicities
- delta by the multiplicity formula and by summing e_1 over the tree
- e_1 of m-primary ideals of the curve's local ring and the Hironaka flag
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from sympy import Poly, Rational, Symbol

from src.algebra_core import Polynomial, RingContext, lowest_form, order_of_vanishing, translate
from src.budget import ComputationBudget
from src.config import EngineConfig
from src.errors import (
    DepthExceeded,
    InequalityViolation,
    InvariantViolation,
    NonReducedError,
    PreconditionError,
    RationalityError,
    ZeroPolynomialError,
)
from src.groebner import INFINITE, Infinite, colength
from src.hilbert import e_coefficients
from src.ideals import Ideal, iter_powers, maximal_ideal
from src.parallel_executor import ParallelExecutor

logger = logging.getLogger(__name__)

CHART_A = "A"  # y = x*t
CHART_B = "B"  # x = y*s


@dataclass(frozen=True)
class PlaneCurve:
    """The curve f = 0 in the plane, singular point at the origin."""

    f: Polynomial

    def __post_init__(self) -> None:
        check_plane_equation(self.f)
        object.__setattr__(self, "f", self.f.in_context(self.f.ring.ambient))

    @property
    def ring(self) -> RingContext:
        """The coordinate ring k[x,y]/(f) of dimension one."""
        return self.f.ring.with_modulus(self.f).with_dim(1)

    def ideal(self, polys: list[Polynomial]) -> Ideal:
        """An ideal of the curve's coordinate ring."""
        return Ideal(tuple(p.in_context(self.ring) for p in polys), self.ring)


def check_plane_equation(f: Polynomial) -> None:
    """Validate an equation of a plane curve through the origin.

    Raises:
        PreconditionError: If f is not a polynomial in two variables over
            the rationals vanishing at the origin
    """
    if f.ring.arity != 2:
        raise PreconditionError(f"plane curves need exactly 2 variables, got {f.ring.arity}")
    if not f.ring.field.is_rational:
        raise PreconditionError("plane curves are resolved over the rationals")
    if f.is_zero:
        raise ZeroPolynomialError("the zero polynomial is not a curve")
    if f.coefficient((0, 0)) != 0:
        raise PreconditionError(f"{f} does not pass through the origin", equation=f.to_text())


@dataclass(frozen=True)
class BlowUpPoint:
    """An infinitely near point on the exceptional line.

    Attributes:
        chart: ``A`` (y = x*t) or ``B`` (x = y*s)
        coordinate: Position on the exceptional line within the chart
        direction_multiplicity: Multiplicity of the tangent direction
        strict_transform: Equation of the strict transform with the point
            moved to the origin
    """

    chart: str
    coordinate: Fraction
    direction_multiplicity: int
    strict_transform: Polynomial


def _tangent_factors(coefficients: dict[int, Fraction]) -> list[tuple[Poly, int]]:
    t = Symbol("t")
    poly = Poly.from_dict(
        {(k,): Rational(c.numerator, c.denominator) for k, c in coefficients.items()}, t, domain="QQ"
    )
    if poly.is_ground:
        return []
    return poly.factor_list()[1]


def blow_up_origin(f: Polynomial) -> list[BlowUpPoint]:
    """Blow up the origin and list the points above it.

    Chart A contributes one point per rational root of f_A(0, t) where
    f_A(x, t) = f(x, x*t) / x^m. Chart B contributes only s = 0 when the
    tangent cone contains the line x = 0. Simple irrational directions carry
    smooth points and are skipped.

    Raises:
        RationalityError: If a tangent direction is irrational and repeated
        NonReducedError: If a strict transform vanishes identically
    """
    check_plane_equation(f)
    ring = f.ring.ambient
    f = f.in_context(ring)
    m = order_of_vanishing(f)
    field = ring.field

    chart_a = ring.from_terms({(a + b - m, b): c for (a, b), c in f.element.items()})
    chart_b = ring.from_terms({(a, a + b - m): c for (a, b), c in f.element.items()})
    if chart_a.is_zero or chart_b.is_zero:
        raise NonReducedError(f"strict transform of {f} vanishes", equation=f.to_text())

    tangent_cone = lowest_form(f)
    cone = {b: field.to_fraction(c) for (_, b), c in tangent_cone.element.items()}
    points: list[BlowUpPoint] = []
    for factor, multiplicity in _tangent_factors(cone):
        if factor.is_linear:
            a1, a0 = factor.all_coeffs()
            root = Fraction(int((-a0 / a1).p), int((-a0 / a1).q))
            points.append(BlowUpPoint(CHART_A, root, multiplicity, translate(chart_a, (0, root))))
        elif multiplicity > 1:
            raise RationalityError(
                f"tangent direction {factor.as_expr()} of {f} is irrational and repeated",
                equation=f.to_text(),
            )
        else:
            logger.info("skipping smooth irrational directions %s of %s", factor.as_expr(), f)

    if m not in cone:
        # x divides the tangent cone: the direction x = 0 lives in chart B
        x_multiplicity = min(a for a, _ in tangent_cone.monomials())
        points.append(BlowUpPoint(CHART_B, Fraction(0), x_multiplicity, chart_b))

    points.sort(key=lambda p: (p.chart, p.coordinate))
    return points


@dataclass(frozen=True)
class ResolutionNode:
    """An infinitely near point of the curve.

    Attributes:
        local_equation: Equation at the point, moved to the origin
        multiplicity: Order of vanishing of the local equation
        chart_path: Chart labels of the blow-ups leading here
        coordinate: Position on the exceptional line (None at the root)
        children: Points on the blow-up of this point (only when singular)
    """

    local_equation: Polynomial
    multiplicity: int
    chart_path: tuple[str, ...] = ()
    coordinate: Fraction | None = None
    children: tuple["ResolutionNode", ...] = field(default_factory=tuple)

    def walk(self) -> list["ResolutionNode"]:
        """All nodes in pre-order."""
        nodes = [self]
        for child in self.children:
            nodes.extend(child.walk())
        return nodes

    @property
    def depth(self) -> int:
        return len(self.chart_path)

    def to_dict(self) -> dict[str, Any]:
        return {
            "equation": self.local_equation.to_text(),
            "multiplicity": str(self.multiplicity),
            "chart_path": "".join(self.chart_path),
            "coordinate": None if self.coordinate is None else str(self.coordinate),
            "children": [child.to_dict() for child in self.children],
        }


def singular_locus_colength(f: Polynomial, budget: ComputationBudget | None = None) -> int | Infinite:
    """length of k[x,y]/(f, df/dx, df/dy); infinite iff f has a repeated component."""
    ring = f.ring.ambient
    f = f.in_context(ring)
    x, y = ring.variables
    return colength([f, f.diff(x), f.diff(y)], ring, budget=budget)


def resolve(
    f: Polynomial, depth_cap: int = 64, budget: ComputationBudget | None = None
) -> ResolutionNode:
    """Resolve the singularity at the origin by repeated blow-ups.

    Args:
        f: Equation of a plane curve through the origin
        depth_cap: Deepest chain of blow-ups allowed
        budget: Optional time budget, checked at every node

    Raises:
        NonReducedError: If f has a repeated component
        RationalityError: If an irrational singular direction appears
        DepthExceeded: If the tree grows deeper than ``depth_cap``
        TimeBudgetExceeded: If the budget runs out
    """
    check_plane_equation(f)
    f = f.in_context(f.ring.ambient)
    budget = budget or ComputationBudget.unlimited()
    if singular_locus_colength(f, budget) is INFINITE:
        raise NonReducedError(f"{f} has a repeated component", equation=f.to_text())
    return _resolve_node(f, (), None, depth_cap, budget)


def _resolve_node(
    f: Polynomial,
    path: tuple[str, ...],
    coordinate: Fraction | None,
    depth_cap: int,
    budget: ComputationBudget,
) -> ResolutionNode:
    budget.enforce()
    if len(path) > depth_cap:
        raise DepthExceeded(f"resolution deeper than {depth_cap} blow-ups", equation=f.to_text())
    m = order_of_vanishing(f)
    if m < 2:
        return ResolutionNode(f, m, path, coordinate)

    children = []
    for point in blow_up_origin(f):
        child = _resolve_node(
            point.strict_transform, (*path, point.chart), point.coordinate, depth_cap, budget
        )
        if child.multiplicity > m:
            raise InvariantViolation(
                f"multiplicity rose from {m} to {child.multiplicity} after a blow-up",
                equation=f.to_text(),
            )
        children.append(child)
    logger.debug("node %s: multiplicity %d, %d children", "".join(path) or "root", m, len(children))
    return ResolutionNode(f, m, path, coordinate, tuple(children))


def multiplicity_sequence(tree: ResolutionNode) -> list[int]:
    """Multiplicities of the tree's nodes in pre-order."""
    return [node.multiplicity for node in tree.walk()]


@dataclass(frozen=True)
class DeltaReport:
    """delta computed two ways."""

    delta_combinatorial: int
    delta_northcott: int
    tree: ResolutionNode

    @property
    def agree(self) -> bool:
        return self.delta_combinatorial == self.delta_northcott

    @property
    def delta(self) -> int:
        return self.delta_combinatorial

    def to_dict(self) -> dict[str, Any]:
        return {
            "delta": str(self.delta),
            "delta_combinatorial": str(self.delta_combinatorial),
            "delta_northcott": str(self.delta_northcott),
            "agree": self.agree,
            "multiplicities": [str(m) for m in multiplicity_sequence(self.tree)],
        }


def node_e1(job: tuple[Polynomial, EngineConfig, ComputationBudget | None]) -> int:
    """e_1 of the maximal ideal of k[x,y]/(g) at the origin."""
    g, config, budget = job
    ring = g.ring.ambient.with_modulus(g).with_dim(1)
    return e_coefficients(maximal_ideal(ring), config, budget=budget).e[1]


def delta(
    f: Polynomial,
    config: EngineConfig | None = None,
    executor: ParallelExecutor | None = None,
    strict: bool = True,
    budget: ComputationBudget | None = None,
) -> DeltaReport:
    """delta of the curve singularity at the origin.

    The combinatorial route sums m(m-1)/2 over the tree; the second route
    sums e_1 of the maximal ideal of every singular node's local ring.

    Raises:
        InvariantViolation: If the two routes disagree and ``strict`` is set
    """
    config = config or EngineConfig()
    executor = executor or ParallelExecutor(config.workers, config.backend)
    budget = budget or ComputationBudget(config.max_basis_size, config.timeout_secs)
    tree = resolve(f, config.depth_cap, budget)
    nodes = tree.walk()
    combinatorial = sum(n.multiplicity * (n.multiplicity - 1) // 2 for n in nodes)
    singular = [n.local_equation for n in nodes if n.multiplicity >= 2]
    northcott = sum(executor.map_ordered(node_e1, [(g, config, budget) for g in singular]))
    report = DeltaReport(combinatorial, northcott, tree)
    if not report.agree:
        logger.error("delta mismatch for %s: %d vs %d", f, combinatorial, northcott)
        if strict:
            raise InvariantViolation(
                f"delta routes disagree: {combinatorial} != {northcott}", equation=f.to_text()
            )
    return report


def _curve_ideal(curve: PlaneCurve, ideal: Ideal) -> Ideal:
    if ideal.ring == curve.ring:
        return ideal
    return curve.ideal(list(ideal.generators))


def e1_of_ideal(
    curve: PlaneCurve,
    ideal: Ideal,
    config: EngineConfig | None = None,
    budget: ComputationBudget | None = None,
) -> tuple[int, int]:
    """(e_0, e_1) of an m-primary ideal of the curve's local ring.

    Raises:
        NotPrimaryError: If the ideal is not primary to the maximal ideal
    """
    data = e_coefficients(_curve_ideal(curve, ideal), config, budget=budget)
    return data.e[0], data.e[1]


@dataclass(frozen=True)
class HironakaReport:
    """Comparison of e_1(I) with delta."""

    e0: int
    e1: int
    delta: int

    @property
    def hironaka(self) -> bool:
        return self.e1 == self.delta

    def to_dict(self) -> dict[str, Any]:
        return {
            "e0": str(self.e0),
            "e1": str(self.e1),
            "delta": str(self.delta),
            "hironaka": self.hironaka,
        }


def is_hironaka(
    curve: PlaneCurve,
    ideal: Ideal,
    config: EngineConfig | None = None,
    delta_value: int | None = None,
    budget: ComputationBudget | None = None,
) -> HironakaReport:
    """Flag I as Hironaka when e_1(I) equals delta.

    Raises:
        InequalityViolation: If 0 <= e_1(I) <= delta fails
    """
    e0, e1 = e1_of_ideal(curve, ideal, config, budget)
    if delta_value is None:
        delta_value = delta(curve.f, config, budget=budget).delta
    if not 0 <= e1 <= delta_value:
        raise InequalityViolation(
            f"e_1 = {e1} outside [0, delta = {delta_value}]", ideal=str(ideal), curve=str(curve.f)
        )
    return HironakaReport(e0, e1, delta_value)


@dataclass(frozen=True)
class PowerStabilityReport:
    """Hironaka reports for I, I^2, ..., I^n."""

    rows: tuple[HironakaReport, ...]

    @property
    def stable(self) -> bool:
        first = self.rows[0]
        return all(r.e1 == first.e1 and r.hironaka == first.hironaka for r in self.rows)


def hironaka_is_power_stable(
    curve: PlaneCurve,
    ideal: Ideal,
    n_max: int = 3,
    config: EngineConfig | None = None,
    budget: ComputationBudget | None = None,
) -> PowerStabilityReport:
    """Check that e_1 and the Hironaka flag are the same for I^n, n = 1..n_max."""
    ideal = _curve_ideal(curve, ideal)
    delta_value = delta(curve.f, config, budget=budget).delta
    rows = []
    for n, power in enumerate(iter_powers(ideal, budget), start=1):
        if n > n_max:
            break
        rows.append(is_hironaka(curve, power, config, delta_value, budget))
    return PowerStabilityReport(tuple(rows))
