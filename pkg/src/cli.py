"""Command-line interface.

Usage:
    hstool coeffs --ring "Q[x,y]" --mod "y^2-x^8" --ideal "x^6, x^2 y"
    hstool delta --ring "Q[x,y]" --curve "y^2-x^8" --json
    hstool verify-paper --skip-slow
    hstool session examples.hs

Reports go to stdout, diagnostics to stderr. The exit status is 0 on
success, 1 when a reference row mismatches, and 2 to 6 for errors by kind
(parse, precondition, not stabilized or resource cap, rationality,
invariant violation).
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, TextIO

from src.algebra_core import FieldSpec, MonomialOrder, Polynomial, RingContext
from src.budget import ComputationBudget
from src.config import ORDER_NAMES, EngineConfig, load_config
from src.curves import PlaneCurve, delta, is_hironaka, multiplicity_sequence, resolve
from src.errors import (
    SUCCESS_EXIT_CODE,
    SUITE_MISMATCH_EXIT_CODE,
    ErrorClassifier,
    ErrorType,
    ParseError,
)
from src.hilbert import e_coefficients, hs_values
from src.ideals import Ideal
from src.metrics import PerformanceTracker
from src.parallel_executor import ParallelExecutor
from src.parser import load_session, parse_generators, parse_polynomial, parse_ring
from src.verify import (
    check_hhc,
    check_power_invariance,
    check_power_polynomial_growth,
    run_reference_suite,
)

logger = logging.getLogger(__name__)

DEFAULT_CURVE_RING = "Q[x,y]"
DEFAULT_N_MAX = 5


@dataclass
class JsonReport:
    """Output of one command; key order is fixed."""

    command: str
    ring: str | None
    inputs: dict[str, Any]
    results: Any
    timing: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "ring": self.ring,
            "inputs": self.inputs,
            "results": self.results,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        """Aligned ``key  value`` lines."""
        lines = [("command", self.command)]
        if self.ring is not None:
            lines.append(("ring", self.ring))
        lines += _flatten("", self.inputs) + _flatten("", self.results)
        if self.timing is not None:
            lines += _flatten("timing", self.timing)
        width = max(len(key) for key, _ in lines)
        return "\n".join(f"{key.ljust(width)}  {value}" for key, value in lines)


def _flatten(prefix: str, value: Any) -> list[tuple[str, str]]:
    if isinstance(value, dict):
        pairs = []
        for key, inner in value.items():
            pairs += _flatten(f"{prefix}.{key}" if prefix else str(key), inner)
        return pairs
    if isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        pairs = []
        for i, inner in enumerate(value):
            pairs += _flatten(f"{prefix}[{i}]", inner)
        return pairs
    if isinstance(value, list):
        return [(prefix, " ".join(str(v) for v in value))]
    if isinstance(value, bool):
        return [(prefix, "true" if value else "false")]
    return [(prefix, "null" if value is None else str(value))]


@dataclass
class CommandContext:
    """Parsed inputs shared by the command handlers.

    Attributes:
        budget: One wall clock and size budget for the whole command
        tracker: Timings reported with ``--timing``
    """

    args: argparse.Namespace
    config: EngineConfig
    executor: ParallelExecutor
    budget: ComputationBudget
    tracker: PerformanceTracker = field(default_factory=PerformanceTracker)
    inputs: dict[str, Any] = field(default_factory=dict)

    @property
    def order(self) -> MonomialOrder:
        return MonomialOrder.from_name(self.config.order)

    def ring(self, default: str | None = None) -> RingContext:
        descriptor = self.args.ring or default
        if descriptor is None:
            raise ParseError(f"'{self.args.command}' needs --ring")
        field_spec = None
        if self.args.field:
            field_spec = FieldSpec.parse(self.args.field)
        elif descriptor.lstrip().startswith("["):
            field_spec = FieldSpec.parse(self.config.field)
        context = parse_ring(descriptor, self.order, field_spec)
        if self.args.mod:
            modulus = parse_polynomial(self.args.mod, context)
            context = context.with_modulus(modulus)
            self.inputs["mod"] = modulus.to_text()
        if self.args.dim is not None:
            context = context.with_dim(self.args.dim)
        return context

    def ideal(self, context: RingContext) -> Ideal:
        if not self.args.ideal:
            raise ParseError(f"'{self.args.command}' needs --ideal")
        ideal = Ideal(tuple(parse_generators(self.args.ideal, context)), context)
        self.inputs["ideal"] = [g.to_text() for g in ideal.generators]
        return ideal

    def curve(self) -> PlaneCurve:
        if not self.args.curve:
            raise ParseError(f"'{self.args.command}' needs --curve")
        ambient = self.ring(DEFAULT_CURVE_RING).ambient
        f = parse_polynomial(self.args.curve, ambient)
        self.inputs["curve"] = f.to_text()
        return PlaneCurve(f)


def cmd_coeffs(ctx: CommandContext) -> JsonReport:
    context = ctx.ring()
    data = e_coefficients(ctx.ideal(context), ctx.config, ctx.executor, ctx.budget)
    return JsonReport("coeffs", context.describe(), ctx.inputs, data.to_dict())


def cmd_hvector(ctx: CommandContext) -> JsonReport:
    context = ctx.ring()
    data = e_coefficients(ctx.ideal(context), ctx.config, ctx.executor, ctx.budget)
    results = {"d": str(data.d), "s": str(data.s), "a": [str(x) for x in data.a]}
    return JsonReport("hvector", context.describe(), ctx.inputs, results)


def cmd_hilbert_values(ctx: CommandContext) -> JsonReport:
    context = ctx.ring()
    n_max = DEFAULT_N_MAX if ctx.args.n_max is None else ctx.args.n_max
    values = hs_values(ctx.ideal(context), n_max, ctx.executor, ctx.budget)
    ctx.inputs["n_max"] = str(n_max)
    return JsonReport("hilbert-values", context.describe(), ctx.inputs, {"values": [str(v) for v in values]})


def cmd_check_hhc(ctx: CommandContext) -> JsonReport:
    context = ctx.ring()
    report = check_hhc(ctx.ideal(context), ctx.config, budget=ctx.budget)
    return JsonReport("check-hhc", context.describe(), ctx.inputs, report.to_dict())


def cmd_check_powers(ctx: CommandContext) -> JsonReport:
    context = ctx.ring()
    ideal = ctx.ideal(context)
    n_max = ctx.args.powers or ctx.config.power_checks
    ctx.inputs["powers"] = str(n_max)
    if ctx.args.growth:
        report = check_power_polynomial_growth(
            ideal, max(n_max, context.dimension + 2), ctx.config, ctx.budget
        )
    else:
        report = check_power_invariance(ideal, n_max, ctx.config, ctx.budget)
    return JsonReport("check-powers", context.describe(), ctx.inputs, report.to_dict())


def cmd_curve_resolve(ctx: CommandContext) -> JsonReport:
    curve = ctx.curve()
    tree = resolve(curve.f, ctx.config.depth_cap, ctx.budget)
    results = {
        "multiplicities": [str(m) for m in multiplicity_sequence(tree)],
        "tree": tree.to_dict(),
    }
    return JsonReport("curve-resolve", curve.ring.describe(), ctx.inputs, results)


def cmd_delta(ctx: CommandContext) -> JsonReport:
    curve = ctx.curve()
    report = delta(curve.f, ctx.config, ctx.executor, budget=ctx.budget)
    return JsonReport("delta", curve.ring.describe(), ctx.inputs, report.to_dict())


def cmd_hironaka(ctx: CommandContext) -> JsonReport:
    curve = ctx.curve()
    report = is_hironaka(curve, ctx.ideal(curve.ring), ctx.config, budget=ctx.budget)
    return JsonReport("hironaka", curve.ring.describe(), ctx.inputs, report.to_dict())


def cmd_verify_paper(ctx: CommandContext) -> JsonReport:
    ctx.inputs["skip_slow"] = ctx.args.skip_slow
    report = run_reference_suite(ctx.config, ctx.args.skip_slow, ctx.executor, ctx.budget)
    ctx.tracker.merge(report.tracker)
    for row in report.failures:
        logger.warning("mismatch in %s: expected %s, computed %s", row.key, row.expected, row.computed)
    return JsonReport("verify-paper", None, ctx.inputs, report.to_dict())


def cmd_session(ctx: CommandContext) -> JsonReport:
    session = load_session(ctx.args.file, ctx.order)
    assert session.ring is not None
    ctx.inputs["file"] = str(ctx.args.file)
    results = []
    for command in session.commands:
        entry: dict[str, Any] = {"command": command.name, "line": str(command.line)}
        ideal = None
        if command.ideal is not None:
            ideal = Ideal(tuple(session.ideals[command.ideal]), session.ring)
            entry["ideal"] = command.ideal
        entry["results"] = _run_session_command(ctx, command.name, ideal, session.curve)
        results.append(entry)
    return JsonReport("session", session.ring.describe(), ctx.inputs, results)


def _run_session_command(
    ctx: CommandContext, name: str, ideal: Ideal | None, curve_equation: Polynomial | None
) -> Any:
    if name in ("curve-resolve", "delta", "hironaka"):
        assert curve_equation is not None
        curve = PlaneCurve(curve_equation)
        if name == "curve-resolve":
            tree = resolve(curve.f, ctx.config.depth_cap, ctx.budget)
            return {"multiplicities": [str(m) for m in multiplicity_sequence(tree)], "tree": tree.to_dict()}
        if name == "delta":
            return delta(curve.f, ctx.config, ctx.executor, budget=ctx.budget).to_dict()
        assert ideal is not None
        return is_hironaka(curve, ideal, ctx.config, budget=ctx.budget).to_dict()

    assert ideal is not None
    if name == "coeffs":
        return e_coefficients(ideal, ctx.config, ctx.executor, ctx.budget).to_dict()
    if name == "hvector":
        data = e_coefficients(ideal, ctx.config, ctx.executor, ctx.budget)
        return {"d": str(data.d), "s": str(data.s), "a": [str(x) for x in data.a]}
    if name == "hilbert-values":
        n_max = DEFAULT_N_MAX if ctx.args.n_max is None else ctx.args.n_max
        return {"values": [str(v) for v in hs_values(ideal, n_max, ctx.executor, ctx.budget)]}
    if name == "check-hhc":
        return check_hhc(ideal, ctx.config, budget=ctx.budget).to_dict()
    n_max = ctx.args.powers or ctx.config.power_checks
    return check_power_invariance(ideal, n_max, ctx.config, ctx.budget).to_dict()


COMMANDS: dict[str, Callable[[CommandContext], JsonReport]] = {
    "coeffs": cmd_coeffs,
    "hvector": cmd_hvector,
    "hilbert-values": cmd_hilbert_values,
    "check-hhc": cmd_check_hhc,
    "check-powers": cmd_check_powers,
    "curve-resolve": cmd_curve_resolve,
    "delta": cmd_delta,
    "hironaka": cmd_hironaka,
    "verify-paper": cmd_verify_paper,
    "session": cmd_session,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help='Ring descriptor, e.g. "Q[x,y]" or "F7[x,y,z]"')
    common.add_argument("--mod", help="Hypersurface equation the ring is divided by")
    common.add_argument("--ideal", help="Comma separated generators; m^k is the k-th power of the maximal ideal")
    common.add_argument("--curve", help="Plane curve equation in x, y")
    common.add_argument("--order", choices=ORDER_NAMES, help="Monomial order (default degrevlex)")
    common.add_argument("--field", help="Coefficient field, q or fp:<p> (default q)")
    common.add_argument("--max-power", type=int, help="Stabilization cap on nMax (default 64)")
    common.add_argument("--timeout-secs", type=float, help="Wall clock budget")
    common.add_argument("--config", help="Project configuration file with an 'engine' section")
    common.add_argument("--workers", type=int, help="Workers for independent computations")
    common.add_argument("--dim", type=int, help="Declared dimension of the ring")
    common.add_argument("--n-max", type=int, help="Largest n for hilbert-values")
    common.add_argument("--powers", type=int, help="Largest power for check-powers")
    common.add_argument("--growth", action="store_true", help="Fit e_i(I^n) as polynomials in n")
    common.add_argument("--json", action="store_true", help="Emit a JSON report")
    common.add_argument("--timing", action="store_true", help="Include wall clock timings")
    common.add_argument("--skip-slow", action="store_true", help="Skip slow reference rows")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(prog="hstool", description="Hilbert-Samuel coefficient toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        command = sub.add_parser(name, parents=[common])
        if name == "session":
            command.add_argument("file", help="Session file")
    return parser


def configure_logging(verbosity: int) -> None:
    """Send diagnostics to stderr."""
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("src").setLevel(level)


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    return load_config(args.config).override(
        order=args.order,
        field=args.field,
        max_power=args.max_power,
        timeout_secs=args.timeout_secs,
        workers=args.workers,
    )


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Run one command and write its report.

    Returns:
        Process exit status
    """
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)

    report = None
    status = SUCCESS_EXIT_CODE
    try:
        config = _engine_config(args)
        ctx = CommandContext(
            args,
            config,
            ParallelExecutor(config.workers, config.backend),
            ComputationBudget(config.max_basis_size, config.timeout_secs),
        )
        with ctx.tracker.track(args.command):
            report = COMMANDS[args.command](ctx)
        if args.command == "verify-paper" and not report.results["passed"]:
            status = SUITE_MISMATCH_EXIT_CODE
    except Exception as e:
        classification = ErrorClassifier().classify(e)
        if classification.error_type is ErrorType.UNKNOWN:
            logger.exception("internal error")
        print(f"error: {classification.message}", file=sys.stderr)
        if args.json:
            error_report = JsonReport(args.command, args.ring, {}, {"error": classification.to_dict()})
            print(error_report.to_json(), file=stdout)
        return classification.exit_code

    if args.timing:
        report.timing = ctx.tracker.to_report()
    print(report.to_json() if args.json else report.to_text(), file=stdout)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the ``hstool`` script."""
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
