#!/usr/bin/env python3
"""
Coded Shuffle Simulator - Unified CLI
=====================================
Latency-load trade-off analysis and end-to-end simulation of coded
map-shuffle-reduce matrix multiplication with stragglers.

Usage:
    python main.py tradeoff  [--K 100 --N 840 --mu 1/2] [--format csv|json] [--at D]
    python main.py simulate  [--K 6 --q 4 --mu 1/2 --m 20 --N 12] [--l 4 --r2 3] [--fixed-Q 1,2,3,4]
    python main.py feasible  [--K 6 --q 4 --mu 1/2 --N 12]
    python main.py latency   [--K 6 --mu 1/2 --N 12] [--trials 100000 --seed 7]
    python main.py verify-example

Examples:
    python main.py tradeoff --K 100 --N 840 --mu 1/2 --output outputs/curve_k100.csv
    python main.py tradeoff --K 100 --N 840 --mu 1/2 --at 600
    python main.py simulate --l 6 --r2 2 --fixed-Q 1,2,3,4 --transcript-output outputs/t.jsonl
    python main.py verify-example

Exit codes: 0 success, 2 invalid arguments, 3 infeasible configuration,
4 verification failure.
"""

import argparse
import logging
import math
import sys
from typing import Optional, Tuple

from src.config import (
    DEFAULT_FIELD_WIDTH,
    DEFAULT_INNER_DIMENSION,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EXAMPLE_BASELINE_LOAD,
    EXAMPLE_BASELINE_MESSAGES,
    EXAMPLE_BASELINE_RATES,
    EXAMPLE_K,
    EXAMPLE_LATENCY,
    EXAMPLE_M,
    EXAMPLE_MU,
    EXAMPLE_N,
    EXAMPLE_NON_STRAGGLERS,
    EXAMPLE_PROPOSED_LOAD,
    EXAMPLE_PROPOSED_MESSAGES,
    EXAMPLE_PROPOSED_PHASE_COUNTS,
    EXAMPLE_PROPOSED_RATES,
    EXAMPLE_Q,
    EXIT_INFEASIBLE,
    EXIT_INVALID_ARGUMENTS,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    SUPPORTED_FIELD_WIDTHS,
)
from src.errors import (
    CodeConstructionError,
    CodedShuffleError,
    DivisibilityError,
    FieldWidthError,
    InfeasibleRatesError,
    InvalidParamsError,
    PipelineError,
)
from src.scheme.rates import CONDITION_TEXT

# Setup logging
logging.basicConfig(
    level=logging.INFO,
    format='%(message)s'
)
logger = logging.getLogger(__name__)


def print_header(title: str) -> None:
    """Print a styled header."""
    print("\n" + "=" * 60)
    print(f"  {title}")
    print("=" * 60)


# ============================================================================
# ARGUMENT HELPERS
# ============================================================================

def fraction_arg(text: str):
    """argparse type for exact fractions such as 1/2."""
    from src.scheme.params import parse_fraction
    try:
        return parse_fraction(text)
    except InvalidParamsError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def servers_arg(text: str) -> Tuple[int, ...]:
    """argparse type for a comma-separated server list such as 1,2,3,4."""
    try:
        servers = tuple(sorted(int(part) for part in text.split(',') if part.strip()))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma-separated server list: {text!r}") from e
    if not servers:
        raise argparse.ArgumentTypeError("server list is empty")
    return servers


def build_params(args, q: Optional[int] = None):
    """SystemParams from the parsed flags (q overrides args.q when given)."""
    from src.scheme.params import SystemParams
    return SystemParams(
        K=args.K,
        q=args.q if q is None else q,
        mu=args.mu,
        m=args.m,
        N=args.N,
        n=args.n,
        w=args.w,
    )


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_tradeoff(args) -> int:
    """Write the latency-load trade-off curve over every admissible q."""
    from src.generators import TradeoffCurveGenerator

    params = build_params(args, q=args.K)
    print_header(f"Trade-off Curve (K={params.K}, N={params.N}, mu={params.mu})")

    generator = TradeoffCurveGenerator(params, fmt=args.format)
    print(f"\n📈 Sweeping q = {params.q_min}..{params.K}...")
    curve = generator.curve
    print(f"   {len(curve)} points, {len(curve.skipped)} skipped")

    if args.at and not curve.points:
        logger.warning("⚠️  No feasible q to compare against")
    elif args.at:
        for target in args.at:
            point = curve.nearest(target)
            print(f"\n🎯 D = {target:g}: nearest q={point.q} (D={point.latency:.6g}, rates {point.optimized_rates})")
            print(f"   L_base={float(point.baseline_load):.6g}  L_opt={float(point.optimized_load):.6g}  "
                  f"gain {float(point.gain):.4g}x")

    output_path = generator.save(args.output)
    print(f"   ✅ Saved: {output_path}")
    return EXIT_OK


def cmd_feasible(args) -> int:
    """Write every feasible rate pair with its achievable load."""
    from src.generators import FeasibleTableGenerator

    params = build_params(args)
    print_header(f"Feasible Rates (K={params.K}, q={params.q}, mu={params.mu})")

    generator = FeasibleTableGenerator(params, fmt=args.format)
    rows = generator.rows
    if rows:
        best = generator.optimum
        print(f"\n🔎 {len(rows)} feasible pairs; optimum {best} (l={best.l}, r2={best.r2})")
        for breakdown in rows[:10]:
            marker = "⭐" if breakdown.rates == best else "  "
            print(f"   {marker} l={breakdown.rates.l:<3} r2={breakdown.rates.r2:<3} L={float(breakdown.total):.6g}")
    else:
        print("\n⚠️  No feasible rate pair")

    output_path = generator.save(args.output)
    print(f"\n   ✅ Saved: {output_path}")
    return EXIT_OK


def cmd_latency(args) -> int:
    """Write analytic D(q) per q, with optional Monte Carlo estimates."""
    from src.generators import LatencyTableGenerator

    if args.trials < 0:
        raise InvalidParamsError(f"--trials must be non-negative, got {args.trials}")
    params = build_params(args, q=args.K)
    print_header(f"Map-Phase Latency (K={params.K}, mu={params.mu}, N={params.N})")

    generator = LatencyTableGenerator(params, trials=args.trials, seed=args.seed, fmt=args.format)
    for record in generator.records:
        line = f"   q={record['q']:<4} D={record['D']:.6g}"
        if 'empirical' in record:
            line += f"  MC={record['empirical']:.6g}  err={100 * record['relative_error']:.3f}%"
        print(line)

    output_path = generator.save(args.output)
    print(f"\n   ✅ Saved: {output_path}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    """Run the full map-shuffle-reduce pipeline and write its RunReport."""
    from src.engine import StragglerModel, run
    from src.generators import PlacementGenerator, PlanGenerator, RunReportGenerator, TranscriptGenerator
    from src.scheme.placement import partition_rows
    from src.scheme.params import RatePair
    from src.scheme.rates import optimize_rates

    params = build_params(args)
    print_header(f"Simulation (K={params.K}, q={params.q}, mu={params.mu}, m={params.m}, N={params.N})")

    if (args.l is None) != (args.r2 is None):
        raise InvalidParamsError("--l and --r2 must be given together")
    if args.l is None:
        rates, _ = optimize_rates(params)
        print(f"\n⚙️  Optimized rates {rates}")
    else:
        rates = RatePair(l=args.l, r2=args.r2, q=params.q)
        print(f"\n⚙️  Rates {rates}")

    if args.fixed_Q is not None:
        model = StragglerModel.fixed_set(args.fixed_Q)
    else:
        model = StragglerModel(seed=args.seed)

    report = run(params, rates, model, args.seed)
    print(f"   Non-stragglers: {list(report.non_stragglers)}")
    if report.empirical_latency is not None:
        print(f"   Map-phase finish: {report.empirical_latency:.6g}")
    phases = " + ".join(str(count) for count in report.phase_counts.values()) or "0"
    print(f"   Messages: {phases} = {report.message_count}")
    print(f"   Load: counted {report.counted_load}, analytic {report.analytic_load}")

    output_path = RunReportGenerator(report).save(args.output)
    print(f"\n   ✅ Saved: {output_path}")
    if args.placement_output:
        path = PlacementGenerator(partition_rows(params, rates)).save(args.placement_output)
        print(f"   ✅ Saved: {path}")
    if args.plan_output:
        path = PlanGenerator(report.plan).save(args.plan_output)
        print(f"   ✅ Saved: {path}")
    if args.transcript_output:
        path = TranscriptGenerator(report.transcript).save(args.transcript_output)
        print(f"   ✅ Saved: {path}")

    if not report.verified:
        print_header("VERIFICATION FAILED")
        return EXIT_VERIFICATION_FAILED
    print_header("VERIFIED: Y = A X")
    return EXIT_OK


def cmd_verify_example(args) -> int:
    """Re-run the K=6, q=4 worked example and check every published number."""
    from src.engine import Simulation
    from src.scheme.latency import latency
    from src.scheme.params import RatePair, SystemParams
    from src.scheme.rates import optimize_rates

    print_header("Worked Example (K=6, q=4, mu=1/2, m=20, N=12)")
    params = SystemParams(K=EXAMPLE_K, q=EXAMPLE_Q, mu=EXAMPLE_MU, m=EXAMPLE_M, N=EXAMPLE_N,
                          w=args.w)

    def check(label: str, ok: bool) -> bool:
        print(f"   {'✅' if ok else '❌'} {label}")
        if not ok:
            logger.error(f"Example check failed: {label}")
        return ok

    cases = (
        ("Proposed", EXAMPLE_PROPOSED_RATES, EXAMPLE_PROPOSED_MESSAGES, EXAMPLE_PROPOSED_LOAD),
        ("Baseline", EXAMPLE_BASELINE_RATES, EXAMPLE_BASELINE_MESSAGES, EXAMPLE_BASELINE_LOAD),
    )
    for name, (l, r2), messages, load in cases:
        rates = RatePair(l=l, r2=r2, q=params.q)
        print(f"\n🔧 {name} rates {rates}")
        report = Simulation(params, rates, args.seed).run_with(EXAMPLE_NON_STRAGGLERS)
        counts = " + ".join(str(count) for count in report.phase_counts.values())
        print(f"   Phase message counts: {counts}")
        checks = [
            (f"{report.message_count} messages (expected {messages})", report.message_count == messages),
            (f"counted load {report.counted_load} = {float(report.counted_load):g} (expected {load})",
             report.counted_load == load),
            (f"analytic load {report.analytic_load} (expected {load})", report.analytic_load == load),
            ("Y = A X entrywise", report.verified),
        ]
        if name == "Proposed":
            checks.insert(1, (f"phase counts {report.phase_counts}",
                              report.phase_counts == EXAMPLE_PROPOSED_PHASE_COUNTS))
        for label, ok in checks:
            if not check(label, ok):
                return EXIT_VERIFICATION_FAILED

    best, _ = optimize_rates(params)
    print("\n🏁 Optimization and latency")
    if not check(f"optimum {best} is the proposed pair", (best.l, best.r2) == EXAMPLE_PROPOSED_RATES):
        return EXIT_VERIFICATION_FAILED
    d = latency(params, params.q)
    if not check(f"D(4) = {d:.6g} (expected {EXAMPLE_LATENCY})", math.isclose(d, EXAMPLE_LATENCY)):
        return EXIT_VERIFICATION_FAILED

    print_header("PASS")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='Enable debug logging')

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument('--K', type=int, default=EXAMPLE_K, help=f'Number of servers (default: {EXAMPLE_K})')
    instance.add_argument('--q', type=int, default=EXAMPLE_Q, help=f'Non-stragglers waited for (default: {EXAMPLE_Q})')
    instance.add_argument('--mu', type=fraction_arg, default=EXAMPLE_MU, help='Storage fraction, e.g. 1/2')
    instance.add_argument('--m', type=int, default=EXAMPLE_M, help=f'Rows of A (default: {EXAMPLE_M})')
    instance.add_argument('--n', type=int, default=DEFAULT_INNER_DIMENSION, help='Inner dimension (default: %(default)s)')
    instance.add_argument('--N', type=int, default=EXAMPLE_N, help=f'Columns of X (default: {EXAMPLE_N})')
    instance.add_argument('--w', type=int, default=DEFAULT_FIELD_WIDTH, choices=SUPPORTED_FIELD_WIDTHS,
                          help='Field width in bits (default: %(default)s)')
    instance.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Random seed (default: %(default)s)')
    instance.add_argument('--output', default=None, help='Output file (default: outputs/<artifact>)')

    table = argparse.ArgumentParser(add_help=False)
    table.add_argument('--format', choices=('csv', 'json'), default='csv', help='Table format (default: csv)')

    parser = argparse.ArgumentParser(
        description='Coded Shuffle Simulator - latency-load trade-off of coded distributed matrix multiplication',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    subparsers = parser.add_subparsers(dest='command', help='Commands')

    # Tradeoff command
    tradeoff_parser = subparsers.add_parser('tradeoff', parents=[common, instance, table],
                                            help='Load versus latency over every q')
    tradeoff_parser.add_argument('--at', type=float, action='append', default=None, metavar='D',
                                 help='Report the load gap at the q whose latency is nearest D (repeatable)')
    tradeoff_parser.set_defaults(func=cmd_tradeoff)

    # Simulate command
    sim_parser = subparsers.add_parser('simulate', parents=[common, instance],
                                       help='Run map, shuffle and reduce end to end')
    sim_parser.add_argument('--l', type=int, default=None, help='MDS numerator, r1 = l/q (default: optimized)')
    sim_parser.add_argument('--r2', type=int, default=None, help='Repetition rate (default: optimized)')
    sim_parser.add_argument('--fixed-Q', type=servers_arg, default=None, help='Fixed non-stragglers, e.g. 1,2,3,4')
    sim_parser.add_argument('--plan-output', default=None, help='Also write the shuffle plan JSON')
    sim_parser.add_argument('--transcript-output', default=None, help='Also write the payload transcript (JSON lines)')
    sim_parser.add_argument('--placement-output', default=None, help='Also write the row placement JSON')
    sim_parser.set_defaults(func=cmd_simulate)

    # Feasible command
    feasible_parser = subparsers.add_parser('feasible', parents=[common, instance, table],
                                            help='List feasible rate pairs and their loads')
    feasible_parser.set_defaults(func=cmd_feasible)

    # Latency command
    latency_parser = subparsers.add_parser('latency', parents=[common, instance, table],
                                           help='Analytic and Monte Carlo map-phase latency')
    latency_parser.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                                help='Monte Carlo trials per q (default: analytic only)')
    latency_parser.set_defaults(func=cmd_latency)

    # Verify-example command
    verify_parser = subparsers.add_parser('verify-example', parents=[common],
                                          help='Check the K=6, q=4 worked example')
    verify_parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Random seed (default: %(default)s)')
    verify_parser.add_argument('--w', type=int, default=DEFAULT_FIELD_WIDTH, choices=SUPPORTED_FIELD_WIDTHS,
                               help='Field width in bits (default: %(default)s)')
    verify_parser.set_defaults(func=cmd_verify_example)

    return parser


def report_failure(error: CodedShuffleError, args) -> int:
    """Log a failed command and pick its exit code from the root cause."""
    cause = error
    while isinstance(cause, PipelineError):
        cause = cause.cause

    if isinstance(cause, (InvalidParamsError, FieldWidthError)):
        logger.error(f"❌ Invalid arguments: {cause}")
        return EXIT_INVALID_ARGUMENTS
    if isinstance(cause, InfeasibleRatesError):
        logger.error(f"❌ {cause}")
        for label in cause.violations:
            logger.error(f"   violates {label}: {CONDITION_TEXT.get(label, label)}")
        return EXIT_INFEASIBLE
    if isinstance(cause, DivisibilityError):
        logger.error(f"❌ {cause}")
        m = getattr(args, 'm', EXAMPLE_M) * cause.verdict.m_multiplier
        n_columns = getattr(args, 'N', EXAMPLE_N) * cause.verdict.n_multiplier
        logger.error(f"   try --m {m} --N {n_columns}")
        return EXIT_INFEASIBLE
    if isinstance(cause, CodeConstructionError):
        logger.error(f"❌ Cannot build the code: {cause}")
        return EXIT_INFEASIBLE
    logger.error(f"❌ {error}")
    return EXIT_VERIFICATION_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_INVALID_ARGUMENTS

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        return args.func(args)
    except CodedShuffleError as e:
        return report_failure(e, args)


if __name__ == '__main__':
    sys.exit(main())
