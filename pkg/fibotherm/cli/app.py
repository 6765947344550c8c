from logging import INFO
from logging import WARNING
from pathlib import Path

from click import BadParameter
from click import Choice
from click import Context
from click import FloatRange
from click import group
from click import IntRange
from click import option
from click import pass_context
from click import UsageError
from click import version_option

from fibotherm.__version__ import __version__
from fibotherm.kneading import check_admissibility
from fibotherm.kneading import fibonacci_kneading
from fibotherm.kneading import floor_r_kneading
from fibotherm.kneading import kneading_sides
from fibotherm.models.event import Event
from fibotherm.models.kneading import KneadingData
from fibotherm.models.kneading import KneadingRow
from fibotherm.models.plmap import PLMap
from fibotherm.models.thermo import PressurePoint
from fibotherm.models.verify import VerifyReport
from fibotherm.plmap import branch_table
from fibotherm.plmap import evaluate_point
from fibotherm.plmap import fibonacci_family
from fibotherm.plmap import verify_conditions
from fibotherm.simulation import simulate_walk
from fibotherm.thermo import classify_recurrence
from fibotherm.thermo import closed_form_measures
from fibotherm.thermo import dimension_report
from fibotherm.thermo import gurevich_diagnostic
from fibotherm.thermo import pressure_curve
from fibotherm.thermo import project_measures
from fibotherm.utils.click import copy_params
from fibotherm.utils.click import ctx_params
from fibotherm.utils.click import param_callback_grid
from fibotherm.utils.functions import linspace
from fibotherm.walk import classify_grid

from .checks import CHECK_NAMES
from .checks import run_checks
from .common import common_options
from .common import load_config
from .common import program
from .common import write

unit_interval: FloatRange = FloatRange(0, 1, min_open=True, max_open=True)
positive: FloatRange = FloatRange(0, min_open=True)


def _parameter_grid(ctx: Context, lam: float | None, grid: tuple[float, ...] | None) -> tuple[float, ...]:
    if grid and lam is not None:
        raise UsageError("--lambda and --lambda-grid are mutually exclusive", ctx)
    if grid:
        return grid
    if lam is None:
        raise UsageError("one of --lambda and --lambda-grid is required", ctx)
    return (lam,)


@group("fibotherm", no_args_is_help=True)
@version_option(__version__, message="%(prog)s, version %(version)s")
def app():
    """Fibonacci-type piecewise-linear unimodal maps: construction, induced random walk, thermodynamic formalism."""


@copy_params(common_options)
@app.command("kneading", short_help="Kneading map and cutting times.")
@option(
    "--family",
    type=Choice(["fibonacci", "floor-r"]),
    default="fibonacci",
    show_default=True,
    help="The kneading map Q(k) = max(k-2, 0), or Q(k) = floor(r*k).",
)
@option("--r", "ratio", type=unit_interval, default=None, help="The ratio of the floor-r family.")
@option("--depth", type=IntRange(1), default=20, show_default=True, help="The truncation depth K.")
@pass_context
def command_kneading(
    ctx: Context,
    family: str,
    ratio: float | None,
    depth: int,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Print the kneading map Q(k), the cutting times S_k, and the side of c at each cutting time for k = 0..K.

    The JSON output is the kneading data {"Q": [...], "S": [...], "K": K}.
    """
    config = load_config(config_file, precision_bits, emit_format, output)
    if family == "floor-r" and ratio is None:
        raise BadParameter("required with --family floor-r", ctx, ctx_params(ctx)["ratio"])

    with program(ctx, log_file) as loggers:
        kneading: KneadingData = fibonacci_kneading(depth) if family == "fibonacci" else floor_r_kneading(ratio, depth)
        if not (admissibility := check_admissibility(kneading)):
            Event.from_command(ctx, "inadmissible", data=admissibility.model_dump()).log(WARNING, *loggers)

        if config.emit == "json":
            write(config, kneading)
        else:
            sides: tuple[int, ...] = kneading_sides(kneading)
            write(
                config,
                [KneadingRow(k=k, Q=kneading.Q[k], S=kneading.S[k], side=sides[k]) for k in range(kneading.K + 1)],
            )


@copy_params(common_options)
@app.command("map", short_help="Build and evaluate a Fibonacci map.")
@option("--lambda", "lam", type=unit_interval, required=True, help="The parameter of the interval lengths.")
@option("--depth", type=IntRange(10), default=None, help="The truncation depth N.  [default: 200]")
@option(
    "--verify-conditions",
    "verify_depth",
    type=IntRange(2),
    default=None,
    metavar="J",
    help="Check the slope conditions of the construction for j <= J.",
)
@option("--eval", "points", multiple=True, metavar="X", help="Evaluate f and F at X.  [multiple]")
@pass_context
def command_map(
    ctx: Context,
    lam: float,
    depth: int | None,
    verify_depth: int | None,
    points: tuple[str, ...],
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Build the Fibonacci map with interval lengths (1 - LAMBDA) / 2 * LAMBDA^j.

    Without further options the branch data is printed; the JSON output is the full map. With --eval, every point X
    is evaluated under f and the induced map F; points that cannot be resolved are reported in the status column.
    """
    config = load_config(config_file, precision_bits, emit_format, output, depth=depth)

    with program(ctx, log_file):
        plmap: PLMap = fibonacci_family(lam, config.depth, config.precision_bits)

        if points:
            write(config, [evaluate_point(plmap, x) for x in points])
        elif verify_depth is not None:
            report = verify_conditions(plmap, verify_depth)
            write(config, report if config.emit == "json" else report.checks)
        else:
            write(config, plmap if config.emit == "json" else branch_table(plmap))


@copy_params(common_options)
@app.command("classify", short_help="Attractor regime of the Fibonacci map.")
@option("--lambda", "lam", type=unit_interval, default=None, help="A single parameter.")
@option(
    "--lambda-grid",
    "grid",
    callback=param_callback_grid(0, 1),
    default=None,
    metavar="GRID",
    help="Parameters as start:stop:step or a comma-separated list.",
)
@pass_context
def command_classify(
    ctx: Context,
    lam: float | None,
    grid: tuple[float, ...] | None,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Classify the attractor as Acip, SigmaFiniteInfinite, or WildAttractor from the drift and tail ratio of the walk.
    """
    config = load_config(config_file, precision_bits, emit_format, output)
    parameters: tuple[float, ...] = _parameter_grid(ctx, lam, grid)

    with program(ctx, log_file):
        write(config, classify_grid(parameters))


@copy_params(common_options)
@app.command("pressure", short_help="Pressure of the geometric potential over a range of t.")
@option("--lambda", "lam", type=unit_interval, required=True, help="The parameter of the map.")
@option("--t-min", type=positive, required=True, help="The first inverse temperature.")
@option("--t-max", type=positive, required=True, help="The last inverse temperature.")
@option("--steps", type=IntRange(1), default=50, show_default=True, help="The number of inverse temperatures.")
@option("--jobs", type=IntRange(1), default=1, show_default=True, help="The number of worker processes.")
@pass_context
def command_pressure(
    ctx: Context,
    lam: float,
    t_min: float,
    t_max: float,
    steps: int,
    jobs: int,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Solve the pressure p(t) on an evenly spaced grid of inverse temperatures from T_MIN to T_MAX.

    Rows follow the grid in ascending order. Points where the solver fails carry no pressure and the name of the
    failure in the status column.
    """
    config = load_config(config_file, precision_bits, emit_format, output)
    if t_max < t_min:
        raise BadParameter(f"must not be less than --t-min {t_min}", ctx, ctx_params(ctx)["t_max"])

    with program(ctx, log_file) as loggers:
        points: list[PressurePoint] = pressure_curve(
            lam,
            linspace(t_min, t_max, steps),
            precision_bits=config.precision_bits,
            bisection_tolerance=config.bisection_tolerance,
            tolerance=config.weights_tail_tolerance,
            max_depth=config.max_weight_depth,
            jobs=jobs,
        )
        if failed := [p for p in points if p.status != "ok"]:
            Event.from_command(
                ctx,
                "unresolved",
                data={"points": len(failed), "status": sorted({p.status for p in failed})},
            ).log(WARNING, *loggers)
        write(config, points)


@copy_params(common_options)
@app.command("measures", short_help="Conformal and invariant measures of the induced map.")
@option("--lambda", "lam", type=unit_interval, required=True, help="The parameter of the map.")
@option("--t", "t", type=positive, required=True, help="The inverse temperature.")
@option("--branches", type=IntRange(1), default=None, help="The number of branches.  [default: 200]")
@option("--projection", is_flag=True, default=False, help="Project the equilibrium state to the original map.")
@pass_context
def command_measures(
    ctx: Context,
    lam: float,
    t: float,
    branches: int | None,
    projection: bool,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Print the closed-form conformal and invariant measures of the induced map at inverse temperature T.

    With --projection, the equilibrium state is built from the conformal weights at the pressure and projected to the
    original map, reporting the normalising constant, the mean inducing time, and the Abramov defect.
    """
    config = load_config(config_file, precision_bits, emit_format, output, depth=branches)

    with program(ctx, log_file):
        if projection:
            write(
                config,
                project_measures(
                    lam,
                    t,
                    depth=config.depth,
                    precision_bits=config.precision_bits,
                    tolerance=config.weights_tail_tolerance,
                    bisection_tolerance=config.bisection_tolerance,
                    power_tolerance=config.power_tolerance,
                    power_max_iterations=config.power_max_iterations,
                    max_depth=config.max_weight_depth,
                ),
            )
        else:
            write(config, closed_form_measures(lam, t, config.depth))


@copy_params(common_options)
@app.command("dims", short_help="Hyperbolic dimension and transition parameters.")
@option("--lambda", "lam", type=unit_interval, default=None, help="A single parameter.")
@option(
    "--lambda-grid",
    "grid",
    callback=param_callback_grid(0, 1),
    default=None,
    metavar="GRID",
    help="Parameters as start:stop:step or a comma-separated list.",
)
@pass_context
def command_dims(
    ctx: Context,
    lam: float | None,
    grid: tuple[float, ...] | None,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """Print the hyperbolic dimension, t1, t2, the critical order, and the regime."""
    config = load_config(config_file, precision_bits, emit_format, output)
    parameters: tuple[float, ...] = _parameter_grid(ctx, lam, grid)

    with program(ctx, log_file):
        write(config, [dimension_report(x) for x in parameters])


@copy_params(common_options)
@app.command("recurrence", short_help="Recurrence type of the shifted geometric potential.")
@option("--lambda", "lam", type=unit_interval, required=True, help="The parameter of the map.")
@option("--t", "t", type=positive, required=True, help="The inverse temperature.")
@option("--p", "p", type=float, default=None, help="The potential shift.  [default: the pressure]")
@option("--gurevich", is_flag=True, default=False, help="Print the local partition sums instead.")
@option("--n-max", type=IntRange(1), default=15, show_default=True, help="The longest loop of the partition sums.")
@option("--states", type=IntRange(2), default=60, show_default=True, help="The states of the truncated graph.")
@pass_context
def command_recurrence(
    ctx: Context,
    lam: float,
    t: float,
    p: float | None,
    gurevich: bool,
    n_max: int,
    states: int,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Classify the potential -t log|f'| - p on the induced and the original map as positive recurrent, null recurrent,
    or transient.
    """
    config = load_config(config_file, precision_bits, emit_format, output)

    with program(ctx, log_file):
        if gurevich:
            write(config, gurevich_diagnostic(lam, t, p, n_max, states, precision_bits=config.precision_bits))
        else:
            write(config, classify_recurrence(lam, t, p, precision_bits=config.precision_bits))


@copy_params(common_options)
@app.command("simulate", short_help="Monte Carlo simulation of the induced random walk.")
@option("--lambda", "lam", type=unit_interval, required=True, help="The parameter of the walk.")
@option("--walkers", type=IntRange(1), default=10_000, show_default=True, help="The number of walkers.")
@option("--steps", type=IntRange(1), default=10_000, show_default=True, help="The number of steps.")
@option("--seed", type=IntRange(0), default=None, help="The master seed.  [default: 20240607]")
@option("--threshold", type=IntRange(1), default=50, show_default=True, help="The state that counts as escape.")
@option("--burn-in", type=IntRange(0), default=None, help="Steps left out of the occupation histogram.")
@option("--threads", type=IntRange(1), default=None, help="The number of worker threads.  [default: 1]")
@pass_context
def command_simulate(
    ctx: Context,
    lam: float,
    walkers: int,
    steps: int,
    seed: int | None,
    threshold: int,
    burn_in: int | None,
    threads: int | None,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Run independent walkers from state 1 and report the escape fraction, the drift, and the occupation histogram.

    The report does not depend on the number of threads.
    """
    config = load_config(config_file, precision_bits, emit_format, output, seed=seed, threads=threads)

    with program(ctx, log_file):
        write(
            config,
            simulate_walk(
                lam,
                walkers,
                steps,
                config.seed,
                threshold,
                burn_in=burn_in,
                threads=config.threads,
            ),
        )


@copy_params(common_options)
@app.command("verify", short_help="Run the verification suite.")
@option(
    "--check",
    "checks",
    type=Choice(CHECK_NAMES),
    multiple=True,
    help="Run only the named check.  [multiple]",
)
@option("--jobs", type=IntRange(1), default=None, help="Worker processes and threads of the checks.  [default: 1]")
@pass_context
def command_verify(
    ctx: Context,
    checks: tuple[str, ...],
    jobs: int | None,
    config_file: Path | None,
    precision_bits: str | None,
    emit_format: str | None,
    output: Path | None,
    log_file: Path | None,
):
    """
    Run the verification suite and print a pass/fail table.

    The exit code is 0 when every check passes and 1 otherwise.
    """
    config = load_config(config_file, precision_bits, emit_format, output, threads=jobs)
    report: VerifyReport | None = None

    with program(ctx, log_file) as loggers:
        report = run_checks(config, checks, loggers[1])
        Event.from_command(ctx, "summary", data={"passed": report.passed, "failed": report.failed}).log(
            INFO if report.passed else WARNING,
            *loggers,
        )
        write(config, report if config.emit == "json" else report.checks)

    if not report.passed:
        ctx.exit(1)
