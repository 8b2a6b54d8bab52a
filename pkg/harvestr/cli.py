#!/usr/bin/env python
"""
Railway Return-Current Harvester CLI Tool

Models a ferrite-rod coil harvesting the magnetic field of traction
return currents in the rails:
1. Field strength and flux density beside the track
2. Open-circuit voltage and matched-load power of a coil
3. Coefficient / power sweeps over coils, frequencies and distances
4. Bench loop fitting, daily energy budgets and recorded trace analysis

Usage:
    harvestr field site.conf --at 0.5
    harvestr simulate site.conf --out energy.csv --plot energy.svg
    harvestr fit --out fit.csv

Every subcommand prints a human summary and writes its CSV table to
``--out`` (``-`` for standard output). Exit codes: 0 success, 2 invalid
input or configuration, 3 argument outside the model's domain.
"""

# Start with only essential imports for startup
import argparse
import logging
import sys

# Rich is smaller than pandas/numpy, so it's acceptable for startup
from rich.console import Console
from rich.markup import escape

# Local imports - these are small and fast
from harvestr import config
from harvestr.errors import ConfigError, DomainError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DOMAIN = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage errors as ValidationError."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def setup_logging(verbosity):
    """Send harvestr log records to standard error through rich."""
    from rich.logging import RichHandler

    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    handler = RichHandler(
        console=Console(stderr=True), show_time=False, show_path=False
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("harvestr")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def _override(doc, section, key, value):
    if value is not None:
        doc.set(section, key, repr(float(value)))


def _load(args):
    """Load the config named on the command line and apply flag overrides."""
    doc = config.load_config(args.config) if args.config else config.ConfigDocument()
    for section, key, attr in getattr(args, "overrides", ()):
        if section is None:
            # harvester distance of whichever geometry is configured
            section, key = config.distance_key(doc)
        _override(doc, section, key, getattr(args, attr))
    return doc


def _emit(args, console, summary, df, plot=None):
    """
    Write the CSV table and optional plot, then show the summary.

    Args:
        args (argparse.Namespace): Parsed arguments
        console (Console): Rich console for the summary
        summary (str): Rich markup
        df (pd.DataFrame): Result table
        plot (dict, optional): Keyword arguments for plot_csv
    """
    from harvestr.analysis.tables import to_csv_text, write_table

    if args.out == "-":
        text = to_csv_text(df)
        sys.stdout.write(text)
        Console(stderr=True).print(summary)
    else:
        text = write_table(df, args.out) if args.out else to_csv_text(df)
        console.print(summary)
        if args.out:
            logger.info("Wrote %d rows to %s", len(df), args.out)
    if args.plot:
        if plot is None:
            raise ValidationError(f"The '{args.command}' command has no plot")
        from harvestr.plotting import plot_csv

        plot_csv(text, path=args.plot, **plot)


def cmd_field(args, console):
    """Field strength and flux density at the harvester."""
    import pandas as pd

    from harvestr.analysis.tables import FIELD_COLUMNS
    from harvestr.formatters import format_field

    doc = _load(args)
    if config.geometry_kind(doc) != "two_rail":
        raise ConfigError("The field report needs the two-rail site geometry")
    src = config.build_source(doc)
    geometry = config.build_rail_geometry(doc)
    h0 = geometry.field(src)
    df = pd.DataFrame(
        [(geometry.r_n, geometry.r_e, h0.h_rms, h0.b_rms)], columns=FIELD_COLUMNS
    )
    _emit(args, console, format_field(src, geometry, h0), df)


def cmd_power(args, console):
    """Open-circuit voltage and matched-load power at one operating point."""
    import pandas as pd

    from harvestr.analysis.tables import POWER_COLUMNS
    from harvestr.formatters import format_power
    from harvestr.models.harvester import (
        core_flux_density,
        eddy_loss,
        hysteresis_negligible,
        matched_load_power,
        open_circuit_voltage,
    )
    from harvestr.models.magnetics import rms_to_peak

    doc = _load(args)
    coil = config.build_coil(doc)
    src = config.build_source(doc)
    geometry = config.build_geometry(doc)
    h0 = geometry.field(src)
    v_oc = open_circuit_voltage(coil, h0, src.frequency)
    power = matched_load_power(coil, h0, src.frequency)
    b_peak = rms_to_peak(core_flux_density(coil.mu_e, h0))
    eddy = eddy_loss(b_peak, coil.rod_diameter, src.frequency, coil.material.resistivity)
    hysteresis = hysteresis_negligible(coil.material)

    df = pd.DataFrame(
        [(coil.name, src.frequency, geometry.distance, src.i_rms, power)],
        columns=POWER_COLUMNS,
    )
    summary = format_power(coil, src, geometry, h0, v_oc, power, eddy, hysteresis)
    _emit(args, console, summary, df)


def cmd_sweep(args, console):
    """Evaluate the model over a grid of coils, frequencies and distances."""
    from harvestr.analysis.optimize import sweep
    from harvestr.formatters import format_sweep

    doc = _load(args)
    spec = config.build_sweep_spec(doc)
    with console.status("[bold blue]Sweeping...", spinner="dots"):
        df = sweep(spec)
    y = "k_uw_per_a2" if spec.currents is None else "p_w"
    group = ["coil", "f_hz"] if spec.currents is None else ["coil", "f_hz", "i_a"]
    plot = {"x": "r_m", "y": y, "group": group, "title": "Harvested power", "logy": True}
    _emit(args, console, format_sweep(df), df, plot)


def cmd_fit(args, console):
    """Fit the bench conductor length to observed coefficients."""
    import pandas as pd

    from harvestr.analysis.datasets import lab_coefficient_table
    from harvestr.analysis.optimize import fit_loop_length, model_vs_measured
    from harvestr.analysis.tables import read_coefficient_table
    from harvestr.formatters import format_fit

    doc = _load(args)
    coils = config.coil_catalog(doc)
    b = config.build_lab_loop(doc).b
    if args.observed:
        observed = read_coefficient_table(args.observed)
        source = str(args.observed)
    else:
        observed = lab_coefficient_table()
        source = "Built-in laboratory coefficients"

    with console.status("[bold blue]Fitting loop length...", spinner="dots"):
        fit = fit_loop_length(
            observed, b=b, bounds=(args.lower, args.upper), coils=coils
        )

    if args.compare:
        df = model_vs_measured(fit.a, fit.b, coils=coils)
        plot = {"x": "i_a", "y": "deviation", "group": ["coil", "f_hz", "r_m"]}
    else:
        df = pd.DataFrame(
            [(fit.a, fit.b, fit.rms_log_residual, fit.n)],
            columns=["a_m", "b_m", "rms_log_residual", "n"],
        )
        plot = None
    _emit(args, console, format_fit(fit, source), df, plot)


def cmd_simulate(args, console):
    """Daily harvested energy over a timetable against a node budget."""
    from harvestr.analysis.scenario import simulate_period
    from harvestr.formatters import format_energy

    doc = _load(args)
    site = config.build_site(doc)
    timetable = config.build_timetable(doc)
    budget = config.build_budget(doc)
    report = simulate_period(site, timetable, budget)
    plot = {
        "x": "start_s",
        "y": "energy_j",
        "title": "Energy per pass",
        "query": "row == 'event'",
    }
    _emit(args, console, format_energy(report, budget), report.to_frame(), plot)


def cmd_trace(args, console):
    """Energy and train passes of a recorded load-voltage trace."""
    from harvestr.analysis.traces import analyse_trace, read_trace
    from harvestr.formatters import format_trace

    doc = _load(args)
    trace = read_trace(args.trace, **config.trace_metadata(doc))
    total, detection = analyse_trace(
        trace, threshold=args.threshold, hold=args.hold, window=args.window
    )
    plot = {"x": "t_start_s", "y": "energy_j", "title": "Energy per detected pass"}
    _emit(args, console, format_trace(trace, total, detection), detection.to_frame(), plot)


def cmd_optimize(args, console):
    """Best coil, frequency and distance within placement constraints."""
    import pandas as pd

    from harvestr.analysis.optimize import optimize_placement
    from harvestr.formatters import format_placement

    doc = _load(args)
    spec = config.build_optimize_spec(doc)
    with console.status("[bold blue]Optimising placement...", spinner="dots"):
        best = optimize_placement(spec)
    df = pd.DataFrame(
        [(best.coil, best.frequency, best.current, best.distance, best.value)],
        columns=["coil", "f_hz", "i_a", "r_m", "value"],
    )
    _emit(args, console, format_placement(best, spec.objective), df)


def build_parser():
    """Command-line parser with one subcommand per verb."""
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    common.add_argument("--out", help="CSV output file ('-' for standard output)")
    common.add_argument("--plot", help="SVG chart derived from the CSV output")

    with_config = ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("config", help="Configuration file")
    with_config.add_argument(
        "--dump-config",
        action="store_true",
        help="Print the configuration after flag overrides and exit",
    )

    parser = ArgumentParser(
        prog="harvestr", description="Railway Return-Current Harvester CLI Tool"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name, func, parents, overrides=(), **kwargs):
        sub = subparsers.add_parser(name, parents=parents, **kwargs)
        sub.set_defaults(func=func, overrides=overrides)
        return sub

    site_flags = (
        (None, None, "at"),
        ("site", "i_a", "current"),
        ("site", "f_hz", "frequency"),
    )
    for name, func, help_text in (
        ("field", cmd_field, "Field strength beside the track"),
        ("power", cmd_power, "Coil voltage and matched-load power"),
    ):
        sub = add(name, func, [with_config], site_flags, help=help_text)
        sub.add_argument("--at", type=float, help="Harvester distance (m)")
        sub.add_argument("--current", type=float, help="Return current (A RMS)")
        sub.add_argument("--frequency", type=float, help="Current frequency (Hz)")

    sub = add(
        "sweep",
        cmd_sweep,
        [with_config],
        (("lab_loop", "a_m", "a"), ("lab_loop", "b_m", "b")),
        help="Coefficient or power table over a grid",
    )
    sub.add_argument("--a", type=float, help="Bench conductor length (m)")
    sub.add_argument("--b", type=float, help="Bench loop separation (m)")

    sub = add(
        "fit",
        cmd_fit,
        [common],
        (("lab_loop", "b_m", "b"),),
        help="Fit the bench conductor length",
    )
    sub.add_argument(
        "observed",
        nargs="?",
        help="Coefficient table CSV (default: built-in laboratory coefficients)",
    )
    sub.add_argument(
        "--config", help="Configuration with [coil] and [lab_loop] (default: presets)"
    )
    sub.add_argument(
        "--dump-config",
        action="store_true",
        help="Print the configuration after flag overrides and exit",
    )
    sub.add_argument("--b", type=float, help="Loop separation (m), default 3")
    sub.add_argument("--lower", type=float, default=0.1, help="Lower bound of a (m)")
    sub.add_argument("--upper", type=float, default=10.0, help="Upper bound of a (m)")
    sub.add_argument(
        "--compare",
        action="store_true",
        help="Write model vs measured laboratory power instead of the fit",
    )

    sub = add(
        "simulate",
        cmd_simulate,
        [with_config],
        site_flags[:1] + (("budget", "daily_j", "budget"),),
        help="Daily energy budget over a timetable",
    )
    sub.add_argument("--at", type=float, help="Harvester distance (m)")
    sub.add_argument("--budget", type=float, help="Daily node requirement (J)")

    sub = add(
        "trace",
        cmd_trace,
        [common],
        (("trace", "r_load_ohm", "r_load"),),
        help="Energy and passes in a recorded trace",
    )
    sub.add_argument("trace", help="Trace CSV (t_s,v_load_V)")
    sub.add_argument("config", help="Trace metadata configuration")
    sub.add_argument(
        "--dump-config",
        action="store_true",
        help="Print the configuration after flag overrides and exit",
    )
    sub.add_argument("--r-load", dest="r_load", type=float, help="Load resistance (ohm)")
    sub.add_argument("--threshold", type=float, default=1e-5, help="Detection threshold (W)")
    sub.add_argument("--hold", type=float, default=0.0, help="Merge gap (s)")
    sub.add_argument("--window", type=float, default=1.0, help="Envelope window (s)")

    sub = add(
        "optimize",
        cmd_optimize,
        [with_config],
        (
            ("optimize", "min_distance_m", "min_distance"),
            ("optimize", "max_distance_m", "max_distance"),
        ),
        help="Best coil and placement within constraints",
    )
    sub.add_argument("--min-distance", dest="min_distance", type=float)
    sub.add_argument("--max-distance", dest="max_distance", type=float)
    return parser


def main(argv=None):
    """Main entry point for the CLI tool."""
    # Initialize Rich console for pretty output
    console = Console()
    error_console = Console(stderr=True)

    try:
        args = build_parser().parse_args(argv)
        setup_logging(args.verbose)
        if getattr(args, "dump_config", False):
            sys.stdout.write(_load(args).dump())
            return EXIT_OK
        args.func(args, console)
        return EXIT_OK
    except DomainError as e:
        error_console.print(f"[bold red]Error: {escape(str(e))}[/bold red]")
        return EXIT_DOMAIN
    except ValidationError as e:
        error_console.print(f"[bold red]Error: {escape(str(e))}[/bold red]")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
