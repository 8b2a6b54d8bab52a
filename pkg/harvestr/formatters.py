"""
Formatting functions for displaying analysis results.
"""


def _si(value, unit):
    """Render ``value`` with an SI prefix, e.g. 1.242e-4 W -> '124.2 µW'."""
    prefixes = ((1e-9, "n"), (1e-6, "µ"), (1e-3, "m"), (1.0, ""), (1e3, "k"))
    magnitude = abs(value)
    scale, prefix = 1.0, ""
    for candidate, name in prefixes:
        if magnitude >= candidate:
            scale, prefix = candidate, name
    if magnitude == 0:
        scale, prefix = 1.0, ""
    return f"{value / scale:.4g} {prefix}{unit}"


def format_field(src, geometry, h0):
    """
    Format a field report.

    Args:
        src (SourceCurrent): Rail current
        geometry (RailSiteGeometry): Site geometry
        h0 (FieldStrength): Field at the harvester

    Returns:
        str: Rich markup
    """
    output = []
    output.append("\n[bold green]===== Field at Harvester =====[/bold green]")
    output.append(
        f"[bold]Current:[/bold] {src.i_rms:.4g} A RMS at {src.frequency:.4g} Hz"
    )
    output.append(
        f"[bold]Distance to Near Rail:[/bold] {geometry.r_n:.4g} m "
        f"(gauge {geometry.d_rr:.4g} m)"
    )
    output.append(f"[bold]Effective Radius:[/bold] {geometry.r_e:.4g} m")
    output.append(f"[bold]Field Strength:[/bold] {h0.h_rms:.4g} A/m RMS")
    output.append(f"[bold]Flux Density (air):[/bold] {_si(h0.b_rms, 'T')} RMS")
    return "\n".join(output)


def format_power(coil, src, geometry, h0, v_oc, power, eddy, hysteresis):
    """
    Format a single operating point of a coil.

    Args:
        coil (CoilSpec): Harvester coil
        src (SourceCurrent): Rail current
        geometry (FieldGeometry): Site geometry
        h0 (FieldStrength): Field at the harvester
        v_oc (float): Open-circuit voltage in volts RMS
        power (float): Matched-load power in watts
        eddy (float): Eddy-current loss density in W/m^3
        hysteresis (HysteresisCheck): Hysteresis loss check

    Returns:
        str: Rich markup
    """
    output = []
    output.append(f"\n[bold green]===== {coil.name} Harvester Output =====[/bold green]")
    output.append(
        f"[bold yellow]{coil.turns} turns, {coil.area * 1e6:.4g} mm², "
        f"µe {coil.mu_e:.4g}, {_si(coil.resistance, 'Ω')}[/bold yellow]"
    )
    output.append(
        f"\n[bold]Operating Point:[/bold] {src.i_rms:.4g} A at {src.frequency:.4g} Hz, "
        f"{geometry.distance:.4g} m"
    )
    output.append(f"[bold]Field Strength:[/bold] {h0.h_rms:.4g} A/m RMS")
    output.append(f"[bold]Open-Circuit Voltage:[/bold] {_si(v_oc, 'V')} RMS")
    output.append(f"[bold]Matched-Load Power:[/bold] [green]{_si(power, 'W')}[/green]")

    output.append("\n[bold cyan]--- Core Losses ---[/bold cyan]")
    output.append(f"[bold]Eddy Current Loss:[/bold] {_si(eddy, 'W/m³')}")
    color = "green" if hysteresis.negligible else "red"
    verdict = "negligible" if hysteresis.negligible else "NOT negligible"
    output.append(
        f"[bold]Hysteresis Loss:[/bold] [{color}]{verdict}[/{color}] "
        f"(tan δ bound {hysteresis.bound:.3g})"
    )
    return "\n".join(output)


def format_sweep(df):
    """Summarise a sweep table."""
    output = []
    output.append("\n[bold green]===== Sweep =====[/bold green]")
    output.append(f"[bold]Rows:[/bold] {len(df)}")
    value = "k_uw_per_a2" if "k_uw_per_a2" in df.columns else "p_w"
    unit = "µW/A²" if value == "k_uw_per_a2" else "W"
    for coil, group in df.groupby("coil", sort=True):
        best = group.loc[group[value].idxmax()]
        output.append(
            f"[bold]{coil}:[/bold] max {best[value]:.4g} {unit} "
            f"at {best['r_m']:.4g} m, {best['f_hz']:.4g} Hz"
        )
    return "\n".join(output)


def format_fit(fit, source):
    """
    Format a loop-length fit.

    Args:
        fit (LoopFit): Fit result
        source (str): Where the observed coefficients came from

    Returns:
        str: Rich markup
    """
    output = []
    output.append("\n[bold green]===== Bench Loop Fit =====[/bold green]")
    output.append(f"[bold yellow]{source}[/bold yellow] ({fit.n} points)")
    output.append(f"\n[bold]Conductor Length a:[/bold] {fit.a:.4g} m")
    output.append(f"[bold]Separation b (fixed):[/bold] {fit.b:.4g} m")
    color = "green" if fit.rms_log_residual < 0.1 else "yellow"
    output.append(
        f"[bold]RMS Log Residual:[/bold] [{color}]{fit.rms_log_residual:.3g}[/{color}]"
    )
    return "\n".join(output)


def format_energy(report, budget):
    """
    Format an energy report.

    Args:
        report (EnergyReport): Simulation result
        budget (NodeBudget): Node energy requirement

    Returns:
        str: Rich markup
    """
    output = []
    output.append("\n[bold green]===== Daily Energy Budget =====[/bold green]")
    output.append(f"[bold]Train Passes:[/bold] {len(report.per_event)}")
    for label, energy in report.per_event:
        output.append(f"  {label}: {_si(energy, 'J')}")
    output.append(f"\n[bold]Harvested per Day:[/bold] {_si(report.daily_total, 'J')}")
    output.append(f"[bold]Required per Day:[/bold] {_si(budget.daily_requirement, 'J')}")
    if report.margin >= 1:
        output.append(f"[bold]Margin:[/bold] [green]{report.margin:.3g}x (feasible)[/green]")
    else:
        output.append(f"[bold]Margin:[/bold] [red]{report.margin:.3g}x (short)[/red]")
    return "\n".join(output)


def format_trace(trace, total, detection):
    """Summarise trace energy and detected passes."""
    output = []
    title = trace.site_label or "Trace"
    output.append(f"\n[bold green]===== {title} Analysis =====[/bold green]")
    if trace.coil_label:
        output.append(f"[bold yellow]{trace.coil_label}[/bold yellow]")
    output.append(
        f"[bold]Samples:[/bold] {len(trace)} ({trace.kind}, R_load {_si(trace.r_load, 'Ω')})"
    )
    output.append(f"[bold]Total Energy:[/bold] {_si(total, 'J')}")
    output.append(f"[bold]Passes Detected:[/bold] {len(detection.intervals)}")
    for iv in detection.intervals:
        output.append(
            f"  {iv.t_start:.6g} s - {iv.t_end:.6g} s: peak {_si(iv.peak_power, 'W')}, "
            f"{_si(iv.energy, 'J')}"
        )
    return "\n".join(output)


def format_placement(placement, objective):
    """Format the best placement found by the optimiser."""
    unit = "W" if objective == "power" else "J/day"
    output = []
    output.append("\n[bold green]===== Best Placement =====[/bold green]")
    output.append(f"[bold]Coil:[/bold] {placement.coil}")
    output.append(f"[bold]Frequency:[/bold] {placement.frequency:.4g} Hz")
    if placement.current is not None:
        output.append(f"[bold]Current:[/bold] {placement.current:.4g} A")
    output.append(f"[bold]Distance:[/bold] {placement.distance:.4g} m")
    output.append(f"[bold]Objective:[/bold] [green]{_si(placement.value, unit)}[/green]")
    return "\n".join(output)
