"""
Model fitting and design-space exploration.

Every evaluation composes the field of a geometry with the matched-load
power of a coil, so output power is a pure quadratic k * I^2 in the rail
current. Coefficients are reported in uW/A^2.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from harvestr.analysis.datasets import (
    LAB_LOOP_SEPARATION,
    LAB_NOISE_VOLTAGE,
    lab_measurement_table,
)
from harvestr.analysis.scenario import SECONDS_PER_DAY, SiteConfig, Timetable, simulate_pass
from harvestr.analysis.tables import COEFFICIENT_COLUMNS, POWER_COLUMNS
from harvestr.errors import ValidationError
from harvestr.models.geometry import LabLoopGeometry, make_geometry
from harvestr.models.harvester import CoilSpec, matched_load_power, noise_floor_power
from harvestr.models.magnetics import SourceCurrent
from harvestr.models.presets import COIL_PRESETS, get_coil

logger = logging.getLogger(__name__)

DEFAULT_FIT_BOUNDS = (0.1, 10.0)
FIT_GRID_POINTS = 400


def predict_coefficient(coil: CoilSpec, geometry, frequency):
    """
    Power coefficient k such that P = k * I^2.

    Args:
        coil (CoilSpec): Harvester coil
        geometry (FieldGeometry): Conductor geometry and harvester position
        frequency (float): Current frequency in hertz

    Returns:
        float: k in uW/A^2
    """
    h0 = geometry.field(SourceCurrent(1.0, frequency))
    return matched_load_power(coil, h0, frequency) * 1e6


def _resolve_coil(coil, coils=None):
    if isinstance(coil, CoilSpec):
        return coil
    if coils is not None and coil in coils:
        return coils[coil]
    return get_coil(coil)


@dataclass(frozen=True)
class LoopFit:
    a: float
    rms_log_residual: float
    b: float
    n: int


def _loop_objective(observed, b, coils):
    rows = [
        (_resolve_coil(row.coil, coils), float(row.f_hz), float(row.r_m))
        for row in observed.itertuples(index=False)
    ]
    log_k_obs = np.log(observed["k_uw_per_a2"].to_numpy(dtype=float))

    def objective(a):
        log_k_model = np.array(
            [
                math.log(predict_coefficient(coil, LabLoopGeometry(r=r_m, a=a, b=b), f_hz))
                for coil, f_hz, r_m in rows
            ]
        )
        return float(np.sum((log_k_model - log_k_obs) ** 2))

    return objective


def fit_loop_length(observed, b=LAB_LOOP_SEPARATION, bounds=DEFAULT_FIT_BOUNDS, coils=None):
    """
    Fit the bench conductor length ``a`` to observed power coefficients.

    Minimises the sum of squared log residuals by scanning a grid over
    ``bounds`` and refining the best bracket with golden-section search.

    Args:
        observed (pd.DataFrame): Coefficient table (coil, f_hz, r_m, k_uw_per_a2)
        b (float): Near-to-far side separation in metres, held fixed
        bounds (tuple): (lower, upper) search range for a in metres
        coils (dict, optional): Coil name to CoilSpec mapping; presets otherwise

    Returns:
        LoopFit: Fitted length and RMS log residual
    """
    from scipy.optimize import minimize_scalar

    lo, hi = bounds
    if not 0 < lo < hi:
        raise ValidationError(f"Fit bounds must satisfy 0 < lower < upper, got {bounds}")
    if not b > 0:
        raise ValidationError(f"Loop separation b must be positive, got {b}")
    if observed is None or observed.empty:
        raise ValidationError("Coefficient table is empty")
    if observed["r_m"].nunique() < 2:
        raise ValidationError(
            "Fitting the loop length needs observations at two or more distances"
        )
    if not (observed["k_uw_per_a2"] > 0).all():
        raise ValidationError("Observed coefficients must be positive")

    objective = _loop_objective(observed, b, coils)
    grid = np.linspace(lo, hi, FIT_GRID_POINTS)
    values = np.array([objective(a) for a in grid])
    j = int(np.argmin(values))
    best_a, best_value = float(grid[j]), float(values[j])

    if 0 < j < grid.size - 1 and values[j] < values[j - 1] and values[j] < values[j + 1]:
        result = minimize_scalar(
            objective, bracket=(grid[j - 1], grid[j], grid[j + 1]), method="golden"
        )
    else:
        # minimum at a grid edge or on a flat stretch
        edge = (grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)])
        result = minimize_scalar(objective, bounds=edge, method="bounded")
    if lo <= result.x <= hi and result.fun < best_value:
        best_a, best_value = float(result.x), float(result.fun)

    n = len(observed)
    fit = LoopFit(a=best_a, rms_log_residual=math.sqrt(best_value / n), b=b, n=n)
    logger.info(
        "Fitted loop length a=%.6g m (b=%.3g m, rms log residual %.3g, %d points)",
        fit.a,
        fit.b,
        fit.rms_log_residual,
        n,
    )
    return fit


@dataclass(frozen=True)
class SweepSpec:
    """
    Cartesian grid of coils, frequencies, distances and optionally currents.

    Without currents the sweep yields a coefficient table; with currents it
    yields a power table.

    Args:
        coils (tuple): CoilSpec values
        frequencies (tuple): Frequencies in hertz
        distances (tuple): Harvester distances in metres
        currents (tuple, optional): Currents in amperes RMS
        geometry (str): 'lab_loop' or 'two_rail'
        geometry_params (dict): Remaining geometry fields (a, b or d_rr, current_split)
    """

    coils: Tuple[CoilSpec, ...]
    frequencies: Tuple[float, ...]
    distances: Tuple[float, ...]
    currents: Optional[Tuple[float, ...]] = None
    geometry: str = "lab_loop"
    geometry_params: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        for name in ("coils", "frequencies", "distances"):
            if not getattr(self, name):
                raise ValidationError(f"Sweep range '{name}' is empty")
        if self.currents is not None and not self.currents:
            raise ValidationError("Sweep range 'currents' is empty")


def sweep(spec: SweepSpec):
    """
    Evaluate the model over every point of a sweep grid.

    Rows are ordered by coil name, frequency, distance, then current.

    Returns:
        pd.DataFrame: Coefficient table or power table
    """
    coils = sorted(spec.coils, key=lambda c: c.name)
    rows = []
    for coil, f_hz, r_m in itertools.product(
        coils, sorted(spec.frequencies), sorted(spec.distances)
    ):
        geometry = make_geometry(spec.geometry, r_m, **spec.geometry_params)
        k = predict_coefficient(coil, geometry, f_hz)
        if spec.currents is None:
            rows.append((coil.name, f_hz, r_m, k))
        else:
            for i_a in sorted(spec.currents):
                rows.append((coil.name, f_hz, r_m, i_a, k * 1e-6 * i_a**2))
    columns = COEFFICIENT_COLUMNS if spec.currents is None else POWER_COLUMNS
    logger.debug("Sweep evaluated %d rows", len(rows))
    return pd.DataFrame(rows, columns=columns)


@dataclass(frozen=True)
class OptimizeSpec:
    """
    Placement / coil choice problem.

    Args:
        coils (tuple): Candidate CoilSpec values
        min_distance (float): Closest permitted distance in metres
        max_distance (float): Farthest considered distance in metres
        frequencies (tuple): Candidate frequencies in hertz
        currents (tuple): Rail currents for the 'power' objective
        objective (str): 'power' (watts at each current) or 'daily_energy'
            (joules per day over ``timetable``)
        geometry (str): 'two_rail' or 'lab_loop'
        geometry_params (dict): Remaining geometry fields
        timetable (Timetable, optional): Required for 'daily_energy'
        grid_points (int): Distance grid size before refinement
    """

    coils: Tuple[CoilSpec, ...]
    min_distance: float
    max_distance: float
    frequencies: Tuple[float, ...]
    currents: Tuple[float, ...] = (100.0,)
    objective: str = "power"
    geometry: str = "two_rail"
    geometry_params: dict = field(default_factory=dict, hash=False)
    timetable: Optional[Timetable] = None
    grid_points: int = 101

    def __post_init__(self):
        if not self.coils or not self.frequencies:
            raise ValidationError("Optimisation needs at least one coil and frequency")
        if self.objective not in ("power", "daily_energy"):
            raise ValidationError(
                f"Unknown objective: {self.objective}. Choose 'power' or 'daily_energy'."
            )
        if self.objective == "power" and not self.currents:
            raise ValidationError("The 'power' objective needs at least one current")
        if self.objective == "daily_energy" and self.timetable is None:
            raise ValidationError("The 'daily_energy' objective needs a timetable")
        if not 0 < self.min_distance <= self.max_distance:
            raise ValidationError(
                "Distance constraints are infeasible: need 0 < min <= max, got "
                f"[{self.min_distance}, {self.max_distance}]"
            )
        if self.grid_points < 2:
            raise ValidationError(f"grid_points must be at least 2, got {self.grid_points}")


@dataclass(frozen=True)
class Placement:
    coil: str
    frequency: float
    current: Optional[float]
    distance: float
    value: float


def _placement_objective(spec: OptimizeSpec, coil, f_hz, i_a):
    def value(distance):
        geometry = make_geometry(spec.geometry, distance, **spec.geometry_params)
        if spec.objective == "power":
            return predict_coefficient(coil, geometry, f_hz) * 1e-6 * i_a**2
        site = SiteConfig(geometry=geometry, coil=coil, frequency=f_hz)
        total = 0.0
        for ev in spec.timetable.events:
            total += simulate_pass(site, ev)
        return total * SECONDS_PER_DAY / spec.timetable.period

    return value


def optimize_placement(spec: OptimizeSpec):
    """
    Best coil, frequency, current and distance within the constraints.

    Each discrete combination is scanned over a dense distance grid; the
    best grid point is refined by bounded scalar search between its
    neighbours and only replaced when the refinement is strictly better.

    Returns:
        Placement: Best feasible point and its objective value (W or J/day)
    """
    from scipy.optimize import minimize_scalar

    if spec.min_distance == spec.max_distance:
        grid = np.array([spec.min_distance])
    else:
        grid = np.linspace(spec.min_distance, spec.max_distance, spec.grid_points)
    currents = sorted(spec.currents) if spec.objective == "power" else [None]

    best = None
    for coil, f_hz, i_a in itertools.product(
        sorted(spec.coils, key=lambda c: c.name), sorted(spec.frequencies), currents
    ):
        value = _placement_objective(spec, coil, f_hz, i_a)
        values = np.array([value(d) for d in grid])
        j = int(np.argmax(values))
        distance, objective = float(grid[j]), float(values[j])
        if grid.size > 1:
            lo = grid[max(j - 1, 0)]
            hi = grid[min(j + 1, grid.size - 1)]
            result = minimize_scalar(lambda d: -value(d), bounds=(lo, hi), method="bounded")
            if -result.fun > objective:
                distance, objective = float(result.x), float(-result.fun)
        candidate = Placement(coil.name, f_hz, i_a, distance, objective)
        logger.debug("Candidate %s", candidate)
        if best is None or candidate.value > best.value:
            best = candidate
    logger.info("Best placement %s", best)
    return best


def model_vs_measured(a, b=LAB_LOOP_SEPARATION, noise_voltage=LAB_NOISE_VOLTAGE, coils=None):
    """
    Compare the bench model with the shipped laboratory measurements.

    Measured values are also reported with the interference floor
    (``noise_voltage`` across the coil) removed.

    Args:
        a (float): Bench conductor length in metres
        b (float): Near-to-far side separation in metres
        noise_voltage (float): Interference voltage in volts RMS
        coils (dict, optional): Coil name to CoilSpec mapping

    Returns:
        pd.DataFrame: coil, f_hz, r_m, i_a, p_w (measured), p_model_w,
            p_corrected_w and deviation (measured / model - 1)
    """
    coils = coils or COIL_PRESETS
    df = lab_measurement_table()
    model = []
    corrected = []
    for row in df.itertuples(index=False):
        coil = _resolve_coil(row.coil, coils)
        k = predict_coefficient(coil, LabLoopGeometry(r=row.r_m, a=a, b=b), row.f_hz)
        model.append(k * 1e-6 * row.i_a**2)
        corrected.append(row.p_w - noise_floor_power(coil, noise_voltage))
    df = df.drop(columns=["source"])
    df["p_model_w"] = model
    df["p_corrected_w"] = corrected
    df["deviation"] = df["p_w"] / df["p_model_w"] - 1
    return df
