"""
Recorded load-voltage traces.

A trace is the voltage across an impedance-matched load logged while
trains pass. From it we derive instantaneous power P = V^2 / R_load, a
sliding-maximum envelope, train-pass intervals and harvested energy.

Trace CSV format: header ``t_s,v_load_V``, one sample per line, ``#``
comments. Numbers are written with 9 significant digits.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from harvestr.analysis.tables import FLOAT_FORMAT
from harvestr.errors import ValidationError

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["t_s", "v_load_V"]
TRACE_KINDS = ("waveform", "envelope")


@dataclass(frozen=True, eq=False)
class Trace:
    """
    Timestamped load voltage.

    Args:
        t (np.ndarray): Sample times in seconds, strictly increasing
        v_load (np.ndarray): Load voltage in volts; instantaneous values for
            kind 'waveform', amplitudes for kind 'envelope'
        r_load (float): Load resistance in ohms
        coil_label (str): Harvester coil identifier
        site_label (str): Recording site identifier
        kind (str): 'waveform' or 'envelope'
    """

    t: np.ndarray = field(repr=False)
    v_load: np.ndarray = field(repr=False)
    r_load: float
    coil_label: str = ""
    site_label: str = ""
    kind: str = "waveform"

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.v_load, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v_load", v)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValidationError(
                f"Trace needs matching 1-D time and voltage arrays, got {t.shape} and {v.shape}"
            )
        if t.size and not np.all(np.diff(t) > 0):
            raise ValidationError("Trace timestamps must be strictly increasing")
        if not self.r_load > 0:
            raise ValidationError(f"Load resistance must be positive, got {self.r_load}")
        if self.kind not in TRACE_KINDS:
            raise ValidationError(
                f"Unknown trace kind: {self.kind}. Choose from 'waveform' or 'envelope'."
            )

    def __len__(self):
        return self.t.size


@dataclass(frozen=True)
class PassInterval:
    t_start: float
    t_end: float
    peak_power: float
    energy: float


@dataclass(frozen=True)
class PassDetection:
    intervals: tuple = ()

    @property
    def total_energy(self):
        return sum(iv.energy for iv in self.intervals)

    def to_frame(self):
        return pd.DataFrame(
            [
                (iv.t_start, iv.t_end, iv.peak_power, iv.energy)
                for iv in self.intervals
            ],
            columns=["t_start_s", "t_end_s", "peak_p_w", "energy_j"],
        )


def read_trace(path, r_load, coil_label="", site_label="", kind="waveform"):
    """
    Read a trace CSV file.

    Args:
        path (str or Path): CSV file
        r_load (float): Load resistance in ohms
        coil_label (str): Harvester coil identifier
        site_label (str): Recording site identifier
        kind (str): 'waveform' or 'envelope'

    Returns:
        Trace: The recorded trace
    """
    try:
        df = pd.read_csv(
            path,
            comment="#",
            dtype=float,
            skipinitialspace=True,
            float_precision="round_trip",
        )
    except (OSError, ValueError) as e:
        raise ValidationError(f"Could not read trace {path}: {e}") from e
    if list(df.columns) != TRACE_COLUMNS:
        raise ValidationError(
            f"Trace {path} must have header {','.join(TRACE_COLUMNS)}, "
            f"got {','.join(map(str, df.columns))}"
        )
    logger.info("Read %d samples from %s", len(df), path)
    return Trace(
        t=df["t_s"].to_numpy(),
        v_load=df["v_load_V"].to_numpy(),
        r_load=r_load,
        coil_label=coil_label,
        site_label=site_label,
        kind=kind,
    )


def write_trace(trace: Trace, path):
    """Write ``trace`` in the trace CSV format."""
    df = pd.DataFrame({"t_s": trace.t, "v_load_V": trace.v_load})
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def power_trace(trace: Trace):
    """
    Instantaneous power in the load, v^2 / r_load.

    For an 'envelope' trace the result is the peak instantaneous power.

    Returns:
        pd.Series: Power in watts indexed by time in seconds
    """
    power = trace.v_load**2 / trace.r_load
    return pd.Series(power, index=pd.Index(trace.t, name="t_s"), name="p_w")


def envelope(trace: Trace, window=1.0):
    """
    Sliding-window maximum of |v|.

    The window is centred on each sample and truncated at the trace edges,
    so the output has the same length as the input.

    Args:
        trace (Trace): Input trace
        window (float): Window length in seconds

    Returns:
        pd.Series: Envelope in volts indexed by time in seconds
    """
    if len(trace) < 2:
        raise ValidationError("Envelope needs at least two samples")
    spacing = float(np.median(np.diff(trace.t)))
    if not window > 0 or window < 2 * spacing:
        raise ValidationError(
            f"Envelope window {window} s is shorter than two sample spacings ({2 * spacing} s)"
        )
    size = int(round(window / spacing)) + 1
    env = (
        pd.Series(np.abs(trace.v_load))
        .rolling(size, center=True, min_periods=1)
        .max()
        .to_numpy()
    )
    return pd.Series(env, index=pd.Index(trace.t, name="t_s"), name="envelope_V")


def integrate_energy(power, t0=None, t1=None):
    """
    Trapezoidal integral of power over [t0, t1].

    Interior bounds that fall between samples are handled by linear
    interpolation, so adjacent intervals add up.

    Args:
        power (pd.Series): Power in watts indexed by time in seconds
        t0 (float): Start time, defaults to the first sample
        t1 (float): End time, defaults to the last sample

    Returns:
        float: Energy in joules
    """
    from scipy.integrate import trapezoid

    t = power.index.to_numpy(dtype=float)
    p = power.to_numpy(dtype=float)
    if t.size < 2:
        raise ValidationError("Energy integration needs at least two samples")
    t0 = t[0] if t0 is None else t0
    t1 = t[-1] if t1 is None else t1
    if not t0 < t1:
        raise ValidationError(f"Integration bounds must satisfy t0 < t1, got {t0}, {t1}")
    if t0 < t[0] or t1 > t[-1]:
        raise ValidationError(
            f"Bounds [{t0}, {t1}] lie outside the trace span [{t[0]}, {t[-1]}]"
        )
    inside = (t > t0) & (t < t1)
    ts = np.concatenate(([t0], t[inside], [t1]))
    ps = np.concatenate(([np.interp(t0, t, p)], p[inside], [np.interp(t1, t, p)]))
    return float(trapezoid(ps, ts))


def detect_passes(power, threshold, hold=0.0):
    """
    Find intervals where power stays at or above ``threshold``.

    Intervals separated by gaps shorter than ``hold`` seconds are merged.

    Args:
        power (pd.Series): Power in watts indexed by time in seconds
        threshold (float): Detection threshold in watts
        hold (float): Merge gap in seconds

    Returns:
        PassDetection: Ordered, non-overlapping intervals with peak power
            and energy
    """
    if not threshold > 0:
        raise ValidationError(f"Threshold must be positive, got {threshold}")
    if not hold >= 0:
        raise ValidationError(f"Hold time must be non-negative, got {hold}")

    t = power.index.to_numpy(dtype=float)
    p = power.to_numpy(dtype=float)
    above = p >= threshold
    if not above.any():
        return PassDetection()

    # run boundaries as sample indices
    edges = np.diff(above.astype(np.int8))
    starts = list(np.flatnonzero(edges == 1) + 1)
    ends = list(np.flatnonzero(edges == -1))
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        ends.append(t.size - 1)

    runs = []
    for i0, i1 in zip(starts, ends):
        if runs and t[i0] - t[runs[-1][1]] < hold:
            runs[-1][1] = i1
        else:
            runs.append([i0, i1])

    intervals = []
    for i0, i1 in runs:
        energy = integrate_energy(power, t[i0], t[i1]) if i1 > i0 else 0.0
        intervals.append(
            PassInterval(
                t_start=float(t[i0]),
                t_end=float(t[i1]),
                peak_power=float(p[i0 : i1 + 1].max()),
                energy=energy,
            )
        )
    logger.info("Detected %d passes above %.3g W", len(intervals), threshold)
    return PassDetection(tuple(intervals))


def analyse_trace(trace: Trace, threshold, hold=0.0, window=1.0):
    """
    Total harvested energy and train passes of a recorded trace.

    Waveform traces are located on the power of their envelope, since the
    instantaneous power of an AC waveform dips to zero twice per cycle.
    Interval energies are always integrated from the recorded samples.

    Args:
        trace (Trace): Recorded trace
        threshold (float): Detection threshold in watts
        hold (float): Merge gap in seconds
        window (float): Envelope window in seconds, used for waveform traces

    Returns:
        tuple: (total energy in joules, PassDetection)
    """
    power = power_trace(trace)
    total = integrate_energy(power)
    if trace.kind == "envelope":
        return total, detect_passes(power, threshold, hold)

    env = envelope(trace, window)
    located = detect_passes(env**2 / trace.r_load, threshold, hold)
    intervals = []
    for iv in located.intervals:
        inside = power[(power.index >= iv.t_start) & (power.index <= iv.t_end)]
        energy = integrate_energy(power, iv.t_start, iv.t_end) if iv.t_end > iv.t_start else 0.0
        intervals.append(
            PassInterval(iv.t_start, iv.t_end, float(inside.max()), energy)
        )
    return total, PassDetection(tuple(intervals))
