import numpy as np
import pandas as pd
import pytest

from harvestr.analysis.traces import (
    Trace,
    analyse_trace,
    detect_passes,
    envelope,
    integrate_energy,
    power_trace,
    read_trace,
    write_trace,
)
from harvestr.errors import ValidationError

R_LOAD = 17.2e3


def series(t, p):
    return pd.Series(p, index=pd.Index(np.asarray(t, dtype=float), name="t_s"))


def burst_trace(duration=540.0, amplitude=2.0, dt=0.5, lead=100.0, kind="envelope"):
    t = np.arange(0.0, lead + duration + lead + dt / 2, dt)
    v = np.where((t >= lead) & (t <= lead + duration), amplitude, 0.0)
    return Trace(t=t, v_load=v, r_load=R_LOAD, kind=kind)


@pytest.mark.parametrize("v,expected", [(2.0, 232.6e-6), (4.17, 1.011e-3)])
def test_power_trace_published_peaks(v, expected):
    trace = Trace(t=[0.0, 1.0], v_load=[v, v], r_load=R_LOAD)
    assert power_trace(trace).iloc[0] == pytest.approx(expected, rel=1e-3)


def test_power_trace_zero_voltage():
    trace = Trace(t=[0.0, 1.0], v_load=[0.0, 0.0], r_load=R_LOAD)
    assert (power_trace(trace) == 0).all()


def test_power_trace_monotone_in_voltage_magnitude():
    rng = np.random.default_rng(3)
    t = np.arange(200.0)
    v1 = rng.normal(size=200)
    v2 = np.sign(rng.normal(size=200)) * (np.abs(v1) + rng.uniform(0, 1, 200))
    p1 = power_trace(Trace(t=t, v_load=v1, r_load=R_LOAD))
    p2 = power_trace(Trace(t=t, v_load=v2, r_load=R_LOAD))
    assert (p1.to_numpy() <= p2.to_numpy()).all()


def test_trace_validation():
    with pytest.raises(ValidationError):
        Trace(t=[0.0, 0.0], v_load=[1.0, 1.0], r_load=R_LOAD)
    with pytest.raises(ValidationError):
        Trace(t=[0.0, 1.0], v_load=[1.0, 1.0], r_load=0.0)
    with pytest.raises(ValidationError):
        Trace(t=[0.0, 1.0], v_load=[1.0], r_load=R_LOAD)
    with pytest.raises(ValidationError):
        Trace(t=[0.0, 1.0], v_load=[1.0, 1.0], r_load=R_LOAD, kind="spectrum")


def test_envelope_of_constant():
    t = np.arange(0.0, 10.0, 0.1)
    trace = Trace(t=t, v_load=-np.ones_like(t), r_load=R_LOAD)
    env = envelope(trace, window=1.0)
    assert len(env) == len(trace)
    assert (env == 1.0).all()


def test_envelope_of_sine():
    f = 50 / 3
    t = np.arange(0.0, 5.0, 1 / 1000)
    trace = Trace(t=t, v_load=3.0 * np.sin(2 * np.pi * f * t), r_load=R_LOAD)
    env = envelope(trace, window=1.0).to_numpy()
    step = 2 * np.pi * f / 1000
    assert env.max() <= 3.0
    assert env.min() >= 3.0 * np.cos(step)


def test_envelope_of_burst_is_exact_inside():
    trace = burst_trace(duration=60.0, lead=30.0, kind="waveform")
    env = envelope(trace, window=1.0)
    inside = (env.index >= 31.0) & (env.index <= 89.0)
    assert (env[inside] == 2.0).all()


def test_envelope_window_too_small():
    trace = Trace(t=np.arange(0.0, 10.0, 1.0), v_load=np.ones(10), r_load=R_LOAD)
    with pytest.raises(ValidationError):
        envelope(trace, window=1.5)
    with pytest.raises(ValidationError):
        envelope(trace, window=0.0)


def test_integrate_constant_power():
    t = np.linspace(0.0, 109.0, 110)
    assert integrate_energy(series(t, np.full(110, 1e-3))) == pytest.approx(
        0.109, rel=1e-9
    )


def test_integrate_constant_voltage_over_resistor():
    t = np.linspace(0.0, 10.0, 11)
    trace = Trace(t=t, v_load=np.ones(11), r_load=1e3)
    assert integrate_energy(power_trace(trace)) == pytest.approx(10e-3, rel=1e-9)


def test_integrate_ramp():
    t = np.linspace(0.0, 100.0, 1001)
    assert integrate_energy(series(t, t * 1e-5)) == pytest.approx(0.05, rel=1e-9)


def test_integrate_is_additive():
    rng = np.random.default_rng(5)
    t = np.sort(rng.uniform(0, 100, 300))
    power = series(t, rng.uniform(0, 1e-3, 300))
    for cut in rng.uniform(t[0] + 1e-6, t[-1] - 1e-6, 20):
        whole = integrate_energy(power, t[0], t[-1])
        split = integrate_energy(power, t[0], cut) + integrate_energy(power, cut, t[-1])
        assert split == pytest.approx(whole, rel=1e-12)


def test_integrate_bounds_validation():
    power = series([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    with pytest.raises(ValidationError):
        integrate_energy(power, -1.0, 1.0)
    with pytest.raises(ValidationError):
        integrate_energy(power, 1.5, 3.0)
    with pytest.raises(ValidationError):
        integrate_energy(power, 1.0, 1.0)


def test_detect_single_burst():
    power = power_trace(burst_trace())
    detection = detect_passes(power, threshold=1e-5)
    assert len(detection.intervals) == 1
    interval = detection.intervals[0]
    assert interval.t_end - interval.t_start == pytest.approx(540.0)
    assert interval.peak_power == pytest.approx(2.0**2 / R_LOAD)


def test_detect_all_zero():
    t = np.arange(0.0, 100.0)
    power = power_trace(Trace(t=t, v_load=np.zeros_like(t), r_load=R_LOAD))
    assert detect_passes(power, threshold=1e-6).intervals == ()


def test_detect_merges_short_gaps():
    t = np.arange(0.0, 100.0, 1.0)
    p = np.where(((t >= 10) & (t <= 30)) | ((t >= 35) & (t <= 60)), 1e-3, 0.0)
    power = series(t, p)
    assert len(detect_passes(power, threshold=1e-4).intervals) == 2
    merged = detect_passes(power, threshold=1e-4, hold=10.0).intervals
    assert len(merged) == 1
    assert (merged[0].t_start, merged[0].t_end) == (10.0, 60.0)


def test_detections_ordered_and_bounded_by_total():
    rng = np.random.default_rng(9)
    t = np.arange(0.0, 1000.0, 0.5)
    power = series(t, rng.uniform(0, 1e-3, t.size))
    detection = detect_passes(power, threshold=6e-4, hold=2.0)
    starts = [iv.t_start for iv in detection.intervals]
    assert starts == sorted(starts)
    for prev, nxt in zip(detection.intervals, detection.intervals[1:]):
        assert prev.t_end < nxt.t_start
    assert detection.total_energy <= integrate_energy(power)


def test_detect_validation():
    power = series([0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValidationError):
        detect_passes(power, threshold=0.0)
    with pytest.raises(ValidationError):
        detect_passes(power, threshold=1e-3, hold=-1.0)


def test_analyse_waveform_burst():
    f = 50 / 3
    t = np.arange(0.0, 200.0, 1 / 400)
    v = np.where((t >= 50) & (t < 110), 2.0 * np.sin(2 * np.pi * f * t), 0.0)
    trace = Trace(t=t, v_load=v, r_load=R_LOAD)
    total, detection = analyse_trace(trace, threshold=1e-5, window=1.0)
    assert len(detection.intervals) == 1
    interval = detection.intervals[0]
    assert interval.t_start == pytest.approx(49.5, abs=0.1)
    assert interval.t_end == pytest.approx(110.5, abs=0.1)
    # mean power of a 2 V amplitude sine over 60 s
    assert detection.total_energy == pytest.approx(60 * 2.0**2 / (2 * R_LOAD), rel=1e-3)
    assert total == pytest.approx(detection.total_energy, rel=1e-9)


def test_analyse_all_zero_trace():
    t = np.arange(0.0, 100.0, 0.5)
    trace = Trace(t=t, v_load=np.zeros_like(t), r_load=R_LOAD)
    total, detection = analyse_trace(trace, threshold=1e-6)
    assert total == 0
    assert detection.intervals == ()
    assert detection.to_frame().empty


def test_trace_csv_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    t = np.cumsum(rng.uniform(0.001, 0.01, 500))
    v = rng.normal(scale=2.0, size=500)
    trace = Trace(t=t, v_load=v, r_load=R_LOAD)
    path = tmp_path / "trace.csv"
    write_trace(trace, path)
    first = read_trace(path, R_LOAD)
    write_trace(first, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()
    assert path.read_text().splitlines()[0] == "t_s,v_load_V"
    np.testing.assert_allclose(first.v_load, v, rtol=1e-8)


def test_read_trace_with_comments(write_file):
    path = write_file("trace.csv", "# bench run 3\nt_s,v_load_V\n0,0.5\n0.5,1\n1,0\n")
    trace = read_trace(path, R_LOAD, coil_label="coil-a", kind="envelope")
    assert len(trace) == 3
    assert trace.coil_label == "coil-a"
    assert trace.v_load.tolist() == [0.5, 1.0, 0.0]


def test_read_trace_bad_header(write_file):
    path = write_file("trace.csv", "time,volts\n0,1\n")
    with pytest.raises(ValidationError):
        read_trace(path, R_LOAD)


def test_read_trace_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        read_trace(tmp_path / "missing.csv", R_LOAD)
