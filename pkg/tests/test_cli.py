import numpy as np
import pandas as pd
import pytest

from harvestr.analysis.scenario import current_for_energy
from harvestr.analysis.traces import Trace, write_trace
from harvestr.cli import EXIT_DOMAIN, EXIT_INVALID, EXIT_OK, main
from harvestr.config import parse_config

SITE = """\
coil = coil-a

[site]
i_a = 100
f_hz = 50/3
d_rr_m = 1.435
r_n_m = 0.5
"""


def read_csv(path):
    return pd.read_csv(path, float_precision="round_trip")


def test_field_report(write_file, tmp_path, capsys):
    cfg = write_file("site.conf", SITE)
    out = tmp_path / "field.csv"
    assert main(["field", str(cfg), "--at", "0.5", "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert list(df.columns) == ["r_m", "re_m", "h_a_per_m", "b_t"]
    assert df["b_t"].iloc[0] == pytest.approx(2.517e-5, rel=1e-3)
    assert df["re_m"].iloc[0] == pytest.approx(0.79466, rel=1e-5)
    assert "Flux Density" in capsys.readouterr().out


def test_field_at_zero_is_domain_error(write_file, capsys):
    cfg = write_file("site.conf", SITE)
    assert main(["field", str(cfg), "--at", "0"]) == EXIT_DOMAIN
    assert "r_n" in capsys.readouterr().err


def test_field_zero_current(write_file, tmp_path):
    cfg = write_file("site.conf", SITE)
    out = tmp_path / "field.csv"
    assert main(["field", str(cfg), "--current", "0", "--out", str(out)]) == EXIT_OK
    assert read_csv(out)["b_t"].iloc[0] == 0


def test_csv_to_stdout(write_file, capsys):
    cfg = write_file("site.conf", SITE)
    assert main(["field", str(cfg), "--out", "-"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("r_m,re_m,h_a_per_m,b_t\n")
    assert "Flux Density" in captured.err


def test_config_errors_exit_2(write_file, tmp_path):
    bad = write_file("bad.conf", "[site]\nspeed_kmh = 80\n")
    assert main(["field", str(bad)]) == EXIT_INVALID
    assert main(["field", str(tmp_path / "missing.conf")]) == EXIT_INVALID


def test_usage_errors_exit_2(capsys):
    assert main([]) == EXIT_INVALID
    assert main(["levitate"]) == EXIT_INVALID
    assert main(["field"]) == EXIT_INVALID


def test_power_report(write_file, tmp_path, capsys):
    cfg = write_file("site.conf", SITE)
    out = tmp_path / "power.csv"
    assert main(["power", str(cfg), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert list(df.columns) == ["coil", "f_hz", "r_m", "i_a", "p_w"]
    assert df["p_w"].iloc[0] == pytest.approx(124.2e-6, rel=2e-3)
    assert "negligible" in capsys.readouterr().out


BENCH = """\
coil = coil-a
geometry = lab_loop

[site]
i_a = 200
f_hz = 50/3

[lab_loop]
r_m = 0.25
"""


def test_power_on_bench_loop(write_file, tmp_path):
    cfg = write_file("bench.conf", BENCH)
    out = tmp_path / "power.csv"
    assert main(["power", str(cfg), "--out", str(out)]) == EXIT_OK
    row = read_csv(out).iloc[0]
    assert row["r_m"] == 0.25
    assert row["p_w"] == pytest.approx(4.14e-3, rel=1e-2)


def test_power_distance_flag_moves_bench_coil(write_file, tmp_path):
    cfg = write_file("bench.conf", BENCH)
    near, far = tmp_path / "near.csv", tmp_path / "far.csv"
    assert main(["power", str(cfg), "--out", str(near)]) == EXIT_OK
    assert main(["power", str(cfg), "--at", "0.5", "--out", str(far)]) == EXIT_OK
    assert read_csv(far)["r_m"].iloc[0] == 0.5
    assert read_csv(far)["p_w"].iloc[0] < read_csv(near)["p_w"].iloc[0]


def test_field_rejects_bench_geometry(write_file):
    cfg = write_file("bench.conf", BENCH)
    assert main(["field", str(cfg)]) == EXIT_INVALID



def test_sweep_lab_grid_is_deterministic(write_file, tmp_path):
    cfg = write_file("sweep.conf", "[sweep]\ncoils = coil-a, coil-b\nf_hz = 50/3, 50\n")
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", str(cfg), "--out", str(first)]) == EXIT_OK
    assert main(["sweep", str(cfg), "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    df = read_csv(first)
    assert len(df) == 16
    assert first.read_text().splitlines()[0] == "coil,f_hz,r_m,k_uw_per_a2"


def test_sweep_loop_length_flag(write_file, tmp_path):
    cfg = write_file("sweep.conf", "[sweep]\ncoils = coil-a\nr_m = 0.5\n")
    short, long = tmp_path / "short.csv", tmp_path / "long.csv"
    assert main(["sweep", str(cfg), "--a", "0.5", "--out", str(short)]) == EXIT_OK
    assert main(["sweep", str(cfg), "--a", "5", "--out", str(long)]) == EXIT_OK
    assert read_csv(short)["k_uw_per_a2"].iloc[0] < read_csv(long)["k_uw_per_a2"].iloc[0]


def test_fit_builtin_table(tmp_path):
    out = tmp_path / "fit.csv"
    assert main(["fit", "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert df["a_m"].iloc[0] == pytest.approx(1.2, abs=0.1)
    assert df["rms_log_residual"].iloc[0] < 0.01


def test_fit_observed_file(write_file, tmp_path):
    observed = write_file(
        "observed.csv",
        "coil,f_hz,r_m,k_uw_per_a2\ncoil-a,16.6666667,0.25,0.10339\n",
    )
    assert main(["fit", str(observed)]) == EXIT_INVALID
    bad = write_file("bad.csv", "coil,r_m\ncoil-a,0.25\n")
    assert main(["fit", str(bad)]) == EXIT_INVALID


@pytest.mark.parametrize(
    "row",
    ["coil-a,50,0.25,abc", "coil-a,x,0.25,0.1", "coil-a,50,,0.1"],
)
def test_fit_malformed_observed_exit_2(write_file, row, capsys):
    observed = write_file(
        "observed.csv",
        f"coil,f_hz,r_m,k_uw_per_a2\ncoil-a,50,0.5,0.15\n{row}\n",
    )
    assert main(["fit", str(observed)]) == EXIT_INVALID
    assert "Coefficient table" in capsys.readouterr().err


def test_overflowing_number_exit_2(write_file):
    cfg = write_file("site.conf", SITE.replace("i_a = 100", "i_a = 1e400"))
    assert main(["field", str(cfg)]) == EXIT_INVALID


CUSTOM_COIL = """\
[coil]
preset = coil-a
name = bench-coil
turns = 40000

[lab_loop]
b_m = 2.5
"""


def test_fit_with_custom_coil_config(write_file, tmp_path):
    from harvestr.analysis.optimize import SweepSpec, sweep
    from harvestr.analysis.tables import write_table
    from harvestr.config import build_coil

    coil = build_coil(parse_config(CUSTOM_COIL))
    spec = SweepSpec(
        coils=(coil,),
        frequencies=(50.0,),
        distances=(0.25, 0.5, 0.75, 1.0),
        geometry_params={"a": 1.5, "b": 2.5},
    )
    observed = tmp_path / "observed.csv"
    write_table(sweep(spec), observed)
    cfg = write_file("bench.conf", CUSTOM_COIL)
    out = tmp_path / "fit.csv"

    assert main(["fit", str(observed), "--out", str(out)]) == EXIT_INVALID
    assert main(["fit", str(observed), "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert df["b_m"].iloc[0] == 2.5
    assert df["a_m"].iloc[0] == pytest.approx(1.5, abs=1e-4)


def test_fit_separation_flag_overrides_config(write_file, tmp_path):
    cfg = write_file("bench.conf", CUSTOM_COIL)
    out = tmp_path / "fit.csv"
    args = ["fit", "--config", str(cfg), "--b", "3", "--out", str(out)]
    assert main(args) == EXIT_OK
    assert read_csv(out)["b_m"].iloc[0] == 3.0


def test_fit_compare(tmp_path):

    out = tmp_path / "compare.csv"
    assert main(["fit", "--compare", "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert len(df) == 128
    assert "deviation" in df.columns


def simulate_config(site_a):
    i_freight = current_for_energy(site_a, 540.0, 0.109)
    i_passenger = current_for_energy(site_a, 180.0, 0.040)
    lines = [SITE]
    for k in range(9):
        lines.append(
            f"[event]\nlabel = freight-{k}\nstart_s = {3600 * k}\n"
            f"segments = 540:{i_freight!r}\n"
        )
    for k in range(4):
        lines.append(
            f"[event]\nlabel = passenger-{k}\nstart_s = {3600 * k + 1800}\n"
            f"segments = 180:{i_passenger!r}\n"
        )
    lines.append("[budget]\ndaily_j = 0.132\n")
    return "\n".join(lines)


def test_simulate_daily_budget(site_a, write_file, tmp_path, capsys):
    cfg = write_file("day.conf", simulate_config(site_a))
    out = tmp_path / "energy.csv"
    assert main(["simulate", str(cfg), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    events = df[df["row"] == "event"]
    total = df[df["row"] == "total"].iloc[0]
    assert len(events) == 13
    assert events["energy_j"].sum() == pytest.approx(1.141, rel=1e-6)
    assert total["daily_total_j"] == pytest.approx(1.141, rel=1e-6)
    assert total["margin"] == pytest.approx(8.64, abs=5e-3)
    assert "8.64" in capsys.readouterr().out


def test_simulate_short_period_totals_in_csv(write_file, tmp_path):
    text = SITE + (
        "\n[timetable]\nperiod_s = 3600\n"
        "\n[event]\nlabel = x\nstart_s = 0\nsegments = 540:100\n"
        "\n[budget]\ndaily_j = 0.132\n"
    )
    cfg = write_file("hour.conf", text)
    out = tmp_path / "energy.csv"
    assert main(["simulate", str(cfg), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    event = df[df["row"] == "event"].iloc[0]
    total = df[df["row"] == "total"].iloc[0]
    assert total["daily_total_j"] == pytest.approx(24 * event["energy_j"], rel=1e-8)
    assert total["margin"] == pytest.approx(total["daily_total_j"] / 0.132, rel=1e-8)


def test_simulate_output_is_byte_stable(site_a, write_file, tmp_path):
    cfg = write_file("day.conf", simulate_config(site_a))
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", str(cfg), "--out", str(first)]) == EXIT_OK
    assert main(["simulate", str(cfg), "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()



def test_simulate_zero_budget_is_domain_error(site_a, write_file):
    cfg = write_file("day.conf", simulate_config(site_a))
    assert main(["simulate", str(cfg), "--budget", "0"]) == EXIT_DOMAIN


def test_dump_config_round_trips(write_file, capsys):
    cfg = write_file("site.conf", SITE)
    assert main(["field", str(cfg), "--at", "0.75", "--dump-config"]) == EXIT_OK
    dumped = capsys.readouterr().out
    doc = parse_config(dumped)
    assert doc.section("site")["r_n_m"] == "0.75"
    assert parse_config(doc.dump()) == doc


def test_trace_all_zero(write_file, tmp_path, capsys):
    t = np.arange(0.0, 60.0, 0.01)
    trace_path = tmp_path / "trace.csv"
    write_trace(Trace(t=t, v_load=np.zeros_like(t), r_load=17.2e3), trace_path)
    meta = write_file("meta.conf", "[trace]\nr_load_ohm = 17200\ncoil = coil-a\n")
    out = tmp_path / "passes.csv"
    assert main(["trace", str(trace_path), str(meta), "--out", str(out)]) == EXIT_OK
    assert out.read_text() == "t_start_s,t_end_s,peak_p_w,energy_j\n"
    assert "Passes Detected: 0" in capsys.readouterr().out


def test_trace_envelope_burst(write_file, tmp_path):
    t = np.arange(0.0, 800.0, 1.0)
    v = np.where((t >= 100) & (t <= 640), 2.0, 0.0)
    trace_path = tmp_path / "trace.csv"
    write_trace(Trace(t=t, v_load=v, r_load=17.2e3, kind="envelope"), trace_path)
    meta = write_file("meta.conf", "[trace]\nr_load_ohm = 17200\nkind = envelope\n")
    out = tmp_path / "passes.csv"
    assert main(["trace", str(trace_path), str(meta), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert len(df) == 1
    assert df["t_end_s"].iloc[0] - df["t_start_s"].iloc[0] == 540.0
    assert df["peak_p_w"].iloc[0] == pytest.approx(232.6e-6, rel=1e-3)


def test_optimize_report(write_file, tmp_path):
    cfg = write_file(
        "opt.conf",
        "[optimize]\ncoils = coil-a, coil-b\nmin_distance_m = 0.5\nmax_distance_m = 2\n",
    )
    out = tmp_path / "best.csv"
    assert main(["optimize", str(cfg), "--out", str(out)]) == EXIT_OK
    df = read_csv(out)
    assert df["coil"].iloc[0] == "coil-a"
    assert df["r_m"].iloc[0] == 0.5


def test_optimize_infeasible_flags(write_file):
    cfg = write_file("opt.conf", "coil = coil-a\n")
    assert main(["optimize", str(cfg), "--min-distance", "2", "--max-distance", "1"]) == (
        EXIT_INVALID
    )


def test_plot_from_csv(write_file, tmp_path):
    pytest.importorskip("matplotlib")
    cfg = write_file("sweep.conf", "[sweep]\ncoils = coil-a, coil-b\n")
    out, plot = tmp_path / "sweep.csv", tmp_path / "sweep.svg"
    assert main(["sweep", str(cfg), "--out", str(out), "--plot", str(plot)]) == EXIT_OK
    assert plot.read_text().lstrip().startswith("<?xml")
