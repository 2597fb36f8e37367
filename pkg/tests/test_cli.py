"""End-to-end command-line coverage, exit-code contract included.

Every subcommand runs against the shipped dataset or its own inputs via
``main(argv)``; figure output is checked byte for byte for determinism.
"""

import json
import math
from pathlib import Path

import pytest

from sqzqi.cli import main
from sqzqi.meta import DATASET_COLUMNS, AnalysisReport

HEADER = ",".join(DATASET_COLUMNS)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- bound ---------------------------------------------------------------------

def test_bound_grid_row_count(capsys):
    code, out, _ = run(capsys, "bound", "--window", "gaussian", "--variant", "paper",
                       "--ft", "0.01:1.0:0.01")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "ft,r_db,curve_id,window,variant,scale"
    assert len(lines) == 101  # header + 100 grid rows


def test_bound_single_argument_numeric(capsys):
    code, out, _ = run(capsys, "bound", "--window", "gaussian", "--omega-t0", "1",
                       "--numeric")
    assert code == 0
    assert "R = -0.2022 dB" in out


def test_bound_trapezoid_family_member(capsys, tmp_path):
    out_path = tmp_path / "trap.csv"
    code, _, _ = run(capsys, "bound", "--window", "trapezoid", "--n", "0.001",
                     "--ft", "0.05:0.5:0.05", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert len(lines) == 11
    assert "trapezoid-paper-n0.001" in lines[1]
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(a < b for a, b in zip(values, values[1:]))  # rising toward 0 dB


def test_bound_square_requires_opt_in(capsys):
    code, _, err = run(capsys, "bound", "--window", "square", "--ft", "0.1:0.2:0.1")
    assert code == 2
    assert "allow-square" in err
    code, out, _ = run(capsys, "bound", "--window", "square", "--allow-square",
                       "--ft", "0.1:0.2:0.1")
    assert code == 0
    assert "square-paper" in out


def test_bound_usage_errors(capsys):
    assert run(capsys, "bound", "--window", "gaussian")[0] == 2  # no grid/arg
    assert run(capsys, "bound", "--window", "gaussian",
               "--ft", "0.1:0.2:0.1", "--omega-t0", "1")[0] == 2  # both
    assert run(capsys, "bound", "--window", "gaussian", "--ft", "0:0.5:0.1")[0] == 2
    assert run(capsys, "bound", "--window", "gaussian", "--ft", "nonsense")[0] == 2
    assert run(capsys, "bound", "--window", "bogus", "--ft", "0.1:0.2:0.1")[0] == 2
    assert run(capsys, "bound", "--window", "gaussian", "--n", "2",
               "--ft", "0.1:0.2:0.1")[0] == 2


def test_bound_numeric_failure_exit_code(capsys, tmp_path):
    # a long oscillatory range with almost no subdivision budget cannot
    # certify its error estimate
    config = tmp_path / "strict.cfg"
    config.write_text("quad.max_nodes=10\n")
    code, _, err = run(capsys, "--config", str(config), "bound", "--window", "square",
                       "--allow-square", "--omega-t0", "200", "--numeric")
    assert code == 3
    assert "numeric failure" in err
    assert "achieved error estimate" in err


# --- opa -----------------------------------------------------------------------

def test_opa_extremes(capsys):
    code, out, _ = run(capsys, "opa", "--x", "0.8", "--beta", "0.975", "--w", "0",
                       "--extremes")
    assert code == 0
    assert "S- = 0.037037 (-14.3136 dB)" in out
    assert "S+ = 79 (18.9763 dB)" in out
    assert "F_T = 0.0704466" in out


def test_opa_lossless_product(capsys):
    code, out, _ = run(capsys, "opa", "--x", "0.8", "--beta", "1", "--w", "0",
                       "--extremes")
    assert code == 0
    assert "S-*S+ = 1\n" in out


def test_opa_ideal_bound_boundary(capsys):
    code, out, _ = run(capsys, "opa", "--ideal-bound", "0.5")
    assert code == 0
    assert "0.0000 dB" in out
    code, out, _ = run(capsys, "opa", "--ideal-bound", "0.14")
    assert "-13.0134 dB" in out


def test_opa_theta_and_ft(capsys):
    code, out, _ = run(capsys, "opa", "--x", "0.8", "--beta", "0.975", "--theta", "0")
    assert code == 0
    assert "S(theta=0) = 79" in out
    code, out, _ = run(capsys, "opa", "--x", "0.8", "--beta", "0.975", "--ft")
    assert "F_T = 0.0704466" in out


def test_opa_usage_errors(capsys):
    assert run(capsys, "opa")[0] == 2  # nothing requested
    assert run(capsys, "opa", "--extremes")[0] == 2  # missing x/beta
    assert run(capsys, "opa", "--x", "1.5", "--beta", "1", "--extremes")[0] == 2
    assert run(capsys, "opa", "--ideal-bound", "0.7")[0] == 2


# --- analyze ---------------------------------------------------------------------

def test_analyze_shipped_dataset(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, err = run(capsys, "analyze", "--fit", "--report", str(report_path))
    assert code == 0
    assert "records: 3 classified, 13 skipped" in out
    assert "violations[gaussian-paper]: 3/3" in out
    assert "violations[gaussian-marecki]: 3/3" in out
    assert "ideal-opa exceeded: 0/3" in out
    assert "fit[gaussian-paper]: envelope k = 0.10491" in out
    assert "skipped record study_02" in err
    report = AnalysisReport.from_json(report_path.read_text())
    assert len(report.per_record) == 3
    assert report.fitted_scales["gaussian-paper"].envelope_k == pytest.approx(0.10491, abs=1e-4)
    assert "ideal-opa" in report.curve_samples


def test_analyze_custom_curves(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--curves",
                       "lorentzian2-marecki,trapezoid-paper-n0.2")
    assert code == 0
    assert "violations[lorentzian2-marecki]: 2/3" in out
    assert "violations[trapezoid-paper-n0.2]:" in out


def test_analyze_empty_dataset(capsys, tmp_path):
    data = tmp_path / "empty.csv"
    data.write_text(HEADER + "\n")
    report_path = tmp_path / "empty.json"
    code, out, err = run(capsys, "analyze", "--data", str(data),
                         "--report", str(report_path))
    assert code == 0
    assert "dataset is empty" in err
    assert "records: 0 classified" in out
    report = AnalysisReport.from_json(report_path.read_text())
    assert report.per_record == []


def test_analyze_parse_error_exit_4(capsys, tmp_path):
    data = tmp_path / "bad.csv"
    data.write_text(HEADER + "\nok,l,,,,-3.0,3.0,,,,\nbad,l,oops\n")
    code, _, err = run(capsys, "analyze", "--data", str(data))
    assert code == 4
    assert "line 3" in err


def test_analyze_rejects_square_curve_without_opt_in(capsys):
    code, _, err = run(capsys, "analyze", "--curves", "square-paper")
    assert code == 2
    assert "unstable" in err


# --- plot ------------------------------------------------------------------------

def test_plot_fig5_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "plot", "--fig", "5", "--out", str(a))[0] == 0
    assert run(capsys, "plot", "--fig", "5", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg ")
    assert "gaussian-paper" in text and "gaussian-marecki" in text and "ideal OPA" in text


@pytest.mark.parametrize("fig", [4, 6, 7])
def test_plot_other_presets(capsys, tmp_path, fig):
    out = tmp_path / f"fig{fig}.svg"
    assert run(capsys, "plot", "--fig", str(fig), "--out", str(out))[0] == 0
    assert out.read_text().startswith("<svg ")


def test_plot_fig8_with_coarse_grid(capsys, tmp_path):
    out = tmp_path / "fig8.svg"
    code, _, _ = run(capsys, "plot", "--fig", "8", "--grid-step", "0.1",
                     "--out", str(out))
    assert code == 0
    # 12 trapezoid traces (six n values, two argument conventions) + ideal
    assert out.read_text().count("<polyline") >= 13


def test_plot_points_from_report(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    run(capsys, "analyze", "--report", str(report_path))
    out = tmp_path / "fig5.svg"
    code, _, _ = run(capsys, "plot", "--fig", "5", "--report", str(report_path),
                     "--out", str(out))
    assert code == 0
    text = out.read_text()
    # three classified records: markers plus their error rectangles
    assert text.count("<rect") >= 3 + 2  # background + frame + error boxes
    assert text.count("<circle") >= 3


def test_plot_inline_curves(capsys, tmp_path):
    out = tmp_path / "inline.svg"
    code, _, _ = run(capsys, "plot", "--curve", "gaussian-paper",
                     "--curve", "lorentzian2-marecki", "--out", str(out))
    assert code == 0
    assert out.read_text().count("<polyline") == 2


def test_plot_usage_errors(capsys, tmp_path):
    assert run(capsys, "plot", "--out", str(tmp_path / "x.svg"))[0] == 2
    assert run(capsys, "plot", "--fig", "9", "--out", str(tmp_path / "x.svg"))[0] == 2
    assert run(capsys, "plot", "--fig", "5")[0] == 2  # missing --out


def test_plot_db_floor_changes_output(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(capsys, "plot", "--fig", "5", "--out", str(a))
    run(capsys, "plot", "--fig", "5", "--db-floor", "-20", "--out", str(b))
    assert a.read_bytes() != b.read_bytes()


# --- config ------------------------------------------------------------------------

def test_config_plot_floor_applies(capsys, tmp_path):
    config = tmp_path / "sqzqi.cfg"
    config.write_text("# plotting\nplot.db_floor = -20\n")
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(capsys, "plot", "--fig", "5", "--out", str(a))
    run(capsys, "--config", str(config), "plot", "--fig", "5", "--out", str(b))
    assert a.read_bytes() != b.read_bytes()
    floored = run(capsys, "plot", "--fig", "5", "--db-floor", "-20", "--out",
                  str(tmp_path / "c.svg"))
    assert floored[0] == 0
    assert (tmp_path / "c.svg").read_bytes() == b.read_bytes()


def test_config_unknown_key_rejected(capsys, tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("quad.bogus=1\n")
    code, _, err = run(capsys, "--config", str(config), "opa", "--ideal-bound", "0.2")
    assert code == 2
    assert "unknown config key" in err


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "bound", "--help")[0] == 0
