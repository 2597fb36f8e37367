"""Acceptance criteria, one test per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from sqzqi.cli import main
from sqzqi.meta import classify, fit_scale, load_records, reconcile_ft
from sqzqi.opa import (
    effective_ft,
    extremal_product,
    ideal_bound,
    ideal_ft,
    s_minus,
    s_plus,
    squeezed_fraction,
)
from sqzqi.qi_bound import (
    QiCurve,
    SpectralFunction,
    SpectralShape,
    Variant,
    casimir_density,
    closed_form_gaussian,
    closed_form_lorentzian_sq,
    curve_value,
    ford_bound,
    numeric_bound,
)
from sqzqi.units import to_db
from sqzqi.windows import WindowKind, gaussian_window, lorentzian_sq_window

DATASET = Path(__file__).resolve().parent.parent / "src" / "sqzqi" / "data" / "records.csv"

GAUSS_PAPER = QiCurve(WindowKind.GAUSSIAN, Variant.WITH_PI)
GAUSS_MARECKI = QiCurve(WindowKind.GAUSSIAN, Variant.NO_PI)


def ok(n: int, text: str) -> None:
    print(f"ACCEPTANCE {n:02d} PASS: {text}")


def test_criterion_01_numeric_bound_matches_closed_forms():
    start = time.time()
    args = (0.1, 0.25, 0.5, 1.0, 2.0, 5.0)
    worst = 0.0
    for arg in args:
        mu = SpectralFunction(omega0=arg)
        dev_g = abs(numeric_bound(gaussian_window(1.0), mu) - closed_form_gaussian(arg))
        dev_l = abs(numeric_bound(lorentzian_sq_window(1.0), mu)
                    - closed_form_lorentzian_sq(arg))
        worst = max(worst, dev_g, dev_l)
        assert dev_g <= 1e-6
        assert dev_l <= 1e-6
    elapsed = time.time() - start
    assert elapsed < 10.0
    ok(1, f"numeric bound equals closed forms, worst |dR| = {worst:.2e} dB "
          f"<= 1e-6 over omega0*t0 = {args} in {elapsed:.2f}s")


def test_criterion_02_context_density_ratio():
    ratio = (3.0 / (16.0 * math.pi**2)) / (math.pi**2 / 720.0)
    assert ratio == pytest.approx(1.386, abs=1e-3)
    assert f"{ratio:.2g}" == "1.4"
    a = 1e-7
    assert ford_bound(a / 2.99792458e8) / casimir_density(a) == pytest.approx(ratio, rel=1e-12)
    ok(2, f"free-field/cavity numeric-factor ratio = {ratio:.4f} (1.4 at 2 s.f.)")


def test_criterion_03_uncertainty_product():
    xs = np.linspace(0.05, 0.95, 10)
    ws = np.linspace(0.0, 3.0, 10)
    for x in xs:
        for w in ws:
            product = s_minus(float(x), 1.0, float(w)) * s_plus(float(x), 1.0, float(w))
            assert abs(product - 1.0) <= 1e-12
    worst = 0.0
    for x in xs:
        for w in ws:
            for beta in np.linspace(0.1, 1.0, 10):
                direct = s_minus(float(x), float(beta), float(w)) * \
                    s_plus(float(x), float(beta), float(w))
                closed = extremal_product(float(x), float(beta), float(w))
                worst = max(worst, abs(direct / closed - 1.0))
                assert abs(direct / closed - 1.0) <= 1e-12
    ok(3, f"extremal product = 1 at beta=1 and matches its closed form "
          f"(worst rel dev {worst:.1e}) on the 10x10x10 grid")


def test_criterion_04_ideal_round_trip():
    for s in (0.001, 0.01, 0.1, 0.5, 0.99):
        assert ideal_bound(ideal_ft(s)) == pytest.approx(s, abs=1e-12)
    ok(4, "lossless-OPA bound and fraction invert each other to 1e-12")


def test_criterion_05_small_pump_limit():
    ft = squeezed_fraction(1e-6, 1.0, 0.0)
    assert ft == pytest.approx(0.5, abs=1e-4)
    ok(5, f"squeezed fraction -> {ft:.6f} at x = 1e-6 (0.5 within 1e-4)")


def test_criterion_06_vahlbruch_point_and_envelope_fit():
    # model values at the published operating point
    sm_db = to_db(s_minus(0.8, 0.975, 0.0))
    assert sm_db == pytest.approx(-14.3, abs=0.05)
    ft = squeezed_fraction(0.8, 0.975, 0.0)
    assert ft == pytest.approx(0.0705, abs=5e-4)

    records = [r for r in load_records(DATASET) if not r.is_stub]
    report = classify(records, [GAUSS_PAPER, GAUSS_MARECKI])
    row = {r.record_id: r for r in report.per_record}["vah_x0.8"]
    assert row.violations["gaussian-paper"] is True
    assert row.violations["gaussian-marecki"] is True
    assert row.ideal_opa_exceeded is False

    # envelope property on the shipped subset plus frozen regression scales
    pinned = {"gaussian-paper": 0.104910, "lorentzian2-paper": 0.085264}
    for curve_id, expected_k in pinned.items():
        window, variant = curve_id.split("-")
        curve = QiCurve(WindowKind(window), Variant(variant))
        fit = fit_scale(records, curve)
        assert fit.envelope_k == pytest.approx(expected_k, abs=2e-5)
        points = []
        for rec in records:
            out = reconcile_ft(rec)
            if out is not None and rec.s_minus_db is not None:
                points.append((out.ft, rec.s_minus_db))
        scaled = QiCurve(curve.window, curve.variant, scale=fit.envelope_k)
        assert sum(r < curve_value(scaled, ft) for ft, r in points) == 0
        bumped = QiCurve(curve.window, curve.variant, scale=1.01 * fit.envelope_k)
        assert sum(r < curve_value(bumped, ft) for ft, r in points) >= 1
    ok(6, f"operating point (S- = {sm_db:.2f} dB, F_T = {ft:.4f}) violates both "
          f"Gaussian conventions, stays inside the lossless-OPA limit; envelope "
          f"scales reproduce the frozen values {pinned}")


def test_criterion_07_curve_orderings():
    start = time.time()
    fts = np.round(np.arange(0.05, 0.46, 0.05), 10)
    for ft in fts:
        r_paper = curve_value(GAUSS_PAPER, float(ft))
        r_marecki = curve_value(GAUSS_MARECKI, float(ft))
        assert r_paper >= r_marecki
        if ft >= 0.1:
            r_ideal = to_db(ideal_bound(float(ft))) if ft < 0.5 else 0.0
            assert r_marecki > r_ideal
            assert r_paper > r_ideal
    family = (0.001, 0.2, 0.5, 1.0, 3.0, 5.0)
    for variant in Variant:
        for ft in fts:
            values = [
                curve_value(QiCurve(WindowKind.TRAPEZOID, variant, n=n), float(ft))
                for n in family
            ]
            assert all(a < b for a, b in zip(values, values[1:]))
    elapsed = time.time() - start
    assert elapsed < 30.0
    ok(7, f"curve orderings hold on ft grid {fts[0]}..{fts[-1]} "
          f"(both conventions, trapezoid family n={family}) in {elapsed:.1f}s")


def test_criterion_08_spectral_weight_robustness():
    w = gaussian_window(1.0)
    worst = 0.0
    for omega0 in (0.5, 1.0, 2.0):
        delta = numeric_bound(w, SpectralFunction(omega0=omega0))
        full = numeric_bound(w, SpectralFunction(
            omega0=omega0, delta_omega=0.01 * omega0, shape=SpectralShape.GAUSSIAN))
        worst = max(worst, abs(full - delta))
        assert abs(full - delta) < 1e-3
    ok(8, f"explicit narrow spectral weight shifts the bound by at most "
          f"{worst:.1e} dB (< 1e-3)")


def test_criterion_09_effective_fraction_moves_right():
    count = 0
    for x in (0.1, 0.3, 0.5, 0.8, 0.95):
        for w_max in (0.25, 1.0, 3.0):
            assert effective_ft(x, 0.975, w_max) >= squeezed_fraction(x, 0.975, 0.0)
            count += 1
    ok(9, f"frequency-weighted fraction >= resonant fraction on all {count} "
          f"(x, w_max) grid points")


def test_criterion_10_figure_determinism(tmp_path, capsys):
    start = time.time()
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["plot", "--fig", "5", "--out", str(a)]) == 0
    assert main(["plot", "--fig", "5", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    elapsed = time.time() - start
    assert elapsed < 30.0
    ok(10, f"figure preset 5 rendered twice byte-identically "
           f"({a.stat().st_size} bytes) in {elapsed:.1f}s")
