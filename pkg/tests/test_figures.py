"""Figure datasets, the SVG renderer, and the named check suites."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from mibounds.checks import SUITES, run_suite
from mibounds.errors import ValidationError
from mibounds.figures import (
    FIGURES,
    figure_b_sigma,
    figure_chi_qpe,
    figure_entropy2,
    figure_transition,
)
from mibounds.svgplot import render_line_plot


def test_figures_registry():
    assert set(FIGURES) == {"chi_qpe", "transition", "b_sigma", "entropy2"}


def test_chi_qpe_dataset():
    (fig,) = figure_chi_qpe(m_max=4, n_eta=11)
    assert fig.name == "chi_qpe"
    assert fig.columns == ("eta", "M", "value_bits")
    assert len(fig.rows) == 44
    for eta, m, value in fig.rows:
        if eta == 1.0:
            assert value == float(m)  # noiseless saturation
        if eta == 0.0:
            assert value == 0.0
    assert len(fig.series) == 4


def test_transition_dataset():
    (fig,) = figure_transition(eta_min=0.4, m_max=5, n_eta=51)
    assert fig.columns == ("eta", "M", "value_bits")
    at_one = sorted((m, v) for eta, m, v in fig.rows if eta == 1.0)
    vals = [v for _, v in at_one]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))
    # below the first crossing (eta = 1/2) the single-qubit block leads
    eta_lo = min(r[0] for r in fig.rows)
    assert eta_lo < 0.5
    by_m = {m: v for eta, m, v in fig.rows if eta == eta_lo}
    assert max(by_m, key=by_m.get) == 1


def test_b_sigma_dataset():
    (fig,) = figure_b_sigma(n_sigma=60)
    assert fig.columns == ("sigma", "entropy_bits", "bound_bits", "margin_bits")
    assert fig.log_x
    assert len(fig.rows) == 60
    for sigma, entropy, bound, margin in fig.rows:
        assert abs((bound - entropy) - margin) < 1e-12
        if sigma >= 0.05:
            assert margin > 0.0
    # the documented dip of the reference curve at small sigma
    worst = min(r[3] for r in fig.rows)
    assert -7e-4 < worst < -1e-4


def test_entropy2_dataset():
    curve, weights = figure_entropy2(n_calls=7, restarts=4, seed=0)
    assert curve.name == "entropy2"
    assert curve.columns == ("theta", "p_uniform", "p_optimal")
    assert weights.name == "entropy2_weights"
    assert weights.columns == ("k", "weight_uniform", "weight_optimal")
    assert len(weights.rows) == 8
    entropies = {}
    for col in (1, 2):
        assert abs(sum(r[col] for r in weights.rows) - 1.0) < 1e-9
        dens = np.array([r[col] for r in curve.rows])
        assert abs(dens.mean() - 1.0) < 1e-9  # integrates to 1 on [0, 1)
        pos = dens[dens > 0.0]
        entropies[col] = -np.sum(pos * np.log2(pos)) / dens.size
    # the optimized profile trades peak height for a lower error entropy
    assert entropies[2] < entropies[1] - 1e-3


def test_svg_renderer_wellformed_and_deterministic():
    series = [
        ("first", [0.0, 1.0, 2.0], [1.0, 3.0, 2.0]),
        ("second", [0.0, 1.0, 2.0], [2.0, 0.5, 1.5]),
    ]
    svg = render_line_plot(series, title="demo", x_label="x", y_label="y")
    assert svg == render_line_plot(
        series, title="demo", x_label="x", y_label="y"
    )
    assert svg.startswith("<svg")
    root = ET.fromstring(svg)
    tags = {el.tag.split("}")[-1] for el in root.iter()}
    assert "polyline" in tags and "text" in tags
    assert "first" in svg and "second" in svg


def test_svg_handles_log_and_flat_data():
    svg = render_line_plot(
        [("curve", [0.1, 1.0, 10.0], [5.0, 5.0, 5.0])], log_x=True
    )
    ET.fromstring(svg)
    assert "0.1" in svg and "10" in svg  # decade tick labels


def test_check_suite_names():
    assert set(SUITES) == {"numerics", "bounds", "channels", "protocols"}
    with pytest.raises(ValidationError):
        run_suite("nonsense")


def test_bounds_suite_passes():
    results = run_suite("bounds")
    assert all(r.passed for r in results)
    names = {r.name for r in results}
    assert "fisher_closed_form" in names
    assert "nonperiodic_window_doubling" in names


def test_channels_suite_passes():
    results = run_suite("channels")
    assert len(results) == 4
    assert all(r.passed for r in results)


def test_protocols_suite_passes():
    results = run_suite("protocols", seed=0, trials=40)
    assert all(r.passed for r in results)
    assert {r.suite for r in results} == {"protocols"}


def test_numerics_suite_reports_reference_dip():
    """Every numerics check passes except the documented small-sigma dip."""
    results = run_suite("numerics")
    failed = [r for r in results if not r.passed]
    assert [r.name for r in failed] == ["entropy_vs_bound_scan"]
    assert "sigma" in failed[0].detail


def test_run_all_aggregates():
    results = run_suite("all", trials=10)
    assert {r.suite for r in results} == set(SUITES)
