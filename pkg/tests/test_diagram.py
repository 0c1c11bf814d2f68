import xml.etree.ElementTree as ET
from fractions import Fraction

import numpy as np
import pytest

from polybif.algebraic import AlgebraicRoot
from polybif.continuation import classify_stability, newton_orbit
from polybif.detect import bubble_closed_form
from polybif.diagram import DiagramDataset, EmptyDataset, count_bands, orbit_diagram, render_svg
from polybif.families import QUADRATIC_NORMAL, builtin

T1 = builtin("T-fixed-a", [Fraction(2658, 1000)])


def test_keep_one_no_transient_is_one_raw_iterate():
    d = orbit_diagram(QUADRATIC_NORMAL, (0.5, 1.5), 5, transient=0, keep=1, x0_policy=0.25)
    for t, xs in zip(d.params, d.samples):
        assert xs.tolist() == [1 - t * 0.25**2]


def test_csv_is_deterministic_and_formatted():
    a = orbit_diagram(T1, (1.2, 1.4), 20, 100, 10).to_csv()
    b = orbit_diagram(T1, (1.2, 1.4), 20, 100, 10).to_csv()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "param,x"
    params = [float(line.split(",")[0]) for line in lines[1:]]
    assert params == sorted(params)
    # 17 significant digits round-trip exactly
    x = float(lines[1].split(",")[1])
    assert f"{x:.17g}" == lines[1].split(",")[1]


def test_escaped_orbits_are_excluded_and_counted():
    # alpha = 3 sends the critical orbit to infinity
    d = orbit_diagram(QUADRATIC_NORMAL, (2.5, 3.0), 4, 200, 5)
    assert d.escaped_total > 0
    assert all(np.all(np.abs(s) <= 1e6) for s in d.samples)
    assert d.sidecar()["escaped_seeds"] == d.escaped_total


def test_cubic_uses_both_critical_points():
    d = orbit_diagram(builtin("cubic-exercise"), (-0.1, 0.1), 3, 50, 4)
    assert d.settings["x0_policy"] == "critical-point"
    assert all(len(s) == 8 for s in d.samples)


def test_irrational_a_diagram_runs():
    d = orbit_diagram(builtin("T-fixed-a", [AlgebraicRoot.sqrt(7)]), (1.2, 1.4), 10, 100, 5)
    assert d.n_samples == 50


def test_count_bands():
    assert count_bands([0.1, 0.1000001, 0.5, 0.9]) == 3
    assert count_bands([0.1, 0.1009, 0.1018]) is None
    assert count_bands([]) == 0


def test_figure_one_three_bands_with_long_transient():
    lo, hi = bubble_closed_form(Fraction(2658, 1000), 3).interval
    m = 0.05 * (hi - lo)
    d = orbit_diagram(T1, (lo + m, hi - m), 60, 10_000, 60)
    good = 0
    for t, s in zip(d.params, d.samples):
        p = newton_orbit(T1, 3, float(t), float(s[-1]))
        assert classify_stability(p) == "attracting"
        good += count_bands(s) == 3
    assert good >= 0.9 * len(d.params)


def test_svg_is_valid_and_self_contained():
    d = orbit_diagram(T1, (1.2, 1.4), 10, 100, 3)
    svg = render_svg(d, 400, 300)
    root = ET.fromstring(svg.encode())
    assert root.tag.endswith("svg")
    circles = [e for e in root.iter() if e.tag.endswith("circle")]
    assert len(circles) == d.n_samples
    assert "href" not in svg
    assert "T-fixed-a" in svg


def test_svg_single_point():
    d = DiagramDataset("one", "c", np.array([1.0]), [np.array([0.5])])
    root = ET.fromstring(render_svg(d).encode())
    assert sum(e.tag.endswith("circle") for e in root.iter()) == 1


def test_svg_empty_dataset_raises():
    d = orbit_diagram(QUADRATIC_NORMAL, (3.0, 3.5), 3, 200, 5)
    assert d.n_samples == 0
    with pytest.raises(EmptyDataset):
        render_svg(d)


def test_invalid_settings():
    with pytest.raises(ValueError):
        orbit_diagram(QUADRATIC_NORMAL, (1, 2), 10, -1, 5)
    with pytest.raises(ValueError):
        orbit_diagram(QUADRATIC_NORMAL, (1, 2), 10, 0, 0)
