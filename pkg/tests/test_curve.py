import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinjac import errors
from kleinjac.curve import (
    INF_MINUS,
    INF_PLUS,
    SurfacePath,
    continue_y,
    end_sheet,
    hodge_star,
    parse_coeffs,
    sigma_point,
    validate_curve,
)
from kleinjac.topology import loop_around


def test_validate_quartic(g1):
    assert g1.genus == 1
    assert sorted(g1.branch_points, key=lambda b: (b.imag)) == pytest.approx([-2j, -1j, 1j, 2j], abs=1e-12)
    p = np.polynomial.polynomial.polyval(np.array(g1.branch_points), [float(c) for c in g1.coeffs])
    assert np.max(np.abs(p)) < 1e-10
    assert g1.validity["no_real_roots"] and g1.validity["negative_leading"]


def test_branch_points_closed_under_conjugation(g3):
    bps = np.array(g3.branch_points)
    for b in bps:
        assert np.min(np.abs(bps - np.conj(b))) == 0.0
    assert len(set(bps)) == len(bps)


def test_rational_coefficients():
    c = validate_curve(["-1/2", "0", "-3/2", "0", "-1"])
    assert c.coeffs == parse_coeffs(["-1/2", 0, "-3/2", 0, -1])
    assert c.genus == 1


@pytest.mark.parametrize(
    "coeffs, exc",
    [
        (["1", "0", "1"], errors.OrientableCover),
        (["1", "0", "-1"], errors.RealBranchPoint),
        (["-1", "0", "0", "-1"], errors.OddDegree),
        (["-1", "0", "-2", "0", "-1"], errors.RepeatedRoot),
        (["-1", "0", "-1"], errors.DegenerateCurve),
        ([], errors.DegenerateCurve),
        (["-1", "0", "0"], errors.DegenerateCurve),
        (["-3"], errors.DegenerateCurve),
    ],
)
def test_validation_rejects(coeffs, exc):
    with pytest.raises(exc):
        validate_curve(coeffs)


def test_p_negative_on_real_line(shipped):
    c, _ = shipped
    t = np.linspace(-3 * c.scale, 3 * c.scale, 1000)
    assert np.all(c.p(t).real < 0)


def test_anchor_value(g1):
    path = SurfacePath((0j,), 1, False)
    assert continue_y(g1, path) == [pytest.approx(2j)]
    assert g1.point(0, 1).y_value == pytest.approx(2j)


def test_anchor_on_positive_imaginary_axis(shipped):
    # p(0) < 0, so the sheet +1 value at the anchor is +i sqrt(|p(0)|)
    c, _ = shipped
    y = c.y_at(0j, 1)
    assert y == pytest.approx(1j * np.sqrt(-float(c.coeffs[0])), abs=1e-12)


def test_monodromy_single_branch_point(shipped):
    c, _ = shipped
    for b in c.bp:
        loop = loop_around(complex(b), 0.2, 1)
        assert end_sheet(c, loop) == -1


def test_monodromy_conjugate_pair(g1):
    loop = loop_around(0j, 1.5, 1)
    assert end_sheet(g1, loop) == 1
    assert continue_y(g1, loop)[0] == pytest.approx(g1.y_at(1.5, 1))


def test_closed_flag_violation_raises(g1):
    bad = loop_around(1j, 0.2, 1)
    with pytest.raises(errors.SheetMismatch):
        continue_y(g1, bad)


def test_continuation_values_square_to_p(g2):
    path = SurfacePath((0j, 1 + 0.5j, 2.2 - 3j, -1.5 + 4.1j), -1, False)
    ys = np.array(continue_y(g2, path))
    assert np.max(np.abs(ys**2 - g2.p(np.array(path.waypoints)))) < 1e-10 * np.max(np.abs(ys**2))


def test_refinement_does_not_change_end_sheet(g2):
    coarse = SurfacePath((0j, 3 + 2.5j), 1, False)
    fine = SurfacePath(tuple(np.linspace(0, 3 + 2.5j, 17)), 1, False)
    assert continue_y(g2, coarse)[-1] == pytest.approx(continue_y(g2, fine)[-1], rel=1e-12)


def test_branch_too_close(g1):
    with pytest.raises(errors.BranchTooClose):
        continue_y(g1, SurfacePath((0.5j - 0.5, 1j, 0.5 + 0.5j), 1, False))


def test_branch_points_snap_to_sheet_plus(g1):
    p = g1.point(1j + 1e-12, -1)
    assert p.sheet == 1 and p.x == 1j


def test_sigma_example(g1):
    p = g1.point(1 + 1j, -1)
    q = sigma_point(g1, p)
    assert q.x == 1 - 1j
    assert q.y_value == pytest.approx(np.conj(p.y_value), abs=1e-12)


def test_sigma_swaps_infinities(g1):
    assert sigma_point(g1, g1.point(INF_PLUS)).x == INF_MINUS
    assert sigma_point(g1, g1.point(INF_MINUS)).x == INF_PLUS


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-6, 6, allow_nan=False),
    st.floats(-6, 6, allow_nan=False),
    st.sampled_from([1, -1]),
)
def test_sigma_involution_and_no_fixed_points(re, im, sheet):
    c = validate_curve(["-36", "0", "-49", "0", "-14", "0", "-1"])
    x = complex(re, im)
    if np.min(np.abs(c.bp - x)) < 1e-3:
        return
    p = c.point(x, sheet)
    q = sigma_point(c, p)
    assert q != p
    back = sigma_point(c, q)
    assert back.x == p.x and back.sheet == p.sheet
    assert abs(back.y_value - p.y_value) <= 1e-12 * max(1.0, abs(p.y_value))


def test_hodge_star_examples():
    assert hodge_star(1, 0) == (0, 1)
    assert hodge_star(0, 0) == (0, 0)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_hodge_star_squares_to_minus_identity(a, b):
    assert hodge_star(*hodge_star(a, b)) == (-a, -b)
