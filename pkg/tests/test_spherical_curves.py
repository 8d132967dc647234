import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz_meridian.errors import DegenerateCurve, FrameDegenerate
from lorentz_meridian.pseudo_linalg import inner, triple_det
from lorentz_meridian.spherical_curves import (
    CurveCase,
    constant_curvature_curve,
    curve_from_kappa,
    frenet_frame,
    parallel_circle,
    standard_initial_frame,
    validate_spherical_curve,
)

ALL_CASES = list(CurveCase)
SAMPLE_V = np.linspace(-1.0, 1.0, 11)


def fd_tangent(curve, v, h=1e-4):
    return (curve.point(v + h) - curve.point(v - h)) / (2 * h)


def fd_rate(fun, v, h=1e-4):
    return (fun(v + h) - fun(v - h)) / (2 * h)


# ---------------------------------------------------------------- frames


def test_equator_frame_values():
    c = constant_curvature_curve(CurveCase.CASE_A, 0.0)
    fr = frenet_frame(c, 0.0)
    assert np.allclose(fr.l, [1, 0, 0, 0])
    assert np.allclose(fr.t, [0, 1, 0, 0])
    assert np.allclose(fr.n, [0, 0, 1, 0])
    assert fr.kappa == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("case", ALL_CASES)
@pytest.mark.parametrize("kappa0", [-2.0, -1.0, -0.4, 0.0, 0.7, 1.0, 2.5])
def test_constant_families_reproduce_kappa(case, kappa0):
    c = constant_curvature_curve(case, kappa0)
    for v in SAMPLE_V:
        fr = frenet_frame(c, v)
        assert fr.kappa == pytest.approx(kappa0, abs=2e-13)
        assert inner(fr.l, fr.l) == pytest.approx(case.sphere_sign, abs=1e-12)
        assert inner(fr.t, fr.t) == pytest.approx(case.tangent_sign, abs=1e-12)
        assert inner(fr.n, fr.n) == pytest.approx(case.normal_sign, abs=1e-12)
        assert triple_det(fr.l, fr.t, fr.n) > 0


@pytest.mark.parametrize("case", ALL_CASES)
@pytest.mark.parametrize("kappa0", [-1.5, 0.0, 0.5, 1.0, 2.0])
def test_frenet_residuals_by_central_differences(case, kappa0):
    # l' = t, t' and n' must satisfy the case's system to O(h^2)
    c = constant_curvature_curve(case, kappa0)
    for v in (-0.7, 0.0, 0.4):
        l, t, n = c.point(v), c.tangent(v), c.normal(v)
        assert np.max(np.abs(fd_tangent(c, v) - t)) < 1e-6
        tp = fd_rate(c.tangent, v)
        c_l = -case.tangent_sign / case.sphere_sign
        c_n = kappa0 / case.normal_sign
        assert np.max(np.abs(tp - (c_l * l + c_n * n))) < 1e-6
        np_rate = fd_rate(c.normal, v)
        assert np.max(np.abs(np_rate - (-kappa0 / case.tangent_sign) * t)) < 1e-6


def test_orthonormal_frame_identity():
    # <t', l> = -<t, l'> = -<t, t>, forced by differentiating <t, l> = 0
    for case in ALL_CASES:
        c = constant_curvature_curve(case, 0.8)
        tp = c.tangent_rate(0.3)
        assert inner(tp, c.point(0.3)) == pytest.approx(
            -case.tangent_sign, abs=1e-12
        )


# ---------------------------------------------------------------- circles


def test_parallel_circle_case_a():
    w = math.atanh(0.5)
    c = parallel_circle(CurveCase.CASE_A, w)
    kappas = [frenet_frame(c, v).kappa for v in SAMPLE_V]
    assert max(kappas) - min(kappas) <= 1e-9
    assert kappas[0] == pytest.approx(0.5, abs=1e-12)
    # the circle sits at constant height sinh(w1_0) on the de Sitter sphere
    for v in (-0.5, 0.2):
        assert inner(c.point(v), c.point(v)) == pytest.approx(1.0, abs=1e-12)
        assert abs(c.point(v)[2]) == pytest.approx(math.sinh(w), abs=1e-12)


def test_parallel_circle_kappa_by_brute_force_fit():
    # independent extraction: kappa^2 = -<t' + l, t' + l> for a spacelike
    # curve on the de Sitter sphere, with t' from central differences
    c = parallel_circle(CurveCase.CASE_A, math.atanh(0.5))
    for v in np.linspace(-2.0, 2.0, 100):
        tp = (c.tangent(v + 1e-4) - c.tangent(v - 1e-4)) / 2e-4
        q = inner(tp + c.point(v), tp + c.point(v))
        assert math.sqrt(max(-q, 0.0)) == pytest.approx(0.5, abs=1e-6)


def test_parallel_circle_maps():
    assert parallel_circle(CurveCase.CASE_B, 0.5).kappa(0.0) == pytest.approx(
        math.sinh(0.5)
    )
    assert parallel_circle(CurveCase.CASE_C, 0.7).kappa(0.0) == pytest.approx(
        1.0 / math.tanh(0.7)
    )


def test_parallel_circle_degenerate():
    with pytest.raises(DegenerateCurve):
        parallel_circle(CurveCase.CASE_C, 0.0)


@given(st.floats(min_value=-0.95, max_value=0.95))
@settings(max_examples=30, deadline=None)
def test_case_a_elliptic_kappa_property(kappa0):
    c = constant_curvature_curve(CurveCase.CASE_A, kappa0)
    assert frenet_frame(c, 0.37).kappa == pytest.approx(kappa0, abs=1e-10)


# ------------------------------------------------------------- integration


def test_integrated_equator_matches_closed_form():
    c = curve_from_kappa(CurveCase.CASE_A, lambda v: 0.0)
    for v in np.linspace(0.0, 2 * math.pi, 25):
        expect = np.array([math.cos(v), math.sin(v), 0.0, 0.0])
        assert np.max(np.abs(c.point(v) - expect)) < 1e-8


def test_round_trip_constant_kappa():
    c = curve_from_kappa(CurveCase.CASE_A, lambda v: 0.5)
    for v in np.linspace(0.05, 2 * math.pi - 0.05, 40):
        assert frenet_frame(c, v).kappa == pytest.approx(0.5, abs=1e-7)


def test_round_trip_varying_kappa():
    kfun = lambda v: 0.3 + 0.2 * math.sin(v)
    c = curve_from_kappa(CurveCase.CASE_B, kfun, v_span=(0.0, 2 * math.pi))
    for v in np.linspace(0.05, 2 * math.pi - 0.05, 40):
        assert frenet_frame(c, v).kappa == pytest.approx(kfun(v), abs=1e-6)


def test_integration_preserves_sphere():
    c = curve_from_kappa(
        CurveCase.CASE_C, lambda v: 0.0, v_span=(0.0, 2 * math.pi)
    )
    assert np.allclose(c.point(0.0), [0, 0, 1, 0])
    for v in np.linspace(0.0, 2 * math.pi, 50):
        assert abs(inner(c.point(v), c.point(v)) + 1.0) < 1e-8


def test_integwithout_bad_frame_rejected():
    bad = list(standard_initial_frame(CurveCase.CASE_A))
    bad[1] = bad[1] * 1.5
    with pytest.raises(FrameDegenerate):
        curve_from_kappa(CurveCase.CASE_A, lambda v: 0.0, init_frame=bad)


def test_validate_catches_wrong_sphere():
    good = constant_curvature_curve(CurveCase.CASE_A, 0.3)
    shifted = good.point
    from dataclasses import replace

    broken = replace(good, point=lambda v: shifted(v) * 1.001)
    with pytest.raises(FrameDegenerate):
        validate_spherical_curve(broken, v_samples=[0.0, 0.5])
