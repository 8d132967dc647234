import math

import numpy as np
import pytest

from lorentz_meridian.classifier_verifier import as_immersion, build_instance
from lorentz_meridian.errors import SignatureError
from lorentz_meridian.meridian_profiles import TheoremTag
from lorentz_meridian.numerical_oracle import (
    Immersion,
    induced_metric,
    mean_curvature_field,
    normal_derivative,
    normal_project,
    shape_report,
)
from lorentz_meridian.pseudo_linalg import inner


@pytest.fixture(scope="module")
def flat_instance():
    return build_instance(TheoremTag.T41I, a=1.0, kappa0=0.5)


@pytest.fixture(scope="module")
def t51i_instance():
    return build_instance(TheoremTag.T51I, u_range=(-0.7, 0.7))


# ----------------------------------------------------------------- metric


def test_induced_metric_per_family(flat_instance):
    cases = [
        (build_instance(TheoremTag.T41I, a=1.0, kappa0=0.5), (-1.0, 0.0, 1.0)),
        (build_instance(TheoremTag.T52I), (1.0, 0.0, -1.0)),
        (build_instance(TheoremTag.T53I), (-1.0, 0.0, 1.0)),
    ]
    for inst, (e_sign, f_val, g_sign) in cases:
        s = inst.surface
        im = as_immersion(s)
        for u, v in [(0.2, -0.3), (0.5, 0.7)]:
            f2 = s.profile.f(u) ** 2
            expected = (e_sign, f_val, g_sign * f2)
            exact = induced_metric(im, u, v)  # analytic partials
            for got, want in zip(exact, expected):
                assert got == pytest.approx(want, abs=1e-10)
            stencil = induced_metric(im, u, v, use_analytic=False)
            for got, want in zip(stencil, expected):
                assert got == pytest.approx(want, abs=1e-6)


def test_riemannian_patch_rejected():
    im = Immersion(z=lambda u, v: np.array([u, v, 0.0, 0.0]))
    with pytest.raises(SignatureError):
        induced_metric(im, 0.0, 0.0)


# -------------------------------------------------------------- projection


def test_projection_annihilates_tangents(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    for u, v in [(0.1, 0.2), (-0.4, 0.9)]:
        out = normal_project(im, u, v, s.z_u(u, v))
        assert np.max(np.abs(out)) < 1e-8


def test_projection_fixes_normals(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    for u, v in [(0.1, 0.2), (-0.3, -0.8)]:
        _, _, n1, _ = s.frame(u, v)
        out = normal_project(im, u, v, n1)
        assert np.max(np.abs(out - n1)) < 1e-8


def test_projection_idempotent_and_orthogonal(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    rng = np.random.default_rng(5)
    for _ in range(10):
        w = rng.normal(size=4)
        u, v = rng.uniform(-0.5, 0.5), rng.uniform(-0.9, 0.9)
        once = normal_project(im, u, v, w)
        twice = normal_project(im, u, v, once)
        assert np.max(np.abs(twice - once)) < 1e-10
        assert abs(inner(once, s.z_u(u, v))) < 1e-8
        assert abs(inner(once, s.z_v(u, v))) < 1e-8


# ------------------------------------------------------------ shape report


def test_flat_family_mean_curvature(flat_instance):
    s = flat_instance.surface
    im = as_immersion(s)
    for u, v in [(0.0, 0.0), (0.4, -0.6)]:
        rep = shape_report(im, u, v, use_analytic=False)
        _, _, n1, n2 = s.frame(u, v)
        c1 = inner(rep.mean_curvature_vector, n1) / inner(n1, n1)
        c2 = inner(rep.mean_curvature_vector, n2) / inner(n2, n2)
        assert c1 == pytest.approx(-0.25, abs=1e-6)
        assert c2 == pytest.approx(-0.5, abs=1e-6)


def test_sine_profile_gauss_curvature():
    import lorentz_meridian.meridian_profiles as mp
    from lorentz_meridian.meridian_surfaces import FamilyTag, MeridianSurface
    from lorentz_meridian.spherical_curves import CurveCase, constant_curvature_curve

    prof = mp.profile_from_f(
        mp.GaugeKind.TIMELIKE,
        f=math.sin,
        f1=math.cos,
        f2=lambda u: -math.sin(u),
        f3=lambda u: -math.cos(u),
        u_span=(0.4, math.pi - 0.4),
    )
    s = MeridianSurface(
        family=FamilyTag.MA_PRIME,
        curve=constant_curvature_curve(CurveCase.CASE_A, 0.0),
        profile=prof,
    )
    rep = shape_report(as_immersion(s), 1.2, 0.3, use_analytic=False)
    assert rep.gauss_curvature == pytest.approx(-1.0, abs=1e-5)


def test_totally_geodesic_plane():
    im = Immersion(z=lambda u, v: np.array([u, 0.0, v, 0.0]))
    rep = shape_report(im, 0.3, -0.2)
    assert np.max(np.abs(rep.h_uu)) < 1e-9
    assert np.max(np.abs(rep.h_uv)) < 1e-9
    assert np.max(np.abs(rep.h_vv)) < 1e-9
    assert np.max(np.abs(rep.mean_curvature_vector)) < 1e-9
    assert rep.gauss_curvature == pytest.approx(0.0, abs=1e-9)


def test_oracle_matches_closed_form_h(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    for u, v in [(0.0, 0.0), (0.3, 0.5), (-0.5, -0.4)]:
        rep = shape_report(im, u, v, use_analytic=False)
        _, _, n1, n2 = s.frame(u, v)
        closed = s.mean_curvature(u, v).as_vector(n1, n2)
        assert np.max(np.abs(rep.mean_curvature_vector - closed)) < 1e-6
        assert rep.gauss_curvature == pytest.approx(
            s.gauss_curvature(u), abs=1e-5
        )


def test_second_order_convergence(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    u, v = 0.25, 0.4
    closed = s.mean_curvature(u, v).as_vector(*s.frame(u, v)[2:])

    def gap(h):
        rep = shape_report(im, u, v, h_step=h, use_analytic=False)
        return np.max(np.abs(rep.mean_curvature_vector - closed))

    assert gap(4e-3) / gap(2e-3) > 3.5


# ------------------------------------------------------- normal derivative


def test_normal_derivative_of_constant_direction():
    inst = build_instance(TheoremTag.T41II)
    s = inst.surface
    im = as_immersion(s)
    n1_field = lambda u, v: s.frame(u, v)[2]
    for u, v in [(0.2, 0.1), (0.5, -0.5)]:
        for direction in [(1.0, 0.0), (0.0, 1.0 / s.profile.f(u))]:
            d = normal_derivative(im, u, v, n1_field, direction)
            assert np.max(np.abs(d)) < 1e-7


def test_normal_derivative_of_h_flat(flat_instance):
    s = flat_instance.surface
    im = as_immersion(s)
    field = mean_curvature_field(im, use_analytic=True)
    for direction in [(1.0, 0.0), (0.0, 1.0)]:
        d = normal_derivative(im, 0.1, 0.3, field, direction)
        assert np.max(np.abs(d)) < 1e-7


def test_normal_derivative_matches_proof_value(t51i_instance):
    s = t51i_instance.surface
    im = as_immersion(s)
    field = mean_curvature_field(im, use_analytic=True)
    for u, v in [(0.3, 0.2), (-0.5, 0.6)]:
        d = normal_derivative(im, u, v, field, (1.0, 0.0), richardson=True)
        expect = abs(
            s.curve.kappa(v) * s.profile.f1(u) / (2.0 * s.profile.f(u) ** 2)
        )
        _, _, n1, _ = s.frame(u, v)
        got = abs(inner(d, n1) / inner(n1, n1))
        assert got == pytest.approx(expect, abs=1e-6)


def test_richardson_tightens_truncation(t51i_instance):
    # derivative of the normalized direction in v: the plain stencil carries
    # an O(h^2) truncation error that extrapolation should beat
    from lorentz_meridian.numerical_oracle import normalized_mean_curvature_field

    s = t51i_instance.surface
    im = as_immersion(s)
    field = normalized_mean_curvature_field(im, use_analytic=True)
    u, v = 0.3, 0.4
    direction = (0.0, 1.0 / s.profile.f(u))
    plain = normal_derivative(im, u, v, field, direction, h_step=4e-3)
    rich = normal_derivative(im, u, v, field, direction, h_step=4e-3, richardson=True)
    assert np.max(np.abs(rich)) < np.max(np.abs(plain))
