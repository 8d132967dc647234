import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lorentz_meridian.errors import (
    DomainExit,
    GaugeBoundary,
    InvalidGauge,
    InvalidParams,
)
from lorentz_meridian.meridian_profiles import (
    GaugeKind,
    TheoremTag,
    analytic_profile_T5i,
    flat_profile,
    gauge_residual,
    integrate_profile,
    kappa_m,
    linear_substitution_residual,
    meridian_curvature,
    perturbed_profile,
    phi_closed_form,
    profile_from_f,
    verify_profile_ode,
    write_profile_csv,
)


# ------------------------------------------------------------- kappa_m


def test_kappa_m_straight_meridian():
    p = flat_profile(GaugeKind.TIMELIKE, 1.0, 0.0, 1)
    assert kappa_m(p, 0.3) == 0.0


def test_kappa_m_cosh_meridian():
    # f = cosh(u): at u = 0, f'' = 1, g' = sqrt(f'^2 + 1) = 1, f' = 0
    p = profile_from_f(
        GaugeKind.TIMELIKE,
        f=math.cosh,
        f1=math.sinh,
        f2=math.cosh,
        f3=math.sinh,
        u_span=(-1.0, 1.0),
    )
    assert kappa_m(p, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_meridian_curvature_raw_formula():
    # f = sqrt(1-u^2), g = arcsin(u) at u = 0 under the anti-de Sitter
    # convention: f' = 0, f'' = -1, g' = 1, g'' = 0
    val = meridian_curvature(GaugeKind.SPACELIKE_ADS, 0.0, -1.0, 1.0, 0.0)
    assert val == 1.0


def test_kappa_m_sign_flips_with_g_branch():
    for gauge, tag in (
        (GaugeKind.TIMELIKE, TheoremTag.T51I),
        (GaugeKind.SPACELIKE_ADS, TheoremTag.T53I),
    ):
        plus = analytic_profile_T5i(tag, 0.0, 1.0, sign_g=1)
        minus = analytic_profile_T5i(tag, 0.0, 1.0, sign_g=-1)
        for u in np.linspace(*plus.u_domain, 7):
            assert kappa_m(plus, u) == pytest.approx(-kappa_m(minus, u), abs=1e-12)
            r1 = verify_profile_ode(plus)
            r2 = verify_profile_ode(minus)
            assert abs(r1) == pytest.approx(abs(r2), abs=1e-12)


# --------------------------------------------------------------- flat


def test_flat_profile_values():
    p = flat_profile(GaugeKind.TIMELIKE, 1.0, 0.0, 1)
    assert p.f(2.0) == 1.0 and p.g(2.0) == 2.0
    assert p.gauge.constraint(p.f1(0.0), p.g1(0.0)) == 0.0

    q = flat_profile(GaugeKind.SPACELIKE_ADS, 2.0, 1.0, -1)
    assert q.f(0.5) == 2.0 and q.g(0.5) == 0.5
    assert q.f1(0.5) ** 2 + q.g1(0.5) ** 2 == 1.0


def test_flat_profile_rejects_ds_gauge():
    with pytest.raises(InvalidGauge):
        flat_profile(GaugeKind.SPACELIKE_DS, 1.0, 0.0, 1)


# ---------------------------------------------------------------- phi


def test_phi_values():
    assert phi_closed_form(TheoremTag.T51II, 1.0, a=0.0, c=2.0) == pytest.approx(
        math.sqrt(3.0)
    )
    assert phi_closed_form(TheoremTag.T41II, 2.0, a=1.0, c=0.0) == pytest.approx(
        math.sqrt(3.0)
    )
    # equivalently f' = sqrt(a^2 f^2 - 1) for the c = 0 branch
    assert phi_closed_form(TheoremTag.T41II, 2.0, a=1.0, c=0.0) == pytest.approx(
        math.sqrt(1.0 * 4.0 - 1.0)
    )


def test_phi_domain_exit_reports_interval():
    with pytest.raises(DomainExit) as err:
        phi_closed_form(TheoremTag.T43II, 1.2, a=1.0, c=0.0)
    (lo, hi), = err.value.admissible
    assert lo == pytest.approx(0.0)
    assert hi == pytest.approx(1.0)


def test_phi_requires_positive_radius():
    with pytest.raises(DomainExit):
        phi_closed_form(TheoremTag.T51II, -1.0, a=0.0, c=2.0)


# --------------------------------------------------------- integration


def test_integrated_cosh_profile():
    p = integrate_profile(
        TheoremTag.T41II, a=1.0, c=0.0, f0=math.cosh(0.3), u_span=(-0.25, 0.75)
    )
    for u in np.linspace(-0.25, 0.75, 101):
        assert p.f(u) == pytest.approx(math.cosh(u + 0.3), abs=1e-8)
    assert verify_profile_ode(p) <= 1e-8
    assert max(gauge_residual(p, u) for u in p.u_grid(33)) <= 1e-9


def test_integrated_sinh_profile_ds_gauge():
    # a = 1, c = 0 under the de Sitter gauge: f' = sqrt(f^2 + 1)
    p = integrate_profile(
        TheoremTag.T42, a=1.0, c=0.0, f0=math.sinh(1.0), u_span=(-0.45, 1.0)
    )
    for u in np.linspace(-0.45, 1.0, 80):
        assert p.f(u) == pytest.approx(math.sinh(u + 1.0), abs=1e-8)
    assert verify_profile_ode(p) <= 1e-8


def test_linear_solution_t51ii():
    # c = 2, a = 0: phi = sqrt(3) is constant, f is linear and the defining
    # equation closes exactly: f f'' + f'^2 + 1 = 4 = c sqrt(f'^2 + 1)
    p = integrate_profile(TheoremTag.T51II, a=0.0, c=2.0, f0=1.0, u_span=(-0.5, 1.0))
    for u in np.linspace(-0.5, 1.0, 33):
        assert p.f(u) == pytest.approx(1.0 + math.sqrt(3.0) * u, abs=1e-10)
    assert verify_profile_ode(p) <= 1e-10


def test_derivative_consistency_of_dense_output():
    p = integrate_profile(
        TheoremTag.T41II, a=1.0, c=0.0, f0=math.cosh(0.3), u_span=(-0.25, 0.75)
    )
    h = 1e-4
    for u in np.linspace(-0.2, 0.7, 31):
        fd = (p.f(u + h) - p.f(u - h)) / (2 * h)
        assert fd == pytest.approx(p.f1(u), abs=1e-8)
        fd_g = (p.g(u + h) - p.g(u - h)) / (2 * h)
        assert fd_g == pytest.approx(p.g1(u), abs=1e-8)


def test_domain_exit_truncates_at_radicand_root():
    p = integrate_profile(
        TheoremTag.T43II, a=1.0, c=0.0, f0=math.sin(0.8), u_span=(-0.6, 1.2)
    )
    assert p.exited_right and not p.exited_left
    assert p.u_domain[1] == pytest.approx(math.pi / 2 - 0.8, abs=1e-5)
    assert p.f(p.u_domain[1]) == pytest.approx(1.0, abs=1e-5)


def test_integrate_rejects_inadmissible_f0():
    with pytest.raises(DomainExit):
        integrate_profile(TheoremTag.T41II, a=1.0, c=0.0, f0=0.5, u_span=(0.0, 0.1))


def test_integrate_param_validation():
    with pytest.raises(InvalidParams):
        integrate_profile(TheoremTag.T41II, a=0.0, c=1.0, f0=1.0)
    with pytest.raises(InvalidParams):
        integrate_profile(TheoremTag.T51II, a=1.0, c=0.0, f0=1.0)


@pytest.mark.parametrize(
    "tag,kwargs",
    [
        (TheoremTag.T41II, dict(a=1.0, c=0.0, f0=math.cosh(0.3))),
        (TheoremTag.T42, dict(a=1.0, c=0.0, f0=math.sinh(1.0))),
        (TheoremTag.T43II, dict(a=1.0, c=0.0, f0=math.sin(0.8), u_span=(-0.5, 0.6))),
        (TheoremTag.T51II, dict(a=0.0, c=2.0, f0=1.0)),
        (TheoremTag.T52II, dict(a=0.0, c=2.0, f0=1.0, u_span=(-0.3, 1.0))),
        (TheoremTag.T53II, dict(a=2.0, c=1.0, f0=1.15, u_span=(-0.2, 0.3))),
    ],
)
def test_linear_substitution_chain(tag, kwargs):
    p = integrate_profile(tag, **kwargs)
    assert linear_substitution_residual(p.family) <= 1e-8


def test_gauge_preserved_on_long_span():
    p = integrate_profile(
        TheoremTag.T52II, a=0.0, c=2.0, f0=1.0, u_span=(0.0, 10.0)
    )
    assert max(gauge_residual(p, u) for u in p.u_grid(101)) <= 1e-9


# ------------------------------------------------------- closed forms (i)


def test_t51i_profile_values():
    p = analytic_profile_T5i(TheoremTag.T51I, 0.0, 1.0)
    for u in np.linspace(*p.u_domain, 21):
        assert p.f(u) == pytest.approx(math.sqrt(1.0 - u * u), abs=1e-12)
        assert p.g(u) == pytest.approx(math.asin(u), abs=1e-12)
    assert verify_profile_ode(p) <= 1e-12


def test_t53i_profile_values():
    p = analytic_profile_T5i(TheoremTag.T53I, 0.0, 1.0)
    assert p.f(0.0) == pytest.approx(1.0)
    assert p.f1(0.0) == pytest.approx(0.0)
    assert p.g1(0.0) == pytest.approx(1.0)
    for u in np.linspace(-1.4, 1.4, 15):
        assert p.g(u) == pytest.approx(math.asinh(u), abs=1e-12)
    assert verify_profile_ode(p) <= 1e-12


def test_t52i_profile_identity():
    p = analytic_profile_T5i(TheoremTag.T52I, 2.0, 1.0)
    assert verify_profile_ode(p) <= 1e-12
    for u in np.linspace(*p.u_domain, 9):
        assert gauge_residual(p, u) <= 1e-12


@given(
    st.floats(min_value=-2.0, max_value=2.0),
    st.floats(min_value=-3.0, max_value=9.0),
)
@settings(max_examples=60, deadline=None)
def test_t51i_identity_property(a, b):
    assume(0.1 < a * a + b < 10.0)
    p = analytic_profile_T5i(TheoremTag.T51I, a, b)
    for u in np.linspace(*p.u_domain, 11):
        res = p.f(u) * p.f2(u) + p.f1(u) ** 2 + 1.0
        assert abs(res) <= 1e-12


def test_t5i_param_validation():
    with pytest.raises(InvalidParams):
        analytic_profile_T5i(TheoremTag.T51I, 0.0, -0.5)
    with pytest.raises(InvalidParams):
        analytic_profile_T5i(TheoremTag.T52I, 1.0, 2.0)
    with pytest.raises(InvalidParams):
        analytic_profile_T5i(TheoremTag.T53I, 2.0, 1.0)


# ------------------------------------------------------------ verification


def test_verify_against_foreign_identity():
    # the flat profile does not satisfy the constant-direction identity
    p = flat_profile(GaugeKind.TIMELIKE, 1.0, 0.0, 1)
    assert verify_profile_ode(p, tag=TheoremTag.T51I) == pytest.approx(1.0)


def test_perturbed_profile_reimposes_gauge():
    base = analytic_profile_T5i(TheoremTag.T51I, 0.0, 1.0, u_domain=(-0.7, 0.7))
    pert = perturbed_profile(base, delta=1e-2)
    for u in np.linspace(-0.6, 0.6, 13):
        assert gauge_residual(pert, u) <= 1e-12
        assert pert.f(u) == pytest.approx(base.f(u) + 1e-2 * math.sin(u), abs=1e-15)
    assert verify_profile_ode(pert, tag=TheoremTag.T51I) > 1e-4


def test_profile_from_f_rejects_gauge_violations():
    with pytest.raises(GaugeBoundary):
        profile_from_f(
            GaugeKind.SPACELIKE_ADS,
            f=lambda u: 2.0 + 1.2 * u,
            f1=lambda u: 1.2,
            f2=lambda u: 0.0,
            u_span=(-0.5, 0.5),
        )


def test_profile_csv_schema(tmp_path):
    p = analytic_profile_T5i(TheoremTag.T51I, 0.0, 1.0)
    out = tmp_path / "profile.csv"
    write_profile_csv(p, out, n=11)
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "u,f,f_prime,f_dprime,g,g_prime,gauge_residual,ode_residual"
    assert len(lines) == 12
    assert all(len(line.split(",")) == 8 for line in lines[1:])
