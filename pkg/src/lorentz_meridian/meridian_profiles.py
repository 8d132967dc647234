"""Profile curves u -> (f(u), g(u)) of the meridian surfaces.

A profile is normalized by one of three gauge constraints:

    timelike meridian        f'^2 - g'^2 = -1     (g' = sqrt(f'^2 + 1))
    spacelike, de Sitter     f'^2 - g'^2 = +1     (g' = sqrt(f'^2 - 1))
    spacelike, anti-de Sitter  f'^2 + g'^2 = 1    (g' = sqrt(1 - f'^2))

The classification families are indexed by tags T41i ... T53ii.  The flat
families (T41i, T43i) have constant radius.  The "case (i)" families of the
second group (T51i, T52i, T53i) are closed forms with f^2 a quadratic in u.
The remaining tags reduce to a first-order ODE f' = phi(f) where
phi(t) = +-sqrt(P(t))/t for a polynomial radicand P; these are integrated
numerically and g is recovered by quadrature on the same grid.

Every +- choice is an explicit constructor argument and is recorded in
``branch_signs``; nothing is chosen silently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    DomainExit,
    GaugeBoundary,
    GaugeViolation,
    IntegrationFailure,
    InvalidGauge,
    InvalidParams,
)

__all__ = [
    "GaugeKind",
    "TheoremTag",
    "ProfileFamily",
    "ProfileCurve",
    "kappa_m",
    "meridian_curvature",
    "flat_profile",
    "phi_closed_form",
    "integrate_profile",
    "analytic_profile_T5i",
    "profile_from_f",
    "perturbed_profile",
    "verify_profile_ode",
    "gauge_residual",
    "linear_substitution_residual",
    "write_profile_csv",
    "PROFILE_CSV_HEADER",
]


class GaugeKind(enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE_DS = "spacelike-ds"
    SPACELIKE_ADS = "spacelike-ads"

    def g_prime(self, f1):
        """Principal (nonnegative) branch of the gauge for g'."""
        if self is GaugeKind.TIMELIKE:
            return math.sqrt(f1 * f1 + 1.0)
        if self is GaugeKind.SPACELIKE_DS:
            q = f1 * f1 - 1.0
            if q < 0:
                raise GaugeBoundary("f'^2 - 1 < 0 under the de Sitter gauge")
            return math.sqrt(q)
        q = 1.0 - f1 * f1
        if q < 0:
            raise GaugeBoundary("1 - f'^2 < 0 under the anti-de Sitter gauge")
        return math.sqrt(q)

    def g_dprime(self, f1, f2, g1):
        if g1 == 0.0:
            raise GaugeBoundary("g' = 0: gauge square root vanished")
        if self is GaugeKind.SPACELIKE_ADS:
            return -f1 * f2 / g1
        return f1 * f2 / g1

    def constraint(self, f1, g1):
        """Signed gauge residual; zero on a valid profile."""
        if self is GaugeKind.TIMELIKE:
            return f1 * f1 - g1 * g1 + 1.0
        if self is GaugeKind.SPACELIKE_DS:
            return f1 * f1 - g1 * g1 - 1.0
        return f1 * f1 + g1 * g1 - 1.0

    def curvature(self, f1, f2, g1, g2):
        """Signed curvature of the meridian under this gauge's convention."""
        if self is GaugeKind.TIMELIKE:
            return f2 * g1 - f1 * g2
        return f1 * g2 - f2 * g1


class TheoremTag(enum.Enum):
    T41I = "T41i"
    T41II = "T41ii"
    T42 = "T42"
    T43I = "T43i"
    T43II = "T43ii"
    T51I = "T51i"
    T51II = "T51ii"
    T52I = "T52i"
    T52II = "T52ii"
    T53I = "T53i"
    T53II = "T53ii"


TAG_GAUGE = {
    TheoremTag.T41I: GaugeKind.TIMELIKE,
    TheoremTag.T41II: GaugeKind.TIMELIKE,
    TheoremTag.T42: GaugeKind.SPACELIKE_DS,
    TheoremTag.T43I: GaugeKind.SPACELIKE_ADS,
    TheoremTag.T43II: GaugeKind.SPACELIKE_ADS,
    TheoremTag.T51I: GaugeKind.TIMELIKE,
    TheoremTag.T51II: GaugeKind.TIMELIKE,
    TheoremTag.T52I: GaugeKind.SPACELIKE_DS,
    TheoremTag.T52II: GaugeKind.SPACELIKE_DS,
    TheoremTag.T53I: GaugeKind.SPACELIKE_ADS,
    TheoremTag.T53II: GaugeKind.SPACELIKE_ADS,
}

FLAT_TAGS = {TheoremTag.T41I, TheoremTag.T43I}
ANALYTIC5_TAGS = {TheoremTag.T51I, TheoremTag.T52I, TheoremTag.T53I}
INTEGRATED_TAGS = {
    TheoremTag.T41II,
    TheoremTag.T42,
    TheoremTag.T43II,
    TheoremTag.T51II,
    TheoremTag.T52II,
    TheoremTag.T53II,
}
QUARTIC_TAGS = {TheoremTag.T41II, TheoremTag.T42, TheoremTag.T43II}


def _radicand_coeffs(tag, a, c, sign_inner):
    """Coefficients (highest degree first) of the radicand polynomial P."""
    si = float(sign_inner)
    if tag is TheoremTag.T41II:
        return (a * a, 0.0, 2.0 * si * a * c - 1.0, 0.0, c * c)
    if tag is TheoremTag.T42:
        return (a * a, 0.0, 2.0 * si * a * c + 1.0, 0.0, c * c)
    if tag is TheoremTag.T43II:
        return (-a * a, 0.0, 1.0 - 2.0 * si * a * c, 0.0, -c * c)
    if tag is TheoremTag.T51II:
        return (c * c - 1.0, 2.0 * a * c, a * a)
    if tag is TheoremTag.T52II:
        return (c * c + 1.0, 2.0 * a * c, a * a)
    if tag is TheoremTag.T53II:
        return (1.0 - c * c, 2.0 * a * c, -a * a)
    raise InvalidParams(f"{tag.value} has no first-order reduction")


def _slope_numerator(tag, a, c, sign_inner, t):
    """The quantity w(t) with t*g'(u) = |w(f(u))| along a family solution."""
    if tag in QUARTIC_TAGS:
        return c + sign_inner * a * t * t
    if tag is TheoremTag.T53II:
        return a - c * t
    return c * t + a


def _admissible_intervals(coeffs, limit=1e6):
    """Connected components of {t > 0 : P(t) >= 0}."""
    poly = np.polynomial.Polynomial(list(reversed(coeffs)))
    roots = sorted(
        r.real for r in poly.roots() if abs(r.imag) < 1e-12 and r.real > 1e-14
    )
    edges = [0.0] + roots + [limit]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo < 1e-14:
            continue
        mid = 0.5 * (lo + hi)
        if np.polyval(coeffs, mid) >= 0:
            if out and abs(out[-1][1] - lo) < 1e-14:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
    return tuple(out)


@dataclass(frozen=True)
class ProfileFamily:
    """One classification family: a tag, its parameters and branch choices.

    ``rhs_orientation`` resolves the sign ambiguity of the second-order
    equation: it is sign(w(f)) on the admissible interval in use, where
    t*z(t) = |w(t)| comes out of the linear substitution.  Constructors fill
    it from the initial value; it enters the right-hand side of
    ``ode_residual_value``.
    """

    tag: TheoremTag
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    sign_inner: int = 1
    sign_outer: int = 1
    sign_g: int = 1
    rhs_orientation: int = 1

    @property
    def gauge(self):
        return TAG_GAUGE[self.tag]

    def radicand_coeffs(self):
        return _radicand_coeffs(self.tag, self.a, self.c, self.sign_inner)

    def radicand(self, t):
        return float(np.polyval(self.radicand_coeffs(), t))

    def slope_numerator(self, t):
        return _slope_numerator(self.tag, self.a, self.c, self.sign_inner, t)

    def phi(self, t):
        """Slope f' as a function of the radius f = t (t > 0)."""
        t = float(t)
        if t <= 0:
            raise DomainExit("phi requires t > 0", t=t)
        rad = self.radicand(t)
        if rad < 0:
            raise DomainExit(
                f"radicand negative at t={t:g}; admissible t-intervals: "
                f"{_admissible_intervals(self.radicand_coeffs())}",
                t=t,
                admissible=_admissible_intervals(self.radicand_coeffs()),
            )
        return self.sign_outer * math.sqrt(rad) / t

    def slope_derivatives(self, t):
        """(phi, f'', f''') along a solution, as exact functions of t = f.

        Writing W = P/t^2 one has f'' = W'(t)/2 and f''' = W''(t) f'/2, so
        second and third derivatives stay exact even though f itself comes
        from a numerical integration.
        """
        coeffs = self.radicand_coeffs()
        p = float(np.polyval(coeffs, t))
        dp = float(np.polyval(np.polyder(coeffs), t))
        d2p = float(np.polyval(np.polyder(coeffs, 2), t))
        w1 = (dp * t - 2.0 * p) / t**3
        w2 = (d2p * t * t - 4.0 * dp * t + 6.0 * p) / t**4
        phi = self.sign_outer * math.sqrt(max(p, 0.0)) / t
        return phi, w1 / 2.0, w2 * phi / 2.0

    def ode_residual_value(self, f, f1, f2):
        """Signed residual of the family's defining second-order equation."""
        tag = self.tag
        if tag in FLAT_TAGS:
            return f1
        if tag is TheoremTag.T51I:
            return f * f2 + f1 * f1 + 1.0
        if tag in (TheoremTag.T52I, TheoremTag.T53I):
            return f * f2 + f1 * f1 - 1.0
        sigma = float(self.rhs_orientation)
        if tag is TheoremTag.T41II:
            rhs = 2.0 * sigma * self.sign_inner * self.a * f
            return f * f2 + f1 * f1 + 1.0 - rhs * math.sqrt(f1 * f1 + 1.0)
        if tag is TheoremTag.T42:
            rhs = 2.0 * sigma * self.sign_inner * self.a * f
            return f * f2 + f1 * f1 - 1.0 - rhs * math.sqrt(max(f1 * f1 - 1.0, 0.0))
        if tag is TheoremTag.T43II:
            rhs = -2.0 * sigma * self.sign_inner * self.a * f
            return f * f2 + f1 * f1 - 1.0 - rhs * math.sqrt(max(1.0 - f1 * f1, 0.0))
        if tag is TheoremTag.T51II:
            return f * f2 + f1 * f1 + 1.0 - sigma * self.c * math.sqrt(f1 * f1 + 1.0)
        if tag is TheoremTag.T52II:
            return (
                f * f2
                + f1 * f1
                - 1.0
                - sigma * self.c * math.sqrt(max(f1 * f1 - 1.0, 0.0))
            )
        # T53II
        return (
            f * f2
            + f1 * f1
            - 1.0
            - sigma * self.c * math.sqrt(max(1.0 - f1 * f1, 0.0))
        )

    def as_dict(self):
        return {
            "tag": self.tag.value,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "sign_inner": self.sign_inner,
            "sign_outer": self.sign_outer,
            "sign_g": self.sign_g,
            "rhs_orientation": self.rhs_orientation,
        }


@dataclass(frozen=True)
class ProfileCurve:
    """The meridian pair (f, g) with derivative maps under one gauge.

    ``f3`` (the third derivative of f) is optional; closed-form invariant
    layers use it when present and fall back to central differences at step
    1e-5 otherwise.  ``branch_signs`` records every sign choice made during
    construction.
    """

    gauge: GaugeKind
    f: Callable[[float], float]
    f1: Callable[[float], float]
    f2: Callable[[float], float]
    g: Callable[[float], float]
    g1: Callable[[float], float]
    g2: Callable[[float], float]
    u_domain: tuple[float, float]
    f3: Callable[[float], float] | None = None
    branch_signs: Mapping[str, float] = field(default_factory=dict)
    family: ProfileFamily | None = None
    exited_left: bool = False
    exited_right: bool = False
    label: str = ""

    @property
    def domain_exit(self):
        return self.exited_left or self.exited_right

    def u_grid(self, n=101, pad=0.0):
        lo, hi = self.u_domain
        if math.isinf(lo):
            lo = -1.0
        if math.isinf(hi):
            hi = 1.0
        return np.linspace(lo + pad, hi - pad, n)


def meridian_curvature(gauge, f1, f2, g1, g2):
    """Signed profile curvature from raw derivative values."""
    return gauge.curvature(f1, f2, g1, g2)


def kappa_m(profile, u):
    """Signed curvature of the meridian at parameter u."""
    return profile.gauge.curvature(
        profile.f1(u), profile.f2(u), profile.g1(u), profile.g2(u)
    )


def gauge_residual(profile, u):
    return abs(profile.gauge.constraint(profile.f1(u), profile.g1(u)))


def flat_profile(gauge, a, b=0.0, sign=1):
    """Constant-radius profile f = a, g = sign*u + b.

    Impossible under the de Sitter gauge, which would need g'^2 = -1.
    """
    if gauge is GaugeKind.SPACELIKE_DS:
        raise InvalidGauge("constant radius forces g'^2 = -1 under this gauge")
    if a <= 0:
        raise InvalidParams("radius a must be positive")
    if sign not in (1, -1):
        raise InvalidParams("sign must be +1 or -1")
    tag = TheoremTag.T41I if gauge is GaugeKind.TIMELIKE else TheoremTag.T43I
    return ProfileCurve(
        gauge=gauge,
        f=lambda u: float(a),
        f1=lambda u: 0.0,
        f2=lambda u: 0.0,
        f3=lambda u: 0.0,
        g=lambda u: sign * u + b,
        g1=lambda u: float(sign),
        g2=lambda u: 0.0,
        u_domain=(-math.inf, math.inf),
        branch_signs={"sign_g": sign},
        family=ProfileFamily(tag=tag, a=float(a), b=float(b), sign_g=sign),
        label=f"flat(a={a:g})",
    )


def phi_closed_form(tag, t, a=0.0, c=0.0, sign_inner=1, sign_outer=1):
    """Slope phi(t) of a first-order family at radius t."""
    if tag not in INTEGRATED_TAGS:
        raise InvalidParams(f"{tag.value} is not a first-order family")
    fam = ProfileFamily(
        tag=tag, a=float(a), c=float(c), sign_inner=sign_inner, sign_outer=sign_outer
    )
    return fam.phi(t)


def _quadratic_sqrt_maps(qa, qb, qc):
    """f = sqrt(q) with q = qa u^2 + qb u + qc; derivatives up to order 3."""

    def q(u):
        return (qa * u + qb) * u + qc

    def q1(u):
        return 2.0 * qa * u + qb

    def f(u):
        val = q(u)
        if val <= 0:
            raise DomainExit("radius squared is nonpositive", t=val)
        return math.sqrt(val)

    def f1(u):
        return q1(u) / (2.0 * f(u))

    def f2(u):
        fv = f(u)
        return (2.0 * q(u) * 2.0 * qa - q1(u) ** 2) / (4.0 * fv**3)

    def f3(u):
        fv = f(u)
        return -3.0 * q1(u) * (2.0 * q(u) * 2.0 * qa - q1(u) ** 2) / (8.0 * fv**5)

    return f, f1, f2, f3


def analytic_profile_T5i(tag, a, b, c_int=0.0, sign_g=1, u_domain=None, inset=0.05):
    """Closed-form profiles of the constant-direction families.

    T51i:  f = sqrt(-u^2 + 2au + b), g = sign_g*sqrt(a^2+b)*arcsin((u-a)/sqrt(a^2+b)) + c
    T52i:  f = sqrt(u^2 + 2au + b),  g = sign_g*sqrt(a^2-b)*ln|u+a+f| + c   (a^2 > b)
    T53i:  f = sqrt(u^2 + 2au + b),  g = sign_g*sqrt(b-a^2)*ln(u+a+f) + c   (b > a^2)

    All satisfy f*f'' + f'^2 = -1 (T51i) or +1 (T52i, T53i) identically,
    because f^2 is a quadratic with second derivative -2 or +2.
    """
    if tag not in ANALYTIC5_TAGS:
        raise InvalidParams(f"{tag.value} is not an analytic closed-form family")
    if sign_g not in (1, -1):
        raise InvalidParams("sign_g must be +1 or -1")
    a, b = float(a), float(b)

    if tag is TheoremTag.T51I:
        disc = a * a + b
        if disc <= 0:
            raise InvalidParams("need a^2 + b > 0 for a real profile")
        s = math.sqrt(disc)
        f, f1, f2, f3 = _quadratic_sqrt_maps(-1.0, 2.0 * a, b)
        lo, hi = a - s, a + s

        def g(u):
            return sign_g * s * math.asin((u - a) / s) + c_int

    else:
        disc = a * a - b
        if tag is TheoremTag.T52I and disc <= 0:
            raise InvalidParams("need a^2 - b > 0")
        if tag is TheoremTag.T53I and disc >= 0:
            raise InvalidParams("need b - a^2 > 0")
        s = math.sqrt(abs(disc))
        f, f1, f2, f3 = _quadratic_sqrt_maps(1.0, 2.0 * a, b)
        if tag is TheoremTag.T52I:
            lo, hi = -a + s, math.inf
        else:
            lo, hi = -math.inf, math.inf

        def g(u):
            return sign_g * s * math.log(abs(u + a + f(u))) + c_int

    def g1(u):
        return sign_g * s / f(u)

    def g2(u):
        return -sign_g * s * f1(u) / f(u) ** 2

    if u_domain is None:
        if math.isinf(hi) and math.isinf(lo):
            u_domain = (-1.5, 1.5)
        elif math.isinf(hi):
            u_domain = (lo + max(inset, 0.1), lo + max(inset, 0.1) + 2.0)
        else:
            width = hi - lo
            u_domain = (lo + inset * width, hi - inset * width)
    ulo, uhi = u_domain
    if not (lo < ulo < uhi < hi):
        raise InvalidParams(f"u_domain must sit inside ({lo:g}, {hi:g})")

    return ProfileCurve(
        gauge=TAG_GAUGE[tag],
        f=f,
        f1=f1,
        f2=f2,
        f3=f3,
        g=g,
        g1=g1,
        g2=g2,
        u_domain=(float(ulo), float(uhi)),
        branch_signs={"sign_g": sign_g},
        family=ProfileFamily(tag=tag, a=a, b=b, c=c_int, sign_g=sign_g),
        label=f"{tag.value}(a={a:g}, b={b:g})",
    )


def integrate_profile(
    tag,
    a=0.0,
    c=0.0,
    f0=1.0,
    u_span=(-0.5, 0.5),
    sign_inner=1,
    sign_outer=1,
    sign_g=1,
    rtol=1e-12,
    atol=1e-12,
    gauge_tol=1e-9,
):
    """Integrate f' = phi(f) with f(0) = f0; g recovered on the same grid.

    Integration runs from u = 0 toward both span ends with an adaptive
    embedded Runge-Kutta scheme (dense output kept for evaluation).  When the
    radicand of phi reaches a root the profile is truncated there and the
    corresponding ``exited_*`` flag is set; continuation through the turning
    point would silently switch the outer sign branch, so it is refused.
    """
    if tag not in INTEGRATED_TAGS:
        raise InvalidParams(f"{tag.value} is not a first-order family")
    if sign_inner not in (1, -1) or sign_outer not in (1, -1) or sign_g not in (1, -1):
        raise InvalidParams("branch signs must be +1 or -1")
    if tag in QUARTIC_TAGS and a == 0.0:
        raise InvalidParams("this family requires a != 0")
    if tag in (TheoremTag.T51II, TheoremTag.T52II, TheoremTag.T53II) and c == 0.0:
        raise InvalidParams("this family requires c != 0")
    lo, hi = float(u_span[0]), float(u_span[1])
    if not lo <= 0.0 <= hi:
        raise InvalidParams("u_span must contain 0, where f0 is imposed")

    fam = ProfileFamily(
        tag=tag,
        a=float(a),
        c=float(c),
        sign_inner=sign_inner,
        sign_outer=sign_outer,
        sign_g=sign_g,
    )
    coeffs = fam.radicand_coeffs()
    if f0 <= 0:
        raise InvalidParams("f0 must be positive")
    rad0 = fam.radicand(f0)
    if rad0 <= 0:
        raise DomainExit(
            f"f0={f0:g} not strictly inside an admissible interval "
            f"{_admissible_intervals(coeffs)}",
            t=f0,
            admissible=_admissible_intervals(coeffs),
        )
    w0 = fam.slope_numerator(f0)
    if w0 == 0.0:
        raise InvalidParams("slope numerator vanishes at f0; gauge degenerate")
    fam = replace(fam, rhs_orientation=1 if w0 > 0 else -1)
    sigma = float(fam.rhs_orientation)

    def rhs(u, y):
        t = y[0]
        rad = max(float(np.polyval(coeffs, t)), 0.0)
        fp = sign_outer * math.sqrt(rad) / t
        gp = sign_g * sigma * fam.slope_numerator(t) / t
        return (fp, gp)

    # the radicand only touches zero, so stop slightly above it to get a
    # sign change the event solver can bracket
    rad_floor = 1e-12 * max(abs(rad0), 1.0)

    def rad_event(u, y):
        return float(np.polyval(coeffs, y[0])) - rad_floor

    rad_event.terminal = True

    # the slope blows up like 1/f as the radius collapses, so stop a hair
    # above zero instead of running the step size into the ground
    radius_floor = 1e-6 * min(float(f0), 1.0)

    def radius_event(u, y):
        return y[0] - radius_floor

    radius_event.terminal = True

    solutions = []
    exited = {"left": False, "right": False}
    achieved = [0.0, 0.0]
    for side, u_end in (("left", lo), ("right", hi)):
        if u_end == 0.0:
            continue
        res = solve_ivp(
            rhs,
            (0.0, u_end),
            (float(f0), 0.0),
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=True,
            events=(rad_event, radius_event),
        )
        if res.status == -1:
            raise IntegrationFailure(res.message)
        if res.status == 1:
            exited[side] = True
        solutions.append((min(0.0, res.t[-1]), max(0.0, res.t[-1]), res.sol))
        achieved[0] = min(achieved[0], res.t[-1])
        achieved[1] = max(achieved[1], res.t[-1])

    if not solutions:
        raise InvalidParams("u_span has zero length")

    # derivative probes (finite differences of downstream quantities) may
    # step a hair beyond the integrated span; the dense polynomials
    # extrapolate safely over such a thin band
    slack = 1e-3 * max(achieved[1] - achieved[0], 1e-6)

    def state(u):
        for s_lo, s_hi, sol in solutions:
            if s_lo <= u <= s_hi:
                return sol(u)
        if achieved[0] - slack <= u < achieved[0]:
            seg = min(solutions, key=lambda s: s[0])
            return seg[2](u)
        if achieved[1] < u <= achieved[1] + slack:
            seg = max(solutions, key=lambda s: s[1])
            return seg[2](u)
        raise DomainExit(
            f"u={u:g} outside the integrated span {tuple(achieved)}", t=u
        )

    def f(u):
        return float(state(u)[0])

    def g(u):
        return float(state(u)[1])

    def f1(u):
        # clamped rather than raising so edge extrapolation stays finite
        t = f(u)
        return sign_outer * math.sqrt(max(float(np.polyval(coeffs, t)), 0.0)) / t

    def f2(u):
        return fam.slope_derivatives(f(u))[1]

    def f3(u):
        return fam.slope_derivatives(f(u))[2]

    def g1(u):
        return sign_g * sigma * fam.slope_numerator(f(u)) / f(u)

    def g2(u):
        t = f(u)
        w = fam.slope_numerator(t)
        if fam.tag in QUARTIC_TAGS:
            dw = 2.0 * sign_inner * a * t
        elif fam.tag is TheoremTag.T53II:
            dw = -c
        else:
            dw = c
        return sign_g * sigma * f1(u) * (dw * t - w) / (t * t)

    profile = ProfileCurve(
        gauge=fam.gauge,
        f=f,
        f1=f1,
        f2=f2,
        f3=f3,
        g=g,
        g1=g1,
        g2=g2,
        u_domain=(achieved[0], achieved[1]),
        branch_signs={
            "sign_inner": sign_inner,
            "sign_outer": sign_outer,
            "sign_g": sign_g,
            "rhs_orientation": fam.rhs_orientation,
        },
        family=fam,
        exited_left=exited["left"],
        exited_right=exited["right"],
        label=f"{tag.value}(a={a:g}, c={c:g})",
    )
    # the drift monitor skips a thin layer next to truncation points, where
    # the slope terms cancel catastrophically (f'^2 ~ 1/f^2 at a collapse)
    inset = 1e-3 * (achieved[1] - achieved[0])
    d_lo = achieved[0] + (inset if exited["left"] else 0.0)
    d_hi = achieved[1] - (inset if exited["right"] else 0.0)
    drift = max(gauge_residual(profile, u) for u in np.linspace(d_lo, d_hi, 33))
    if drift > gauge_tol:
        raise GaugeViolation(f"gauge drift {drift:.3e} exceeds {gauge_tol:.1e}")
    return profile


def profile_from_f(
    gauge, f, f1, f2, f3=None, u_span=(-1.0, 1.0), g0=0.0, rtol=1e-12, atol=1e-12,
    label="custom",
):
    """Profile with user-supplied radius maps; g comes from quadrature.

    The gauge is imposed exactly through g' = gauge.g_prime(f'), which also
    means the input slope must keep the gauge square root real on the span.
    """
    lo, hi = float(u_span[0]), float(u_span[1])
    for u in np.linspace(lo, hi, 65):
        gauge.g_prime(f1(u))  # raises GaugeBoundary when inadmissible
        if f(u) <= 0:
            raise InvalidParams(f"radius f must stay positive (fails at u={u:g})")

    res = solve_ivp(
        lambda u, y: (gauge.g_prime(f1(u)),),
        (lo, hi),
        (float(g0),),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if res.status != 0:
        raise IntegrationFailure(res.message)
    sol = res.sol

    def g(u):
        return float(sol(u)[0])

    def g1(u):
        return gauge.g_prime(f1(u))

    def g2(u):
        return gauge.g_dprime(f1(u), f2(u), g1(u))

    return ProfileCurve(
        gauge=gauge,
        f=f,
        f1=f1,
        f2=f2,
        f3=f3,
        g=g,
        g1=g1,
        g2=g2,
        u_domain=(lo, hi),
        branch_signs={"sign_g": 1},
        label=label,
    )


def perturbed_profile(base, delta=1e-2, frequency=1.0):
    """Sinusoidal radius perturbation with the gauge re-imposed on g."""
    w = float(frequency)

    def f(u):
        return base.f(u) + delta * math.sin(w * u)

    def f1(u):
        return base.f1(u) + delta * w * math.cos(w * u)

    def f2(u):
        return base.f2(u) - delta * w * w * math.sin(w * u)

    f3 = None
    if base.f3 is not None:
        def f3(u):  # noqa: F811
            return base.f3(u) - delta * w**3 * math.cos(w * u)

    lo, hi = base.u_domain
    if math.isinf(lo) or math.isinf(hi):
        lo, hi = -1.0, 1.0
    prof = profile_from_f(
        base.gauge, f, f1, f2, f3, u_span=(lo, hi),
        label=f"{base.label}+perturbation({delta:g})",
    )
    signs = dict(prof.branch_signs)
    signs["perturbation"] = delta
    return replace(prof, branch_signs=signs)


def verify_profile_ode(profile, tag=None, family=None, n=201, pad=0.0):
    """Max |residual| of a family's defining equation over a sample grid.

    With no explicit ``tag``/``family`` the profile's own family is used.
    When a bare tag is given, its sign ambiguity is resolved against the
    profile (orientation of the slope numerator at mid-domain).
    """
    if family is None:
        if tag is None:
            family = profile.family
            if family is None:
                raise InvalidParams("profile carries no family; pass tag=")
        else:
            fam = ProfileFamily(tag=tag)
            if tag in INTEGRATED_TAGS:
                mid = 0.5 * sum(profile.u_domain)
                w_mid = fam.slope_numerator(profile.f(mid))
                fam = replace(fam, rhs_orientation=1 if w_mid >= 0 else -1)
            family = fam
    grid = profile.u_grid(n, pad)
    return max(
        abs(family.ode_residual_value(profile.f(u), profile.f1(u), profile.f2(u)))
        for u in grid
    )


def linear_substitution_residual(family, n=101, inset=0.02):
    """Residual of z' + z/t = (rhs) for z rebuilt from phi on the family.

    z is sqrt(phi^2 + 1), sqrt(phi^2 - 1) or sqrt(1 - phi^2) according to the
    gauge; its derivative is taken analytically through the radicand
    polynomial, so this exercises the algebra of the reduction, not the
    integrator.
    """
    coeffs = family.radicand_coeffs()
    intervals = _admissible_intervals(coeffs)
    if not intervals:
        raise InvalidParams("family has empty admissible set")
    lo, hi = intervals[0]
    if math.isinf(hi):
        hi = lo + 10.0
    width = hi - lo
    ts = np.linspace(lo + inset * width, hi - inset * width, n)
    sigma = float(family.rhs_orientation)
    worst = 0.0
    for t in ts:
        # the family's orientation sign only holds where w keeps that sign
        if sigma * family.slope_numerator(t) <= 0:
            continue
        phi, f2_val, _ = family.slope_derivatives(t)
        gauge = family.gauge
        # f2_val equals phi * dphi/dt, so dz/dt needs no polynomial rework
        if gauge is GaugeKind.TIMELIKE:
            z = math.sqrt(phi * phi + 1.0)
            dz_dt = f2_val / z
        elif gauge is GaugeKind.SPACELIKE_DS:
            q = phi * phi - 1.0
            if q <= 0:
                continue
            z = math.sqrt(q)
            dz_dt = f2_val / z
        else:
            q = 1.0 - phi * phi
            if q <= 0:
                continue
            z = math.sqrt(q)
            dz_dt = -f2_val / z
        if family.tag in QUARTIC_TAGS:
            target = 2.0 * sigma * family.sign_inner * family.a
        elif family.tag is TheoremTag.T53II:
            target = -sigma * family.c / t
        else:
            target = sigma * family.c / t
        worst = max(worst, abs(dz_dt + z / t - target))
    return worst


PROFILE_CSV_HEADER = "u,f,f_prime,f_dprime,g,g_prime,gauge_residual,ode_residual"


def write_profile_csv(profile, path, n=201):
    """Write the profile sample table; floats carry 17 significant digits."""
    fam = profile.family
    lines = [PROFILE_CSV_HEADER]
    for u in profile.u_grid(n):
        ode = (
            abs(fam.ode_residual_value(profile.f(u), profile.f1(u), profile.f2(u)))
            if fam is not None
            else float("nan")
        )
        row = (
            u,
            profile.f(u),
            profile.f1(u),
            profile.f2(u),
            profile.g(u),
            profile.g1(u),
            gauge_residual(profile, u),
            ode,
        )
        lines.append(",".join(format(float(x), ".17g") for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
