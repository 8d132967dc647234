"""The three Lorentz meridian-surface families and their invariants.

A meridian surface is the immersion z(u, v) = f(u) l(v) + g(u) e4 where l
is a unit-speed curve on a pseudo-sphere of span{e1, e2, e3} and (f, g) is a
gauge-normalized profile.  The admissible combinations are:

    Ma   case A curve (spacelike on the de Sitter sphere)  + timelike profile
    Mb   case B curve (timelike on the de Sitter sphere)   + spacelike (DS) profile
    Mpp  case C curve (spacelike on the anti-de Sitter one) + spacelike (ADS) profile

Each family carries the adapted frame X = z_u, Y = z_v / f = t, n1 = n(v),
n2 = (+-)g' l + f' e4, in which the second fundamental form is diagonal and
every invariant below has a closed form in (f, g, kappa):

    h(X,X) = kappa_m n2,  h(X,Y) = 0,  h(Y,Y) = (+-kappa/f) n1 - (g'/f) n2
    K = (+-) f''/f
    H = H1 n1 + H2 n2 with H2 = (+-)(f f'' + f'^2 +- 1) / (2 f g')

The normal frame {n1, n2} is parallel in the normal bundle, so the normal
connection derivatives of H and of H0 = H / |H| reduce to plain parameter
derivatives of the component functions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import GaugeBoundary, InvalidParams, LightlikeH, ZeroH
from .meridian_profiles import GaugeKind, kappa_m
from .pseudo_linalg import TAU_NULL, apply_congruence, basis
from .spherical_curves import CurveCase

__all__ = [
    "FamilyTag",
    "MeridianSurface",
    "NormalVec2",
    "NormalizedMeanCurvature",
    "gauss_curvature_formula",
    "axis_swapped_point",
    "write_surface_csv",
    "SURFACE_CSV_HEADER",
]

_E1 = basis(1)
_E4 = basis(4)


class FamilyTag(enum.Enum):
    MA_PRIME = "Ma"
    MB_PRIME = "Mb"
    M_DOUBLE_PRIME = "Mpp"


@dataclass(frozen=True)
class _FamilyData:
    curve_case: CurveCase
    gauge: GaugeKind
    signature: tuple[float, float, float, float]  # <X,X>, <Y,Y>, <n1,n1>, <n2,n2>
    n2_l_sign: float  # n2 = n2_l_sign * g' l + f' e4
    k_sign: float  # K = k_sign * f''/f
    numerator_shift: float  # N = f f'' + f'^2 + numerator_shift
    h1_sign: float  # H = h1_sign * kappa/(2f) n1 + h2_sign * N/(2 f g') n2
    h2_sign: float
    hyy_n1_sign: float  # h(Y,Y) = hyy_n1_sign * kappa/f n1 - g'/f n2
    dxh_n1_sign: float  # D_X H = dxh_n1_sign * kappa f'/(2f^2) n1 + dxh_n2_sign * Q' n2
    dxh_n2_sign: float
    dyh_n1_sign: float  # D_Y H = dyh_n1_sign * kappa'/(2f^2) n1


_FAMILY_DATA = {
    FamilyTag.MA_PRIME: _FamilyData(
        curve_case=CurveCase.CASE_A,
        gauge=GaugeKind.TIMELIKE,
        signature=(-1.0, 1.0, -1.0, 1.0),
        n2_l_sign=1.0,
        k_sign=1.0,
        numerator_shift=1.0,
        h1_sign=-1.0,
        h2_sign=-1.0,
        hyy_n1_sign=-1.0,
        dxh_n1_sign=1.0,
        dxh_n2_sign=-1.0,
        dyh_n1_sign=-1.0,
    ),
    FamilyTag.MB_PRIME: _FamilyData(
        curve_case=CurveCase.CASE_B,
        gauge=GaugeKind.SPACELIKE_DS,
        signature=(1.0, -1.0, 1.0, -1.0),
        n2_l_sign=1.0,
        k_sign=-1.0,
        numerator_shift=-1.0,
        h1_sign=-1.0,
        h2_sign=1.0,
        hyy_n1_sign=1.0,
        dxh_n1_sign=1.0,
        dxh_n2_sign=1.0,
        dyh_n1_sign=-1.0,
    ),
    FamilyTag.M_DOUBLE_PRIME: _FamilyData(
        curve_case=CurveCase.CASE_C,
        gauge=GaugeKind.SPACELIKE_ADS,
        signature=(-1.0, 1.0, 1.0, -1.0),
        n2_l_sign=-1.0,
        k_sign=1.0,
        numerator_shift=-1.0,
        h1_sign=1.0,
        h2_sign=1.0,
        hyy_n1_sign=1.0,
        dxh_n1_sign=-1.0,
        dxh_n2_sign=1.0,
        dyh_n1_sign=1.0,
    ),
}


@dataclass(frozen=True)
class NormalVec2:
    """A normal vector by its components along the frame {n1, n2}."""

    c1: float
    c2: float

    def norm(self):
        """Euclidean size of the component pair (frame vectors are unit)."""
        return math.hypot(self.c1, self.c2)

    def as_vector(self, n1, n2):
        return self.c1 * np.asarray(n1) + self.c2 * np.asarray(n2)


@dataclass(frozen=True)
class NormalizedMeanCurvature:
    """H0 = a n1 + b n2 together with eps = sign <H, H>."""

    a: float
    b: float
    eps: int


def gauss_curvature_formula(family, f_value, f_dprime_value):
    """Family-signed Gauss curvature (+-) f''/f from raw values."""
    return _FAMILY_DATA[family].k_sign * f_dprime_value / f_value


@dataclass(frozen=True)
class MeridianSurface:
    family: FamilyTag
    curve: "SphericalCurve"
    profile: "ProfileCurve"

    def __post_init__(self):
        data = _FAMILY_DATA[self.family]
        if self.curve.case is not data.curve_case:
            raise InvalidParams(
                f"family {self.family.value} needs a case {data.curve_case.value} "
                f"curve, got case {self.curve.case.value}"
            )
        if self.profile.gauge is not data.gauge:
            raise InvalidParams(
                f"family {self.family.value} needs gauge {data.gauge.value}, "
                f"got {self.profile.gauge.value}"
            )

    @property
    def data(self):
        return _FAMILY_DATA[self.family]

    # -- immersion and exact partial derivatives ---------------------------

    def immerse(self, u, v):
        return self.profile.f(u) * self.curve.point(v) + self.profile.g(u) * _E4

    def z_u(self, u, v):
        return self.profile.f1(u) * self.curve.point(v) + self.profile.g1(u) * _E4

    def z_v(self, u, v):
        return self.profile.f(u) * self.curve.tangent(v)

    def z_uu(self, u, v):
        return self.profile.f2(u) * self.curve.point(v) + self.profile.g2(u) * _E4

    def z_uv(self, u, v):
        return self.profile.f1(u) * self.curve.tangent(v)

    def z_vv(self, u, v):
        if self.curve.tangent_rate is None:
            h = 1e-5
            acc = (self.curve.tangent(v + h) - self.curve.tangent(v - h)) / (2 * h)
        else:
            acc = self.curve.tangent_rate(v)
        return self.profile.f(u) * acc

    # -- adapted frame ------------------------------------------------------

    def frame(self, u, v):
        """(X, Y, n1, n2) with the family's signature."""
        p = self.profile
        l = self.curve.point(v)
        x_vec = p.f1(u) * l + p.g1(u) * _E4
        y_vec = self.curve.tangent(v)
        n1 = self.curve.normal(v)
        n2 = self.data.n2_l_sign * p.g1(u) * l + p.f1(u) * _E4
        return x_vec, y_vec, n1, n2

    def second_fundamental_form(self, u, v):
        """(h(X,X), h(X,Y), h(Y,Y)) as 4-vectors."""
        _, _, n1, n2 = self.frame(u, v)
        f = self.profile.f(u)
        km = kappa_m(self.profile, u)
        k = self.curve.kappa(v)
        h_xx = km * n2
        h_xy = np.zeros(4)
        h_yy = (self.data.hyy_n1_sign * k / f) * n1 - (self.profile.g1(u) / f) * n2
        return h_xx, h_xy, h_yy

    # -- scalar invariants ---------------------------------------------------

    def gauss_curvature(self, u):
        return gauss_curvature_formula(self.family, self.profile.f(u), self.profile.f2(u))

    def _numerator(self, u):
        p = self.profile
        return p.f(u) * p.f2(u) + p.f1(u) ** 2 + self.data.numerator_shift

    def mean_curvature(self, u, v):
        """H by its (n1, n2) components."""
        p = self.profile
        f = p.f(u)
        g1 = p.g1(u)
        if g1 == 0.0:
            raise GaugeBoundary("g' = 0: mean curvature denominator vanished")
        c1 = self.data.h1_sign * self.curve.kappa(v) / (2.0 * f)
        c2 = self.data.h2_sign * self._numerator(u) / (2.0 * f * g1)
        return NormalVec2(c1, c2)

    def mean_curvature_squared(self, u, v):
        h = self.mean_curvature(u, v)
        s = self.data.signature
        return s[2] * h.c1**2 + s[3] * h.c2**2

    def is_quasi_minimal(self, u, v, tol=TAU_NULL):
        h = self.mean_curvature(u, v)
        return abs(self.mean_curvature_squared(u, v)) <= tol and h.norm() > tol

    def normalized_mean_curvature(self, u, v, tol=TAU_NULL):
        h = self.mean_curvature(u, v)
        if h.norm() <= tol:
            raise ZeroH("mean curvature vanishes; surface is minimal here")
        hh = self.mean_curvature_squared(u, v)
        if abs(hh) <= tol:
            raise LightlikeH("<H, H> = 0: normalized direction undefined")
        eps = 1 if hh > 0 else -1
        scale = math.sqrt(eps * hh)
        return NormalizedMeanCurvature(a=h.c1 / scale, b=h.c2 / scale, eps=eps)

    # -- normal connection derivatives ----------------------------------------

    def n2_coefficient(self, u):
        """Q(u) = (f f'' + f'^2 +- 1) / (2 f g'), the u-profile of H's n2 part."""
        p = self.profile
        return self._numerator(u) / (2.0 * p.f(u) * p.g1(u))

    def n2_coefficient_rate(self, u, fd_step=1e-5):
        p = self.profile
        if p.f3 is not None:
            f, f1, f2, f3 = p.f(u), p.f1(u), p.f2(u), p.f3(u)
            g1, g2 = p.g1(u), p.g2(u)
            num = f * f2 + f1 * f1 + self.data.numerator_shift
            dnum = 3.0 * f1 * f2 + f * f3
            den = 2.0 * f * g1
            dden = 2.0 * (f1 * g1 + f * g2)
            return (dnum * den - num * dden) / den**2
        return (self.n2_coefficient(u + fd_step) - self.n2_coefficient(u - fd_step)) / (
            2.0 * fd_step
        )

    def mean_curvature_derivatives(self, u, v):
        """(D_X H, D_Y H) by (n1, n2) components.

        The normal frame is parallel, so these are derivatives of the
        component functions: the X direction differentiates in u (X = z_u is
        unit), the Y direction carries the 1/f factor of Y = z_v / f.
        """
        p = self.profile
        f = p.f(u)
        k = self.curve.kappa(v)
        dxh = NormalVec2(
            self.data.dxh_n1_sign * k * p.f1(u) / (2.0 * f * f),
            self.data.dxh_n2_sign * self.n2_coefficient_rate(u),
        )
        dyh = NormalVec2(
            self.data.dyh_n1_sign * self.curve.kappa_derivative(v) / (2.0 * f * f),
            0.0,
        )
        return dxh, dyh

    def normalized_mean_curvature_derivatives(self, u, v, tol=TAU_NULL, fd_step=1e-5):
        """(D_X H0, D_Y H0) by components, via central differences of (a, b)."""
        f = self.profile.f(u)

        def ab(uu, vv):
            nm = self.normalized_mean_curvature(uu, vv, tol)
            return nm.a, nm.b

        a_up, b_up = ab(u + fd_step, v)
        a_dn, b_dn = ab(u - fd_step, v)
        dxh0 = NormalVec2((a_up - a_dn) / (2 * fd_step), (b_up - b_dn) / (2 * fd_step))
        a_vp, b_vp = ab(u, v + fd_step)
        a_vn, b_vn = ab(u, v - fd_step)
        dyh0 = NormalVec2(
            (a_vp - a_vn) / (2 * fd_step * f), (b_vp - b_vn) / (2 * fd_step * f)
        )
        return dxh0, dyh0

    def normal_connection_derivatives(self, u, v, tol=TAU_NULL):
        """(D_X H, D_Y H, D_X H0, D_Y H0); raises LightlikeH / ZeroH when
        the normalized direction is undefined at (or next to) the point."""
        dxh, dyh = self.mean_curvature_derivatives(u, v)
        dxh0, dyh0 = self.normalized_mean_curvature_derivatives(u, v, tol)
        return dxh, dyh, dxh0, dyh0


def axis_swapped_point(surface, u, v):
    """Point of the congruent twin surface around the spacelike axis e1.

    The twin parametrization is g(u) e1 + f(u) lt(v) with lt the image of the
    spherical curve under the coordinate swap; applying the swap to
    ``surface.immerse(u, v)`` reproduces it exactly.
    """
    lt = apply_congruence(surface.curve.point(v))
    return surface.profile.g(u) * _E1 + surface.profile.f(u) * lt


SURFACE_CSV_HEADER = (
    "u,v,x1,x2,x3,x4,K,H_n1,H_n2,HH,res_DXH,res_DYH,res_DXH0,res_DYH0"
)


def write_surface_csv(surface, u_nodes, v_nodes, path, tau_null=TAU_NULL):
    """Sample the surface over a grid; floats carry 17 significant digits.

    The residual columns are the component norms of the normal connection
    derivatives; the H0 columns are NaN wherever <H, H> is (near-)lightlike.
    """
    lines = [SURFACE_CSV_HEADER]
    for u in u_nodes:
        for v in v_nodes:
            z = surface.immerse(u, v)
            h = surface.mean_curvature(u, v)
            hh = surface.mean_curvature_squared(u, v)
            dxh, dyh = surface.mean_curvature_derivatives(u, v)
            try:
                dxh0, dyh0 = surface.normalized_mean_curvature_derivatives(
                    u, v, tau_null
                )
                r3, r4 = dxh0.norm(), dyh0.norm()
            except (LightlikeH, ZeroH):
                r3, r4 = float("nan"), float("nan")
            row = (
                u,
                v,
                z[0],
                z[1],
                z[2],
                z[3],
                surface.gauss_curvature(u),
                h.c1,
                h.c2,
                hh,
                dxh.norm(),
                dyh.norm(),
                r3,
                r4,
            )
            lines.append(",".join(format(float(x), ".17g") for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


if TYPE_CHECKING:  # pragma: no cover
    from .meridian_profiles import ProfileCurve
    from .spherical_curves import SphericalCurve
