"""Finite-difference differential geometry for arbitrary Lorentz immersions.

Everything here works from an immersion z(u, v) alone, through the ambient
decomposition into tangent and normal parts: second derivatives of z are
projected with the *indefinite* Gram inverse (explicit 2x2 with the signed
determinant - a positive-definite solver would silently repair exactly the
signs this package cares about), the mean curvature is the half trace of
the projected Hessian against the inverse metric and the Gauss curvature
comes from inner products of the projected second derivatives.  None of the
closed-form family formulas are used, which is what makes this module an
independent check of them.

Analytic partial derivatives can be attached to an immersion; they replace
the stencils for z's own derivatives (useful when differentiating derived
fields, where stacked finite differencing would amplify noise), while
``use_analytic=False`` forces pure stencils everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateTangent, LightlikeH, SignatureError, ZeroH
from .pseudo_linalg import TAU_NULL, inner

__all__ = [
    "Immersion",
    "ShapeReport",
    "induced_metric",
    "normal_project",
    "shape_report",
    "normal_derivative",
    "mean_curvature_field",
    "normalized_mean_curvature_field",
]


@dataclass(frozen=True)
class Immersion:
    """A map (u, v) -> 4-vector, optionally with analytic partials."""

    z: Callable[[float, float], np.ndarray]
    du: Callable[[float, float], np.ndarray] | None = None
    dv: Callable[[float, float], np.ndarray] | None = None
    duu: Callable[[float, float], np.ndarray] | None = None
    duv: Callable[[float, float], np.ndarray] | None = None
    dvv: Callable[[float, float], np.ndarray] | None = None
    u_domain: tuple[float, float] | None = None
    v_domain: tuple[float, float] | None = None

    @property
    def has_analytic_partials(self):
        return None not in (self.du, self.dv, self.duu, self.duv, self.dvv)


def _partials(im, u, v, h, use_analytic):
    if use_analytic is None:
        use_analytic = im.has_analytic_partials
    if use_analytic:
        if not im.has_analytic_partials:
            raise ValueError("immersion carries no analytic partials")
        return {
            "zu": np.asarray(im.du(u, v), dtype=float),
            "zv": np.asarray(im.dv(u, v), dtype=float),
            "zuu": np.asarray(im.duu(u, v), dtype=float),
            "zuv": np.asarray(im.duv(u, v), dtype=float),
            "zvv": np.asarray(im.dvv(u, v), dtype=float),
        }
    z = im.z
    z00 = np.asarray(z(u, v), dtype=float)
    zu_p, zu_m = np.asarray(z(u + h, v), float), np.asarray(z(u - h, v), float)
    zv_p, zv_m = np.asarray(z(u, v + h), float), np.asarray(z(u, v - h), float)
    zpp, zpm = np.asarray(z(u + h, v + h), float), np.asarray(z(u + h, v - h), float)
    zmp, zmm = np.asarray(z(u - h, v + h), float), np.asarray(z(u - h, v - h), float)
    return {
        "zu": (zu_p - zu_m) / (2 * h),
        "zv": (zv_p - zv_m) / (2 * h),
        "zuu": (zu_p - 2 * z00 + zu_m) / (h * h),
        "zvv": (zv_p - 2 * z00 + zv_m) / (h * h),
        "zuv": (zpp - zpm - zmp + zmm) / (4 * h * h),
    }


def induced_metric(im, u, v, h_step=1e-4, use_analytic=None):
    """First-fundamental-form coefficients (E, F, G); must be Lorentzian."""
    p = _partials(im, u, v, h_step, use_analytic)
    E = inner(p["zu"], p["zu"])
    F = inner(p["zu"], p["zv"])
    G = inner(p["zv"], p["zv"])
    if E * G - F * F >= 0:
        raise SignatureError(
            f"induced metric not Lorentzian at ({u:g}, {v:g}): EG - F^2 = "
            f"{E * G - F * F:.3e}"
        )
    return E, F, G


def _gram_inverse(E, F, G, tol=1e-12):
    det = E * G - F * F
    if abs(det) <= tol:
        raise DegenerateTangent(f"tangent Gram matrix singular: det = {det:.3e}")
    return det, G / det, -F / det, E / det  # det, g^uu, g^uv, g^vv


def _project(w, zu, zv, tol=1e-12):
    E, F, G = inner(zu, zu), inner(zu, zv), inner(zv, zv)
    _, iuu, iuv, ivv = _gram_inverse(E, F, G, tol)
    wu, wv = inner(w, zu), inner(w, zv)
    alpha = iuu * wu + iuv * wv
    beta = iuv * wu + ivv * wv
    return np.asarray(w, dtype=float) - alpha * zu - beta * zv


def normal_project(im, u, v, w, h_step=1e-4, use_analytic=None, tol=1e-12):
    """Normal component of w at (u, v), orthogonal to both tangents."""
    p = _partials(im, u, v, h_step, use_analytic)
    return _project(w, p["zu"], p["zv"], tol)


@dataclass(frozen=True)
class ShapeReport:
    """Per-point metric, projected second fundamental form and invariants."""

    E: float
    F: float
    G: float
    det: float
    h_uu: np.ndarray
    h_uv: np.ndarray
    h_vv: np.ndarray
    mean_curvature_vector: np.ndarray
    gauss_curvature: float
    h_step: float


def shape_report(im, u, v, h_step=1e-4, use_analytic=None, tol=1e-12):
    """Metric, h_ij, H and K at one point, straight from the definitions."""
    p = _partials(im, u, v, h_step, use_analytic)
    zu, zv = p["zu"], p["zv"]
    E, F, G = inner(zu, zu), inner(zu, zv), inner(zv, zv)
    if E * G - F * F >= 0:
        raise SignatureError(
            f"induced metric not Lorentzian at ({u:g}, {v:g})"
        )
    det, iuu, iuv, ivv = _gram_inverse(E, F, G, tol)
    h_uu = _project(p["zuu"], zu, zv, tol)
    h_uv = _project(p["zuv"], zu, zv, tol)
    h_vv = _project(p["zvv"], zu, zv, tol)
    mean = 0.5 * (iuu * h_uu + 2.0 * iuv * h_uv + ivv * h_vv)
    gauss = (inner(h_uu, h_vv) - inner(h_uv, h_uv)) / det
    return ShapeReport(
        E=E,
        F=F,
        G=G,
        det=det,
        h_uu=h_uu,
        h_uv=h_uv,
        h_vv=h_vv,
        mean_curvature_vector=mean,
        gauss_curvature=gauss,
        h_step=h_step,
    )


def mean_curvature_field(im, h_step=1e-4, use_analytic=None):
    """H as a callable field, for feeding into normal_derivative."""

    def field(u, v):
        return shape_report(im, u, v, h_step, use_analytic).mean_curvature_vector

    return field


def normalized_mean_curvature_field(im, h_step=1e-4, use_analytic=None, tol=TAU_NULL):
    """H / sqrt(|<H, H>|) as a callable field; gated against lightlike H."""

    def field(u, v):
        h_vec = shape_report(im, u, v, h_step, use_analytic).mean_curvature_vector
        if float(np.linalg.norm(h_vec)) <= tol:
            raise ZeroH("mean curvature vanishes")
        hh = inner(h_vec, h_vec)
        if abs(hh) <= tol:
            raise LightlikeH("<H, H> = 0 along the sampled field")
        return h_vec / math.sqrt(abs(hh))

    return field


def normal_derivative(
    im,
    u,
    v,
    field,
    direction,
    h_step=1e-4,
    use_analytic=None,
    richardson=False,
    tol=1e-12,
):
    """Normal part of the directional derivative of a normal field.

    ``direction`` is a coordinate pair (du, dv); the derivative is
    du * d(field)/du + dv * d(field)/dv by central differences (optionally
    Richardson-extrapolated to fourth order), then projected onto the normal
    space, which implements the normal connection for ambient-flat space.
    """
    a, b = float(direction[0]), float(direction[1])

    def diff(h):
        out = np.zeros(4)
        if a != 0.0:
            out = out + a * (
                np.asarray(field(u + h, v), float) - np.asarray(field(u - h, v), float)
            ) / (2 * h)
        if b != 0.0:
            out = out + b * (
                np.asarray(field(u, v + h), float) - np.asarray(field(u, v - h), float)
            ) / (2 * h)
        return out

    d = diff(h_step)
    if richardson:
        d = (4.0 * diff(h_step / 2.0) - d) / 3.0
    return normal_project(im, u, v, d, h_step, use_analytic, tol)
