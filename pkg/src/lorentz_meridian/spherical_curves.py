"""Unit-speed curves on the two pseudo-spheres of span{e1, e2, e3}.

The de Sitter sphere S^2_1(1) carries spacelike (case A) and timelike
(case B) unit-speed curves; the anti-de Sitter sphere H^2_1(-1) carries
spacelike ones (case C).  Each case comes with an orthonormal frame
{l, t, n} (position, tangent, normal) whose signature and Frenet system
are fixed by the case:

    case A:  <l,l> = +1, <t,t> = +1, <n,n> = -1,   t' = -k n - l,  n' = -k t
    case B:  <l,l> = +1, <t,t> = -1, <n,n> = +1,   t' = +k n + l,  n' = +k t
    case C:  <l,l> = -1, <t,t> = +1, <n,n> = +1,   t' = +k n + l,  n' = -k t

with the curvature k(v) = <t'(v), n(v)>.  The sign of n is pinned by
det[l, t, n] > 0 in coordinates (x1, x2, x3), which makes k a well-defined
signed quantity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateCurve, FrameDegenerate, IntegrationFailure
from .pseudo_linalg import frame_normal, inner, orthonormalize_frame

__all__ = [
    "CurveCase",
    "SphericalCurve",
    "FrenetFrame",
    "frenet_frame",
    "constant_curvature_curve",
    "parallel_circle",
    "curve_from_kappa",
    "standard_initial_frame",
    "validate_spherical_curve",
]


class CurveCase(enum.Enum):
    """Sphere type plus causal character of the curve."""

    CASE_A = "A"  # de Sitter sphere, spacelike curve
    CASE_B = "B"  # de Sitter sphere, timelike curve
    CASE_C = "C"  # anti-de Sitter sphere, spacelike curve

    @property
    def sphere_sign(self):
        return -1.0 if self is CurveCase.CASE_C else 1.0

    @property
    def tangent_sign(self):
        return -1.0 if self is CurveCase.CASE_B else 1.0

    @property
    def normal_sign(self):
        return -self.sphere_sign * self.tangent_sign


@dataclass(frozen=True)
class SphericalCurve:
    """A unit-speed curve given by callable position and derivative maps.

    ``tangent`` must be l' (unit of the case's sign).  ``tangent_rate`` (l'')
    is optional; when absent, frame computations fall back to central
    differences of ``tangent``.  ``kappa`` is the curve's signed curvature
    under the det[l, t, n] > 0 convention and ``kappa_rate`` its derivative
    (optional, central differences otherwise).
    """

    case: CurveCase
    point: Callable[[float], np.ndarray]
    tangent: Callable[[float], np.ndarray]
    kappa: Callable[[float], float]
    v_domain: tuple[float, float] = (-math.inf, math.inf)
    tangent_rate: Callable[[float], np.ndarray] | None = None
    kappa_rate: Callable[[float], float] | None = None
    label: str = ""

    def normal(self, v):
        """Frame normal n(v) under the orientation convention."""
        return frame_normal(
            self.point(v),
            self.tangent(v),
            self.case.sphere_sign,
            self.case.tangent_sign,
        )

    def kappa_derivative(self, v, step=1e-5):
        if self.kappa_rate is not None:
            return float(self.kappa_rate(v))
        return (self.kappa(v + step) - self.kappa(v - step)) / (2.0 * step)


@dataclass(frozen=True)
class FrenetFrame:
    l: np.ndarray
    t: np.ndarray
    n: np.ndarray
    kappa: float


def frenet_frame(curve, v, diff_step=1e-5):
    """Recompute the frame and curvature of ``curve`` at parameter ``v``.

    The curvature is k = <t', n> with t' taken from the curve's analytic
    second derivative when available, otherwise from central differences of
    the tangent map.  This is deliberately independent of ``curve.kappa`` so
    that integrated curves can be round-trip checked against the curvature
    they were built from.
    """
    l = curve.point(v)
    t = curve.tangent(v)
    n = curve.normal(v)
    if curve.tangent_rate is not None:
        tp = curve.tangent_rate(v)
    else:
        tp = (curve.tangent(v + diff_step) - curve.tangent(v - diff_step)) / (
            2.0 * diff_step
        )
    return FrenetFrame(l=l, t=t, n=n, kappa=inner(tp, n))


def _vec(x1, x2, x3):
    return np.array([x1, x2, x3, 0.0])


def constant_curvature_curve(case, kappa0, label=""):
    """Closed-form unit-speed curve with constant signed curvature ``kappa0``.

    These are orbits of one-parameter isometry groups of the pseudo-sphere:
    rotations, boosts, or null rotations depending on where |kappa0| sits
    relative to 1.  All maps are analytic, so the curves carry exact first
    and second derivatives.
    """
    k = float(kappa0)
    if case is CurveCase.CASE_A:
        if abs(k) < 1.0:
            c = 1.0 / math.sqrt(1.0 - k * k)

            def point(v):
                return _vec(c * math.cos(v / c), c * math.sin(v / c), -k * c)

            def tangent(v):
                return _vec(-math.sin(v / c), math.cos(v / c), 0.0)

            def tangent_rate(v):
                return _vec(-math.cos(v / c) / c, -math.sin(v / c) / c, 0.0)

        elif abs(k) == 1.0:

            def point(v):
                return _vec(1.0 - v * v / 2.0, v, -k * v * v / 2.0)

            def tangent(v):
                return _vec(-v, 1.0, -k * v)

            def tangent_rate(v):
                return _vec(-1.0, 0.0, -k)

        else:
            r = 1.0 / math.sqrt(k * k - 1.0)
            d = k * r

            def point(v):
                return _vec(r * math.sinh(v / r), d, r * math.cosh(v / r))

            def tangent(v):
                return _vec(math.cosh(v / r), 0.0, math.sinh(v / r))

            def tangent_rate(v):
                return _vec(math.sinh(v / r) / r, 0.0, math.cosh(v / r) / r)

    elif case is CurveCase.CASE_B:
        mu = math.sqrt(1.0 + k * k)

        def point(v):
            return _vec(-k / mu, math.cosh(v * mu) / mu, math.sinh(v * mu) / mu)

        def tangent(v):
            return _vec(0.0, math.sinh(v * mu), math.cosh(v * mu))

        def tangent_rate(v):
            return _vec(0.0, mu * math.cosh(v * mu), mu * math.sinh(v * mu))

    elif case is CurveCase.CASE_C:
        if abs(k) > 1.0:
            s = math.sqrt(k * k - 1.0)
            r = math.copysign(1.0, k) / s
            c3 = abs(k) / s

            def point(v):
                return _vec(r * math.cos(v / r), r * math.sin(v / r), c3)

            def tangent(v):
                return _vec(-math.sin(v / r), math.cos(v / r), 0.0)

            def tangent_rate(v):
                return _vec(-math.cos(v / r) / r, -math.sin(v / r) / r, 0.0)

        elif abs(k) == 1.0:

            def point(v):
                return _vec(-k * v * v / 2.0, v, 1.0 + v * v / 2.0)

            def tangent(v):
                return _vec(-k * v, 1.0, v)

            def tangent_rate(v):
                return _vec(-k, 0.0, 1.0)

        else:
            r = 1.0 / math.sqrt(1.0 - k * k)
            d = -k * r

            def point(v):
                return _vec(r * math.sinh(v / r), d, r * math.cosh(v / r))

            def tangent(v):
                return _vec(math.cosh(v / r), 0.0, math.sinh(v / r))

            def tangent_rate(v):
                return _vec(math.sinh(v / r) / r, 0.0, math.cosh(v / r) / r)

    else:  # pragma: no cover
        raise ValueError(f"unknown case {case}")

    curve = SphericalCurve(
        case=case,
        point=point,
        tangent=tangent,
        tangent_rate=tangent_rate,
        kappa=lambda v: k,
        kappa_rate=lambda v: 0.0,
        label=label or f"const-kappa({case.value}, {k:g})",
    )
    validate_spherical_curve(curve, v_samples=np.linspace(-1.0, 1.0, 9))
    return curve


def parallel_circle(case, w1_0):
    """Coordinate-circle family of the standard sphere parametrizations.

    Constant-curvature orbits reparametrized to unit speed; the latitude-like
    parameter ``w1_0`` maps to the curvature as tanh (case A), sinh (case B)
    and coth (case C).  The case C circle shrinks to a point at w1_0 = 0.
    """
    w = float(w1_0)
    if case is CurveCase.CASE_A:
        k = math.tanh(w)
    elif case is CurveCase.CASE_B:
        k = math.sinh(w)
    else:
        if math.sinh(w) == 0.0:
            raise DegenerateCurve("circle degenerates: sinh(w1_0) = 0")
        k = math.cosh(w) / math.sinh(w)
    return constant_curvature_curve(
        case, k, label=f"parallel-circle({case.value}, w1={w:g})"
    )


def standard_initial_frame(case):
    """Orthonormal start frame with det[l, t, n] > 0 for each case."""
    if case is CurveCase.CASE_A:
        vals = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    elif case is CurveCase.CASE_B:
        vals = [(1, 0, 0), (0, 0, 1), (0, -1, 0)]
    else:
        vals = [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
    return tuple(_vec(*v) for v in vals)


def _frenet_rhs(case, k, state):
    l, t, n = state[0:3], state[3:6], state[6:9]
    c_l = -case.tangent_sign / case.sphere_sign
    c_n = k / case.normal_sign
    dl = t
    dt = c_l * l + c_n * n
    dn = (-k / case.tangent_sign) * t
    return np.concatenate([dl, dt, dn])


def _reorthonormalize(case, state):
    triple = [
        np.append(state[0:3], 0.0),
        np.append(state[3:6], 0.0),
        np.append(state[6:9], 0.0),
    ]
    signs = (case.sphere_sign, case.tangent_sign, case.normal_sign)
    l, t, n = orthonormalize_frame(triple, signs)
    return np.concatenate([l[:3], t[:3], n[:3]])


class _HermiteInterpolant:
    """Piecewise cubic Hermite dense output over fixed integrator nodes."""

    def __init__(self, nodes, states, derivs):
        self.nodes = np.asarray(nodes)
        self.states = np.asarray(states)
        self.derivs = np.asarray(derivs)

    def __call__(self, v):
        nodes = self.nodes
        if not nodes[0] <= v <= nodes[-1]:
            raise ValueError(f"parameter {v} outside integrated span")
        i = min(np.searchsorted(nodes, v, side="right") - 1, len(nodes) - 2)
        i = max(i, 0)
        h = nodes[i + 1] - nodes[i]
        s = (v - nodes[i]) / h
        y0, y1 = self.states[i], self.states[i + 1]
        d0, d1 = self.derivs[i] * h, self.derivs[i + 1] * h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1


def curve_from_kappa(
    case,
    kappa,
    init_frame=None,
    v_span=(0.0, 2.0 * math.pi),
    step=1e-3,
    frame_tol=1e-10,
):
    """Integrate the Frenet system for a prescribed curvature map.

    Classical fixed-step RK4 on the frame {l, t, n} with indefinite
    Gram-Schmidt re-orthonormalization after every step, which keeps the
    curve on its sphere and the frame pseudo-orthonormal over long spans.
    """
    if init_frame is None:
        init_frame = standard_initial_frame(case)
    l0, t0, n0 = (np.asarray(x, dtype=float) for x in init_frame)
    signs = (case.sphere_sign, case.tangent_sign, case.normal_sign)
    for vec, sign in zip((l0, t0, n0), signs):
        if abs(inner(vec, vec) - sign) > frame_tol:
            raise FrameDegenerate("initial frame is not pseudo-orthonormal")
    for a, b in ((l0, t0), (l0, n0), (t0, n0)):
        if abs(inner(a, b)) > frame_tol:
            raise FrameDegenerate("initial frame is not pseudo-orthogonal")

    lo, hi = float(v_span[0]), float(v_span[1])
    if not lo <= 0.0 <= hi:
        raise ValueError("v_span must contain 0, the anchoring parameter")
    if step <= 0:
        raise IntegrationFailure("step size underflow")

    def march(v_end):
        span = abs(v_end)
        if span == 0.0:
            y = np.concatenate([l0[:3], t0[:3], n0[:3]])
            return [0.0], [y], [_frenet_rhs(case, float(kappa(0.0)), y)]
        n_steps = max(1, math.ceil(span / step))
        if n_steps > 50_000_000:
            raise IntegrationFailure("step size underflow")
        h = v_end / n_steps
        v = 0.0
        y = np.concatenate([l0[:3], t0[:3], n0[:3]])
        nodes, states, derivs = [v], [y], [_frenet_rhs(case, float(kappa(v)), y)]
        for _ in range(n_steps):
            k1 = _frenet_rhs(case, float(kappa(v)), y)
            k2 = _frenet_rhs(case, float(kappa(v + h / 2)), y + h / 2 * k1)
            k3 = _frenet_rhs(case, float(kappa(v + h / 2)), y + h / 2 * k2)
            k4 = _frenet_rhs(case, float(kappa(v + h)), y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            v += h
            y = _reorthonormalize(case, y)
            nodes.append(v)
            states.append(y)
            derivs.append(_frenet_rhs(case, float(kappa(v)), y))
        return nodes, states, derivs

    nodes, states, derivs = march(hi)
    if lo < 0.0:
        nodes_b, states_b, derivs_b = march(lo)
        nodes = list(reversed(nodes_b[1:])) + nodes
        states = list(reversed(states_b[1:])) + states
        derivs = list(reversed(derivs_b[1:])) + derivs
    interp = _HermiteInterpolant(nodes, states, derivs)

    def point(v):
        return np.append(interp(v)[0:3], 0.0)

    def tangent(v):
        return np.append(interp(v)[3:6], 0.0)

    return SphericalCurve(
        case=case,
        point=point,
        tangent=tangent,
        kappa=lambda v: float(kappa(v)),
        v_domain=(lo, hi),
        label=f"integrated({case.value})",
    )


def validate_spherical_curve(
    curve, v_samples=None, sphere_tol=1e-9, speed_tol=1e-8, ortho_tol=1e-8
):
    """Sample-check the sphere constraint, unit speed and frame orthogonality."""
    if v_samples is None:
        lo, hi = curve.v_domain
        if not (math.isfinite(lo) and math.isfinite(hi)):
            lo, hi = -1.0, 1.0
        v_samples = np.linspace(lo, hi, 17)
    case = curve.case
    for v in v_samples:
        l, t = curve.point(v), curve.tangent(v)
        n = curve.normal(v)
        if abs(inner(l, l) - case.sphere_sign) > sphere_tol:
            raise FrameDegenerate(f"curve leaves its sphere at v={v}")
        if abs(inner(t, t) - case.tangent_sign) > speed_tol:
            raise FrameDegenerate(f"curve is not unit speed at v={v}")
        for a, b in ((l, t), (l, n), (t, n)):
            if abs(inner(a, b)) > ortho_tol:
                raise FrameDegenerate(f"frame not orthogonal at v={v}")
    return True
