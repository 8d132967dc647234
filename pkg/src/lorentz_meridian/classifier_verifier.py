"""Executable checks for the classification families.

Each family tag is checked in the direction available numerically: a
constructed instance must satisfy the parallelism property it was classified
by (residuals below tolerance on a grid), and a perturbed instance must
fail it by a clear margin.  Every residual is computed twice, once from the
closed-form component derivatives and once from the finite-difference
oracle; a verdict of Verified requires both pipelines to agree.

"Not parallel" is certified by a strict margin (a residual above 10x the
tolerance somewhere on the grid) rather than mere nonzero, so floating
noise cannot manufacture a negative certificate.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .errors import GeometryError, InvalidParams, LightlikeH
from .meridian_profiles import (
    ANALYTIC5_TAGS,
    FLAT_TAGS,
    TAG_GAUGE,
    TheoremTag,
    analytic_profile_T5i,
    flat_profile,
    integrate_profile,
    perturbed_profile,
)
from .meridian_surfaces import FamilyTag, MeridianSurface
from .numerical_oracle import (
    Immersion,
    mean_curvature_field,
    normal_derivative,
    normalized_mean_curvature_field,
)
from .pseudo_linalg import TAU_NULL, inner
from .spherical_curves import constant_curvature_curve

__all__ = [
    "GridSpec",
    "TheoremCheck",
    "Instance",
    "FAMILY_OF_TAG",
    "build_instance",
    "perturb_instance",
    "check_parallel_H",
    "check_parallel_H0_not_H",
    "run_check",
    "scan_family_grid",
    "as_immersion",
]

FAMILY_OF_TAG = {
    TheoremTag.T41I: FamilyTag.MA_PRIME,
    TheoremTag.T41II: FamilyTag.MA_PRIME,
    TheoremTag.T42: FamilyTag.MB_PRIME,
    TheoremTag.T43I: FamilyTag.M_DOUBLE_PRIME,
    TheoremTag.T43II: FamilyTag.M_DOUBLE_PRIME,
    TheoremTag.T51I: FamilyTag.MA_PRIME,
    TheoremTag.T51II: FamilyTag.MA_PRIME,
    TheoremTag.T52I: FamilyTag.MB_PRIME,
    TheoremTag.T52II: FamilyTag.MB_PRIME,
    TheoremTag.T53I: FamilyTag.M_DOUBLE_PRIME,
    TheoremTag.T53II: FamilyTag.M_DOUBLE_PRIME,
}

PARALLEL_H_TAGS = {
    TheoremTag.T41I,
    TheoremTag.T41II,
    TheoremTag.T42,
    TheoremTag.T43I,
    TheoremTag.T43II,
}

# Workable defaults per tag: parameters inside the admissible regions and
# parameter spans that keep denominators away from their boundaries.
DEFAULTS = {
    TheoremTag.T41I: dict(a=1.0, b=0.0, kappa0=0.5, u_range=(-1.0, 1.0)),
    TheoremTag.T41II: dict(
        a=1.0, c=0.0, kappa0=0.0, f0=math.cosh(0.3), u_range=(-0.25, 0.75)
    ),
    TheoremTag.T42: dict(
        a=1.0, c=0.0, kappa0=0.0, f0=math.sinh(1.0), u_range=(-0.45, 1.0)
    ),
    TheoremTag.T43I: dict(a=1.0, b=0.0, kappa0=2.0, u_range=(-1.0, 1.0)),
    TheoremTag.T43II: dict(
        a=1.0, c=0.0, kappa0=0.0, f0=math.sin(0.8), u_range=(-0.55, 0.6)
    ),
    TheoremTag.T51I: dict(a=0.0, b=1.0, kappa0=2.0, u_range=(-0.9, 0.9)),
    TheoremTag.T51II: dict(c=2.0, a=0.0, kappa0=1.0, f0=1.0, u_range=(-0.5, 1.0)),
    TheoremTag.T52I: dict(a=2.0, b=1.0, kappa0=1.0, u_range=(0.0, 1.5)),
    TheoremTag.T52II: dict(c=2.0, a=0.0, kappa0=1.0, f0=1.0, u_range=(-0.3, 1.0)),
    TheoremTag.T53I: dict(a=0.0, b=1.0, kappa0=2.0, u_range=(-1.0, 1.0)),
    TheoremTag.T53II: dict(c=1.0, a=2.0, kappa0=2.0, f0=1.15, u_range=(-0.2, 0.3)),
}
DEFAULT_V_RANGE = (-1.0, 1.0)


@dataclass(frozen=True)
class GridSpec:
    u_range: tuple[float, float]
    v_range: tuple[float, float] = DEFAULT_V_RANGE
    nu: int = 20
    nv: int = 20

    def __post_init__(self):
        if self.nu < 1 or self.nv < 1:
            raise InvalidParams("grid must have at least one node per axis")

    def u_nodes(self, pad=0.0):
        lo, hi = self.u_range
        return np.linspace(lo + pad, hi - pad, self.nu)

    def v_nodes(self, pad=0.0):
        lo, hi = self.v_range
        return np.linspace(lo + pad, hi - pad, self.nv)

    def as_dict(self):
        return {
            "u_range": list(self.u_range),
            "v_range": list(self.v_range),
            "nu": self.nu,
            "nv": self.nv,
        }


@dataclass(frozen=True)
class Instance:
    """A constructed family instance ready for checking."""

    tag: TheoremTag
    surface: MeridianSurface
    grid: GridSpec
    params: Mapping[str, float]

    @property
    def family(self):
        return self.surface.family


@dataclass(frozen=True)
class TheoremCheck:
    theorem: str
    family: str
    params: Mapping[str, float]
    branch_signs: Mapping[str, float]
    grid: Mapping
    tolerances: Mapping[str, float]
    residuals: Mapping[str, float]
    verdict: str
    quasi_minimal: bool = False
    diagnostics: tuple[str, ...] = ()

    @property
    def verified(self):
        return self.verdict == "Verified"

    def as_dict(self):
        return {
            "theorem": self.theorem,
            "family": self.family,
            "params": dict(self.params),
            "branch_signs": dict(self.branch_signs),
            "grid": dict(self.grid),
            "tolerances": dict(self.tolerances),
            "residuals": dict(self.residuals),
            "verdict": self.verdict,
            "quasi_minimal": self.quasi_minimal,
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self, **kwargs):
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.as_dict(), **kwargs)


def build_instance(tag, params=None, v_range=DEFAULT_V_RANGE, nu=20, nv=20, **overrides):
    """Construct the surface of a classification family instance.

    ``params`` / keyword overrides replace the tag's defaults; recognized
    keys are a, b, c, kappa0, f0, u_range, sign_inner, sign_outer, sign_g.
    The spherical curvature is pinned to zero for the flat-curve families
    and must be nonzero for the constant-direction ones.
    """
    tag = TheoremTag(tag) if not isinstance(tag, TheoremTag) else tag
    merged = dict(DEFAULTS[tag])
    merged.update(params or {})
    merged.update(overrides)
    kappa0 = float(merged.get("kappa0", 0.0))
    u_range = tuple(merged["u_range"])
    signs = {
        k: int(merged.get(k, 1)) for k in ("sign_inner", "sign_outer", "sign_g")
    }

    if tag in (TheoremTag.T41II, TheoremTag.T42, TheoremTag.T43II) and kappa0 != 0.0:
        raise InvalidParams(
            f"{tag.value} requires a curve with zero spherical curvature"
        )
    if tag not in PARALLEL_H_TAGS and kappa0 == 0.0:
        raise InvalidParams(f"{tag.value} requires nonzero spherical curvature")
    if tag in (TheoremTag.T51II, TheoremTag.T52II, TheoremTag.T53II):
        c = float(merged.get("c", 0.0))
        if c == 0.0:
            raise InvalidParams(f"{tag.value} requires c != 0")
        if c * c == kappa0 * kappa0:
            raise LightlikeH(
                f"{tag.value}: c^2 = kappa0^2 makes <H, H> = 0 identically"
            )

    if tag in FLAT_TAGS:
        profile = flat_profile(
            TAG_GAUGE[tag],
            float(merged["a"]),
            float(merged.get("b", 0.0)),
            signs["sign_g"],
        )
    elif tag in ANALYTIC5_TAGS:
        profile = analytic_profile_T5i(
            tag,
            float(merged["a"]),
            float(merged["b"]),
            c_int=float(merged.get("c", 0.0)),
            sign_g=signs["sign_g"],
            u_domain=u_range,
        )
    else:
        profile = integrate_profile(
            tag,
            a=float(merged.get("a", 0.0)),
            c=float(merged.get("c", 0.0)),
            f0=float(merged["f0"]),
            u_span=u_range,
            sign_inner=signs["sign_inner"],
            sign_outer=signs["sign_outer"],
            sign_g=signs["sign_g"],
        )
        lo, hi = profile.u_domain
        # back away from truncated edges, where the radius or a gauge root
        # degenerates and quotients like kappa/f blow up
        margin = 0.02 * (hi - lo)
        if profile.exited_left:
            lo += margin
        if profile.exited_right:
            hi -= margin
        u_range = (lo, hi)

    family = FAMILY_OF_TAG[tag]
    curve = constant_curvature_curve(_case_of(family), kappa0)
    surface = MeridianSurface(family=family, curve=curve, profile=profile)
    grid = GridSpec(u_range=tuple(u_range), v_range=tuple(v_range), nu=nu, nv=nv)
    report_params = {
        k: float(merged[k]) for k in ("a", "b", "c", "kappa0", "f0") if k in merged
    }
    report_params.update({k: float(s) for k, s in signs.items()})
    return Instance(tag=tag, surface=surface, grid=grid, params=report_params)


def _case_of(family):
    from .meridian_surfaces import _FAMILY_DATA

    return _FAMILY_DATA[family].curve_case


def perturb_instance(instance, delta=1e-2, frequency=1.0):
    """Same curve, radius perturbed by delta*sin(u) with the gauge re-imposed."""
    lo, hi = instance.grid.u_range
    base = instance.surface.profile
    if math.isinf(base.u_domain[0]) or math.isinf(base.u_domain[1]):
        base = replace(base, u_domain=(lo, hi))
    prof = perturbed_profile(base, delta=delta, frequency=frequency)
    surface = MeridianSurface(
        family=instance.family, curve=instance.surface.curve, profile=prof
    )
    params = dict(instance.params)
    params["perturbation"] = delta
    return Instance(
        tag=instance.tag, surface=surface, grid=instance.grid, params=params
    )


def as_immersion(surface, grid=None):
    """Expose a surface to the oracle, analytic partials attached."""
    return Immersion(
        z=surface.immerse,
        du=surface.z_u,
        dv=surface.z_v,
        duu=surface.z_uu,
        duv=surface.z_uv,
        dvv=surface.z_vv,
        u_domain=None if grid is None else grid.u_range,
        v_domain=None if grid is None else grid.v_range,
    )


def _oracle_components(surface, im, u, v, field, direction, h_step, richardson=True):
    d_vec = normal_derivative(
        im, u, v, field, direction, h_step=h_step, richardson=richardson
    )
    _, _, n1, n2 = surface.frame(u, v)
    c1 = inner(d_vec, n1) / inner(n1, n1)
    c2 = inner(d_vec, n2) / inner(n2, n2)
    return math.hypot(c1, c2)


def _grid_pad(grid, h_step):
    pu = min(4.0 * h_step, 0.05 * (grid.u_range[1] - grid.u_range[0]))
    pv = min(4.0 * h_step, 0.05 * (grid.v_range[1] - grid.v_range[0]))
    return pu, pv


def check_parallel_H(
    surface,
    grid,
    tol=1e-6,
    h_step=1e-4,
    tau_null=TAU_NULL,
    oracle_subsample=3,
    theorem="",
    params=None,
):
    """Does the surface have parallel mean curvature direction and rate?

    Closed-form residuals (components of D_X H, D_Y H) run on the full grid;
    the oracle residuals run on every ``oracle_subsample``-th node.  The
    three scalar conditions behind the classification - constant spherical
    curvature, kappa * f' = 0 and a constant n2 coefficient - are reported
    individually.
    """
    pu, pv = _grid_pad(grid, h_step)
    us, vs = grid.u_nodes(pu), grid.v_nodes(pv)
    prof, curve = surface.profile, surface.curve

    cf_dxh = cf_dyh = 0.0
    k_max = 0.0
    kappa_rate_max = kappa_fprime_max = q_rate_max = 0.0
    hh_values = []
    quasi = False
    for u in us:
        q_rate_max = max(q_rate_max, abs(surface.n2_coefficient_rate(u)))
        k_max = max(k_max, abs(surface.gauss_curvature(u)))
        for v in vs:
            dxh, dyh = surface.mean_curvature_derivatives(u, v)
            cf_dxh = max(cf_dxh, dxh.norm())
            cf_dyh = max(cf_dyh, dyh.norm())
            hh_values.append(surface.mean_curvature_squared(u, v))
            quasi = quasi or surface.is_quasi_minimal(u, v, tau_null)
            kappa_rate_max = max(kappa_rate_max, abs(curve.kappa_derivative(v)))
            kappa_fprime_max = max(
                kappa_fprime_max, abs(curve.kappa(v) * prof.f1(u))
            )

    im = as_immersion(surface, grid)
    h_field = mean_curvature_field(im, h_step=h_step, use_analytic=True)
    or_dxh = or_dyh = 0.0
    for u in us[::oracle_subsample]:
        for v in vs[::oracle_subsample]:
            or_dxh = max(
                or_dxh,
                _oracle_components(surface, im, u, v, h_field, (1.0, 0.0), h_step),
            )
            or_dyh = max(
                or_dyh,
                _oracle_components(
                    surface, im, u, v, h_field, (0.0, 1.0 / prof.f(u)), h_step
                ),
            )

    residuals = {
        "max_DXH": cf_dxh,
        "max_DYH": cf_dyh,
        "oracle_max_DXH": or_dxh,
        "oracle_max_DYH": or_dyh,
        "max_DXH0": None,
        "max_DYH0": None,
        "K_max": k_max,
        "HH_stddev": statistics.pstdev(hh_values),
        "HH_mean": statistics.fmean(hh_values),
        "kappa_rate_max": kappa_rate_max,
        "kappa_fprime_max": kappa_fprime_max,
        "n2_coeff_rate_max": q_rate_max,
    }
    ok = max(cf_dxh, cf_dyh, or_dxh, or_dyh) <= tol
    diagnostics = []
    if not ok:
        diagnostics.append(
            f"max parallel-H residual {max(cf_dxh, cf_dyh, or_dxh, or_dyh):.3e} "
            f"exceeds tol {tol:.1e}"
        )
    if quasi:
        diagnostics.append("mean curvature vector is lightlike (quasi-minimal)")
    return TheoremCheck(
        theorem=theorem,
        family=surface.family.value,
        params=dict(params or {}),
        branch_signs=dict(surface.profile.branch_signs),
        grid=grid.as_dict(),
        tolerances={"tol": tol, "h_step": h_step, "tau_null": tau_null},
        residuals=residuals,
        verdict="Verified" if ok else "Violated",
        quasi_minimal=quasi,
        diagnostics=tuple(diagnostics),
    )


def check_parallel_H0_not_H(
    surface,
    grid,
    tol=1e-6,
    h_step=1e-4,
    tau_null=TAU_NULL,
    oracle_subsample=3,
    theorem="",
    params=None,
):
    """Parallel normalized direction, while H itself fails to be parallel.

    Raises LightlikeH if <H, H> degenerates anywhere on the grid (the
    normalized direction is then undefined and the hypotheses fail).
    Verified needs all D H0 residuals within tol AND a D H residual above
    10*tol somewhere.
    """
    pu, pv = _grid_pad(grid, h_step)
    us, vs = grid.u_nodes(pu), grid.v_nodes(pv)

    for u in us:
        for v in vs:
            hh = surface.mean_curvature_squared(u, v)
            if abs(hh) <= tau_null:
                raise LightlikeH(
                    f"<H, H> = {hh:.3e} at (u, v) = ({u:g}, {v:g})"
                )

    cf_dxh = cf_dyh = cf_dxh0 = cf_dyh0 = 0.0
    a_vals, b_vals, hh_vals = [], [], []
    for u in us:
        for v in vs:
            dxh, dyh, dxh0, dyh0 = surface.normal_connection_derivatives(
                u, v, tau_null
            )
            cf_dxh = max(cf_dxh, dxh.norm())
            cf_dyh = max(cf_dyh, dyh.norm())
            cf_dxh0 = max(cf_dxh0, dxh0.norm())
            cf_dyh0 = max(cf_dyh0, dyh0.norm())
            nm = surface.normalized_mean_curvature(u, v, tau_null)
            a_vals.append(nm.a)
            b_vals.append(nm.b)
            hh_vals.append(surface.mean_curvature_squared(u, v))

    im = as_immersion(surface, grid)
    h0_field = normalized_mean_curvature_field(
        im, h_step=h_step, use_analytic=True, tol=tau_null
    )
    h_field = mean_curvature_field(im, h_step=h_step, use_analytic=True)
    or_dxh0 = or_dyh0 = or_dxh = or_dyh = 0.0
    for u in us[::oracle_subsample]:
        y_dir = (0.0, 1.0 / surface.profile.f(u))
        for v in vs[::oracle_subsample]:
            or_dxh0 = max(
                or_dxh0,
                _oracle_components(surface, im, u, v, h0_field, (1.0, 0.0), h_step),
            )
            or_dyh0 = max(
                or_dyh0,
                _oracle_components(surface, im, u, v, h0_field, y_dir, h_step),
            )
            or_dxh = max(
                or_dxh,
                _oracle_components(surface, im, u, v, h_field, (1.0, 0.0), h_step),
            )
            or_dyh = max(
                or_dyh,
                _oracle_components(surface, im, u, v, h_field, y_dir, h_step),
            )

    residuals = {
        "max_DXH": cf_dxh,
        "max_DYH": cf_dyh,
        "max_DXH0": cf_dxh0,
        "max_DYH0": cf_dyh0,
        "oracle_max_DXH": or_dxh,
        "oracle_max_DYH": or_dyh,
        "oracle_max_DXH0": or_dxh0,
        "oracle_max_DYH0": or_dyh0,
        "K_max": max(abs(surface.gauss_curvature(u)) for u in us),
        "HH_stddev": statistics.pstdev(hh_vals),
        "A_stddev": statistics.pstdev(a_vals),
        "B_stddev": statistics.pstdev(b_vals),
        "A_mean": statistics.fmean(a_vals),
        "B_mean": statistics.fmean(b_vals),
    }
    h0_parallel = max(cf_dxh0, cf_dyh0, or_dxh0, or_dyh0) <= tol
    h_not_parallel = max(cf_dxh, cf_dyh) > 10.0 * tol
    ok = h0_parallel and h_not_parallel
    diagnostics = []
    if not h0_parallel:
        diagnostics.append("normalized direction is not parallel within tol")
    if not h_not_parallel:
        diagnostics.append(
            "mean curvature vector looks parallel too (no 10x-tol margin)"
        )
    return TheoremCheck(
        theorem=theorem,
        family=surface.family.value,
        params=dict(params or {}),
        branch_signs=dict(surface.profile.branch_signs),
        grid=grid.as_dict(),
        tolerances={"tol": tol, "h_step": h_step, "tau_null": tau_null},
        residuals=residuals,
        verdict="Verified" if ok else "Violated",
        diagnostics=tuple(diagnostics),
    )


def run_check(instance, tol=1e-6, h_step=1e-4, tau_null=TAU_NULL, oracle_subsample=3):
    """Dispatch an instance to the check matching its tag."""
    checker = (
        check_parallel_H if instance.tag in PARALLEL_H_TAGS else check_parallel_H0_not_H
    )
    return checker(
        instance.surface,
        instance.grid,
        tol=tol,
        h_step=h_step,
        tau_null=tau_null,
        oracle_subsample=oracle_subsample,
        theorem=instance.tag.value,
        params=instance.params,
    )


def _param_product(param_ranges):
    keys = list(param_ranges)
    if not keys:
        return
    grids = [list(param_ranges[k]) for k in keys]
    idx = [0] * len(keys)
    while True:
        yield {k: g[i] for k, g, i in zip(keys, grids, idx)}
        for pos in reversed(range(len(keys))):
            idx[pos] += 1
            if idx[pos] < len(grids[pos]):
                break
            idx[pos] = 0
        else:
            return


def scan_family_grid(tag, param_ranges, grid=None, tol=1e-6, h_step=1e-4, **kwargs):
    """One TheoremCheck per parameter tuple; per-instance errors never abort.

    An instance that cannot be built or checked contributes a check with
    verdict "Error" and the reason in its diagnostics.
    """
    tag = TheoremTag(tag) if not isinstance(tag, TheoremTag) else tag
    checks = []
    for combo in _param_product(param_ranges):
        try:
            inst = build_instance(tag, params=combo, **kwargs)
            if grid is not None:
                inst = Instance(
                    tag=inst.tag, surface=inst.surface, grid=grid, params=inst.params
                )
            checks.append(run_check(inst, tol=tol, h_step=h_step))
        except GeometryError as exc:
            checks.append(
                TheoremCheck(
                    theorem=tag.value,
                    family=FAMILY_OF_TAG[tag].value,
                    params={k: float(x) for k, x in combo.items()},
                    branch_signs={},
                    grid=grid.as_dict() if grid is not None else {},
                    tolerances={"tol": tol, "h_step": h_step},
                    residuals={},
                    verdict="Error",
                    diagnostics=(f"{type(exc).__name__}: {exc}",),
                )
            )
    return checks
