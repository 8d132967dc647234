"""Command-line front end.

Subcommands:
    sample         sample a family instance to the surface CSV schema
    verify         run the parallelism check for one instance, JSON verdict
    solve-profile  integrate a profile family, CSV with residual columns
    sweep          batch verify over comma-separated parameter lists

Exit codes: 0 success/Verified, 2 configuration error, 3 domain exit inside
the requested range, 4 lightlike mean curvature vector.  Identical
configurations produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classifier_verifier import (
    DEFAULTS,
    GridSpec,
    build_instance,
    perturb_instance,
    run_check,
    scan_family_grid,
)
from .errors import DomainExit, GeometryError, InvalidParams, LightlikeH
from .meridian_profiles import (
    ANALYTIC5_TAGS,
    FLAT_TAGS,
    QUARTIC_TAGS,
    TheoremTag,
    integrate_profile,
    verify_profile_ode,
    write_profile_csv,
)
from .meridian_surfaces import write_surface_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_LIGHTLIKE = 4


def _sign(text):
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"expected + or -, got {text!r}")


def _grid(text):
    try:
        nu, nv = text.lower().split("x")
        return int(nu), int(nv)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from exc


def _range(text):
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats") from exc


def _add_instance_flags(p, lists=False):
    num = _float_list if lists else float
    p.add_argument("--theorem", required=True, help="family tag, e.g. T41i, T51ii")
    p.add_argument("--family", choices=["Ma", "Mb", "Mpp"], help="cross-check only")
    p.add_argument("--a", type=num)
    p.add_argument("--b", type=num)
    p.add_argument("--c", type=num)
    p.add_argument("--kappa", type=num, help="constant spherical curvature")
    p.add_argument("--f0", type=float, help="initial radius for integrated families")
    p.add_argument("--sign-inner", type=_sign, default=1)
    p.add_argument("--sign-outer", type=_sign, default=1)
    p.add_argument("--sign-g", type=_sign, default=1)
    p.add_argument("--grid", type=_grid, default=(20, 20))
    p.add_argument("--u-range", type=_range)
    p.add_argument("--v-range", type=_range, default=(-1.0, 1.0))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--h-step", type=float, default=1e-4)
    p.add_argument("--out", help="output path (default stdout for JSON)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lorentz-meridian",
        description="Meridian surfaces in the neutral-metric 4-space: "
        "sampling, profile integration and parallelism verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a surface instance to CSV/JSON")
    _add_instance_flags(p)

    p = sub.add_parser("verify", help="check one instance, emit a JSON verdict")
    _add_instance_flags(p)
    p.add_argument("--perturb", type=float, default=0.0, help="sinusoidal f offset")
    p.add_argument("--expect-violated", action="store_true")
    p.add_argument("--allow-quasi-minimal", action="store_true")

    p = sub.add_parser("solve-profile", help="integrate a profile family to CSV")
    p.add_argument("--theorem", required=True)
    p.add_argument("--a", type=float)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--f0", type=float)
    p.add_argument("--u-range", type=_range, default=(-0.5, 0.5))
    p.add_argument("--sign-inner", type=_sign, default=1)
    p.add_argument("--sign-outer", type=_sign, default=1)
    p.add_argument("--sign-g", type=_sign, default=1)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("sweep", help="verify over parameter lists")
    _add_instance_flags(p, lists=True)
    return parser


def _tag(text):
    try:
        return TheoremTag(text)
    except ValueError:
        raise InvalidParams(f"unknown family tag {text!r}")


def _collect_params(args, lists=False):
    out = {}
    for attr, key in (("a", "a"), ("b", "b"), ("c", "c"), ("kappa", "kappa0")):
        val = getattr(args, attr, None)
        if val is not None:
            out[key] = val
    if getattr(args, "f0", None) is not None:
        out["f0"] = args.f0
    if getattr(args, "u_range", None) is not None:
        out["u_range"] = args.u_range
    for key in ("sign_inner", "sign_outer", "sign_g"):
        out[key] = getattr(args, key)
    return out


def _config_dict(args):
    cfg = {}
    for key, val in sorted(vars(args).items()):
        if key == "func" or val is None:
            continue
        cfg[key] = list(val) if isinstance(val, tuple) else val
    return cfg


def _write_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _check_family_flag(args, instance):
    if args.family and args.family != instance.family.value:
        raise InvalidParams(
            f"tag {instance.tag.value} belongs to family "
            f"{instance.family.value}, not {args.family}"
        )


def cmd_sample(args):
    tag = _tag(args.theorem)
    requested_range = args.u_range
    inst = build_instance(
        tag,
        params=_collect_params(args),
        v_range=args.v_range,
        nu=args.grid[0],
        nv=args.grid[1],
    )
    _check_family_flag(args, inst)
    truncated = False
    if requested_range is not None:
        got = inst.surface.profile.u_domain
        if got[0] > requested_range[0] + 1e-12 or got[1] < requested_range[1] - 1e-12:
            truncated = True
    out = args.out or f"sample-{tag.value}.csv"
    us, vs = inst.grid.u_nodes(), inst.grid.v_nodes()
    if args.format == "csv":
        write_surface_csv(inst.surface, us, vs, out)
    else:
        import os

        from .meridian_surfaces import SURFACE_CSV_HEADER

        cols = SURFACE_CSV_HEADER.split(",")
        rows = []
        tmp_path = out + ".tmp"
        write_surface_csv(inst.surface, us, vs, tmp_path)
        with open(tmp_path, encoding="utf-8") as fh:
            next(fh)
            for line in fh:
                rows.append(dict(zip(cols, (float(x) for x in line.split(",")))))
        os.remove(tmp_path)
        _write_json(out, rows)
    sidecar = _config_dict(args)
    sidecar["achieved_u_range"] = list(inst.surface.profile.u_domain)
    if truncated:
        sidecar["warning"] = "requested u-range truncated at a domain exit"
    _write_json(out + ".json", sidecar)
    return EXIT_DOMAIN if truncated else EXIT_OK


def cmd_verify(args):
    tag = _tag(args.theorem)
    inst = build_instance(
        tag,
        params=_collect_params(args),
        v_range=args.v_range,
        nu=args.grid[0],
        nv=args.grid[1],
    )
    _check_family_flag(args, inst)
    if args.perturb:
        inst = perturb_instance(inst, delta=args.perturb)

    quasi_points = [
        (u, v)
        for u in inst.grid.u_nodes()
        for v in inst.grid.v_nodes()
        if inst.surface.is_quasi_minimal(u, v)
    ]
    if quasi_points and not args.allow_quasi_minimal:
        raise LightlikeH(
            f"quasi-minimal at {len(quasi_points)} grid points; "
            "rerun with --allow-quasi-minimal to report anyway"
        )

    check = run_check(inst, tol=args.tol, h_step=args.h_step)
    _write_json(args.out, check.as_dict())
    expected = "Violated" if args.expect_violated else "Verified"
    return EXIT_OK if check.verdict == expected else 1


def cmd_solve_profile(args):
    tag = _tag(args.theorem)
    if tag in FLAT_TAGS or tag in ANALYTIC5_TAGS:
        raise InvalidParams(
            f"{tag.value} is a closed form; solve-profile integrates the "
            "first-order families only"
        )
    if tag in QUARTIC_TAGS and args.a is None:
        raise InvalidParams(f"{tag.value} requires --a")
    if tag not in QUARTIC_TAGS and args.c == 0.0:
        raise InvalidParams(f"{tag.value} requires a nonzero --c")
    defaults = DEFAULTS[tag]
    f0 = args.f0 if args.f0 is not None else defaults["f0"]
    profile = integrate_profile(
        tag,
        a=args.a if args.a is not None else 0.0,
        c=args.c,
        f0=f0,
        u_span=args.u_range,
        sign_inner=args.sign_inner,
        sign_outer=args.sign_outer,
        sign_g=args.sign_g,
    )
    write_profile_csv(profile, args.out, n=args.samples)
    _write_json(
        args.out + ".json",
        {
            **_config_dict(args),
            "achieved_u_range": list(profile.u_domain),
            "max_ode_residual": verify_profile_ode(profile),
        },
    )
    if profile.domain_exit:
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_sweep(args):
    tag = _tag(args.theorem)
    ranges = {}
    for attr, key in (("a", "a"), ("b", "b"), ("c", "c"), ("kappa", "kappa0")):
        vals = getattr(args, attr)
        if vals is not None:
            ranges[key] = vals
    if not ranges:
        raise InvalidParams("sweep needs at least one of --a/--b/--c/--kappa lists")
    grid = None
    if args.u_range is not None:
        grid = GridSpec(
            u_range=args.u_range,
            v_range=args.v_range,
            nu=args.grid[0],
            nv=args.grid[1],
        )
    checks = scan_family_grid(tag, ranges, grid=grid, tol=args.tol, h_step=args.h_step)
    payload = {
        "theorem": tag.value,
        "count": len(checks),
        "verified": sum(c.verified for c in checks),
        "max_residual": max(
            (max((x for x in c.residuals.values() if isinstance(x, float)), default=0.0))
            for c in checks
        )
        if checks
        else 0.0,
        "checks": [c.as_dict() for c in checks],
    }
    _write_json(args.out, payload)
    return EXIT_OK if all(c.verified for c in checks) else 1


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_CONFIG
    handlers = {
        "sample": cmd_sample,
        "verify": cmd_verify,
        "solve-profile": cmd_solve_profile,
        "sweep": cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except LightlikeH as exc:
        _write_json(None, {"error": "lightlike-H", "reason": str(exc)})
        return EXIT_LIGHTLIKE
    except DomainExit as exc:
        _write_json(
            None,
            {
                "error": "domain-exit",
                "reason": str(exc),
                "admissible": [list(pair) for pair in exc.admissible],
            },
        )
        return EXIT_DOMAIN
    except (InvalidParams, GeometryError, ValueError) as exc:
        _write_json(None, {"error": type(exc).__name__, "reason": str(exc)})
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
