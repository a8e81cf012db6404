"""Command-line interface: sampling, kernel tables, identity checks and
linear-statistics experiments, with CSV/JSON output for external plotting.

Exit codes: 0 success, 2 parameter validation, 3 numerical failure,
4 an identity/residual check exceeded its tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import SphefaffianError
from .params import EnsembleParams, Origin, Strong, Weak, droplet
from .pfaffian import pfaffian  # noqa: F401  (re-exported for scripts)

FORMAT_SIG = "%.17g"


def _fmt(x: float) -> str:
    return FORMAT_SIG % x


def _meta_header(meta: dict) -> str:
    lines = [f"# {k}={v}" for k, v in meta.items()]
    return "\n".join(lines) + "\n"


def _write_csv(path: str, meta: dict, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_meta_header(meta))
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _base_meta(args, params: EnsembleParams | None = None) -> dict:
    meta = {"version": __version__, "command": args.command}
    if getattr(args, "seed", None) is not None:
        meta["seed"] = args.seed
    if params is not None:
        geo = droplet(params)
        meta.update(
            N=params.N, n=_fmt(params.n), L=_fmt(params.L),
            r1=_fmt(geo.r1), r2=_fmt(geo.r2),
        )
    return meta


def _params_from_args(args, need_int: bool = False) -> EnsembleParams:
    if getattr(args, "n_over_N_sq", False):
        if args.rho is None:
            raise SystemExit2("--n-over-N-sq requires --rho")
        n = args.N * args.N / (args.rho * args.rho)
        L = n - args.N
        if need_int:
            n, L = round(n), round(L)
        return EnsembleParams(N=args.N, n=float(n), L=float(L))
    if getattr(args, "regime", None):
        reg = _regime_from_args(args)
        pa = reg.params_at(args.N)
        if need_int:
            pa = EnsembleParams(N=pa.N, n=float(round(pa.n)), L=float(round(pa.L)))
        return pa
    if args.n is None:
        raise SystemExit2("missing --n (or a regime specification)")
    return EnsembleParams(N=args.N, n=float(args.n), L=float(args.L))


def _regime_from_args(args):
    kind = args.regime
    if kind == "strong":
        return Strong(a=args.a, b=args.b_regime, p=args.p)
    if kind == "weak":
        if args.rho is None:
            raise SystemExit2("weak regime requires --rho")
        return Weak(rho=args.rho)
    if kind == "origin":
        return Origin(L=float(args.L), b=args.b_regime)
    raise SystemExit2(f"unknown regime {kind!r}")


class SystemExit2(SystemExit):
    def __init__(self, message: str):
        print(f"error: {message}", file=sys.stderr)
        super().__init__(2)


def _parse_grid(spec: str):
    try:
        lo, hi, step = (float(tok) for tok in spec.split(":"))
    except ValueError as exc:
        raise SystemExit2(f"bad grid spec {spec!r}, expected lo:hi:step") from exc
    if step <= 0 or hi < lo:
        raise SystemExit2(f"bad grid spec {spec!r}")
    axis = np.arange(lo, hi + 0.5 * step, step)
    return axis


def _parse_point(spec: str) -> complex:
    re, im = (float(tok) for tok in spec.split(","))
    return complex(re, im)


def _parse_stat(spec: str):
    from .linstat import RadialStatistic

    if spec == "r2":
        return RadialStatistic.r_squared()
    if spec == "r":
        return RadialStatistic.radius()
    if spec.startswith("const:"):
        return RadialStatistic.constant(float(spec.split(":", 1)[1]))
    raise SystemExit2(f"unknown statistic {spec!r} (use r2, r, or const:<value>)")


# -- subcommands --------------------------------------------------------------

def cmd_sample(args) -> int:
    from .sampler import sample_ensemble, to_sphere

    params = _params_from_args(args, need_int=True)
    batch = sample_ensemble(params, trials=args.trials, seed=args.seed)
    meta = _base_meta(args, params)
    meta["trials"] = args.trials
    out = args.out or "eigenvalues"
    rows = []
    for t, lam in enumerate(batch.eigen_pairs):
        for z in lam:
            rows.append((t, float(z.real), float(z.imag)))
    _write_csv(out + ".csv", meta, ["trial", "re", "im"], rows)
    _write_json(out + ".meta.json", meta)
    if args.sphere:
        srows = []
        for t, lam in enumerate(batch.eigen_pairs):
            for z in lam:
                p = to_sphere(z)
                srows.append((t, float(z.real), float(z.imag), p.theta, p.phi))
        _write_csv(out + ".sphere.csv", meta, ["trial", "re", "im", "theta", "phi"], srows)
    print(f"wrote {len(rows)} eigenvalues over {args.trials} trials to {out}.csv")
    return 0


def cmd_kernel(args) -> int:
    from .cdi import limiting_f  # noqa: F401 (regime validation path)
    from .finitekernel import rescaled_kernel
    from .limits import LimitKernelSpec, kappa

    axis = _parse_grid(args.grid)
    w = _parse_point(args.w_point)
    meta = {"version": __version__, "command": "kernel", "grid": args.grid,
            "w_point": args.w_point}
    out = args.out or "kernel"

    if args.limit:
        spec = {
            "strong-bulk": LimitKernelSpec("strong_bulk"),
            "strong-edge": LimitKernelSpec("strong_edge"),
            "weak": LimitKernelSpec("weak", rho=args.rho) if args.rho else None,
            "origin": LimitKernelSpec("origin", L=float(args.L)),
        }.get(args.limit)
        if spec is None:
            raise SystemExit2(f"--limit {args.limit} needs its parameter (--rho/--L)")
        meta["limit"] = args.limit
        rows = []
        for x in axis:
            for y in axis:
                z = complex(x, y)
                v = kappa(spec, z, w)
                rows.append((float(x), float(y), float(v.real), float(v.imag)))
        _write_csv(out + ".csv", meta, ["re_z", "im_z", "re_val", "im_val"], rows)
        print(f"wrote {len(rows)} limit-kernel values to {out}.csv")
        return 0

    regime = _regime_from_args(args)
    if args.r1:
        from .finitekernel import rescaled_r1

        params = regime.params_at(args.N)
        meta.update(_base_meta(args, params))
        rows = []
        for x in axis:
            for y in axis:
                z = complex(x, y)
                v = rescaled_r1(params, regime, z)
                rows.append((float(x), float(y), float(v), 0.0))
        _write_csv(out + ".csv", meta, ["re_z", "im_z", "re_val", "im_val"], rows)
        print(f"wrote {len(rows)} rescaled one-point values to {out}.csv")
        return 0

    if args.compare:
        ns = [int(tok) for tok in args.N_list.split(",")]
        spec = _limit_spec_for(regime)
        sups = []
        for n_size in ns:
            params = regime.params_at(n_size)
            worst = 0.0
            for x in axis:
                for y in axis:
                    z = complex(x, y)
                    kn = np.exp(z * z + w * w) * rescaled_kernel(params, regime, z, w)
                    worst = max(worst, abs(kn - kappa(spec, z, w)))
            sups.append(worst)
        payload = {"meta": meta, "N": ns, "sup_error": sups,
                   "monotone": all(a > b for a, b in zip(sups, sups[1:]))}
        _write_json(out + ".compare.json", payload)
        print(json.dumps(payload["sup_error"]))
        return 0

    params = regime.params_at(args.N)
    meta.update(_base_meta(args, params))
    rows = []
    for x in axis:
        for y in axis:
            z = complex(x, y)
            v = rescaled_kernel(params, regime, z, w)
            rows.append((float(x), float(y), float(v.real), float(v.imag)))
    _write_csv(out + ".csv", meta, ["re_z", "im_z", "re_val", "im_val"], rows)
    print(f"wrote {len(rows)} finite-N kernel values to {out}.csv")
    return 0


def _limit_spec_for(regime):
    from .limits import LimitKernelSpec

    if isinstance(regime, Strong):
        radii = regime.limit_radii
        edge = math.isclose(regime.p, radii.r1, rel_tol=1e-12) or math.isclose(
            regime.p, radii.r2, rel_tol=1e-12
        )
        return LimitKernelSpec("strong_edge" if edge else "strong_bulk")
    if isinstance(regime, Weak):
        return LimitKernelSpec("weak", rho=regime.rho)
    return LimitKernelSpec("origin", L=regime.L)


def cmd_check(args) -> int:
    import numpy.random as npr

    report = {"version": __version__, "check": args.what, "passed": True}
    tol_used = None
    if args.what == "cdi":
        from .cdi import cdi_residual

        params = EnsembleParams(N=args.N, n=float(args.n), L=float(args.L))
        rng = npr.default_rng(0)
        worst = 0.0
        for _ in range(25):
            z = rng.normal(scale=0.4) + 1j * rng.normal(scale=0.4)
            e = rng.normal(scale=0.4) + 1j * rng.normal(scale=0.4)
            worst = max(worst, cdi_residual(params, z, e))
        tol_used = args.tol if args.tol is not None else 1e-8
        report.update(max_residual=worst, tolerance=tol_used)
        report["passed"] = worst <= tol_used
    elif args.what == "ode":
        from .limits import LimitKernelSpec, ode_residual

        spec = {
            "strong-bulk": LimitKernelSpec("strong_bulk"),
            "strong-edge": LimitKernelSpec("strong_edge"),
            "weak": LimitKernelSpec("weak", rho=args.rho) if args.rho else None,
            "origin": LimitKernelSpec("origin", L=float(args.L)),
        }.get(args.variant)
        if spec is None:
            raise SystemExit2(f"--variant {args.variant} needs its parameter")
        worst = 0.0
        grid = [complex(x, y) for x in (-0.6, 0.2, 0.7) for y in (-0.5, 0.4)]
        for z in grid:
            for w in grid:
                r, diag = ode_residual(spec, z, w)
                worst = max(worst, r, diag)
        tol_used = args.tol if args.tol is not None else 1e-6
        report.update(variant=args.variant, max_residual=worst, tolerance=tol_used)
        report["passed"] = worst <= tol_used
    elif args.what == "sop-equiv":
        from .finitekernel import skew_kernel_tilde, skew_kernel_via_sop, skew_op_system

        params = EnsembleParams(N=args.N, n=float(args.n), L=float(args.L))
        system = skew_op_system(params)
        rng = npr.default_rng(1)
        worst = 0.0
        for _ in range(20):
            z = rng.normal(scale=0.5) + 1j * rng.normal(scale=0.5)
            e = rng.normal(scale=0.5) + 1j * rng.normal(scale=0.5)
            a = skew_kernel_tilde(params, z, e)
            b = skew_kernel_via_sop(system, z, e)
            denom = max(abs(a), abs(b), 1e-300)
            worst = max(worst, abs(a - b) / denom)
        tol_used = args.tol if args.tol is not None else 1e-10
        report.update(max_relative_error=worst, tolerance=tol_used)
        report["passed"] = worst <= tol_used
    elif args.what == "beta":
        from .cdi import cdi_rhs, cdi_rhs_beta_form

        params = EnsembleParams(N=args.N, n=float(args.n), L=float(args.L))
        rng = npr.default_rng(2)
        worst = 0.0
        for _ in range(15):
            z = rng.uniform(0.05, 0.5) + 1j * rng.uniform(-0.05, 0.05)
            e = rng.uniform(0.05, 0.5) + 1j * rng.uniform(-0.05, 0.05)
            t1 = cdi_rhs(params, z, e)
            t2 = cdi_rhs_beta_form(params, z, e)
            for a, b in ((t1.term1, t2.term1), (t1.term2, t2.term2), (t1.term3, t2.term3)):
                denom = max(abs(a), abs(b))
                if denom > 0:
                    worst = max(worst, abs(a - b) / denom)
        tol_used = args.tol if args.tol is not None else 1e-9
        report.update(max_relative_error=worst, tolerance=tol_used)
        report["passed"] = worst <= tol_used
    else:
        raise SystemExit2(f"unknown check {args.what!r}")

    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["passed"] else 4


def cmd_linstat(args) -> int:
    from .linstat import (
        asymptotic_mean,
        asymptotic_variance,
        char_function,
        exact_mean,
        exact_variance,
        mc_linear_statistic,
    )
    from .sampler import sample_ensemble

    stat = _parse_stat(args.b)
    params = _params_from_args(args, need_int=args.trials > 0 and not args.charfn)
    out = args.out or "linstat"
    meta = _base_meta(args, params)
    meta["statistic"] = stat.label

    if args.charfn:
        axis = _parse_grid(args.k)
        rows = []
        for k in axis:
            v = char_function(params, stat, float(k))
            rows.append((float(k), float(v.real), float(v.imag)))
        _write_csv(out + ".charfn.csv", meta, ["k", "re_P", "im_P"], rows)
        print(f"wrote {len(rows)} characteristic-function values to {out}.charfn.csv")
        return 0

    payload = {
        "meta": meta,
        "asymptotic_mean": asymptotic_mean(params, stat),
        "asymptotic_variance": asymptotic_variance(params, stat),
        "exact_mean": exact_mean(params, stat),
        "exact_variance": exact_variance(params, stat),
    }
    if args.trials > 0:
        batch = sample_ensemble(params, trials=args.trials, seed=args.seed)
        s = mc_linear_statistic(batch, stat)
        payload.update(
            mc_mean=s.mean, mc_variance=s.variance,
            mc_se_mean=s.se_mean, mc_se_variance=s.se_variance,
        )
        _write_csv(
            out + ".samples.csv", meta, ["trial", "B"],
            [(t, float(v)) for t, v in enumerate(s.samples)],
        )
    _write_json(out + ".json", payload)
    print(json.dumps({k: v for k, v in payload.items() if k != "meta"}, indent=2))
    return 0


import re

_NEG_GRID = re.compile(r"^-\d+(\.\d*)?([:,]-?\d+(\.\d*)?)*$")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sphefaffian",
        description="Induced spherical symplectic ensemble: sampling, kernels, checks.",
    )
    # let grid specs like -2:2:0.1 pass as option values, not flags
    ap._negative_number_matcher = _NEG_GRID
    ap.add_argument("--threads", type=int, default=None,
                    help="override SPHEFAFFIAN_THREADS for this run")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_params(p, with_regime=True, regime_b_flag="--b"):
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--n", type=float, default=None)
        p.add_argument("--L", type=float, default=0.0)
        p.add_argument("--rho", type=float, default=None)
        if with_regime:
            p.add_argument("--regime", choices=["strong", "weak", "origin"], default=None)
            p.add_argument("--a", type=float, default=1.0)
            p.add_argument(regime_b_flag, dest="b_regime", type=float, default=1.0)
            p.add_argument("--p", type=float, default=1.0)

    ps = sub.add_parser("sample", help="sample the quaternion matrix model")
    add_params(ps, with_regime=False)
    ps.add_argument("--n-over-N-sq", dest="n_over_N_sq", action="store_true",
                    help="set n = N^2/rho^2, L = n - N (weak regime parameters)")
    ps.add_argument("--trials", type=int, default=100)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--sphere", action="store_true",
                    help="also write stereographic (theta, phi) coordinates")
    ps.add_argument("--out", default=None)
    ps.set_defaults(func=cmd_sample)

    pk = sub.add_parser("kernel", help="tabulate finite-N or limiting kernels")
    add_params(pk)
    pk.add_argument("--limit", choices=["strong-bulk", "strong-edge", "weak", "origin"],
                    default=None)
    pk.add_argument("--grid", default="-1:1:0.25")
    pk.add_argument("--w-point", dest="w_point", default="0.1,0.0")
    pk.add_argument("--r1", action="store_true",
                    help="tabulate the rescaled one-point intensity instead")
    pk.add_argument("--compare", action="store_true",
                    help="sup-error vs the limit over --N-list sizes")
    pk.add_argument("--N-list", dest="N_list", default="25,50,100")
    pk.add_argument("--out", default=None)
    pk.set_defaults(func=cmd_kernel)

    pc = sub.add_parser("check", help="run identity/residual self-checks")
    pc.add_argument("what", choices=["cdi", "ode", "sop-equiv", "beta"])
    pc.add_argument("--N", type=int, default=3)
    pc.add_argument("--n", type=float, default=6.0)
    pc.add_argument("--L", type=float, default=1.0)
    pc.add_argument("--variant", default="strong-bulk")
    pc.add_argument("--rho", type=float, default=None)
    pc.add_argument("--tol", type=float, default=None)
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=cmd_check)

    pl = sub.add_parser("linstat", help="linear statistics: exact, asymptotic, Monte Carlo")
    add_params(pl, regime_b_flag="--b-param")
    pl.add_argument("--b", dest="b", default="r2",
                    help="statistic: r2, r, or const:<value>")
    pl.add_argument("--trials", type=int, default=0)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--charfn", action="store_true")
    pl.add_argument("--k", default="0:1:0.05")
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_linstat)

    for parser in (ps, pk, pc, pl):
        parser._negative_number_matcher = _NEG_GRID
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads is not None:
        os.environ["SPHEFAFFIAN_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except SphefaffianError as exc:
        kind = exc.__class__.__name__
        print(f"error ({kind}): {exc}", file=sys.stderr)
        # parameter/domain problems exit 2, numerical failures exit 3
        return 2 if isinstance(exc, ValueError) else 3
    except OverflowError as exc:
        print(f"error (overflow): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
