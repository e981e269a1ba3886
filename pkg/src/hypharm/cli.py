"""Command-line front end: config parsing, sweeps, CSV/JSON artifacts.

Every subcommand prints a one-line JSON summary to stdout and exits 0 on
success, 2 on configuration errors (bad flags, bad space strings, unwritable
paths, infeasible constructions), 3 on numerical failures.  CSV output is a
single header row preceded by '#'-prefixed metadata comments; identical
configurations produce byte-identical files.  `--selftest` runs the cheap
always-true examples of the backing module and returns nonzero on failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import NumericsError
from .lorentz import PolarGridFunction, RadialGridFunction, lorentz_norm, m_p
from .poisson import (
    PoissonField,
    ZonalBoundary,
    mean_value_check,
    normalize_C,
    poisson_kernel_N,
    poisson_transform_KM,
    sup_envelope,
)
from .roe import EigenCombination, NormSpec, RoeConfig, euclid_roe_demo, laplacian_power, roe_verify
from .space import SpaceError, ball_volume, gamma_p, make_space
from .spectrum import (
    SpectrumRegion,
    counterexample_pair,
    lambda_map,
    min_modulus_on_spectrum,
    one_sided_pair,
    spectrum_contains,
)
from .spherical import fit_c, phi_ode

EVIDENCE_LABEL = "open question — evidence only"

_BOUNDARIES = {
    "one": lambda th: np.ones_like(th),
    "cos": lambda th: np.cos(th),
    "mix": lambda th: 1.0 + 0.5 * np.cos(th),
}


# ---------------------------------------------------------------------------
# plumbing


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace(" ", ""))
    except ValueError:
        raise SpaceError(f"cannot parse complex number {s!r} (use e.g. 1, 0.5+0.3j)")


def _parse_complex_list(s: str) -> list[complex]:
    return [_parse_complex(tok) for tok in s.split(",") if tok.strip()]


def _parse_q(s: str) -> float:
    v = float(s)
    if not (v >= 1.0):
        raise SpaceError(f"q must be >= 1 (or inf), got {s}")
    return v


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path: str, meta: list[tuple[str, object]], header: list[str], rows) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for key, val in meta:
            fh.write(f"# {key}={_fmt(val) if not isinstance(val, str) else val}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _emit(summary: dict) -> None:
    print(json.dumps(summary))


def _pmap(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=int(jobs)) as ex:
        return list(ex.map(fn, items))  # order-preserving


def _expand_config(argv: list[str]) -> list[str]:
    """Splice `--config FILE` key=value pairs in as flags.

    Inserted right after the subcommand token, so flags given explicitly on
    the command line take precedence (last occurrence wins in argparse).
    """
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            break
    if path is None:
        return argv
    extra: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise SpaceError(f"config line without '=': {line!r}")
                key, val = line.split("=", 1)
                extra += [f"--{key.strip().replace('_', '-')}", val.strip()]
    except OSError as exc:
        raise SpaceError(f"cannot read config file {path}: {exc}")
    return argv[:1] + extra + argv[1:]


def _selftest_report(name: str, checks: list[tuple[str, bool]]) -> int:
    failed = [label for label, ok in checks if not ok]
    _emit({"selftest": name, "ok": not failed, "checks": len(checks), "failed": failed})
    return 0 if not failed else 3


# ---------------------------------------------------------------------------
# spherical


def _cmd_spherical(args) -> int:
    if args.selftest:
        checks = []
        for spec, lam in (("H3", 1.0), ("dr:2,1", 0.7), ("sym:3,0", 2.0)):
            sp = make_space(spec)
            checks.append((f"phi(0)=1 on {spec}", abs(complex(phi_ode(sp, lam, 0.0)) - 1.0) <= 1e-8))
        h3 = make_space("H3")
        grid = np.linspace(0.0, 5.0, 26)
        flat = phi_ode(h3, -1j * h3.rho, grid)
        checks.append(("phi_{-i rho} == 1", float(np.max(np.abs(flat - 1.0))) <= 1e-8))
        even = np.max(np.abs(phi_ode(h3, 0.8, grid) - phi_ode(h3, -0.8, grid)))
        checks.append(("phi even in lambda", float(even) <= 1e-9))
        return _selftest_report("spherical", checks)

    space = make_space(args.space)
    lams = _parse_complex_list(args.lam)
    if not lams:
        raise SpaceError("need at least one --lambda value")
    t = np.linspace(args.tmin, args.tmax, args.num)
    if args.tmax <= args.tmin:
        raise SpaceError("tmax must exceed tmin")
    vals = _pmap(lambda lam: phi_ode(space, lam, t), lams, args.jobs)
    rows = []
    for lam, v in zip(lams, vals):
        rows.extend((lam.real, lam.imag, ti, vi.real, vi.imag) for ti, vi in zip(t, v))
    if args.out:
        _write_csv(
            args.out,
            [("space", args.space), ("rho", space.rho), ("tmin", args.tmin),
             ("tmax", args.tmax), ("num", args.num)],
            ["lambda_re", "lambda_im", "t", "re", "im"],
            rows,
        )
    _emit({
        "subcommand": "spherical", "space": args.space,
        "lambdas": len(lams), "rows": len(rows), "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# cfit


def _cmd_cfit(args) -> int:
    if args.selftest:
        h3 = make_space("H3")
        fit = fit_c(h3, 1.0)
        checks = [
            ("c(-lam) = conj(c(lam))", abs(fit.c_minus - fit.c_plus.conjugate()) <= 1e-6),
            ("|c(1)| near 1 on H3", abs(abs(fit.c_plus) - 1.0) <= 0.02),
            ("remainder decays", fit.residual_decay_rate <= -1.8),
        ]
        return _selftest_report("cfit", checks)

    space = make_space(args.space)
    lams = [lam.real for lam in _parse_complex_list(args.lam)]
    fits = _pmap(lambda lam: fit_c(space, lam, (args.t0, args.t1), args.num), lams, args.jobs)
    rows = [
        (f.lam, f.c_plus.real, f.c_plus.imag, f.c_minus.real, f.c_minus.imag,
         abs(f.c_plus), f.residual_decay_rate)
        for f in fits
    ]
    if args.out:
        _write_csv(
            args.out,
            [("space", args.space), ("t0", args.t0), ("t1", args.t1), ("num", args.num)],
            ["lambda", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus", "abs_c", "decay"],
            rows,
        )
    first = fits[0]
    _emit({
        "subcommand": "cfit", "space": args.space, "lambda": first.lam,
        "abs_c": abs(first.c_plus), "decay": first.residual_decay_rate,
        "cond": first.cond, "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# norms


def _cmd_norms(args) -> int:
    if args.selftest:
        h3 = make_space("H3")
        r = np.linspace(0.0, 1.0, 101)
        ind = RadialGridFunction(h3, r, np.ones(101, dtype=complex))
        vol = ball_volume(h3, 1.0)
        checks = []
        vals = []
        for q in (1.0, 2.0, math.inf):
            est = lorentz_norm(ind, 2.0, q)
            vals.append(est.value)
            checks.append((f"ball indicator (2,{q}) norm = V^(1/2)",
                           abs(est.value - vol**0.5) <= 1e-8 * vol**0.5))
        checks.append(("monotone in q", vals[0] >= vals[1] >= vals[2] - 1e-12))
        return _selftest_report("norms", checks)

    space = make_space(args.space)
    lam = _parse_complex(args.lam)
    num = args.num if args.num else max(2001, int(100 * args.rmax) + 1)
    grid = np.linspace(0.0, args.rmax, num)
    f = RadialGridFunction(space, grid, phi_ode(space, lam, grid))
    schedule = np.linspace(args.rmax / 8.0, args.rmax, args.rpoints)
    if args.functional == "mp":
        est = m_p(f, args.p, schedule, refine=args.refine)
        seq = [v for _, v in est.sequence]
        tail_slope = est.tail_slope
        q_label = args.p
    else:
        ests = _pmap(
            lambda R: lorentz_norm(f, args.p, args.q, truncation_R=float(R), refine=args.refine),
            schedule, args.jobs,
        )
        seq = [e.value for e in ests]
        tail_slope = ests[-1].tail_slope
        q_label = args.q
    if args.out:
        _write_csv(
            args.out,
            [("space", args.space), ("lambda_re", lam.real), ("lambda_im", lam.imag),
             ("p", args.p), ("q", q_label), ("functional", args.functional),
             ("rmax", args.rmax), ("num", num), ("refine", args.refine)],
            ["R", "value"],
            list(zip(schedule, seq)),
        )
    _emit({
        "subcommand": "norms", "space": args.space, "functional": args.functional,
        "p": args.p, "q": "inf" if math.isinf(q_label) else q_label,
        "value": seq[-1], "tail_slope": tail_slope, "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# spectrum


def _cmd_spectrum(args) -> int:
    if args.selftest:
        h3 = make_space("H3")
        checks = [
            ("Lambda(0) = -rho^2", abs(lambda_map(h3, 0.0) + h3.rho**2) <= 1e-12),
            ("min modulus at p=2 is rho^2",
             abs(min_modulus_on_spectrum(h3, 2.0) - h3.rho**2) <= 1e-8),
            ("sigma_p = sigma_p'",
             abs(min_modulus_on_spectrum(h3, 1.5) - min_modulus_on_spectrum(h3, 3.0)) <= 1e-12),
            ("-rho^2 in every sigma_p",
             all(spectrum_contains(h3, p, -h3.rho**2) for p in (1.2, 1.5, 2.0))),
            ("0 outside sigma_2", not spectrum_contains(h3, 2.0, 0.0)),
        ]
        return _selftest_report("spectrum", checks)

    space = make_space(args.space)
    region = SpectrumRegion(space, args.p)
    mm = min_modulus_on_spectrum(space, args.p)
    if args.emit_boundary:
        alphas = np.linspace(-args.alpha_max, args.alpha_max, args.points)
        w = region.boundary(alphas)
        _write_csv(
            args.emit_boundary,
            [("space", args.space), ("p", args.p), ("gamma", region.gamma),
             ("rho", space.rho), ("min_modulus", mm)],
            ["alpha", "re", "im"],
            [(a, wi.real, wi.imag) for a, wi in zip(alphas, w)],
        )
    _emit({
        "subcommand": "spectrum", "space": args.space, "p": args.p,
        "gamma": region.gamma, "min_modulus": mm, "out": args.emit_boundary,
    })
    return 0


# ---------------------------------------------------------------------------
# counterexample


def _cmd_counterexample(args) -> int:
    if args.selftest:
        h3 = make_space("H3")
        checks = []
        pair = counterexample_pair(h3, 1.5, 1.0)
        mods = [abs(ev) for ev in pair.combination.eigenvalues]
        checks.append(("equal moduli", max(abs(m - pair.target_modulus) for m in mods) <= 1e-9))
        checks.append(("phases in (0, 2pi)",
                       0.0 < pair.theta < 2 * math.pi and 0.0 < pair.psi < 2 * math.pi))
        try:
            counterexample_pair(h3, 1.98, 0.001)
            checks.append(("infeasible target rejected", False))
        except SpaceError:
            checks.append(("infeasible target rejected", True))
        return _selftest_report("counterexample", checks)

    space = make_space(args.space)
    pair = counterexample_pair(space, args.p, args.beta)
    combo = pair.combination
    rows = []
    for expo, phase, (coeff, pt) in zip((pair.q, pair.r), (pair.theta, pair.psi), combo.terms):
        ev = pt.eigenvalue
        rows.append((expo, pt.lam.real, pt.lam.imag, ev.real, ev.imag,
                     coeff.real, coeff.imag, phase))
    if args.out:
        _write_csv(
            args.out,
            [("space", args.space), ("p", args.p), ("beta", args.beta),
             ("q", pair.q), ("r", pair.r), ("target_modulus", pair.target_modulus),
             ("rho", space.rho)],
            ["exponent", "lambda_re", "lambda_im", "Lambda_re", "Lambda_im",
             "coeff_re", "coeff_im", "phase"],
            rows,
        )
    _emit({
        "subcommand": "counterexample", "space": args.space, "p": args.p,
        "beta": args.beta, "target_modulus": pair.target_modulus,
        "q": pair.q, "r": pair.r, "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# poisson


def _cmd_poisson(args) -> int:
    if args.selftest:
        dr = make_space("dr:2,1")
        v = np.linspace(0.0, 4.0, 17)
        kern = poisson_kernel_N(dr, 0.3, 0.7, v)
        checks = [("kernel decays in ynorm", bool(np.all(np.diff(kern) < 0.0)))]
        c = normalize_C(dr)
        doubled = poisson_kernel_N(dr, 0.3, 0.7, 1.0, constant=2.0 * c)
        single = poisson_kernel_N(dr, 0.3, 0.7, 1.0)
        checks.append(("doubling C doubles the kernel", abs(doubled - 2.0 * single) <= 1e-12))
        h3 = make_space("H3")
        fld = poisson_transform_KM(h3, -1j * h3.rho, ZonalBoundary(_BOUNDARIES["one"], "one"),
                                   np.linspace(0.0, 4.0, 9), n_theta=8, n_boundary=32)
        checks.append(("lam = -i rho, F = 1 gives 1",
                       float(np.max(np.abs(fld.values - 1.0))) <= 1e-8))
        checks.append(("mean value at r=0 exact",
                       mean_value_check(fld, -1j * h3.rho, 0.5, 0.0) == 0.0))
        return _selftest_report("poisson", checks)

    space = make_space(args.space)
    lam = _parse_complex(args.lam)
    if args.boundary not in _BOUNDARIES:
        raise SpaceError(f"unknown boundary {args.boundary!r}; pick from {sorted(_BOUNDARIES)}")
    boundary = ZonalBoundary(_BOUNDARIES[args.boundary], name=args.boundary)
    t_grid = np.linspace(0.0, args.tmax, args.tnum)

    if args.jobs > 1:
        # stitch chunked transforms; theta rule identical across chunks
        chunks = np.array_split(np.arange(t_grid.size), min(args.jobs, t_grid.size))
        fields = _pmap(
            lambda idx: poisson_transform_KM(space, lam, boundary, t_grid[idx],
                                             n_theta=args.ntheta, n_boundary=args.nboundary),
            [c for c in chunks if c.size], args.jobs,
        )
        field = PoissonField(
            space, complex(lam), t_grid, fields[0].theta_nodes, fields[0].theta_weights,
            np.vstack([f.values for f in fields]), boundary, args.nboundary,
        )
    else:
        field = poisson_transform_KM(space, lam, boundary, t_grid,
                                     n_theta=args.ntheta, n_boundary=args.nboundary)

    sup_val, sup_arg = sup_envelope(field, q=2.0, weight="exp_rho")
    summary = {
        "subcommand": "poisson", "space": args.space,
        "lambda": [lam.real, lam.imag], "boundary": args.boundary,
        "sup_exp_rho_A2": sup_val, "sup_argmax_t": sup_arg, "out": args.out,
    }
    meta: list[tuple[str, object]] = [
        ("space", args.space), ("lambda_re", lam.real), ("lambda_im", lam.imag),
        ("boundary", args.boundary), ("tmax", args.tmax), ("tnum", args.tnum),
        ("ntheta", args.ntheta), ("nboundary", args.nboundary),
    ]
    if args.norm_p is not None:
        q = args.norm_q if args.norm_q is not None else math.inf
        u = PolarGridFunction(space, field.t_grid, field.theta_grid, field.values,
                              field.theta_weights)
        est = lorentz_norm(u, args.norm_p, q, truncation_R=args.tmax)
        summary["norm"] = {
            "p": args.norm_p, "q": "inf" if math.isinf(q) else q,
            "value": est.value, "tail_slope": est.tail_slope,
        }
        if lam.imag == 0.0 and args.norm_p == 2.0 and math.isinf(q):
            # the weak-L2 Poisson bound is not a theorem; chart, assert nothing
            summary["label"] = EVIDENCE_LABEL
            meta.append(("label", EVIDENCE_LABEL))
        meta += [("norm_p", args.norm_p), ("norm_q", q),
                 ("norm_value", est.value)]
    if args.out:
        rows = []
        theta = field.theta_grid
        for i, ti in enumerate(field.t_grid):
            rows.extend(
                (ti, theta[j], field.values[i, j].real, field.values[i, j].imag)
                for j in range(theta.size)
            )
        _write_csv(args.out, meta, ["t", "theta", "re", "im"], rows)
        summary["rows"] = field.t_grid.size * field.theta_grid.size
    _emit(summary)
    return 0


# ---------------------------------------------------------------------------
# roe


def _roe_build(args, space):
    """Resolve a preset into (combination, z, default k range, default norm p)."""
    pprime = args.p / (args.p - 1.0) if 1.0 < args.p < 2.0 else 2.0
    if args.preset == "eigen":
        f = EigenCombination.from_lambdas(space, [args.alpha])
        return f, args.alpha**2 + space.rho**2, (-8, 8), 2.0
    if args.preset == "equal-modulus-pair":
        pair = counterexample_pair(space, args.p, args.beta)
        return pair.combination, pair.target_modulus, (0, 20), pprime
    if args.preset == "one-sided-pair":
        f = one_sided_pair(space, args.alpha)
        return f, args.alpha**2 + space.rho**2, (-10, 0), 2.0
    raise SpaceError(
        f"unknown preset {args.preset!r}; pick from eigen, equal-modulus-pair, one-sided-pair"
    )


def _cmd_roe(args) -> int:
    if args.selftest:
        h3 = make_space("H3")
        f = EigenCombination.from_lambdas(h3, [0.5, 1.5], [1.0, 2.0])
        same = laplacian_power(f, 0)
        checks = [("k = 0 power is identity", same is f)]
        two_step = laplacian_power(laplacian_power(f, 2), 3)
        direct = laplacian_power(f, 5)
        dev = max(
            abs(a - b) / max(1.0, abs(b))
            for a, b in zip(two_step.coefficients, direct.coefficients)
        )
        checks.append(("power composition exact", dev <= 1e-12))
        rep = euclid_roe_demo(1.0, [(1.0, 1.0)], k_range=(-5, 5))
        checks.append(("flat sin x is an eigenfunction", rep.verdict == "eigenfunction"))
        return _selftest_report("roe", checks)

    space = make_space(args.space)
    f, z_auto, k_default, norm_p_auto = _roe_build(args, space)
    z = _parse_complex(args.z) if args.z else z_auto
    kmin = args.kmin if args.kmin is not None else k_default[0]
    kmax = args.kmax if args.kmax is not None else k_default[1]
    norm_p = args.norm_p if args.norm_p is not None else norm_p_auto
    lam_ref = _parse_complex(args.lam_ref) if args.lam_ref else None
    spec = NormSpec(kind=args.norm, p=norm_p, q=args.norm_q, lam_ref=lam_ref)
    config = RoeConfig(bounded_ratio=args.bounded_ratio,
                       stability_tol=args.stability_tol,
                       residual_tol=args.residual_tol)
    report = roe_verify(space, f, z, norm=spec, k_range=(kmin, kmax),
                        truncation_R=args.R, config=config)
    if args.out:
        with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=2)
            fh.write("\n")
    if args.csv:
        _write_csv(
            args.csv,
            [("space", args.space), ("preset", args.preset), ("norm", args.norm),
             ("z_re", z.real if isinstance(z, complex) else float(z)),
             ("z_im", z.imag if isinstance(z, complex) else 0.0),
             ("R", args.R), ("verdict", report.verdict)],
            ["k", "value"],
            list(zip(report.ks, report.per_k_values)),
        )
    _emit({
        "subcommand": "roe", "space": args.space, "preset": args.preset,
        "verdict": report.verdict, "bound_M": report.bound_M,
        "eigen_residual": report.eigen_residual, "stability": report.stability,
        "out": args.out, "csv": args.csv,
    })
    return 0


# ---------------------------------------------------------------------------
# euclid


def _parse_terms(s: str) -> list[tuple[float, ...]]:
    terms = []
    for tok in s.split(","):
        tok = tok.strip()
        if not tok:
            continue
        parts = tok.split(":")
        if len(parts) not in (2, 3):
            raise SpaceError(f"term {tok!r} must be coeff:omega or coeff:omega:phase")
        try:
            terms.append(tuple(float(x) for x in parts))
        except ValueError:
            raise SpaceError(f"non-numeric term {tok!r}")
    if not terms:
        raise SpaceError("need at least one term")
    return terms


def _cmd_euclid(args) -> int:
    if args.selftest:
        checks = [
            ("sin x eigen",
             euclid_roe_demo(1.0, [(1.0, 1.0)]).verdict == "eigenfunction"),
            ("sin x + sin(x/2) backward-unbounded",
             euclid_roe_demo(1.0, [(1.0, 1.0), (1.0, 0.5)], k_range=(-10, 0)).verdict
             == "unbounded"),
            ("sin x + sin 2x forward-unbounded",
             euclid_roe_demo(1.0, [(1.0, 1.0), (1.0, 2.0)], k_range=(0, 10)).verdict
             == "unbounded"),
        ]
        return _selftest_report("euclid", checks)

    terms = _parse_terms(args.terms)
    report = euclid_roe_demo(args.alpha, terms, k_range=(args.kmin, args.kmax),
                             x_max=args.xmax, num=args.num)
    if args.out:
        with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=2)
            fh.write("\n")
    if args.csv:
        _write_csv(
            args.csv,
            [("alpha", args.alpha), ("terms", args.terms), ("verdict", report.verdict)],
            ["k", "value"],
            list(zip(report.ks, report.per_k_values)),
        )
    _emit({
        "subcommand": "euclid", "alpha": args.alpha, "terms": args.terms,
        "verdict": report.verdict, "bound_M": report.bound_M,
        "eigen_residual": report.eigen_residual, "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--selftest", action="store_true",
                        help="run the module's cheap known-true examples and exit")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="key=value file; explicit flags override")
    common.add_argument("--jobs", type=int, default=1, help="sweep parallelism")

    top = argparse.ArgumentParser(prog="hypharm", description=__doc__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spherical", parents=[common],
                       help="tabulate phi_lambda on a radial grid")
    p.add_argument("--space", default="H3")
    p.add_argument("--lambda", dest="lam", default="1",
                   help="comma-separated complex spectral parameters")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--num", type=int, default=501)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spherical)

    p = sub.add_parser("cfit", parents=[common],
                       help="scattering-coefficient fit from the radial tail")
    p.add_argument("--space", default="H3")
    p.add_argument("--lambda", dest="lam", default="1",
                   help="comma-separated real spectral parameters")
    p.add_argument("--t0", type=float, default=4.0)
    p.add_argument("--t1", type=float, default=16.0)
    p.add_argument("--num", type=int, default=4096)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cfit)

    p = sub.add_parser("norms", parents=[common],
                       help="truncated Lorentz / ball-average norms of phi_lambda")
    p.add_argument("--space", default="H3")
    p.add_argument("--lambda", dest="lam", default="0")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=_parse_q, default=math.inf, help="second exponent, or inf")
    p.add_argument("--functional", choices=("lorentz", "mp"), default="lorentz")
    p.add_argument("--rmax", type=float, default=40.0)
    p.add_argument("--rpoints", type=int, default=15)
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--num", type=int, default=None, help="radial samples (default 100/unit)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("spectrum", parents=[common],
                       help="L^p spectrum geometry and boundary curves")
    p.add_argument("--space", default="H3")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--emit-boundary", default=None, metavar="CSV")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("counterexample", parents=[common],
                       help="equal-modulus two-term combination inside the strip")
    p.add_argument("--space", default="H3")
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("poisson", parents=[common],
                       help="tabulate a zonal Poisson transform on a polar grid")
    p.add_argument("--space", default="H3")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--boundary", default="one", help="one of: " + ", ".join(sorted(_BOUNDARIES)))
    p.add_argument("--tmax", type=float, default=8.0)
    p.add_argument("--tnum", type=int, default=161)
    p.add_argument("--ntheta", type=int, default=48)
    p.add_argument("--nboundary", type=int, default=64)
    p.add_argument("--norm-p", type=float, default=None,
                   help="also report the truncated (p, q) norm of the field")
    p.add_argument("--norm-q", type=_parse_q, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("roe", parents=[common],
                       help="power-sequence boundedness/eigenfunction verdicts")
    p.add_argument("--space", default="H3")
    p.add_argument("--preset", default="eigen",
                   help="eigen | equal-modulus-pair | one-sided-pair")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--z", default=None, help="override the modulus scale")
    p.add_argument("--norm", default="weak_pprime")
    p.add_argument("--norm-p", type=float, default=None)
    p.add_argument("--norm-q", type=float, default=2.0)
    p.add_argument("--lam-ref", default=None)
    p.add_argument("--kmin", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--R", type=float, default=40.0)
    p.add_argument("--bounded-ratio", type=float, default=10.0)
    p.add_argument("--stability-tol", type=float, default=0.10)
    p.add_argument("--residual-tol", type=float, default=1e-4)
    p.add_argument("--out", default=None, metavar="JSON")
    p.add_argument("--csv", default=None, metavar="CSV")
    p.set_defaults(func=_cmd_roe)

    p = sub.add_parser("euclid", parents=[common],
                       help="flat 1-D power-sequence baseline")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--terms", default="1:1",
                   help="comma-separated coeff:omega[:phase] sine terms")
    p.add_argument("--kmin", type=int, default=-10)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--xmax", type=float, default=100.0)
    p.add_argument("--num", type=int, default=8001)
    p.add_argument("--out", default=None, metavar="JSON")
    p.add_argument("--csv", default=None, metavar="CSV")
    p.set_defaults(func=_cmd_euclid)

    return top


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
        args = _parser().parse_args(argv)
    except SpaceError as exc:
        _emit({"error": str(exc), "kind": "config"})
        return 2
    except SystemExit as exc:  # argparse: bad flags exit 2, --help exits 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SpaceError as exc:
        _emit({"error": str(exc), "kind": "config"})
        return 2
    except NumericsError as exc:
        _emit({"error": str(exc), "kind": "numerics"})
        return 3
    except OSError as exc:
        _emit({"error": str(exc), "kind": "config"})
        return 2


if __name__ == "__main__":
    sys.exit(main())
