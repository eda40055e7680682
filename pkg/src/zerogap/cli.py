"""Command-line front end: one subcommand per pipeline, strict flags,
deterministic CSV/JSON output, and parameter-hashed caches.

Exit codes: 0 ok, 2 usage, 3 verification failure, 4 budget exceeded,
5 cache corruption.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4
EXIT_CACHE = 5

_CONFIG_KEYS = {
    "spec", "T", "t_min", "t_max", "mu", "nu", "alpha", "beta",
    "grid_lo", "grid_hi", "grid_points", "refine_tol", "trunc_epsilon",
    "cache_dir", "format", "workers", "coeff_n",
}


@dataclass
class RunConfig:
    spec: str = "delta"
    T: float = 100.0
    t_min: float = 2.0
    t_max: float = 100.0
    mu: int = 0
    nu: int = 0
    alpha: float = 0.0
    beta: float = 0.0
    grid_lo: float = 0.0
    grid_hi: float = 1.5
    grid_points: int = 61
    refine_tol: float = 1e-9
    trunc_epsilon: float = 1e-16
    cache_dir: str = ".zerogap-cache"
    format: str = "csv"
    workers: int = 1

    @classmethod
    def from_file(cls, path):
        cfg = cls()
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, val = line.partition("=")
                key, val = key.strip(), val.strip()
                if not sep or key not in _CONFIG_KEYS:
                    raise ValueError(f"{path}:{lineno}: unknown or malformed "
                                     f"config entry {line!r}")
                current = getattr(cfg, key)
                setattr(cfg, key, type(current)(val))
        cfg.validate()
        return cfg

    def validate(self):
        if self.refine_tol <= 0 or self.trunc_epsilon <= 0:
            raise ValueError("tolerances must be positive")
        if self.t_min >= self.t_max:
            raise ValueError("empty t range")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


def _cache_dir(args):
    d = getattr(args, "cache_dir", None) or os.environ.get(
        "ZEROGAP_CACHE_DIR") or ".zerogap-cache"
    os.makedirs(d, exist_ok=True)
    return d


def _load_spec(name, coeff_n, cache_dir):
    from . import coefficients as co
    from .lfunc import delta_spec, zeta_spec

    if name == "zeta":
        return zeta_spec(coeff_n)
    if name != "delta":
        raise ValueError(f"unknown builtin form {name!r}")

    path = os.path.join(cache_dir, f"coeffs-delta-{coeff_n}.txt")
    want = hashlib.sha256(f"builtin-delta:{coeff_n}".encode()).hexdigest()[:16]
    if os.path.exists(path):
        with open(path) as fh:
            head = [next(fh) for _ in range(5)]
        stored = next((ln.split("=", 1)[1].strip() for ln in head
                       if ln.startswith("# params_hash=")), None)
        if stored != want:
            print(f"cache corruption: {path} parameter hash mismatch",
                  file=sys.stderr)
            raise SystemExit(EXIT_CACHE)
        tbl = co.read_table(path)
    else:
        tbl = co.gen_delta(coeff_n)
        co.write_table(tbl, path, name="delta")
        with open(path) as fh:
            body = fh.read()
        with open(path, "w") as fh:
            fh.write(f"# params_hash={want}\n" + body)
    return delta_spec(table=tbl)


def _spec_flags(p, default_n=4000):
    p.add_argument("--form", required=True, choices=["zeta", "delta"])
    p.add_argument("--coeff-n", type=int, default=default_n)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--config", default=None)


def _estimate_cf(spec, args):
    from .coefficients import rankin_selberg_table, residue_estimate
    if spec.residue_cf is not None:
        return spec.residue_cf
    rs = rankin_selberg_table(spec.coefficients)
    cf, _ = residue_estimate(rs, min(rs.N, 10 ** 6))
    return cf


# ----------------------------------------------------------------------
# subcommands

def cmd_smallgaps(args):
    from .gapbounds import bracket, table, table_csv, table_json
    m_max = args.degree_max or args.degree
    rows = table(m_max, tol=args.tol)
    if args.degree and not args.degree_max:
        rows = rows[args.degree - 1:]
    for r in rows:
        eps = 1e-4
        lo_ok = bracket(max(r.lambda_star - eps, 1e-6), r.m) < 0
        hi = r.lambda_star + eps
        hi_ok = True
        if hi <= 1.0 / r.kappa:
            hi_ok = bracket(hi, r.m) > 0
        if not (lo_ok and hi_ok):
            print(f"bracketing check failed for m={r.m}", file=sys.stderr)
            return EXIT_VERIFY
    if args.format == "json":
        print(table_json(rows))
    else:
        sys.stdout.write(table_csv(rows))
    return EXIT_OK


def cmd_largegap(args):
    from .gapbounds import large_gap_bound
    res = large_gap_bound()
    print(f"rho*={res.rho_star:.6f} bound={res.bound:.7f}")
    return EXIT_OK


def cmd_moments(args):
    from .afe import EvaluationContext
    from .moments import BudgetExceededError, numeric_moment
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    cf = _estimate_cf(spec, args)
    try:
        rep = numeric_moment(spec, args.T, args.mu, args.nu, cf=cf,
                             node_budget=args.node_budget)
    except BudgetExceededError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(rep.to_json())
    return EXIT_OK


def cmd_shifted_moments(args):
    from .moments import shifted_moment_numeric, shifted_moment_prediction
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    cf = _estimate_cf(spec, args)
    a, b = complex(args.alpha), complex(args.beta)
    pred = shifted_moment_prediction(spec, args.T, a, b, cf=cf)
    num = shifted_moment_numeric(spec, args.T, a, b)
    out = {
        "T": args.T, "alpha": [a.real, a.imag], "beta": [b.real, b.imag],
        "numeric": [num.real, num.imag], "predicted": [pred.real, pred.imag],
        "ratio": [abs(num) / abs(pred), 0.0] if abs(pred) else [0.0, 0.0],
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_zeros(args):
    from .lfunc import zero_count_main_term
    from .zeros import scan_zeros, write_zero_cache
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    zl = scan_zeros(spec, args.tmin, args.tmax, refine_tol=args.refine_tol,
                    workers=args.workers)
    path = os.path.join(
        cache, f"zeros-{spec.name}-{args.tmin:g}-{args.tmax:g}.txt")
    write_zero_cache(zl, path)
    main = zero_count_main_term(spec, args.tmax)
    print(f"zeros={len(zl.ordinates)} main_term={main:.4f} cache={path}")
    return EXIT_OK


def cmd_gaps(args):
    from .zeros import gap_statistics, read_zero_cache, scan_zeros
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    path = os.path.join(
        cache, f"zeros-{spec.name}-{args.tmin:g}-{args.tmax:g}.txt")
    if os.path.exists(path):
        try:
            zl = read_zero_cache(path)
        except ValueError as exc:
            print(f"cache corruption: {exc}", file=sys.stderr)
            return EXIT_CACHE
    else:
        zl = scan_zeros(spec, args.tmin, args.tmax)
    st = gap_statistics(zl, spec)
    print(f"count={len(zl.ordinates)} mean_norm_gap="
          f"{float(np.mean(st.normalized_gaps)):.6f} "
          f"lambda_hat={st.lambda_hat:.6f} mu_hat={st.mu_hat:.6f}")
    return EXIT_OK


def cmd_paircorr(args):
    from .paircorr import form_factor
    from .zeros import scan_zeros
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    zl = scan_zeros(spec, 2.0, args.T)
    alphas = np.linspace(args.grid_lo, args.grid_hi, args.grid_points)
    curve = form_factor(zl, spec.fe.degree, args.T, alphas)
    out = args.output or os.path.join(cache, f"formfactor-{spec.name}-{args.T:g}.csv")
    curve.to_csv(out, provenance=f"spec={spec.name} zeros={curve.zero_count}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_hypcheck(args):
    from .coefficients import hypothesis_s_ratio, log_coefficients
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    xmax = int(args.x)
    lt = log_coefficients(spec.coefficients, min(xmax, spec.coefficients.N))
    xs = [x for x in (10 ** 3, 10 ** 4, 10 ** 5, xmax)
          if x <= lt.N]
    seen = []
    for x in sorted(set(xs)):
        seen.append((x, hypothesis_s_ratio(lt, x)))
    for x, r in seen:
        print(f"x={x} ratio={r:.6f}")
    return EXIT_OK


def cmd_coeffs(args):
    from . import coefficients as co
    cache = _cache_dir(args)
    spec = _load_spec(args.form, args.coeff_n, cache)
    out = args.output or os.path.join(
        cache, f"coeffs-{spec.name}-{args.coeff_n}.txt")
    co.write_table(spec.coefficients, out, name=spec.name)
    print(f"wrote {out}")
    return EXIT_OK


# ----------------------------------------------------------------------

def _build_parser():
    top = argparse.ArgumentParser(prog="zerogap", allow_abbrev=False)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("smallgaps", allow_abbrev=False)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--degree", type=int)
    g.add_argument("--degree-max", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_smallgaps)

    p = sub.add_parser("largegap", allow_abbrev=False)
    p.set_defaults(func=cmd_largegap)

    p = sub.add_parser("moments", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--node-budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("shifted-moments", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_shifted_moments)

    p = sub.add_parser("zeros", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--tmin", type=float, default=2.0)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--refine-tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("gaps", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--tmin", type=float, default=2.0)
    p.add_argument("--tmax", type=float, required=True)
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("paircorr", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--grid-lo", type=float, default=0.05)
    p.add_argument("--grid-hi", type=float, default=1.5)
    p.add_argument("--grid-points", type=int, default=59)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_paircorr)

    p = sub.add_parser("hypcheck", allow_abbrev=False)
    _spec_flags(p, default_n=100_000)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_hypcheck)

    p = sub.add_parser("coeffs", allow_abbrev=False)
    _spec_flags(p)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_coeffs)

    return top


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "config", None):
        try:
            RunConfig.from_file(args.config)
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
