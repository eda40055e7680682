"""Critical-line zero location by sign changes of the rotated real function,
normalized gap statistics, and the twisted-function gap inequality machinery.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .afe import EvaluationContext, evaluate_many, value_and_derivative_many
from .lfunc import rotation, zero_count_main_term
from .quadrature import gl_nodes

__all__ = [
    "ZeroList",
    "GapStatistics",
    "scan_zeros",
    "gap_statistics",
    "wirtinger_check",
    "wirtinger_pair",
    "count_vs_main_term",
    "write_zero_cache",
    "read_zero_cache",
    "MissedZeroWarning",
]


class MissedZeroWarning(UserWarning):
    """Scan count deviates from the counting main term by more than 5."""


class InsufficientZerosError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroList:
    """Sorted refined zero ordinates plus the scan parameters that made them."""

    ordinates: np.ndarray
    refine_tol: float
    scan_step: float
    spec_name: str
    t_range: tuple

    def __post_init__(self):
        ords = np.asarray(self.ordinates, dtype=float)
        if len(ords) > 1 and np.any(np.diff(ords) <= self.refine_tol):
            raise ValueError("ordinates must be strictly increasing")
        object.__setattr__(self, "ordinates", ords)

    def below(self, T):
        return self.ordinates[self.ordinates <= T]

    def params_hash(self):
        h = hashlib.sha256()
        h.update(f"{self.spec_name}:{self.refine_tol}:{self.scan_step}:"
                 f"{self.t_range}".encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class GapStatistics:
    normalized_gaps: np.ndarray
    max_gap: float
    min_gap: float
    lambda_hat: float
    mu_hat: float


def _z_values(spec, ctx, ts):
    """Rotated real values Z(t) on a batch of ordinates."""
    vals = evaluate_many(ctx, ts)
    return np.real(rotation(spec, ts) * vals)


def scan_zeros(spec, t_min, t_max, ctx=None, refine_tol=1e-9, workers=1,
               scan_step=None):
    """Grid scan for sign changes of Z, bisection refine, one Newton polish.

    Even-order zeros produce no sign change and are missed by design; a
    window whose count deviates from the main term by more than 5 raises a
    MissedZeroWarning rather than an error.
    """
    if not (2.0 <= t_min < t_max):
        raise ValueError("need 2 <= t_min < t_max")
    ctx = ctx or EvaluationContext(spec)
    q = spec.fe.level
    step = scan_step or math.pi / (8.0 * math.log(math.sqrt(q) * t_max))

    grid = np.arange(t_min, t_max + step, step)
    grid = grid[grid <= t_max]
    if grid[-1] < t_max:
        grid = np.append(grid, t_max)

    # windows are independent; evaluate in worker-sized batches and merge
    # deterministically by the final sort
    nchunk = max(1, int(workers))
    if nchunk > 1:
        parts = [
            _z_values(spec, ctx, chunk)
            for chunk in np.array_split(grid, nchunk)
        ]
        zvals = np.concatenate(parts)
    else:
        zvals = _z_values(spec, ctx, grid)

    idx = np.where(np.sign(zvals[:-1]) * np.sign(zvals[1:]) < 0)[0]
    lo = grid[idx].copy()
    hi = grid[idx + 1].copy()
    flo = zvals[idx].copy()

    # lockstep bisection across all bracketing intervals
    iters = int(math.ceil(math.log2(step / refine_tol))) + 2
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if len(mid) == 0:
            break
        fmid = _z_values(spec, ctx, mid)
        left = np.sign(flo) * np.sign(fmid) < 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fmid)
    roots = 0.5 * (lo + hi)

    if len(roots):
        # one Newton step with the analytic derivative; dZ/dt = Re(i w L' ...)
        # is messy, so polish on L via |L| and the phase-free bisection value
        vals, dvals = value_and_derivative_many(ctx, roots)
        om = rotation(spec, roots)
        z = np.real(om * vals)
        # dZ/dt = Re(om' L + om * i L'); om' = om * (-i/2) dlogphi/dt-part,
        # dominated by the L' term near a zero, so use Re(om i L')
        dz = np.real(om * 1j * dvals)
        ok = np.abs(dz) > 1e-12
        polish = np.where(ok, z / dz, 0.0)
        newton = roots - np.clip(polish, -refine_tol * 8, refine_tol * 8)
        roots = np.where(np.abs(newton - roots) <= refine_tol * 8, newton, roots)

    roots = np.sort(roots)
    if len(roots) > 1:
        keep = np.concatenate([[True], np.diff(roots) > refine_tol])
        roots = roots[keep]

    zl = ZeroList(ordinates=roots, refine_tol=refine_tol, scan_step=step,
                  spec_name=spec.name, t_range=(float(t_min), float(t_max)))
    try:
        expected = (zero_count_main_term(spec, t_max)
                    - zero_count_main_term(spec, max(t_min, 1.0)))
        if abs(len(roots) - expected) > 5:
            warnings.warn(
                f"{spec.name}: window [{t_min}, {t_max}] has {len(roots)} "
                f"sign changes vs main term {expected:.2f}; possible missed "
                f"or even-order zeros", MissedZeroWarning)
    except Exception:
        pass
    return zl


def gap_statistics(zl, spec):
    """Normalized consecutive gaps: gap * log(sqrt(q) gamma)/pi for degree 2,
    gap * log(gamma/2pi)/(2pi) for the degree-1 control (flagged control-only).
    """
    ords = zl.ordinates
    if len(ords) < 2:
        raise InsufficientZerosError("need at least 2 zeros")
    gaps = np.diff(ords)
    q = spec.fe.level
    if abs(spec.fe.degree - 2.0) < 1e-12:
        dens = np.log(np.sqrt(q) * ords[:-1]) / math.pi
    elif abs(spec.fe.degree - 1.0) < 1e-12:
        dens = np.log(ords[:-1] / (2.0 * math.pi)) / (2.0 * math.pi)
    else:
        raise ValueError("gap normalization implemented for degrees 1 and 2")
    norm = gaps * dens
    return GapStatistics(normalized_gaps=norm, max_gap=float(gaps.max()),
                         min_gap=float(gaps.min()),
                         lambda_hat=float(norm.max()), mu_hat=float(norm.min()))


def count_vs_main_term(zl, spec, T):
    """(empirical count up to T, counting main term at T)."""
    if not (zl.t_range[0] <= T <= zl.t_range[1]):
        raise ValueError("T outside the scanned range")
    count = int(np.sum(zl.ordinates <= T))
    return count, zero_count_main_term(spec, T)


# ----------------------------------------------------------------------
# twisted-function inequality

def wirtinger_pair(f, fprime, a, b, panels=8, nodes=20):
    """(integral |f|^2, ((b-a)/pi)^2 integral |f'|^2) on [a, b].

    Plain Gauss-Legendre panels; both callables must be vectorized.
    """
    x, w = gl_nodes(nodes)
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    pts = (mids[:, None] + half * x[None, :]).ravel()
    f2 = np.abs(f(pts)) ** 2
    fp2 = np.abs(fprime(pts)) ** 2
    wgts = np.tile(w, panels)
    lhs = half * float(np.sum(f2 * wgts))
    rhs = ((b - a) / math.pi) ** 2 * half * float(np.sum(fp2 * wgts))
    return lhs, rhs


def wirtinger_check(spec, zl, rho, T, ctx=None, panels=8, nodes=20,
                    conv_tol=1e-6):
    """For each consecutive-zero interval, both sides of the gap inequality
    for g(t) = exp(i rho t log T) L(1/2 + it).

    Returns a list of ((a, b), lhs, rhs, converged) tuples; convergence is
    judged by doubling the panel count. |g| = |L| and
    |g'|^2 = |rho log T * L + L'|^2, with L' from the analytic-derivative path.
    """
    ctx = ctx or EvaluationContext(spec)
    ords = zl.ordinates
    if len(ords) < 2:
        raise InsufficientZerosError("need at least 2 zeros")
    logT = math.log(T)
    x, w = gl_nodes(nodes)

    def both_sides(pan):
        pts = []
        for a, b in zip(ords[:-1], ords[1:]):
            edges = np.linspace(a, b, pan + 1)
            mids = 0.5 * (edges[:-1] + edges[1:])
            half = 0.5 * (edges[1] - edges[0])
            pts.append((mids[:, None] + half * x[None, :]).ravel())
        allpts = np.concatenate(pts)
        vals, dvals = value_and_derivative_many(ctx, allpts)
        g2 = np.abs(vals) ** 2
        gp2 = np.abs(rho * logT * vals + dvals) ** 2
        out = []
        off = 0
        wg = np.tile(w, pan)
        for a, b in zip(ords[:-1], ords[1:]):
            npts = pan * nodes
            half = 0.5 * (b - a) / pan
            lhs = half * float(np.sum(g2[off:off + npts] * wg))
            rhs = ((b - a) / math.pi) ** 2 * half * float(
                np.sum(gp2[off:off + npts] * wg))
            out.append((lhs, rhs))
            off += npts
        return out

    coarse = both_sides(panels)
    fine = both_sides(2 * panels)
    results = []
    for (a, b), (l1, r1), (l2, r2) in zip(
            zip(ords[:-1], ords[1:]), coarse, fine):
        scale = max(abs(l2), abs(r2), 1e-30)
        converged = (abs(l2 - l1) + abs(r2 - r1)) / scale < conv_tol
        results.append(((float(a), float(b)), l2, r2, converged))
    return results


# ----------------------------------------------------------------------
# cache files

def write_zero_cache(zl, path, append=False):
    mode = "a" if append else "w"
    with open(path, mode) as fh:
        if not append:
            fh.write(f"# spec={zl.spec_name}\n")
            fh.write(f"# refine_tol={zl.refine_tol!r}\n")
            fh.write(f"# scan_step={zl.scan_step!r}\n")
            fh.write(f"# params_hash={zl.params_hash()}\n")
            fh.write(f"# t_range={zl.t_range[0]!r},{zl.t_range[1]!r}\n")
        for g in zl.ordinates:
            fh.write(f"{g:.15g}\n")


def read_zero_cache(path, expected_hash=None):
    meta = {}
    ords = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val.strip()
            else:
                ords.append(float(line))
    if expected_hash is not None and meta.get("params_hash") != expected_hash:
        raise ValueError("zero cache parameter hash mismatch")
    lo, hi = (float(x) for x in meta["t_range"].split(","))
    return ZeroList(ordinates=np.array(sorted(ords)),
                    refine_tol=float(meta["refine_tol"]),
                    scan_step=float(meta["scan_step"]),
                    spec_name=meta["spec"], t_range=(lo, hi))
