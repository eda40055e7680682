"""The two headline gap computations: the small-gap threshold table from
root-finding on the kernel-smoothed pair-correlation bracket, and the
large-gap optimization of the moment-ratio quadratic (the sqrt(3) constant).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .paircorr import _minorant_transform, i_xi_bound, kappa_threshold
from .quadrature import adaptive_gl

__all__ = [
    "GapBoundResult",
    "LargeGapResult",
    "kappa",
    "bracket",
    "small_gap_root",
    "large_gap_bound",
    "table",
    "table_csv",
    "table_json",
]


class BracketDomainError(ValueError):
    """lambda beyond 1/kappa(m), where the bracket's last integral flips."""


class NoSignChangeError(RuntimeError):
    pass


@dataclass(frozen=True)
class GapBoundResult:
    m: int
    kappa: float
    lambda_star: float
    bracket_at_root: float
    iterations: int


@dataclass(frozen=True)
class LargeGapResult:
    rho_star: float
    bound: float
    quadratic: tuple


def kappa(m):
    """Threshold above which the quadratic lower bound is non-trivial."""
    return kappa_threshold(m)


def bracket(lam, m, abs_tol=1e-10):
    """B(lam, m) = lam - 1 + 2 lam I1 - 4 pi lam^3 I2.

    I1 integrates hhat(lam a) a over [0, 1/m]; I2 integrates
    sin(2 pi lam a) P_m(a) over [kappa_m, 1/lam]. Both adaptive to abs_tol.
    """
    if m < 1:
        raise ValueError("m >= 1")
    km = kappa_threshold(m)
    if not 0.0 < lam <= 1.0 / km:
        raise BracketDomainError(f"need 0 < lam <= 1/kappa = {1.0 / km:.6f}")
    i1 = adaptive_gl(lambda a: _minorant_transform(lam * a) * a,
                     0.0, 1.0 / m, abs_tol=abs_tol)
    i2 = adaptive_gl(lambda a: np.sin(2.0 * math.pi * lam * a) * i_xi_bound(a, m),
                     km, 1.0 / lam, abs_tol=abs_tol)
    return lam - 1.0 + 2.0 * lam * i1 - 4.0 * math.pi * lam ** 3 * i2


def small_gap_root(m, tol=1e-8, scan_points=400):
    """Smallest positive root of the bracket on (0.01, 1/kappa(m)].

    Coarse scan for the first sign change, then bisection to tol. The root
    is the reported small-gap bound for degree m.
    """
    if m < 1 or tol <= 0:
        raise ValueError("need m >= 1 and tol > 0")
    km = kappa_threshold(m)
    hi_end = 1.0 / km
    grid = np.linspace(0.01, hi_end, scan_points)
    prev_x, prev_v = float(grid[0]), bracket(float(grid[0]), m)
    lo_x = hi_x = None
    for x in grid[1:]:
        v = bracket(float(x), m)
        if prev_v < 0 <= v:
            lo_x, hi_x = prev_x, float(x)
            break
        prev_x, prev_v = float(x), v
    if lo_x is None:
        raise NoSignChangeError(f"no sign change of the bracket for m={m}")
    iters = 0
    while hi_x - lo_x > tol and iters < 200:
        mid = 0.5 * (lo_x + hi_x)
        if bracket(mid, m) < 0:
            lo_x = mid
        else:
            hi_x = mid
        iters += 1
    root = 0.5 * (lo_x + hi_x)
    return GapBoundResult(m=int(m), kappa=km, lambda_star=float(root),
                          bracket_at_root=float(bracket(root, m)),
                          iterations=iters)


def large_gap_bound(c0=2.0, c1=-2.0, c2=None):
    """Maximize sqrt(c0 / (c2 + 2 rho c1 + rho^2 c0)) over the twist slope rho.

    The optimum is the vertex rho* = -c1/c0; with the unshifted moment
    coefficients (2, -2, 8/3) this gives rho* = 1 and the bound sqrt(3).
    """
    from fractions import Fraction
    if c2 is None:
        c2 = Fraction(8, 3)
    c0f, c1f, c2f = float(c0), float(c1), float(c2)
    rho = -c1f / c0f
    denom = c2f + 2.0 * rho * c1f + rho * rho * c0f
    if denom <= 0:
        raise ValueError("non-positive quadratic at the optimum")
    return LargeGapResult(rho_star=rho, bound=math.sqrt(c0f / denom),
                          quadratic=(c0f, c1f, c2f))


def table(m_max, tol=1e-8):
    """small_gap_root for m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max >= 1")
    return [small_gap_root(m, tol=tol) for m in range(1, m_max + 1)]


def table_csv(results):
    lines = ["m,kappa,mu_upper_bound"]
    for r in results:
        lines.append(f"{r.m},{r.kappa:.15g},{r.lambda_star:.15g}")
    return "\n".join(lines) + "\n"


def table_json(results):
    return json.dumps([
        {"m": r.m, "kappa": r.kappa, "mu_upper_bound": r.lambda_star,
         "bracket_at_root": r.bracket_at_root, "iterations": r.iterations}
        for r in results
    ], indent=2)
