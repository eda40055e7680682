"""Pair-correlation machinery: the empirical form factor of a zero list,
extremal kernel pairs (squared-sinc and the band-limited interval minorant),
the convolution identity between the two, and the quadratic lower-bound
polynomial with its threshold root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import gl_nodes

__all__ = [
    "KernelPair",
    "fejer_pair",
    "selberg_minorant_pair",
    "dilate",
    "FormFactorCurve",
    "form_factor",
    "form_factor_model",
    "convolution_sum",
    "i_xi_bound",
    "kappa_threshold",
    "selberg_minorant_checks",
    "pair_weight",
]

FACTORED_PATH_THRESHOLD = 5000


def pair_weight(u):
    """The localizing weight 4/(4+u^2) on zero differences."""
    u = np.asarray(u, dtype=float)
    return 4.0 / (4.0 + u * u)


@dataclass(frozen=True)
class KernelPair:
    """A Fourier pair (direct side, transform) with compact transform support."""

    name: str
    direct: callable
    transform: callable
    transform_support: float


def fejer_pair(xi=1.0):
    """r(u) = (sin(pi xi u)/(pi xi u))^2 with triangular transform on [-xi, xi]."""
    if xi <= 0:
        raise ValueError("xi > 0")

    def direct(u):
        u = np.asarray(u, dtype=float)
        return np.sinc(xi * u) ** 2

    def transform(al):
        al = np.asarray(al, dtype=float)
        return np.maximum(xi - np.abs(al), 0.0) / xi ** 2

    return KernelPair(name=f"fejer-{xi:g}", direct=direct,
                      transform=transform, transform_support=float(xi))


def _minorant_transform(al):
    al = np.abs(np.asarray(al, dtype=float))
    v = 1.0 - al + np.sin(2.0 * math.pi * al) / (2.0 * math.pi)
    return np.where(al >= 1.0, 0.0, np.maximum(v, 0.0))


def selberg_minorant_pair(direct_panels=None):
    """The band-limited minorant of the indicator of [-1, 1].

    Only the transform has a trustworthy closed form; the direct side is
    reconstructed numerically as 2 int_0^1 hhat(a) cos(2 pi u a) da, with
    panel count scaled to the largest |u| requested.
    """

    def direct(u):
        u = np.asarray(u, dtype=float)
        umax = float(np.max(np.abs(u))) if u.size else 1.0
        panels = direct_panels or max(16, int(math.ceil(3.0 * umax)) + 8)
        x, w = gl_nodes(12)
        edges = np.linspace(0.0, 1.0, panels + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        alpha = (mids[:, None] + half * x[None, :]).ravel()
        hv = _minorant_transform(alpha) * np.tile(w, panels)
        cosmat = np.cos(2.0 * math.pi * np.outer(u.ravel(), alpha))
        return (2.0 * half * (cosmat @ hv)).reshape(u.shape)

    return KernelPair(name="selberg-minorant", direct=direct,
                      transform=_minorant_transform, transform_support=1.0)


def dilate(pair, lam):
    """r_lam(u) = r(u/lam); transform lam * rhat(lam a), support/lam."""
    if lam <= 0:
        raise ValueError("lam > 0")

    def direct(u):
        return pair.direct(np.asarray(u, dtype=float) / lam)

    def transform(al):
        return lam * pair.transform(lam * np.asarray(al, dtype=float))

    return KernelPair(name=f"{pair.name}-dilated-{lam:g}", direct=direct,
                      transform=transform,
                      transform_support=pair.transform_support / lam)


# ----------------------------------------------------------------------
# form factor

@dataclass(frozen=True)
class FormFactorCurve:
    alphas: np.ndarray
    values: np.ndarray
    T: float
    m: float
    zero_count: int

    def to_csv(self, path, provenance=""):
        with open(path, "w") as fh:
            fh.write(f"# form factor, T={self.T!r}, m={self.m!r}, "
                     f"zeros={self.zero_count}\n")
            if provenance:
                fh.write(f"# {provenance}\n")
            fh.write("alpha,value\n")
            for a, v in zip(self.alphas, self.values):
                fh.write(f"{a:.15g},{v:.15g}\n")


def _form_factor_direct(gammas, m, T, alphas):
    diffs = (gammas[:, None] - gammas[None, :]).ravel()
    wts = pair_weight(diffs)
    lt = m * math.log(T)
    out = np.empty(len(alphas))
    chunk = max(1, 40_000_000 // max(len(diffs), 1))
    for start in range(0, len(alphas), chunk):
        block = alphas[start:start + chunk]
        phases = np.exp(1j * lt * np.outer(block, diffs))
        out[start:start + chunk] = np.real(phases @ wts)
    return out


def _form_factor_factored(gammas, m, T, alphas, ynodes=240):
    # 4/(4+u^2) = int 2 pi e^{-4 pi |y|} e(uy) dy turns the double sum into
    # a weighted integral of |sum_g e(g(theta + y))|^2
    lt = m * math.log(T)
    x, w = gl_nodes(20)
    edges = np.linspace(0.0, 4.0, ynodes // 20 + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    ys = (mids[:, None] + half * x[None, :]).ravel()
    wy = np.tile(w, len(mids)) * half * 2.0 * math.pi * np.exp(-4.0 * math.pi * ys)
    out = np.empty(len(alphas))
    for i, al in enumerate(alphas):
        theta = lt * al / (2.0 * math.pi)
        spos = np.abs(np.exp(2j * math.pi * np.outer(theta + ys, gammas)).sum(axis=1)) ** 2
        sneg = np.abs(np.exp(2j * math.pi * np.outer(theta - ys, gammas)).sum(axis=1)) ** 2
        out[i] = float(np.sum(wy * 0.5 * (spos + sneg)) * 2.0)
    return out


def form_factor(zl, m, T, alphas, force_path=None):
    """Empirical form factor of the zeros up to T on a grid of alpha.

    Direct O(n^2) double sum for n <= 5000 zeros; above that, the weight
    is unfolded into an exponential integral of |exponential sum|^2.
    """
    gammas = zl.below(T)
    n = len(gammas)
    if n == 0:
        raise ValueError("no zeros at or below T in the list")
    alphas = np.asarray(alphas, dtype=float)
    norm = 1.0 / (m * T / (2.0 * math.pi) * math.log(T))
    path = force_path or ("direct" if n <= FACTORED_PATH_THRESHOLD else "factored")
    if path == "direct":
        vals = _form_factor_direct(gammas, m, T, alphas)
    else:
        vals = _form_factor_factored(gammas, m, T, alphas)
    return FormFactorCurve(alphas=alphas, values=norm * vals, T=float(T),
                           m=float(m), zero_count=n)


def form_factor_model(alpha, m, T):
    """Model curve: alpha + m T^{-2 alpha m} log T below 1, plateau 1 above."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise ValueError("alpha >= 0")
    spike = m * T ** (-2.0 * alpha * m) * math.log(T)
    out = np.where(alpha <= 1.0, alpha + spike, 1.0)
    return float(out) if out.ndim == 0 else out


# ----------------------------------------------------------------------
# convolution identity

def convolution_sum(zl, kernel, m, T, lam=1.0, panels_per_cycle=1.05):
    """(lhs, rhs) of the kernel-smoothed pair-correlation identity.

    lhs: double sum of r((g-g') m log T / 2pi) w(g-g') with r the lam-dilated
    kernel. rhs: (m T log T / 2pi) times the quadrature of rhat * F over the
    transform support, with F the empirical form factor. Equal up to
    quadrature error by Fourier inversion at finite sums.
    """
    pair = dilate(kernel, lam) if lam != 1.0 else kernel
    gammas = zl.below(T)
    if len(gammas) == 0:
        raise ValueError("no zeros at or below T")
    diffs = (gammas[:, None] - gammas[None, :]).ravel()
    lt = m * math.log(T)
    lhs = float(np.sum(pair.direct(diffs * lt / (2.0 * math.pi))
                       * pair_weight(diffs)))

    supp = pair.transform_support
    # the form factor oscillates at frequency (max gamma) m log T / 2pi;
    # one 10-node panel per oscillation cycle keeps the rule spectral
    cycles = supp * lt * float(np.max(gammas)) / math.pi
    panels = int(math.ceil(cycles * panels_per_cycle)) + 4
    x, w = gl_nodes(10)
    edges = np.linspace(-supp, supp, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    alphas = (mids[:, None] + half * x[None, :]).ravel()
    curve = form_factor(zl, m, T, alphas)
    integrand = pair.transform(alphas) * curve.values
    integral = half * float(np.sum(integrand.reshape(panels, -1) @ w))
    rhs = (m * T / (2.0 * math.pi) * math.log(T)) * integral
    return lhs, rhs


# ----------------------------------------------------------------------
# the quadratic bound and the minorant report

def i_xi_bound(xi, m):
    """P_m(xi) = xi^2/2 - xi/2 (1 + 1/m^2) + 1/(3 m^3)."""
    xi = np.asarray(xi, dtype=float)
    out = xi * xi / 2.0 - xi / 2.0 * (1.0 + 1.0 / m ** 2) + 1.0 / (3.0 * m ** 3)
    return float(out) if out.ndim == 0 else out


def kappa_threshold(m):
    """Larger root of P_m: (1 + 1/m^2 + sqrt(3-8m+6m^2+3m^4)/(m^2 sqrt 3))/2."""
    if m < 1:
        raise ValueError("m >= 1")
    rad = 3.0 - 8.0 * m + 6.0 * m ** 2 + 3.0 * m ** 4
    return 0.5 * (1.0 + 1.0 / m ** 2 + math.sqrt(rad) / (m ** 2 * math.sqrt(3.0)))


def selberg_minorant_checks(grid_points=10_000, fd_step=1e-5):
    """Verify the minorant transform's boundary behavior and minorant property.

    Checks hhat(1) = hhat'(1) = 0 in closed form, hhat''(x) = -2 pi sin(2 pi x)
    against central differences on (0, 1), and that the reconstructed direct
    side stays <= 1 inside [-1, 1] and <= 0 outside, on a wide grid.
    """
    report = {}
    report["hhat_at_1"] = float(_minorant_transform(1.0))
    # hhat'(x) = -1 + cos(2 pi x) on (0, 1)
    report["hhat_prime_at_1"] = float(-1.0 + math.cos(2.0 * math.pi * 1.0))

    xs = np.linspace(0.05, 0.95, 37)
    fd = (_minorant_transform(xs + fd_step) - 2.0 * _minorant_transform(xs)
          + _minorant_transform(xs - fd_step)) / fd_step ** 2
    closed = -2.0 * math.pi * np.sin(2.0 * math.pi * xs)
    report["hhat_second_max_err"] = float(np.max(np.abs(fd - closed)))

    pair = selberg_minorant_pair()
    us = np.linspace(-6.0, 6.0, grid_points)
    hv = pair.direct(us)
    inside = np.abs(us) <= 1.0
    report["max_inside"] = float(np.max(hv[inside]))
    report["max_outside"] = float(np.max(hv[~inside]))
    report["minorant_ok"] = bool(report["max_inside"] <= 1.0 + 1e-9
                                 and report["max_outside"] <= 1e-9)
    return report
