"""Gauss-Legendre quadrature helpers shared by the numeric pipelines."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = ["gl_nodes", "composite_gl", "adaptive_gl", "QuadratureError"]

_NODE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


class QuadratureError(RuntimeError):
    """Raised when an adaptive rule fails to converge within its budget."""


def gl_nodes(n):
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    if n not in _NODE_CACHE:
        _NODE_CACHE[n] = leggauss(n)
    return _NODE_CACHE[n]


def composite_gl(f, a, b, panels, nodes=10):
    """Composite Gauss-Legendre integral of a vectorized callable on [a, b]."""
    if b <= a:
        return 0.0
    x, w = gl_nodes(nodes)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    pts = (mid[:, None] + half * x[None, :]).ravel()
    vals = np.asarray(f(pts)).reshape(len(mid), len(x))
    return half * float(np.real_if_close(np.sum(vals @ w))) if np.isrealobj(vals) \
        else half * complex(np.sum(vals @ w))


def adaptive_gl(f, a, b, abs_tol=1e-10, nodes=20, max_halvings=16):
    """Panel-halving Gauss-Legendre to a requested absolute tolerance.

    Doubles the panel count until two consecutive composite estimates move
    by less than abs_tol. The integrands this package feeds in are smooth,
    so convergence is fast; a budget overrun raises QuadratureError.
    """
    if b <= a:
        return 0.0
    panels = 1
    prev = composite_gl(f, a, b, panels, nodes)
    for _ in range(max_halvings):
        panels *= 2
        cur = composite_gl(f, a, b, panels, nodes)
        if abs(cur - prev) < abs_tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"adaptive_gl did not reach abs_tol={abs_tol} on [{a}, {b}]")
