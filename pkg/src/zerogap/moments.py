"""Dyadic moment integrals of L-derivatives, their predicted main terms,
the shift-series expansion, and the mean-value toolkit checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .afe import EvaluationContext, derivative, evaluate_many, \
    value_and_derivative_many
from .coefficients import rankin_selberg_table, rankin_selberg_value
from .quadrature import gl_nodes
from .special_functions import log_gamma

__all__ = [
    "MomentReport",
    "moment_main_coefficient",
    "predicted_moment",
    "numeric_moment",
    "shifted_moment_prediction",
    "shifted_moment_numeric",
    "f_series",
    "f_series_closed_form",
    "mv_meanvalue_check",
    "weighted_sum_check",
    "truncated_sum_check",
]


class MissingResidueError(ValueError):
    """spec.residue_cf is unset and no override was supplied."""


class DegenerateShiftError(ValueError):
    """alpha + beta = 0 is excluded; use the unshifted coefficient instead."""


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class MomentReport:
    T: float
    mu: int
    nu: int
    numeric: complex
    predicted: float
    ratio: complex
    panels: int
    node_budget: int
    provenance: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps({
            "T": self.T, "mu": self.mu, "nu": self.nu,
            "numeric": [self.numeric.real, self.numeric.imag],
            "predicted": self.predicted,
            "ratio": [self.ratio.real, self.ratio.imag],
            "panels": self.panels, "node_budget": self.node_budget,
            "provenance": self.provenance,
        }, indent=2, sort_keys=True)


def moment_main_coefficient(mu, nu):
    """Exact rational (-1)^(mu+nu) 2^(mu+nu+1) / (mu+nu+1)."""
    if mu < 0 or nu < 0:
        raise ValueError("orders must be non-negative")
    k = mu + nu
    return Fraction((-1) ** k * 2 ** (k + 1), k + 1)


def _cf(spec, cf):
    if cf is not None:
        return float(cf)
    if spec.residue_cf is None:
        raise MissingResidueError(
            f"spec {spec.name!r} has no residue; pass cf= explicitly")
    return float(spec.residue_cf)


def predicted_moment(spec, T, mu, nu, cf=None):
    """coefficient * c_f * T * (log T)^(mu+nu+1)."""
    if T < 10:
        raise ValueError("T >= 10")
    c = _cf(spec, cf)
    return float(moment_main_coefficient(mu, nu)) * c * T \
        * math.log(T) ** (mu + nu + 1)


def _derivatives_on(ctx, ts, kmax):
    """L^(k)(1/2+it) for k = 0..kmax on a batch of ordinates."""
    if kmax <= 1:
        vals, dvals = value_and_derivative_many(ctx, ts)
        return [vals, dvals][: kmax + 1]
    out = [np.empty(len(ts), dtype=complex) for _ in range(kmax + 1)]
    for i, t in enumerate(ts):
        for k in range(kmax + 1):
            out[k][i] = derivative(ctx, float(t), k)
    return out


def numeric_moment(spec, T, mu, nu, ctx=None, nodes_per_panel=10,
                   node_budget=2_000_000, cf=None):
    """Composite Gauss-Legendre integral of L^(mu)(1/2+it) L^(nu)(1/2-it, dual)
    over [T, 2T], panel length at most half the local average zero spacing.

    Self-dual specs use conjugate reflection for the second factor. Panels
    are summed in fixed order (numpy pairwise), so reruns are bit-identical.
    """
    if T < 10:
        raise ValueError("T >= 10")
    if mu > 2 or nu > 2:
        raise ValueError("orders above 2 are untested; rejected")
    if not spec.self_dual:
        raise NotImplementedError("numeric moments assume a self-dual spec")
    ctx = ctx or EvaluationContext(spec, trunc_epsilon=1e-10)
    q = spec.fe.level
    spacing = math.pi / math.log(math.sqrt(q) * 2.0 * T)
    panels = int(math.ceil(T / (0.5 * spacing)))
    if panels * nodes_per_panel > node_budget:
        raise BudgetExceededError(
            f"{panels * nodes_per_panel} nodes exceed budget {node_budget}")
    x, w = gl_nodes(nodes_per_panel)
    edges = np.linspace(T, 2.0 * T, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    kmax = max(mu, nu)

    total = 0.0 + 0.0j
    chunk = max(1, 20_000 // nodes_per_panel)
    for start in range(0, panels, chunk):
        end = min(start + chunk, panels)
        mids = 0.5 * (edges[start:end] + edges[start + 1:end + 1])
        pts = (mids[:, None] + half * x[None, :]).ravel()
        ders = _derivatives_on(ctx, pts, kmax)
        integrand = ders[mu] * np.conj(ders[nu])
        total += half * np.sum(integrand.reshape(len(mids), -1) @ w)

    pred = predicted_moment(spec, T, mu, nu, cf=cf)
    c = _cf(spec, cf)
    return MomentReport(
        T=float(T), mu=mu, nu=nu, numeric=complex(total), predicted=pred,
        ratio=complex(total / pred), panels=panels,
        node_budget=panels * nodes_per_panel,
        provenance={
            "spec": spec.name,
            "cf": c,
            "coefficient_hash": spec.coefficients.content_hash(),
            "trunc_epsilon": ctx.trunc_epsilon,
        })


# ----------------------------------------------------------------------
# shifted moments

def shifted_moment_prediction(spec, T, alpha, beta, cf=None, rs_tbl=None):
    """Main-term prediction: integral over [T, 2T] of
    L(1+a+b, fxf) + (t/2pi)^{-2(a+b)} L(1-a-b, fxf), t-integral closed form."""
    x = complex(alpha) + complex(beta)
    if x == 0:
        raise DegenerateShiftError("alpha + beta must be nonzero")
    c = _cf(spec, cf)
    rs = rs_tbl if rs_tbl is not None else rankin_selberg_table(spec.coefficients)
    lplus, _ = rankin_selberg_value(rs, 1.0 + x, c)
    lminus, _ = rankin_selberg_value(rs, 1.0 - x, c)
    # int_T^{2T} (t/2pi)^{-2x} dt = (2pi)^{2x} (t^{1-2x}/(1-2x)) | T..2T
    e = 1.0 - 2.0 * x
    tint = (2.0 * math.pi) ** (2.0 * x) * ((2 * T) ** e - T ** e) / e
    return T * lplus + tint * lminus


def shifted_moment_numeric(spec, T, alpha, beta, ctx=None, nodes_per_panel=10,
                           node_budget=2_000_000):
    """Quadrature of L(s+alpha) L(1-s+beta, dual) over t in [T, 2T]."""
    if not spec.self_dual:
        raise NotImplementedError("shifted moments assume a self-dual spec")
    ctx = ctx or EvaluationContext(spec, trunc_epsilon=1e-10)
    q = spec.fe.level
    spacing = math.pi / math.log(math.sqrt(q) * 2.0 * T)
    panels = int(math.ceil(T / (0.5 * spacing)))
    if panels * nodes_per_panel > node_budget:
        raise BudgetExceededError("node budget exceeded")
    x, w = gl_nodes(nodes_per_panel)
    edges = np.linspace(T, 2.0 * T, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    a = complex(alpha)
    b = complex(beta)
    total = 0.0 + 0.0j
    chunk = max(1, 20_000 // nodes_per_panel)
    for start in range(0, panels, chunk):
        end = min(start + chunk, panels)
        mids = 0.5 * (edges[start:end] + edges[start + 1:end + 1])
        pts = (mids[:, None] + half * x[None, :]).ravel()
        first = evaluate_many(ctx, pts, np.full(len(pts), a))
        # L(1-s+beta, dual) = conj(L(s + conj(beta))) for self-dual specs
        second = np.conj(evaluate_many(ctx, pts, np.full(len(pts), np.conj(b))))
        total += half * np.sum((first * second).reshape(len(mids), -1) @ w)
    return complex(total)


def f_series(cf, x, T, terms):
    """Partial sum of c_f T sum_n (-1)^n 2^{n+1} x^n (log T)^{n+1} / (n+1)!."""
    if terms < 1:
        raise ValueError("terms >= 1")
    x = complex(x)
    logT = math.log(T)
    total = 0.0 + 0.0j
    for n in range(terms):
        total += ((-1) ** n * 2.0 ** (n + 1) * x ** n * logT ** (n + 1)
                  / math.factorial(n + 1))
    return cf * T * total


def f_series_closed_form(cf, x, T):
    """c_f T (1 - T^{-2x}) / x, the resummed series (x != 0)."""
    x = complex(x)
    if x == 0:
        return cf * T * 2.0 * math.log(T)
    return cf * T * (1.0 - T ** (-2.0 * x)) / x


# ----------------------------------------------------------------------
# mean-value toolkit

def mv_meanvalue_check(a, H, T0=0.0, nodes_per_panel=10):
    """(lhs, diag, bound) for the discrete mean value of sum a_n n^{it}.

    lhs is the quadrature of |sum a_n n^{it}|^2 over [T0, T0+H]; diag is
    H * sum |a_n|^2; bound is sum n |a_n|^2, the discrepancy scale.
    """
    a = np.asarray(a, dtype=complex)
    if H <= 0:
        raise ValueError("H > 0")
    ns = np.arange(1, len(a) + 1, dtype=float)
    lnn = np.log(ns)
    # panel short enough for the fastest oscillation log(n_max)
    panels = int(math.ceil(H * max(lnn[-1], 0.1) / 2.0)) + 1
    x, w = gl_nodes(nodes_per_panel)
    edges = np.linspace(T0, T0 + H, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    total = 0.0
    chunk = max(1, 40_000 // nodes_per_panel)
    for start in range(0, panels, chunk):
        end = min(start + chunk, panels)
        mids = 0.5 * (edges[start:end] + edges[start + 1:end + 1])
        pts = (mids[:, None] + half * x[None, :]).ravel()
        series = np.exp(1j * np.outer(pts, lnn)) @ a
        vals = np.abs(series) ** 2
        total += half * float(np.sum(vals.reshape(len(mids), -1) @ w))
    diag = H * float(np.sum(np.abs(a) ** 2))
    bound = float(np.sum(ns * np.abs(a) ** 2))
    return total, diag, bound


def mv_meanvalue_exact(a, H, T0=0.0):
    """Closed-form value of the same integral (test oracle for the quadrature)."""
    a = np.asarray(a, dtype=complex)
    ns = np.arange(1, len(a) + 1, dtype=float)
    lnr = np.log(ns)[:, None] - np.log(ns)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = (np.exp(1j * (T0 + H) * lnr) - np.exp(1j * T0 * lnr)) / (1j * lnr)
    np.fill_diagonal(kern, H)
    return float(np.real(np.sum(np.outer(a, np.conj(a)) * kern)))


def weighted_sum_check(spec, T, alpha, beta, rs_tbl=None, cf=None):
    """(lhs, rhs) for the smoothed convolution sum identity.

    lhs = sum |a(n)|^2 n^{-1-a-b} e^{-2n/T}, truncated where the weight
    drops below 1e-18; rhs = L(1+a+b, fxf) + c_f Gamma(-a-b) (T/2)^{-a-b}.
    """
    x = complex(alpha) + complex(beta)
    if x == 0:
        raise DegenerateShiftError("alpha + beta must be nonzero")
    c = _cf(spec, cf)
    rs = rs_tbl if rs_tbl is not None else rankin_selberg_table(spec.coefficients)
    ncut = min(rs.N, int(math.ceil(0.5 * T * math.log(1e18))) + 1)
    ns = np.arange(1, ncut + 1, dtype=float)
    lhs = complex(np.sum(np.real(rs.values[:ncut]) * ns ** (-1.0 - x)
                         * np.exp(-2.0 * ns / T)))
    lval, _ = rankin_selberg_value(rs, 1.0 + x, c)
    rhs = lval + c * np.exp(log_gamma(-x)) * (T / 2.0) ** (-x)
    return lhs, complex(rhs)


def truncated_sum_check(spec, T, alpha, beta, rs_tbl=None, cf=None):
    """(lhs, rhs) for the sharp-cutoff convolution sum identity.

    lhs = sum_{n<=T} |a(n)|^2 n^{-1+a+b};
    rhs = L(1-a-b, fxf) + T^{a+b} c_f/(a+b).
    """
    x = complex(alpha) + complex(beta)
    if x == 0:
        raise DegenerateShiftError("alpha + beta must be nonzero")
    c = _cf(spec, cf)
    rs = rs_tbl if rs_tbl is not None else rankin_selberg_table(spec.coefficients)
    ncut = min(rs.N, int(T))
    ns = np.arange(1, ncut + 1, dtype=float)
    lhs = complex(np.sum(np.real(rs.values[:ncut]) * ns ** (-1.0 + x)))
    lval, _ = rankin_selberg_value(rs, 1.0 - x, c)
    rhs = lval + T ** x * c / x
    return lhs, complex(rhs)
