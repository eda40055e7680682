"""L-function data model: functional-equation data, gamma-factor machinery,
the rotated real function on the critical line, and counting main terms.

Gamma factors follow the axiomatic shape L_inf(s) = Q^s prod_j Gamma(w_j s + mu_j).
Phi is always computed through log-gamma differences, never gamma quotients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import CoefficientTable, gen_delta, gen_zeta
from .special_functions import log_gamma

__all__ = [
    "FunctionalEquationData",
    "LFunctionSpec",
    "zeta_spec",
    "delta_spec",
    "log_phi",
    "phi_factor",
    "log_gamma_factor",
    "completed_lambda",
    "fe_residual",
    "hardy_z",
    "rotation",
    "analytic_conductor",
    "zero_count_main_term",
    "branch_step",
    "parse_spec_config",
]


class ShapeError(ValueError):
    """Spec does not have the gamma-factor shape an operation requires."""


@dataclass(frozen=True)
class FunctionalEquationData:
    """Axiomatic functional-equation data for one L-function.

    conductor_shifts are the weight-scale parameters entering the analytic
    conductor; they default to twice the gamma shifts, which for a weight-k
    holomorphic form reproduces (k-1)/2 and (k+1)/2.
    """

    Q: float
    gamma_weights: tuple
    gamma_shifts: tuple
    root_number: complex
    level: int
    degree: float
    conductor_shifts: tuple = None

    def __post_init__(self):
        if self.Q <= 0 or self.level < 1:
            raise ValueError("need Q > 0 and level >= 1")
        if len(self.gamma_weights) != len(self.gamma_shifts):
            raise ValueError("weights/shifts length mismatch")
        if any(w <= 0 for w in self.gamma_weights):
            raise ValueError("gamma weights must be positive")
        if any(complex(mu).real < 0 for mu in self.gamma_shifts):
            raise ValueError("gamma shifts need Re mu >= 0")
        if abs(self.degree - 2.0 * sum(self.gamma_weights)) > 1e-12:
            raise ValueError("degree must equal 2 * sum of gamma weights")
        shifts = [complex(mu) for mu in self.gamma_shifts]
        conj_sorted = sorted(((z.real, -z.imag) for z in shifts))
        if conj_sorted != sorted(((z.real, z.imag) for z in shifts)):
            raise ValueError("gamma shifts must be stable under conjugation")
        if abs(abs(complex(self.root_number)) - 1.0) > 1e-14:
            raise ValueError("|root number| must be 1")
        if self.conductor_shifts is None:
            object.__setattr__(self, "conductor_shifts",
                               tuple(2.0 * complex(mu) for mu in self.gamma_shifts))


@dataclass(frozen=True)
class LFunctionSpec:
    """One L-function: functional-equation data plus a coefficient table."""

    name: str
    fe: FunctionalEquationData
    coefficients: CoefficientTable
    self_dual: bool
    residue_cf: float | None = None
    # pole-clearing polynomial P(s) of the completed function, as exponent
    # pairs [(root, multiplicity)]; empty for entire cusp-form L-functions.
    pole_roots: tuple = ()

    def __post_init__(self):
        if abs(self.coefficients.a(1) - 1.0) > 1e-14:
            raise ValueError("coefficients must be normalized to a(1) = 1")
        if self.self_dual and np.max(np.abs(self.coefficients.values.imag)) > 1e-14:
            raise ValueError("self-dual spec requires real coefficients")

    def dual_coefficients(self):
        return np.conj(self.coefficients.values)


def zeta_spec(N=10_000):
    """Degree-1 control spec: every pipeline gets a well-charted target."""
    fe = FunctionalEquationData(
        Q=math.pi ** -0.5,
        gamma_weights=(0.5,),
        gamma_shifts=(0.0,),
        root_number=1.0,
        level=1,
        degree=1.0,
    )
    return LFunctionSpec(name="zeta", fe=fe, coefficients=gen_zeta(N),
                         self_dual=True, residue_cf=1.0,
                         pole_roots=((0.0, 1), (1.0, 1)))


def delta_spec(N=10_000, table=None):
    """The discriminant cusp form Delta (weight 12, level 1).

    The gamma-shift pair (11/4, 13/4) with w = 1/2 is the duplication-exact
    decomposition of the classical factor (2 pi)^{-s} Gamma(s + 11/2); the
    equivalence is asserted by unit tests.
    """
    fe = FunctionalEquationData(
        Q=1.0 / math.pi,
        gamma_weights=(0.5, 0.5),
        gamma_shifts=(11.0 / 4.0, 13.0 / 4.0),
        root_number=1.0,
        level=1,
        degree=2.0,
        conductor_shifts=(11.0 / 2.0, 13.0 / 2.0),
    )
    tbl = table if table is not None else gen_delta(N)
    return LFunctionSpec(name="delta", fe=fe, coefficients=tbl,
                         self_dual=True, residue_cf=None)


# ----------------------------------------------------------------------
# gamma-factor machinery

def log_gamma_factor(fe, s, dual=False, with_poly=()):
    """log L_inf(s) = s log Q + sum_j log Gamma(w_j s + mu_j), elementwise.

    dual=True uses the conjugated archimedean parameters. with_poly adds
    log P(s) for the listed (root, multiplicity) pole-clearing factors.
    """
    s = np.asarray(s, dtype=complex)
    out = s * np.log(fe.Q)
    for w, mu in zip(fe.gamma_weights, fe.gamma_shifts):
        muv = np.conj(complex(mu)) if dual else complex(mu)
        out = out + log_gamma(w * s + muv)
    for root, mult in with_poly:
        out = out + mult * np.log(s - root)
    return out


def log_phi(spec, s):
    """log Phi(s) = log L_inf(1-s, dual) - log L_inf(s), branch-continuous.

    Continuity in t along s = 1/2 + it holds because each log-gamma argument
    keeps positive real part, so no branch cut is crossed and no stepwise
    unwrapping is required.
    """
    s = np.asarray(s, dtype=complex)
    return (log_gamma_factor(spec.fe, 1.0 - s, dual=True)
            - log_gamma_factor(spec.fe, s, dual=False))


def phi_factor(spec, s):
    """Phi(s) = L_inf(1-s, dual)/L_inf(s) via log-gamma differences."""
    return np.exp(log_phi(spec, s))


def completed_lambda(spec, s, l_value):
    """Lambda(s) = L_inf(s) * l_value, assembled in log scale."""
    lg = log_gamma_factor(spec.fe, s)
    return np.exp(lg + np.log(complex(l_value)))


def fe_residual(spec, s, l_value, l_value_dual):
    """Functional-equation closure diagnostics at s.

    Given trusted values L(s) and L_dual(1-s), returns (absolute, relative)
    residuals of Lambda(s) = eps * Lambda_dual(1-s), computed in log scale
    so the comparison survives the gamma factor's exponential decay.
    """
    s = complex(s)
    log_lam = (log_gamma_factor(spec.fe, s) + np.log(complex(l_value)))
    log_lam_d = (log_gamma_factor(spec.fe, 1.0 - s, dual=True)
                 + np.log(complex(l_value_dual)))
    eps = complex(spec.fe.root_number)
    ratio = eps * np.exp(log_lam_d - log_lam)
    rel = abs(1.0 - ratio)
    absres = abs(np.exp(log_lam)) * rel
    return absres, rel


# ----------------------------------------------------------------------
# critical-line rotation

def rotation(spec, t):
    """The unimodular omega(t) with omega^2 = (eps * Phi(1/2 + it))^{-1}.

    omega is continuous in t by construction: log Phi is an additive
    combination of principal log-gammas whose arguments never cross the
    branch cut, so the half-phase needs no incremental tracking. The
    branch anchor is log Phi(1/2) = 0, giving omega(0+) = eps^{-1/2}.
    """
    t = np.asarray(t, dtype=float)
    s = 0.5 + 1j * t
    lp = log_phi(spec, s)
    eps = complex(spec.fe.root_number)
    log_eps = 1j * np.angle(eps)
    return np.exp(-0.5 * (log_eps + lp))


def hardy_z(spec, t, l_value):
    """Z(t) = omega(t) * L(1/2 + it): real up to tolerance for self-dual specs."""
    if not spec.self_dual:
        raise ShapeError("hardy_z requires a self-dual spec")
    z = rotation(spec, t) * np.asarray(l_value, dtype=complex)
    return z.real if np.ndim(z) else float(np.real(z))


def branch_step(spec, t):
    """Recommended max spacing for phase-coherent t-grids near height t."""
    q = spec.fe.level
    return math.pi / (4.0 * math.log(math.sqrt(q) * (abs(t) + 10.0)))


# ----------------------------------------------------------------------
# counting

def analytic_conductor(spec, s):
    """q (2 pi)^{-2} |s + 2 c_1| |s + 2 c_2| with c_j the conductor shifts."""
    if len(spec.fe.conductor_shifts) != 2:
        raise ShapeError("analytic conductor is defined for GL(2)-shaped specs")
    s = complex(s)
    c1, c2 = spec.fe.conductor_shifts
    return (spec.fe.level / (2.0 * math.pi) ** 2
            * abs(s + 2.0 * c1) * abs(s + 2.0 * c2))


def zero_count_main_term(spec, T):
    """Expected zero count to height T.

    Degree 2: (T/pi) log(sqrt(q) T / (2 pi e)). The degree-1 control uses
    the classical (T/2pi) log(T/(2 pi e)) + 7/8 and is flagged control-only.
    """
    if T < 1:
        raise ValueError("T >= 1")
    q = spec.fe.level
    if abs(spec.fe.degree - 2.0) < 1e-12:
        return T / math.pi * math.log(math.sqrt(q) * T / (2.0 * math.pi * math.e))
    if abs(spec.fe.degree - 1.0) < 1e-12:
        return T / (2.0 * math.pi) * math.log(T / (2.0 * math.pi * math.e)) + 7.0 / 8.0
    raise ShapeError("zero-count main term implemented for degrees 1 and 2")


# ----------------------------------------------------------------------
# registry configuration

_SPEC_KEYS = {"name", "Q", "weights", "shifts", "epsilon", "level", "coefficients"}


def parse_spec_config(text):
    """Parse key = value blocks describing L-function specs.

    Blocks are separated by blank lines. Keys: name, Q, weights, shifts,
    epsilon, level, coefficients (builtin-zeta | builtin-delta[:N] | a cache
    path). Unknown keys are rejected.
    """
    from .coefficients import read_table

    specs = []
    blocks = [b for b in text.split("\n\n") if b.strip()]
    for block in blocks:
        kv = {}
        for line in block.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in _SPEC_KEYS:
                raise ValueError(f"unknown spec key: {key!r}")
            kv[key] = val.strip()
        missing = _SPEC_KEYS - set(kv)
        if missing:
            raise ValueError(f"spec block missing keys: {sorted(missing)}")
        weights = tuple(float(x) for x in kv["weights"].split(","))
        shifts = tuple(complex(x) for x in kv["shifts"].split(","))
        fe = FunctionalEquationData(
            Q=float(kv["Q"]), gamma_weights=weights, gamma_shifts=shifts,
            root_number=complex(kv["epsilon"]), level=int(kv["level"]),
            degree=2.0 * sum(weights))
        src = kv["coefficients"]
        if src.startswith("builtin-zeta"):
            n = int(src.split(":")[1]) if ":" in src else 10_000
            tbl = gen_zeta(n)
        elif src.startswith("builtin-delta"):
            n = int(src.split(":")[1]) if ":" in src else 10_000
            tbl = gen_delta(n)
        else:
            tbl = read_table(src)
        self_dual = bool(np.max(np.abs(tbl.values.imag)) < 1e-14
                         and abs(complex(kv["epsilon"]).imag) < 1e-14)
        specs.append(LFunctionSpec(name=kv["name"], fe=fe, coefficients=tbl,
                                   self_dual=self_dual))
    return {sp.name: sp for sp in specs}
