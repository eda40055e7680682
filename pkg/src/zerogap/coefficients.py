"""Dirichlet coefficient generation and arithmetic helpers.

Builtins: the zeta control table (all ones) and the level-1 weight-12 cusp
form Delta, whose tau(n) are generated exactly in big-integer arithmetic
from the eta^24 product and normalized to the analytic a(n) = tau(n)/n^{11/2}.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import gmpy2
import numpy as np

__all__ = [
    "CoefficientTable",
    "SatakeLocal",
    "LogCoefficientTable",
    "gen_zeta",
    "gen_delta",
    "rankin_selberg_table",
    "satake",
    "log_coefficients",
    "hypothesis_s_ratio",
    "residue_estimate",
    "rankin_selberg_value",
    "tau_exact",
    "tau_reference",
    "write_table",
    "read_table",
]

DELTA_WEIGHT = 12
DELTA_POWER = (DELTA_WEIGHT - 1) / 2.0  # 11/2
MAX_DELTA_N = 2_000_000


class ResourceLimitError(ValueError):
    """Requested table length exceeds the configured generation maximum."""


@dataclass(frozen=True)
class CoefficientTable:
    """Normalized Dirichlet coefficients a(1..N), critical line at 1/2."""

    values: np.ndarray          # complex, index n-1 holds a(n)
    N: int
    normalization: str = "analytic"
    source: str = "file"
    integer_values: tuple | None = None  # exact tau(n) when source=builtin-delta

    def __post_init__(self):
        if self.N < 1 or len(self.values) != self.N:
            raise ValueError("table length mismatch")
        if abs(self.values[0] - 1.0) > 1e-14:
            raise ValueError("coefficient tables are normalized to a(1) = 1")

    def a(self, n):
        return self.values[n - 1]

    def content_hash(self):
        h = hashlib.sha256()
        h.update(f"{self.source}:{self.N}:{self.normalization}".encode())
        h.update(np.ascontiguousarray(self.values).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class SatakeLocal:
    """Local parameters alpha, beta with alpha+beta = a(p), alpha*beta = 1."""

    p: int
    alpha: complex
    beta: complex


@dataclass(frozen=True)
class LogCoefficientTable:
    """Dirichlet-log coefficients b(n) (prime-power supported) and upsilon = b*log."""

    b: dict = field(default_factory=dict)
    upsilon: dict = field(default_factory=dict)
    N: int = 0


# ----------------------------------------------------------------------
# generation

def gen_zeta(N):
    """a(n) = 1 for n <= N (degree-1 control)."""
    if N < 1:
        raise ValueError("N >= 1")
    return CoefficientTable(values=np.ones(N, dtype=complex), N=N,
                            source="builtin-zeta")


def _eta3_sparse(N):
    """Coefficients of eta^3/q^{1/8} = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    c = [0] * (N + 1)
    k = 0
    while k * (k + 1) // 2 <= N:
        c[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return c


def _kronecker_square(coeffs, N, bits):
    """Exact truncated square of an integer polynomial via one GMP multiply.

    The polynomial is packed into a single integer with `bits`-wide signed
    digits (balanced representation); squaring the packed integers and
    unpacking with a carry chain recovers the convolution exactly as long
    as every true coefficient stays below 2^(bits-1).
    """
    nb = bits // 8
    base = 1 << bits
    half = base >> 1
    pos = b"".join((ci if ci > 0 else 0).to_bytes(nb, "little")
                   for ci in coeffs[: N + 1])
    neg = b"".join((-ci if ci < 0 else 0).to_bytes(nb, "little")
                   for ci in coeffs[: N + 1])
    enc = gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(
        int.from_bytes(neg, "little"))
    raw = int(enc * enc).to_bytes((2 * N + 4) * nb, "little", signed=False)
    out = [0] * (N + 1)
    carry = 0
    for i in range(N + 1):
        d = int.from_bytes(raw[i * nb: (i + 1) * nb], "little") + carry
        if d >= half:
            d -= base
            carry = 1
        else:
            carry = 0
        out[i] = d
    return out


def tau_exact(N):
    """Exact tau(1..N) from eta^24 = (eta^3)^8 by three Kronecker squarings."""
    c = _eta3_sparse(N)
    c = _kronecker_square(c, N, 64)    # eta^6
    c = _kronecker_square(c, N, 128)   # eta^12
    c = _kronecker_square(c, N, 192)   # eta^24 / q
    return [0] + c[:N]


def tau_reference(N):
    """Independent tau(1..N): 24 sequential multiplies by the pentagonal series.

    Pure-Python and O(N sqrt N); used to cross-check tau_exact bit for bit.
    """
    pent = {0: 1}
    k = 1
    while k * (3 * k - 1) // 2 <= N:
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g <= N:
                pent[g] = pent.get(g, 0) + (-1) ** k
        k += 1
    pent_items = sorted(pent.items())
    f = [0] * (N + 1)
    f[0] = 1
    for _ in range(24):
        g = [0] * (N + 1)
        for e, s in pent_items:
            for i in range(0, N + 1 - e):
                v = f[i]
                if v:
                    g[i + e] += s * v
        f = g
    return [0] + f[:N]


def gen_delta(N, max_n=MAX_DELTA_N):
    """Normalized Delta coefficients a(n) = tau(n)/n^{11/2}, tau exact."""
    if N < 1:
        raise ValueError("N >= 1")
    if N > max_n:
        raise ResourceLimitError(f"N={N} exceeds the configured maximum {max_n}")
    tau = tau_exact(N)
    ns = np.arange(1, N + 1, dtype=float)
    vals = np.array([float(t) for t in tau[1:]]) / ns ** DELTA_POWER
    return CoefficientTable(values=vals.astype(complex), N=N,
                            source="builtin-delta",
                            integer_values=tuple(tau[1:]))


def rankin_selberg_table(tbl):
    """Entrywise |a(n)|^2 (real, non-negative)."""
    vals = np.abs(tbl.values) ** 2
    return CoefficientTable(values=vals.astype(complex), N=tbl.N,
                            source=f"rs({tbl.source})")


# ----------------------------------------------------------------------
# local / logarithmic structure

def satake(tbl, p):
    """Roots of x^2 - a(p) x + 1 (level-1, trivial central character)."""
    if p > tbl.N:
        raise ValueError("p beyond table length")
    ap = complex(tbl.a(p))
    disc = np.sqrt(complex(ap * ap - 4.0))
    alpha = (ap + disc) / 2.0
    beta = (ap - disc) / 2.0
    return SatakeLocal(p=p, alpha=alpha, beta=beta)


def _primes_upto(n):
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            start = p * p
            sieve[start::p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, v in enumerate(sieve) if v]


def log_coefficients(tbl, N):
    """b(p^l) = (alpha^l + beta^l)/l from Satake data; upsilon(n) = b(n) log n."""
    if N > tbl.N:
        raise ValueError("N beyond table length")
    b = {}
    ups = {}
    for p in _primes_upto(N):
        loc = satake(tbl, p)
        al, be = loc.alpha, loc.beta
        pk = p
        el = 1
        while pk <= N:
            bval = (al ** el + be ** el) / el
            b[pk] = bval
            ups[pk] = bval * np.log(pk)
            pk *= p
            el += 1
    return LogCoefficientTable(b=b, upsilon=ups, N=N)


def hypothesis_s_ratio(log_tbl, x):
    """sum_{n<=x} |upsilon(n)|^2 / (x log x)."""
    x = float(x)
    if x > log_tbl.N:
        raise ValueError("x beyond table length")
    total = sum(abs(v) ** 2 for n, v in log_tbl.upsilon.items() if n <= x)
    return float(total / (x * np.log(x)))


# ----------------------------------------------------------------------
# Rankin-Selberg averages

def residue_estimate(rs_tbl, X, samples=64, bootstrap=32, seed=7):
    """Least-squares slope of S(x) = sum_{n<=x}|a(n)|^2 over x in [X/2, X].

    Returns (c_estimate, error_bar); the error bar is a bootstrap spread of
    the fitted slope over resampled grid points.
    """
    X = int(X)
    if X > rs_tbl.N:
        raise ValueError("X beyond table length")
    csum = np.concatenate([[0.0], np.cumsum(np.real(rs_tbl.values))])
    xs = np.linspace(X // 2, X, samples).astype(int)
    ys = csum[xs]
    A = np.vstack([xs.astype(float), np.ones_like(xs, dtype=float)]).T
    slope, _ = np.linalg.lstsq(A, ys, rcond=None)[0]

    rng = np.random.default_rng(seed)
    boots = []
    for _ in range(bootstrap):
        idx = rng.integers(0, samples, size=samples)
        sl, _ = np.linalg.lstsq(A[idx], ys[idx], rcond=None)[0]
        boots.append(sl)
    return float(slope), float(np.std(boots))


def rankin_selberg_value(rs_tbl, s, cf):
    """L(s, f x fbar) by partial sum plus smooth tail correction.

    Approximates sum_{n<=X} |a(n)|^2 n^{-s} + cf X^{1-s}/(s-1) with X the
    full table length. Returns (value, tail_indicator) where the indicator
    is the magnitude of the last retained block, a crude error gauge.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("simple pole at s = 1")
    if s.real <= 0.5:
        raise ValueError("partial-sum continuation needs Re s > 1/2")
    X = rs_tbl.N
    ns = np.arange(1, X + 1, dtype=float)
    terms = np.real(rs_tbl.values) * ns ** (-s)
    partial = np.sum(terms)
    tail = cf * X ** (1.0 - s) / (s - 1.0)
    indicator = float(np.abs(terms[-max(1, X // 100):]).sum())
    return partial + tail, indicator


# ----------------------------------------------------------------------
# cache files

def write_table(tbl, path, name):
    """Write a coefficient cache: header lines then 'n re im [tau]' rows."""
    with open(path, "w") as fh:
        fh.write(f"# name={name}\n")
        fh.write(f"# N={tbl.N}\n")
        fh.write(f"# normalization={tbl.normalization}\n")
        fh.write(f"# source={tbl.source}\n")
        ints = tbl.integer_values
        for i in range(tbl.N):
            v = tbl.values[i]
            if ints is not None:
                fh.write(f"{i+1} {v.real!r} {v.imag!r} {ints[i]}\n")
            else:
                fh.write(f"{i+1} {v.real!r} {v.imag!r}\n")


def read_table(path):
    """Round-trip reader for write_table caches.

    When an exact integer column is present the normalized values are
    recomputed from it at load time, so integer-backed tables round-trip
    bit-exactly.
    """
    meta = {}
    rows = []
    ints = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val.strip()
                continue
            parts = line.split()
            rows.append((int(parts[0]), float(parts[1]), float(parts[2])))
            if len(parts) > 3:
                ints.append(int(parts[3]))
    N = int(meta["N"])
    if [r[0] for r in rows] != list(range(1, N + 1)):
        raise ValueError("coefficient cache is not contiguous and 1-based")
    if ints:
        ns = np.arange(1, N + 1, dtype=float)
        vals = np.array([float(t) for t in ints]) / ns ** DELTA_POWER
        vals = vals.astype(complex)
    else:
        vals = np.array([complex(r, i) for _, r, i in rows])
    return CoefficientTable(values=vals, N=N,
                            normalization=meta.get("normalization", "analytic"),
                            source=meta.get("source", "file"),
                            integer_values=tuple(ints) if ints else None)
