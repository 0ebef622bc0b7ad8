"""Moment computations: character averages, Monte Carlo estimates, cross
moments against proxy weights, and growth-shape fits.

The 2k-th character moment is (1/divisor) sum over non-principal chi of
|S_chi(x)|^{2k}.  At k = 1 with divisor q - 1 it has the closed form
floor(x) - floor(x)^2/(q-1).  The random multiplicative analogue is estimated
by seeded Monte Carlo; agreement of the two at matched scales is the object
of the verification checks rather than anything assumed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import primes, proxy, rmf
from .charsum import all_char_sums_fft
from .errors import Degenerate, DomainError, LengthViolation
from .modarith import PrimeModulus


@dataclass(frozen=True)
class MomentEstimate:
    """A moment value with its sampling uncertainty (0 for exact routes)."""

    value: float
    stderr: float
    trials: int
    kind: str


def _abs_power_2k(values: np.ndarray, k: float) -> np.ndarray:
    """|v|^{2k} with the k = 0 convention |v|^0 = 1 (counting measure)."""
    if k == 0:
        return np.ones(values.shape)
    return np.abs(values) ** (2.0 * k)


def char_moment(mod: PrimeModulus, x: float, k: float,
                exclude_principal: bool = True,
                divisor: str = "phi") -> MomentEstimate:
    """(1/divisor) sum over characters of |S_chi(x)|^{2k}, exactly.

    divisor "phi" uses q - 1; "nontrivial" uses q - 2 (the count of
    non-principal characters).  The summation range is controlled separately
    by exclude_principal.
    """
    if divisor not in ("phi", "nontrivial"):
        raise DomainError(f"divisor must be 'phi' or 'nontrivial', got {divisor!r}")
    table = all_char_sums_fft(mod, x)
    powers = _abs_power_2k(table.values, k)
    total = float(powers[1:].sum()) if exclude_principal else float(powers.sum())
    den = (mod.q - 1) if divisor == "phi" else (mod.q - 2)
    n_terms = (mod.q - 2) if exclude_principal else (mod.q - 1)
    return MomentEstimate(value=total / den, stderr=0.0, trials=n_terms,
                          kind="exact-characters")


def second_moment_closed_form(q: int, x: float) -> float:
    """k = 1, divisor q - 1: floor(x) - floor(x)^2/(q - 1)."""
    xf = math.floor(x)
    return xf - xf * xf / (q - 1)


def congruence_energy(q: int, x: float) -> int:
    """Exact count of quadruples n_i <= x with n_1 n_2 = n_3 n_4 (mod q)."""
    xf = int(math.floor(x))
    ns = np.arange(1, xf + 1, dtype=np.int64)
    residues = np.multiply.outer(ns, ns).ravel() % q
    counts = np.bincount(residues, minlength=q)
    return int(np.sum(counts.astype(np.int64) ** 2))


def rmf_moment_mc(x: float, k: float, trials: int, seed: int,
                  batch: int | None = None) -> MomentEstimate:
    """Monte Carlo estimate of E |sum_{n <= x} f(n)|^{2k}.

    Per-trial child seeds derive from (seed, trial index); identical inputs
    give bit-identical output regardless of batch size.
    """
    if trials < 2:
        raise DomainError("need at least 2 trials for a standard error")
    xf = int(math.floor(x))
    if batch is None:
        # keep the trial x value matrix around 64 MB
        batch = max(16, min(trials, (4 << 20) // max(1, xf)))
    seeds = rmf.derive_trial_seeds(seed, trials)
    powers = np.empty(trials, dtype=np.float64)
    ps = primes.primes_up_to(xf)
    for i in range(0, trials, batch):
        chunk = seeds[i : i + batch]
        sums = rmf.partial_sums_batch(chunk, x, ps)
        powers[i : i + chunk.size] = _abs_power_2k(sums, k)
    mean = float(powers.mean())
    stderr = float(powers.std(ddof=1) / math.sqrt(trials))
    return MomentEstimate(value=mean, stderr=stderr, trials=trials, kind="mc-rmf")


def cross_moment(mod: PrimeModulus, x: float, params: proxy.ProxyParams) -> float:
    """(1/(q-1)) sum over non-principal chi of |S_chi(x)|^2 R(chi), exactly.

    Refuses when x * prod_m y_m^{4 J_m} >= q: beyond that length the weighted
    polynomial wraps around the character group and the diagonal identity
    backing this average no longer holds.
    """
    if params.poly_length_log() + math.log(x) >= math.log(mod.q):
        raise LengthViolation(
            f"x * prod y_m^(4 J_m) >= q = {mod.q}: cross moment undefined at this length"
        )
    s = all_char_sums_fft(mod, x).values
    w = proxy.proxy_weight_all_chars(mod, params)
    contrib = (np.abs(s) ** 2) * w
    return float(contrib[1:].sum() / (mod.q - 1))


def cross_moment_exact_rmf(x: float, params: proxy.ProxyParams) -> float:
    """E |sum_{n <= x} f(n)|^2 R(f) by exact diagonal counting (small sizes)."""
    xf = int(math.floor(x))
    s = proxy.FPoly({(n, 1): 1.0 + 0j for n in range(1, xf + 1)})
    expr = s.abs2() * proxy.proxy_weight_fpoly(params)
    val = expr.expectation()
    return float(val.real)


def proxy_power_moment(mod: PrimeModulus, params: proxy.ProxyParams) -> float:
    """(1/(q-1)) sum over non-principal chi of R(chi)^{k/(k-1)}."""
    w = proxy.proxy_weight_all_chars(mod, params)
    p = params.k / (params.k - 1.0)
    return float((w[1:] ** p).sum() / (mod.q - 1))


@dataclass(frozen=True)
class ShapeFit:
    """Least-squares fit of log(moment/scale^k) against log log scale."""

    exponent: float
    intercept: float
    residual: float
    exponent_stderr: float


def shape_fit(points: list[tuple[float, float]], k: float) -> ShapeFit:
    """Fit moment ~ C * scale^k * (log scale)^e and return e with an error bar.

    Needs at least 4 points with distinct scales > e.
    """
    if len(points) < 4:
        raise Degenerate("need at least 4 points")
    xs = np.array([p[0] for p in points], dtype=np.float64)
    ms = np.array([p[1] for p in points], dtype=np.float64)
    if np.unique(xs).size != xs.size:
        raise Degenerate("scales must be distinct")
    if xs.min() <= math.e:
        raise Degenerate("scales must exceed e for a log log abscissa")
    if ms.min() <= 0:
        raise Degenerate("moments must be positive")
    t = np.log(np.log(xs))
    yv = np.log(ms) - k * np.log(xs)
    a = np.vstack([t, np.ones_like(t)]).T
    coef, *_ = np.linalg.lstsq(a, yv, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = yv - (slope * t + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    dof = len(points) - 2
    var = float(resid @ resid) / dof if dof > 0 else 0.0
    denom = float(((t - t.mean()) ** 2).sum())
    stderr = math.sqrt(var / denom) if denom > 0 else math.inf
    return ShapeFit(exponent=slope, intercept=intercept, residual=rms,
                    exponent_stderr=stderr)
