"""Expected Euler products over random multiplicative functions, and prime sums.

The central closed form: for a random completely multiplicative unit f and
parameters alpha, beta, sigma_1, sigma_2 >= 0, t_1, t_2 real, with
100*(1 + max(alpha^2, beta^2)) <= z < y,

  E prod_{z <= p <= y} |1 - f(p)/p^{1/2+sigma_1+i t_1}|^{-2 alpha}
                       |1 - f(p)/p^{1/2+sigma_2+i t_2}|^{-2 beta}
    = exp( sum_p [ alpha^2/p^{1+2 sigma_1} + beta^2/p^{1+2 sigma_2}
                   + 2 alpha beta cos((t_2 - t_1) log p)/p^{1+sigma_1+sigma_2} ]
           + O(max(alpha, alpha^3, beta, beta^3)/sqrt(z)) ),

with the sum over the same primes as the product.  The O(.) bracket is
surfaced as data (error_bracket), never silently added to the main term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import primes, rmf
from .errors import Divergent, HypothesisViolated, QuadratureFailure

HYPOTHESIS_FACTOR = 100.0


@dataclass(frozen=True)
class EulerProductSpec:
    """Parameter bundle for the two-factor expected Euler product."""

    alpha: float
    beta: float
    sigma1: float
    sigma2: float
    t1: float
    t2: float
    z: float
    y: float

    def validate(self) -> None:
        if min(self.alpha, self.beta, self.sigma1, self.sigma2) < 0:
            raise HypothesisViolated("alpha, beta, sigma1, sigma2 must be >= 0")
        need = HYPOTHESIS_FACTOR * (1.0 + max(self.alpha**2, self.beta**2))
        if not (need <= self.z < self.y):
            raise HypothesisViolated(
                f"need {need:.6g} <= z < y, got z = {self.z}, y = {self.y}"
            )


def prime_sum_exponent(alpha: float, beta: float, sigma1: float, sigma2: float,
                       dt: float, p_lo: float, p_hi: float) -> float:
    """sum over primes p in [p_lo, p_hi] of the three closed-form terms."""
    ps = primes.primes_up_to(p_hi)
    ps = ps[ps >= p_lo].astype(np.float64)
    if ps.size == 0:
        return 0.0
    lp = np.log(ps)
    s = (alpha**2 * np.power(ps, -(1.0 + 2.0 * sigma1))
         + beta**2 * np.power(ps, -(1.0 + 2.0 * sigma2))
         + 2.0 * alpha * beta * np.cos(dt * lp) * np.power(ps, -(1.0 + sigma1 + sigma2)))
    return float(math.fsum(s.tolist()))


def expected_product_exponent(spec: EulerProductSpec) -> float:
    """Main-term exponent, summed over the product's prime range [z, y]."""
    spec.validate()
    return prime_sum_exponent(spec.alpha, spec.beta, spec.sigma1, spec.sigma2,
                              spec.t2 - spec.t1, spec.z, spec.y)


def expected_product(spec: EulerProductSpec) -> float:
    """exp of the main-term exponent."""
    return math.exp(expected_product_exponent(spec))


def error_bracket(spec: EulerProductSpec) -> float:
    """Size of the suppressed error term: max(alpha, alpha^3, beta, beta^3)/sqrt(z)."""
    a, b = spec.alpha, spec.beta
    return max(a, a**3, b, b**3) / math.sqrt(spec.z)


def pair_factor_expectation(p: float, alpha: float, sigma1: float,
                            beta: float = 0.0, sigma2: float = 0.0,
                            dt: float = 0.0, tol: float = 1e-10) -> float:
    """Single-prime expectation by angle quadrature.

    E_theta |1 - r1 e^{i theta}|^{-2 alpha} |1 - r2 e^{i(theta+Delta)}|^{-2 beta}
    with r_j = p^{-1/2-sigma_j} and Delta = dt*log(p).  Raises Divergent when a
    radius reaches 1.
    """
    r1 = p ** (-0.5 - sigma1)
    r2 = p ** (-0.5 - sigma2)
    if (alpha > 0 and r1 >= 1.0) or (beta > 0 and r2 >= 1.0):
        raise Divergent(f"unit-disc radius reached 1 at p = {p}")
    delta = dt * math.log(p)

    def integrand(theta: float) -> float:
        m1 = 1.0 + r1 * r1 - 2.0 * r1 * math.cos(theta)
        m2 = 1.0 + r2 * r2 - 2.0 * r2 * math.cos(theta + delta)
        return m1 ** (-alpha) * m2 ** (-beta)

    val, err = integrate.quad(integrand, 0.0, 2.0 * math.pi, epsabs=tol, epsrel=tol, limit=400)
    if err > 100 * tol * max(1.0, abs(val)):
        raise QuadratureFailure(f"angle quadrature error {err:.3g} too large")
    return val / (2.0 * math.pi)


def single_factor_expectation(p: float, alpha: float, sigma: float) -> float:
    """E |1 - f(p)/p^{1/2+sigma}|^{-2 alpha} by quadrature."""
    return pair_factor_expectation(p, alpha, sigma)


def geometric_single_factor(p: float, sigma: float) -> float:
    """Closed form at alpha = 1: E |1 - f(p) p^{-1/2-sigma}|^{-2} = 1/(1 - p^{-1-2 sigma})."""
    return 1.0 / (1.0 - p ** (-1.0 - 2.0 * sigma))


def product_expectation_quad(y: float, alpha: float, sigma: float,
                             p_lo: float = 2.0) -> float:
    """prod over p in [p_lo, y] of the single-factor quadrature expectations."""
    total = 0.0
    for p in primes.primes_up_to(y):
        if p < p_lo:
            continue
        total += math.log(single_factor_expectation(float(p), alpha, sigma))
    return math.exp(total)


def pair_product_quad(spec: EulerProductSpec) -> float:
    """Two-factor expected product over [z, y], one angle quadrature per prime.

    Independent of the closed-form exponent; used to bound the suppressed
    error term empirically.
    """
    spec.validate()
    dt = spec.t2 - spec.t1
    total = 0.0
    for p in primes.primes_up_to(spec.y):
        if p < spec.z:
            continue
        total += math.log(pair_factor_expectation(float(p), spec.alpha, spec.sigma1,
                                                  spec.beta, spec.sigma2, dt))
    return math.exp(total)


def mc_product_estimate(spec: EulerProductSpec, trials: int, seed: int,
                        batch: int = 2048) -> tuple[float, float]:
    """Monte Carlo (mean, stderr) of the Euler product over [z, y].

    Trials use independent child seeds derived from seed; results do not
    depend on the batch size.
    """
    spec.validate()
    ps = primes.primes_up_to(spec.y)
    ps = ps[ps >= spec.z]
    lp = np.log(ps.astype(np.float64))
    w1 = np.exp(-(0.5 + spec.sigma1) * lp - 1j * spec.t1 * lp)
    w2 = np.exp(-(0.5 + spec.sigma2) * lp - 1j * spec.t2 * lp)
    seeds = rmf.derive_trial_seeds(seed, trials)
    samples = np.empty(trials, dtype=np.float64)
    for i in range(0, trials, batch):
        chunk = seeds[i : i + batch]
        keys = rmf._mix_array(chunk)
        h = rmf._mix_array(keys[:, None] ^ ps.astype(np.uint64)[None, :])
        f = np.exp(1j * (h >> np.uint64(11)).astype(np.float64) * (2.0 * np.pi / (1 << 53)))
        m1 = np.abs(1.0 - f * w1[None, :]) ** 2
        m2 = np.abs(1.0 - f * w2[None, :]) ** 2
        logx = -(spec.alpha * np.log(m1).sum(axis=1) + spec.beta * np.log(m2).sum(axis=1))
        samples[i : i + chunk.size] = np.exp(logx)
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(trials))
    return mean, stderr


# ---------------------------------------------------------------------------
# prime cosine sums and the Mertens product

@dataclass(frozen=True)
class CosineSumResult:
    """Value and branch bound for sum_{p <= y} cos(t log p)/p."""

    t: float
    y: float
    value: float
    branch: str
    bound: float


def cosine_sum(t: float, y: float) -> CosineSumResult:
    """Evaluate sum_{p <= y} cos(t log p)/p and the branch-dependent size bound.

    Branches: |t| <= 1/log(y) behaves like log log y; moderate |t| like
    log(1/|t|); |t| >= 10 like log log |t|.  The O(1) slack on each branch is
    an empirical calibration constant, reported by the verification checks.
    """
    if y < 2:
        raise HypothesisViolated("y must be >= 2")
    ps = primes.primes_up_to(y).astype(np.float64)
    value = float(math.fsum((np.cos(t * np.log(ps)) / ps).tolist()))
    at = abs(t)
    ly = math.log(y)
    if at <= 1.0 / ly:
        branch, bound = "small", math.log(ly) if ly > 1 else 0.0
    elif at < 10.0:
        branch, bound = "moderate", math.log(1.0 / at)
    else:
        branch, bound = "large", math.log(math.log(at))
    return CosineSumResult(t=float(t), y=float(y), value=value, branch=branch, bound=bound)


def mertens_product(y: float) -> float:
    """prod_{p <= y} (1 - 1/p)."""
    ps = primes.primes_up_to(y).astype(np.float64)
    return float(np.prod(1.0 - 1.0 / ps)) if ps.size else 1.0
