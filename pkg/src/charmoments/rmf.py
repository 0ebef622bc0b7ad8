"""Random completely multiplicative functions with uniform unit-circle values.

A sample assigns f(p) = exp(2*pi*i*U_p) independently at each prime, with U_p
uniform on [0,1), and extends completely multiplicatively.  Values are derived
from a counter-based hash of (seed, p), so they do not depend on evaluation
order and extending the prime limit never reshuffles earlier primes.

E f(n) conj(f(m)) = [n == m], which makes the exact 2k-th moment of the
partial sum a pure counting problem: the number of 2k-tuples with
n_1...n_k = n_{k+1}...n_{2k}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import primes
from .errors import DomainError, OutOfRange, TooLarge

_M64 = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB
# Separate lane for deriving per-trial child seeds so trial streams never
# collide with per-prime value streams.
_TRIAL_SALT = 0xA5A5A5A55A5A5A5A

EXACT_MOMENT_CAP = 10**8


def _mix_int(z: int) -> int:
    """splitmix64 step on a Python int (wrapping at 64 bits)."""
    z = (z + _PHI) & _M64
    z ^= z >> 30
    z = z * _C1 & _M64
    z ^= z >> 27
    z = z * _C2 & _M64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    """splitmix64 step vectorized over a uint64 array."""
    z = (z + np.uint64(_PHI)).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_C1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_C2)
    return z ^ (z >> np.uint64(31))


def _angles(seed: int, ps: np.ndarray) -> np.ndarray:
    """Uniform angles in [0, 2*pi) keyed on (seed, p)."""
    key = np.uint64(_mix_int(int(seed) & _M64))
    h = _mix_array(key ^ ps.astype(np.uint64))
    return (h >> np.uint64(11)).astype(np.float64) * (2.0 * np.pi / (1 << 53))


def derive_trial_seeds(seed: int, trials: int) -> np.ndarray:
    """Independent child seeds for Monte Carlo trials, as a uint64 array."""
    key = _mix_int((int(seed) ^ _TRIAL_SALT) & _M64)
    return _mix_array(np.uint64(key) ^ np.arange(trials, dtype=np.uint64))


@dataclass(eq=False)
class RmfSample:
    """Frozen draw of f(p) on all primes p <= limit."""

    seed: int
    limit: int
    primes: np.ndarray
    fp: np.ndarray

    @cached_property
    def values(self) -> dict[int, complex]:
        """Prime -> f(p) as a plain dict."""
        return {int(p): complex(v) for p, v in zip(self.primes, self.fp)}

    def prime_values(self, ps: np.ndarray) -> np.ndarray:
        """f at an array of primes (must all be <= limit)."""
        idx = np.searchsorted(self.primes, ps)
        if idx.size and (idx.max() >= self.primes.size or np.any(self.primes[idx] != ps)):
            raise OutOfRange("a requested prime is not covered by this sample")
        return self.fp[idx]


def sample(seed: int, limit: int) -> RmfSample:
    """Draw a sample covering all primes up to limit."""
    limit = int(limit)
    if limit < 2:
        raise OutOfRange("limit must be at least 2")
    ps = primes.primes_up_to(limit)
    fp = np.exp(1j * _angles(seed, ps))
    return RmfSample(seed=int(seed), limit=limit, primes=ps, fp=fp)


def value_at(s: RmfSample, n: int) -> complex:
    """f(n) by factorization; OutOfRange when n exceeds the sample limit."""
    n = int(n)
    if n < 1 or n > s.limit:
        raise OutOfRange(f"n = {n} outside [1, limit = {s.limit}]")
    out = 1 + 0j
    for p, e in primes.factorize(n):
        out *= s.values[p] ** e
    return out


def values_upto(s: RmfSample, x: float) -> np.ndarray:
    """Array v with v[n] = f(n) for 0 <= n <= floor(x) (v[0] unused, set to 0).

    Built by a multiplicative sieve: each prime power p^e multiplies its
    residue class by one extra factor of f(p), so v[n] ends up as
    prod f(p)^{v_p(n)}.
    """
    xf = int(math.floor(x))
    if xf > s.limit:
        raise OutOfRange(f"x = {x} exceeds sample limit {s.limit}")
    v = np.ones(xf + 1, dtype=np.complex128)
    v[0] = 0.0
    for p, fp in zip(s.primes, s.fp):
        p = int(p)
        if p > xf:
            break
        power = p
        while power <= xf:
            v[power::power] *= fp
            power *= p
    return v


def partial_sum(s: RmfSample, x: float) -> complex:
    """sum_{n <= x} f(n), accumulated with Kahan compensation."""
    v = values_upto(s, x)
    total = 0j
    comp = 0j
    for z in v[1:]:
        y = z - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return complex(total)


def restricted_sum(s: RmfSample, x: float, kind: str, y: float) -> complex:
    """Partial sum over n <= x restricted to smooth (P+(n) <= y) or rough (P-(n) > y) n.

    n = 1 belongs to both classes.
    """
    xf = int(math.floor(x))
    v = values_upto(s, x)
    if kind == "smooth":
        mask = primes.greatest_factor_sieve(xf) <= y
    elif kind == "rough":
        mask = primes.smallest_factor_sieve(xf) > y
    else:
        raise DomainError(f"kind must be 'smooth' or 'rough', got {kind!r}")
    mask[0] = False
    return complex(np.sum(v[mask]))


@dataclass(frozen=True)
class SmoothRoughSplit:
    """Unique factorization n = smooth_part * rough_part about a cut y."""

    n: int
    y: float
    smooth_part: int
    rough_part: int


def smooth_rough_decompose(n: int, y: float) -> SmoothRoughSplit:
    """Split n into its y-smooth part and the complementary rough part."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    a = 1
    for p, e in primes.factorize(n):
        if p <= y:
            a *= p**e
    return SmoothRoughSplit(n=n, y=float(y), smooth_part=a, rough_part=n // a)


def _product_histogram(values: np.ndarray, counts: np.ndarray, ns: np.ndarray,
                       chunk: int = 1 << 22) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of pairwise products value*n weighted by counts, chunked."""
    acc_v = np.empty(0, dtype=np.int64)
    acc_c = np.empty(0, dtype=np.float64)
    step = max(1, chunk // max(1, values.size))
    for i in range(0, ns.size, step):
        block = np.multiply.outer(values, ns[i : i + step]).ravel()
        w = np.repeat(counts, ns[i : i + step].size)
        both = np.concatenate([acc_v, block])
        bw = np.concatenate([acc_c, w])
        acc_v, inv = np.unique(both, return_inverse=True)
        acc_c = np.bincount(inv, weights=bw)
    return acc_v, acc_c


def exact_moment_2k(x: float, k: int) -> int:
    """E |sum_{n<=x} f(n)|^{2k} exactly: the count of 2k-tuples with equal k-fold products."""
    if k not in (1, 2, 3):
        raise DomainError("k must be 1, 2, or 3")
    xf = int(math.floor(x))
    if xf < 1:
        raise DomainError("x must be >= 1")
    if xf**k > EXACT_MOMENT_CAP:
        raise TooLarge(f"floor(x)^k = {xf**k} exceeds cap {EXACT_MOMENT_CAP}")
    if k == 1:
        return xf
    ns = np.arange(1, xf + 1, dtype=np.int64)
    vals, counts = np.unique(np.multiply.outer(ns, ns).ravel(), return_counts=True)
    counts = counts.astype(np.float64)
    if k == 3:
        vals, counts = _product_histogram(vals, counts, ns)
    return int(round(np.sum(counts * counts)))


# ---------------------------------------------------------------------------
# batched Monte Carlo internals

def partial_sums_batch(trial_seeds: np.ndarray, x: float,
                       ps: np.ndarray | None = None) -> np.ndarray:
    """Partial sums sum_{n<=x} f_t(n) for a batch of trial seeds at once.

    Equivalent to sample(seed_t, x) + partial_sum per trial: the per-prime
    angles use the identical (seed, p) hash, so batching is a pure layout
    optimization.
    """
    xf = int(math.floor(x))
    if ps is None:
        ps = primes.primes_up_to(xf)
    keys = _mix_array(np.asarray(trial_seeds, dtype=np.uint64))
    h = _mix_array(keys[:, None] ^ ps.astype(np.uint64)[None, :])
    fp = np.exp(1j * (h >> np.uint64(11)).astype(np.float64) * (2.0 * np.pi / (1 << 53)))
    v = np.ones((keys.size, xf + 1), dtype=np.complex128)
    v[:, 0] = 0.0
    for j, p in enumerate(ps):
        p = int(p)
        if p > xf:
            break
        power = p
        while power <= xf:
            v[:, power::power] *= fp[:, j : j + 1]
            power *= p
    return v[:, 1:].sum(axis=1)
