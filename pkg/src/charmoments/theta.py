"""Theta values at the central point, their moments, and transform checks.

theta(chi) = sum_{n >= 1} chi(n) n^kappa exp(-pi n^2/q), with kappa = 0 for
even characters and 1 for odd ones.  The Gaussian weight localizes the sum
near sqrt(q); truncating at sqrt(q) (log q)^2 leaves a tail below the recorded
majorant q^{1+kappa} exp(-pi * truncation^2 / q).  Folding n into residue
classes turns the whole family into two weighted group DFTs, one per parity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import primes
from .charsum import WeightedIndicator, weighted_char_sums
from .errors import DomainError, OutOfRange, QuadratureFailure, TooLarge
from .modarith import PrimeModulus
from .moments import MomentEstimate, _abs_power_2k
from .rmf import RmfSample, values_upto


@dataclass(frozen=True)
class ThetaValue:
    """One character's theta value with its truncation certificate."""

    a: int
    kappa: int
    value: complex
    truncation_point: float
    tail_bound: float


def truncation_point(q: int) -> float:
    """sqrt(q) * (log q)^2."""
    return math.sqrt(q) * math.log(q) ** 2


def _folded_weights(mod: PrimeModulus, trunc: float) -> tuple[np.ndarray, np.ndarray]:
    ns = np.arange(1, int(math.floor(trunc)) + 1, dtype=np.int64)
    w = np.exp(-math.pi * ns.astype(np.float64) ** 2 / mod.q)
    return ns, w


def theta_all(mod: PrimeModulus, trunc: float | None = None) -> list[ThetaValue]:
    """Theta values for every character via two weighted DFTs."""
    if mod.q < 3:
        raise DomainError("need an odd prime modulus")
    trunc = truncation_point(mod.q) if trunc is None else float(trunc)
    ns, w = _folded_weights(mod, trunc)
    even = weighted_char_sums(mod, WeightedIndicator.from_weights(mod, ns, w))
    odd = weighted_char_sums(mod, WeightedIndicator.from_weights(mod, ns, ns * w))
    tails = [mod.q * math.exp(-math.pi * trunc * trunc / mod.q),
             mod.q**2 * math.exp(-math.pi * trunc * trunc / mod.q)]
    out = []
    for a in range(mod.q - 1):
        kappa = a % 2
        val = even[a] if kappa == 0 else odd[a]
        out.append(ThetaValue(a=a, kappa=kappa, value=complex(val),
                              truncation_point=trunc, tail_bound=tails[kappa]))
    return out


def theta_naive(mod: PrimeModulus, a: int, trunc: float | None = None) -> complex:
    """Direct summation for one character (reference route)."""
    trunc = truncation_point(mod.q) if trunc is None else float(trunc)
    ns, w = _folded_weights(mod, trunc)
    kappa = a % 2
    cv = mod.char_values(a, ns)
    if kappa == 1:
        w = ns * w
    return complex(np.sum(cv * w))


def theta_moment(mod: PrimeModulus, k: float, parity: str) -> MomentEstimate:
    """(1/(q-1)) sum of |theta|^{2k} over one parity class.

    The even class excludes the principal character; all odd characters are
    non-principal already.
    """
    if parity not in ("even", "odd"):
        raise DomainError("parity must be 'even' or 'odd'")
    values = theta_all(mod)
    if parity == "even":
        sel = [t.value for t in values if t.kappa == 0 and t.a != 0]
    else:
        sel = [t.value for t in values if t.kappa == 1]
    arr = np.array(sel, dtype=np.complex128)
    total = float(_abs_power_2k(arr, k).sum())
    return MomentEstimate(value=total / (mod.q - 1), stderr=0.0,
                          trials=arr.size, kind="exact-characters")


def even_char_orthogonality(mod: PrimeModulus, n: int, m: int) -> float:
    """(2/(q-1)) sum over even chi of chi(n) conj(chi(m)), summed numerically.

    Equals 1 exactly when n = +-m (mod q) and both are units, else 0.
    """
    n %= mod.q
    m %= mod.q
    if n == 0 or m == 0:
        return 0.0
    delta = (int(mod.dlog[n]) - int(mod.dlog[m])) % (mod.q - 1)
    t = np.arange((mod.q - 1) // 2, dtype=np.int64)
    total = mod.roots[(2 * t * delta) % (mod.q - 1)].sum()
    return float((2.0 / (mod.q - 1)) * total.real)


def even_theta_second_moment_oracle(mod: PrimeModulus) -> float:
    """k = 1 even theta moment by residue-class quadratic form (no DFT).

    Uses the even-character orthogonality relation to rewrite the average as
    (1/2) sum_{n = +-m (mod q)} w_n w_m minus the principal contribution.
    """
    trunc = truncation_point(mod.q)
    ns, w = _folded_weights(mod, trunc)
    res = (ns % mod.q).astype(np.int64)
    class_sums = np.zeros(mod.q, dtype=np.float64)
    np.add.at(class_sums, res, w)
    s = class_sums[1:]  # residues 1..q-1; residue 0 carries chi = 0
    paired = s * s[::-1]  # S_r * S_{q-r}
    theta0 = float(s.sum())
    quad_form = 0.5 * float((s * s).sum() + paired.sum())
    return quad_form - theta0 * theta0 / (mod.q - 1)


# ---------------------------------------------------------------------------
# smooth-weighted tail sums and their Lipschitz behaviour

_WEIGHT_LOG_CUT = 50.0  # e^-50 ~ 2e-22: weights below this are dropped


def _tail_sum(sample: RmfSample, q: int, t: float, kappa: int,
              y_smooth: float | None) -> complex:
    m_max = int(math.ceil(math.sqrt(q * _WEIGHT_LOG_CUT / math.pi) / t))
    v = values_upto(sample, m_max)  # raises OutOfRange beyond the sample limit
    ms = np.arange(m_max + 1, dtype=np.float64)
    w = np.exp(-math.pi * (ms * t) ** 2 / q)
    if kappa == 1:
        w = t * ms * w
    keep = np.ones(m_max + 1, dtype=bool)
    if y_smooth is not None:
        keep = primes.greatest_factor_sieve(m_max) <= y_smooth
    keep[0] = False
    return complex(np.sum(v[keep] * w[keep]))


def lipschitz_probe(sample: RmfSample, q: int, t: float, alpha: float,
                    kappa: int, y_smooth: float | None = None) -> tuple[float, float]:
    """(|g(t + alpha) - g(t)|, expected scale) for the Gaussian tail sum g.

    g(t) = sum over (smooth) m of exp(-pi (m t)^2 / q) f(m) when kappa = 0,
    with an extra factor t m inside the sum when kappa = 1.  The comparison
    scale is alpha sqrt(q)/t^2 (kappa = 0) or alpha q/t^2 (kappa = 1).
    """
    if t <= 0 or alpha <= 0:
        raise DomainError("need t > 0 and alpha > 0")
    if kappa not in (0, 1):
        raise DomainError("kappa must be 0 or 1")
    lhs = abs(_tail_sum(sample, q, t + alpha, kappa, y_smooth)
              - _tail_sum(sample, q, t, kappa, y_smooth))
    scale = alpha * math.sqrt(q) / t**2 if kappa == 0 else alpha * q / t**2
    return lhs, scale


# ---------------------------------------------------------------------------
# Mellin-transform identity for the smooth Gaussian sum

_SMOOTH_COUNT_CAP = 500_000


def _smooth_values(sample: RmfSample, y: float, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """y-smooth integers up to cap with their f-values."""
    ms = primes.smooth_numbers(cap, y)
    if ms.size > _SMOOTH_COUNT_CAP:
        raise TooLarge(f"{ms.size} smooth terms exceed the enumeration cap")
    base = {int(p): complex(v) for p, v in zip(sample.primes, sample.fp) if p <= y}
    vals = np.empty(ms.size, dtype=np.complex128)
    for i, m in enumerate(ms):
        acc = 1 + 0j
        mm = int(m)
        for p, fv in base.items():
            while mm % p == 0:
                mm //= p
                acc *= fv
        vals[i] = acc
    return ms, vals


def _mellin_numeric(ms: np.ndarray, cs: np.ndarray, s: float,
                    tol: float = 1e-10) -> complex:
    """integral_0^inf h(v) v^{-s-1} dv with h(v) = sum c_m exp(-pi m^2/v^2).

    Split at v = 1; the upper range maps through v -> 1/u so both pieces live
    on [0, 1].
    """
    m2 = ms.astype(np.float64) ** 2

    def h_of_v(v: float) -> complex:
        return complex(np.sum(cs * np.exp(-math.pi * m2 / (v * v))))

    def h_of_inv(u: float) -> complex:
        if u == 0.0:
            return complex(np.sum(cs))
        return complex(np.sum(cs * np.exp(-math.pi * m2 * u * u)))

    def piece(f, weight):
        def re(x):
            return (f(x) * weight(x)).real

        def im(x):
            return (f(x) * weight(x)).imag

        out = 0j
        for g in (re, im):
            val, err = integrate.quad(g, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=800)
            if err > 1e-7 * max(1.0, abs(val)):
                raise QuadratureFailure(f"integral error estimate {err:.3g} too large")
            out += val if g is re else 1j * val
        return out

    low = piece(h_of_v, lambda v: v ** (-s - 1.0) if v > 0 else 0.0)
    high = piece(h_of_inv, lambda u: u ** (s - 1.0) if u > 0 else 0.0)
    return low + high


def mellin_transform_check(y_smooth: float, s: float, sample: RmfSample,
                           smooth_cap: int = 10**12) -> tuple[complex, complex]:
    """(numeric, closed-form) value of the Mellin transform of the smooth Gaussian sum.

    Closed form: Gamma(s/2)/(2 pi^{s/2}) * prod_{p <= y} (1 - f(p) p^{-s})^{-1}.
    The numeric side enumerates smooth terms up to smooth_cap; y_smooth = 1
    reduces to the single term m = 1.
    """
    if s <= 0:
        raise DomainError("need Re(s) > 0")
    ms, cs = _smooth_values(sample, y_smooth, smooth_cap)
    numeric = _mellin_numeric(ms, cs, s)
    closed = special.gamma(s / 2.0) / (2.0 * math.pi ** (s / 2.0))
    for p in primes.primes_up_to(y_smooth):
        fp = sample.values[int(p)]
        closed = closed / (1.0 - fp * float(p) ** (-s))
    return numeric, complex(closed)
