"""Prefix sums of characters, for every character at once.

S_chi(x) = sum_{n <= x} chi(n).  Writing n = g^j, the vector of prefix sums
over all characters is the length-(q-1) discrete Fourier transform (with the
e^{+2*pi*i*a*j/(q-1)} sign convention) of the indicator b_j = [g^j mod q <= x].
One FFT therefore replaces q-1 separate summations.  The same transform with
arbitrary folded coefficients evaluates any weighted character polynomial for
all characters simultaneously.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .modarith import PrimeModulus


@dataclass(eq=False)
class PrefixSumTable:
    """values[a] = S_{chi_a}(x) for a = 0 .. q-2."""

    q: int
    x: float
    values: np.ndarray


@dataclass(eq=False)
class WeightedIndicator:
    """Coefficients folded onto the cyclic group: coeffs[j] = sum of weights of n = g^j (mod q)."""

    q: int
    coeffs: np.ndarray

    @classmethod
    def from_weights(cls, mod: PrimeModulus, ns: np.ndarray, ws: np.ndarray) -> "WeightedIndicator":
        """Fold weights ws at integers ns into discrete-log bins (q | n dropped)."""
        ns = np.asarray(ns, dtype=np.int64) % mod.q
        ws = np.asarray(ws, dtype=np.complex128)
        keep = ns != 0
        coeffs = np.zeros(mod.q - 1, dtype=np.complex128)
        np.add.at(coeffs, mod.dlog[ns[keep]], ws[keep])
        return cls(q=mod.q, coeffs=coeffs)


def _check_x(mod: PrimeModulus, x: float) -> int:
    if not (1 <= x <= mod.q):
        raise OutOfRange(f"x = {x} outside [1, q = {mod.q}]")
    return min(int(math.floor(x)), mod.q - 1)


def all_char_sums_fft(mod: PrimeModulus, x: float) -> PrefixSumTable:
    """Prefix sums for all characters via one group DFT.  O(q log q)."""
    xf = _check_x(mod, x)
    b = (mod.exp_table <= xf).astype(np.float64)
    # conj(FFT(real b)) carries the e^{+2 pi i a j / (q-1)} convention
    values = np.conj(np.fft.fft(b))
    return PrefixSumTable(q=mod.q, x=float(x), values=values)


def all_char_sums_naive(mod: PrimeModulus, x: float) -> PrefixSumTable:
    """Reference evaluator: direct summation per character.  O(q x)."""
    xf = _check_x(mod, x)
    d = mod.dlog[1 : xf + 1]
    order = mod.q - 1
    roots = mod.roots
    values = np.empty(order, dtype=np.complex128)
    for a in range(order):
        values[a] = roots[(a * d) % order].sum()
    return PrefixSumTable(q=mod.q, x=float(x), values=values)


def weighted_char_sums(mod: PrimeModulus, w: WeightedIndicator | np.ndarray) -> np.ndarray:
    """values[a] = sum_j coeffs[j] exp(2 pi i a j/(q-1)) for all a, via one DFT."""
    coeffs = w.coeffs if isinstance(w, WeightedIndicator) else np.asarray(w, dtype=np.complex128)
    if coeffs.shape != (mod.q - 1,):
        raise OutOfRange(f"coefficient vector must have length q-1 = {mod.q - 1}")
    return np.fft.ifft(coeffs) * (mod.q - 1)
