"""Arithmetic mod a prime q: primitive roots, discrete-log tables, character values.

The group of units mod q is cyclic of order q - 1.  Fixing a generator g, the
multiplicative characters are indexed by a in [0, q-2]:

    chi_a(n) = exp(2*pi*i * a * dlog(n) / (q - 1)),   chi_a(n) = 0 when q | n,

where dlog(n) is the discrete logarithm of n base g.  Everything downstream
(prefix-sum DFTs, theta values, proxy weights) works through this table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import primes
from .errors import NotPrime, OutOfRange, TooLarge

# Building a modulus allocates roughly 24 bytes per residue (discrete-log
# table, its inverse permutation, and the lazily built root-of-unity table).
DEFAULT_MEMORY_CAP = 2 << 30
_BYTES_PER_RESIDUE = 24

Q_CAP = 1 << 31


@dataclass(frozen=True)
class CharacterIndex:
    """Character label a in [0, q-2]; a = 0 is the principal character."""

    a: int

    def is_even(self) -> bool:
        return self.a % 2 == 0


def parity(a: int | CharacterIndex) -> str:
    """Parity of chi_a: chi_a(-1) = (-1)^a, so even iff a is even."""
    a = a.a if isinstance(a, CharacterIndex) else int(a)
    return "even" if a % 2 == 0 else "odd"


@dataclass(eq=False)
class PrimeModulus:
    """Prime q with generator g and the full discrete-log table.

    dlog[n] = j such that g^j = n (mod q) for 1 <= n < q; dlog[0] = -1.
    """

    q: int
    g: int
    dlog: np.ndarray

    @cached_property
    def exp_table(self) -> np.ndarray:
        """Inverse permutation: exp_table[j] = g^j mod q."""
        t = np.empty(self.q - 1, dtype=np.int64)
        t[self.dlog[1:]] = np.arange(1, self.q, dtype=np.int64)
        return t

    @cached_property
    def roots(self) -> np.ndarray:
        """roots[j] = exp(2*pi*i*j/(q-1))."""
        return np.exp(2j * np.pi * np.arange(self.q - 1) / (self.q - 1))

    def char_values(self, a: int | CharacterIndex, ns: np.ndarray) -> np.ndarray:
        """chi_a at an integer array (vectorized; zeros where q | n)."""
        a = a.a if isinstance(a, CharacterIndex) else int(a)
        a %= self.q - 1
        ns = np.asarray(ns, dtype=np.int64) % self.q
        out = np.zeros(ns.shape, dtype=np.complex128)
        ok = ns != 0
        out[ok] = self.roots[(a * self.dlog[ns[ok]]) % (self.q - 1)]
        return out


def _primitive_root(q: int) -> int:
    """Smallest primitive root mod prime q, by trial over 2, 3, 4, ..."""
    if q == 2:
        return 1
    factors = [p for p, _ in primes.factorize(q - 1)]
    exps = [(q - 1) // p for p in factors]
    g = 2
    while True:
        if all(pow(g, e, q) != 1 for e in exps):
            return g
        g += 1


def build_modulus(q: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> PrimeModulus:
    """Construct the discrete-log table for prime q.

    Raises NotPrime for composite q, TooLarge when q exceeds 2^31 or the
    table would exceed memory_cap bytes.
    """
    q = int(q)
    if q >= Q_CAP:
        raise TooLarge(f"q = {q} exceeds the 2^31 cap")
    if q * _BYTES_PER_RESIDUE > memory_cap:
        raise TooLarge(
            f"tables for q = {q} need ~{q * _BYTES_PER_RESIDUE} bytes, cap is {memory_cap}"
        )
    if not primes.is_prime(q):
        raise NotPrime(f"q = {q} is not prime")
    g = _primitive_root(q)
    dlog = np.full(q, -1, dtype=np.int64)
    if q == 2:
        dlog[1] = 0
        return PrimeModulus(q=q, g=g, dlog=dlog)

    # Fill powers of g in blocks: one short scalar loop to seed a block, then
    # whole-block modular multiplies (q < 2^31 keeps products inside int64).
    block_len = min(q - 1, 1 << 12)
    block = np.empty(block_len, dtype=np.int64)
    block[0] = 1
    for i in range(1, block_len):
        block[i] = block[i - 1] * g % q
    g_step = pow(g, block_len, q)
    j = 0
    cur = block
    while j < q - 1:
        take = min(block_len, q - 1 - j)
        dlog[cur[:take]] = np.arange(j, j + take, dtype=np.int64)
        j += take
        if j < q - 1:
            cur = cur * g_step % q
    return PrimeModulus(q=q, g=g, dlog=dlog)


def char_value(mod: PrimeModulus, a: int | CharacterIndex, n: int) -> complex:
    """chi_a(n) for a single integer n (0 when q | n)."""
    a_int = a.a if isinstance(a, CharacterIndex) else int(a)
    if not (0 <= a_int <= mod.q - 2):
        raise OutOfRange(f"character index {a_int} not in [0, {mod.q - 2}]")
    n = int(n) % mod.q
    if n == 0:
        return 0j
    return complex(mod.roots[(a_int * int(mod.dlog[n])) % (mod.q - 1)])
