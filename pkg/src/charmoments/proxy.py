"""Proxy weights: short Dirichlet polynomials over prime windows, truncated
exponentials, and their dominating surrogates.

The construction splits the primes up to y = x^{1/C0} into a chain of windows
(y_{m-1}, y_m] with y_{m-1} = y_m^{1/20}.  For a completely multiplicative
unit source s (a character or a random multiplicative sample), each window and
integer shift l carries the polynomial

    D_{m,l}(s) = sum_{y_{m-1} < p <= y_m} [ s(p)/p^{1/2 + i l/log y}
                                            + s(p)^2 / (2 p^{1 + 2 i l/log y}) ],

a squared truncated exponential ("level factor")

    R_{m,l}(s) = ( sum_{j <= J_m} (k-1)^j/j! * (Re D_{m,l})^j )^2,

and the full proxy weight R(s) = sum_l prod_m R_{m,l}(s) over integer shifts
|l| <= floor(log(y)/2).  Piecewise dominating surrogates and dyadic classes on
|Re D| support the moment comparison machinery downstream.

Two profiles are supported.  The "paper" profile resolves the full parameter
recursion (window count from a geometric bracket on log log y, J-chain
decreasing by one, and the 10^4*k*J length constraint); its constants are
only reachable at astronomical x, so parameters are handled on log scale.
The "desk" profile keeps the identical structure at numerically exercisable
sizes with user-chosen window count and truncation depths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import primes
from .charsum import WeightedIndicator, weighted_char_sums
from .errors import ClassMismatch, InfeasibleParams, OutOfRange
from .fpoly import FPoly
from .modarith import PrimeModulus
from .rmf import RmfSample, value_at

_LOG20 = math.log(20.0)
LENGTH_FACTOR = 10**4  # paper-profile short-polynomial constraint factor
DEPTH_FACTOR = 10**5   # paper-profile J_M = ceil(C0/(10^5 k))


@dataclass(frozen=True)
class Level:
    """Prime window (lo, hi] with truncation depth j, stored on log scale."""

    log_lo: float
    log_hi: float
    j: int

    @property
    def lo(self) -> float:
        return math.exp(self.log_lo)

    @property
    def hi(self) -> float:
        return math.exp(self.log_hi)


@dataclass(frozen=True)
class ProxyParams:
    """Window chain and truncation depths for one proxy construction."""

    k: float
    c0: float
    log_x: float
    profile: str
    levels: tuple[Level, ...]

    @property
    def m_count(self) -> int:
        return len(self.levels)

    @property
    def log_y(self) -> float:
        return self.levels[-1].log_hi

    @property
    def y(self) -> float:
        return math.exp(self.log_y)

    @property
    def x(self) -> float:
        return math.exp(self.log_x)  # may overflow to inf for paper-scale params

    def j_values(self) -> tuple[int, ...]:
        return tuple(lv.j for lv in self.levels)

    def penalty_exp(self, m: int) -> int:
        """Even exponent a_m = 2*ceil(200*k*J_m) attached to window m (1-based)."""
        return 2 * math.ceil(200.0 * self.k * self.levels[m - 1].j)

    def shift_values(self) -> np.ndarray:
        """Integer shifts l with |l| <= floor(log(y)/2)."""
        lmax = int(math.floor(self.log_y / 2.0))
        return np.arange(-lmax, lmax + 1, dtype=np.int64)

    def poly_length_log(self) -> float:
        """log of the largest index reachable by any level factor: sum 4*J_m*log(y_m)."""
        return sum(4.0 * lv.j * lv.log_hi for lv in self.levels)


def _window_chain(log_y: float, m_count: int) -> list[tuple[float, float]]:
    """(log_lo, log_hi] pairs with log y_m = log_y / 20^(M-m); lowest lo is 1."""
    bounds = [log_y / 20.0 ** (m_count - m) for m in range(1, m_count + 1)]
    out = []
    lo = 0.0
    for b in bounds:
        out.append((lo, b))
        lo = b
    return out


def build_params(x: float | None = None, *, log_x: float | None = None, k: float,
                 c0: float, profile: str = "paper",
                 levels_m: int | None = None,
                 j_values: tuple[int, ...] | list[int] | None = None,
                 q: int | None = None) -> ProxyParams:
    """Build the window chain for scale x (or log_x directly) and exponent k.

    Paper profile: window count M is the unique value with 20^(M-1) inside
    [ (log log y)^2, 20 (log log y)^2 ), depths are J_1 = ceil((log log y)^{3/2}),
    J_M = ceil(C0/(10^5 k)), J_m = J_M + M - m in between, and the length
    constraint prod_m y_m^{10^4 k J_m} < x must hold.  Desk profile: M and the
    J_m are caller-chosen; when q is given the cross-moment length guard
    x * prod_m y_m^{4 J_m} < q is enforced instead.
    """
    if (x is None) == (log_x is None):
        raise OutOfRange("pass exactly one of x, log_x")
    if log_x is None:
        if x <= 1:
            raise OutOfRange("x must be > 1")
        log_x = math.log(x)
    if k < 2:
        raise OutOfRange("k must be >= 2")
    if c0 <= 0:
        raise OutOfRange("C0 must be positive")
    log_y = log_x / c0
    if log_y <= 0:
        raise InfeasibleParams("y = x^(1/C0) must exceed 1")

    if profile == "paper":
        if log_y <= 1.0:
            raise InfeasibleParams("log log y undefined: need y > e")
        big_l = math.log(log_y)
        l2 = big_l * big_l
        if 20.0 * l2 < 1.0:
            raise InfeasibleParams("window bracket for M is empty at this y")
        m_count = 1 + max(0, math.ceil(math.log(l2) / _LOG20))
        if not (l2 <= 20.0 ** (m_count - 1) < 20.0 * l2):
            raise InfeasibleParams("window bracket for M is empty at this y")
        j_top = math.ceil(c0 / (DEPTH_FACTOR * k))
        j_bottom = math.ceil(big_l**1.5)
        if m_count == 1:
            js = [j_bottom]
        else:
            js = [j_bottom] + [j_top + m_count - m for m in range(2, m_count + 1)]
        chain = _window_chain(log_y, m_count)
        levels = tuple(Level(lo, hi, j) for (lo, hi), j in zip(chain, js))
        budget = LENGTH_FACTOR * k * sum(lv.j * lv.log_hi for lv in levels)
        if not budget < log_x:
            raise InfeasibleParams(
                f"length constraint fails: 10^4*k*sum J_m log y_m = {budget:.4g} "
                f">= log x = {log_x:.4g}"
            )
    elif profile == "desk":
        m_count = int(levels_m) if levels_m is not None else 1
        if m_count < 1:
            raise OutOfRange("need at least one window")
        js = list(j_values) if j_values is not None else [2] * m_count
        if len(js) != m_count or any(j < 1 for j in js):
            raise InfeasibleParams("j_values must list one depth >= 1 per window")
        chain = _window_chain(log_y, m_count)
        levels = tuple(Level(lo, hi, int(j)) for (lo, hi), j in zip(chain, js))
    else:
        raise OutOfRange(f"unknown profile {profile!r}")

    params = ProxyParams(k=float(k), c0=float(c0), log_x=float(log_x),
                         profile=profile, levels=levels)
    if q is not None and profile == "desk":
        if params.poly_length_log() + log_x >= math.log(q):
            raise InfeasibleParams(
                f"x * prod y_m^(4 J_m) >= q = {q}: weights too long for this modulus"
            )
    return params


def desk_params(x: float, y: float, k: float, levels_m: int = 1,
                j_values=None, q: int | None = None) -> ProxyParams:
    """Desk profile parametrized by outer window edge y instead of C0."""
    if not (1 < y):
        raise OutOfRange("need y > 1")
    c0 = math.log(x) / math.log(y)
    return build_params(x=x, k=k, c0=c0, profile="desk",
                        levels_m=levels_m, j_values=j_values, q=q)


# ---------------------------------------------------------------------------
# sources

class OnesSource:
    """The constant source s(n) = 1 (deterministic reference)."""

    def values_at(self, ns: np.ndarray) -> np.ndarray:
        return np.ones(np.asarray(ns).shape, dtype=np.complex128)


@dataclass(eq=False)
class CharSource:
    """A fixed character chi_a as a completely multiplicative source."""

    mod: PrimeModulus
    a: int

    def values_at(self, ns: np.ndarray) -> np.ndarray:
        return self.mod.char_values(self.a, ns)


@dataclass(eq=False)
class SampleSource:
    """A random multiplicative sample as a source."""

    sample: RmfSample

    def values_at(self, ns: np.ndarray) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        out = np.empty(ns.shape, dtype=np.complex128)
        flat = ns.ravel()
        res = out.ravel()
        ps = self.sample.primes
        in_table = np.isin(flat, ps)
        if in_table.any():
            idx = np.searchsorted(ps, flat[in_table])
            res[in_table] = self.sample.fp[idx]
        for i in np.flatnonzero(~in_table):
            res[i] = value_at(self.sample, int(flat[i]))
        return out


# ---------------------------------------------------------------------------
# window polynomials and level factors

@dataclass(frozen=True)
class LevelPolyValue:
    """Value of D_{m,l} for one source."""

    m: int
    shift: int
    value: complex


def _window_weights(params: ProxyParams, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Primes of window m plus the two coefficient vectors (shift-free part)."""
    lv = params.levels[m - 1]
    ps = primes.primes_in(lv.lo, lv.hi)
    lp = np.log(ps.astype(np.float64)) if ps.size else np.empty(0)
    return ps, lp, np.exp(-0.5 * lp) if ps.size else np.empty(0)


def level_poly(params: ProxyParams, source, m: int, shift: int) -> LevelPolyValue:
    """D_{m,l}(source) over window m (1-based) at integer shift l."""
    if not 1 <= m <= params.m_count:
        raise OutOfRange(f"window index {m} outside 1..{params.m_count}")
    ps, lp, root = _window_weights(params, m)
    if ps.size == 0:
        return LevelPolyValue(m=m, shift=int(shift), value=0j)
    phase = np.exp(-1j * (shift / params.log_y) * lp)
    sv = source.values_at(ps)
    first = sv * root * phase
    second = 0.5 * sv * sv * np.exp(-lp) * phase * phase
    return LevelPolyValue(m=m, shift=int(shift), value=complex(np.sum(first + second)))


def level_poly_all_chars(mod: PrimeModulus, params: ProxyParams, m: int,
                         shift: int) -> np.ndarray:
    """D_{m,l}(chi_a) for all characters a at once, via one weighted DFT."""
    ps, lp, root = _window_weights(params, m)
    if ps.size == 0:
        return np.zeros(mod.q - 1, dtype=np.complex128)
    phase = np.exp(-1j * (shift / params.log_y) * lp)
    ns = np.concatenate([ps, ps * ps])
    ws = np.concatenate([root * phase, 0.5 * np.exp(-lp) * phase * phase])
    return weighted_char_sums(mod, WeightedIndicator.from_weights(mod, ns, ws))


def truncated_exp(d, depth: int, coef: float):
    """sum_{j <= depth} (coef * d)^j / j!, scalar or ndarray in d."""
    acc = np.ones_like(np.asarray(d, dtype=np.float64))
    term = np.ones_like(acc)
    for j in range(1, depth + 1):
        term = term * (coef * np.asarray(d)) / j
        acc = acc + term
    if np.isscalar(d) or np.asarray(d).shape == ():
        return float(acc)
    return acc


def level_factor(params: ProxyParams, source, m: int, shift: int) -> float:
    """R_{m,l}(source): squared truncated exponential of (k-1) Re D_{m,l}."""
    d = level_poly(params, source, m, shift).value.real
    t = truncated_exp(d, params.levels[m - 1].j, params.k - 1.0)
    return t * t


def proxy_weight(params: ProxyParams, source) -> float:
    """R(source) = sum over shifts of the product of level factors.

    Per-shift products run in log space so deep chains cannot overflow.
    """
    total = []
    for l in params.shift_values():
        logs = []
        zero = False
        for m in range(1, params.m_count + 1):
            r = level_factor(params, source, m, int(l))
            if r == 0.0:
                zero = True
                break
            logs.append(math.log(r))
        total.append(0.0 if zero else math.exp(math.fsum(logs)))
    return float(math.fsum(total))


def proxy_weight_all_chars(mod: PrimeModulus, params: ProxyParams) -> np.ndarray:
    """R(chi_a) for every character, sharing one DFT per (window, shift)."""
    out = np.zeros(mod.q - 1, dtype=np.float64)
    for l in params.shift_values():
        prod = np.ones(mod.q - 1, dtype=np.float64)
        for m in range(1, params.m_count + 1):
            d = level_poly_all_chars(mod, params, m, int(l)).real
            t = truncated_exp(d, params.levels[m - 1].j, params.k - 1.0)
            prod *= t * t
        out += prod
    return out


def exp_weight_log(params: ProxyParams, source, shift: int) -> float:
    """Exponent 2(k-1) Re sum_{p <= y} [...] at one shift (log of the factor)."""
    total = 0.0
    for m in range(1, params.m_count + 1):
        total += level_poly(params, source, m, int(shift)).value.real
    return 2.0 * (params.k - 1.0) * total


def exp_weight(params: ProxyParams, source, shift: int) -> float:
    """exp(2(k-1) Re sum_{p <= y} [...]) at one shift."""
    return math.exp(exp_weight_log(params, source, shift))


def exp_weight_total(params: ProxyParams, source) -> float:
    """Untruncated analogue of the proxy weight: sum over shifts of exp_weight."""
    logs = np.array([exp_weight_log(params, source, int(l)) for l in params.shift_values()])
    peak = logs.max()
    return float(math.exp(peak) * np.exp(logs - peak).sum())


# ---------------------------------------------------------------------------
# truncation error: direct difference and explicit double-tail series

def truncation_error_direct(d: float, k: float, depth: int) -> float:
    """exp(2(k-1)d) - (truncated exponential)^2."""
    t = truncated_exp(d, depth, k - 1.0)
    return math.exp(2.0 * (k - 1.0) * d) - t * t


def truncation_error_series(d: float, k: float, depth: int, extra: int = 60) -> float:
    """Same quantity as the explicit double series over max(j1, j2) > depth."""
    cap = depth + extra
    c = np.empty(cap + 1)
    c[0] = 1.0
    for j in range(1, cap + 1):
        c[j] = c[j - 1] * ((k - 1.0) * d) / j
    terms = [c[j1] * c[j2]
             for j1 in range(cap + 1)
             for j2 in range(cap + 1)
             if max(j1, j2) > depth]
    return float(math.fsum(terms))


def truncation_error(params: ProxyParams, source, m: int, shift: int,
                     series: bool = False) -> float:
    """Err_{m,l}(source), by direct difference or by the double-tail series."""
    d = level_poly(params, source, m, shift).value.real
    depth = params.levels[m - 1].j
    if series:
        return truncation_error_series(d, params.k, depth)
    return truncation_error_direct(d, params.k, depth)


# ---------------------------------------------------------------------------
# dyadic classes and dominating surrogates

@dataclass(frozen=True)
class DyadicClass:
    """Per-window dyadic bin of |Re D|, its left endpoint W_m, and penalty exponent a_m.

    Bin 0 is the closed interval [0, J_m/(100k)]; bin n >= 1 is the half-open
    interval (J_m 2^{n-1}/(100k), J_m 2^n/(100k)].
    """

    shift: int
    bins: tuple[int, ...]
    floors: tuple[float, ...]
    penalty_exps: tuple[int, ...]


def _bin_of(r: float, t0: float) -> int:
    if r <= t0:
        return 0
    return max(1, math.ceil(math.log2(r / t0)))


def classify(params: ProxyParams, source, shift: int) -> DyadicClass:
    """Dyadic class of |Re D_{m,l}| for every window at one shift."""
    bins, floors, pens = [], [], []
    for m in range(1, params.m_count + 1):
        j = params.levels[m - 1].j
        t0 = j / (100.0 * params.k)
        r = abs(level_poly(params, source, m, shift).value.real)
        n = _bin_of(r, t0)
        bins.append(n)
        floors.append(0.0 if n == 0 else t0 * 2.0 ** (n - 1))
        pens.append(params.penalty_exp(m))
    return DyadicClass(shift=int(shift), bins=tuple(bins), floors=tuple(floors),
                       penalty_exps=tuple(pens))


def surrogate_log_at(d: complex, k: float, j: int, a: int) -> float:
    """log U for a bare polynomial value d with depth j and penalty exponent a.

    Three branches on the class floor W of |Re d|: the truncated exponential
    with unit coefficient when the bin is 0; e^{4W} |d/W|^a while
    W <= 100 k j; and (2 (k-1)^j (2W)^j / j!)^{2/(k-1)} |d/W|^a beyond.
    """
    t0 = j / (100.0 * k)
    n = _bin_of(abs(d.real), t0)
    if n == 0:
        t = truncated_exp(d.real, j, 1.0)
        if t == 0.0:
            return -math.inf
        return 2.0 * math.log(abs(t))
    w = t0 * 2.0 ** (n - 1)
    penalty = a * (math.log(abs(d)) - math.log(w))
    if w <= 100.0 * k * j:
        return 4.0 * w + penalty
    lead = (2.0 / (k - 1.0)) * (math.log(2.0) + j * math.log(k - 1.0)
                                + j * math.log(2.0 * w) - math.lgamma(j + 1.0))
    return lead + penalty


def surrogate_factor_log(params: ProxyParams, source, m: int, shift: int,
                         cls: DyadicClass | None = None) -> float:
    """log U_{m,l}: the piecewise dominating surrogate for R_{m,l}^{1/(k-1)}."""
    j = params.levels[m - 1].j
    k = params.k
    t0 = j / (100.0 * k)
    dval = level_poly(params, source, m, shift).value
    n = _bin_of(abs(dval.real), t0)
    if cls is not None:
        labelled = cls.bins[m - 1]
        if labelled != n:
            lo = 0.0 if labelled == 0 else t0 * 2.0 ** (labelled - 1)
            hi = t0 * 2.0 ** labelled if labelled else t0
            raise ClassMismatch(
                f"|Re D| = {abs(dval.real):.6g} lies in bin {n}, not the "
                f"labelled bin {labelled} = ({lo:.6g}, {hi:.6g}]"
            )
    return surrogate_log_at(dval, k, j, params.penalty_exp(m))


def surrogate_factor(params: ProxyParams, source, m: int, shift: int,
                     cls: DyadicClass | None = None) -> float:
    """U_{m,l} itself (may overflow to inf; use the log form for comparisons)."""
    return math.exp(surrogate_factor_log(params, source, m, shift, cls))


def subadditivity_split(params: ProxyParams, source) -> tuple[float, float]:
    """(R^{k/(k-1)}, sum_{l1,l2} prod_m R_{m,l1} R_{m,l2}^{1/(k-1)}).

    The left side never exceeds the right for k >= 2.
    """
    shifts = params.shift_values()
    table = np.array([[level_factor(params, source, m, int(l))
                       for m in range(1, params.m_count + 1)]
                      for l in shifts])
    prod_full = table.prod(axis=1)
    prod_frac = (table ** (1.0 / (params.k - 1.0))).prod(axis=1)
    lhs = float(prod_full.sum() ** (params.k / (params.k - 1.0)))
    rhs = float(prod_full.sum() * prod_frac.sum())
    return lhs, rhs


# ---------------------------------------------------------------------------
# exact polynomial forms (diagonal-expectation oracle route)

def level_poly_fpoly(params: ProxyParams, m: int, shift: int) -> FPoly:
    """D_{m,l} as an exact polynomial in f."""
    ps, lp, root = _window_weights(params, m)
    out = FPoly()
    for i, p in enumerate(ps):
        phase = np.exp(-1j * (shift / params.log_y) * lp[i])
        out = out + FPoly.var(int(p), root[i] * phase)
        out = out + FPoly.var(int(p) * int(p), 0.5 * math.exp(-lp[i]) * phase * phase)
    return out


def level_factor_fpoly(params: ProxyParams, m: int, shift: int) -> FPoly:
    """R_{m,l} as an exact polynomial in f and conj(f)."""
    red = level_poly_fpoly(params, m, shift).real_part()
    t = FPoly.const(1.0)
    term = FPoly.const(1.0)
    for j in range(1, params.levels[m - 1].j + 1):
        term = term * red * ((params.k - 1.0) / j)
        t = t + term
    return t * t


def proxy_weight_fpoly(params: ProxyParams) -> FPoly:
    """The full proxy weight as an exact polynomial (desk sizes only)."""
    total = FPoly()
    for l in params.shift_values():
        prod = FPoly.const(1.0)
        for m in range(1, params.m_count + 1):
            prod = prod * level_factor_fpoly(params, m, int(l))
        total = total + prod
    return total
