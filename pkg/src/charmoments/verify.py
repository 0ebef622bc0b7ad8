"""Cross-validation harness: every structural identity and inequality the
package relies on, phrased as dual-route checks with explicit tolerances.

Each check computes one quantity along two independent routes (or an
inequality's two sides) and returns a CheckReport.  Calibrated constants come
from the calibration module and are recorded in each report's context, never
hard-coded into pass conditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import euler, moments, primes, proxy, rmf, theta
from .calibration import Calibration
from .charsum import WeightedIndicator, all_char_sums_fft, all_char_sums_naive, weighted_char_sums
from .errors import DomainError, LengthViolation
from .fpoly import FPoly
from .modarith import PrimeModulus, build_modulus


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one dual-route comparison."""

    name: str
    lhs: float
    rhs: float
    relation: str  # "eq", "le", or "ge"
    tolerance: float
    passed: bool
    context: dict = field(default_factory=dict)


def _report(name: str, lhs: float, rhs: float, relation: str, tolerance: float,
            scale: float | None = None, context: dict | None = None) -> CheckReport:
    """Build a report; tolerance is relative to scale (default: larger side)."""
    if scale is None:
        scale = max(1.0, abs(lhs), abs(rhs))
    slack = tolerance * scale
    if relation == "eq":
        passed = abs(lhs - rhs) <= slack
    elif relation == "le":
        passed = lhs <= rhs + slack
    elif relation == "ge":
        passed = lhs >= rhs - slack
    else:
        raise DomainError(f"unknown relation {relation!r}")
    ctx = dict(context or {})
    ctx.setdefault("scale", scale)
    return CheckReport(name=name, lhs=float(lhs), rhs=float(rhs), relation=relation,
                       tolerance=float(tolerance), passed=bool(passed), context=ctx)


# ---------------------------------------------------------------------------
# diagonal identities

def check_orthogonality_correspondence(mod: PrimeModulus, coeffs: np.ndarray,
                                       cal: Calibration) -> CheckReport:
    """(1/(q-1)) sum over all chi of |sum_n c_n chi(n)|^2 against sum |c_n|^2.

    Exact for polynomials shorter than q; refuses longer ones.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.size >= mod.q:
        raise LengthViolation(f"polynomial length {coeffs.size} >= q = {mod.q}")
    ns = np.arange(1, coeffs.size + 1, dtype=np.int64)
    sums = weighted_char_sums(mod, WeightedIndicator.from_weights(mod, ns, coeffs))
    lhs = float((np.abs(sums) ** 2).sum() / (mod.q - 1))
    rhs = float((np.abs(coeffs) ** 2).sum())
    return _report("orthogonality-correspondence", lhs, rhs, "eq",
                   cal.orthogonality_tol, scale=max(rhs, 1e-300),
                   context={"q": mod.q, "length": int(coeffs.size)})


def check_fourth_moment_count(mod: PrimeModulus, x: float, cal: Calibration) -> CheckReport:
    """(1/(q-1)) sum over all chi of |S_chi(x)|^4 against the congruence count."""
    table = all_char_sums_fft(mod, x)
    lhs = float((np.abs(table.values) ** 4).sum() / (mod.q - 1))
    rhs = float(moments.congruence_energy(mod.q, x))
    return _report("fourth-moment-count", lhs, rhs, "eq", cal.orthogonality_tol,
                   scale=rhs, context={"q": mod.q, "x": x})


def check_reflection(mod: PrimeModulus, x: float, cal: Calibration) -> CheckReport:
    """|S_chi(x)| = |S_chi(q-1-floor(x))| for every non-principal chi."""
    left = np.abs(all_char_sums_fft(mod, x).values[1:])
    mirror = mod.q - 1 - math.floor(x)
    right = np.abs(all_char_sums_fft(mod, mirror).values[1:])
    dev = float(np.max(np.abs(left - right)))
    scale = float(max(1.0, np.max(left)))
    return _report("reflection-symmetry", dev, 0.0, "eq", cal.reflection_tol,
                   scale=scale, context={"q": mod.q, "x": x, "mirror": mirror})


def check_fft_vs_naive(mod: PrimeModulus, x: float, cal: Calibration) -> CheckReport:
    """Entrywise agreement of the DFT and direct prefix-sum evaluators."""
    fast = all_char_sums_fft(mod, x).values
    slow = all_char_sums_naive(mod, x).values
    dev = float(np.max(np.abs(fast - slow)))
    allowance = 1e-8 * math.sqrt(max(1.0, math.floor(x)))
    return _report("fft-vs-naive", dev, 0.0, "eq", allowance, scale=1.0,
                   context={"q": mod.q, "x": x})


# ---------------------------------------------------------------------------
# inequalities

def check_bernoulli(xs, cal: Calibration) -> CheckReport:
    """prod(1 + x_i) >= 1 - sum |x_i| whenever every x_i >= -1."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and xs.min() < -1.0:
        raise DomainError("all inputs must be >= -1")
    lhs = float(np.prod(1.0 + xs))
    rhs = float(1.0 - np.abs(xs).sum())
    return _report("product-lower-bound", lhs, rhs, "ge", 1e-12,
                   context={"count": int(xs.size)})


def _restricted_divisors(n: int, pset: tuple[int, ...]) -> int:
    count = 1
    for p in pset:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        count *= e + 1
    return count


def check_even_moment_ratio(c: dict[int, complex], pset: tuple[int, ...],
                            ap: dict[int, complex], ap2: dict[int, complex],
                            j: int, cal: Calibration) -> CheckReport:
    """Exact E |sum c_n f(n)|^2 |Q(f)|^{2j} against its product-form majorant.

    Q(f) = sum_p (a_p f(p)/sqrt(p) + a_{p^2} f(p^2)/p).  The majorant is
    (sum_n dr(n) |c_n|^2) * j! * (sum_p 2|a_p|^2/p + 6|a_{p^2}|^2/p^2)^j with
    dr(n) counting divisors supported on pset.  The ratio stays below the
    calibrated ceiling.
    """
    sc = FPoly({(n, 1): complex(v) for n, v in c.items()})
    q_poly = FPoly()
    for p in pset:
        if ap.get(p):
            q_poly = q_poly + FPoly.var(p, ap[p] / math.sqrt(p))
        if ap2.get(p):
            q_poly = q_poly + FPoly.var(p * p, ap2[p] / p)
    expr = sc.abs2() * q_poly.power(j) * q_poly.conj().power(j)
    lhs = expr.expectation().real
    base = sum(2.0 * abs(ap.get(p, 0)) ** 2 / p + 6.0 * abs(ap2.get(p, 0)) ** 2 / p**2
               for p in pset)
    rhs = sum(_restricted_divisors(n, pset) * abs(v) ** 2 for n, v in c.items())
    rhs *= math.factorial(j) * base**j
    ratio = lhs / rhs if rhs > 0 else math.inf
    return _report("even-moment-ratio", ratio, cal.lemma_ratio_max, "le", 0.0,
                   scale=1.0, context={"j": j, "pset": list(pset),
                                       "exact": lhs, "majorant": rhs})


def check_rough_count(a: float, b: float, y: float, cal: Calibration) -> CheckReport:
    """Count of n in (a, b] with no prime factor <= y against (b - a)/log y."""
    bf = int(math.floor(b))
    spf = primes.smallest_factor_sieve(bf)
    ns = np.arange(int(math.floor(a)) + 1, bf + 1)
    count = int(np.sum(spf[ns] > y))
    expected = (b - a) / math.log(y) if y >= 2 else (b - a)
    ratio = count / expected if expected > 0 else math.inf
    passed = cal.sieve_ratio_lo <= ratio <= cal.sieve_ratio_hi
    return CheckReport(name="rough-count-ratio", lhs=float(ratio),
                       rhs=float(cal.sieve_ratio_hi), relation="le",
                       tolerance=0.0, passed=passed,
                       context={"count": count, "expected": expected,
                                "window_lo": cal.sieve_ratio_lo,
                                "window_hi": cal.sieve_ratio_hi,
                                "interval": [a, b], "y": y})


def check_cosine_branch(t: float, y: float, cal: Calibration) -> CheckReport:
    """Prime cosine sum stays below its branch bound plus the calibrated slack."""
    res = euler.cosine_sum(t, y)
    return _report("cosine-branch-bound", res.value, res.bound + cal.cosine_slack,
                   "le", 0.0, scale=1.0,
                   context={"t": t, "y": y, "branch": res.branch,
                            "bound": res.bound, "slack": cal.cosine_slack})


# ---------------------------------------------------------------------------
# Parseval identity

def check_parseval(coeffs: dict[int, complex], sigma: float, cal: Calibration,
                   tol: float | None = None) -> CheckReport:
    """integral_1^inf |sum_{n<=x} a_n|^2 x^{-1-2 sigma} dx against its transform side.

    The left side integrates the piecewise-constant partial sums in closed
    form per segment; the right side is (1/2 pi) integral |F(sigma+it)|^2 /
    |sigma+it|^2 dt by adaptive quadrature, F(s) = sum a_n n^{-s}.
    """
    if sigma <= 0:
        raise DomainError("need sigma > 0")
    if tol is None:
        tol = cal.parseval_random_tol
    ns = np.array(sorted(coeffs), dtype=np.int64)
    if ns.size == 0 or ns[0] < 1:
        raise DomainError("coefficients must sit on integers >= 1")
    an = np.array([coeffs[int(n)] for n in ns], dtype=np.complex128)

    partial = np.cumsum(an)
    lhs_terms = []
    for i in range(ns.size):
        lo = ns[i]
        hi = ns[i + 1] if i + 1 < ns.size else None
        s2 = abs(partial[i]) ** 2
        if hi is None:
            lhs_terms.append(s2 * lo ** (-2.0 * sigma))
        else:
            lhs_terms.append(s2 * (lo ** (-2.0 * sigma) - hi ** (-2.0 * sigma)))
    lhs = math.fsum(lhs_terms) / (2.0 * sigma)

    logn = np.log(ns.astype(np.float64))
    nsig = ns.astype(np.float64) ** (-sigma)

    def integrand(t: float) -> float:
        fval = np.sum(an * nsig * np.exp(-1j * t * logn))
        return abs(fval) ** 2 / (sigma * sigma + t * t)

    # full_output also silences the subdivision warning on oscillatory inputs;
    # accuracy is judged against the returned error estimate instead
    res = integrate.quad(integrand, -np.inf, np.inf, limit=1200,
                         epsabs=1e-12, epsrel=1e-10, full_output=1)
    val, err = res[0], res[1]
    rhs = val / (2.0 * math.pi)
    return _report("parseval-transfer", lhs, rhs, "eq", tol,
                   scale=max(abs(lhs), abs(rhs), 1e-300),
                   context={"sigma": sigma, "support": [int(n) for n in ns],
                            "quad_error": err})


# ---------------------------------------------------------------------------
# proxy-weight checks

def check_series_consistency(instances, cal: Calibration) -> CheckReport:
    """Direct truncation error against the double-tail series on given (d, k, depth)."""
    worst = 0.0
    worst_inst = None
    for d, k, depth in instances:
        direct = proxy.truncation_error_direct(d, k, depth)
        series = proxy.truncation_error_series(d, k, depth)
        ref = max(abs(series), 1e-300)
        rel = abs(direct - series) / ref
        if rel > worst:
            worst, worst_inst = rel, (d, k, depth)
    return _report("truncation-series-consistency", worst, 0.0, "eq",
                   cal.series_rel_tol, scale=1.0,
                   context={"instances": len(list(instances)), "worst_at": worst_inst})


def check_surrogate_domination(params: proxy.ProxyParams, sources,
                               cal: Calibration) -> CheckReport:
    """R_{m,l}^{1/(k-1)} <= (1 + c e^{-J_m}) U_{m,l} with the calibrated c.

    Reports the smallest c that would have sufficed across all sources,
    windows, and shifts, and passes when it is below the ceiling.
    """
    k = params.k
    needed = 0.0
    count = 0
    for source in sources:
        for l in params.shift_values():
            cls = proxy.classify(params, source, int(l))
            for m in range(1, params.m_count + 1):
                count += 1
                r = proxy.level_factor(params, source, m, int(l))
                log_u = proxy.surrogate_factor_log(params, source, m, int(l), cls)
                log_lhs = math.log(r) / (k - 1.0) if r > 0 else -math.inf
                # excess factor on top of U, scaled back by e^{J_m}
                excess = math.exp(log_lhs - log_u) - 1.0 if log_u > -math.inf else math.inf
                needed = max(needed, excess * math.exp(params.levels[m - 1].j))
    return _report("surrogate-domination", needed, cal.surrogate_slack, "le",
                   0.0, scale=1.0, context={"comparisons": count})


def check_surrogate_grid(cal: Calibration, ks=(2.0, 2.5, 3.0),
                         js=(1, 2, 3, 4)) -> CheckReport:
    """Branch-complete domination sweep on synthetic polynomial values.

    Re d runs from deep inside bin 0 out past the 100 k j branch change, with
    both signs and a nonzero imaginary part mixed in, so every surrogate
    branch is hit.  Reports the largest slack c that R^{1/(k-1)} demanded.
    """
    needed = 0.0
    count = 0
    for k in ks:
        for j in js:
            a = 2 * math.ceil(200.0 * k * j)
            t0 = j / (100.0 * k)
            mags = np.concatenate([
                np.linspace(1e-4 * t0, t0, 25),
                np.geomspace(t0 * 1.001, 220.0 * k * j, 60),
            ])
            for mag in mags:
                for sign in (1.0, -1.0):
                    for im in (0.0, 0.3 * mag):
                        d = complex(sign * mag, im)
                        count += 1
                        t = proxy.truncated_exp(d.real, j, k - 1.0)
                        log_lhs = (math.log(abs(t)) * 2.0 / (k - 1.0)
                                   if t != 0.0 else -math.inf)
                        log_u = proxy.surrogate_log_at(d, k, j, a)
                        excess = math.exp(log_lhs - log_u) - 1.0
                        needed = max(needed, excess * math.exp(j))
    return _report("surrogate-grid", needed, cal.surrogate_slack, "le", 0.0,
                   scale=1.0, context={"points": count, "ks": list(ks),
                                       "js": list(js)})


def check_subadditivity(params: proxy.ProxyParams, sources, cal: Calibration) -> CheckReport:
    """R^{k/(k-1)} <= sum_{l1,l2} prod_m R_{m,l1} R_{m,l2}^{1/(k-1)}, pointwise."""
    worst = -math.inf
    for source in sources:
        lhs, rhs = proxy.subadditivity_split(params, source)
        margin = (lhs - rhs) / max(rhs, 1e-300)
        worst = max(worst, margin)
    return _report("shift-subadditivity", worst, 0.0, "le", cal.chain_slack,
                   scale=1.0, context={"sources": len(list(sources))})


def check_holder_chain(mod: PrimeModulus, x: float, params: proxy.ProxyParams,
                       cal: Calibration) -> CheckReport:
    """Cross moment <= (2k-th moment)^{1/k} * (power moment of R)^{(k-1)/k}."""
    k = params.k
    cross = moments.cross_moment(mod, x, params)
    m2k = moments.char_moment(mod, x, k).value
    mr = moments.proxy_power_moment(mod, params)
    rhs = m2k ** (1.0 / k) * mr ** ((k - 1.0) / k)
    return _report("holder-chain", cross, rhs, "le", cal.chain_slack,
                   context={"q": mod.q, "x": x, "k": k,
                            "moment_2k": m2k, "weight_power_moment": mr})


def check_weighted_correspondence(mod: PrimeModulus, x: float,
                                 params: proxy.ProxyParams,
                                 cal: Calibration) -> CheckReport:
    """Character average of |S(x)|^2 R(chi) against the exact diagonal expectation.

    Valid when x * prod_m y_m^{4 J_m} < q, so every index pair met by the
    expansion is resolved exactly by the character group.
    """
    if params.poly_length_log() + math.log(x) >= math.log(mod.q):
        raise LengthViolation("weights too long for this modulus")
    s = all_char_sums_fft(mod, x).values
    w = proxy.proxy_weight_all_chars(mod, params)
    lhs = float(((np.abs(s) ** 2) * w).sum() / (mod.q - 1))
    rhs = moments.cross_moment_exact_rmf(x, params)
    return _report("weighted-correspondence", lhs, rhs, "eq",
                   cal.orthogonality_tol, scale=max(abs(rhs), 1e-300),
                   context={"q": mod.q, "x": x})


# ---------------------------------------------------------------------------
# theta checks

def check_even_orthogonality(mod: PrimeModulus, pairs, cal: Calibration) -> CheckReport:
    """Summed even-character relation against the n = +-m indicator."""
    worst = 0.0
    for n, m in pairs:
        got = theta.even_char_orthogonality(mod, n, m)
        want = 1.0 if (n - m) % mod.q == 0 or (n + m) % mod.q == 0 else 0.0
        if n % mod.q == 0 or m % mod.q == 0:
            want = 0.0
        worst = max(worst, abs(got - want))
    return _report("even-orthogonality", worst, 0.0, "eq", cal.orthogonality_tol,
                   scale=1.0, context={"q": mod.q, "pairs": len(list(pairs))})


def check_theta_moment_oracle(mod: PrimeModulus, cal: Calibration) -> CheckReport:
    """k = 1 even theta moment: DFT route against the quadratic-form oracle."""
    lhs = theta.theta_moment(mod, 1.0, "even").value
    rhs = theta.even_theta_second_moment_oracle(mod)
    return _report("theta-moment-oracle", lhs, rhs, "eq", cal.orthogonality_tol,
                   scale=max(abs(rhs), 1e-300), context={"q": mod.q})


def check_mellin_unit(s: float, cal: Calibration) -> CheckReport:
    """Mellin identity in the single-term case: numeric side against Gamma(s/2)/(2 pi^{s/2})."""
    sample = rmf.sample(1, 2)
    numeric, closed = theta.mellin_transform_check(1.0, s, sample)
    dev = abs(numeric - closed)
    return _report("mellin-unit", dev, 0.0, "eq", cal.mellin_tol,
                   scale=abs(closed), context={"s": s, "closed": closed.real})


# ---------------------------------------------------------------------------
# suites

def _rand_coeffs(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def suite_identities(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    mod = build_modulus(q)
    rng = np.random.default_rng(seed)
    size = min(q - 1, 40)
    delta = np.zeros(5)
    delta[0] = 1.0
    reports = [
        check_orthogonality_correspondence(mod, delta, cal),
        check_orthogonality_correspondence(mod, _rand_coeffs(rng, size), cal),
        check_fourth_moment_count(mod, min(q - 1, 30), cal),
        check_reflection(mod, (q - 1) * 0.618, cal),
        check_fft_vs_naive(mod, min(q - 1, 200), cal),
        check_parseval({1: 1.0 + 0j}, 0.5, cal, tol=cal.parseval_delta_tol),
        check_parseval({1: 1.0 + 0j}, 1.5, cal, tol=cal.parseval_delta_tol),
    ]
    support = [1, 2, 3, 4, 6, 8, 9, 12]
    coeffs = {n: complex(z) for n, z in zip(support, _rand_coeffs(rng, len(support)))}
    reports.append(check_parseval(coeffs, 0.75, cal))
    return reports


def suite_counting(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-0.4, 0.6, size=8)
    return [
        check_bernoulli(xs, cal),
        check_bernoulli([0.0], cal),
        check_rough_count(10, 20, 3, cal),
        check_rough_count(100, 1000, 5, cal),
        check_even_moment_ratio({1: 1.0 + 0j, 2: 0.5 - 0.5j, 3: 1j},
                                (2, 3), {2: 1.0, 3: 0.7j}, {2: 0.3, 3: 0.1},
                                2, cal),
    ]


def suite_euler(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    return [
        check_cosine_branch(0.0, 1e5, cal),
        check_cosine_branch(0.5, 1e5, cal),
        check_cosine_branch(5.0, 1e6, cal),
        check_cosine_branch(50.0, 1e5, cal),
    ]


def _desk_setup(q: int):
    mod = build_modulus(q)
    x = 6 if q >= 101 else 2
    params = proxy.desk_params(x=x, y=2.0, k=2.0, j_values=[1], q=q)
    return mod, x, params


def suite_proxy(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    instances = [(float(rng.uniform(0.5, 2.5) * rng.choice([-1.0, 1.0])),
                  float(rng.uniform(2.0, 4.0)), int(rng.integers(1, 5)))
                 for _ in range(40)]
    mod, x, params = _desk_setup(q)
    wide = proxy.desk_params(x=4.0, y=20.0, k=2.0, j_values=[2])
    skew = proxy.desk_params(x=4.0, y=20.0, k=3.0, j_values=[2])
    sources = [proxy.SampleSource(rmf.sample(int(s), 25))
               for s in rng.integers(0, 2**62, size=40)]
    char_sources = [proxy.CharSource(mod, int(a))
                    for a in rng.integers(1, mod.q - 1, size=10)]
    sub_params = proxy.desk_params(x=4.0, y=8.0, k=2.5, j_values=[1])
    return [
        check_series_consistency(instances, cal),
        check_surrogate_grid(cal),
        check_surrogate_domination(wide, sources, cal),
        check_surrogate_domination(skew, sources, cal),
        check_subadditivity(sub_params, sources + char_sources, cal),
        check_holder_chain(mod, x, params, cal),
        check_weighted_correspondence(mod, x, params, cal),
    ]


def suite_theta(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    mod = build_modulus(q)
    rng = np.random.default_rng(seed)
    pairs = [(int(n), int(m)) for n, m in rng.integers(1, mod.q, size=(25, 2))]
    pairs += [(3, mod.q - 3), (5, 5)]
    return [
        check_even_orthogonality(mod, pairs, cal),
        check_theta_moment_oracle(mod, cal),
        check_mellin_unit(1.0, cal),
    ]


def suite_holder(q: int, seed: int, cal: Calibration) -> list[CheckReport]:
    """The moment-comparison chain in isolation."""
    mod, x, params = _desk_setup(q)
    rng = np.random.default_rng(seed)
    sources = [proxy.SampleSource(rmf.sample(int(s), 25))
               for s in rng.integers(0, 2**62, size=20)]
    sub_params = proxy.desk_params(x=4.0, y=8.0, k=2.5, j_values=[1])
    return [
        check_holder_chain(mod, x, params, cal),
        check_subadditivity(sub_params, sources, cal),
        check_weighted_correspondence(mod, x, params, cal),
    ]


SUITES = {
    "identities": suite_identities,
    "counting": suite_counting,
    "euler": suite_euler,
    "proxy": suite_proxy,
    "theta": suite_theta,
    "holder": suite_holder,
}


def run_suite(name: str, q: int, seed: int, cal: Calibration | None = None) -> list[CheckReport]:
    """Run one named suite (or 'full' for all) deterministically."""
    cal = cal or Calibration()
    if name == "full":
        out = []
        for fn in SUITES.values():
            out.extend(fn(q, seed, cal))
        return out
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from "
                          f"{sorted(SUITES) + ['full']}")
    return SUITES[name](q, seed, cal)
