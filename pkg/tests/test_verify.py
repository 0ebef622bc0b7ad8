import math

import numpy as np
import pytest

from charmoments import proxy, rmf, verify
from charmoments.calibration import Calibration
from charmoments.errors import DomainError, LengthViolation
from charmoments.modarith import build_modulus

CAL = Calibration()


@pytest.fixture(scope="module")
def mod101():
    return build_modulus(101)


def test_report_relations():
    r = verify._report("t", 1.0, 1.0 + 1e-12, "eq", 1e-9)
    assert r.passed
    r = verify._report("t", 2.0, 1.0, "le", 0.0)
    assert not r.passed
    r = verify._report("t", 2.0, 1.0, "ge", 0.0)
    assert r.passed
    with pytest.raises(DomainError):
        verify._report("t", 1.0, 1.0, "??", 0.0)


def test_orthogonality_correspondence_delta(mod101):
    delta = np.zeros(8)
    delta[2] = 3.0
    r = verify.check_orthogonality_correspondence(mod101, delta, CAL)
    assert r.passed
    assert r.rhs == pytest.approx(9.0)


def test_orthogonality_requires_short_polynomials(mod101):
    with pytest.raises(LengthViolation):
        verify.check_orthogonality_correspondence(mod101, np.ones(101), CAL)


def test_bernoulli_domain(mod101):
    with pytest.raises(DomainError):
        verify.check_bernoulli([-1.5], CAL)
    assert verify.check_bernoulli([-0.5, 0.25, 0.1], CAL).passed


def test_parseval_delta_exact():
    r = verify.check_parseval({1: 1.0 + 0j}, 0.5, CAL, tol=CAL.parseval_delta_tol)
    assert r.passed
    # single mass at n=1: both sides are 1/(2 sigma) * ... = 1 at sigma = 1/2
    assert r.lhs == pytest.approx(1.0, abs=1e-12)


def test_parseval_shifted_delta():
    # mass at n=3: lhs = 3^{-2 sigma}/(2 sigma)
    sigma = 0.75
    r = verify.check_parseval({3: 2.0 + 0j}, sigma, CAL, tol=CAL.parseval_delta_tol)
    assert r.passed
    assert r.lhs == pytest.approx(4.0 * 3.0 ** (-1.5) / 1.5, rel=1e-12)


def test_parseval_random_coeffs():
    rng = np.random.default_rng(11)
    ns = [1, 2, 3, 5, 7, 8]
    coeffs = {n: complex(a, b) for n, (a, b)
              in zip(ns, rng.standard_normal((len(ns), 2)))}
    r = verify.check_parseval(coeffs, 0.6, CAL)
    assert r.passed


def test_parseval_rejects_bad_support():
    with pytest.raises(DomainError):
        verify.check_parseval({0: 1.0}, 0.5, CAL)
    with pytest.raises(DomainError):
        verify.check_parseval({1: 1.0}, 0.0, CAL)


def test_even_moment_ratio_within_ceiling():
    r = verify.check_even_moment_ratio(
        {1: 1.0, 2: 1.0}, (2, 3), {2: 0.5, 3: 0.25}, {2: 0.1, 3: 0.0}, 3, CAL)
    assert r.passed
    assert r.lhs <= CAL.lemma_ratio_max


def test_even_moment_ratio_exact_j0_case():
    # j = 0: exact expectation is sum dr(n)|c_n|^2 >= plain sum; ratio <= ceiling
    r = verify.check_even_moment_ratio({1: 1.0, 6: 1.0}, (2, 3), {}, {}, 0, CAL)
    # dr(6) = 4 with pset {2,3}; majorant = 1 + 4 = 5, exact = 1 + 1 = 2
    assert r.context["exact"] == pytest.approx(2.0)
    assert r.context["majorant"] == pytest.approx(5.0)
    assert r.passed


def test_rough_count_window():
    r = verify.check_rough_count(100, 1000, 5, CAL)
    assert r.passed
    # y < 2: no sieve condition; expected = plain length
    r2 = verify.check_rough_count(10, 110, 1.5, CAL)
    assert r2.context["expected"] == pytest.approx(100.0)
    assert r2.passed


def test_series_consistency_check():
    insts = [(1.0, 2.0, 1), (-1.5, 3.0, 2), (2.0, 2.5, 4)]
    assert verify.check_series_consistency(insts, CAL).passed


def test_surrogate_grid_check():
    r = verify.check_surrogate_grid(CAL, ks=(2.0, 2.5), js=(1, 2))
    assert r.passed
    assert r.lhs < CAL.surrogate_slack


def test_holder_chain_equality_case(mod101):
    # equality needs |S|^{2(k-1)} proportional to R: x = 1 makes |S| constant
    # and an empty prime window makes R constant
    params = proxy.desk_params(x=6.0, y=1.5, k=2.0, j_values=[1], q=101)
    r = verify.check_holder_chain(mod101, 1.0, params, CAL)
    assert r.passed
    assert r.lhs == pytest.approx(r.rhs, rel=1e-10)


def test_holder_chain_strict(mod101):
    params = proxy.desk_params(x=6.0, y=2.0, k=2.0, j_values=[1], q=101)
    r = verify.check_holder_chain(mod101, 6.0, params, CAL)
    assert r.passed
    assert r.lhs < r.rhs


def test_weighted_correspondence_guard(mod101):
    params = proxy.desk_params(x=6.0, y=2.0, k=2.0, j_values=[2])
    with pytest.raises(LengthViolation):
        verify.check_weighted_correspondence(mod101, 6.0, params, CAL)


def test_suites_all_pass(mod101):
    for name in sorted(verify.SUITES):
        reports = verify.run_suite(name, 101, 1)
        assert reports, name
        for r in reports:
            assert r.passed, (name, r)


def test_full_suite_is_union():
    full = verify.run_suite("full", 101, 1)
    parts = sum(len(verify.run_suite(n, 101, 1)) for n in verify.SUITES)
    assert len(full) == parts


def test_unknown_suite():
    with pytest.raises(DomainError):
        verify.run_suite("nosuchsuite", 101, 1)


def test_deterministic_given_seed():
    a = verify.run_suite("proxy", 101, 5)
    b = verify.run_suite("proxy", 101, 5)
    assert [(r.lhs, r.rhs) for r in a] == [(r.lhs, r.rhs) for r in b]
