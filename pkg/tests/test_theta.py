import cmath
import math

import numpy as np
import pytest

from charmoments import rmf, theta
from charmoments.errors import DomainError
from charmoments.modarith import build_modulus


@pytest.fixture(scope="module")
def mod13():
    return build_modulus(13)


@pytest.fixture(scope="module")
def mod101():
    return build_modulus(101)


def test_truncation_point():
    assert theta.truncation_point(101) == pytest.approx(
        math.sqrt(101) * math.log(101) ** 2)


def test_all_vs_naive(mod13, mod101):
    for mod in (mod13, mod101):
        vals = theta.theta_all(mod)
        for a in range(min(12, mod.q - 1)):
            direct = theta.theta_naive(mod, a)
            assert abs(vals[a].value - direct) < 1e-10
            assert vals[a].kappa == a % 2


def test_principal_value_real(mod101):
    v0 = theta.theta_all(mod101)[0].value
    assert v0.imag == pytest.approx(0.0, abs=1e-12)
    assert v0.real > 0


def test_conjugation_symmetry(mod101):
    vals = theta.theta_all(mod101)
    q1 = mod101.q - 1
    for a in range(1, q1):
        other = vals[(q1 - a) % q1].value
        assert abs(other - vals[a].value.conjugate()) < 1e-10


def test_tail_bound_certificate(mod13):
    # truncating earlier must stay within the recorded majorant of the full value
    full = theta.theta_naive(mod13, 2, trunc=200.0)
    short = theta.theta_all(mod13, trunc=9.0)[2]
    assert abs(short.value - full) <= short.tail_bound + 1e-12
    assert short.tail_bound <= 13 * math.exp(-math.pi * 81.0 / 13.0) + 1e-15


def test_moment_k0_counts(mod101):
    even = theta.theta_moment(mod101, 0.0, "even")
    odd = theta.theta_moment(mod101, 0.0, "odd")
    q = 101
    assert even.value == pytest.approx(((q - 3) / 2) / (q - 1))
    assert odd.value == pytest.approx(((q - 1) / 2) / (q - 1))
    assert even.trials == (q - 3) // 2


def test_moment_oracle_small_q():
    for q in (11, 13, 101):
        mod = build_modulus(q)
        dft = theta.theta_moment(mod, 1.0, "even").value
        oracle = theta.even_theta_second_moment_oracle(mod)
        assert dft == pytest.approx(oracle, rel=1e-12)


def test_even_orthogonality_identity():
    mod = build_modulus(7)
    # 2 = -5 (mod 7): indicator fires
    assert theta.even_char_orthogonality(mod, 2, 5) == pytest.approx(1.0)
    assert theta.even_char_orthogonality(mod, 2, 2) == pytest.approx(1.0)
    assert theta.even_char_orthogonality(mod, 2, 3) == pytest.approx(0.0, abs=1e-12)
    assert theta.even_char_orthogonality(mod, 7, 3) == 0.0


def test_even_orthogonality_random_pairs(mod101):
    rng = np.random.default_rng(6)
    for n, m in rng.integers(1, 101, size=(50, 2)):
        got = theta.even_char_orthogonality(mod101, int(n), int(m))
        want = 1.0 if (n - m) % 101 == 0 or (n + m) % 101 == 0 else 0.0
        assert got == pytest.approx(want, abs=1e-10)


def test_odd_scales_above_even():
    # odd thetas carry the extra factor n ~ sqrt(q); their moment sits well above
    ratios = []
    for q in (101, 499, 1009):
        mod = build_modulus(q)
        even = theta.theta_moment(mod, 1.0, "even").value
        odd = theta.theta_moment(mod, 1.0, "odd").value
        ratios.append(odd / even)
    assert ratios[0] > 3.0
    assert ratios[1] > ratios[0]  # growing with q
    assert ratios[2] > ratios[1]


def test_parity_validation(mod13):
    with pytest.raises(DomainError):
        theta.theta_moment(mod13, 1.0, "both")


def test_lipschitz_probe_scales():
    s = rmf.sample(3, 3000)
    lhs, scale = theta.lipschitz_probe(s, q=509.0, t=3.0, alpha=0.5, kappa=0)
    assert scale == pytest.approx(0.5 * math.sqrt(509.0) / 9.0)
    assert lhs >= 0.0
    _, s1 = theta.lipschitz_probe(s, q=509.0, t=3.0, alpha=0.5, kappa=1)
    assert s1 == pytest.approx(0.5 * 509.0 / 9.0)
    with pytest.raises(DomainError):
        theta.lipschitz_probe(s, q=509.0, t=-1.0, alpha=0.5, kappa=0)


def test_lipschitz_probe_smooth_restriction():
    s = rmf.sample(3, 3000)
    full, _ = theta.lipschitz_probe(s, q=509.0, t=2.0, alpha=0.25, kappa=0)
    sm, _ = theta.lipschitz_probe(s, q=509.0, t=2.0, alpha=0.25, kappa=0, y_smooth=5.0)
    assert sm != pytest.approx(full)  # restriction genuinely removes terms


def test_mellin_single_term():
    s = rmf.sample(1, 10)
    for sv in (0.5, 1.0, 2.0):
        numeric, closed = theta.mellin_transform_check(1.0, sv, s)
        from scipy import special
        want = special.gamma(sv / 2.0) / (2.0 * math.pi ** (sv / 2.0))
        assert closed == pytest.approx(want, rel=1e-12)
        assert abs(numeric - closed) < 1e-8


def test_mellin_smooth_product():
    # y=2: numeric transform of the 2-smooth sum matches the one-factor product
    s = rmf.sample(9, 10)
    numeric, closed = theta.mellin_transform_check(2.0, 1.5, s, smooth_cap=10**7)
    assert abs(numeric - closed) < 1e-6 * abs(closed)
