import numpy as np
import pytest

from charmoments import modarith
from charmoments.errors import NotPrime, OutOfRange, TooLarge
from charmoments.modarith import build_modulus, char_value, parity


@pytest.fixture(scope="module")
def mod7():
    return build_modulus(7)


def test_dlog_table_q7(mod7):
    # 3 is the least primitive root of 7; powers 1,3,2,6,4,5
    assert mod7.g == 3
    expect = {1: 0, 3: 1, 2: 2, 6: 3, 4: 4, 5: 5}
    for n, d in expect.items():
        assert mod7.dlog[n] == d


def test_exp_table_inverts_dlog(mod7):
    for n in range(1, 7):
        assert mod7.exp_table[mod7.dlog[n]] == n


def test_legendre_mod7(mod7):
    # a = 3 gives the order-2 character; residues {1,2,4} map to +1
    want = {1: 1, 2: 1, 3: -1, 4: 1, 5: -1, 6: -1}
    for n, v in want.items():
        assert char_value(mod7, 3, n).real == pytest.approx(v, abs=1e-12)
        assert char_value(mod7, 3, n).imag == pytest.approx(0, abs=1e-12)


def test_char_multiplicativity(mod7):
    for a in range(6):
        for n in range(1, 7):
            for m in range(1, 7):
                lhs = char_value(mod7, a, (n * m) % 7)
                rhs = char_value(mod7, a, n) * char_value(mod7, a, m)
                assert lhs == pytest.approx(rhs, abs=1e-12)


def test_char_zero_on_multiples(mod7):
    assert char_value(mod7, 2, 7) == 0
    assert char_value(mod7, 2, 14) == 0


def test_principal_character(mod7):
    for n in range(1, 7):
        assert char_value(mod7, 0, n) == pytest.approx(1.0)


def test_parity():
    assert parity(0) == "even"
    assert parity(2) == "even"
    assert parity(1) == "odd"
    # conjugate pair has matching parity: a and q-1-a differ by an even number
    assert parity(4) == parity(2)


def test_char_values_vectorized(mod7):
    ns = np.arange(0, 15)
    got = mod7.char_values(1, ns)
    for i, n in enumerate(ns):
        want = 0j if n % 7 == 0 else char_value(mod7, 1, int(n) % 7)
        assert got[i] == pytest.approx(want, abs=1e-12)


def test_orthogonality_rows():
    mod = build_modulus(13)
    ns = np.arange(1, 13)
    for a in range(1, 12):
        total = mod.char_values(a, ns).sum()
        assert abs(total) < 1e-10  # non-principal rows sum to zero


def test_build_modulus_rejects():
    with pytest.raises(NotPrime):
        build_modulus(10)
    with pytest.raises(NotPrime):
        build_modulus(1)
    with pytest.raises(TooLarge):
        build_modulus(2**31 + 11)


def test_char_value_bad_index(mod7):
    with pytest.raises(OutOfRange):
        char_value(mod7, 6, 1)  # indices live in 0..q-2
    with pytest.raises(OutOfRange):
        char_value(mod7, -1, 1)


def test_larger_modulus_consistency():
    mod = build_modulus(20011)
    # g^dlog[n] == n spot check
    for n in (2, 1234, 20010):
        assert pow(mod.g, int(mod.dlog[n]), 20011) == n
