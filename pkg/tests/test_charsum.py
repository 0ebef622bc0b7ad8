import numpy as np
import pytest

from charmoments.charsum import (
    WeightedIndicator,
    all_char_sums_fft,
    all_char_sums_naive,
    weighted_char_sums,
)
from charmoments.errors import OutOfRange
from charmoments.modarith import build_modulus


@pytest.fixture(scope="module")
def mod101():
    return build_modulus(101)


def test_fft_matches_naive(mod101):
    for x in (1, 7.9, 50, 100):
        fast = all_char_sums_fft(mod101, x).values
        slow = all_char_sums_naive(mod101, x).values
        assert np.max(np.abs(fast - slow)) < 1e-10


def test_principal_row_is_count(mod101):
    t = all_char_sums_fft(mod101, 30)
    assert t.values[0] == pytest.approx(30.0)
    t = all_char_sums_fft(mod101, 100.7)
    assert t.values[0] == pytest.approx(100.0)  # floor capped at q-1


def test_full_period_cancellation():
    mod = build_modulus(5)
    vals = all_char_sums_fft(mod, 4).values
    assert vals[0] == pytest.approx(4.0)
    assert np.max(np.abs(vals[1:])) < 1e-12


def test_x_equals_one(mod101):
    vals = all_char_sums_fft(mod101, 1).values
    assert np.max(np.abs(vals - 1.0)) < 1e-12


def test_reflection_symmetry(mod101):
    # chi(-1)-twist: |S(x)| = |S(q-1-floor(x))| for non-principal chi
    a = np.abs(all_char_sums_fft(mod101, 40).values[1:])
    b = np.abs(all_char_sums_fft(mod101, 60).values[1:])
    assert np.max(np.abs(a - b)) < 1e-10


def test_conjugate_characters(mod101):
    vals = all_char_sums_fft(mod101, 33).values
    for a in range(1, 100):
        assert vals[(100 - a) % 100] == pytest.approx(np.conj(vals[a]), abs=1e-10)


def test_x_out_of_range(mod101):
    with pytest.raises(OutOfRange):
        all_char_sums_fft(mod101, 0.5)
    with pytest.raises(OutOfRange):
        all_char_sums_fft(mod101, 102)


def test_weighted_sums_match_direct(mod101):
    rng = np.random.default_rng(3)
    ns = np.arange(1, 61)
    ws = rng.standard_normal(60) + 1j * rng.standard_normal(60)
    ind = WeightedIndicator.from_weights(mod101, ns, ws)
    got = weighted_char_sums(mod101, ind)
    for a in (0, 1, 17, 99):
        want = np.sum(ws * mod101.char_values(a, ns))
        assert got[a] == pytest.approx(want, abs=1e-9)


def test_weighted_indicator_drops_multiples(mod101):
    ns = np.array([1, 101, 202])
    ws = np.array([1.0, 5.0, 7.0])
    ind = WeightedIndicator.from_weights(mod101, ns, ws)
    got = weighted_char_sums(mod101, ind)
    assert got[0] == pytest.approx(1.0)  # chi(101k) = 0


def test_weighted_indicator_wraps_residues(mod101):
    # weight on n and on n+q land on the same character value
    one = weighted_char_sums(
        mod101, WeightedIndicator.from_weights(mod101, np.array([3]), np.array([2.0])))
    two = weighted_char_sums(
        mod101, WeightedIndicator.from_weights(mod101, np.array([104]), np.array([2.0])))
    assert np.max(np.abs(one - two)) < 1e-12


def test_weighted_length_validation(mod101):
    with pytest.raises(OutOfRange):
        weighted_char_sums(mod101, WeightedIndicator(q=101, coeffs=np.zeros(55)))
