from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pqwiener.base import Config, ZpPoint, bit_length, digit_sum, is_prime, ones_count, truncate_point

MINUS_ONE = ZpPoint.periodic([], [1], 2)


def test_config_rejects_bad_primes():
    with pytest.raises(ValueError):
        Config(4, 5)
    with pytest.raises(ValueError):
        Config(5, 5)
    with pytest.raises(ValueError):
        Config(2, 5, precision=0)
    assert Config(2, 5).precision == 64


def test_is_prime_matches_sieve():
    sieve = [True] * 200
    sieve[0] = sieve[1] = False
    for i in range(2, 200):
        if sieve[i]:
            for j in range(i * i, 200, i):
                sieve[j] = False
    assert [n for n in range(200) if is_prime(n)] == [n for n in range(200) if sieve[n]]


def test_truncate_examples():
    assert truncate_point(ZpPoint.nat(5, 2), 2) == 1
    assert truncate_point(MINUS_ONE, 3) == 7
    assert all(truncate_point(ZpPoint.nat(0, 3), N) == 0 for N in range(6))


def test_ones_count_and_bit_length_examples():
    assert [ones_count(n) for n in (0, 1, 2, 3)] == [0, 1, 1, 2]
    assert [bit_length(m) for m in (0, 1, 7, 8)] == [0, 1, 3, 4]
    assert digit_sum(0b1011, 2) == 3 and digit_sum(17, 3) == 5


def test_canonical_forms_compare_equal():
    assert ZpPoint.nat(6, 2) == ZpPoint.periodic([0, 1, 1], [0], 2)
    assert ZpPoint.periodic([0, 1, 1, 0, 0], [0, 0], 2) == ZpPoint.nat(6, 2)
    assert ZpPoint.periodic([1, 1], [1, 1], 2) == MINUS_ONE
    assert ZpPoint.periodic([0], [1, 0, 1, 0], 2) == ZpPoint.periodic([], [0, 1], 2)
    assert ZpPoint.from_int(-1, 2) == MINUS_ONE


def test_from_fraction_and_back():
    for x in (Fraction(1, 3), Fraction(-2, 7), Fraction(5), Fraction(-9)):
        z = ZpPoint.from_fraction(x, 2)
        assert z.as_fraction() == x
    assert ZpPoint.from_fraction(Fraction(1, 2), 3).as_fraction() == Fraction(1, 2)
    with pytest.raises(ValueError):
        ZpPoint.from_fraction(Fraction(1, 2), 2)


def test_json_and_parse_round_trip():
    for z in (ZpPoint.nat(11, 2), MINUS_ONE, ZpPoint.periodic([1, 0], [0, 1, 1], 2)):
        assert ZpPoint.from_json(z.to_json(), 2) == z
        assert ZpPoint.parse(str(z), 2) == z
    assert ZpPoint.parse(":1", 2) == MINUS_ONE
    assert ZpPoint.parse("-1", 2) == MINUS_ONE
    assert ZpPoint.parse("1,12:3", 13) == ZpPoint.periodic([1, 12], [3], 13)
    assert MINUS_ONE.to_json() == {"kind": "periodic", "pre": [], "period": [1]}


points = st.builds(
    lambda p, pre, per: ZpPoint.periodic([d % p for d in pre], [d % p for d in per], p),
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(0, 4), max_size=5),
    st.lists(st.integers(0, 4), min_size=1, max_size=4),
)


@given(points, st.integers(1, 20))
def test_digit_coherence(z, N):
    p = z.p
    assert truncate_point(z, N) % p ** (N - 1) == truncate_point(z, N - 1)
    assert 0 <= truncate_point(z, N) < p**N


@given(points, st.integers(0, 12))
def test_truncation_matches_rational_value(z, N):
    # the p-adic limit of the digit stream is congruent to its truncation
    x = z.as_fraction()
    P = z.p**N
    assert (x.numerator - truncate_point(z, N) * x.denominator) % P == 0


@given(st.integers(0, 64))
def test_minus_one_has_all_ones(n):
    assert ones_count(truncate_point(MINUS_ONE, n)) == n


@given(st.integers(1, 10**12))
def test_bit_length_brackets(m):
    N = bit_length(m)
    assert 2 ** (N - 1) <= m < 2**N
