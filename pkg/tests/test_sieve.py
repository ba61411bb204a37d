"""Residue sieves for digit-2-free values of floor(lambda * 2^n)."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ternpow import (
    DyadicRational,
    InsufficientDigits,
    PadicApprox,
    SieveReport,
    count_N,
    count_tilde_N,
    enumerate_digit2free_powers,
    int_omits_digit,
    multiplicative_order_pow2,
    narkiewicz_check,
    residue_survivors,
    sieve_report,
    survivor_chain,
    survivors_N,
)


def test_multiplicative_order_matches_brute():
    for k in range(1, 8):
        modulus = 3**k
        order = 1
        v = 2 % modulus
        while v != 1:
            v = v * 2 % modulus
            order += 1
        assert multiplicative_order_pow2(k) == order == 2 * 3 ** (k - 1)
    with pytest.raises(ValueError):
        multiplicative_order_pow2(0)


def test_survivor_counts_are_powers_of_two():
    for k in range(1, 13):
        assert len(residue_survivors(k)) == 2 ** (k - 1)


def test_survivors_match_brute_digits():
    for k in range(1, 8):
        modulus = multiplicative_order_pow2(k)
        brute = frozenset(
            n for n in range(modulus) if int_omits_digit(pow(2, n, 3**k), 2)
        )
        assert residue_survivors(k) == brute


def test_survivor_chain_refines():
    chain = survivor_chain(9)
    for k in range(1, 9):
        coarse, fine = chain[k - 1], chain[k]
        modulus = multiplicative_order_pow2(k)
        assert {n % modulus for n in fine} <= coarse


@given(st.integers(min_value=2, max_value=200).filter(lambda a: a % 2 == 1))
def test_survivor_chain_other_multipliers(a):
    k = 4
    modulus = multiplicative_order_pow2(k)
    brute = frozenset(
        n
        for n in range(modulus)
        if int_omits_digit(a * pow(2, n, 3**k) % 3**k, 2)
    )
    assert residue_survivors(k, a) == brute


def test_enumerate_powers_known_survivors():
    assert enumerate_digit2free_powers(4374) == [0, 2, 8]
    # depth 0 selects the incremental-doubling oracle path
    assert enumerate_digit2free_powers(2000, residue_depth=0) == [0, 2, 8]
    with pytest.raises(ValueError):
        enumerate_digit2free_powers(0)
    with pytest.raises(ValueError):
        enumerate_digit2free_powers(10, residue_depth=-1)


def test_sieve_paths_agree():
    assert enumerate_digit2free_powers(600, residue_depth=5) == (
        enumerate_digit2free_powers(600, residue_depth=0)
    )


def test_sieve_report_frozen_run():
    rep = sieve_report(4374)
    assert rep.bound == 4374
    assert rep.survivors == (0, 2, 8)
    assert rep.counts_per_k == (
        2188, 1459, 973, 649, 433, 289, 193, 129, 99, 66, 41, 28,
    )
    assert rep.work_units == 28
    assert rep.narkiewicz_ok


def test_sieve_report_validation():
    with pytest.raises(ValueError):
        SieveReport(
            bound=10,
            survivors=(0, 11),
            counts_per_k=(5,),
            work_units=5,
            narkiewicz_ok=True,
        )
    with pytest.raises(ValueError):
        SieveReport(
            bound=10,
            survivors=(0, 2),
            counts_per_k=(3, 5),
            work_units=5,
            narkiewicz_ok=True,
        )


def test_narkiewicz_check_exact_edges():
    # bound is 1.62 * X^0.63093, compared via integer 100000th powers
    assert narkiewicz_check(1, 1)
    assert not narkiewicz_check(2, 1)
    assert narkiewicz_check(3, 100)
    assert not narkiewicz_check(30, 100)
    with pytest.raises(ValueError):
        narkiewicz_check(1, 0)


def test_padic_approx_residues():
    lam = PadicApprox.from_int(25, 4)
    assert lam.precision == 4
    assert lam.residue() == 25
    assert lam.residue(2) == 25 % 9
    with pytest.raises(InsufficientDigits):
        lam.residue(5)
    with pytest.raises(ValueError):
        PadicApprox(())
    with pytest.raises(ValueError):
        PadicApprox((3,))


def test_count_positive_floor_values_pure_powers():
    lam = DyadicRational.from_pair(1, 0)
    assert survivors_N(lam, 100) == (2, 8)
    assert count_N(lam, 100) == 2
    with pytest.raises(ValueError):
        count_N(lam, 0)


@given(
    st.integers(min_value=1, max_value=300),
    st.integers(min_value=0, max_value=8),
    st.integers(min_value=1, max_value=260),
)
def test_count_matches_fraction_oracle(num, s, X):
    lam = DyadicRational.from_pair(num, s)
    brute = [
        n
        for n in range(1, X + 1)
        if (v := (lam.value * 2**n).__floor__()) >= 1 and int_omits_digit(v, 2)
    ]
    assert survivors_N(lam, X) == tuple(brute)
    assert count_N(lam, X) == len(brute)


def test_surrogate_count_frozen_values():
    lam = PadicApprox.from_int(1, 24)
    for X, count, k in ((100, 13, 5), (1000, 47, 7), (10_000, 205, 9)):
        tc = count_tilde_N(lam, X)
        assert (tc.count, tc.k, tc.bound) == (count, k, X)
        assert tc.bound_ok


def test_surrogate_is_upper_proxy_for_exact():
    lam_exact = DyadicRational.from_pair(1, 0)
    lam_padic = PadicApprox.from_int(1, 24)
    for X in (50, 100, 500, 1000):
        assert count_tilde_N(lam_padic, X).count >= count_N(lam_exact, X)


def test_surrogate_requires_enough_digits():
    with pytest.raises(InsufficientDigits):
        count_tilde_N(PadicApprox.from_int(1, 4), 10_000)
    with pytest.raises(ValueError):
        count_tilde_N(PadicApprox.from_int(1, 24), 0)


def test_count_with_fractional_lambda():
    # lambda = 3/4: floor(3 * 2^(n-2)) = 0 for n=0 is excluded by n >= 1
    lam = DyadicRational.from_pair(3, 2)
    got = survivors_N(lam, 50)
    want = tuple(
        n
        for n in range(1, 51)
        if (v := (Fraction(3, 4) * 2**n).__floor__()) >= 1
        and int_omits_digit(v, 2)
    )
    assert got == want
