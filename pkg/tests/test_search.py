"""Witness searches, greedy prefixes, block subsets, and the class scan."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ternpow import (
    greedy_element,
    int_omits_digit,
    scan_problems,
    smallest_witness,
    theorem17_search,
    verify_sigma_subsets,
)

LOG3_2 = math.log(2) / math.log(3)


def _free_integers(limit):
    t = 1
    out = []
    while True:
        n = int(bin(t)[2:], 3)
        if n > limit:
            return out
        out.append(n)
        t += 1


def _brute_smallest_witness(mults, limit):
    for n in _free_integers(limit):
        if all(int_omits_digit(n * m, 2) for m in mults):
            return n
    return None


def test_trivial_witness():
    w = smallest_witness([1])
    assert w.found and w.n == 1
    assert w.digits == (1,)
    assert w.bound_denominator == 1
    assert abs(w.bound - LOG3_2) < 1e-15
    assert w.exhausted


def test_witness_for_seven():
    w = smallest_witness([7])
    assert (w.n, w.digits, w.bound_denominator) == (4, (1, 1), 4)
    assert int_omits_digit(4 * 7, 2)


def test_smallest_witness_matches_brute_force():
    for m in range(2, 61):
        if m % 3 == 0:
            continue
        w = smallest_witness([1, m])
        brute = _brute_smallest_witness((1, m), 3**9)
        if w.found and w.n <= 3**9:
            assert w.n == brute
        else:
            assert brute is None


def test_witness_respects_all_multipliers():
    w = smallest_witness([7, 10])
    assert w.found and w.n == 4
    for m in (1, 7, 10):
        assert int_omits_digit(w.n * m, 2)
    # nothing smaller works
    assert _brute_smallest_witness((1, 7, 10), w.n - 1) is None
    # joint witnesses are not closed under union: {4} and {7} each admit
    # one, together they do not
    assert smallest_witness([4]).found and smallest_witness([7]).found
    assert not smallest_witness([4, 7]).found


def test_no_witness_classes_are_decided():
    # 2 mod 3 multipliers reject every nonzero string
    w = smallest_witness([1, 2])
    assert not w.found and w.exhausted
    # 52 spans a positive-dimension set with no witness at any size
    w52 = smallest_witness([1, 52])
    assert not w52.found and w52.exhausted


def test_bounded_search_known_results():
    w = theorem17_search([1, 4, 256], 10)
    assert w.found and w.n == 1
    assert w.bound_denominator == 6
    assert abs(w.bound - LOG3_2 / 6) < 1e-15

    w7 = theorem17_search([7], 100)
    assert (w7.n, w7.bound_denominator) == (4, 4)

    miss = theorem17_search([1, 52], 1000)
    assert not miss.found and not miss.exhausted
    assert miss.checked_up_to == 1000


def test_bounded_search_agrees_with_exact_decision():
    for m in (5, 7, 10, 13, 16, 46):
        exact = smallest_witness([1, m])
        bounded = theorem17_search([1, m], 3**10)
        if exact.found and exact.n <= 3**10:
            assert bounded.found and bounded.n == exact.n
        else:
            assert not bounded.found


def test_bounded_search_validation():
    with pytest.raises(ValueError):
        theorem17_search([1, 7], 0)


@given(st.integers(min_value=0, max_value=300))
def test_free_integer_enumeration_is_ascending_and_complete(limit):
    got = _free_integers(limit)
    want = [n for n in range(1, limit + 1) if int_omits_digit(n, 2)]
    assert got == want


def test_greedy_element_known_prefixes():
    g = greedy_element(1, 10)
    assert g.digits == (1,) + (0,) * 9
    assert g.value == 1
    assert g.backtracks == 0

    g7 = greedy_element(7, 16)
    assert g7.digits[0] == 1
    assert len(g7.digits) == 16
    prod = 7 * g7.value
    for _ in range(16):
        assert prod % 3 != 2
        prod //= 3


def test_greedy_element_validation():
    with pytest.raises(ValueError):
        greedy_element(5, 8)  # 5 = 2 mod 3 has no admissible strings
    with pytest.raises(ValueError):
        greedy_element(7, 0)


def test_pure_greedy_never_stalls_for_single_multipliers():
    # single multipliers coprime to 3 keep an exit from every state, so the
    # one-step rule already succeeds; both routes must agree
    for m in range(4, 200, 3):
        pure = greedy_element(m, 64, pure_greedy=True)
        dfs = greedy_element(m, 64)
        assert pure.digits == dfs.digits
        assert dfs.backtracks == 0


def test_sigma_subsets_frozen_counts():
    rep = verify_sigma_subsets(6)
    assert rep.sigma_a_count == 8
    assert rep.sigma_b_count == 2
    assert rep.sigma_a_all_accepted and rep.sigma_b_all_accepted
    assert abs(rep.bound_a - LOG3_2 / 2) < 1e-15
    assert abs(rep.bound_b - LOG3_2 / 6) < 1e-15

    rep36 = verify_sigma_subsets(36)
    assert rep36.sigma_a_count == 2**18
    assert rep36.sigma_b_count == 2**6
    assert rep36.sigma_a_all_accepted and rep36.sigma_b_all_accepted


def test_sigma_subsets_brute_check():
    # independently re-walk every sigma_a string of length 6 through the
    # integer oracle: value = sum eps_i 9^i with eps in {0,1}
    for bits in range(8):
        n = sum(((bits >> i) & 1) * 9**i for i in range(3))
        for m in (1, 4):
            prod = n * m
            for _ in range(6):
                assert prod % 3 != 2
                prod //= 3


def test_sigma_subsets_validation():
    for bad in (5, 42, 0, 7):
        with pytest.raises(ValueError):
            verify_sigma_subsets(bad)


def test_scan_frozen_counts():
    scan = scan_problems(120)
    assert scan.mc_count == 56
    assert scan.mh_count == 60
    assert scan.strict == (16, 46, 48, 52)


def test_scan_row_details():
    scan = scan_problems(60)
    rows = {r.m: r for r in scan.rows}
    assert rows[1].in_mc and rows[1].witness == 1
    assert rows[3].normalized_m == 1 and rows[3].witness == 1
    assert rows[7].witness == 4
    assert not rows[2].in_mc and not rows[2].in_mh
    assert rows[16].in_mh and not rows[16].in_mc
    assert rows[46].in_mh and not rows[46].in_mc
    # every witness the scan reports actually certifies membership
    for r in scan.rows:
        if r.witness is not None:
            assert int_omits_digit(r.witness, 2)
            assert int_omits_digit(r.witness * r.normalized_m, 2)


def test_scan_class_containment():
    # a witness forces positive dimension: M_C is inside M_H
    scan = scan_problems(120)
    for row in scan.rows:
        if row.in_mc:
            assert row.in_mh


def test_scan_parallel_matches_serial():
    serial = scan_problems(40, workers=1)
    parallel = scan_problems(40, workers=2)
    assert serial == parallel


def test_scan_validation():
    with pytest.raises(ValueError):
        scan_problems(0)
    with pytest.raises(ValueError):
        scan_problems(5000)
    with pytest.raises(ValueError):
        scan_problems(50, limit=40)
