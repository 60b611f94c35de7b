from math import factorial

import pytest

from permstab.core import BudgetExceededError, Multiset
from permstab.eulerian import (
    ATable,
    a_bruteforce,
    a_recurrence_check,
    a_table,
    doubled_key,
    eulerian_table,
    gf21_coefficient,
    macmahon_coefficient,
    required_table_depth,
    verify_gf,
    verify_pde,
)
from permstab.patterns import distribution, parse_pattern
from permstab.stability import partitions


def test_eulerian_rows_golden():
    t = eulerian_table(6)
    assert t.rows[0] == (1,)
    assert t.rows[1] == (1,)
    assert t.rows[2] == (1, 1)
    assert t.rows[3] == (1, 4, 1)
    assert t.rows[4] == (1, 11, 11, 1)
    assert t.rows[5] == (1, 26, 66, 26, 1)
    assert t.rows[6] == (1, 57, 302, 302, 57, 1)


def test_eulerian_row_sums_and_symmetry():
    t = eulerian_table(9)
    for m in range(1, 10):
        row = t.rows[m]
        assert sum(row) == factorial(m)
        assert row == row[::-1]


def test_eulerian_value_bounds():
    t = eulerian_table(4)
    assert t.value(4, 1) == 11
    assert t.value(4, 7) == 0
    assert t.value(0, 0) == 1
    with pytest.raises(ValueError):
        t.value(5, 0)
    doc = t.to_json_dict()
    assert doc["rows"][4] == ["1", "11", "11", "1"]


def test_eulerian_matches_bruteforce():
    t = eulerian_table(6)
    p = parse_pattern("12")
    for m in range(1, 7):
        dist = distribution(Multiset((1,) * m), p)
        assert tuple(dist.count(s) for s in range(m)) == t.rows[m]


def test_a_bruteforce_examples():
    assert a_bruteforce((1, 2), 1) == 2
    assert a_bruteforce((1, 2), 0) == 1
    assert a_bruteforce((3,), 0) == 1
    assert a_bruteforce((2, 2), 1) == 4
    # order of K is immaterial
    assert a_bruteforce((2, 1), 1) == a_bruteforce((1, 2), 1)


def test_recurrence_examples():
    assert a_recurrence_check((1, 1), 1) == 1
    assert a_recurrence_check((1, 2), 1) == 2
    assert a_recurrence_check((1, 1, 1), 1) == 4
    with pytest.raises(ValueError):
        a_recurrence_check((2, 2), 1)
    with pytest.raises(ValueError):
        a_recurrence_check((1, 2), 0)


def test_recurrence_matches_bruteforce_small():
    for total in range(2, 8):
        for key in partitions(total, total):
            if 1 not in key:
                continue
            for s in range(1, total):
                assert a_recurrence_check(key, s) == a_bruteforce(key, s), (key, s)


def test_a_table_golden():
    t = a_table(6)
    assert t.entries[(4, 1)] == (1, 7, 4, 0)
    assert t.entries[(4, 2)] == (1, 4, 1, 0)
    for m in range(7):
        for k in range(m // 2 + 1):
            assert t.value(m, k, 0) == 1
    e = eulerian_table(6)
    for m in range(1, 7):
        for s in range(m):
            assert t.value(m, 0, s) == e.value(m, s)


def test_a_table_out_of_range():
    t = a_table(5)
    assert t.value(5, 3, 1) == 0  # k > m/2
    assert t.value(4, 1, 9) == 0
    with pytest.raises(ValueError):
        t.value(6, 0, 0)


def test_a_table_row_sums():
    t = a_table(9)
    for m in range(10):
        for k in range(m // 2 + 1):
            total = sum(t.entries[(m, k)])
            assert total * 2**k == factorial(m), (m, k)


def test_a_table_matches_bruteforce():
    t = a_table(7)
    for m in range(8):
        for k in range(m // 2 + 1):
            key = doubled_key(m, k)
            for s in range(m + 1):
                assert t.value(m, k, s) == a_bruteforce(key, s), (m, k, s)


def test_a_table_log_concavity():
    t = a_table(9)
    for (m, k), row in t.entries.items():
        support = [v for v in row if v]
        for j in range(1, len(support) - 1):
            assert support[j] ** 2 >= support[j - 1] * support[j + 1], (m, k)


def test_a_table_serialization():
    t = a_table(4)
    doc = t.to_json_dict()
    assert doc["m_max"] == 4
    assert {"m": 4, "k": 1, "s": 1, "value": "7"} in doc["entries"]
    lines = t.to_csv().strip().splitlines()
    assert lines[0] == "m,k,s,value"
    assert "4,1,1,7" in lines


def test_doubled_key():
    assert doubled_key(9, 2) == (2, 2, 1, 1, 1, 1, 1)
    assert doubled_key(4, 2) == (2, 2)
    assert doubled_key(3, 0) == (1, 1, 1)
    with pytest.raises(ValueError):
        doubled_key(3, 2)


def test_macmahon_golden():
    assert macmahon_coefficient(Multiset((1, 1)), 1) == 1
    assert macmahon_coefficient(Multiset((2, 1)), 0) == 1
    assert macmahon_coefficient(Multiset((2, 1)), 1) == 2
    assert macmahon_coefficient(Multiset((1, 1, 1)), 1) == 4
    with pytest.raises(BudgetExceededError):
        macmahon_coefficient(Multiset((3, 3, 3, 3)), 8, budget=10)


def test_gf21_golden():
    assert gf21_coefficient(Multiset((1, 1)), 0) == 1
    assert gf21_coefficient(Multiset((1, 1)), 1) == 1
    assert gf21_coefficient(Multiset((2, 2)), 1) == 4
    assert gf21_coefficient(Multiset((2, 2)), 3) == 0
    with pytest.raises(BudgetExceededError):
        gf21_coefficient(Multiset((3, 3, 3, 3)), 8, budget=10)


def test_verify_gf_small_sweep():
    for total in range(1, 6):
        for key in partitions(total, 3):
            m = Multiset(key)
            for s in range(total):
                for which in ("12", "21"):
                    agree, series_value, brute = verify_gf(which, m, s)
                    assert agree, (which, key, s, series_value, brute)


def test_verify_gf_rejects_unknown_route():
    with pytest.raises(ValueError):
        verify_gf("11", Multiset((1, 1)), 0)


def test_required_table_depth():
    assert required_table_depth(8, 4, 8) == 18
    assert required_table_depth(0, 0, 0) == 2


def test_verify_pde_passes():
    assert verify_pde(0, 0, 0) == (True, None)
    assert verify_pde(4, 2, 4) == (True, None)
    assert verify_pde(6, 0, 6) == (True, None)


def test_verify_pde_depth_and_degree_errors():
    with pytest.raises(ValueError, match="insufficient table depth"):
        verify_pde(4, 2, 4, table=a_table(5))
    with pytest.raises(ValueError):
        verify_pde(-1, 0, 0)


def test_verify_pde_detects_corruption():
    depth = required_table_depth(2, 2, 2)
    table = a_table(depth)
    tampered = dict(table.entries)
    tampered[(4, 1)] = (1, 8, 4, 0)
    ok, failure = verify_pde(2, 2, 2, table=ATable(depth, tampered))
    assert not ok
    assert isinstance(failure, tuple) and len(failure) == 3
