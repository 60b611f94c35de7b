import math
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permstab.core import (
    Multiset,
    apply_sigma,
    canonical_form,
    count_words,
    enumerate_words,
    format_multiset,
    format_word,
    make_multiset,
    map_shards,
    multiplicity_rearrangements,
    parse_multiset,
    parse_word,
    permute_multiset,
    shard_prefixes,
    transpose_multiset,
    word_multiset,
)

small_multisets = (
    st.lists(st.integers(min_value=1, max_value=3), min_size=0, max_size=4)
    .filter(lambda ks: sum(ks) <= 8)
    .map(lambda ks: Multiset(tuple(ks)))
)


def test_multiset_basics():
    M = Multiset((2, 4, 2, 1))
    assert M.n == 4
    assert M.size == 9
    assert str(M) == "(2,4,2,1)"


def test_multiset_rejects_nonpositive():
    with pytest.raises(ValueError):
        Multiset((2, 0, 1))
    with pytest.raises(ValueError):
        Multiset((-1,))


def test_make_multiset_drops_zeros():
    assert make_multiset([2, 0, 3]) == Multiset((2, 3))
    assert make_multiset([]) == Multiset(())


def test_count_words_multinomial():
    assert count_words(Multiset((2, 1, 3))) == math.factorial(6) // (2 * 6)
    assert count_words(Multiset(())) == 1
    assert count_words(Multiset((5,))) == 1


def test_enumerate_words_small():
    words = list(enumerate_words(Multiset((2, 1))))
    assert words == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def test_enumerate_words_empty():
    assert list(enumerate_words(Multiset(()))) == [()]


@given(small_multisets)
@settings(max_examples=60, deadline=None)
def test_enumerate_words_sorted_distinct_complete(M):
    words = list(enumerate_words(M))
    assert words == sorted(words)
    assert len(words) == len(set(words)) == count_words(M)
    for w in words[:: max(1, len(words) // 7)]:
        assert sorted(w) == [i + 1 for i, k in enumerate(M.multiplicities) for _ in range(k)]


@given(small_multisets)
@settings(max_examples=40, deadline=None)
def test_shards_partition_enumeration(M):
    merged = []
    for prefix in shard_prefixes(M):
        if prefix and M.multiplicities[prefix[0] - 1] == 0:
            continue
        merged.extend(enumerate_words(M, prefix))
    assert merged == list(enumerate_words(M))


def test_enumerate_words_rejects_bad_prefix():
    with pytest.raises(ValueError):
        list(enumerate_words(Multiset((1, 1)), (3,)))
    with pytest.raises(ValueError):
        list(enumerate_words(Multiset((1, 1)), (1, 1)))


def test_map_shards_order_is_thread_independent():
    shards = [(a,) for a in range(1, 7)]
    seq = map_shards(lambda s: s[0] * s[0], shards, threads=1)
    par = map_shards(lambda s: s[0] * s[0], shards, threads=8)
    assert seq == par == [1, 4, 9, 16, 25, 36]


def test_transpose_multiset():
    M = Multiset((2, 1, 3))
    assert transpose_multiset(M, 1) == Multiset((1, 2, 3))
    assert transpose_multiset(M, 2) == Multiset((2, 3, 1))
    with pytest.raises(IndexError):
        transpose_multiset(M, 3)
    with pytest.raises(IndexError):
        transpose_multiset(M, 0)


def test_apply_sigma_and_permute_multiset():
    # sigma sends letter j to sigma[j-1]
    sigma = (2, 3, 1)
    assert apply_sigma(sigma, (1, 2, 3, 1)) == (2, 3, 1, 2)
    M = Multiset((2, 1, 3))
    Mp = permute_multiset(sigma, M)
    # letter sigma(j) of the image has the multiplicity letter j had
    for j in range(1, 4):
        assert Mp.multiplicities[sigma[j - 1] - 1] == M.multiplicities[j - 1]


def test_multiplicity_rearrangements_orbit():
    orbit = multiplicity_rearrangements(Multiset((2, 1, 3)))
    vectors = [m.multiplicities for m in orbit]
    assert vectors == sorted(vectors)
    assert set(vectors) == set(permutations((1, 2, 3)))
    assert canonical_form(Multiset((2, 1, 3))) == Multiset((3, 2, 1))


def test_multiplicity_rearrangements_with_repeats():
    orbit = multiplicity_rearrangements(Multiset((2, 2, 1)))
    assert [m.multiplicities for m in orbit] == [(1, 2, 2), (2, 1, 2), (2, 2, 1)]


def test_word_round_trips():
    assert parse_word("321432212") == (3, 2, 1, 4, 3, 2, 2, 1, 2)
    assert parse_word("12,3,1") == (12, 3, 1)
    assert format_word((1, 2, 11)) == "1,2,11"
    assert format_word((1, 2, 9)) == "129"
    assert parse_word("") == ()
    assert format_word(()) == ""
    with pytest.raises(ValueError):
        parse_word("12a")
    with pytest.raises(ValueError):
        parse_word("1,0,2")


def test_multiset_round_trips():
    assert parse_multiset("(2,4,2,1)") == Multiset((2, 4, 2, 1))
    assert parse_multiset("2,4,2,1") == Multiset((2, 4, 2, 1))
    assert format_multiset(Multiset((2, 4, 2, 1))) == "(2,4,2,1)"
    assert parse_multiset("()") == Multiset(())
    with pytest.raises(ValueError):
        parse_multiset("(2,x)")


def test_word_multiset():
    assert word_multiset((3, 1, 2, 1)) == Multiset((2, 1, 1))
    assert word_multiset(()) == Multiset(())
    with pytest.raises(ValueError):
        word_multiset((1, 3))  # letter 2 missing
