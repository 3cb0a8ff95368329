import random
from itertools import combinations
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.combinatorics import Coloring, InputError, VertexSet, unrank_edge
from hypermatch.matching import (
    BoundParams,
    Matching,
    WitnessError,
    afl_bound,
    check_matching,
    conjecture_bound,
    enumerate_perfect_matchings,
    find_mono_matching,
    find_s_colored_matching,
    format_matching,
    make_matching,
    max_matching,
    parse_matching,
    perfect_matching_count,
)

import oracles


def random_coloring(rng, n, r, t):
    return Coloring(n, r, t, bytes(rng.randrange(t) for _ in range(comb(n, r))))


def test_max_matching_trivial():
    mono = Coloring.constant(6, 3, 1)
    assert len(max_matching(mono, {0})) == 2
    assert len(max_matching(mono, set())) == 0


def test_max_matching_matches_brute_force():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(3, 9)
        r = rng.choice([2, 3])
        t = rng.randint(1, 3)
        c = random_coloring(rng, n, r, t)
        allowed = {x for x in range(t) if rng.random() < 0.6}
        restrict = None
        if rng.random() < 0.3:
            restrict = sorted(rng.sample(range(n), rng.randint(r, n)))
        got = max_matching(c, allowed, None if restrict is None else VertexSet.of(restrict, n))
        want = oracles.brute_max_matching(c.colors, n, r, allowed, restrict)
        assert got.edges == want
        check_matching(c, got)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(6, 9))
def test_returned_matchings_validate(seed, n):
    rng = random.Random(seed)
    c = random_coloring(rng, n, 3, 3)
    for s in (1, 2, 3):
        m = find_s_colored_matching(c, s, 1)
        assert m is not None
        check_matching(c, m, max_colors=s)


def test_s_equals_t_is_plain_maximum():
    rng = random.Random(5)
    for n in range(6, 13):
        c = random_coloring(rng, n, 3, 3)
        m = find_s_colored_matching(c, 3, n // 3)
        assert m is not None and len(m) == n // 3
        assert find_s_colored_matching(c, 3, n // 3 + 1) is None


def test_mono_coloring_s1():
    c = Coloring.constant(12, 3, 3, color=2)
    m = find_s_colored_matching(c, 1, 4)
    assert m is not None and m.colorset == {2}


def test_s_colored_agrees_with_brute_force():
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(4, 7)
        c = random_coloring(rng, n, 2, 3)
        for s in (1, 2):
            for k in (1, 2, 3):
                got = find_s_colored_matching(c, s, k) is not None
                assert got == oracles.brute_has_s_colored(c.colors, n, 2, s, k)


def test_mono_and_s1_agree():
    rng = random.Random(11)
    for _ in range(500):
        n = rng.randint(5, 9)
        r = rng.choice([2, 3])
        t = rng.randint(2, 3)
        k = rng.randint(1, 3)
        c = random_coloring(rng, n, r, t)
        mono = find_mono_matching(c, k)
        s1 = find_s_colored_matching(c, 1, k)
        assert (mono is None) == (s1 is None)
        if mono is not None:
            color, m = mono
            check_matching(c, m, size=k, max_colors=1)
            assert m.colorset == {color}


def test_mono_matching_guarantees():
    rng = random.Random(3)
    for _ in range(50):
        assert find_mono_matching(random_coloring(rng, 7, 3, 2), 2) is not None
        assert find_mono_matching(random_coloring(rng, 16, 3, 3), 3) is not None


def test_mono_matching_small_region():
    c = Coloring.constant(9, 3, 2)
    assert find_mono_matching(c, 2, VertexSet.of([0, 1, 2], 9)) is None
    assert find_mono_matching(c, 1, VertexSet.of([0, 1, 2], 9)) == (0, make_matching(c, [0]))


def test_mono_matching_least_color_then_lex_least():
    # color 0 has no 2-matching; color 1 does
    c = Coloring.from_function(7, 3, 2, lambda e: 0 if 0 in e else 1)
    color, m = find_mono_matching(c, 2)
    assert color == 1
    brute = oracles.brute_max_matching(c.colors, 7, 3, {1})
    assert m.edges == brute


@pytest.mark.parametrize("n, r, expected", [(6, 3, 10), (12, 3, 15400), (3, 3, 1), (4, 2, 3), (8, 2, 105)])
def test_perfect_matching_counts(n, r, expected):
    pms = list(enumerate_perfect_matchings(n, r))
    assert len(pms) == expected == perfect_matching_count(n, r)
    assert expected == factorial(n) // (factorial(r) ** (n // r) * factorial(n // r))
    assert len(set(pms)) == expected
    for pm in pms:
        covered = sorted(v for e in pm for v in unrank_edge(e, n, r))
        assert covered == list(range(n))
        assert list(pm) == sorted(pm)


def test_perfect_matchings_match_set_partitions():
    want = oracles.set_partitions(tuple(range(9)), 3)
    got = {
        frozenset(frozenset(unrank_edge(e, 9, 3)) for e in pm)
        for pm in enumerate_perfect_matchings(9, 3)
    }
    assert got == want


def test_perfect_matching_order_is_canonical():
    pms = list(enumerate_perfect_matchings(6, 3))
    firsts = [sorted(unrank_edge(e, 6, 3) for e in pm)[0] for pm in pms]
    assert firsts == sorted(firsts)
    assert all(0 in f for f in firsts)


def test_perfect_matchings_reject_indivisible():
    with pytest.raises(InputError):
        list(enumerate_perfect_matchings(7, 3))


@pytest.mark.parametrize(
    "t, k, r, expected", [(3, 3, 3, 13), (2, 2, 3, 7), (3, 4, 3, 18), (2, 2, 2, 5)]
)
def test_afl_bound(t, k, r, expected):
    assert afl_bound(BoundParams(t, 1, k, r)) == expected


@pytest.mark.parametrize("k, expected", [(4, 12), (5, 16), (6, 19)])
def test_conjecture_bound_instances(k, expected):
    assert conjecture_bound(BoundParams(3, 2, k, 3)) == expected


@given(st.integers(1, 10), st.integers(1, 10), st.integers(1, 20), st.integers(2, 6))
def test_bound_identities(t, s, k, r):
    if s > t:
        s, t = t, s
    assert conjecture_bound(BoundParams(t, t, k, r)) == k * r
    assert afl_bound(BoundParams(1, 1, k, r)) == k * r
    assert conjecture_bound(BoundParams(t, 1, k, r)) == afl_bound(BoundParams(t, 1, k, r))
    assert conjecture_bound(BoundParams(t, s, k, r)) >= k * r


@pytest.mark.parametrize("args", [(3, 4, 2, 3), (3, 0, 2, 3), (3, 2, 0, 3), (3, 2, 2, 1)])
def test_bound_params_validate(args):
    with pytest.raises(InputError):
        BoundParams(*args)


def test_check_matching_rejects_defects():
    c = Coloring.from_function(6, 3, 2, lambda e: int(0 in e))
    good = make_matching(c, [0, 19])
    check_matching(c, good, size=2, max_colors=2)
    with pytest.raises(WitnessError):
        check_matching(c, Matching((0, 1), frozenset({1})))  # overlapping
    with pytest.raises(WitnessError):
        check_matching(c, Matching(good.edges, frozenset({0})))  # wrong colorset
    with pytest.raises(WitnessError):
        check_matching(c, good, max_colors=1)
    with pytest.raises(WitnessError):
        check_matching(c, good, size=3)


def test_witness_block_format():
    c = Coloring.constant(12, 3, 3, color=1)
    m = max_matching(c, {1})
    text = format_matching(m, 12, 3)
    assert text == "MATCHING size=4 colors=1\n0 1 2\n3 4 5\n6 7 8\n9 10 11\n"
    assert parse_matching(text, c) == m


def test_witness_lines_sorted_numerically():
    c = Coloring.constant(12, 3, 3)
    edges = [(2, 3, 4), (10, 11, 9)]
    from hypermatch.combinatorics import rank_edge

    m = make_matching(c, [rank_edge(sorted(e), 12, 3) for e in edges])
    lines = format_matching(m, 12, 3).splitlines()[1:]
    assert lines == ["2 3 4", "9 10 11"]
