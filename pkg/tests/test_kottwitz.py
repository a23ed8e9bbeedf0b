import math
from fractions import Fraction

import pytest

from tropbuild.kottwitz import (
    HodgeDatum,
    LeviDatum,
    NewtonPoint,
    enumerate_kottwitz,
    enumerate_sr,
    hasse_edges,
    hodge_polygon,
    is_basic,
    is_hn_decomposable,
    is_strongly_regular,
    kottwitz_to_json,
    leq,
    levi_pushforward,
    stratum_dim,
)

F = Fraction


def oracle_enumerate(n, d):
    """Independent enumeration: compositions (n_i, e_i) with strictly
    decreasing ratios e_i/n_i, 0 <= e_i <= n_i, summing to (n, d)."""
    out = set()

    def go(rem_n, rem_d, last, acc):
        if rem_n == 0:
            if rem_d == 0:
                slopes = []
                for ni, ei in acc:
                    slopes += [F(ei, ni)] * ni
                out.add(tuple(slopes))
            return
        for ni in range(1, rem_n + 1):
            for ei in range(0, min(ni, rem_d) + 1):
                r = F(ei, ni)
                if last is not None and r >= last:
                    continue
                go(rem_n - ni, rem_d - ei, r, acc + [(ni, ei)])

    go(n, d, None, [])
    return sorted(out)


def test_hodge_polygon_is_weight_vector():
    assert hodge_polygon(HodgeDatum(2, 1)).slopes == (1, 0)
    assert hodge_polygon(HodgeDatum(5, 2)).slopes == (1, 1, 0, 0, 0)
    assert hodge_polygon(HodgeDatum(7, 3)).slopes == (1, 1, 1, 0, 0, 0, 0)


def test_newton_point_validation():
    NewtonPoint([F(1, 2), F(1, 2)])
    with pytest.raises(ValueError):
        NewtonPoint([F(1, 2), F(1)])  # increasing
    with pytest.raises(ValueError):
        NewtonPoint([F(1, 2), F(1, 3), F(1, 3)])  # breakpoint at 1/2
    with pytest.raises(ValueError):
        NewtonPoint([F(1, 2), F(1, 4)])  # non-integral total


def test_leq_basic_cases():
    assert leq(NewtonPoint([F(1, 2), F(1, 2)]), NewtonPoint([1, 0]))
    assert leq(NewtonPoint([1, 0]), NewtonPoint([1, 0]))
    assert not leq(NewtonPoint([1, 0]), NewtonPoint([F(1, 2), F(1, 2)]))
    with pytest.raises(ValueError):
        leq(NewtonPoint([1, 0]), NewtonPoint([1, 0, 0]))
    with pytest.raises(ValueError):
        leq(NewtonPoint([1, 1, 0]), NewtonPoint([1, 0, 0]))


@pytest.mark.parametrize("n,d,size", [(2, 1, 2), (3, 1, 3), (5, 2, 8)])
def test_enumerate_kottwitz_counts(n, d, size):
    got = enumerate_kottwitz(HodgeDatum(n, d))
    assert len(got) == size
    assert [v.slopes for v in got] == oracle_enumerate(n, d)


def test_enumerate_kottwitz_examples():
    got = enumerate_kottwitz(HodgeDatum(3, 1))
    assert {v.slopes for v in got} == {
        (F(1), F(0), F(0)),
        (F(1, 2), F(1, 2), F(0)),
        (F(1, 3), F(1, 3), F(1, 3)),
    }
    five_two = {v.slopes for v in enumerate_kottwitz(HodgeDatum(5, 2))}
    assert (F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3)) in five_two


@pytest.mark.parametrize("n", range(2, 8))
def test_enumeration_matches_oracle(n):
    for d in range(1, n):
        h = HodgeDatum(n, d)
        assert [v.slopes for v in enumerate_kottwitz(h)] == oracle_enumerate(n, d)


def test_extremes_and_uniqueness():
    for n, d in [(4, 2), (5, 2), (6, 4), (7, 3)]:
        h = HodgeDatum(n, d)
        K = enumerate_kottwitz(h)
        top = hodge_polygon(h)
        bottom = NewtonPoint([F(d, n)] * n)
        assert top in K and bottom in K
        assert all(leq(v, top) and leq(bottom, v) for v in K)
        assert sum(1 for v in K if v.is_basic()) == 1


def test_is_basic():
    assert is_basic(NewtonPoint([F(1, 2), F(1, 2)]))
    assert not is_basic(NewtonPoint([1, 0]))
    assert is_basic(NewtonPoint([F(2, 5)] * 5))


def test_is_hn_decomposable():
    h = HodgeDatum(5, 2)
    assert is_hn_decomposable(NewtonPoint([1, F(1, 2), F(1, 2), 0, 0]), h)
    assert not is_hn_decomposable(NewtonPoint([F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3)]), h)
    assert not is_hn_decomposable(NewtonPoint([F(2, 5)] * 5), h)
    with pytest.raises(ValueError):
        is_hn_decomposable(NewtonPoint([1, 1, 0]), h)


def test_is_strongly_regular():
    h = HodgeDatum(5, 2)
    assert is_strongly_regular(NewtonPoint([1, F(1, 3), F(1, 3), F(1, 3), 0]), h)
    assert not is_strongly_regular(NewtonPoint([F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3)]), h)


def test_polygon_with_given_vertices():
    # vertices (0,0),(1,1),(3,2),(6,3),(7,3) against (n,d) = (7,3)
    v = NewtonPoint([1, F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3), 0])
    assert v.vertices() == ((0, 0), (1, 1), (3, 2), (6, 3), (7, 3))
    h = HodgeDatum(7, 3)
    assert is_hn_decomposable(v, h)
    assert not is_strongly_regular(v, h)


def test_enumerate_sr_counts():
    assert len(enumerate_sr(HodgeDatum(5, 2))) == 7
    assert len(enumerate_sr(HodgeDatum(2, 1))) == 2
    h42 = HodgeDatum(4, 2)
    assert enumerate_sr(h42) == enumerate_kottwitz(h42)


def test_sr_count_formula_coprime():
    for n in range(2, 10):
        for d in range(1, n):
            if math.gcd(n, d) == 1:
                assert len(enumerate_sr(HodgeDatum(n, d))) == d * (n - d) + 1


def test_fully_decomposable_degenerate_cases():
    for n in range(2, 8):
        for d in range(1, n):
            if d in (1, n - 1) or n <= 4:
                h = HodgeDatum(n, d)
                assert enumerate_sr(h) == enumerate_kottwitz(h)


def test_sr_implies_hn_or_basic():
    for n in range(2, 9):
        for d in range(1, n):
            h = HodgeDatum(n, d)
            for v in enumerate_kottwitz(h):
                if is_strongly_regular(v, h):
                    assert v.is_basic() or is_hn_decomposable(v, h)


def test_levi_pushforward_examples():
    assert levi_pushforward(LeviDatum((2, 3), (2, 0))).slopes == (1, 1, 0, 0, 0)
    assert levi_pushforward(LeviDatum((1, 4), (1, 1))).slopes == (1, F(1, 4), F(1, 4), F(1, 4), F(1, 4))
    assert levi_pushforward(LeviDatum((2, 3), (1, 1))).slopes == (
        F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3))
    with pytest.raises(ValueError):
        LeviDatum((2, 3), (3, 0))


def test_levi_pushforward_lands_in_kottwitz_set():
    h = HodgeDatum(5, 2)
    K = set(enumerate_kottwitz(h))
    for comp, dist in [((2, 3), (2, 0)), ((1, 4), (1, 1)), ((2, 3), (1, 1)), ((1, 2, 2), (1, 1, 0))]:
        assert levi_pushforward(LeviDatum(comp, dist)) in K


def test_greedy_pushforwards_are_strongly_regular():
    # all blocks full or empty except at most one
    cases = [
        ((1, 4), (1, 1), 5, 2),
        ((2, 3), (2, 0), 5, 2),
        ((1, 2, 2), (1, 1, 0), 5, 2),
        ((1, 3, 3), (1, 2, 0), 7, 3),
        ((3, 4), (3, 1), 7, 4),
    ]
    for comp, dist, n, d in cases:
        full_or_empty = sum(1 for c, e in zip(comp, dist) if e not in (0, c))
        assert full_or_empty <= 1
        v = levi_pushforward(LeviDatum(comp, dist))
        assert is_strongly_regular(v, HodgeDatum(n, d))


def test_every_sr_element_is_a_pushforward():
    for n in range(2, 9):
        for d in range(1, n):
            h = HodgeDatum(n, d)
            realized = set()

            def comps(rem_n, rem_d, acc):
                if rem_n == 0:
                    if rem_d == 0:
                        try:
                            realized.add(levi_pushforward(LeviDatum(tuple(c for c, _ in acc),
                                                                    tuple(e for _, e in acc))))
                        except AssertionError:
                            pass
                    return
                for ni in range(1, rem_n + 1):
                    for ei in range(0, min(ni, rem_d) + 1):
                        comps(rem_n - ni, rem_d - ei, acc + [(ni, ei)])

            comps(n, d, [])
            for v in enumerate_sr(h):
                assert v in realized


def test_pushforward_regression_nonpolygonal():
    # the (2,3)/(1,1) pushforward exists as a Levi-basic image but fails the
    # turning-point criterion; the SR count formula counts the latter.
    h = HodgeDatum(5, 2)
    v = levi_pushforward(LeviDatum((2, 3), (1, 1)))
    assert v in set(enumerate_kottwitz(h))
    assert not is_strongly_regular(v, h)
    assert not is_hn_decomposable(v, h)
    assert len(enumerate_sr(h)) == 2 * 3 + 1


def test_stratum_dim_examples():
    h = HodgeDatum(5, 2)
    assert stratum_dim(NewtonPoint([F(2, 5)] * 5), h) == 6
    assert stratum_dim(NewtonPoint([1, 1, 0, 0, 0]), h) == 0
    mid = stratum_dim(NewtonPoint([1, F(1, 2), F(1, 2), 0, 0]), h)
    assert 0 < mid < 6
    # frozen values for the whole (5,2) poset, lexicographic order
    assert [stratum_dim(v, h) for v in enumerate_kottwitz(h)] == [6, 5, 4, 2, 3, 2, 1, 0]


def test_stratum_dim_basic_formula():
    for n in range(2, 10):
        for d in range(1, n):
            h = HodgeDatum(n, d)
            assert stratum_dim(NewtonPoint([F(d, n)] * n), h) == d * (n - d)
            assert stratum_dim(hodge_polygon(h), h) == 0


def test_hasse_edges():
    h21 = HodgeDatum(2, 1)
    e = hasse_edges(enumerate_kottwitz(h21))
    assert e == [(NewtonPoint([F(1, 2), F(1, 2)]), NewtonPoint([1, 0]))]
    e31 = hasse_edges(enumerate_kottwitz(HodgeDatum(3, 1)))
    assert len(e31) == 2  # a chain of length 2
    h52 = HodgeDatum(5, 2)
    K = enumerate_kottwitz(h52)
    e52 = hasse_edges(K)
    top = hodge_polygon(h52)
    for v in K:
        if v != top:
            assert any(a == v for a, _ in e52)


def test_stratum_dim_decreases_along_hasse():
    for n in range(2, 10):
        for d in range(1, n):
            h = HodgeDatum(n, d)
            for a, b in hasse_edges(enumerate_kottwitz(h)):
                assert stratum_dim(a, h) > stratum_dim(b, h)


def test_json_roundtrip():
    v = NewtonPoint([F(1, 2), F(1, 2), F(1, 3), F(1, 3), F(1, 3)])
    assert NewtonPoint.from_json(v.to_json()) == v
    h = HodgeDatum(3, 1)
    K = enumerate_kottwitz(h)
    doc = kottwitz_to_json(K, h, hasse_edges(K))
    import json

    parsed = json.loads(doc)
    assert len(parsed["points"]) == 3
    assert parsed["hasse_edges"] == [[0, 1], [1, 2]]
