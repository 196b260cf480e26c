from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdt.partition import HALF
from ncdt.roots import (
    SigmaMap,
    ThetaMap,
    alpha_simple,
    basis_matrix,
    chamber_point,
    crossed_roots,
    delta,
    inverted_positive_roots,
    ordered_positive_roots,
    pair,
    q_of_h,
    root_interval,
    root_stats,
    theta_from_walls,
    theta_wall,
    v_coords,
)

F = Fraction


def wall_sequences(L: int, max_len: int):
    for k in range(max_len + 1):
        yield from itertools.product(range(L), repeat=k)


halves = st.integers(-12, 12).map(lambda k: k + HALF)
walls_st = st.integers(2, 4).flatmap(
    lambda L: st.tuples(st.just(L), st.lists(st.integers(0, L - 1), max_size=5))
)


def test_root_interval_examples():
    assert root_interval(F(1, 2), F(5, 2), 2).vec == (1, 1)
    assert root_interval(F(3, 2), F(1, 2), 2).vec == (0, -1)
    assert root_interval(F(3, 2), F(3, 2), 2).vec == (0, 0)


@given(halves, halves, halves, st.integers(1, 4))
def test_root_interval_is_additive(a, b, c, L):
    ab, bc, ac = (root_interval(x, y, L).vec for x, y in ((a, b), (b, c), (a, c)))
    assert tuple(x + y for x, y in zip(ab, bc)) == ac


def test_root_stats_examples():
    conifold = SigmaMap.parse("+-")
    assert root_stats(root_interval(F(1, 2), F(7, 2), 2), conifold) == (1, 1, "re+")
    for m in range(1, 5):
        r = root_interval(F(3, 2), F(4 * m + 1, 2), 2)
        assert r.vec == (m, m - 1)
        assert root_stats(r, conifold)[1] == m
    for L in (1, 2, 3):
        for k in range(L):
            h = k + HALF
            r = root_interval(h, h + L, L)
            assert r.vec == delta(L)
            assert root_stats(r, SigmaMap((1,) * L))[2] == "im+"
    with pytest.raises(ValueError):
        root_stats(root_interval(HALF, HALF, 2), conifold)


def test_theta_wall_examples():
    t = theta_wall(ThetaMap.identity(2), 1)
    assert t(F(1, 2)) == F(3, 2) and t(F(3, 2)) == F(1, 2)
    assert t(F(5, 2)) == F(7, 2)
    assert theta_from_walls([], 3) == ThetaMap.identity(3)
    assert theta_from_walls([1, 1], 2) == ThetaMap.identity(2)


@given(walls_st, st.integers(0, 3))
def test_theta_wall_is_an_involution(data, i):
    L, seq = data
    theta = theta_from_walls(seq, L)
    i %= L
    assert theta_wall(theta_wall(theta, i), i) == theta
    assert theta.in_theta_set()
    for k in range(-2 * L, 2 * L):
        h = k + HALF
        assert theta(h + L) == theta(h) + L


def test_alpha_simple_examples():
    for L in (1, 2, 3):
        for i in range(L):
            expected = tuple(1 if k == i else 0 for k in range(L))
            assert alpha_simple(ThetaMap.identity(L), i).vec == expected
    assert alpha_simple(theta_from_walls([1], 2), 1).vec == (0, -1)


@given(walls_st, st.integers(0, 3))
def test_alpha_changes_sign_across_a_wall(data, i):
    L, seq = data
    theta = theta_from_walls(seq, L)
    i %= L
    a = alpha_simple(theta, i).vec
    b = alpha_simple(theta_wall(theta, i), i).vec
    assert a == tuple(-x for x in b)


def test_chamber_point_examples():
    assert chamber_point(ThetaMap.identity(3)) == (-1, -1, -1)


@given(walls_st)
@settings(max_examples=60)
def test_chamber_point_separates_the_basis(data):
    L, seq = data
    theta = theta_from_walls(seq, L)
    zeta = chamber_point(theta)
    assert pair(zeta, delta(L)) == -L
    for i in range(L):
        assert pair(zeta, alpha_simple(theta, i).vec) < 0
    for k in range(L):
        h = k + HALF
        for d in range(1, 3 * L + 1):
            r = root_interval(h, h + d, L)
            inside = theta.inverse(h) < theta.inverse(h + d)
            assert (pair(zeta, r.vec) < 0) == inside


def test_basis_sums_to_delta_and_is_unimodular():
    for L in (1, 2, 3, 4):
        max_len = 6 if L <= 3 else 4
        for seq in wall_sequences(L, max_len):
            rows = basis_matrix(theta_from_walls(seq, L))
            assert tuple(map(sum, zip(*rows))) == delta(L)
            assert round(abs(np.linalg.det(np.array(rows, dtype=float)))) == 1


def test_v_coords_reconstruct_roots():
    for seq in wall_sequences(3, 3):
        theta = theta_from_walls(seq, 3)
        rows = basis_matrix(theta)
        for a in range(-4, 4):
            for b in range(-4, 4):
                h, hp = a + HALF, b + HALF
                v = v_coords(h, hp, theta)
                q = tuple(sum(v[i] * rows[i][k] for i in range(3)) for k in range(3))
                assert q == root_interval(h, hp, 3).vec


def test_ordered_positive_roots_examples():
    conifold = SigmaMap.parse("+-")
    ident = {f.root.vec for f in ordered_positive_roots(ThetaMap.identity(2), 3, conifold)}
    assert ident == {(1, 0), (0, 1), (1, 2), (2, 1)}
    mutated = {f.root.vec for f in ordered_positive_roots(theta_from_walls([1], 2), 3, conifold)}
    assert mutated == ident - {(0, 1)}
    assert ordered_positive_roots(ThetaMap.identity(1), 5, SigmaMap((1,))) == []


def test_inverted_roots_are_the_crossed_walls():
    for L in (2, 3):
        for seq in wall_sequences(L, 4):
            # a root crossed twice is crossed back, so take the symmetric difference
            net: set[tuple[int, ...]] = set()
            for r in crossed_roots(seq, L):
                net ^= {r if sum(r) > 0 else tuple(-x for x in r)}
            assert inverted_positive_roots(theta_from_walls(seq, L)) == net


def test_q_of_h_examples():
    assert q_of_h(F(1, 2), 2) == (0, 0)
    assert q_of_h(F(5, 2), 2) == (1, 1)
    assert q_of_h(F(-1, 2), 2) == (-1, 0)


def test_sign_is_independent_of_representative():
    for sig in ("+-", "++", "+-+", "--+"):
        s = SigmaMap.parse(sig)
        L = s.L
        for k in range(L):
            h = k + HALF
            for d in range(1, 6 * L):
                if d % L == 0:
                    continue
                base = root_stats(root_interval(h, h + d, L), s)[0]
                for m in (-2, -1, 1, 2):
                    shifted = root_stats(root_interval(h + m * L, h + d + m * L, L), s)[0]
                    assert shifted == base
