from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from ncdt import partition as P
from ncdt.crystal import TypeData, z_crystal
from ncdt.quiver import (
    STAR,
    base_quiver,
    behrend_signs,
    hat_quiver,
    hexagon_set,
    peaks_valleys,
    sign_substitution,
)
from ncdt.roots import SigmaMap, ThetaMap, theta_from_walls
from ncdt.series import LaurentSeries

CONIFOLD = SigmaMap.parse("+-")


def test_base_quiver_examples():
    assert len(base_quiver(CONIFOLD).arrows) == 4
    assert not any(a.source == a.target for a in base_quiver(CONIFOLD).arrows)
    pp = base_quiver(SigmaMap.parse("++"))
    assert len(pp.arrows) == 6 and pp.count(0, 0) == 1 and pp.count(1, 1) == 1
    c3 = base_quiver(SigmaMap.parse("+"))
    assert len(c3.arrows) == 3 and c3.count(0, 0) == 3


def test_arrow_count_for_every_sign_map():
    for L in range(1, 7):
        for signs in itertools.product("+-", repeat=L):
            s = SigmaMap.parse("".join(signs))
            assert len(base_quiver(s).arrows) == 2 * L + len(hexagon_set(s))


def test_peaks_valleys_examples():
    for L in (1, 2, 3):
        assert peaks_valleys(ThetaMap.identity(L), ((),) * L) == ([0], [])
    assert peaks_valleys(ThetaMap.identity(2), ((), (1,))) == ([-1, 2], [1])


lam_st = st.integers(1, 3).flatmap(
    lambda L: st.tuples(
        st.just(L),
        st.lists(st.integers(0, L - 1), max_size=4),
        st.lists(
            st.integers(0, 4).flatmap(lambda n: st.sampled_from(list(P.partitions_of(n)))),
            min_size=L,
            max_size=L,
        ).filter(lambda ls: sum(map(P.size, ls)) <= 4),
    )
)


@given(lam_st)
@settings(max_examples=80, deadline=None)
def test_peaks_and_valleys_alternate(data):
    L, walls, lam = data
    valleys, peaks = peaks_valleys(theta_from_walls(walls, L), lam)
    assert len(valleys) == len(peaks) + 1
    merged = sorted([(v, 0) for v in valleys] + [(p, 1) for p in peaks])
    assert [k for _, k in merged] == [i % 2 for i in range(len(merged))]


def test_hat_quiver_examples():
    empty = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), ()))
    framed = [a for a in empty.arrows if STAR in (a.source, a.target)]
    assert [(a.source, a.target, a.label) for a in framed] == [(STAR, 0, "iota_1/2")]
    assert empty.potential_terms == []

    q = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), (1,)))
    into = sorted(a.target for a in q.arrows if a.source == STAR)
    out = [a.source for a in q.arrows if a.target == STAR]
    assert into == [0, 1] and out == [1]
    assert len(q.potential_terms) == 2
    assert sorted(t.sign for t in q.potential_terms) == [-1, 1]


@given(lam_st)
@settings(max_examples=40, deadline=None)
def test_hat_quiver_arrow_count(data):
    L, walls, lam = data
    sigma = SigmaMap(tuple(1 if k % 2 == 0 else -1 for k in range(L)))
    theta = theta_from_walls(walls, L)
    base = base_quiver(sigma)
    _, peaks = peaks_valleys(theta, lam)
    K = len(peaks)
    q = hat_quiver(sigma, theta, lam)
    assert len(q.arrows) == len(base.arrows) + 2 * K + 1
    assert len(q.potential_terms) == 2 * K


def test_behrend_sign_examples():
    q = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), (1,)))
    assert behrend_signs(q, 2) == (-1, 1)
    q = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), ()))
    assert behrend_signs(q, 2) == (-1, 1)
    pp = SigmaMap.parse("++")
    assert behrend_signs(hat_quiver(pp, ThetaMap.identity(2), ((), ())), 2) == (1, -1)


def test_sign_substitution_is_an_involution():
    q = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), (1,)))
    z = z_crystal(TypeData.make("+-", lam=[(), (1,)]), 5)
    once = sign_substitution(z, q)
    assert once != z
    assert sign_substitution(once, q) == z


mono = st.tuples(st.integers(0, 4), st.integers(0, 4)).map(lambda t: (2 * t[0], 2 * t[1]))


@given(mono, mono)
def test_sign_substitution_is_multiplicative(a, b):
    q = hat_quiver(CONIFOLD, ThetaMap.identity(2), ((), (1,)))

    def sign(e):
        s = LaurentSeries.build({e: 1}, (1, 1), None)
        return sign_substitution(s, q).coeff(e)

    ab = tuple(x + y for x, y in zip(a, b))
    assert sign(ab) == sign(a) * sign(b)
