from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdt import partition as P
from ncdt.crystal import TypeData, z_crystal
from ncdt.series import LaurentSeries, macmahon
from ncdt.vertexop import (
    FockVector,
    GammaSpec,
    OperatorWord,
    apply_gamma,
    bra_ket,
    closed_form_ncdt,
    skew_schur,
    z_vertex,
    z_zeta_pos,
)
from oracles import bra_ket_is_skew_schur, commutation_holds

SMALL = P.partitions_upto(4)

NCDT_TYPES = [
    TypeData.make("+"),
    TypeData.make("+-"),
    TypeData.make("+-", [1]),
    TypeData.make("+-", lam=[(), (1,)]),
    TypeData.make("+-", nu=((1,), ())),
    TypeData.make("++", [0], nu=((), (1,))),
    TypeData.make("+-+", [1, 2]),
    TypeData.make("-+-", [0], lam=[(1,), (), ()]),
    TypeData.make("+--", [2, 1], nu=((1,), (1,))),
]


def _poly(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c}


def test_apply_gamma_on_vacuum():
    p = (2,)
    rows = apply_gamma(GammaSpec(1, 1, p), FockVector.basis((), 1, 4))
    assert rows.amps == {P.young((k,)) if k else (): {(-2 * k,): 1} for k in range(5)}
    cols = apply_gamma(GammaSpec(-1, 1, p), FockVector.basis((), 1, 4))
    assert cols.amps == {P.young((1,) * k) if k else (): {(-2 * k,): 1} for k in range(5)}
    for eps in (1, -1):
        out = apply_gamma(GammaSpec(eps, -1, p), FockVector.basis((), 1, 4))
        assert out.amps == {(): {(0,): 1}}
    with pytest.raises(ValueError):
        GammaSpec(0, 1, p)


def test_bra_ket_examples():
    p1, p2 = (2, 0), (0, 2)
    geo = bra_ket(OperatorWord((GammaSpec(1, -1, p1), GammaSpec(1, 1, p2))), 2, 6)
    assert geo == {(2 * k, -2 * k): 1 for k in range(7)}
    mixed = bra_ket(OperatorWord((GammaSpec(-1, -1, p1), GammaSpec(1, 1, p2))), 2, 6)
    assert mixed == {(0, 0): 1, (2, -2): 1}
    assert bra_ket(OperatorWord(()), 2, 3) == {(0, 0): 1}


def test_skew_schur_examples():
    x = [(2, 0), (0, 2)]
    w = (1, 1)
    assert dict(skew_schur((1,), (), x, w).terms) == {(2, 0): 1, (0, 2): 1}
    assert dict(skew_schur((2, 1), (1,), x, w).terms) == {(4, 0): 1, (2, 2): 2, (0, 4): 1}
    for mu in SMALL:
        assert dict(skew_schur(mu, mu, x, w).terms) == {(0, 0): 1}
    assert dict(skew_schur((1,), (2,), x, w).terms) == {}


@pytest.mark.parametrize("eps,iota", list(itertools.product((1, -1), repeat=2)))
def test_bra_ket_is_skew_schur(eps, iota):
    for k in range(1, 5):
        for mu, mup in itertools.product(SMALL, repeat=2):
            assert bra_ket_is_skew_schur(eps, iota, mu, mup, k)


monomial = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda t: (2 * t[0], 2 * t[1]))
pairs = st.tuples(monomial, monomial).filter(lambda t: t[0] != t[1])
signs = st.sampled_from((1, -1))
small_part = st.integers(0, 3).flatmap(lambda n: st.sampled_from(list(P.partitions_of(n))))

J = 8


@given(pairs, signs, signs, small_part, small_part)
@settings(max_examples=200, deadline=None)
def test_commutation_of_opposite_gammas(ps, e1, e2, mu, mup):
    assert commutation_holds(ps[0], ps[1], e1, e2, mu, mup, J)


@given(pairs, signs, signs, st.sampled_from((1, -1)), small_part, small_part)
@settings(max_examples=100, deadline=None)
def test_same_subscript_gammas_commute(ps, e1, e2, iota, mu, mup):
    p1, p2 = ps
    top = max(P.size(mu), P.size(mup))
    a = bra_ket(OperatorWord((GammaSpec(e1, iota, p1), GammaSpec(e2, iota, p2)), bra=mup, ket=mu), 2, top)
    b = bra_ket(OperatorWord((GammaSpec(e2, iota, p2), GammaSpec(e1, iota, p1)), bra=mup, ket=mu), 2, top)
    assert _poly(a) == _poly(b)


@pytest.mark.parametrize("T", NCDT_TYPES, ids=range(len(NCDT_TYPES)))
def test_vertex_matches_crystal(T):
    assert z_vertex(T, 4) == z_crystal(T, 4)


def test_vertex_examples():
    assert dict(z_vertex(TypeData.make("+-"), 2).terms) == {(0, 0): 1, (2, 0): 1, (2, 2): 2}
    for T in NCDT_TYPES:
        assert dict(z_vertex(T, 0).terms) == {(0,) * T.L: 1}


@pytest.mark.parametrize("T", NCDT_TYPES, ids=range(len(NCDT_TYPES)))
def test_closed_form_matches_crystal(T):
    assert closed_form_ncdt(T, 5) == z_crystal(T, 5)


def test_closed_form_c3_is_macmahon():
    z = closed_form_ncdt(TypeData.make("+"), 6)
    assert [z.coeff((2 * k,)) for k in range(7)] == [1, 1, 3, 6, 13, 24, 48]
    assert dict(z.terms) == dict(macmahon(6).terms)


def test_closed_form_conifold_product():
    # pyramid partitions: (1+q0)(1+q0^2 q1)^2 (1+q0 q1^2) below v-degree 4
    rep = closed_form_ncdt(TypeData.make("+-"), 4, report=True)
    got = sorted((f.root, f.exponent) for f in rep.factors)
    assert got == [((1, 0), 1), ((1, 2), 1), ((2, 1), 2)]
    # crossing the wall of alpha_0 removes its factor
    crossed = closed_form_ncdt(TypeData.make("+-", [0]), 4, report=True)
    assert (1, 0) not in {f.root for f in crossed.factors}


def test_z_zeta_pos_examples():
    from ncdt.crystal import q_prefactor
    from ncdt.roots import SigmaMap

    conifold = SigmaMap.parse("+-")
    assert dict(z_zeta_pos(conifold, (), (), [(), ()], 4).terms) == {(0, 0): 1}
    lam = [(), (1,)]
    T = TypeData.make("+-", lam=lam)
    pref = tuple(-2 * x for x in q_prefactor(T))
    assert dict(z_zeta_pos(conifold, (), (), lam, 4).terms) == {pref: 1}
    nonempty = z_zeta_pos(conifold, (1,), (), [(), ()], 4)
    assert len(nonempty.terms) > 1


def test_closed_form_reports_conventions():
    rep = closed_form_ncdt(TypeData.make("+-", lam=[(), (1,)]), 3, report=True)
    assert rep.metadata["counting"] == "pairs"
    assert rep.metadata["skew_assignment"] == "lemma"
    assert isinstance(rep.series, LaurentSeries)
