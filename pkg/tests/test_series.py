from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdt import partition as P
from ncdt.roots import ThetaMap, basis_matrix, theta_from_walls
from ncdt.series import (
    LaurentSeries,
    TruncationSpec,
    binom_pow,
    hook_principal_spec,
    macmahon,
    mul,
    principal_spec,
    recip,
    v_to_q,
)


def t_series(coeffs, D=6):
    spec = TruncationSpec.total_degree(1, D)
    return LaurentSeries.build({(2 * k,): c for k, c in enumerate(coeffs)}, spec.weights, spec.prec2)


def coeff_list(s: LaurentSeries, D: int) -> list[int]:
    return [s.coeff((2 * k,)) for k in range(D + 1)]


def test_mul_examples():
    a = t_series([1, 1], 3)
    b = t_series([1, -1], 3)
    assert coeff_list(mul(a, b), 3) == [1, 0, -1, 0]
    one = LaurentSeries.one(TruncationSpec.total_degree(1, 3))
    assert mul(a, one) == a
    geo = t_series([1] * 7, 6)
    assert coeff_list(mul(geo, t_series([1, -1], 6)), 6) == [1, 0, 0, 0, 0, 0, 0]


def test_recip_examples():
    spec = TruncationSpec.total_degree(2, 4)
    a = LaurentSeries.build({(0, 0): 1, (2, 0): -1}, spec.weights, spec.prec2)
    r = recip(a)
    assert [r.coeff((2 * k, 0)) for k in range(5)] == [1, 1, 1, 1, 1]
    b = LaurentSeries.build({(2, 0): 1, (2, 2): -1}, spec.weights, spec.prec2)
    rb = recip(b)
    assert rb.coeff((-2, 0)) == 1 and rb.coeff((-2, 2)) == 1 and rb.coeff((-2, 4)) == 1
    with pytest.raises(ValueError):
        recip(LaurentSeries.build({(0, 0): 2}, spec.weights, spec.prec2))


def test_binom_pow_examples():
    spec = TruncationSpec.total_degree(2, 6)
    delta = (2, 2)
    assert dict(binom_pow(delta, 1, 1, spec).terms) == {(0, 0): 1, (2, 2): 1}
    geo = binom_pow(delta, -1, -1, spec)
    assert [geo.coeff((2 * k, 2 * k)) for k in range(4)] == [1, 1, 1, 1]
    sq = binom_pow(delta, 1, -2, spec)
    assert [sq.coeff((2 * k, 2 * k)) for k in range(4)] == [1, -2, 3, -4]
    with pytest.raises(ValueError):
        binom_pow((0, 0), 1, 1, spec)


def test_macmahon_examples():
    assert coeff_list(macmahon(5), 5) == [1, 1, 3, 6, 13, 24]
    assert dict(macmahon(0).terms) == {(0,): 1}


def test_macmahon_matches_plane_partition_enumeration():
    assert coeff_list(macmahon(8), 8) == P.count_legged(((), (), ()), 8)


def test_principal_spec_examples():
    spec = TruncationSpec.total_degree(1, 3)
    assert dict(principal_spec((), 3, spec=spec).terms) == {(0,): 1}
    single = principal_spec((1,), 3, spec=spec)
    assert dict(single.terms) == {(1,): 1, (3,): 1, (5,): 1}


def test_principal_spec_two_row_regression():
    # s_(2)(t^1/2, t^3/2, t^5/2, t^7/2) by listing the ten weakly increasing
    # fillings of two boxes, cut at t^2
    spec = TruncationSpec.total_degree(1, 2)
    by_hand: dict[tuple[int], int] = {}
    for a, b in itertools.combinations_with_replacement(range(4), 2):
        e = (2 * a + 1) + (2 * b + 1)
        if e <= 4:
            by_hand[(e,)] = by_hand.get((e,), 0) + 1
    assert dict(principal_spec((2,), 2, spec=spec).terms) == by_hand == {(2,): 1, (4,): 1}


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (3, 1), (2, 2)])
def test_hook_length_identity(lam):
    spec = TruncationSpec.total_degree(1, 8)
    assert principal_spec(lam, 8, spec=spec) == hook_principal_spec(lam, spec)


def test_v_to_q_examples():
    theta = ThetaMap.identity(3)
    basis = basis_matrix(theta)
    s = LaurentSeries.build({(2, 0, 0): 1, (0, 0, 0): 1}, (1, 1, 1), None)
    assert dict(v_to_q(s, basis).terms) == {(2, 0, 0): 1, (0, 0, 0): 1}
    for walls in ([], [1], [1, 2], [0, 2, 1]):
        basis = basis_matrix(theta_from_walls(walls, 3))
        d = LaurentSeries.build({(2, 2, 2): 1}, (1, 1, 1), None)
        assert dict(v_to_q(d, basis).terms) == {(2, 2, 2): 1}


monomials = st.tuples(st.integers(0, 3), st.integers(0, 3)).map(lambda t: (2 * t[0], 2 * t[1]))
small_series = st.dictionaries(monomials, st.integers(-5, 5), max_size=6)


def _mk(terms):
    spec = TruncationSpec.total_degree(2, 5)
    return LaurentSeries.build(terms, spec.weights, spec.prec2)


@given(small_series, small_series, small_series)
@settings(max_examples=200, deadline=None)
def test_ring_axioms(a, b, c):
    a, b, c = _mk(a), _mk(b), _mk(c)
    # compared on the monomials both sides know exactly
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)
    assert (a * b).agrees_with(b * a)


@given(small_series)
@settings(max_examples=100, deadline=None)
def test_recip_is_an_involution_on_units(a):
    terms = {e: c for e, c in a.items() if e != (0, 0)}
    terms[(0, 0)] = 1
    u = _mk(terms)
    assert recip(recip(u)) == u
    prod = u * recip(u)
    assert dict(prod.terms) == {(0, 0): 1}


def test_json_round_trip():
    s = macmahon(4, 2)
    back = LaurentSeries.from_json(s.to_json(), s.weights, s.prec)
    assert back == s
    assert s.to_json()["unit"] == "half"
