"""Topological vertex side: fixed-point data, weights and the (beta, n) grading.

A fixed point is an edge tuple ``(nu^(1), ..., nu^(L-1))`` together with
one legged 3D partition per vertex ``j = 1/2, ..., L-1/2``.  Weights live in
``(q_1, ..., q_{L-1}, t)``; the exponent vector is stored as ``(n, beta_1,
..., beta_{L-1})`` with ``n`` the power of ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from . import partition as P
from .partition import HALF, LeggedSolid, YoungDiagram
from .roots import SigmaMap
from .series import LaurentSeries, TruncationSpec

ExpVec = tuple[int, ...]


@dataclass(frozen=True)
class DTClass:
    beta: tuple[int, ...]
    n: int


def psi(v: Sequence[int]) -> DTClass:
    """Colour vector to curve class and Euler characteristic.

    ``[S_i] -> [C_i]`` for ``i != 0`` and ``delta -> 1``, so
    ``n = v_0`` and ``beta_i = v_i - v_0``.
    """
    v = tuple(v)
    return DTClass(tuple(x - v[0] for x in v[1:]), v[0])


def psi_inv(c: DTClass) -> tuple[int, ...]:
    return (c.n,) + tuple(b + c.n for b in c.beta)


def tv_names(L: int) -> tuple[str, ...]:
    return ("t",) + tuple(f"q{k}" for k in range(1, L))


def regrade(s: LaurentSeries) -> LaurentSeries:
    """``q_0..q_{L-1}`` series to ``(t, q_1..q_{L-1})`` with ``t = q_0 ... q_{L-1}``.

    Exponents stay doubled; the grading is the power of ``t``.
    """
    L = s.nvars

    def f(e: ExpVec) -> ExpVec:
        c = psi(e)
        return (c.n,) + c.beta

    w = (1,) + (0,) * (L - 1)
    prec = s.prec if s.weights == w else None
    return s.map_exponents(f, w, prec, tv_names(L))


def unregrade(s: LaurentSeries) -> LaurentSeries:
    L = s.nvars

    def f(e: ExpVec) -> ExpVec:
        return psi_inv(DTClass(tuple(e[1:]), e[0]))

    w = (1,) + (0,) * (L - 1)
    prec = s.prec if s.weights == w else None
    return s.map_exponents(f, w, prec, tuple(f"q{k}" for k in range(L)))


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------


def vertex_legs(
    sigma: SigmaMap,
    j: int,
    edges: Sequence[YoungDiagram],
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
) -> tuple[YoungDiagram, YoungDiagram, YoungDiagram]:
    """Legs of the vertex with index ``j`` (``0..L-1`` for ``j + 1/2``)."""
    full = [P.young(nu_minus)] + [P.young(e) for e in edges] + [P.young(nu_plus)]
    left, right = full[j], full[j + 1]
    if sigma(j + HALF) > 0:
        return (lam[j], right, P.transpose(left))
    return (lam[j], P.transpose(left), right)


@dataclass(frozen=True)
class FixedPointData:
    edges: tuple[YoungDiagram, ...]
    vertices: tuple[LeggedSolid, ...]


def legs_match(fp: FixedPointData, sigma: SigmaMap, nu_plus, nu_minus, lam) -> bool:
    L = sigma.L
    if len(fp.edges) != L - 1 or len(fp.vertices) != L:
        return False
    for j, solid in enumerate(fp.vertices):
        if tuple(solid.legs) != vertex_legs(sigma, j, fp.edges, nu_plus, nu_minus, lam):
            return False
    return True


def edge_box_t(sigma: SigmaMap, i: int, x: int, y: int) -> int:
    """Power of ``t`` carried by the 0-based box ``(x, y)`` of edge ``i``.

    ``x`` is the row and ``y`` the column of the edge diagram.  With the
    column reading the same-sign edges disagree with the vertex-operator
    form as soon as a leg is present; the mixed rule is symmetric.
    """
    a, b = sigma(i + HALF), sigma(i - HALF)
    if a > 0 and b > 0:
        return 2 * x + 1
    if a < 0 and b < 0:
        return 2 * y + 1
    return x + y + 1


def edge_weight(sigma: SigmaMap, i: int, mu: YoungDiagram) -> int:
    # P.boxes lists (column, row)
    return sum(edge_box_t(sigma, i, row, col) for col, row in P.boxes(mu))


def weight(fp: FixedPointData, sigma: SigmaMap, nu_plus=(), nu_minus=(), lam=None) -> ExpVec:
    """``(n, beta_1, ..., beta_{L-1})`` of a fixed point.

    Vertices count their renormalized volume: where legs meet, the overlap
    of the leg cylinders is subtracted.  Without that correction the
    generating function would not match the vertex-operator bra-ket once an
    outer leg ``nu_+-`` or a ``lambda`` leg touches an edge leg.  The
    overlap of the fixed point with empty edges is added back, so that
    point has weight ``1``.
    """
    L = sigma.L
    lam = tuple(lam) if lam is not None else ((),) * L
    if not legs_match(fp, sigma, nu_plus, nu_minus, lam):
        raise ValueError("vertex legs do not match the edge data")
    n = 0
    beta = [0] * (L - 1)
    for i, mu in enumerate(fp.edges, start=1):
        beta[i - 1] += P.size(mu)
        n += edge_weight(sigma, i, mu)
    n += sum(s.renormalized_volume for s in fp.vertices)
    n += _overlap_floor(sigma, nu_plus, nu_minus, lam)
    return (n,) + tuple(beta)


def _overlap_floor(sigma: SigmaMap, nu_plus, nu_minus, lam) -> int:
    L = sigma.L
    empty = ((),) * (L - 1)
    return sum(P.leg_overlap(vertex_legs(sigma, j, empty, nu_plus, nu_minus, lam)) for j in range(L))


def default_beta_cap(N: int, nu_plus: YoungDiagram = (), nu_minus: YoungDiagram = (), lam=None) -> int:
    """Cap on each ``beta_i`` used when none is given: the ``t``-order itself.

    Without legs every edge box costs at least ``t``, so this cap loses
    nothing; with legs it is a choice of window shared by all methods.
    """
    return N


def _edge_tuples(sigma: SigmaMap, beta_cap: int) -> Iterator[tuple[YoungDiagram, ...]]:
    L = sigma.L
    choices = P.partitions_upto(beta_cap)
    stack: list[tuple[YoungDiagram, ...]] = [()]
    while stack:
        acc = stack.pop()
        if len(acc) == L - 1:
            yield acc
            continue
        for mu in choices:
            stack.append(acc + (mu,))


def _tv_box(N: int, beta_cap: int, L: int):
    """Predicate for the window ``n <= N`` and ``beta_i <= beta_cap`` (plain exponents)."""

    def keep(n: int, beta: Sequence[int]) -> bool:
        return n <= N and all(b <= beta_cap for b in beta)

    return keep


def z_tv_bruteforce(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram] | None,
    N: int,
    beta_cap: int | None = None,
) -> LaurentSeries:
    """Sum of fixed-point weights over the window ``n <= N``, ``beta_i <= beta_cap``.

    With outer legs some edges have non-positive net ``t``-cost, so a fixed
    ``t``-degree can hold infinitely many classes ``beta``; the cap on
    ``beta`` keeps every window finite.  Edges are enumerated first; for each
    edge tuple the vertices contribute a convolution of legged-partition
    counts shifted by the leg overlaps.  The result is in ``(t, q_1, ...)``
    with doubled exponents and ``t``-grading.
    """
    L = sigma.L
    lam = tuple(P.young(m) for m in lam) if lam is not None else ((),) * L
    B = default_beta_cap(N, nu_plus, nu_minus, lam) if beta_cap is None else beta_cap
    # the fixed point with empty edges is the reference point of weight 1
    floor = _overlap_floor(sigma, nu_plus, nu_minus, lam)
    acc: dict[ExpVec, int] = {}
    cache: dict[tuple, list[int]] = {}
    for edges in _edge_tuples(sigma, B):
        used = sum(edge_weight(sigma, i, mu) for i, mu in enumerate(edges, start=1))
        all_legs = [vertex_legs(sigma, j, edges, nu_plus, nu_minus, lam) for j in range(L)]
        base = used - sum(P.leg_overlap(legs) for legs in all_legs) + floor
        room = N - base
        if room < 0:
            continue
        conv = [1] + [0] * room
        for legs in all_legs:
            key = (legs, room)
            if key not in cache:
                cache[key] = P.count_legged(legs, room)
            counts = cache[key]
            new = [0] * (room + 1)
            for a, ca in enumerate(conv):
                if not ca:
                    continue
                for b in range(room + 1 - a):
                    new[a + b] += ca * counts[b]
            conv = new
        beta = tuple(2 * P.size(mu) for mu in edges)
        for d, c in enumerate(conv):
            if c:
                e = (2 * (base + d),) + beta
                acc[e] = acc.get(e, 0) + c
    spec = TruncationSpec.t_degree(L, N)
    return LaurentSeries.build(acc, spec.weights, spec.prec2, tv_names(L))


def q_to_tv_window(s: LaurentSeries, N: int, beta_cap: int) -> LaurentSeries:
    """Restrict a total-degree ``q``-series to the TV window, in ``(t, q_1, ...)``.

    Every monomial ``t^n q^beta`` with ``n <= N`` and ``beta_i <= beta_cap``
    has ``q``-degree at most ``L N + (L-1) beta_cap``; the input must be
    exact that far.
    """
    L = s.nvars
    need = 2 * (L * N + (L - 1) * beta_cap)
    if s.weights != (1,) * L or (s.prec is not None and s.prec < need):
        raise ValueError("q-series is not exact on the requested TV window")
    return restrict_to_tv_window(s.terms, L, N, beta_cap)


def restrict_to_tv_window(terms, L: int, N: int, beta_cap: int) -> LaurentSeries:
    """Keep the doubled ``q`` exponents inside the TV window and regrade them.

    The caller guarantees the coefficients are exact on the window.
    """
    keep = _tv_box(N, beta_cap, L)
    acc: dict[ExpVec, int] = {}
    for e, c in terms.items():
        if not c:
            continue
        cls = psi(e)
        if cls.n % 2 or any(b % 2 for b in cls.beta):
            raise ArithmeticError("TV series has a half-integer exponent")
        if keep(cls.n // 2, [b // 2 for b in cls.beta]):
            acc[(cls.n,) + cls.beta] = c
    spec = TruncationSpec.t_degree(L, N)
    return LaurentSeries.build(acc, spec.weights, spec.prec2, tv_names(L))


def enumerate_fixed_points(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram] | None,
    N: int,
    beta_cap: int | None = None,
) -> Iterator[FixedPointData]:
    """Every fixed point in the window ``n <= N``, ``beta_i <= beta_cap`` (slow; for tests)."""
    L = sigma.L
    lam = tuple(P.young(m) for m in lam) if lam is not None else ((),) * L
    B = default_beta_cap(N, nu_plus, nu_minus, lam) if beta_cap is None else beta_cap
    floor = _overlap_floor(sigma, nu_plus, nu_minus, lam)
    for edges in _edge_tuples(sigma, B):
        used = sum(edge_weight(sigma, i, mu) for i, mu in enumerate(edges, start=1))
        all_legs = [vertex_legs(sigma, j, edges, nu_plus, nu_minus, lam) for j in range(L)]
        room = N - used + sum(P.leg_overlap(legs) for legs in all_legs) - floor
        if room < 0:
            continue

        def rec(j: int, acc: list[LeggedSolid], budget: int):
            if j == L:
                yield FixedPointData(edges, tuple(acc))
                return
            for s in P.enumerate_legged(all_legs[j], budget):
                acc.append(s)
                yield from rec(j + 1, acc, budget - s.volume)
                acc.pop()

        yield from rec(0, [], room)
