"""Transitions of Young diagrams, the minimal transition and crystal melting.

A transition is stored on a finite integer window ``[lo, hi]``; outside the
window it equals ``nu_minus`` on the left and ``nu_plus`` on the right.
Constant stretches always satisfy the interlacing rules, so only the window
and its two edges need checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterator, Sequence

from . import partition as P
from .partition import HALF, YoungDiagram
from .roots import (
    SigmaMap,
    ThetaMap,
    q_of_h,
)
from .series import LaurentSeries, TruncationSpec

ExpVec = tuple[int, ...]


@dataclass(frozen=True)
class TypeData:
    """The quadruple ``(sigma, theta, nu, lam)``.

    ``theta.reflected`` selects the PT-side orientation.  ``lam[k]`` is the
    diagram attached to the residue ``k + 1/2``.
    """

    sigma: SigmaMap
    theta: ThetaMap
    nu_plus: YoungDiagram = ()
    nu_minus: YoungDiagram = ()
    lam: tuple[YoungDiagram, ...] = ()

    def __post_init__(self) -> None:
        L = self.sigma.L
        if self.theta.L != L:
            raise ValueError("sigma and theta disagree on L")
        if not self.lam:
            object.__setattr__(self, "lam", ((),) * L)
        if len(self.lam) != L:
            raise ValueError(f"lam needs {L} diagrams, got {len(self.lam)}")
        object.__setattr__(self, "lam", tuple(P.young(m) for m in self.lam))
        object.__setattr__(self, "nu_plus", P.young(self.nu_plus))
        object.__setattr__(self, "nu_minus", P.young(self.nu_minus))
        if self.pt and (self.nu_plus or self.nu_minus):
            raise ValueError("the PT orientation is only defined here for empty nu")

    @classmethod
    def make(
        cls,
        sigma: str | SigmaMap,
        walls: Sequence[int] = (),
        nu: tuple[Sequence[int], Sequence[int]] = ((), ()),
        lam: Sequence[Sequence[int]] | None = None,
        pt: bool = False,
    ) -> "TypeData":
        from .roots import theta_from_walls

        s = SigmaMap.parse(sigma) if isinstance(sigma, str) else sigma
        theta = theta_from_walls(walls, s.L, reflected=pt)
        lam_t = tuple(P.young(m) for m in lam) if lam is not None else ((),) * s.L
        return cls(s, theta, P.young(nu[0]), P.young(nu[1]), lam_t)

    @property
    def L(self) -> int:
        return self.sigma.L

    @property
    def pt(self) -> bool:
        return self.theta.reflected

    def ulam(self, h: Fraction) -> int:
        return P.tuple_maya(self.lam, h)

    def u(self, h: Fraction) -> int:
        """``ulam ∘ theta``."""
        return P.tuple_maya(self.lam, self.theta(h))

    def s(self, h: Fraction) -> int:
        """``sigma ∘ theta``."""
        return self.sigma(self.theta(h))

    def tail_sign(self, h: Fraction) -> int:
        base = 1 if h > 0 else -1
        return -base if self.pt else base

    def with_theta(self, theta: ThetaMap) -> "TypeData":
        return TypeData(self.sigma, theta, self.nu_plus, self.nu_minus, self.lam)

    def describe(self) -> dict:
        return {
            "sigma": str(self.sigma),
            "theta": self.theta.doubled_window(),
            "pt": self.pt,
            "nu_plus": list(self.nu_plus),
            "nu_minus": list(self.nu_minus),
            "lambda": [list(m) for m in self.lam],
        }


@dataclass(frozen=True)
class Transition:
    lo: int
    diagrams: tuple[YoungDiagram, ...]
    nu_minus: YoungDiagram = ()
    nu_plus: YoungDiagram = ()

    @property
    def hi(self) -> int:
        return self.lo + len(self.diagrams) - 1

    def value(self, n: int) -> YoungDiagram:
        if n < self.lo:
            return self.nu_minus
        if n > self.hi:
            return self.nu_plus
        return self.diagrams[n - self.lo]

    def widen(self, lo: int, hi: int) -> "Transition":
        lo, hi = min(lo, self.lo), max(hi, self.hi)
        return Transition(lo, tuple(self.value(n) for n in range(lo, hi + 1)), self.nu_minus, self.nu_plus)

    def replace(self, n: int, mu: YoungDiagram) -> "Transition":
        t = self.widen(n, n)
        d = list(t.diagrams)
        d[n - t.lo] = mu
        return Transition(t.lo, tuple(d), t.nu_minus, t.nu_plus)

    def size_over(self, base: "Transition") -> int:
        lo, hi = min(self.lo, base.lo), max(self.hi, base.hi)
        return sum(P.size(self.value(n)) - P.size(base.value(n)) for n in range(lo, hi + 1))

    def contains(self, base: "Transition") -> bool:
        lo, hi = min(self.lo, base.lo), max(self.hi, base.hi)
        return all(P.contains(self.value(n), base.value(n)) for n in range(lo, hi + 1))

    def to_json(self) -> dict:
        return {"window": [self.lo, self.hi], "diagrams": [list(m) for m in self.diagrams]}


# ---------------------------------------------------------------------------
# local rule
# ---------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def _edge_rule(T: TypeData, h: Fraction) -> tuple[str, bool]:
    """Strip direction at ``h`` and whether the diagram shrinks to the right."""
    return P.strip_direction(T.s(h)), T.u(h) > 0


def edge_ok(T: TypeData, h: Fraction, left: YoungDiagram, right: YoungDiagram) -> bool:
    """Interlacing rule at ``h`` between ``V(h-1/2)=left`` and ``V(h+1/2)=right``."""
    direction, shrinks = _edge_rule(T, h)
    if shrinks:
        return P.interlaces(left, right, direction)
    return P.interlaces(right, left, direction)


def is_transition(V: Transition, T: TypeData) -> bool:
    if V.nu_minus != T.nu_minus or V.nu_plus != T.nu_plus:
        return False
    for n in range(V.lo - 1, V.hi + 1):
        if not edge_ok(T, n + HALF, V.value(n), V.value(n + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# windows and the minimal transition
# ---------------------------------------------------------------------------


def _scan_bound(T: TypeData) -> int:
    L = T.L
    drift = max(abs(T.theta.base(k + HALF) - (k + HALF)) for k in range(L))
    extent = max([len(m) for m in T.lam] + [m[0] if m else 0 for m in T.lam] + [0])
    return int(drift) + L * (extent + 2) + 2


def exceptional_positions(T: TypeData) -> list[Fraction]:
    """Half-integers where ``ulam ∘ theta`` differs from its tail value."""
    B = _scan_bound(T)
    out = []
    for k in range(-B, B):
        h = k + HALF
        if T.u(h) != T.tail_sign(h):
            out.append(h)
    return out


def _sweeps(T: TypeData, a: int, b: int) -> dict[int, YoungDiagram]:
    """Join of the left and right greedy sweeps over ``[a, b]``."""
    left = {a: T.nu_minus}
    for n in range(a, b):
        h = n + HALF
        cur = left[n]
        if T.u(h) > 0:
            cur = P.remove_maximal_strip(cur, P.strip_direction(T.s(h)))
        left[n + 1] = cur
    right = {b: T.nu_plus}
    for n in range(b, a, -1):
        h = n - HALF
        cur = right[n]
        if T.u(h) < 0:
            cur = P.remove_maximal_strip(cur, P.strip_direction(T.s(h)))
        right[n - 1] = cur
    return {n: P.union(left[n], right[n]) for n in range(a, b + 1)}


def core_window(T: TypeData) -> tuple[int, int]:
    """Integer range outside which ``V_min`` is constant and the rule is the tail rule."""
    exc = exceptional_positions(T) + [HALF, -HALF]
    c_lo = int(min(exc) - HALF)
    c_hi = int(max(exc) + HALF)
    pad = max(
        [len(T.nu_plus), len(T.nu_minus)]
        + [T.nu_plus[0] if T.nu_plus else 0, T.nu_minus[0] if T.nu_minus else 0]
    ) + 1
    a, b = c_lo - pad, c_hi + pad
    vm = _sweeps(T, a, b)
    moving = [n for n in range(a, b + 1) if vm[n] != T.nu_minus]
    if moving:
        c_lo = min(c_lo, moving[0] - 1)
    moving = [n for n in range(a, b + 1) if vm[n] != T.nu_plus]
    if moving:
        c_hi = max(c_hi, moving[-1] + 1)
    return c_lo, c_hi


def minimal_transition(T: TypeData, lo: int | None = None, hi: int | None = None) -> Transition:
    """``V_min`` on the core window (or on ``[lo, hi]`` if that is wider)."""
    c_lo, c_hi = core_window(T)
    pad = max(
        [len(T.nu_plus), len(T.nu_minus)]
        + [T.nu_plus[0] if T.nu_plus else 0, T.nu_minus[0] if T.nu_minus else 0]
    ) + 1
    a = min(c_lo, lo if lo is not None else c_lo)
    b = max(c_hi, hi if hi is not None else c_hi)
    vm = _sweeps(T, a - pad, b + pad)
    V = Transition(a, tuple(vm[n] for n in range(a, b + 1)), T.nu_minus, T.nu_plus)
    if vm[a - pad] != T.nu_minus or vm[b + pad] != T.nu_plus:
        raise AssertionError("sweep did not settle on the boundary diagrams")
    if not is_transition(V, T):
        raise AssertionError("join of the greedy sweeps is not a transition")
    return V


def enumeration_window(T: TypeData, N: int, extra: int = 0) -> tuple[int, int]:
    c_lo, c_hi = core_window(T)
    return c_lo - N - extra, c_hi + N + extra


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Crystal:
    transition: Transition
    weight: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.weight)


def crystal_weight(V: Transition, vmin: Transition, L: int) -> tuple[int, ...]:
    w = [0] * L
    lo, hi = min(V.lo, vmin.lo), max(V.hi, vmin.hi)
    for n in range(lo, hi + 1):
        w[n % L] += P.size(V.value(n)) - P.size(vmin.value(n))
    return tuple(w)


def _bfs_levels(T: TypeData, vmin: Transition, N: int) -> list[list[tuple[YoungDiagram, ...]]]:
    lo = vmin.lo
    # rules[k] governs the edge between positions lo + k - 1 and lo + k
    rules = [_edge_rule(T, lo + k - HALF) for k in range(len(vmin.diagrams) + 1)]

    def ok(k: int, left: YoungDiagram, right: YoungDiagram) -> bool:
        direction, shrinks = rules[k]
        return P.interlaces(left, right, direction) if shrinks else P.interlaces(right, left, direction)

    levels = [[vmin.diagrams]]
    for _ in range(N):
        nxt: set[tuple[YoungDiagram, ...]] = set()
        for diag in levels[-1]:
            for k, mu in enumerate(diag):
                left = diag[k - 1] if k > 0 else T.nu_minus
                right = diag[k + 1] if k + 1 < len(diag) else T.nu_plus
                for bigger in P.add_one_box(mu):
                    if ok(k, left, bigger) and ok(k + 1, bigger, right):
                        nxt.add(diag[:k] + (bigger,) + diag[k + 1 :])
        levels.append(sorted(nxt))
    return levels


def _brute_force(T: TypeData, vmin: Transition, N: int) -> list[tuple[YoungDiagram, ...]]:
    base = vmin.diagrams
    options = [P.supersets_within(mu, N) for mu in base]
    out = []

    def rec(k: int, acc: list[YoungDiagram], budget: int) -> None:
        if k == len(base):
            V = Transition(vmin.lo, tuple(acc), T.nu_minus, T.nu_plus)
            if is_transition(V, T):
                out.append(V.diagrams)
            return
        for mu in options[k]:
            cost = P.size(mu) - P.size(base[k])
            if cost <= budget:
                acc.append(mu)
                rec(k + 1, acc, budget - cost)
                acc.pop()

    rec(0, [], N)
    return sorted(out)


def enumerate_crystals(
    T: TypeData, N: int, window_extra: int = 0, method: str = "melt"
) -> Iterator[Crystal]:
    """All crystals with at most ``N`` boxes removed from ``V_min``.

    ``method="melt"`` grows crystals one box at a time from ``V_min``;
    ``method="brute"`` scans every superset tuple of ``V_min`` within budget
    and filters with :func:`is_transition`.  Both emit crystals sorted by size
    and then by diagrams.
    """
    if N < 0:
        raise ValueError("budget must be nonnegative")
    lo, hi = enumeration_window(T, N, window_extra)
    vmin = minimal_transition(T, lo, hi)
    if method == "melt":
        found = [d for level in _bfs_levels(T, vmin, N) for d in level]
    elif method == "brute":
        found = _brute_force(T, vmin, N)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    crystals = []
    for d in found:
        V = Transition(vmin.lo, d, T.nu_minus, T.nu_plus)
        crystals.append(Crystal(V, crystal_weight(V, vmin, T.L)))
    crystals.sort(key=lambda c: (c.size, c.transition.diagrams))
    yield from crystals


def z_crystal(T: TypeData, N: int, window_extra: int = 0, method: str = "melt") -> LaurentSeries:
    """Crystal generating function in the colour variables ``v_0..v_{L-1}``."""
    L = T.L
    acc: dict[ExpVec, int] = {}
    for c in enumerate_crystals(T, N, window_extra, method):
        e = tuple(2 * x for x in c.weight)
        acc[e] = acc.get(e, 0) + 1
    spec = TruncationSpec.v_budget(L, N)
    return LaurentSeries.build(acc, spec.weights, spec.prec2, v_names(L))


def v_names(L: int) -> tuple[str, ...]:
    return tuple(f"v{k}" for k in range(L))


def crystal_counts(T: TypeData, N: int) -> list[int]:
    counts = [0] * (N + 1)
    for c in enumerate_crystals(T, N):
        counts[c.size] += 1
    return counts


# ---------------------------------------------------------------------------
# prefactor
# ---------------------------------------------------------------------------


def q_prefactor(T: TypeData) -> ExpVec:
    """``q(sigma, theta, nu, lam)`` as an integer exponent vector in ``q``.

    Each half-integer ``h`` contributes ``q_{theta(h)}`` raised to
    ``|V_min(h-1/2)| - |V_min(h+1/2)|``.
    """
    vmin = minimal_transition(T)
    L = T.L
    out = [0] * L
    for n in range(vmin.lo - 1, vmin.hi + 1):
        h = n + HALF
        d = P.size(vmin.value(n)) - P.size(vmin.value(n + 1))
        if d:
            qh = q_of_h(T.theta(h), L)
            for k in range(L):
                out[k] += d * qh[k]
    return tuple(out)


# ---------------------------------------------------------------------------
# addable nodes
# ---------------------------------------------------------------------------


def addable_nodes(V: Transition, i: int, T: TypeData) -> list[tuple[int, int, int]]:
    """Nodes ``(n, x, y)`` of colour ``i`` whose addition keeps ``V`` a transition."""
    if not is_transition(V, T):
        raise ValueError("input is not a transition")
    L = T.L
    W = V.widen(V.lo - 1, V.hi + 1)
    out = []
    for n in range(W.lo, W.hi + 1):
        if n % L != i % L:
            continue
        mu = W.value(n)
        for bigger in P.add_one_box(mu):
            if edge_ok(T, n - HALF, W.value(n - 1), bigger) and edge_ok(T, n + HALF, bigger, W.value(n + 1)):
                (cell,) = set(P.boxes(bigger)) - set(P.boxes(mu))
                out.append((n, cell[0], cell[1]))
    return sorted(out)


def addable_saturate(
    V: Transition, i: int, T: TypeData, limit: int = 1000
) -> tuple[list[tuple[int, int, int]], Transition]:
    """Addable ``i``-nodes of ``V`` and the saturation ``V^{[i]}``.

    Nodes are added one at a time until no addable ``i``-node remains.  For
    ``L = 1`` every node has colour ``0`` and saturation never stops, so a
    ``limit`` on the number of added nodes raises ``ValueError``.
    """
    first = addable_nodes(V, i, T)
    cur = V
    added = 0
    while True:
        nodes = addable_nodes(cur, i, T)
        if not nodes:
            return first, cur
        n, x, y = nodes[0]
        mu = cur.value(n)
        rows = list(mu) + [0] * (y + 1 - len(mu))
        rows[y] += 1
        cur = cur.replace(n, P.young(rows))
        added += 1
        if added > limit:
            raise ValueError("saturation did not terminate within the node limit")


# ---------------------------------------------------------------------------
# module action closure
# ---------------------------------------------------------------------------


def _preimages(T: TypeData, n: int, x: int, y: int) -> list[tuple[int, int, int]]:
    """Sources of the arrows that land on the particle ``(n, x, y)``.

    ``h^+`` arrives from ``n-1``, ``h^-`` from ``n+1`` and the loop ``r``
    stays at ``n``.  A shifted arrow moves ``x`` when the relevant sign of
    ``sigma ∘ theta`` is minus and ``y`` when it is plus.
    """

    def step(sign: int) -> tuple[int, int]:
        return (1, 0) if sign < 0 else (0, 1)

    out = []
    h = n - HALF
    if T.u(h) > 0:
        out.append((n - 1, x, y))
    else:
        dx, dy = step(T.s(h))
        out.append((n - 1, x - dx, y - dy))
    h = n + HALF
    if T.u(h) < 0:
        out.append((n + 1, x, y))
    else:
        dx, dy = step(T.s(h))
        out.append((n + 1, x - dx, y - dy))
    sl, sr = T.s(n - HALF), T.s(n + HALF)
    if sl == sr:
        # the loop moves x on a (+,+) pair and y on a (-,-) pair
        dx, dy = step(-sl)
        out.append((n, x - dx, y - dy))
    return [p for p in out if p[1] >= 0 and p[2] >= 0]


# Particle (x, y) sits in the cell with column x and row y when this is False
# and in row x, column y when True.  The value is pinned by the tests that
# compare the closure check with the interlacing rule.
PARTICLE_TRANSPOSE = False


def _occupied(mu: YoungDiagram, x: int, y: int, transpose: bool) -> bool:
    return P.has_box(mu, y, x) if transpose else P.has_box(mu, x, y)


def melting_closure_check(V: Transition, T: TypeData, transpose: bool | None = None) -> bool:
    """Whether ``P(V)`` is closed under the arrows of the module action.

    A removed particle (a cell of ``V(n)`` outside ``V_min(n)``) must not be
    the image of any particle that is still present.
    """
    if transpose is None:
        transpose = PARTICLE_TRANSPOSE
    vmin = minimal_transition(T, V.lo, V.hi)
    for n in range(min(V.lo, vmin.lo), max(V.hi, vmin.hi) + 1):
        mu, base = V.value(n), vmin.value(n)
        if not P.contains(mu, base):
            return False
        for cx, cy in P.boxes(mu):
            if P.has_box(base, cx, cy):
                continue
            x, y = (cy, cx) if transpose else (cx, cy)
            for m, a, b in _preimages(T, n, x, y):
                if not _occupied(V.value(m), a, b, transpose):
                    return False
    return True


def crystal_from_json(data: dict, T: TypeData) -> Transition:
    lo, hi = data["window"]
    diags = tuple(P.young(r) for r in data["diagrams"])
    if len(diags) != hi - lo + 1:
        raise ValueError("window length does not match the diagram list")
    return Transition(lo, diags, T.nu_minus, T.nu_plus)


__all__ = [
    "Crystal",
    "Transition",
    "TypeData",
    "addable_nodes",
    "addable_saturate",
    "crystal_counts",
    "crystal_weight",
    "edge_ok",
    "enumerate_crystals",
    "enumeration_window",
    "is_transition",
    "melting_closure_check",
    "minimal_transition",
    "q_prefactor",
    "z_crystal",
]
