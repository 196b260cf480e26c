"""Quiver combinatorics: the quiver of a sign map, its framing, and the sign rule.

Vertices are the residues ``0..L-1`` (plus ``"*"`` once framed).  Arrow
labels are strings: ``h+_j`` and ``h-_j`` for the half-integer ``j`` in
``1/2..L-1/2``, ``r_i`` for loops, ``iota_a`` and ``tau_b`` for the framing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import partition as P
from .partition import HALF, YoungDiagram
from .roots import SigmaMap, ThetaMap
from .series import LaurentSeries

STAR = "*"
Vertex = int | str


def _fmt_half(h: Fraction) -> str:
    h = Fraction(h)
    return str(h.numerator) if h.denominator == 1 else f"{h.numerator}/{h.denominator}"


@dataclass(frozen=True)
class Arrow:
    source: Vertex
    target: Vertex
    label: str

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "label": self.label}


@dataclass(frozen=True)
class PotentialTerm:
    """``sign`` times the cycle ``path[0] ∘ path[1] ∘ ...`` (composition order)."""

    sign: int
    path: tuple[str, ...]

    def __str__(self) -> str:
        return ("+ " if self.sign > 0 else "- ") + " o ".join(self.path)

    def to_json(self) -> dict:
        return {"sign": self.sign, "path": list(self.path)}


@dataclass
class QuiverData:
    vertices: list[Vertex]
    arrows: list[Arrow]
    potential_terms: list[PotentialTerm] = field(default_factory=list)

    def count(self, source: Vertex, target: Vertex) -> int:
        return sum(1 for a in self.arrows if a.source == source and a.target == target)

    def arrow_counts(self) -> Counter:
        return Counter((a.source, a.target) for a in self.arrows)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [a.to_json() for a in self.arrows],
            "potential_terms": [t.to_json() for t in self.potential_terms],
        }


def hexagon_set(sigma: SigmaMap) -> list[int]:
    """Residues ``pi(n)`` of the integers with ``sigma(n-1/2) = sigma(n+1/2)``."""
    return [i for i in range(sigma.L) if sigma(i - HALF) == sigma(i + HALF)]


def square_set(sigma: SigmaMap) -> list[int]:
    return [i for i in range(sigma.L) if sigma(i - HALF) != sigma(i + HALF)]


def base_quiver(sigma: SigmaMap) -> QuiverData:
    """``h+_j: j-1/2 -> j+1/2`` and ``h-_j: j+1/2 -> j-1/2`` for every ``j``, plus loops."""
    L = sigma.L
    arrows = []
    for k in range(L):
        j = k + HALF
        src, tgt = k % L, (k + 1) % L
        arrows.append(Arrow(src, tgt, f"h+_{_fmt_half(j)}"))
        arrows.append(Arrow(tgt, src, f"h-_{_fmt_half(j)}"))
    for i in hexagon_set(sigma):
        arrows.append(Arrow(i, i, f"r_{i}"))
    return QuiverData(list(range(L)), arrows)


def composed_sigma(sigma: SigmaMap, theta: ThetaMap) -> SigmaMap:
    """``sigma ∘ theta`` as a sign map (it is again ``L``-periodic)."""
    return SigmaMap(tuple(sigma(theta(k + HALF)) for k in range(sigma.L)))


def _scan_radius(theta: ThetaMap, lam: Sequence[YoungDiagram]) -> int:
    L = theta.L
    drift = max(abs(theta.base(k + HALF) - (k + HALF)) for k in range(L))
    extent = max([len(m) for m in lam] + [m[0] if m else 0 for m in lam] + [0])
    return int(L * (extent + 2) + drift) + 2


def peaks_valleys(theta: ThetaMap, lam: Sequence[YoungDiagram]) -> tuple[list[int], list[int]]:
    """Sign changes of ``ulam ∘ theta``: valleys (``- -> +``) and peaks (``+ -> -``).

    Far to the left the sign is ``-`` and far to the right ``+``, so there is
    one more valley than peaks and they alternate.
    """
    if theta.reflected:
        raise ValueError("peaks and valleys are defined for the unreflected orientation")
    lam = tuple(P.young(m) for m in lam)
    R = _scan_radius(theta, lam)
    valleys, peaks = [], []
    for n in range(-R, R + 1):
        a = P.tuple_maya(lam, theta(n - HALF))
        b = P.tuple_maya(lam, theta(n + HALF))
        if a < 0 < b:
            valleys.append(n)
        elif b < 0 < a:
            peaks.append(n)
    return valleys, peaks


def _h_path(sign: str, start: int, stop: int, L: int) -> tuple[str, ...]:
    """Arrows ``h±`` walking from the integer ``start`` to ``stop``, in composition order."""
    if sign == "+":
        js = [Fraction(m) + HALF for m in range(start, stop)]
    else:
        js = [Fraction(m) - HALF for m in range(start, stop, -1)]
    return tuple(f"h{sign}_{_fmt_half(j % L)}" for j in reversed(js))


def hat_quiver(sigma: SigmaMap, theta: ThetaMap, lam: Sequence[YoungDiagram]) -> QuiverData:
    """Framed quiver for the type ``(sigma, theta, empty, lam)``.

    The base is the quiver of ``sigma ∘ theta``.  Vertex ``*`` gets an arrow
    ``iota_a`` into ``pi(n(a))`` for each valley and an arrow ``tau_b`` out
    of ``pi(n(b))`` for each peak.  Each peak contributes two added cycles,
    ``tau_b h_[n(b-1/2), n(b)] iota_{b-1/2}`` with ``+`` and
    ``tau_b h_[n(b+1/2), n(b)] iota_{b+1/2}`` with ``-``.
    """
    L = sigma.L
    base = base_quiver(composed_sigma(sigma, theta))
    valleys, peaks = peaks_valleys(theta, lam)
    K = len(peaks)
    if len(valleys) != K + 1:
        raise AssertionError("valleys and peaks do not alternate")
    arrows = list(base.arrows)
    iota_names = []
    for idx, n in enumerate(valleys):
        name = f"iota_{_fmt_half(Fraction(2 * idx + 1, 2))}"
        iota_names.append(name)
        arrows.append(Arrow(STAR, n % L, name))
    terms = []
    for idx, n in enumerate(peaks):
        name = f"tau_{idx + 1}"
        arrows.append(Arrow(n % L, STAR, name))
        left, right = valleys[idx], valleys[idx + 1]
        terms.append(PotentialTerm(1, (name,) + _h_path("+", left, n, L) + (iota_names[idx],)))
        terms.append(PotentialTerm(-1, (name,) + _h_path("-", right, n, L) + (iota_names[idx + 1],)))
    return QuiverData(list(range(L)) + [STAR], arrows, terms)


def behrend_signs(Q: QuiverData, L: int) -> tuple[int, ...]:
    """``(-1)^(Q_{i->i} + Q_{i->*} + Q_{*->i})`` for each vertex ``i``."""
    out = []
    for i in range(L):
        e = Q.count(i, i) + Q.count(i, STAR) + Q.count(STAR, i)
        out.append(-1 if e % 2 else 1)
    return tuple(out)


def sign_substitution(s: LaurentSeries, Q: QuiverData) -> LaurentSeries:
    """Multiply the coefficient of ``v`` by ``prod_i sign_i^{v_i}`` (colour exponents).

    The input is a colour-graded series (doubled exponents, all even).
    """
    L = s.nvars
    signs = behrend_signs(Q, L)
    acc = {}
    for e, c in s.terms.items():
        if any(x % 2 for x in e):
            raise ValueError("sign substitution needs integral colour exponents")
        k = sum(x // 2 for x, sg in zip(e, signs) if sg < 0)
        acc[e] = -c if k % 2 else c
    return LaurentSeries(acc, s.weights, s.prec, s.names)


__all__ = [
    "Arrow",
    "PotentialTerm",
    "QuiverData",
    "STAR",
    "base_quiver",
    "behrend_signs",
    "composed_sigma",
    "hat_quiver",
    "hexagon_set",
    "peaks_valleys",
    "sign_substitution",
    "square_set",
]
