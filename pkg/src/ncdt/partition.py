"""Young diagrams, Maya diagrams, interlacing relations and legged 3D partitions.

A Young diagram is a plain tuple of positive, weakly decreasing row lengths.
The empty diagram is ``()``.  Keeping diagrams as tuples makes them hashable
and cheap to compare, which matters for the enumeration code downstream.

Half-integers are passed around as :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Sequence

YoungDiagram = tuple[int, ...]
Direction = Literal["row", "col"]

HALF = Fraction(1, 2)


def young(rows: Iterable[int]) -> YoungDiagram:
    """Return the canonical tuple for ``rows`` (trailing zeros dropped).

    Raises ``ValueError`` if the rows are not weakly decreasing or negative.
    """
    parts = tuple(int(r) for r in rows)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    for k, r in enumerate(parts):
        if r < 0:
            raise ValueError(f"negative row length in {parts}")
        if k + 1 < len(parts) and parts[k + 1] > r:
            raise ValueError(f"rows are not weakly decreasing: {parts}")
        if r == 0:
            raise ValueError(f"zero row before a positive row: {parts}")
    return parts


def size(mu: YoungDiagram) -> int:
    return sum(mu)


def transpose(mu: YoungDiagram) -> YoungDiagram:
    if not mu:
        return ()
    return tuple(sum(1 for r in mu if r > c) for c in range(mu[0]))


def row(mu: YoungDiagram, k: int) -> int:
    """Length of row ``k`` (0-based); zero past the last row."""
    return mu[k] if k < len(mu) else 0


def contains(mu: YoungDiagram, nu: YoungDiagram) -> bool:
    """Rowwise containment ``nu ⊆ mu``."""
    if len(nu) > len(mu):
        return False
    return all(a >= b for a, b in zip(mu, nu))


def union(mu: YoungDiagram, nu: YoungDiagram) -> YoungDiagram:
    """Rowwise maximum, which is again a Young diagram."""
    n = max(len(mu), len(nu))
    return tuple(max(row(mu, k), row(nu, k)) for k in range(n))


def intersection(mu: YoungDiagram, nu: YoungDiagram) -> YoungDiagram:
    n = min(len(mu), len(nu))
    return young(min(mu[k], nu[k]) for k in range(n))


def _rows_interlace(mu: YoungDiagram, nu: YoungDiagram) -> bool:
    # mu_1 >= nu_1 >= mu_2 >= nu_2 >= ...
    if len(nu) > len(mu) or len(mu) > len(nu) + 1:
        return False
    for k, a in enumerate(mu):
        b = row(nu, k)
        if b > a:
            return False
        if row(mu, k + 1) > b:
            return False
    return True


def interlaces(mu: YoungDiagram, nu: YoungDiagram, direction: Direction) -> bool:
    """``mu ≻ nu`` as a horizontal strip (``row``) or vertical strip (``col``)."""
    if direction == "row":
        return _rows_interlace(mu, nu)
    if direction == "col":
        return _rows_interlace(transpose(mu), transpose(nu))
    raise ValueError(f"unknown direction {direction!r}")


def strip_direction(sign: int) -> Direction:
    """``+`` signs use row interlacing, ``-`` signs use column interlacing."""
    return "row" if sign > 0 else "col"


def remove_maximal_strip(mu: YoungDiagram, direction: Direction) -> YoungDiagram:
    """The smallest ``nu`` with ``mu ≻ nu`` in the given direction."""
    if direction == "row":
        return mu[1:]
    return young(r - 1 for r in mu)


def predecessors(mu: YoungDiagram, direction: Direction) -> list[YoungDiagram]:
    """All ``nu`` with ``mu ≻ nu`` (strips removed from ``mu``)."""
    if direction == "col":
        return [transpose(n) for n in predecessors(transpose(mu), "row")]
    out: list[YoungDiagram] = []
    # nu_k ranges over [mu_{k+1}, mu_k]
    ranges = [range(row(mu, k + 1), mu[k] + 1) for k in range(len(mu))]

    def rec(k: int, acc: list[int]) -> None:
        if k == len(ranges):
            out.append(young(acc))
            return
        for v in ranges[k]:
            acc.append(v)
            rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def successors(nu: YoungDiagram, direction: Direction, max_added: int) -> list[YoungDiagram]:
    """All ``mu`` with ``mu ≻ nu`` and ``|mu| - |nu| <= max_added``."""
    if direction == "col":
        return [transpose(m) for m in successors(transpose(nu), "row", max_added)]
    out: list[YoungDiagram] = []
    n = len(nu)

    # mu_1 >= nu_1, and nu_{k-1} >= mu_k >= nu_k for k >= 2, mu has at most n+1 rows
    def rec(k: int, acc: list[int], budget: int) -> None:
        if k == n + 1:
            out.append(young(acc))
            return
        lo = row(nu, k)
        hi = lo + budget if k == 0 else min(nu[k - 1], lo + budget)
        for v in range(lo, hi + 1):
            acc.append(v)
            rec(k + 1, acc, budget - (v - lo))
            acc.pop()

    rec(0, [], max_added)
    return out


def partitions_of(n: int) -> Iterator[YoungDiagram]:
    """Partitions of ``n`` in reverse lexicographic order."""

    def rec(rem: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for tail in rec(rem - first, first):
                yield (first,) + tail

    yield from rec(n, n)


def partitions_upto(n: int) -> list[YoungDiagram]:
    return [mu for k in range(n + 1) for mu in partitions_of(k)]


def supersets_within(base: YoungDiagram, extra: int) -> list[YoungDiagram]:
    """All diagrams containing ``base`` with at most ``extra`` more boxes."""
    out = [base]
    frontier = [base]
    seen = {base}
    for _ in range(extra):
        nxt = []
        for mu in frontier:
            for nu in add_one_box(mu):
                if nu not in seen:
                    seen.add(nu)
                    nxt.append(nu)
        out.extend(nxt)
        frontier = nxt
    return out


def add_one_box(mu: YoungDiagram) -> list[YoungDiagram]:
    out = []
    for k in range(len(mu) + 1):
        if k == 0 or mu[k - 1] > row(mu, k):
            rows = list(mu) + ([0] if k == len(mu) else [])
            rows[k] += 1
            out.append(tuple(rows))
    return out


def remove_one_box(mu: YoungDiagram) -> list[YoungDiagram]:
    out = []
    for k in range(len(mu)):
        if row(mu, k + 1) < mu[k]:
            rows = list(mu)
            rows[k] -= 1
            out.append(young(rows))
    return out


def boxes(mu: YoungDiagram) -> list[tuple[int, int]]:
    """0-based ``(x, y)`` cells with ``y`` the row index and ``x`` the column."""
    return [(x, y) for y, r in enumerate(mu) for x in range(r)]


def has_box(mu: YoungDiagram, x: int, y: int) -> bool:
    return x >= 0 and y >= 0 and y < len(mu) and x < mu[y]


def n_statistic(mu: YoungDiagram) -> int:
    """``n(mu) = sum_k (k-1) mu_k``."""
    return sum(k * r for k, r in enumerate(mu))


def hook_lengths(mu: YoungDiagram) -> list[int]:
    mt = transpose(mu)
    return [mu[y] - x + mt[x] - y - 1 for x, y in boxes(mu)]


# ---------------------------------------------------------------------------
# Maya diagrams
# ---------------------------------------------------------------------------


def _vacuum(h: Fraction) -> int:
    return 1 if h > 0 else -1


@dataclass(frozen=True)
class MayaDiagram:
    """A two-tailed sign sequence on half-integers.

    Only the positions where the sign differs from the vacuum ``sign(h)`` are
    stored.  Signs are ``+1`` / ``-1``.
    """

    exceptions: frozenset[tuple[Fraction, int]]

    def __call__(self, h: Fraction) -> int:
        for pos, s in self.exceptions:
            if pos == h:
                return s
        return _vacuum(h)

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.exceptions)


def maya_sign(mu: YoungDiagram, h: Fraction) -> int:
    """Sign of the Maya diagram of ``mu`` at ``h``.

    ``mu(h) = -`` exactly when ``h = mu_k - k + 1/2`` for some ``k >= 1``.
    """
    h = Fraction(h)
    for k, r in enumerate(mu, start=1):
        if r - k + HALF == h:
            return -1
    # rows past the end contribute every -k + 1/2 with k > len(mu)
    k = HALF - h
    if k.denominator == 1 and k > len(mu):
        return -1
    return 1


def maya(mu: YoungDiagram) -> MayaDiagram:
    occupied = {r - k + HALF for k, r in enumerate(mu, start=1)}
    exc: set[tuple[Fraction, int]] = set()
    for h in occupied:
        if h > 0:
            exc.add((h, -1))
    for k in range(1, len(mu) + 1):
        h = -k + HALF
        if h not in occupied:
            exc.add((h, 1))
    return MayaDiagram(frozenset(exc))


def from_maya(m: MayaDiagram) -> YoungDiagram:
    """Inverse of :func:`maya`; rejects sign maps of nonzero charge."""
    exc = m.as_dict()
    for h in exc:
        if Fraction(h).denominator != 2:
            raise ValueError(f"{h} is not a half-integer")
    plus_below = sorted(h for h, s in exc.items() if s > 0 and h < 0)
    minus_above = sorted(h for h, s in exc.items() if s < 0 and h > 0)
    if len(plus_below) != len(minus_above):
        raise ValueError("Maya diagram has nonzero charge; no partition matches")
    lowest = min([h for h in exc] + [-HALF])
    # occupied (minus) positions, listed in decreasing order down to the tail
    occupied = [h for h in minus_above]
    h = -HALF
    while h >= lowest:
        if exc.get(h, -1) < 0:
            occupied.append(h)
        h -= 1
    occupied.sort(reverse=True)
    rows = [int(pos + k - HALF) for k, pos in enumerate(occupied, start=1)]
    return young(rows)


def residue_half(h: Fraction, L: int) -> Fraction:
    """``pi(h)`` as an element of ``{1/2, ..., L - 1/2}``."""
    r = Fraction(h) % L
    return r


def tuple_maya(lam: Sequence[YoungDiagram], h: Fraction) -> int:
    """Sign attached to ``h`` by an ``L``-tuple of diagrams.

    ``lam[k]`` is the diagram at residue ``k + 1/2``.
    """
    L = len(lam)
    if L < 1:
        raise ValueError("need at least one diagram")
    j = residue_half(h, L)
    arg = (Fraction(h) - j) / L + HALF
    return maya_sign(lam[int(j - HALF)], arg)


# ---------------------------------------------------------------------------
# 3D partitions with asymptotic legs
# ---------------------------------------------------------------------------

Box3 = tuple[int, int, int]
Legs = tuple[YoungDiagram, YoungDiagram, YoungDiagram]


def _in_diagram(mu: YoungDiagram, a: int, b: int) -> bool:
    # 1-based cell (a, b): row a, column b
    return 1 <= a <= len(mu) and 1 <= b <= mu[a - 1]


def minimal_solid_member(legs: Legs, p: Box3) -> bool:
    """Membership of ``p`` in the union of the three leg cylinders."""
    lx, ly, lz = legs
    x, y, z = p
    return _in_diagram(lx, y, z) or _in_diagram(ly, z, x) or _in_diagram(lz, x, y)


def leg_overlap(legs: Legs) -> int:
    """``sum_p (k(p) - 1)`` over cells ``p`` lying in ``k(p) >= 2`` leg cylinders.

    This is the amount by which the union of the legs undercounts the sum of
    the leg cross-sections, i.e. minus the renormalized volume of the
    minimal solid.  Cells in two cylinders have every coordinate inside the
    leg extent, so the scan is finite.
    """
    lx, ly, lz = (young(m) for m in legs)
    ext = _leg_extent((lx, ly, lz))
    total = 0
    for x in range(1, ext + 1):
        for y in range(1, ext + 1):
            for z in range(1, ext + 1):
                k = _in_diagram(lx, y, z) + _in_diagram(ly, z, x) + _in_diagram(lz, x, y)
                if k >= 2:
                    total += k - 1
    return total


@dataclass(frozen=True)
class LeggedSolid:
    legs: Legs
    extra: frozenset[Box3]

    def __contains__(self, p: Box3) -> bool:
        return p in self.extra or minimal_solid_member(self.legs, p)

    @property
    def volume(self) -> int:
        """Boxes beyond the minimal solid."""
        return len(self.extra)

    @property
    def renormalized_volume(self) -> int:
        """``volume`` minus the leg overlap (may be negative)."""
        return len(self.extra) - leg_overlap(self.legs)

    def is_downward_closed(self) -> bool:
        for x, y, z in self.extra:
            for q in ((x - 1, y, z), (x, y - 1, z), (x, y, z - 1)):
                if min(q) >= 1 and q not in self:
                    return False
        return True


def _leg_extent(legs: Legs) -> int:
    return max([len(m) for m in legs] + [m[0] if m else 0 for m in legs] + [0])


def _addable(legs: Legs, extra: frozenset[Box3], bound: int) -> list[Box3]:
    solid = LeggedSolid(legs, extra)
    out = []
    for x in range(1, bound + 1):
        for y in range(1, bound + 1):
            for z in range(1, bound + 1):
                p = (x, y, z)
                if p in solid:
                    continue
                ok = True
                for q in ((x - 1, y, z), (x, y - 1, z), (x, y, z - 1)):
                    if min(q) >= 1 and q not in solid:
                        ok = False
                        break
                if ok:
                    out.append(p)
    return out


def enumerate_legged(legs: Legs, N: int) -> Iterator[LeggedSolid]:
    """All legged 3D partitions with at most ``N`` boxes beyond the legs.

    Solids are grown one addable box at a time; each level is deduplicated
    and emitted in sorted order, so the stream is deterministic.
    """
    legs = tuple(young(m) for m in legs)  # type: ignore[assignment]
    bound = _leg_extent(legs) + N + 1
    level: set[frozenset[Box3]] = {frozenset()}
    for d in range(N + 1):
        for extra in sorted(level, key=lambda s: sorted(s)):
            yield LeggedSolid(legs, extra)
        if d == N:
            break
        nxt: set[frozenset[Box3]] = set()
        for extra in level:
            for p in _addable(legs, extra, bound):
                nxt.add(extra | {p})
        level = nxt


def count_legged(legs: Legs, N: int) -> list[int]:
    """Counts of legged solids by number of boxes beyond the legs, ``0..N``."""
    counts = [0] * (N + 1)
    for s in enumerate_legged(legs, N):
        counts[s.volume] += 1
    return counts


def solid_from_heights(heights: Sequence[Sequence[int]]) -> frozenset[Box3]:
    """Boxes of a plane partition given as a height matrix (1-based)."""
    out = set()
    for i, rowh in enumerate(heights, start=1):
        for j, hgt in enumerate(rowh, start=1):
            for k in range(1, hgt + 1):
                out.add((i, j, k))
    return frozenset(out)
