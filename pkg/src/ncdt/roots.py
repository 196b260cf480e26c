"""Affine type A root data, chamber maps and wall crossing.

Root vectors are plain integer tuples indexed by the vertices ``0..L-1``
(coefficient of ``alpha_i`` in slot ``i``).  They are *not* doubled; use
:func:`doubled` before turning a root into a series exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .partition import HALF

RootVec = tuple[int, ...]


def as_half(h) -> Fraction:
    h = Fraction(h)
    if h.denominator != 2:
        raise ValueError(f"{h} is not a half-integer")
    return h


def res_half(h: Fraction, L: int) -> Fraction:
    """``pi(h)`` in ``{1/2, ..., L-1/2}``."""
    return Fraction(h) % L


def res_int(n: int, L: int) -> int:
    return n % L


def half_index(h: Fraction, L: int) -> int:
    """Index ``0..L-1`` of the residue class of ``h`` (``1/2 -> 0``)."""
    return int(res_half(h, L) - HALF)


def doubled(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(2 * x for x in v)


# ---------------------------------------------------------------------------
# sigma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaMap:
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad sign vector {self.signs}")

    @classmethod
    def parse(cls, text: str) -> "SigmaMap":
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as exc:
            raise ValueError(f"sigma must be a string of + and -, got {text!r}") from exc

    @property
    def L(self) -> int:
        return len(self.signs)

    @property
    def L_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def L_minus(self) -> int:
        return self.L - self.L_plus

    def __call__(self, h: Fraction) -> int:
        return self.signs[half_index(h, self.L)]

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    vec: RootVec
    endpoints: tuple[Fraction, Fraction] | None = None

    @property
    def L(self) -> int:
        return len(self.vec)

    @property
    def degree(self) -> int:
        return sum(self.vec)

    def is_imaginary(self) -> bool:
        return len(set(self.vec)) == 1 and self.vec[0] != 0

    def is_real(self) -> bool:
        if self.endpoints is not None:
            h, hp = self.endpoints
            return (hp - h) % self.L != 0
        return not self.is_imaginary() and any(self.vec)


def root_interval(h, hp, L: int) -> Root:
    """``alpha_[h,h']``: the sum of ``alpha_pi(k)`` over integers between."""
    h, hp = as_half(h), as_half(hp)
    lo, hi = (h, hp) if h <= hp else (hp, h)
    vec = [0] * L
    k = int(lo + HALF)
    while k < hi:
        vec[k % L] += 1
        k += 1
    sgn = 1 if h <= hp else -1
    return Root(tuple(sgn * x for x in vec), (h, hp))


def delta(L: int) -> RootVec:
    return (1,) * L


def root_stats(alpha: Root, sigma: SigmaMap) -> tuple[int, int, str]:
    """``(sigma(alpha), alpha_0, class)`` for a root given by endpoints ``h < h'``."""
    if alpha.endpoints is None:
        raise ValueError("root_stats needs endpoints")
    h, hp = alpha.endpoints
    if h == hp:
        raise ValueError("degenerate root")
    if h > hp:
        raise ValueError("root_stats expects h < h'")
    L = sigma.L
    s = -sigma(h) * sigma(hp)
    # number of m with h < mL < h'
    a0 = _count_multiples(h, hp, L)
    if (hp - h) % L == 0:
        cls = "im+"
    else:
        cls = "re+"
    return s, a0, cls


def _count_multiples(lo: Fraction, hi: Fraction, L: int) -> int:
    import math

    first = math.floor(lo / L) + 1
    last = math.ceil(hi / L) - 1
    return max(0, last - first + 1)


def q_of_h(h, L: int) -> RootVec:
    """Exponent vector of ``q_h = q^{alpha_[1/2,h]}``."""
    return root_interval(HALF, h, L).vec


# ---------------------------------------------------------------------------
# chamber maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaMap:
    """An ``L``-periodic bijection of the half-integers.

    ``window`` holds ``theta(1/2), ..., theta(L-1/2)``.  With ``reflected``
    set the map is composed with multiplication by ``-1`` afterwards; this is
    the orientation used for the finite-type (PT side) crystals.
    """

    window: tuple[Fraction, ...]
    reflected: bool = False

    def __post_init__(self) -> None:
        L = len(self.window)
        residues = sorted(Fraction(w) % L for w in self.window)
        if residues != [k + HALF for k in range(L)]:
            raise ValueError(f"window {self.window} is not a bijection mod {L}")
        # doubled window and its inverse table, for integer arithmetic below
        dw = tuple(int(2 * Fraction(w)) for w in self.window)
        inv = {(x % (2 * L)): (k, x) for k, x in enumerate(dw)}
        object.__setattr__(self, "_dw", dw)
        object.__setattr__(self, "_dinv", inv)

    @property
    def L(self) -> int:
        return len(self.window)

    @classmethod
    def identity(cls, L: int, reflected: bool = False) -> "ThetaMap":
        return cls(tuple(k + HALF for k in range(L)), reflected)

    def base(self, h: Fraction) -> Fraction:
        H2 = int(2 * h)
        L2 = 2 * self.L
        k = (H2 % L2) // 2
        return Fraction(self._dw[k] + H2 - (2 * k + 1), 2)

    def __call__(self, h) -> Fraction:
        v = self.base(as_half(h))
        return -v if self.reflected else v

    def base_inverse(self, x: Fraction) -> Fraction:
        X2 = int(2 * x)
        hit = self._dinv.get(X2 % (2 * self.L))
        if hit is None:
            raise AssertionError("theta window is not a bijection")
        k, w2 = hit
        return Fraction(2 * k + 1 + X2 - w2, 2)

    def inverse(self, h) -> Fraction:
        h = as_half(h)
        return self.base_inverse(-h if self.reflected else h)

    def in_theta_set(self) -> bool:
        """Sum condition for the chamber set (``sum window = L^2 / 2``)."""
        return sum(self.window) == Fraction(self.L * self.L, 2)

    def doubled_window(self) -> list[int]:
        return [int(2 * w) for w in self.window]

    def key(self) -> tuple:
        return (self.window, self.reflected)


def theta_i(h, i: int, L: int) -> Fraction:
    h = as_half(h)
    if (h + HALF) % L == i % L:
        return h + 1
    if (h - HALF) % L == i % L:
        return h - 1
    return h


def theta_wall(theta: ThetaMap, i: int) -> ThetaMap:
    """``theta ∘ theta_i``."""
    L = theta.L
    window = tuple(theta.base(theta_i(k + HALF, i, L)) for k in range(L))
    return ThetaMap(window, theta.reflected)


def theta_from_walls(seq: Iterable[int], L: int, reflected: bool = False) -> ThetaMap:
    theta = ThetaMap.identity(L, reflected)
    for i in seq:
        if not 0 <= int(i) < L:
            raise ValueError(f"vertex {i} out of range for L={L}")
        theta = theta_wall(theta, int(i))
    return theta


def alpha_simple(theta: ThetaMap, i: int) -> Root:
    """``alpha(theta, i) = alpha_[theta(n-1/2), theta(n+1/2)]`` with ``pi(n) = i``."""
    L = theta.L
    r = root_interval(theta(i - HALF), theta(i + HALF), L)
    # same answer for the next representative of the class
    r2 = root_interval(theta(i + L - HALF), theta(i + L + HALF), L)
    assert r.vec == r2.vec
    return r


def basis_matrix(theta: ThetaMap) -> list[RootVec]:
    return [alpha_simple(theta, i).vec for i in range(theta.L)]


def unimodular_inverse(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant ``±1``."""
    m = np.array(rows, dtype=np.int64)
    det = round(float(np.linalg.det(m)))
    if det not in (1, -1):
        raise AssertionError(f"basis matrix is not unimodular (det={det})")
    inv = np.rint(np.linalg.inv(m)).astype(np.int64)
    if not np.array_equal(m @ inv, np.eye(len(rows), dtype=np.int64)):
        raise AssertionError("rounded inverse is not exact")
    return inv.tolist()


def chamber_point(theta: ThetaMap) -> tuple[Fraction, ...]:
    """A point of the chamber attached to ``theta``.

    ``zeta_i = -(theta^{-1}(n+1/2) - theta^{-1}(n-1/2))`` with ``pi(n) = i``,
    so that ``zeta . alpha(theta, i) = -1`` for every ``i`` and
    ``zeta . alpha_[h,h'] = -(theta^{-1}(h') - theta^{-1}(h))``.
    """
    return tuple(
        -(theta.inverse(i + HALF) - theta.inverse(i - HALF)) for i in range(theta.L)
    )


def pair(zeta: Sequence[Fraction], vec: Sequence[int]) -> Fraction:
    return sum((Fraction(z) * x for z, x in zip(zeta, vec)), Fraction(0))


def v_coords(h, hp, theta: ThetaMap) -> RootVec:
    """Coordinates of ``alpha_[h,h']`` in the basis ``alpha(theta, i)``.

    Telescoping gives ``alpha_[h,h'] = sum alpha(theta, pi(n))`` over the
    integers ``n`` strictly between ``theta^{-1}(h)`` and ``theta^{-1}(h')``
    (with a minus sign when the preimages are in decreasing order).
    """
    a, b = theta.inverse(h), theta.inverse(hp)
    L = theta.L
    lo, hi = (a, b) if a <= b else (b, a)
    vec = [0] * L
    k = int(lo + HALF)
    while k < hi:
        vec[k % L] += 1
        k += 1
    sgn = 1 if a <= b else -1
    return tuple(sgn * x for x in vec)


def chamber_positive(theta: ThetaMap, h, hp) -> bool:
    """Whether ``alpha_[h,h']`` pairs negatively with the chamber point.

    Equivalent to ``theta^{-1}(h) < theta^{-1}(h')``.
    """
    return theta.inverse(h) < theta.inverse(hp)


@dataclass(frozen=True)
class RootFactor:
    root: Root
    sign: int
    alpha0: int


def ordered_positive_roots(theta: ThetaMap, D: int, sigma: SigmaMap) -> list[RootFactor]:
    """Positive real roots of ``q``-degree at most ``D`` on the negative side of the chamber."""
    L = theta.L
    out = []
    for k in range(L):
        h = k + HALF
        for d in range(1, D + 1):
            if d % L == 0:
                continue
            hp = h + d
            if not chamber_positive(theta, h, hp):
                continue
            r = root_interval(h, hp, L)
            s, a0, _ = root_stats(r, sigma)
            out.append(RootFactor(r, s, a0))
    out.sort(key=lambda f: (f.root.degree, f.root.vec))
    return out


def inverted_positive_roots(theta: ThetaMap) -> set[RootVec]:
    """Positive real roots on the positive side of the chamber (a finite set)."""
    L = theta.L
    span = max(abs(theta(k + HALF) - (k + HALF)) for k in range(L))
    bound = int(2 * span) + 2 * L
    out = set()
    for k in range(L):
        h = k + HALF
        for d in range(1, bound + 1):
            if d % L == 0:
                continue
            if not chamber_positive(theta, h, h + d):
                out.add(root_interval(h, h + d, L).vec)
    return out


def crossed_roots(seq: Sequence[int], L: int) -> list[RootVec]:
    """Roots ``alpha(theta_{r-1}, i_r)`` of the walls crossed along ``seq``."""
    theta = ThetaMap.identity(L)
    out = []
    for i in seq:
        out.append(alpha_simple(theta, i).vec)
        theta = theta_wall(theta, i)
    return out
