"""Vertex operators on the partition Fock space and the closed product formulas.

Conventions used throughout this module:

* ``Gamma^e_+(p)`` adds a strip (row strip for ``e=+``, column strip for
  ``e=-``) and ``Gamma^e_-(p)`` removes one; both carry ``p^{|mu|-|mu'|}``.
* In the ordered word attached to a type, position ``k`` holds
  ``Gamma^{sigma(theta(k))}_{ulam(theta(k))}(x_k)`` with ``x_k = q_{theta(k)}^{-1}``.
  With this argument the bra-ket is a sum over transitions whose weight
  telescopes to the colour monomial of the crystal.
* Every commutation of a ``Gamma_-(x_a)`` to the right past a
  ``Gamma_+(x_b)`` produces ``(1 + s q^{alpha_[a,b]})^{s}`` with
  ``s = -sigma(a) sigma(b)``.  The closed forms are products of these
  factors over the pairs that the word order puts in the wrong order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import partition as P
from .crystal import TypeData, minimal_transition, enumeration_window, q_prefactor, v_names
from .partition import HALF, YoungDiagram
from .roots import (
    SigmaMap,
    ThetaMap,
    basis_matrix,
    q_of_h,
    root_interval,
    unimodular_inverse,
    v_coords,
)
from .series import (
    LaurentSeries,
    TruncationSpec,
    factor_pow,
    macmahon,
    principal_spec,
    t_vector,
)

ExpVec = tuple[int, ...]


# ---------------------------------------------------------------------------
# Fock space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaSpec:
    """``Gamma^{eps}_{iota}(p)`` with ``p`` a doubled exponent vector."""

    eps: int
    iota: int
    p: ExpVec

    def __post_init__(self) -> None:
        if self.eps not in (1, -1) or self.iota not in (1, -1):
            raise ValueError("eps and iota must be +1 or -1")


@dataclass
class FockVector:
    """Finite combination of partitions with Laurent polynomial amplitudes.

    ``max_size`` bounds the partitions that are kept; amplitudes of larger
    partitions are dropped when an operator would create them.
    """

    amps: dict[YoungDiagram, dict[ExpVec, int]]
    nvars: int
    max_size: int

    @classmethod
    def basis(cls, mu: YoungDiagram, nvars: int, max_size: int) -> "FockVector":
        return cls({P.young(mu): {(0,) * nvars: 1}}, nvars, max_size)

    def amplitude(self, mu: YoungDiagram) -> dict[ExpVec, int]:
        return dict(self.amps.get(P.young(mu), {}))

    def cleaned(self) -> "FockVector":
        out = {}
        for mu, poly in self.amps.items():
            poly = {e: c for e, c in poly.items() if c}
            if poly:
                out[mu] = poly
        return FockVector(out, self.nvars, self.max_size)


def _neighbours(mu: YoungDiagram, g: GammaSpec, max_size: int) -> list[YoungDiagram]:
    direction = P.strip_direction(g.eps)
    if g.iota > 0:
        return P.successors(mu, direction, max_size - P.size(mu))
    return P.predecessors(mu, direction)


def apply_gamma(g: GammaSpec, v: FockVector) -> FockVector:
    out: dict[YoungDiagram, dict[ExpVec, int]] = {}
    for mu, poly in v.amps.items():
        for nu in _neighbours(mu, g, v.max_size):
            k = P.size(mu) - P.size(nu)
            shift = tuple(k * x for x in g.p)
            acc = out.setdefault(nu, {})
            for e, c in poly.items():
                ne = tuple(a + b for a, b in zip(e, shift))
                acc[ne] = acc.get(ne, 0) + c
    return FockVector(out, v.nvars, v.max_size).cleaned()


@dataclass(frozen=True)
class OperatorWord:
    """A finite ordered product, leftmost operator first."""

    ops: tuple[GammaSpec, ...]
    bra: YoungDiagram = ()
    ket: YoungDiagram = ()


def bra_ket(word: OperatorWord, nvars: int, max_size: int) -> dict[ExpVec, int]:
    """``<bra| ops |ket>`` over all paths whose states have at most ``max_size`` boxes."""
    v = FockVector.basis(word.ket, nvars, max_size)
    for g in reversed(word.ops):
        v = apply_gamma(g, v)
    return v.amplitude(word.bra)


def commutator_scalar(g1: GammaSpec, g2: GammaSpec, nvars: int, max_size: int) -> dict[ExpVec, int]:
    """Vacuum value of ``Gamma_-(p1) Gamma_+(p2)``, which equals the commutation scalar."""
    return bra_ket(OperatorWord((g1, g2)), nvars, max_size)


# ---------------------------------------------------------------------------
# coordinate helpers
# ---------------------------------------------------------------------------


class VFrame:
    """Colour coordinates attached to a chamber map ``theta``."""

    def __init__(self, theta: ThetaMap):
        self.theta = theta
        self.L = theta.L
        self.basis = basis_matrix(theta)
        self.inv = unimodular_inverse(self.basis)

    def from_q(self, qvec: Sequence[int]) -> ExpVec:
        L = self.L
        return tuple(sum(qvec[k] * self.inv[k][i] for k in range(L)) for i in range(L))

    def q_h(self, h: Fraction) -> ExpVec:
        return v_coords(HALF, h, self.theta)

    def root(self, a: Fraction, b: Fraction) -> ExpVec:
        return v_coords(a, b, self.theta)


def _dbl(v: Sequence[int]) -> ExpVec:
    return tuple(2 * x for x in v)


# ---------------------------------------------------------------------------
# the ordered word of a type
# ---------------------------------------------------------------------------


def word_for(T: TypeData, lo: int, hi: int) -> OperatorWord:
    """Operators at positions ``lo-1/2 .. hi+1/2`` of the ordered product.

    Arguments are ``q``-coordinate exponents (doubled) of ``x_k``.
    """
    L = T.L
    ops = []
    for n in range(lo - 1, hi + 1):
        k = n + HALF
        h = T.theta(k)
        ops.append(GammaSpec(T.sigma(h), T.ulam(h), _dbl(tuple(-x for x in q_of_h(h, L)))))
    return OperatorWord(tuple(ops), T.nu_minus, T.nu_plus)


def z_vertex(T: TypeData, N: int, window_extra: int = 0) -> LaurentSeries:
    """Bra-ket of the ordered word times the ``V_min`` normalisation, in colours.

    The bra-ket is evaluated as a transfer recursion from the ket side,
    one operator at a time.  States are partitions containing ``V_min(n)``;
    the accumulated ``q``-exponent is mapped to colours at the end through
    the inverse of the ``alpha(theta, i)`` basis.
    """
    L = T.L
    lo, hi = enumeration_window(T, N, window_extra)
    vmin = minimal_transition(T, lo, hi)
    word = word_for(T, lo, hi)
    frame = VFrame(T.theta)
    # state: (partition, boxes used) -> {q exponent (plain ints): coeff}
    states: dict[tuple[YoungDiagram, int], dict[ExpVec, int]] = {(T.nu_plus, 0): {(0,) * L: 1}}
    for idx in range(len(word.ops) - 1, -1, -1):
        g = word.ops[idx]
        n_right = lo + idx  # the operator maps V(n_right) to V(n_right - 1)
        n_left = n_right - 1
        base_r = P.size(vmin.value(n_right))
        target = vmin.value(n_left)
        base_l = P.size(target)
        qh = tuple(-x // 2 for x in g.p)  # q_{theta(k)}
        nxt: dict[tuple[YoungDiagram, int], dict[ExpVec, int]] = {}
        for (mu, used), poly in states.items():
            room = N - used
            if g.iota > 0:
                cands = P.successors(mu, P.strip_direction(g.eps), base_l + room - P.size(mu))
            else:
                cands = P.predecessors(mu, P.strip_direction(g.eps))
            for nu in cands:
                if not P.contains(nu, target):
                    continue
                cost = P.size(nu) - base_l
                if cost > room:
                    continue
                if n_left < lo and nu != T.nu_minus:
                    continue
                # normalised exponent of q_{theta(k)}
                k_exp = (P.size(nu) - base_l) - (P.size(mu) - base_r)
                shift = tuple(k_exp * x for x in qh)
                acc = nxt.setdefault((nu, used + cost), {})
                for e, c in poly.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    acc[ne] = acc.get(ne, 0) + c
        states = nxt
    out: dict[ExpVec, int] = {}
    for (mu, used), poly in states.items():
        for e, c in poly.items():
            v = _dbl(frame.from_q(e))
            out[v] = out.get(v, 0) + c
    spec = TruncationSpec.v_budget(L, N)
    return LaurentSeries.build(out, spec.weights, spec.prec2, v_names(L))


# ---------------------------------------------------------------------------
# skew Schur functions
# ---------------------------------------------------------------------------


def skew_schur(
    outer: YoungDiagram,
    inner: YoungDiagram,
    variables: Sequence[ExpVec],
    weights: Sequence[int],
    invert: bool = False,
    transpose: bool = False,
) -> LaurentSeries:
    """``s_{outer/inner}`` evaluated at monomials (doubled exponents), exactly.

    Sums over chains ``inner = mu_0 ≺ mu_1 ≺ ... ≺ mu_k = outer`` of strips.
    ``transpose`` uses column strips, ``invert`` replaces each variable by
    its inverse.
    """
    outer, inner = P.young(outer), P.young(inner)
    nv = len(weights)
    if not P.contains(outer, inner):
        return LaurentSeries.build({}, weights, None)
    direction = "col" if transpose else "row"
    states: dict[YoungDiagram, dict[ExpVec, int]] = {inner: {(0,) * nv: 1}}
    top = P.size(outer)
    for x in variables:
        x = tuple(-a for a in x) if invert else tuple(x)
        nxt: dict[YoungDiagram, dict[ExpVec, int]] = {}
        for mu, poly in states.items():
            for nu in P.successors(mu, direction, top - P.size(mu)):
                if not P.contains(outer, nu):
                    continue
                k = P.size(nu) - P.size(mu)
                shift = tuple(k * a for a in x)
                acc = nxt.setdefault(nu, {})
                for e, c in poly.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    acc[ne] = acc.get(ne, 0) + c
        states = nxt
    return LaurentSeries.build(states.get(outer, {}), weights, None)


def subdiagrams(mu: YoungDiagram) -> list[YoungDiagram]:
    out = []

    def rec(k: int, acc: list[int]) -> None:
        if k == len(mu):
            out.append(P.young(acc))
            return
        cap = mu[k] if k == 0 else min(mu[k], acc[-1])
        for r in range(cap + 1):
            acc.append(r)
            rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    return sorted(set(out))


# The four S-sets feed the four chain factors.  The entries are
# (sigma sign, ulam sign, starred).  "lemma" is the assignment produced by
# normal ordering the word with the argument convention of this module; the
# "display" variant swaps the ulam labels of every slot.
SKEW_ASSIGNMENTS: dict[str, tuple[tuple[int, int], ...]] = {
    "lemma": ((1, 1), (-1, 1), (1, -1), (-1, -1)),
    "display": ((1, -1), (-1, -1), (1, 1), (-1, 1)),
}


def s_set(sigma: SigmaMap, lam: Sequence[YoungDiagram], eps: int, iota: int, H: int) -> tuple[Fraction, ...]:
    return _s_set(sigma, tuple(lam), eps, iota, H)


@lru_cache(maxsize=4096)
def _s_set(sigma: SigmaMap, lam: tuple[YoungDiagram, ...], eps: int, iota: int, H: int) -> tuple[Fraction, ...]:
    out = []
    for k in range(-H, H):
        h = k + HALF
        if sigma(h) == eps and P.tuple_maya(lam, h) == iota:
            out.append(h)
    return tuple(out)


def skew_sum(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    qh: Callable[[Fraction], ExpVec],
    weights: Sequence[int],
    H: int,
    assignment: str = "lemma",
    star_by_iota: bool = True,
) -> LaurentSeries:
    """``sum s_{nu-/nu1} ts_{nu1/nu2} s*_{nu3/nu2} ts*_{nu+/nu3}`` on truncated S-sets.

    Slot variables are ``q_h`` (unstarred) or ``q_h^{-1}`` (starred) for
    ``h`` in the slot's S-set with ``|h| < H``.  With ``star_by_iota`` the
    star follows the ulam label of the slot (minus means starred); otherwise
    slots 2 and 4 are starred as in the printed formula.
    """
    slots = SKEW_ASSIGNMENTS[assignment]
    var_sets = []
    for idx, (eps, iota) in enumerate(slots):
        hs = s_set(sigma, lam, eps, iota, H)
        starred = (iota < 0) if star_by_iota else idx in (1, 3)
        vs = [_dbl(qh(h)) for h in hs]
        if starred:
            vs = [tuple(-x for x in v) for v in vs]
        var_sets.append(vs)
    total = LaurentSeries.build({}, weights, None)
    for nu1 in subdiagrams(nu_minus):
        f1 = skew_schur(nu_minus, nu1, var_sets[0], weights)
        if f1.is_zero():
            continue
        for nu2 in subdiagrams(nu1):
            f2 = skew_schur(nu1, nu2, var_sets[1], weights, transpose=True)
            if f2.is_zero():
                continue
            for nu3 in subdiagrams(nu_plus):
                if not P.contains(nu3, nu2):
                    continue
                f3 = skew_schur(nu3, nu2, var_sets[2], weights)
                if f3.is_zero():
                    continue
                f4 = skew_schur(nu_plus, nu3, var_sets[3], weights, transpose=True)
                total = total + f1 * f2 * f3 * f4
    return total


def stable_skew_sum(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    qh: Callable[[Fraction], ExpVec],
    spec: TruncationSpec,
    shift: ExpVec,
    assignment: str = "lemma",
    h_cap: int = 200,
) -> tuple[LaurentSeries, int]:
    """Skew sum times the monomial ``shift``, grown in ``H`` until stable.

    Returns the exact Laurent polynomial for the last ``H`` (shifted) and
    that ``H``.  Stability means the truncation to ``spec`` plus a margin
    for negative degrees is unchanged from ``H`` to ``H + L``.
    """
    L = sigma.L
    extent = max([len(m) for m in lam] + [m[0] if m else 0 for m in lam] + [0])
    H = L * (extent + 2) + 2 * spec.cap + 2
    prev = None
    while H <= h_cap:
        s = skew_sum(sigma, nu_plus, nu_minus, lam, qh, spec.weights, H, assignment).shift(shift)
        md = s.mindeg()
        margin = max(0, -(md if md is not None else 0))
        cut = s.truncate(spec.prec2 + margin)
        if prev is not None and dict(cut.terms) == dict(prev.terms):
            return s, H
        prev = cut
        H += L
    raise ArithmeticError(f"skew sum did not stabilise for |h| < {h_cap}")


# ---------------------------------------------------------------------------
# pair products
# ---------------------------------------------------------------------------


def maya_pair_count(lam: Sequence[YoungDiagram], a: Fraction, b: Fraction) -> int:
    """``#{m : ulam(a + mL) = -, ulam(b + mL) = +}``."""
    return _maya_pair_count(tuple(lam), a, b)


@lru_cache(maxsize=65536)
def _maya_pair_count(lam: tuple[YoungDiagram, ...], a: Fraction, b: Fraction) -> int:
    L = len(lam)
    extent = max([len(m) for m in lam] + [m[0] if m else 0 for m in lam] + [0])
    E = L * (extent + 2)
    span = abs(b - a)
    m_lo = math.floor((-E - span - a) / L) - 2
    m_hi = math.ceil((E + span - a) / L) + 2
    c = 0
    for m in range(m_lo, m_hi + 1):
        if P.tuple_maya(lam, a + m * L) < 0 and P.tuple_maya(lam, b + m * L) > 0:
            c += 1
    return c


@dataclass(frozen=True)
class PairFactor:
    a: Fraction
    b: Fraction
    root: ExpVec  # alpha_[a,b] in q coordinates
    sign: int  # sigma(alpha) = -sigma(a) sigma(b)
    count: int  # exponent multiplicity

    @property
    def exponent(self) -> int:
        return self.sign * self.count


def pair_factors(
    sigma: SigmaMap,
    lam: Sequence[YoungDiagram],
    before: Callable[[Fraction, Fraction], bool],
    degree: Callable[[Fraction, Fraction], int],
    cap: int,
    reach: int,
    real_only: bool = True,
) -> list[PairFactor]:
    """Factor data for the pairs ``(a, b)`` with ``Gamma_-(a)`` placed before ``Gamma_+(b)``.

    ``a`` runs over ``1/2 .. L-1/2`` (one representative per shift class),
    ``b`` over ``a - reach .. a + reach``.  Pairs whose monomial has
    ``degree`` above ``cap`` are skipped.  A kept pair of negative degree
    (finitely many, all from ``lambda``) is expanded around its leading
    monomial by :func:`factor_pow`.
    """
    L = sigma.L
    out = []
    for k in range(L):
        a = k + HALF
        for d in range(-reach, reach + 1):
            if d == 0:
                continue
            if real_only and d % L == 0:
                continue
            b = a + d
            if not before(a, b):
                continue
            deg = degree(a, b)
            if deg > cap:
                continue
            c = maya_pair_count(lam, a, b)
            if c == 0:
                continue
            if deg == 0:
                raise ArithmeticError(f"pair ({a}, {b}) has a monomial of degree 0")
            out.append(PairFactor(a, b, root_interval(a, b, L).vec, -sigma(a) * sigma(b), c))
    return out


def pair_product(factors: Iterable[PairFactor], to_coords: Callable[[PairFactor], ExpVec], spec: TruncationSpec) -> LaurentSeries:
    out = LaurentSeries.one(spec)
    for f in factors:
        e = f.exponent
        if e == 0:
            continue
        out = out * factor_pow(_dbl(to_coords(f)), f.sign, e, spec)
    return out


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def hook_exponent2(lam: YoungDiagram) -> int:
    """Doubled exponent ``c`` with ``prod (1-t^{m'-m})^{-1} = M s_lam(t^{-rho}) t^{c/2}``."""
    return -(2 * P.n_statistic(lam) + P.size(lam))


def _theta_drift(theta: ThetaMap) -> int:
    return int(max(abs(theta.base(k + HALF) - (k + HALF)) for k in range(theta.L)))


def _lam_extent(lam: Sequence[YoungDiagram]) -> int:
    return max([len(m) for m in lam] + [m[0] if m else 0 for m in lam] + [0])


@dataclass
class ClosedFormReport:
    series: LaurentSeries
    factors: list[PairFactor]
    skew_H: int
    prefactor_v: ExpVec
    metadata: dict


def closed_form_ncdt(
    T: TypeData,
    N: int,
    counting: str = "pairs",
    assignment: str = "lemma",
    report: bool = False,
):
    """Product formula for the crystal series, in colour variables to degree ``N``.

    ``counting="pairs"`` takes the exponent of each real factor from the Maya
    pair count of ``ulam`` (negative roots included);
    ``counting="alpha0"`` uses ``alpha_0`` on positive roots only.
    """
    L = T.L
    theta = T.theta
    frame = VFrame(theta)
    pref_q = q_prefactor(T)
    pref_v = tuple(-x for x in frame.from_q(pref_q))
    drift = _theta_drift(theta)
    extent = _lam_extent(T.lam)
    margin = L * (extent + 2)

    def before(a: Fraction, b: Fraction) -> bool:
        return theta.inverse(a) < theta.inverse(b)

    def vdeg(a: Fraction, b: Fraction) -> int:
        return sum(frame.root(a, b))

    # skew part first: its lowest degree fixes how far the rest must reach
    base_spec = TruncationSpec.v_budget(L, N)
    skew, H = stable_skew_sum(
        T.sigma, T.nu_plus, T.nu_minus, T.lam, frame.q_h, base_spec, _dbl(pref_v), assignment
    )
    md = skew.mindeg() or 0
    hook2 = sum(hook_exponent2(mu) for mu in T.lam) * L
    extra = max(0, -md) + max(0, -hook2)
    spec = TruncationSpec.v_budget(L, N + (extra + 1) // 2)
    reach = spec.cap + 2 * drift + 2 * margin + 2 * L

    if counting == "pairs":
        factors = pair_factors(T.sigma, T.lam, before, vdeg, spec.cap, reach)
    elif counting == "alpha0":
        from .roots import root_stats

        factors = []
        for k in range(L):
            a = k + HALF
            for d in range(1, reach + 1):
                if d % L == 0:
                    continue
                b = a + d
                if not before(a, b) or vdeg(a, b) > spec.cap:
                    continue
                s, a0, _ = root_stats(root_interval(a, b, L), T.sigma)
                if a0:
                    factors.append(PairFactor(a, b, root_interval(a, b, L).vec, s, a0))
    else:
        raise ValueError(f"unknown counting rule {counting!r}")

    z = macmahon(0, L, spec) ** L
    t_shift = 0
    for mu in T.lam:
        z = z * principal_spec(mu, 0, L, spec)
        t_shift += hook_exponent2(mu)
    z = z.shift(t_vector(L, t_shift))
    z = z * pair_product(factors, lambda f: frame.root(f.a, f.b), spec)
    z = LaurentSeries.build(z.terms, z.weights, z.prec, v_names(L))
    z = (z * skew.with_names(v_names(L))).truncate(2 * N)
    if not z.is_integral():
        raise ArithmeticError("closed form produced half-integer colour exponents")
    z = LaurentSeries.build(z.terms, base_spec.weights, base_spec.prec2, v_names(L))
    if report:
        meta = {
            "counting": counting,
            "skew_assignment": assignment,
            "skew_window": H,
            "prefactor_q": list(pref_q),
            "hook_monomial_t2": t_shift,
        }
        return ClosedFormReport(z, factors, H, pref_v, meta)
    return z


def z_zeta_pos(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    D: int,
    assignment: str = "lemma",
) -> LaurentSeries:
    """Boundary factor at the identity chamber: skew sum over the prefactor, in ``q``.

    Returned as an exact Laurent polynomial in ``q_0..q_{L-1}`` (total
    degree grading) cut at total degree ``D``.
    """
    L = sigma.L
    T = TypeData(sigma, ThetaMap.identity(L), nu_plus, nu_minus, tuple(lam))
    pref = tuple(-2 * x for x in q_prefactor(T))
    spec = TruncationSpec.total_degree(L, D)
    s, _ = stable_skew_sum(
        sigma, T.nu_plus, T.nu_minus, T.lam, lambda h: q_of_h(h, L), spec, pref, assignment
    )
    return s.truncate(spec.prec2)


# ---------------------------------------------------------------------------
# topological vertex side
# ---------------------------------------------------------------------------


def tv_word(sigma: SigmaMap, lam: Sequence[YoungDiagram], H: int) -> OperatorWord:
    """Blocks ``j = 1/2 .. L-1/2``; inside a block the operators follow ``h`` upwards.

    Operator ``h`` is ``Gamma_-`` or ``Gamma_+`` according to ``ulam(h)``.  Only
    ``|h| < H`` is kept.  Arguments are ``q_h^{-1}`` (doubled ``q`` exponents).
    """
    L = sigma.L
    ops = []
    for k in range(L):
        j = k + HALF
        for m in range(-(H // L) - 2, H // L + 3):
            h = j + m * L
            if abs(h) >= H:
                continue
            iota = 1 if P.tuple_maya(lam, h) > 0 else -1
            ops.append(GammaSpec(sigma(j), iota, _dbl(tuple(-x for x in q_of_h(h, L)))))
    return OperatorWord(tuple(ops))


def _tv_braket(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    H: int,
    K: int,
    box: Sequence[int],
) -> dict[ExpVec, int]:
    """Bra-ket of the TV word cut to ``|h| < H``, states of at most ``K`` boxes.

    Exponents are plain ``q`` vectors.  Only the final exponents with every
    coordinate ``e_i <= box[i]`` are wanted.  A path is dropped once some
    coordinate exceeds its bound by more than the remaining operators could
    still lower it (each moves at most ``K`` boxes).
    """
    L = sigma.L
    ops = tv_word(sigma, lam, H).ops
    # rescue[i][c]: largest possible drop of coordinate c from operators 0..i-1
    rescue = [(0,) * L]
    for g in ops:
        sgn = -1 if g.iota < 0 else 1
        step = tuple(K * max(0, sgn * x // 2) for x in g.p)
        rescue.append(tuple(a + b for a, b in zip(rescue[-1], step)))
    states: dict[YoungDiagram, dict[ExpVec, int]] = {P.young(nu_plus): {(0,) * L: 1}}
    for idx in range(len(ops) - 1, -1, -1):
        g = ops[idx]
        direction = P.strip_direction(g.eps)
        limit = tuple(b + r for b, r in zip(box, rescue[idx]))
        nxt: dict[YoungDiagram, dict[ExpVec, int]] = {}
        for mu, poly in states.items():
            if g.iota > 0:
                cands = P.successors(mu, direction, K - P.size(mu))
            else:
                cands = P.predecessors(mu, direction)
            for nu in cands:
                k = P.size(mu) - P.size(nu)
                shift = tuple(k * x // 2 for x in g.p)
                acc = nxt.setdefault(nu, {})
                for e, c in poly.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    if any(x > m for x, m in zip(ne, limit)):
                        continue
                    acc[ne] = acc.get(ne, 0) + c
        states = {}
        for mu, poly in nxt.items():
            poly = {e: c for e, c in poly.items() if c}
            if poly:
                states[mu] = poly
    return states.get(P.young(nu_minus), {})


def minimal_path(word: OperatorWord, nu_plus: YoungDiagram, nu_minus: YoungDiagram) -> list[YoungDiagram]:
    """Smallest state sequence through ``word`` from ``<nu_-|`` to ``|nu_+>``.

    Entry ``k`` is the state left of operator ``k`` (the last entry is
    ``nu_+``).  As for ``V_min`` it is the join of two greedy sweeps: from
    the left every ``Gamma_+`` drops a maximal strip, from the right every
    ``Gamma_-`` does.
    """
    ops = word.ops
    n = len(ops)
    left = [P.young(nu_minus)]
    for g in ops:
        cur = left[-1]
        if g.iota > 0:
            cur = P.remove_maximal_strip(cur, P.strip_direction(g.eps))
        left.append(cur)
    right = [P.young(nu_plus)]
    for g in reversed(ops):
        cur = right[-1]
        if g.iota < 0:
            cur = P.remove_maximal_strip(cur, P.strip_direction(g.eps))
        right.append(cur)
    right.reverse()
    path = [P.union(a, b) for a, b in zip(left, right)]
    if path[0] != P.young(nu_minus) or path[n] != P.young(nu_plus):
        raise AssertionError("minimal path does not reach the boundary states")
    for k, g in enumerate(ops):
        a, b = path[k], path[k + 1]
        d = P.strip_direction(g.eps)
        ok = P.interlaces(a, b, d) if g.iota > 0 else P.interlaces(b, a, d)
        if not ok:
            raise AssertionError("join of the greedy sweeps is not a path")
    return path


def tv_prefactor(sigma: SigmaMap, nu_plus: YoungDiagram, nu_minus: YoungDiagram, lam: Sequence[YoungDiagram]) -> ExpVec:
    """Doubled ``q`` exponent of the monomial multiplying the TV bra-ket.

    It is the inverse of the weight of the minimal path through the block
    word, so the fixed point with empty edges and minimal vertices counts
    as ``1``.  This is ``q(type)`` with ``V_min`` taken for the block order.
    """
    L = sigma.L
    lam = tuple(P.young(m) for m in lam)
    span = L * (_lam_extent(lam) + max(P.size(nu_plus), P.size(nu_minus)) + 3)
    word = tv_word(sigma, lam, span)
    path = minimal_path(word, nu_plus, nu_minus)
    acc = [0] * L
    for k, g in enumerate(word.ops):
        d = P.size(path[k + 1]) - P.size(path[k])
        for i in range(L):
            acc[i] += d * g.p[i]
    return tuple(-x for x in acc)


def _tv_window(sigma: SigmaMap, nu_plus, nu_minus, lam, N: int, beta_cap: int | None) -> tuple[int, int, ExpVec]:
    """``(beta_cap, D, prefactor)``: the ``q``-degree ``D`` covering the window."""
    from .dt import default_beta_cap

    L = sigma.L
    B = default_beta_cap(N) if beta_cap is None else beta_cap
    D = L * N + (L - 1) * B
    return B, D, tv_prefactor(sigma, nu_plus, nu_minus, lam)


def z_tv_vertex(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    N: int,
    beta_cap: int | None = None,
    h_cap: int = 120,
) -> LaurentSeries:
    """TV series from the block-ordered word, on the window ``t^{<=N}``, ``beta_i <= beta_cap``.

    In ``q`` the window sits inside the box ``e_0 <= N``, ``e_i <= N + beta_cap``
    (after the prefactor), and paths are pruned against that box.  The word
    cut ``H`` and the state size ``K`` grow until the windowed result is
    stable.
    """
    from .dt import restrict_to_tv_window

    L = sigma.L
    lam = tuple(P.young(m) for m in lam)
    B, D, pref = _tv_window(sigma, nu_plus, nu_minus, lam, N, beta_cap)
    box = tuple((N if i == 0 else N + B) - pref[i] // 2 for i in range(L))
    size_nu = P.size(nu_plus) + P.size(nu_minus)
    H = L * (_lam_extent(lam) + 2) + D + 2
    K = size_nu + sum(P.size(m) for m in lam) + D // 2 + 2
    prev = None
    while H <= h_cap:
        raw = _tv_braket(sigma, P.young(nu_plus), P.young(nu_minus), lam, H, K, box)
        terms = {tuple(2 * x + y for x, y in zip(e, pref)): c for e, c in raw.items()}
        s = restrict_to_tv_window(terms, L, N, B)
        if prev is not None and s == prev:
            return s
        prev = s
        H += L
        K += 2
    raise ArithmeticError("TV bra-ket did not stabilise")


def closed_form_tv(
    sigma: SigmaMap,
    nu_plus: YoungDiagram,
    nu_minus: YoungDiagram,
    lam: Sequence[YoungDiagram],
    N: int,
    beta_cap: int | None = None,
    assignment: str = "lemma",
) -> LaurentSeries:
    """Product formula for the TV series on the window ``t^{<=N}``, ``beta_i <= beta_cap``.

    The real factors come from pairs with ``pi(a) < pi(b)``: in the block
    word every ``Gamma_-`` of an earlier block sits left of every
    ``Gamma_+`` of a later one.  Pairs inside one block are ordered by
    ``h`` and give the MacMahon and ``s_lam(t^{-rho})`` factors.

    Each factor is expanded on the side the fixed-point sum lives on.  Fixed
    points have ``beta >= 0`` and, for fixed ``beta``, a ``t``-power bounded
    below by a multiple of ``-|beta|`` when legs are present.  The grading is
    therefore ``n + c |beta|`` (see :func:`tv_slope`), read in ``q``.
    """
    from .dt import restrict_to_tv_window

    L = sigma.L
    lam = tuple(P.young(m) for m in lam)
    B, _, pref = _tv_window(sigma, nu_plus, nu_minus, lam, N, beta_cap)
    c = tv_slope(lam, nu_plus, nu_minus)
    weights = (1 - c * (L - 1),) + (c,) * (L - 1)
    G = N + c * (L - 1) * B
    base = TruncationSpec(weights, G, "tv-slope")

    def qh(h: Fraction) -> ExpVec:
        return q_of_h(h, L)

    skew, H = stable_skew_sum(sigma, P.young(nu_plus), P.young(nu_minus), lam, qh, base, pref, assignment)
    md = skew.mindeg() or 0
    hook2 = base.degree2(t_vector(L, sum(hook_exponent2(mu) for mu in lam)))
    spec = TruncationSpec(weights, G + (max(0, -md) + max(0, -hook2) + 1) // 2 + 1, "tv-slope")

    def before(a: Fraction, b: Fraction) -> bool:
        return (a % L) < (b % L)

    def gdeg(a: Fraction, b: Fraction) -> int:
        return sum(w * x for w, x in zip(weights, root_interval(a, b, L).vec))

    # |alpha_[a,b]| grows like (b - a) / L; the slope can pull it down by c (L - 1)
    reach = L * (spec.cap + c * L + 2 * _lam_extent(lam) + 4)
    factors = pair_factors(sigma, lam, before, gdeg, spec.cap, reach)
    z = macmahon(0, L, spec) ** L
    t_shift = 0
    for mu in lam:
        z = z * principal_spec(mu, 0, L, spec)
        t_shift += hook_exponent2(mu)
    z = z.shift(t_vector(L, t_shift))
    z = z * pair_product(factors, lambda f: f.root, spec)
    z = (z * skew).truncate(base.prec2)
    return restrict_to_tv_window(z.terms, L, N, B)


def tv_slope(lam: Sequence[YoungDiagram], nu_plus: YoungDiagram, nu_minus: YoungDiagram) -> int:
    """Weight ``c`` of each curve class against ``t`` in the TV grading ``n + c |beta|``.

    A box of an edge leg can lower the ``t``-power by at most the number
    of leg cylinders it meets, so ``c`` is taken above the total leg size.
    """
    return 2 + sum(P.size(m) for m in lam) + P.size(nu_plus) + P.size(nu_minus)


__all__ = [
    "FockVector",
    "GammaSpec",
    "OperatorWord",
    "apply_gamma",
    "bra_ket",
    "closed_form_ncdt",
    "closed_form_tv",
    "maya_pair_count",
    "pair_factors",
    "skew_schur",
    "skew_sum",
    "minimal_path",
    "tv_prefactor",
    "tv_slope",
    "tv_word",
    "word_for",
    "z_tv_vertex",
    "z_vertex",
    "z_zeta_pos",
]
