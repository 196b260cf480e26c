"""Exact truncated multivariate Laurent series.

Exponents are stored *doubled* so that half-integer powers such as
``t^{1/2}`` stay exact.  A series carries a grading (one integer weight per
variable) and a precision: every monomial whose graded doubled degree is at
most ``prec`` is known exactly, and nothing above ``prec`` is stored.
``prec=None`` means the series is an exact (finite) Laurent polynomial.

Multiplication propagates precision the way power-series arithmetic does:
``prec(ab) = min(prec(a) + mindeg(b), prec(b) + mindeg(a))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from . import partition as P
from .partition import YoungDiagram

ExpVec = tuple[int, ...]


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(p: int | None, d: int | None) -> int | None:
    if p is None or d is None:
        return None if p is None else p
    return p + d


@dataclass(frozen=True)
class TruncationSpec:
    """Grading weights plus a cap on the graded degree (natural units).

    ``total_degree`` weights every variable by one.  ``v_budget`` is the same
    thing read in crystal colours: the cap bounds the number of removed
    boxes.  ``t_degree`` weights only variable 0, which is the exponent of
    ``t`` once a ``q``-series is regraded to ``(q_1..q_{L-1}, t)``.
    """

    weights: tuple[int, ...]
    cap: int
    mode: str = "total-degree"

    @classmethod
    def total_degree(cls, nvars: int, D: int) -> "TruncationSpec":
        return cls((1,) * nvars, D, "total-degree")

    @classmethod
    def v_budget(cls, nvars: int, N: int) -> "TruncationSpec":
        return cls((1,) * nvars, N, "v-budget")

    @classmethod
    def t_degree(cls, nvars: int, N: int) -> "TruncationSpec":
        return cls((1,) + (0,) * (nvars - 1), N, "t-degree")

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def prec2(self) -> int:
        return 2 * self.cap

    def degree2(self, e: ExpVec) -> int:
        return sum(w * x for w, x in zip(self.weights, e))

    def admits(self, e: ExpVec) -> bool:
        return self.degree2(e) <= self.prec2


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"q{k}" for k in range(n))


@dataclass(frozen=True)
class LaurentSeries:
    terms: Mapping[ExpVec, int]
    weights: tuple[int, ...]
    prec: int | None = None
    names: tuple[str, ...] = field(default=())

    # -- construction -----------------------------------------------------

    @staticmethod
    def build(
        terms: Mapping[ExpVec, int] | Iterable[tuple[ExpVec, int]],
        weights: Sequence[int],
        prec: int | None = None,
        names: Sequence[str] | None = None,
    ) -> "LaurentSeries":
        weights = tuple(weights)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExpVec, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != len(weights):
                raise ValueError(f"exponent {e} has wrong length for {len(weights)} variables")
            if prec is not None and sum(w * x for w, x in zip(weights, e)) > prec:
                continue
            acc[e] = acc.get(e, 0) + c
        clean = {e: c for e, c in acc.items() if c != 0}
        nm = tuple(names) if names else default_names(len(weights))
        return LaurentSeries(clean, weights, prec, nm)

    @staticmethod
    def one(spec: TruncationSpec, names: Sequence[str] | None = None) -> "LaurentSeries":
        return LaurentSeries.monomial((0,) * spec.nvars, spec, 1, names)

    @staticmethod
    def monomial(
        e: ExpVec, spec: TruncationSpec, coeff: int = 1, names: Sequence[str] | None = None
    ) -> "LaurentSeries":
        return LaurentSeries.build({tuple(e): coeff}, spec.weights, spec.prec2, names)

    @staticmethod
    def exact_monomial(e: ExpVec, weights: Sequence[int], coeff: int = 1) -> "LaurentSeries":
        return LaurentSeries.build({tuple(e): coeff}, weights, None)

    # -- basic queries ----------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def degree2(self, e: ExpVec) -> int:
        return sum(w * x for w, x in zip(self.weights, e))

    def mindeg(self) -> int | None:
        if not self.terms:
            return None
        return min(self.degree2(e) for e in self.terms)

    def coeff(self, e: ExpVec) -> int:
        return self.terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[ExpVec, int]]:
        return sorted(self.terms.items())

    def truncate(self, prec2: int | None) -> "LaurentSeries":
        new = _min_prec(self.prec, prec2)
        return LaurentSeries.build(self.terms, self.weights, new, self.names)

    def with_names(self, names: Sequence[str]) -> "LaurentSeries":
        return LaurentSeries(self.terms, self.weights, self.prec, tuple(names))

    def _check(self, other: "LaurentSeries") -> None:
        if self.weights != other.weights:
            raise ValueError("incompatible truncation specs (different gradings)")

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentSeries.build(acc, self.weights, _min_prec(self.prec, other.prec), self.names)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({e: -c for e, c in self.terms.items()}, self.weights, self.prec, self.names)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, k: int) -> "LaurentSeries":
        return LaurentSeries.build({e: k * c for e, c in self.terms.items()}, self.weights, self.prec, self.names)

    def shift(self, m: ExpVec) -> "LaurentSeries":
        """Multiply by the monomial ``q^m`` (doubled exponents)."""
        d = self.degree2(m)
        terms = {tuple(a + b for a, b in zip(e, m)): c for e, c in self.terms.items()}
        prec = None if self.prec is None else self.prec + d
        return LaurentSeries(terms, self.weights, prec, self.names)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        ma, mb = self.mindeg(), other.mindeg()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + (mb if mb is not None else 0))
        if other.prec is not None:
            cands.append(other.prec + (ma if ma is not None else 0))
        prec = min(cands) if cands else None
        if not self.terms or not other.terms:
            return LaurentSeries({}, self.weights, prec, self.names)
        w = self.weights
        acc: dict[ExpVec, int] = {}
        bterms = [(e, c, sum(x * y for x, y in zip(w, e))) for e, c in other.terms.items()]
        for ea, ca in self.terms.items():
            da = sum(x * y for x, y in zip(w, ea))
            for eb, cb, db in bterms:
                if prec is not None and da + db > prec:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        return LaurentSeries({e: c for e, c in acc.items() if c != 0}, w, prec, self.names)

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return recip(self) ** (-k)
        result = LaurentSeries.build({(0,) * self.nvars: 1}, self.weights, None, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.weights == other.weights
            and self.prec == other.prec
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self) -> int:
        return hash((self.weights, self.prec, tuple(sorted(self.terms.items()))))

    def agrees_with(self, other: "LaurentSeries", prec2: int | None = None) -> bool:
        """Equality on the monomials both series know exactly."""
        self._check(other)
        p = _min_prec(_min_prec(self.prec, other.prec), prec2)
        return dict(self.truncate(p).terms) == dict(other.truncate(p).terms)

    def differences(self, other: "LaurentSeries", prec2: int | None = None) -> list[tuple[ExpVec, int, int]]:
        p = _min_prec(_min_prec(self.prec, other.prec), prec2)
        a, b = self.truncate(p), other.truncate(p)
        keys = sorted(set(a.terms) | set(b.terms))
        return [(e, a.coeff(e), b.coeff(e)) for e in keys if a.coeff(e) != b.coeff(e)]

    def map_exponents(self, f, weights: Sequence[int], prec: int | None, names: Sequence[str] | None = None) -> "LaurentSeries":
        """Apply an exponent map (assumed injective) and re-truncate."""
        acc: dict[ExpVec, int] = {}
        for e, c in self.terms.items():
            ne = tuple(f(e))
            acc[ne] = acc.get(ne, 0) + c
        return LaurentSeries.build(acc, weights, prec, names)

    def is_integral(self) -> bool:
        return all(x % 2 == 0 for e in self.terms for x in e)

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "variables": list(self.names),
            "unit": "half",
            "terms": [{"exp": list(e), "coeff": str(c)} for e, c in self.sorted_terms()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @staticmethod
    def from_json(data: Mapping, weights: Sequence[int] | None = None, prec: int | None = None) -> "LaurentSeries":
        names = tuple(data["variables"])
        w = tuple(weights) if weights is not None else (1,) * len(names)
        terms = {tuple(int(x) for x in t["exp"]): int(t["coeff"]) for t in data["terms"]}
        return LaurentSeries.build(terms, w, prec, names)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for name, x in zip(self.names, e):
                if x == 0:
                    continue
                ex = x // 2 if x % 2 == 0 else f"{x}/2"
                mono.append(name if ex == 1 else f"{name}^{ex}")
            body = "*".join(mono) if mono else "1"
            parts.append(f"{c}" if not mono else (body if c == 1 else f"{c}*{body}"))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# free functions named in the public interface
# ---------------------------------------------------------------------------


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def recip(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse of a series whose lowest term is ``±q^m``."""
    if not a.terms:
        raise ZeroDivisionError("reciprocal of zero series")
    d0 = a.mindeg()
    low = [(e, c) for e, c in a.terms.items() if a.degree2(e) == d0]
    if len(low) != 1 or low[0][1] not in (1, -1):
        raise ValueError("leading term is not a unit monomial")
    m, c0 = low[0]
    neg_m = tuple(-x for x in m)
    # a = c0 q^m (1 + r) with r of positive degree
    r = a.shift(neg_m).scale(c0)
    r = r - LaurentSeries.build({(0,) * a.nvars: 1}, a.weights, None, a.names)
    if a.prec is None and r.terms:
        raise ValueError("reciprocal of a non-monomial polynomial needs a truncation; call truncate() first")
    prec = None if a.prec is None else a.prec - 2 * d0
    inv = LaurentSeries.build({(0,) * a.nvars: 1}, a.weights, prec, a.names)
    if r.terms:
        rd = r.mindeg()
        assert rd is not None and rd > 0
        term = inv
        k = 1
        while prec is not None and k * rd <= prec:
            term = (term * r).scale(-1)
            inv = inv + term
            k += 1
    return inv.shift(neg_m).scale(c0)


def binom_pow(m: ExpVec, sign: int, e: int, spec: TruncationSpec, names: Sequence[str] | None = None) -> LaurentSeries:
    """Expand ``(1 + sign q^m)^e`` up to the truncation (``m`` doubled)."""
    m = tuple(m)
    d = spec.degree2(m)
    if all(x == 0 for x in m):
        raise ValueError("binom_pow needs a nonzero exponent vector")
    if d <= 0:
        raise ValueError("binom_pow needs an exponent of positive degree")
    terms: dict[ExpVec, int] = {}
    k = 0
    while k * d <= spec.prec2:
        c = _gen_binom(e, k) * (sign**k)
        if c:
            terms[tuple(k * x for x in m)] = c
        if e >= 0 and k >= e:
            break
        k += 1
    prec = None if (e >= 0 and e * d <= spec.prec2) else spec.prec2
    return LaurentSeries.build(terms, spec.weights, prec, names)


def _gen_binom(e: int, k: int) -> int:
    """Generalised binomial coefficient ``C(e, k)`` for any integer ``e``."""
    if e >= 0:
        return comb(e, k)
    return (-1) ** k * comb(-e + k - 1, k)


def factor_pow(m: ExpVec, sign: int, e: int, spec: TruncationSpec, names: Sequence[str] | None = None) -> LaurentSeries:
    """``(1 + sign q^m)^e`` where ``m`` may have negative degree.

    For negative degree ``1 + s q^m = s q^m (1 + s q^{-m})``.
    """
    d = spec.degree2(m)
    if d > 0:
        return binom_pow(m, sign, e, spec, names)
    if d == 0:
        raise ValueError("factor with a degree-zero exponent cannot be expanded")
    neg = tuple(-x for x in m)
    inner = binom_pow(neg, sign, e, _raise_cap(spec, -d * e), names)
    return inner.shift(tuple(e * x for x in m)).scale(sign ** abs(e))


def _raise_cap(spec: TruncationSpec, d2: int) -> TruncationSpec:
    """A spec whose cap is raised by ``d2`` doubled units (rounded up)."""
    extra = (max(d2, 0) + 1) // 2
    return TruncationSpec(spec.weights, spec.cap + extra, spec.mode)


def t_vector(L: int, power2: int = 2) -> ExpVec:
    """Doubled exponent vector of ``t^{power2/2}`` with ``t = q_0 ... q_{L-1}``."""
    return (power2,) * L


def macmahon(D: int, L: int = 1, spec: TruncationSpec | None = None) -> LaurentSeries:
    """``M(1,t) = prod (1 - t^m)^{-m}``, truncated at graded degree of the spec.

    With the default spec the result is the univariate series in ``t`` to
    ``t^D`` (for ``L = 1``) or the ``q``-series with ``t = q_0 ... q_{L-1}``.
    """
    if spec is None:
        spec = TruncationSpec.total_degree(L, D * L)
    result = LaurentSeries.one(spec)
    tdeg = spec.degree2(t_vector(L))
    if tdeg <= 0:
        raise ValueError("t must have positive degree")
    m = 1
    while m * tdeg <= spec.prec2:
        result = result * binom_pow(t_vector(L, 2 * m), -1, -m, spec)
        m += 1
    return LaurentSeries.build(result.terms, spec.weights, spec.prec2, result.names)


def _ssyt_weights(lam: YoungDiagram, nvars: int) -> list[tuple[int, ...]]:
    """Content vectors of all semistandard tableaux of shape ``lam``."""
    cells = P.boxes(lam)
    out: list[tuple[int, ...]] = []
    filling: dict[tuple[int, int], int] = {}

    def rec(k: int) -> None:
        if k == len(cells):
            cnt = [0] * nvars
            for v in filling.values():
                cnt[v] += 1
            out.append(tuple(cnt))
            return
        x, y = cells[k]
        lo = 0
        if x > 0:
            lo = max(lo, filling[(x - 1, y)])
        if y > 0:
            lo = max(lo, filling[(x, y - 1)] + 1)
        for v in range(lo, nvars):
            filling[(x, y)] = v
            rec(k + 1)
        filling.pop((x, y), None)

    rec(0)
    return out


def principal_spec(lam: YoungDiagram, D: int, L: int = 1, spec: TruncationSpec | None = None) -> LaurentSeries:
    """``s_lam(t^{1/2}, t^{3/2}, ...)`` by direct tableau evaluation.

    Only finitely many variables can matter below the cap: each box filled
    with variable ``k`` (1-based) costs ``t^{k - 1/2}``, and the remaining
    boxes cost at least ``t^{1/2}`` each.
    """
    if spec is None:
        spec = TruncationSpec.total_degree(L, D * L)
    tdeg2 = spec.degree2(t_vector(L))  # doubled degree of t
    n = P.size(lam)
    if n == 0:
        return LaurentSeries.one(spec)
    # minimal doubled degree of all boxes except one: (n-1) * tdeg2/2
    # one box on variable K contributes (2K-1)*tdeg2/2
    K = 1
    while (2 * (K + 1) - 1) * tdeg2 + (n - 1) * tdeg2 <= 2 * spec.prec2:
        K += 1
    acc: dict[ExpVec, int] = {}
    for cnt in _ssyt_weights(lam, K):
        # exponent of t, doubled: sum_k cnt_k * (2k+1)  with k 0-based
        p2 = sum(c * (2 * k + 1) for k, c in enumerate(cnt))
        e = tuple(p2 * 1 for _ in range(L))
        acc[e] = acc.get(e, 0) + 1
    return LaurentSeries.build(acc, spec.weights, spec.prec2)


def hook_principal_spec(lam: YoungDiagram, spec: TruncationSpec) -> LaurentSeries:
    """``t^{|lam|/2 + n(lam)} / prod_hooks (1 - t^h)``: the hook-length form."""
    L = spec.nvars
    out = LaurentSeries.monomial(t_vector(L, P.size(lam) + 2 * P.n_statistic(lam)), spec)
    for h in P.hook_lengths(lam):
        out = out * binom_pow(t_vector(L, 2 * h), -1, -1, spec)
    return out


def v_to_q(s: LaurentSeries, basis: Sequence[Sequence[int]], prec: int | None = None) -> LaurentSeries:
    """Regrade a colour-graded series into ``q`` via ``v -> sum v_i basis_i``.

    ``basis`` rows are integer (not doubled) root vectors.  The output keeps
    the total-degree grading of ``q``; by default it is exact on whatever the
    input knew (no further truncation).
    """
    L = len(basis)

    def f(e: ExpVec) -> ExpVec:
        return tuple(sum(e[i] * basis[i][k] for i in range(L)) for k in range(L))

    images = {}
    for e in s.terms:
        img = f(e)
        if img in images and images[img] != e:
            raise AssertionError("v_to_q collision: colour basis is not independent")
        images[img] = e
    return s.map_exponents(f, (1,) * L, prec, default_names(L))
