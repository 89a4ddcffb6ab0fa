"""Cyclic words, divergence, the Jacobian cocycle and the Duflo-type solver."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .freeseries import (LieSeries, SeriesError, TruncationContext, _clean,
                         bch, format_terms, mul_terms, parse_coeff, substitute_terms,
                         terms_json)
from .tder import TAutElement, TangentialDerivation, _addto, _leibniz, taut_log


class NotInImage(ValueError):
    def __init__(self, degree: int, witness: str, residual: Fraction):
        super().__init__(f"no s at degree {degree}: class {witness} has residual {residual}")
        self.degree = degree
        self.witness = witness
        self.residual = residual


def canonical(w: tuple) -> tuple:
    """Lexicographically minimal rotation."""
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


class CyclicSeries:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: TruncationContext, terms: Mapping | None = None):
        N = ctx.max_degree
        out: dict = {}
        for w, c in (terms or {}).items():
            if c and 1 <= len(w) <= N:
                k = canonical(tuple(w))
                out[k] = out.get(k, 0) + Fraction(c)
        self.ctx = ctx
        self.terms = _clean(out)

    def __eq__(self, other):
        return isinstance(other, CyclicSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        _addto(out, other.terms)
        N = min(self.ctx.max_degree, other.ctx.max_degree)
        return CyclicSeries(self.ctx.with_degree(N), out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return CyclicSeries(self.ctx, {w: c * v for w, v in self.terms.items()} if c else {})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def min_degree(self):
        return min((len(w) for w in self.terms), default=self.ctx.max_degree + 1)

    def degree_part(self, d):
        return CyclicSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) == d})

    def drop_degree(self, d):
        return CyclicSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) != d})

    def truncate(self, d):
        return CyclicSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) <= d})

    def coeff(self, w) -> Fraction:
        if isinstance(w, str):
            w = self.ctx.parse_word(w)
        return self.terms.get(canonical(tuple(w)), Fraction(0))

    def __repr__(self):
        return f"Cyclic({format_terms(self.ctx, self.terms)})"


class OneVarSeries:
    """Power series in one variable u with terms of degree >= 2."""

    __slots__ = ("max_degree", "coeffs")

    def __init__(self, max_degree: int, coeffs: Mapping | None = None):
        self.max_degree = max_degree
        self.coeffs = {int(k): Fraction(v) for k, v in (coeffs or {}).items()
                       if v and 2 <= int(k) <= max_degree}

    def __eq__(self, other):
        return isinstance(other, OneVarSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        _addto(out, other.coeffs)
        return OneVarSeries(min(self.max_degree, other.max_degree), out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return OneVarSeries(self.max_degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.coeffs

    def __repr__(self):
        return "OneVar(" + " + ".join(f"{v}*u^{k}" for k, v in sorted(self.coeffs.items())) + ")" if self.coeffs else "OneVar(0)"


def trace(a) -> CyclicSeries:
    return CyclicSeries(a.ctx, {w: c for w, c in a.terms.items() if w})


def tder_act_cyc(u: TangentialDerivation, w: CyclicSeries) -> CyclicSeries:
    if u.n != w.ctx.n:
        raise SeriesError("arity mismatch")
    return CyclicSeries(w.ctx, _leibniz(u.comps, w.terms, w.ctx.max_degree))


def divergence(u: TangentialDerivation, max_degree: int | None = None) -> CyclicSeries:
    """sum_k tr(x_k d_k a_k): keep words of a_k ending in x_k, move that x_k to the front."""
    N = u.ctx.max_degree if max_degree is None else max_degree
    out: dict = {}
    for k, a in enumerate(u.comps):
        for w, c in a.items():
            if w[-1] == k:
                key = (k,) + w[:-1]
                out[key] = out.get(key, 0) + c
    return CyclicSeries(u.ctx.with_degree(N), out)


def jacobian_of_derivation(u: TangentialDerivation) -> CyclicSeries:
    """J(exp u) = sum_m (u.)^m div(u) / (m+1)!."""
    term = divergence(u)
    total = term
    m = 0
    while not term.is_zero():
        m += 1
        term = tder_act_cyc(u, term) * Fraction(1, m + 1)
        total = total + term
    return total


def jacobian(g: TAutElement) -> CyclicSeries:
    return jacobian_of_derivation(taut_log(g))


def taut_act_cyc(g: TAutElement, w: CyclicSeries) -> CyclicSeries:
    """Group action on cyclic words: substitute x_i -> g(x_i)."""
    N = w.ctx.max_degree
    return CyclicSeries(w.ctx, substitute_terms(w.terms, g.images(N), N))


# ---------------------------------------------------------------- symmetric forms

def _power_terms(gen_terms: Mapping, k: int, N: int) -> dict:
    p = {(): Fraction(1)}
    for _ in range(k):
        p = mul_terms(p, gen_terms, N)
    return p


def eval_symmetric(s: OneVarSeries, mode: str = "x+y", ctx: TruncationContext | None = None) -> CyclicSeries:
    """tr(s(x+y) - s(x) - s(y)); mode "bch" uses bch(x,y) in place of x+y."""
    ctx = ctx or TruncationContext(s.max_degree)
    if ctx.n != 2:
        raise SeriesError("eval_symmetric needs a two-letter context")
    N = ctx.max_degree
    if mode in ("x+y", "krv"):
        z = {(0,): Fraction(1), (1,): Fraction(1)}
    elif mode in ("bch", "kv"):
        z = bch(LieSeries.gen(ctx, 0), LieSeries.gen(ctx, 1)).terms
    else:
        raise SeriesError(f"unknown mode {mode!r}")
    out: dict = {}
    for k, c in s.coeffs.items():
        if k > N:
            continue
        _addto(out, _power_terms(z, k, N), c)
        out[(0,) * k] = out.get((0,) * k, 0) - c
        out[(1,) * k] = out.get((1,) * k, 0) - c
    return CyclicSeries(ctx, _clean(out))


def solve_duflo(j: CyclicSeries, mode: str = "x+y") -> OneVarSeries:
    """The unique s with eval_symmetric(s) = j.  One unknown per degree; the
    remaining cyclic classes are consistency constraints."""
    ctx = j.ctx
    if ctx.n != 2:
        raise SeriesError("solve_duflo needs a two-letter context")
    N = ctx.max_degree
    s: dict = {}
    if mode in ("bch", "kv"):
        # lower s_k leak into higher degrees through bch; peel degree by degree
        rem = j
        for d in range(1, N + 1):
            part = rem.degree_part(d)
            if d == 1:
                if not part.is_zero():
                    w = min(part.terms)
                    raise NotInImage(1, ctx.word_str(w), part.terms[w])
                continue
            val = part.coeff((0,) * (d - 1) + (1,)) / d
            s[d] = val
            rem = rem - eval_symmetric(OneVarSeries(N, {d: val}), mode, ctx)
            left = rem.degree_part(d)
            if not left.is_zero():
                w = min(left.terms)
                raise NotInImage(d, ctx.word_str(w), left.terms[w])
        return OneVarSeries(N, s)
    for d in range(1, N + 1):
        part = j.degree_part(d)
        if d == 1:
            if not part.is_zero():
                w = min(part.terms)
                raise NotInImage(1, ctx.word_str(w), part.terms[w])
            continue
        val = part.coeff((0,) * (d - 1) + (1,)) / d
        s[d] = val
        diff = part - eval_symmetric(OneVarSeries(N, {d: val}), mode, ctx).degree_part(d)
        if not diff.is_zero():
            w = min(diff.terms)
            raise NotInImage(d, ctx.word_str(w), diff.terms[w])
    return OneVarSeries(N, s)


# ---------------------------------------------------------------- JSON

def cyclic_to_json(w: CyclicSeries) -> dict:
    return {"kind": "cyclic", "generators": list(w.ctx.alphabet), "max_degree": w.ctx.max_degree,
            "terms": terms_json(w.ctx, w.terms)}


def cyclic_from_json(obj: Mapping, ctx: TruncationContext | None = None) -> CyclicSeries:
    if ctx is None:
        ctx = TruncationContext(int(obj.get("max_degree", 6)), tuple(obj.get("generators", ("x", "y"))))
    terms: dict = {}
    for t in obj.get("terms", []):
        w = ctx.parse_word(t["word"])
        terms[w] = terms.get(w, 0) + parse_coeff(t["coeff"])
    return CyclicSeries(ctx, terms)


def onevar_to_json(s: OneVarSeries) -> dict:
    return {"kind": "onevar", "coeffs": {str(k): str(v) for k, v in sorted(s.coeffs.items())}}


def onevar_from_json(obj: Mapping, max_degree: int = 6) -> OneVarSeries:
    if obj.get("kind", "onevar") != "onevar":
        raise SeriesError("expected a onevar series")
    try:
        coeffs = {int(k): parse_coeff(v) for k, v in obj.get("coeffs", {}).items()}
    except ValueError as e:
        raise SeriesError(f"bad onevar series: {e}") from e
    return OneVarSeries(max_degree, coeffs)
