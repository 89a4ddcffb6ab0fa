"""Tangential derivations of a free Lie algebra and their exponentials.

A derivation u = (a_1, ..., a_n) acts by x_i -> [x_i, a_i].  The degree of
u is the word length of its components; its action on generators lands in
length degree + 1.  Group elements are stored by conjugators f_i with
x_i -> f_i^{-1} x_i f_i, normalized so log f_i has no x_i term.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .freeseries import (AssocSeries, LieSeries, SeriesError, TruncationContext,
                         _clean, bch_in, commutator_terms, mul_terms,
                         series_from_json, series_to_json, substitute_terms)


def _addto(out: dict, terms: Mapping, f=1):
    for w, c in terms.items():
        nv = out.get(w, 0) + f * c
        if nv:
            out[w] = nv
        else:
            out.pop(w, None)


def _check_n(u, v):
    if u.n != v.n:
        raise SeriesError(f"arity mismatch: {u.n} vs {v.n}")


class TangentialDerivation:
    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: TruncationContext, comps: Sequence):
        N = ctx.max_degree
        cs = []
        for i, c in enumerate(comps):
            t = c.terms if isinstance(c, LieSeries) else dict(c)
            t = {w: Fraction(v) for w, v in t.items() if v and 1 <= len(w) <= N and w != (i,)}
            cs.append(t)
        if len(cs) != ctx.n:
            raise SeriesError("need one component per generator")
        self.ctx = ctx
        self.comps = tuple(cs)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [{}] * ctx.n)

    @property
    def n(self):
        return self.ctx.n

    def component(self, i: int) -> LieSeries:
        return LieSeries(self.ctx, self.comps[i])

    def is_zero(self):
        return not any(self.comps)

    def min_degree(self):
        return min((len(w) for c in self.comps for w in c), default=self.ctx.max_degree + 1)

    def degree_part(self, d):
        return TangentialDerivation(self.ctx, [{w: c for w, c in t.items() if len(w) == d} for t in self.comps])

    def truncate(self, d):
        return TangentialDerivation(self.ctx, [{w: c for w, c in t.items() if len(w) <= d} for t in self.comps])

    def __eq__(self, other):
        return isinstance(other, TangentialDerivation) and self.comps == other.comps

    def __hash__(self):
        return hash(tuple(frozenset(c.items()) for c in self.comps))

    def __add__(self, other):
        _check_n(self, other)
        out = []
        for a, b in zip(self.comps, other.comps):
            d = dict(a)
            _addto(d, b)
            out.append(d)
        return TangentialDerivation(self.ctx, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return TangentialDerivation(self.ctx, [{w: c * v for w, v in t.items()} if c else {} for t in self.comps])

    __rmul__ = __mul__

    def __repr__(self):
        return "TDer(" + ", ".join(repr(self.component(i)) for i in range(self.n)) + ")"


def _leibniz(u_comps: Sequence[Mapping], terms: Mapping, N: int) -> dict:
    """Apply the derivation x_j -> [x_j, a_j] to a word dict, truncated at N."""
    gens = {}
    for j, a in enumerate(u_comps):
        if a:
            d = commutator_terms({(j,): Fraction(1)}, a, N)
            byd: dict = {}
            for w, c in d.items():
                byd.setdefault(len(w), []).append((w, c))
            gens[j] = sorted(byd.items())
    out: dict = {}
    for w, c in terms.items():
        room = N - len(w) + 1
        for p, j in enumerate(w):
            g = gens.get(j)
            if not g:
                continue
            pre, post = w[:p], w[p + 1:]
            for d, items in g:
                if d > room:
                    break
                for v, b in items:
                    k = pre + v + post
                    out[k] = out.get(k, 0) + c * b
    return _clean(out)


def apply_derivation(u: TangentialDerivation, a):
    """Derivation action on a Lie or associative series (truncated in a's ctx)."""
    if a.ctx.n != u.n:
        raise SeriesError("arity mismatch")
    terms = _leibniz(u.comps, a.terms, a.ctx.max_degree)
    return type(a)(a.ctx, terms)


def tder_bracket(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    _check_n(u, v)
    N = min(u.ctx.max_degree, v.ctx.max_degree)
    out = []
    for i in range(u.n):
        d = _leibniz(u.comps, v.comps[i], N)
        _addto(d, _leibniz(v.comps, u.comps[i], N), -1)
        _addto(d, commutator_terms(u.comps[i], v.comps[i], N))
        out.append(d)
    return TangentialDerivation(u.ctx.with_degree(N), out)


def tder_bch(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    N = u.ctx.max_degree
    return bch_in(u, v, tder_bracket, TangentialDerivation.zero(u.ctx),
                  u.min_degree(), v.min_degree(), N)


def action_on_generators(u: TangentialDerivation, M: int) -> list:
    """e^u(x_i) for each i, truncated at length M."""
    out = []
    for i in range(u.n):
        term = {(i,): Fraction(1)}
        total = dict(term)
        k = 0
        while term:
            k += 1
            term = _leibniz(u.comps, term, M)
            term = {w: c / k for w, c in term.items()}
            _addto(total, term)
        out.append(total)
    return out


def t_ij(n: int, i: int, j: int, max_degree: int = 6) -> TangentialDerivation:
    if i == j:
        raise SeriesError("t_ij needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise SeriesError("strand index out of range")
    ctx = TruncationContext.letters(n, max_degree)
    comps = [{} for _ in range(n)]
    comps[i - 1] = {(j - 1,): Fraction(1)}
    comps[j - 1] = {(i - 1,): Fraction(1)}
    return TangentialDerivation(ctx, comps)


def is_special(u: TangentialDerivation) -> bool:
    M = u.ctx.max_degree + 1
    s = {(i,): Fraction(1) for i in range(u.n)}
    return not _leibniz(u.comps, s, M)


# ---------------------------------------------------------------- group

def _x_power_exp(i: int, c: Fraction, N: int) -> dict:
    out = {(): Fraction(1)}
    term = Fraction(1)
    for k in range(1, N + 1):
        term = term * c / k
        out[(i,) * k] = term
    return _clean(out)


def _normalize_conj(f: dict, i: int, N: int) -> dict:
    c = f.get((i,), 0)
    if not c:
        return f
    return mul_terms(_x_power_exp(i, -c, N), f, N)


class TAutElement:
    __slots__ = ("ctx", "conj")

    def __init__(self, ctx: TruncationContext, conjugators: Sequence, normalize: bool = True):
        N = ctx.max_degree
        cs = []
        for i, f in enumerate(conjugators):
            t = f.terms if isinstance(f, AssocSeries) else dict(f)
            t = {w: Fraction(v) for w, v in t.items() if v and len(w) <= N}
            if t.get((), 0) != 1:
                raise SeriesError("conjugators need constant term 1")
            cs.append(_normalize_conj(t, i, N) if normalize else t)
        if len(cs) != ctx.n:
            raise SeriesError("need one conjugator per generator")
        self.ctx = ctx
        self.conj = tuple(cs)

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, [{(): Fraction(1)}] * ctx.n)

    @property
    def n(self):
        return self.ctx.n

    def conjugator(self, i) -> AssocSeries:
        return AssocSeries(self.ctx, self.conj[i], group_like=True)

    def __eq__(self, other):
        return isinstance(other, TAutElement) and self.conj == other.conj

    def __hash__(self):
        return hash(tuple(frozenset(c.items()) for c in self.conj))

    def __repr__(self):
        return "TAut(" + ", ".join(repr(self.conjugator(i)) for i in range(self.n)) + ")"

    def images(self, M: int) -> list:
        """g(x_i) = f_i^{-1} x_i f_i truncated at length M."""
        out = []
        for i, f in enumerate(self.conj):
            finv = _inverse_terms(f, M)
            out.append(mul_terms(mul_terms(finv, {(i,): Fraction(1)}, M), f, M))
        return out


def _inverse_terms(f: Mapping, M: int) -> dict:
    u = {w: c for w, c in f.items() if w}
    out = {(): Fraction(1)}
    p = {(): Fraction(1)}
    sign = 1
    while True:
        p = mul_terms(p, u, M)
        if not p:
            break
        sign = -sign
        _addto(out, p, sign)
    return out


def taut_apply(g: TAutElement, a):
    """Automorphism action on a Lie or associative series (truncated in a's ctx)."""
    if a.ctx.n != g.n:
        raise SeriesError("arity mismatch")
    M = a.ctx.max_degree
    return type(a)(a.ctx, substitute_terms(a.terms, g.images(M), M))


def taut_compose(g: TAutElement, h: TAutElement) -> TAutElement:
    """(g o h)(x) = g(h(x)); conjugators f^g_i * g(f^h_i)."""
    _check_n(g, h)
    N = min(g.ctx.max_degree, h.ctx.max_degree)
    imgs = g.images(N)
    out = []
    for fg, fh in zip(g.conj, h.conj):
        out.append(mul_terms(fg, substitute_terms(fh, imgs, N), N))
    return TAutElement(g.ctx.with_degree(N), out)


def solve_ad(i: int, R: Mapping) -> dict:
    """Some phi with [x_i, phi] = R (R homogeneous, in the image of ad x_i);
    phi = sum_k L^{k+1}(R) x_i^k where L strips a leading x_i."""
    out: dict = {}
    cur = dict(R)
    k = 0
    while cur:
        cur = {w[1:]: c for w, c in cur.items() if w and w[0] == i}
        for w, c in cur.items():
            key = w + (i,) * k
            out[key] = out.get(key, 0) + c
        k += 1
    return _clean(out)


def conjugator_from_action(i: int, T: Mapping, N: int) -> dict:
    """Normalized f with f^{-1} x_i f = T, degree by degree up to N.
    Uses x f = f T, i.e. [x_i, f_d] = sum_{j<d} f_j T_{d+1-j}."""
    Tby: dict = {}
    for w, c in T.items():
        Tby.setdefault(len(w), {})[w] = c
    fs = [{(): Fraction(1)}]
    for d in range(1, N + 1):
        R: dict = {}
        for j in range(d):
            Tk = Tby.get(d + 1 - j)
            if Tk and fs[j]:
                _addto(R, mul_terms(fs[j], Tk, d + 1))
        phi = solve_ad(i, R)
        phi.pop((i,) * d, None)
        fs.append(phi)
    out: dict = {}
    for f in fs:
        out.update(f)
    return _clean(out)


def taut_exp(u: TangentialDerivation) -> TAutElement:
    N = u.ctx.max_degree
    acts = action_on_generators(u, N + 1)
    return TAutElement(u.ctx, [conjugator_from_action(i, acts[i], N) for i in range(u.n)])


def from_action(ctx: TruncationContext, actions: Sequence[Mapping]) -> TAutElement:
    """Group element from its action on generators (known to length N+1)."""
    N = ctx.max_degree
    return TAutElement(ctx, [conjugator_from_action(i, a, N) for i, a in enumerate(actions)])


def taut_log(g: TAutElement) -> TangentialDerivation:
    """Degree by degree: the lowest nonvanishing part of the conjugators of
    exp(-u) o g is the next correction to u."""
    N = g.ctx.max_degree
    u = TangentialDerivation.zero(g.ctx)
    h = g
    for d in range(1, N + 1):
        part = [{w: c for w, c in f.items() if len(w) == d} for f in h.conj]
        if any(part):
            u = u + TangentialDerivation(g.ctx, part)
            h = taut_compose(taut_exp(-u), g)
    return u


def taut_inverse(g: TAutElement) -> TAutElement:
    return taut_exp(-taut_log(g))


# ---------------------------------------------------------------- strands

def _kill_letter(terms: Mapping, e: int) -> dict:
    return {w: c for w, c in terms.items() if e not in w}


def puncture(obj, e: int):
    """Kill every occurrence of the letter x_e (strand e, 1-indexed)."""
    if not 1 <= e <= obj.n:
        raise SeriesError(f"strand {e} out of range")
    k = e - 1
    if isinstance(obj, TangentialDerivation):
        return TangentialDerivation(obj.ctx, [_kill_letter(c, k) for c in obj.comps])
    return TAutElement(obj.ctx, [_kill_letter(c, k) for c in obj.conj])


def relabel_terms(terms: Mapping, tails: Mapping) -> dict:
    """Letter substitution x_old -> sum of x_new over tails[old] (0-indexed);
    letters absent from `tails` are sent to zero."""
    images = {}
    for old, new in tails.items():
        new = (new,) if isinstance(new, int) else tuple(new)
        images[old] = {(t,): Fraction(1) for t in new}
    out: dict = {}
    for w, c in terms.items():
        acc = {(): c}
        for a in w:
            img = images.get(a)
            if not img:
                acc = {}
                break
            acc = {p + v: x * y for p, x in acc.items() for v, y in img.items()}
        _addto(out, acc)
    return out


def strand_map(obj, relabeling: Mapping, new_n: int, tails: Mapping | None = None):
    """Rename strands (1-indexed).  `relabeling` moves head components;
    `tails` (default: same map) moves letters, where a letter may go to
    several new strands (its image is their sum).  Letters of unmapped
    strands are sent to zero; unmapped components must be trivial."""
    tails = relabeling if tails is None else tails
    tl = {o - 1: ((n - 1,) if isinstance(n, int) else tuple(t - 1 for t in n)) for o, n in tails.items()}
    ctx = TruncationContext.letters(new_n, obj.ctx.max_degree)
    is_der = isinstance(obj, TangentialDerivation)
    items = obj.comps if is_der else obj.conj
    trivial = {} if is_der else {(): Fraction(1)}
    out = [dict(trivial) for _ in range(new_n)]
    filled = set()
    for old, t in enumerate(items):
        img = relabel_terms(t, tl)
        if (old + 1) not in relabeling:
            if img != trivial:
                raise SeriesError(f"component on unmapped strand {old + 1} is nontrivial")
            continue
        new = relabeling[old + 1] - 1
        if img == trivial:
            continue
        if new in filled:
            raise SeriesError(f"inconsistent merge onto strand {new + 1}")
        filled.add(new)
        out[new] = img
    if is_der:
        return TangentialDerivation(ctx, out)
    return TAutElement(ctx, out)


# ---------------------------------------------------------------- JSON

def tder_to_json(u: TangentialDerivation) -> dict:
    return {"n": u.n, "components": [series_to_json(u.component(i)) for i in range(u.n)]}


def tder_from_json(obj: Mapping, max_degree: int | None = None) -> TangentialDerivation:
    comps = [series_from_json(c, max_degree) for c in obj["components"]]
    if len(comps) != int(obj["n"]):
        raise SeriesError("component count does not match n")
    if not comps:
        raise SeriesError("empty derivation")
    return TangentialDerivation(comps[0].ctx, comps)


def taut_to_json(g: TAutElement) -> dict:
    return {"n": g.n, "conjugators": [series_to_json(g.conjugator(i)) for i in range(g.n)]}


def taut_from_json(obj: Mapping, max_degree: int | None = None) -> TAutElement:
    cs = [series_from_json(c, max_degree) for c in obj["conjugators"]]
    if len(cs) != int(obj["n"]) or not cs:
        raise SeriesError("conjugator count does not match n")
    return TAutElement(cs[0].ctx, cs)
