"""Truncated free associative and free Lie series over the rationals.

Words are tuples of generator indices.  An associative series is a sparse
dict word -> Fraction; a Lie series keeps the same associative expansion
(the enveloping-algebra image) and exposes Lyndon coordinates on demand.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Mapping, Sequence

Word = tuple


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncationContext:
    max_degree: int
    alphabet: tuple = ("x", "y")

    def __post_init__(self):
        if self.max_degree < 1:
            raise SeriesError("max_degree must be >= 1")
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise SeriesError("alphabet must be nonempty with distinct names")
        object.__setattr__(self, "alphabet", tuple(self.alphabet))

    @classmethod
    def letters(cls, n: int, max_degree: int) -> "TruncationContext":
        if n == 2:
            return cls(max_degree, ("x", "y"))
        return cls(max_degree, tuple(f"x{i}" for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.alphabet)

    def with_degree(self, d: int) -> "TruncationContext":
        return TruncationContext(d, self.alphabet)

    def word_str(self, w: Word) -> str:
        return "".join(self.alphabet[i] for i in w)

    def parse_word(self, s: str) -> Word:
        # greedy longest-match tokenizer, names may be multi-character
        names = sorted(enumerate(self.alphabet), key=lambda t: -len(t[1]))
        out, pos = [], 0
        while pos < len(s):
            for i, name in names:
                if s.startswith(name, pos):
                    out.append(i)
                    pos += len(name)
                    break
            else:
                raise SeriesError(f"cannot parse word {s!r} at position {pos}")
        return tuple(out)


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _fr(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


# ---------------------------------------------------------------- words

def is_lyndon(w: Word) -> bool:
    n = len(w)
    return n > 0 and all(w < w[i:] + w[:i] for i in range(1, n))


def lyndon_words(k: int, degree: int) -> list:
    """Lyndon words of a given length over k letters in lexicographic order
    (Duval's generator, filtered to the requested length)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == degree:
            out.append(tuple(w))
        while len(w) < degree:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def lyndon_basis(ctx: TruncationContext, degree: int) -> list:
    if not 1 <= degree <= ctx.max_degree:
        raise SeriesError(f"degree {degree} outside 1..{ctx.max_degree}")
    return lyndon_words(ctx.n, degree)


@lru_cache(maxsize=None)
def standard_factor(w: Word) -> tuple:
    # w = uv with v the longest proper Lyndon suffix
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise SeriesError("single letters have no factorization")


@lru_cache(maxsize=None)
def standard_bracket(w: Word) -> dict:
    """Associative expansion of the standard bracketing of a Lyndon word."""
    if len(w) == 1:
        return {w: Fraction(1)}
    u, v = standard_factor(w)
    a, b = standard_bracket(u), standard_bracket(v)
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            c = ca * cb
            out[wa + wb] = out.get(wa + wb, 0) + c
            out[wb + wa] = out.get(wb + wa, 0) - c
    return _clean(out)


@lru_cache(maxsize=None)
def left_bracket(w: Word) -> dict:
    """Expansion of [..[[a1,a2],a3]..,ad]."""
    if len(w) == 1:
        return {w: Fraction(1)}
    prev = left_bracket(w[:-1])
    a = w[-1:]
    out: dict = {}
    for u, c in prev.items():
        out[u + a] = out.get(u + a, 0) + c
        out[a + u] = out.get(a + u, 0) - c
    return _clean(out)


def to_lyndon(terms: Mapping) -> dict:
    """Lyndon coordinates of an associative Lie element by triangular
    elimination: the smallest surviving word is always the leading word of
    its standard bracketing."""
    work = dict(terms)
    heap = list(work)
    heapq.heapify(heap)
    out = {}
    while heap:
        w = heapq.heappop(heap)
        c = work.pop(w, 0)
        if not c:
            continue
        if not is_lyndon(w):
            raise SeriesError(f"not a Lie element (leading word {w})")
        out[w] = c
        for v, b in standard_bracket(w).items():
            if v == w:
                continue
            nv = work.get(v, 0) - c * b
            if v not in work:
                heapq.heappush(heap, v)
            if nv:
                work[v] = nv
            else:
                work.pop(v, None)
    return out


# ---------------------------------------------------------------- assoc

class AssocSeries:
    __slots__ = ("ctx", "terms", "group_like")

    def __init__(self, ctx: TruncationContext, terms: Mapping | None = None, group_like: bool = False):
        N = ctx.max_degree
        self.ctx = ctx
        self.terms = {w: _fr(c) for w, c in (terms or {}).items() if c and len(w) <= N}
        self.group_like = group_like

    @classmethod
    def one(cls, ctx):
        return cls(ctx, {(): Fraction(1)})

    @classmethod
    def gen(cls, ctx, i: int):
        return cls(ctx, {(i,): Fraction(1)})

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def degree_part(self, d: int) -> "AssocSeries":
        return AssocSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) == d})

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=self.ctx.max_degree + 1)

    def truncate(self, d: int) -> "AssocSeries":
        return AssocSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) <= d})

    def in_ctx(self, ctx: TruncationContext) -> "AssocSeries":
        return AssocSeries(ctx, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, AssocSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"AssocSeries({format_terms(self.ctx, self.terms)})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, AssocSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = lambda self, c: scale(self, c)


def _check_ctx(a, b):
    if a.ctx.alphabet != b.ctx.alphabet:
        raise SeriesError("context mismatch")


def add(a: AssocSeries, b: AssocSeries) -> AssocSeries:
    _check_ctx(a, b)
    out = dict(a.terms)
    for w, c in b.terms.items():
        out[w] = out.get(w, 0) + c
    return AssocSeries(a.ctx if a.ctx.max_degree <= b.ctx.max_degree else b.ctx, out)


def scale(a: AssocSeries, c) -> AssocSeries:
    c = _fr(c)
    return AssocSeries(a.ctx, {w: c * v for w, v in a.terms.items()} if c else {})


def _by_degree(terms: Mapping) -> dict:
    out: dict = {}
    for w, c in terms.items():
        out.setdefault(len(w), []).append((w, c))
    return out


def mul_terms(a: Mapping, b: Mapping, N: int) -> dict:
    out: dict = {}
    bd = _by_degree(b)
    for wa, ca in a.items():
        room = N - len(wa)
        for d, items in bd.items():
            if d > room:
                continue
            for wb, cb in items:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return _clean(out)


def mul(a: AssocSeries, b: AssocSeries) -> AssocSeries:
    _check_ctx(a, b)
    N = min(a.ctx.max_degree, b.ctx.max_degree)
    return AssocSeries(a.ctx.with_degree(N), mul_terms(a.terms, b.terms, N))


def _power_series(a: AssocSeries, coeffs: Callable[[int], Fraction]) -> AssocSeries:
    # sum_k coeffs(k) a^k for a with zero constant term
    N = a.ctx.max_degree
    out = {(): coeffs(0)} if coeffs(0) else {}
    p = {(): Fraction(1)}
    k = 0
    while True:
        k += 1
        p = mul_terms(p, a.terms, N)
        if not p:
            break
        c = coeffs(k)
        if c:
            for w, v in p.items():
                out[w] = out.get(w, 0) + c * v
    return AssocSeries(a.ctx, out)


def exp(a: AssocSeries) -> AssocSeries:
    if a.constant():
        raise SeriesError("exp needs zero constant term")
    r = _power_series(a, lambda k: Fraction(1, factorial(k)))
    r.group_like = True
    return r


def log(a: AssocSeries) -> AssocSeries:
    if a.constant() != 1:
        raise SeriesError("log needs constant term 1")
    u = a - AssocSeries.one(a.ctx)
    return _power_series(u, lambda k: Fraction((-1) ** (k + 1), k) if k else Fraction(0))


def inverse(a: AssocSeries) -> AssocSeries:
    if a.constant() != 1:
        raise SeriesError("inverse needs constant term 1")
    u = a - AssocSeries.one(a.ctx)
    return _power_series(u, lambda k: Fraction((-1) ** k))


def partial_k(a: AssocSeries, k: int) -> AssocSeries:
    if not 0 <= k < a.ctx.n:
        raise SeriesError(f"generator index {k} out of range")
    return AssocSeries(a.ctx, {w[:-1]: c for w, c in a.terms.items() if w and w[-1] == k})


# ---------------------------------------------------------------- lie

class LieSeries:
    """A Lie series, stored through its associative expansion."""

    __slots__ = ("ctx", "terms", "_lyndon")

    def __init__(self, ctx: TruncationContext, terms: Mapping | None = None):
        N = ctx.max_degree
        self.ctx = ctx
        self.terms = {w: _fr(c) for w, c in (terms or {}).items() if c and len(w) <= N}
        self._lyndon = None

    @classmethod
    def from_lyndon(cls, ctx, coeffs: Mapping) -> "LieSeries":
        out: dict = {}
        for w, c in coeffs.items():
            if not is_lyndon(w):
                raise SeriesError(f"{w} is not a Lyndon word")
            if len(w) > ctx.max_degree:
                continue
            for v, b in standard_bracket(w).items():
                out[v] = out.get(v, 0) + _fr(c) * b
        return cls(ctx, _clean(out))

    @classmethod
    def gen(cls, ctx, i: int) -> "LieSeries":
        return cls(ctx, {(i,): Fraction(1)})

    @classmethod
    def zero(cls, ctx) -> "LieSeries":
        return cls(ctx)

    def lyndon(self) -> dict:
        if self._lyndon is None:
            self._lyndon = to_lyndon(self.terms)
        return self._lyndon

    def coeff(self, w) -> Fraction:
        if isinstance(w, str):
            w = self.ctx.parse_word(w)
        return self.lyndon().get(tuple(w), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=self.ctx.max_degree + 1)

    def degree_part(self, d: int) -> "LieSeries":
        return LieSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) == d})

    def truncate(self, d: int) -> "LieSeries":
        return LieSeries(self.ctx, {w: c for w, c in self.terms.items() if len(w) <= d})

    def in_ctx(self, ctx) -> "LieSeries":
        return LieSeries(ctx, self.terms)

    def assoc(self) -> AssocSeries:
        return AssocSeries(self.ctx, self.terms)

    def __eq__(self, other):
        return isinstance(other, LieSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LieSeries({format_terms(self.ctx, self.lyndon())})"

    def __add__(self, other):
        _check_ctx(self, other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        ctx = self.ctx if self.ctx.max_degree <= other.ctx.max_degree else other.ctx
        return LieSeries(ctx, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = _fr(c)
        return LieSeries(self.ctx, {w: c * v for w, v in self.terms.items()} if c else {})

    __rmul__ = __mul__


def commutator_terms(a: Mapping, b: Mapping, N: int) -> dict:
    out = mul_terms(a, b, N)
    for w, c in mul_terms(b, a, N).items():
        out[w] = out.get(w, 0) - c
    return _clean(out)


def bracket(a: LieSeries, b: LieSeries) -> LieSeries:
    _check_ctx(a, b)
    N = min(a.ctx.max_degree, b.ctx.max_degree)
    return LieSeries(a.ctx.with_degree(N), commutator_terms(a.terms, b.terms, N))


def embed(a: LieSeries) -> AssocSeries:
    return a.assoc()


def lie_project(a: AssocSeries) -> LieSeries:
    if a.constant():
        raise SeriesError("lie_project needs zero constant term")
    out: dict = {}
    for w, c in a.terms.items():
        f = c / len(w)
        for v, b in left_bracket(w).items():
            out[v] = out.get(v, 0) + f * b
    return LieSeries(a.ctx, _clean(out))


def is_lie(a: AssocSeries) -> bool:
    if a.constant():
        return False
    return lie_project(a).terms == a.terms


def lie_exp(a: LieSeries) -> AssocSeries:
    return exp(a.assoc())


def lie_log(a: AssocSeries) -> LieSeries:
    return lie_project(log(a))


def bch(a: LieSeries, b: LieSeries) -> LieSeries:
    return lie_project(log(mul(exp(a.assoc()), exp(b.assoc()))))


# ---------------------------------------------------------------- substitution

def substitute_terms(terms: Mapping, images: Sequence[Mapping], N: int) -> dict:
    """Algebra homomorphism on word dicts, memoized along word prefixes."""
    cache = {(): {(): Fraction(1)}}

    def prefix(w):
        r = cache.get(w)
        if r is None:
            img = images[w[-1]]
            if img is None:
                raise SeriesError(f"missing image for generator {w[-1]}")
            r = mul_terms(prefix(w[:-1]), img, N)
            cache[w] = r
        return r

    out: dict = {}
    for w, c in sorted(terms.items(), key=lambda t: t[0]):
        for v, b in prefix(w).items():
            out[v] = out.get(v, 0) + c * b
    return _clean(out)


def _images_list(src_ctx, images) -> list:
    if isinstance(images, Mapping):
        out = []
        for name in src_ctx.alphabet:
            out.append(images.get(name))
        return out
    return list(images)


def substitute(a, images, target: TruncationContext | None = None):
    """Homomorphism determined by generator images (Lie or assoc series
    with zero constant term).  `images` maps generator names (or is a list
    indexed by generator)."""
    imgs = _images_list(a.ctx, images)
    given = [im for im in imgs if im is not None]
    if target is None:
        if not given:
            raise SeriesError("no images given")
        target = given[0].ctx.with_degree(a.ctx.max_degree)
    raw = []
    for im in imgs:
        if im is None:
            raw.append(None)
            continue
        t = im.terms
        if t.get((), 0):
            raise SeriesError("images must have zero constant term")
        raw.append(t)
    used = {i for w in a.terms for i in w}
    for i in used:
        if raw[i] is None:
            raise SeriesError(f"missing image for generator {a.ctx.alphabet[i]}")
    terms = substitute_terms(a.terms, raw, target.max_degree)
    if isinstance(a, LieSeries):
        return LieSeries(target, terms)
    return AssocSeries(target, terms)


# ---------------------------------------------------------------- generic Lie evaluation

def lie_eval(coeffs: Mapping, images: Sequence, bracket_fn: Callable, zero,
             weights: Sequence[int], limit: int):
    """Evaluate a Lie polynomial given in Lyndon coordinates at elements of
    any Lie algebra.  `weights` are lower bounds on the degree of each image;
    words whose weight exceeds `limit` are skipped."""
    memo: dict = {}

    def P(w):
        r = memo.get(w)
        if r is None:
            if len(w) == 1:
                r = images[w[0]]
            else:
                u, v = standard_factor(w)
                r = bracket_fn(P(u), P(v))
            memo[w] = r
        return r

    total = zero
    for w in sorted(coeffs, key=lambda w: (len(w), w)):
        if sum(weights[i] for i in w) > limit:
            continue
        total = total + P(w) * coeffs[w]
    return total


@lru_cache(maxsize=None)
def bch_coefficients(K: int) -> dict:
    ctx = TruncationContext(K)
    return bch(LieSeries.gen(ctx, 0), LieSeries.gen(ctx, 1)).lyndon()


def bch_in(X, Y, bracket_fn: Callable, zero, wx: int, wy: int, limit: int):
    """bch(X, Y) in an arbitrary graded Lie algebra."""
    if wx > limit:
        return Y
    if wy > limit:
        return X
    K = max(1, limit // min(wx, wy))
    return lie_eval(bch_coefficients(max(K, 2)), [X, Y], bracket_fn, zero, [wx, wy], limit)


# ---------------------------------------------------------------- formatting / JSON

def format_terms(ctx, terms: Mapping) -> str:
    if not terms:
        return "0"
    items = sorted(terms.items(), key=lambda t: (len(t[0]), t[0]))
    return " + ".join(f"{c}*{ctx.word_str(w) or '1'}" for w, c in items)


def terms_json(ctx, terms: Mapping) -> list:
    items = sorted(terms.items(), key=lambda t: (len(t[0]), t[0]))
    return [{"word": ctx.word_str(w), "coeff": str(c)} for w, c in items]


def series_to_json(a) -> dict:
    kind = "lie" if isinstance(a, LieSeries) else "assoc"
    terms = a.lyndon() if kind == "lie" else a.terms
    return {"generators": list(a.ctx.alphabet), "max_degree": a.ctx.max_degree,
            "kind": kind, "terms": terms_json(a.ctx, terms)}


def parse_coeff(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise SeriesError(f"bad coefficient {s!r}") from e


def series_from_json(obj: Mapping, max_degree: int | None = None):
    try:
        gens = tuple(obj["generators"])
        N = int(obj["max_degree"]) if max_degree is None else max_degree
        kind = obj.get("kind", "lie")
        ctx = TruncationContext(N, gens)
        coeffs = {}
        for i, t in enumerate(obj.get("terms", [])):
            try:
                w = ctx.parse_word(t["word"])
                coeffs[w] = coeffs.get(w, 0) + parse_coeff(t["coeff"])
            except (KeyError, SeriesError) as e:
                raise SeriesError(f"term {i}: {e}") from e
    except (KeyError, TypeError) as e:
        raise SeriesError(f"malformed series: missing {e}") from e
    if kind == "lie":
        return LieSeries.from_lyndon(ctx, coeffs)
    if kind == "assoc":
        return AssocSeries(ctx, coeffs)
    raise SeriesError(f"unknown kind {kind!r}")
