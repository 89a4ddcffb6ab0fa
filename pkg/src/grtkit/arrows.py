"""Arrow diagrams through the algebraic model cyc_n x| (tder_n + a_n).

A primitive is a triple (tree, short, wheels).  Trees enter through the
section l (heads below tails), short arrows are central and act trivially
on wheels, wheels form an abelian ideal acted on by trees.  Group-like
elements are stored by their logarithm.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .cyc import CyclicSeries, cyclic_from_json, cyclic_to_json, jacobian_of_derivation, tder_act_cyc, trace
from .freeseries import SeriesError, TruncationContext, bch_in, parse_coeff
from .tder import (TangentialDerivation, relabel_terms, strand_map as tder_strand_map,
                   taut_exp, tder_bracket, tder_from_json, tder_to_json)


class ArrowPrimitive:
    __slots__ = ("tree", "short", "wheels")

    def __init__(self, tree: TangentialDerivation, short: Sequence | None = None,
                 wheels: CyclicSeries | None = None):
        n = tree.n
        self.tree = tree
        self.short = tuple(Fraction(c) for c in (short or [0] * n))
        self.wheels = wheels if wheels is not None else CyclicSeries(tree.ctx)
        if len(self.short) != n or self.wheels.ctx.n != n:
            raise SeriesError("arity mismatch inside primitive")

    @classmethod
    def zero(cls, ctx):
        return cls(TangentialDerivation.zero(ctx))

    @property
    def ctx(self):
        return self.tree.ctx

    @property
    def n(self):
        return self.tree.n

    def is_zero(self):
        return self.tree.is_zero() and not any(self.short) and self.wheels.is_zero()

    def min_degree(self):
        m = min(self.tree.min_degree(), self.wheels.min_degree())
        return 1 if any(self.short) else m

    def __add__(self, other):
        return ArrowPrimitive(self.tree + other.tree, [a + b for a, b in zip(self.short, other.short)],
                              self.wheels + other.wheels)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return ArrowPrimitive(self.tree * c, [c * a for a in self.short], self.wheels * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, ArrowPrimitive) and self.tree == other.tree
                and self.short == other.short and self.wheels == other.wheels)

    def __hash__(self):
        return hash((self.tree, self.short, self.wheels))

    def __repr__(self):
        return f"Primitive(tree={self.tree!r}, short={[str(c) for c in self.short]}, wheels={self.wheels!r})"


def ell(u: TangentialDerivation) -> ArrowPrimitive:
    return ArrowPrimitive(u)


def pr(p: ArrowPrimitive):
    """Projection to tder + a (wheels forgotten)."""
    return p.tree, p.short


def primitive_bracket(p: ArrowPrimitive, q: ArrowPrimitive) -> ArrowPrimitive:
    if p.n != q.n:
        raise SeriesError("arity mismatch")
    tree = tder_bracket(p.tree, q.tree)
    w = tder_act_cyc(p.tree, q.wheels) - tder_act_cyc(q.tree, p.wheels)
    return ArrowPrimitive(tree, None, w)


class GroupLikeArrow:
    __slots__ = ("log",)

    def __init__(self, log: ArrowPrimitive):
        self.log = log

    @classmethod
    def unit(cls, ctx):
        return cls(ArrowPrimitive.zero(ctx))

    @property
    def ctx(self):
        return self.log.ctx

    @property
    def n(self):
        return self.log.n

    def __eq__(self, other):
        return isinstance(other, GroupLikeArrow) and self.log == other.log

    def __hash__(self):
        return hash(self.log)

    def __repr__(self):
        return f"exp({self.log!r})"


def ell_exp(u: TangentialDerivation) -> GroupLikeArrow:
    return GroupLikeArrow(ell(u))


def wheel_exp(w: CyclicSeries, ctx: TruncationContext | None = None) -> GroupLikeArrow:
    ctx = ctx or w.ctx
    return GroupLikeArrow(ArrowPrimitive(TangentialDerivation.zero(ctx), None, w))


def short_exp(short: Sequence, ctx) -> GroupLikeArrow:
    return GroupLikeArrow(ArrowPrimitive(TangentialDerivation.zero(ctx), short))


def _bch(p: ArrowPrimitive, q: ArrowPrimitive) -> ArrowPrimitive:
    N = min(p.ctx.max_degree, q.ctx.max_degree)
    return bch_in(p, q, primitive_bracket, ArrowPrimitive.zero(p.ctx),
                  p.min_degree(), q.min_degree(), N)


def stack(*Gs: GroupLikeArrow) -> GroupLikeArrow:
    """Product G1 G2 ... (stacking order as written)."""
    acc = Gs[0].log
    for G in Gs[1:]:
        if G.n != acc.n:
            raise SeriesError("arity mismatch")
        acc = _bch(acc, G.log)
    return GroupLikeArrow(acc)


def arrow_inverse(G: GroupLikeArrow) -> GroupLikeArrow:
    return GroupLikeArrow(-G.log)


def tree_projection(G: GroupLikeArrow) -> GroupLikeArrow:
    p = G.log
    return GroupLikeArrow(ArrowPrimitive(p.tree, p.short))


def normal_form(G: GroupLikeArrow):
    """(w, T) with G = e^w T and T free of wheels.  The wheel part of
    bch(w, T) is w plus terms of higher degree in w, so fixed-point
    iteration settles within max_degree rounds."""
    T = ArrowPrimitive(G.log.tree, G.log.short)
    target = G.log.wheels
    w = target
    for _ in range(G.ctx.max_degree + 1):
        got = _bch(ArrowPrimitive(TangentialDerivation.zero(G.ctx), None, w), T).wheels
        diff = target - got
        if diff.is_zero():
            break
        w = w + diff
    return w, GroupLikeArrow(T)


def reassemble(w: CyclicSeries, T: GroupLikeArrow) -> GroupLikeArrow:
    return stack(wheel_exp(w, T.ctx), T)


def adjoint_all(G: GroupLikeArrow) -> GroupLikeArrow:
    """A(e^w e^{l(u)} e^a) = e^{-a} e^{-l(u)} e^{-J(exp u)} e^w."""
    w, T = normal_form(G)
    u, a = T.log.tree, T.log.short
    J = jacobian_of_derivation(u)
    return stack(short_exp([-c for c in a], G.ctx), ell_exp(-u), wheel_exp(w - J, G.ctx))


def gamma(G: GroupLikeArrow):
    return taut_exp(G.log.tree)


# ---------------------------------------------------------------- caps

class CapElement:
    """Wheel exponent on capped strands; degree-one wheels vanish."""

    __slots__ = ("wheels",)

    def __init__(self, wheels: CyclicSeries):
        self.wheels = wheels.drop_degree(1)

    @property
    def ctx(self):
        return self.wheels.ctx

    def __eq__(self, other):
        return isinstance(other, CapElement) and self.wheels == other.wheels

    def __hash__(self):
        return hash(self.wheels)

    def __sub__(self, other):
        return CapElement(self.wheels - other.wheels)

    def __add__(self, other):
        return CapElement(self.wheels + other.wheels)

    def is_zero(self):
        return self.wheels.is_zero()

    def __repr__(self):
        return f"Cap({self.wheels!r})"


def cap_from_onevar(c, n_ctx: TruncationContext | None = None) -> CapElement:
    """Cap value e^c on one strand, c a OneVarSeries."""
    ctx = n_ctx or TruncationContext(c.max_degree, ("x",))
    return CapElement(CyclicSeries(ctx, {(0,) * k: v for k, v in c.coeffs.items()}))


def cap_restrict(G: GroupLikeArrow) -> CapElement:
    w, _ = normal_form(G)
    return CapElement(w)


def omega(c: CapElement) -> dict:
    """Abelianize: each cyclic word goes to its letter-count monomial."""
    out: dict = {}
    n = c.ctx.n
    for w, v in c.wheels.terms.items():
        mono = tuple(w.count(i) for i in range(n))
        out[mono] = out.get(mono, 0) + v
    return {k: v for k, v in out.items() if v}


def sigma_trace(f) -> CapElement:
    return CapElement(trace(f))


def arrow_strand_map(G: GroupLikeArrow, relabeling: Mapping, new_n: int, tails: Mapping | None = None):
    tails = relabeling if tails is None else tails
    tree = tder_strand_map(G.log.tree, relabeling, new_n, tails)
    short = [Fraction(0)] * new_n
    for old, c in enumerate(G.log.short):
        if c:
            if (old + 1) not in relabeling:
                raise SeriesError("short arrow on unmapped strand")
            short[relabeling[old + 1] - 1] += c
    tl = {o - 1: ((n - 1,) if isinstance(n, int) else tuple(t - 1 for t in n)) for o, n in tails.items()}
    wheels = CyclicSeries(tree.ctx, relabel_terms(G.log.wheels.terms, tl))
    return GroupLikeArrow(ArrowPrimitive(tree, short, wheels))


# ---------------------------------------------------------------- JSON

def arrow_to_json(G: GroupLikeArrow) -> dict:
    p = G.log
    return {"tree": tder_to_json(p.tree), "short": [str(c) for c in p.short],
            "wheels": cyclic_to_json(p.wheels)}


def arrow_from_json(obj: Mapping, max_degree: int | None = None) -> GroupLikeArrow:
    tree = tder_from_json(obj["tree"], max_degree)
    short = [parse_coeff(c) for c in obj.get("short", ["0"] * tree.n)]
    wheels = cyclic_from_json(obj.get("wheels", {"terms": []}), tree.ctx)
    return GroupLikeArrow(ArrowPrimitive(tree, short, wheels))


def cap_to_json(c: CapElement) -> dict:
    return cyclic_to_json(c.wheels)
