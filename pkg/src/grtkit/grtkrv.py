"""GRT1 / associator / KRV / KV equation systems and the maps between them.

Group-like identities are reduced to Lie identities: products of
exponentials in U(t_n) become bch combinations in tder_n, and
automorphism identities are compared on generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .arrows import (ArrowPrimitive, GroupLikeArrow, adjoint_all, arrow_inverse, cap_restrict,
                     gamma, stack, tree_projection, wheel_exp)
from .cyc import (CyclicSeries, NotInImage, OneVarSeries, eval_symmetric, jacobian,
                  solve_duflo)
from .freeseries import (AssocSeries, LieSeries, SeriesError, TruncationContext,
                         bch, exp, inverse, lie_eval, lie_project, log, lyndon_words, mul,
                         substitute, to_lyndon)
from .tder import (TAutElement, TangentialDerivation, apply_derivation, puncture, strand_map,
                   t_ij, taut_apply, taut_compose, taut_log, tder_bch, tder_bracket)


class UnsolvableAtDegree(ValueError):
    def __init__(self, degree, detail=""):
        super().__init__(f"linear system inconsistent at degree {degree} {detail}".strip())
        self.degree = degree


class DufloNotSolvable(ValueError):
    pass


# ---------------------------------------------------------------- reports

@dataclass
class Report:
    equation: str
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def extend(self, part: str, residual):
        self.failures.extend(residual_entries(part, residual))
        return self

    def merge(self, other: "Report"):
        self.failures.extend(other.failures)
        return self

    def first(self):
        return self.failures[0] if self.failures else None

    def to_json(self) -> dict:
        return {"equation": self.equation, "status": self.status,
                "failures": [dict(f) for f in self.failures]}

    def __bool__(self):
        return self.ok


def _lie_entries(ctx, terms, prefix=""):
    try:
        coords = to_lyndon(terms)
    except SeriesError:
        coords = terms
    return [(len(w), prefix + ctx.word_str(w), c) for w, c in coords.items()]


def residual_entries(part: str, residual) -> list:
    if isinstance(residual, TangentialDerivation):
        rows = []
        for i, t in enumerate(residual.comps):
            rows += _lie_entries(residual.ctx, t, f"a{i + 1}:")
    elif isinstance(residual, (LieSeries, AssocSeries)):
        rows = _lie_entries(residual.ctx, residual.terms)
    elif isinstance(residual, CyclicSeries):
        rows = [(len(w), "tr(" + residual.ctx.word_str(w) + ")", c) for w, c in residual.terms.items()]
    elif isinstance(residual, OneVarSeries):
        rows = [(k, f"u^{k}", c) for k, c in residual.coeffs.items()]
    elif isinstance(residual, ArrowPrimitive):
        rows = []
        for i, t in enumerate(residual.tree.comps):
            rows += _lie_entries(residual.tree.ctx, t, f"tree a{i + 1}:")
        rows += [(1, f"short{i + 1}", c) for i, c in enumerate(residual.short) if c]
        rows += [(len(w), "wheel tr(" + residual.wheels.ctx.word_str(w) + ")", c)
                 for w, c in residual.wheels.terms.items()]
    else:
        raise TypeError(type(residual))
    rows.sort(key=lambda r: (r[0], r[1]))
    return [{"part": part, "degree": d, "word": w, "residual": str(c)} for d, w, c in rows]


# ---------------------------------------------------------------- helpers

def lie2(N: int) -> TruncationContext:
    return TruncationContext(N, ("x", "y"))


def gens2(N: int):
    ctx = lie2(N)
    return LieSeries.gen(ctx, 0), LieSeries.gen(ctx, 1)


def at(psi: LieSeries, a: LieSeries, b: LieSeries) -> LieSeries:
    """psi(a, b) by substitution."""
    return substitute(psi, [a, b], a.ctx)


def at_tder(psi: LieSeries, A: TangentialDerivation, B: TangentialDerivation) -> TangentialDerivation:
    N = A.ctx.max_degree
    return lie_eval(psi.lyndon(), [A, B], tder_bracket, TangentialDerivation.zero(A.ctx),
                    [max(1, A.min_degree()), max(1, B.min_degree())], N)


def bch_chain(items: Sequence, bch_fn: Callable):
    acc = items[0]
    for it in items[1:]:
        acc = bch_fn(acc, it)
    return acc


def braid_gens(n: int, N: int) -> dict:
    return {(i, j): t_ij(n, i, j, N) for i in range(1, n + 1) for j in range(1, n + 1) if i != j}


def with_degree(psi: LieSeries, N: int) -> LieSeries:
    return psi.in_ctx(psi.ctx.with_degree(N))


# ---------------------------------------------------------------- GRT1 equations

def grt_inversion(psi: LieSeries) -> LieSeries:
    x, y = gens2(psi.ctx.max_degree)
    return bch(at(psi, x, y), at(psi, y, x))


def grt_hexagon(psi: LieSeries) -> LieSeries:
    x, y = gens2(psi.ctx.max_degree)
    z = -x - y
    return bch(bch(at(psi, x, y), at(psi, y, z)), at(psi, z, x))


def pentagon_args(N: int) -> list:
    t = braid_gens(4, N)
    return [(t[1, 3] + t[2, 3], t[3, 4]), (t[1, 2], t[2, 3] + t[2, 4]),
            (t[1, 2], t[2, 3]), (t[1, 2] + t[1, 3], t[2, 4] + t[3, 4]), (t[2, 3], t[3, 4])]


def pentagon_residual(psi: LieSeries) -> TangentialDerivation:
    N = psi.ctx.max_degree
    D = [at_tder(psi, A, B) for A, B in pentagon_args(N)]
    return tder_bch(D[0], D[1]) - bch_chain(D[2:], tder_bch)


def check_grt(psi: LieSeries) -> Report:
    rep = Report("grt")
    if psi.ctx.n != 2:
        raise SeriesError("psi must be a two-letter series")
    low = psi.degree_part(1)
    if not low.is_zero():
        rep.extend("degree-one", low)
    rep.extend("inversion", grt_inversion(psi))
    rep.extend("hexagon", grt_hexagon(psi))
    rep.extend("pentagon", pentagon_residual(psi))
    return rep


def grt_linear(P: LieSeries, d: int) -> dict:
    """Linearization of the three GRT1 equations at degree d, as a keyed vector."""
    P = with_degree(P, d)
    x, y = gens2(d)
    z = -x - y
    out: dict = {}
    inv = at(P, x, y) + at(P, y, x)
    hexa = at(P, x, y) + at(P, y, z) + at(P, z, x)
    args = pentagon_args(d)
    D = [at_tder(P, A, B) for A, B in args]
    pent = D[0] + D[1] - D[2] - D[3] - D[4]
    _put(out, "inversion", inv)
    _put(out, "hexagon", hexa)
    _put(out, "pentagon", pent)
    return out


def _put(out: dict, tag: str, r):
    if isinstance(r, TangentialDerivation):
        for i, t in enumerate(r.comps):
            for w, c in t.items():
                out[(tag, i, w)] = c
    else:
        for w, c in r.terms.items():
            out[(tag, 0, w)] = c


def _vector(tag_residuals: Sequence, d: int) -> dict:
    out: dict = {}
    for tag, r in tag_residuals:
        part = r.degree_part(d)
        _put(out, tag, part)
    return out


def solve_grt_degree(d: int) -> list:
    """Basis of the degree-d solutions of the linearized GRT1 equations,
    each normalized to leading Lyndon coefficient 1."""
    ctx = lie2(d)
    basis = lyndon_words(2, d)
    cols = [grt_linear(LieSeries.from_lyndon(ctx, {w: 1}), d) for w in basis]
    out = []
    for v in linalg.nullspace(cols):
        lead = next(c for c in v if c)
        out.append(LieSeries.from_lyndon(ctx, {w: c / lead for w, c in zip(basis, v) if c}))
    return out


def _complete(seed: LieSeries, N: int, lo: int, residual_fn: Callable, linear_fn: Callable) -> LieSeries:
    """Add corrections in degrees lo..N so residual_fn vanishes through N;
    at each degree the minimal-pivot solution (free directions zero)."""
    psi = with_degree(seed, N)
    for d in range(lo, N + 1):
        cur = with_degree(psi, d)
        R = _vector(residual_fn(cur), d)
        if not R:
            continue
        basis = lyndon_words(2, d)
        ctx = lie2(d)
        cols = [linear_fn(LieSeries.from_lyndon(ctx, {w: 1}), d) for w in basis]
        try:
            c = linalg.solve(cols, {k: -v for k, v in R.items()})
        except linalg.Inconsistent as e:
            raise UnsolvableAtDegree(d, f"({e})") from e
        corr = LieSeries.from_lyndon(lie2(N), {w: v for w, v in zip(basis, c) if v})
        psi = psi + corr
    return psi


def _grt_residuals(psi):
    return [("inversion", grt_inversion(psi)), ("hexagon", grt_hexagon(psi)),
            ("pentagon", pentagon_residual(psi))]


def complete_grt(seed: LieSeries, N: int) -> LieSeries:
    """Extend a homogeneous solution of the linearized equations to an
    element satisfying the full GRT1 equations through degree N."""
    lo = seed.min_degree() + 1
    return _complete(seed, N, lo, _grt_residuals, grt_linear)


def psi3(N: int = 6) -> LieSeries:
    (g,) = solve_grt_degree(3)
    return complete_grt(g, N)


def psi5(N: int = 6) -> LieSeries:
    (g,) = solve_grt_degree(5)
    return complete_grt(g, N)


def grt_compose(psi1: LieSeries, psi2: LieSeries) -> LieSeries:
    """log of Psi1(x,y) Psi2(x, y'), y' the conjugate of y by Psi1.

    Conjugation by P is v -> P v P^{-1} throughout this module; with the
    hexagon read as Psi(x,y)Psi(y,z)Psi(z,x) = 1 this is the reading under
    which the product stays in GRT1."""
    N = min(psi1.ctx.max_degree, psi2.ctx.max_degree)
    psi1, psi2 = with_degree(psi1, N), with_degree(psi2, N)
    x, y = gens2(N)
    P1 = exp(psi1.assoc())
    y2 = conjugate(P1, y)
    P2 = exp(at(psi2, x, y2).assoc())
    return lie_project(log(mul(P1, P2)))


def grt_inverse(psi: LieSeries) -> LieSeries:
    """Group inverse for grt_compose, solved degree by degree."""
    N = psi.ctx.max_degree
    inv = LieSeries(psi.ctx)
    for d in range(1, N + 1):
        part = grt_compose(psi, inv).degree_part(d)
        inv = inv - part
    return inv


# ---------------------------------------------------------------- associators

def assoc_hexagon_factors(phi: LieSeries) -> list:
    N = phi.ctx.max_degree
    t = braid_gens(3, N)
    h = Fraction(1, 2)
    return [at_tder(phi, t[1, 2], t[2, 3]), t[2, 3] * -h, -at_tder(phi, t[1, 3], t[2, 3]),
            t[1, 3] * -h, at_tder(phi, t[1, 3], t[1, 2]), (t[1, 3] + t[2, 3]) * h]


def assoc_hexagon(phi: LieSeries) -> TangentialDerivation:
    return bch_chain(assoc_hexagon_factors(phi), tder_bch)


def assoc_linear(P: LieSeries, d: int) -> dict:
    P = with_degree(P, d)
    x, y = gens2(d)
    t = braid_gens(3, d)
    out: dict = {}
    _put(out, "inversion", at(P, x, y) + at(P, y, x))
    _put(out, "hexagon", at_tder(P, t[1, 2], t[2, 3]) - at_tder(P, t[1, 3], t[2, 3])
         + at_tder(P, t[1, 3], t[1, 2]))
    D = [at_tder(P, A, B) for A, B in pentagon_args(d)]
    _put(out, "pentagon", D[0] + D[1] - D[2] - D[3] - D[4])
    return out


def _assoc_residuals(phi):
    return [("inversion", grt_inversion(phi)), ("hexagon", assoc_hexagon(phi)),
            ("pentagon", pentagon_residual(phi))]


def check_associator(phi) -> Report:
    if isinstance(phi, AssocSeries):
        if phi.constant() != 1:
            raise SeriesError("associator candidate needs constant term 1")
        phi = lie_project(log(phi))
    rep = Report("associator")
    for tag, r in _assoc_residuals(phi):
        rep.extend(tag, r)
    return rep


def solve_associator(maxdeg: int) -> AssocSeries:
    """log Phi degree by degree (degrees 1..maxdeg), free directions zero."""
    seed = LieSeries(lie2(maxdeg))
    phi = _complete(seed, maxdeg, 1, _assoc_residuals, assoc_linear)
    rep = check_associator(phi)
    if not rep.ok:
        f = rep.first()
        raise UnsolvableAtDegree(f["degree"], "(certification failed)")
    out = exp(phi.assoc())
    out.group_like = True
    return out


# ---------------------------------------------------------------- rho and KRV

@dataclass(frozen=True)
class KrvPair:
    alpha: TAutElement
    s: OneVarSeries


@dataclass(frozen=True)
class KvPair:
    a: TAutElement
    sigma: OneVarSeries


def conjugate(P: AssocSeries, v: LieSeries) -> LieSeries:
    """P v P^{-1} for group-like P."""
    return lie_project(mul(mul(P, v.assoc()), inverse(P)))


def rho_conjugators(psi: LieSeries):
    """TAut conjugators of rho(psi): x -> Psi(-x-y,x) x Psi(-x-y,x)^{-1},
    so the stored f_i (acting as f^{-1} x f) are the inverses."""
    N = psi.ctx.max_degree
    x, y = gens2(N)
    z = -x - y
    return exp(-at(psi, z, x).assoc()), exp(-at(psi, z, y).assoc())


def eta(psi: LieSeries) -> TangentialDerivation:
    N = psi.ctx.max_degree
    x, y = gens2(N)
    z = -x - y
    return TangentialDerivation(lie2(N), [at(psi, z, x), at(psi, z, y)])


def rho(psi: LieSeries) -> KrvPair:
    alpha = rho_alpha(psi)
    try:
        s = solve_duflo(jacobian(alpha))
    except NotInImage as e:
        raise DufloNotSolvable(str(e)) from e
    return KrvPair(alpha, s)


def _fixes(g: TAutElement, target: LieSeries, image: LieSeries | None = None) -> LieSeries:
    image = target if image is None else image
    return taut_apply(g, target) - image


def check_krv(pair: KrvPair) -> Report:
    g = pair.alpha
    N = g.ctx.max_degree
    x, y = gens2(N + 1)
    rep = Report("krv")
    rep.extend("fixes x+y", _fixes(g, x + y))
    J = jacobian(g)
    rep.extend("jacobian", J - eval_symmetric(pair.s, "x+y", J.ctx))
    return rep


def check_kv(pair: KvPair) -> Report:
    g = pair.a
    N = g.ctx.max_degree
    x, y = gens2(N + 1)
    rep = Report("kv")
    b = bch(x, y)
    rep.extend("fixes bch(x,y)", _fixes(g, b))
    J = jacobian(g)
    rep.extend("jacobian", J - eval_symmetric(pair.sigma, "bch", J.ctx))
    return rep


def check_solkv(F: TAutElement, r: OneVarSeries) -> Report:
    N = F.ctx.max_degree
    x, y = gens2(N + 1)
    rep = Report("solkv")
    rep.extend("bch(x,y) to x+y", _fixes(F, bch(x, y), x + y))
    J = jacobian(F)
    rep.extend("jacobian", J - eval_symmetric(r, "x+y", J.ctx))
    return rep


# ---------------------------------------------------------------- Drinfeld identities

def drinfeld_checks(psi: LieSeries) -> Report:
    """[X, psi(Z,X)] + [Y, psi(Z,Y)] = 0 and X + Y' + Z' = 0, where Y', Z'
    are Y, Z conjugated by Psi(X,Y), Psi(X,Z); X=-x-y, Y=x, Z=y, through
    degree N."""
    from .freeseries import bracket
    N = psi.ctx.max_degree
    x, y = gens2(N)
    X, Y, Z = -x - y, x, y
    rep = Report("drinfeld")
    rep.extend("bracket identity", bracket(X, at(psi, Z, X)) + bracket(Y, at(psi, Z, Y)))
    grp = X + conjugate(exp(at(psi, X, Y).assoc()), Y) + conjugate(exp(at(psi, X, Z).assoc()), Z)
    rep.extend("conjugation identity", grp)
    return rep


def eta_self_action(psi: LieSeries) -> Report:
    e = eta(psi)
    rep = Report("eta-self")
    for i in range(2):
        rep.extend(f"eta on eta_{i + 1}", apply_derivation(e, e.component(i)))
    return rep


def eta_self_action_of(e: TangentialDerivation) -> Report:
    rep = Report("eta-self")
    for i in range(e.n):
        rep.extend(f"eta on eta_{i + 1}", apply_derivation(e, e.component(i)))
    return rep


# ---------------------------------------------------------------- stripping and the arrow-side maps

def arrow_tder(n: int, N: int, tail: int, heads: Sequence[int]) -> TangentialDerivation:
    """Arrows from strand `tail` to each strand in `heads` (1-indexed)."""
    ctx = TruncationContext.letters(n, N)
    comps = [{} for _ in range(n)]
    for h in heads:
        comps[h - 1] = {(tail - 1,): Fraction(1)}
    return TangentialDerivation(ctx, comps)


def _componentwise_bracket(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    # only the Lie words under each head survive once no head sits on a tail strand
    from .freeseries import commutator_terms
    N = u.ctx.max_degree
    return TangentialDerivation(u.ctx, [commutator_terms(a, b, N) for a, b in zip(u.comps, v.comps)])


def _placed(psi: LieSeries, A: TangentialDerivation, B: TangentialDerivation) -> TangentialDerivation:
    N = A.ctx.max_degree
    return lie_eval(psi.lyndon(), [A, B], _componentwise_bracket, TangentialDerivation.zero(A.ctx),
                    [1, 1], N)


def stripping_conjugators(psi: LieSeries) -> TAutElement:
    """Tree-level conjugators of the vertex value, built on four strands:
    Psi^{-1}(a^{2(13)}, -a^{2(13)}-a^{4(13)}) . Psi(a^{23}, a^{43}), tails on
    strands 1 and 3 punctured, then heads 1,3 -> 1,2 and tails 2,4 -> x,y."""
    N = psi.ctx.max_degree
    A = arrow_tder(4, N, 2, [1, 3])
    B = arrow_tder(4, N, 4, [1, 3])
    a23 = arrow_tder(4, N, 2, [3])
    a43 = arrow_tder(4, N, 4, [3])
    A, B, a23, a43 = (puncture(puncture(v, 1), 3) for v in (A, B, a23, a43))
    zeta = -_placed(psi, A, -A - B)
    chi = _placed(psi, a23, a43)
    ctx4 = A.ctx
    conj = []
    for i in range(4):
        left = exp(AssocSeries(ctx4, zeta.comps[i]))
        right = exp(AssocSeries(ctx4, chi.comps[i]))
        conj.append(mul(left, right))
    # the product P conjugates as v -> P v P^{-1}; TAut stores P^{-1}
    g4 = TAutElement(ctx4, [inverse(P) for P in conj])
    return strand_map(g4, {1: 1, 3: 2}, 2, tails={2: 1, 4: 2})


def stripping_r(psi: LieSeries) -> GroupLikeArrow:
    from .arrows import ell_exp
    return ell_exp(taut_log(stripping_conjugators(psi)))


@dataclass(frozen=True)
class AutomorphismData:
    N: GroupLikeArrow
    C: object  # CapElement on one strand


def cap_exponent(C) -> OneVarSeries:
    return OneVarSeries(C.ctx.max_degree, {len(w): c for w, c in C.wheels.terms.items()})


def rho_ring(psi: LieSeries, s: OneVarSeries | None = None) -> AutomorphismData:
    from .arrows import cap_from_onevar
    Nd = psi.ctx.max_degree
    if s is None:
        s = rho(psi).s
    c = s * Fraction(1, 2)
    C = cap_from_onevar(c)
    W = wheel_exp(eval_symmetric(c, "x+y", lie2(Nd)), lie2(Nd))
    return AutomorphismData(stack(W, stripping_r(psi)), C)


def check_R4p(Nv: GroupLikeArrow) -> Report:
    from .arrows import arrow_strand_map, ell_exp
    N12 = arrow_strand_map(Nv, {1: 1, 2: 2}, 3)
    ctx3 = N12.ctx
    r = TangentialDerivation(ctx3, [{}, {}, {(0,): Fraction(1), (1,): Fraction(1)}])
    R = ell_exp(r)
    lhs = stack(arrow_inverse(N12), R, N12)
    return Report("R4'").extend("R4'", lhs.log - R.log)


def check_Up(Nv: GroupLikeArrow) -> Report:
    prod = stack(Nv, adjoint_all(Nv))
    return Report("U'").extend("U'", prod.log)


def double_cap(C, ctx2: TruncationContext) -> CyclicSeries:
    from .tder import relabel_terms
    return CyclicSeries(ctx2, relabel_terms(C.wheels.terms, {0: (0, 1)}))


def check_Cp(Nv: GroupLikeArrow, C) -> Report:
    from .arrows import CapElement
    ctx2 = Nv.ctx
    C12 = wheel_exp(double_cap(C, ctx2), ctx2)
    lhs = cap_restrict(stack(C12, arrow_inverse(Nv)))
    from .tder import relabel_terms
    rhs = CapElement(CyclicSeries(ctx2, relabel_terms(C.wheels.terms, {0: 0}))
                     + CyclicSeries(ctx2, relabel_terms(C.wheels.terms, {0: 1})))
    return Report("C'").extend("C'", (lhs - rhs).wheels)


def check_automorphism(data: AutomorphismData) -> Report:
    rep = Report("simplified-equations")
    if any(data.N.log.short):
        rep.extend("v-small", OneVarSeries(1, {}))
        rep.failures.append({"part": "v-small", "degree": 1, "word": "short", "residual": "nonzero"})
    rep.merge(check_R4p(data.N)).merge(check_Up(data.N)).merge(check_Cp(data.N, data.C))
    return rep


def theta(data: AutomorphismData) -> KrvPair:
    if any(data.N.log.short):
        raise SeriesError("theta needs a v-small vertex value (no short arrows)")
    alpha = gamma(tree_projection(data.N))
    return KrvPair(alpha, cap_exponent(data.C) * 2)


def compare_taut(name: str, g: TAutElement, h: TAutElement) -> Report:
    rep = Report(name)
    for i in range(g.n):
        rep.extend(f"strand {i + 1}", g.conjugator(i) - h.conjugator(i))
    return rep


def rho_alpha(psi: LieSeries) -> TAutElement:
    return TAutElement(lie2(psi.ctx.max_degree), list(rho_conjugators(psi)))


def diagram_check(psi: LieSeries) -> Report:
    return compare_taut("diagram", gamma(stripping_r(psi)), rho_alpha(psi))


def ntr_elleta_check(psi: LieSeries, sign: int = 1) -> Report:
    """Compare the tree part of the vertex value with exp(l(sign * eta))."""
    from .arrows import ell_exp
    lhs = stripping_r(psi)
    rhs = ell_exp(eta(psi) * sign)
    return Report("ntr-elleta").extend("N^tr - exp(l(eta))", lhs.log.tree - rhs.log.tree)


def anti_hom_check(psi1: LieSeries, psi2: LieSeries) -> Report:
    lhs = gamma(stripping_r(grt_compose(psi1, psi2)))
    rhs = taut_compose(gamma(stripping_r(psi1)), gamma(stripping_r(psi2)))
    return compare_taut("anti-hom", lhs, rhs)
