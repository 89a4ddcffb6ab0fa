import itertools
from fractions import Fraction

import pytest

from grtkit.freeseries import (AssocSeries, LieSeries, SeriesError, TruncationContext, bch,
                               bracket, exp, inverse, is_lie, is_lyndon, lie_project, log,
                               lyndon_basis, lyndon_words, mul, series_from_json,
                               series_to_json, standard_bracket, substitute, to_lyndon)

from conftest import rand_lie


def mobius(n):
    out, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def necklace(k, d):
    return sum(mobius(e) * k ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def brute_lyndon(k, d):
    # strictly smaller than every proper rotation
    return sorted(w for w in itertools.product(range(k), repeat=d)
                  if all(w < w[i:] + w[:i] for i in range(1, d)))


@pytest.mark.parametrize("k,d", [(2, d) for d in range(1, 9)] + [(3, d) for d in range(1, 6)])
def test_lyndon_words_match_brute_force(k, d):
    assert lyndon_words(k, d) == brute_lyndon(k, d)
    assert len(lyndon_words(k, d)) == necklace(k, d)


def test_lyndon_basis_bounds():
    ctx = TruncationContext(4)
    assert [ctx.word_str(w) for w in lyndon_basis(ctx, 3)] == ["xxy", "xyy"]
    with pytest.raises(SeriesError):
        lyndon_basis(ctx, 5)
    assert is_lyndon((0, 0, 1)) and not is_lyndon((0, 1, 0))


def test_standard_bracket_leading_word():
    # P_w = w + larger words
    for w in lyndon_words(2, 6):
        terms = standard_bracket(w)
        assert min(terms) == w and terms[w] == 1


def test_bch_low_order(ctx2):
    x, y = LieSeries.gen(ctx2, 0), LieSeries.gen(ctx2, 1)
    z = bch(x, y)
    assert z.coeff("x") == 1 and z.coeff("y") == 1
    assert z.coeff("xy") == Fraction(1, 2)
    assert z.coeff("xxy") == Fraction(1, 12)
    assert z.coeff("xyy") == Fraction(1, 12)
    assert z.coeff("xxxy") == 0 and z.coeff("xyyy") == 0
    assert z.coeff("xxyy") == Fraction(1, 24)


def test_bch_against_exp_log(ctx2, rng):
    for _ in range(5):
        a, b = rand_lie(rng, ctx2), rand_lie(rng, ctx2)
        lhs = exp(bch(a, b).assoc())
        assert lhs == mul(exp(a.assoc()), exp(b.assoc()))


def test_exp_log_inverse(ctx2, rng):
    a = rand_lie(rng, ctx2).assoc()
    E = exp(a)
    assert log(E) == a
    assert mul(E, inverse(E)) == AssocSeries.one(ctx2)
    assert is_lie(log(E))


def test_lie_projection_and_roundtrip(ctx2, rng):
    a = rand_lie(rng, ctx2, 1, 6)
    assert lie_project(a.assoc()) == a
    assert LieSeries.from_lyndon(ctx2, a.lyndon()) == a
    assert to_lyndon(a.terms) == a.lyndon()
    assert not is_lie(mul(LieSeries.gen(ctx2, 0).assoc(), LieSeries.gen(ctx2, 1).assoc()))


def test_bracket_antisymmetry(ctx2, rng):
    a, b = rand_lie(rng, ctx2), rand_lie(rng, ctx2)
    assert bracket(a, b) == -bracket(b, a)


def test_substitute(ctx2):
    x, y = LieSeries.gen(ctx2, 0), LieSeries.gen(ctx2, 1)
    c = bracket(x, y)
    assert substitute(c, [y, x], ctx2) == -c
    assert substitute(c, {"x": x + y, "y": y}, ctx2) == c
    with pytest.raises(SeriesError):
        substitute(c, {"x": y}, ctx2)


def test_truncation_and_contexts():
    ctx = TruncationContext(3)
    x, y = LieSeries.gen(ctx, 0), LieSeries.gen(ctx, 1)
    assert bracket(x, bracket(x, bracket(x, y))).is_zero()
    with pytest.raises(SeriesError):
        TruncationContext(3, ("x", "x"))


def test_parse_word_multichar():
    ctx = TruncationContext.letters(4, 4)
    assert ctx.parse_word("x1x3x2") == (0, 2, 1)
    with pytest.raises(SeriesError):
        ctx.parse_word("x5")


def test_json_roundtrip(ctx2, rng):
    a = rand_lie(rng, ctx2, 1, 5)
    assert series_from_json(series_to_json(a)) == a
    E = exp(a.assoc())
    assert series_from_json(series_to_json(E)) == E


def test_json_errors():
    with pytest.raises(SeriesError):
        series_from_json({"generators": ["x", "y"], "max_degree": 3,
                          "terms": [{"word": "xz", "coeff": "1"}]})
    with pytest.raises(SeriesError):
        series_from_json({"generators": ["x", "y"], "max_degree": 3,
                          "terms": [{"word": "xy", "coeff": "1/0"}]})
    with pytest.raises(SeriesError):
        series_from_json({"max_degree": 3})
    with pytest.raises(SeriesError):
        series_from_json({"generators": ["x", "y"], "max_degree": 3, "kind": "lie",
                          "terms": [{"word": "xx", "coeff": "1"}]})
