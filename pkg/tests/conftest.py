import functools
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from grtkit import grtkrv as G
from grtkit.arrows import ArrowPrimitive, GroupLikeArrow
from grtkit.cyc import CyclicSeries
from grtkit.freeseries import LieSeries, TruncationContext, lyndon_words
from grtkit.tder import TangentialDerivation

FIXTURES = Path(__file__).parent / "fixtures"
N = 6


@functools.lru_cache(maxsize=None)
def psi3():
    return G.psi3(N)


@functools.lru_cache(maxsize=None)
def psi5():
    return G.psi5(N)


@functools.lru_cache(maxsize=None)
def psi33():
    return G.grt_compose(psi3(), psi3())


def rand_coeff(rng):
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def rand_lie(rng, ctx, lo=1, hi=3, density=0.6):
    coeffs = {}
    for d in range(lo, min(hi, ctx.max_degree) + 1):
        for w in lyndon_words(ctx.n, d):
            if rng.random() < density:
                coeffs[w] = rand_coeff(rng)
    return LieSeries.from_lyndon(ctx, coeffs)


def rand_tder(rng, ctx, lo=1, hi=3):
    return TangentialDerivation(ctx, [rand_lie(rng, ctx, lo, hi) for _ in range(ctx.n)])


def rand_cyclic(rng, ctx, lo=1, hi=4):
    terms = {}
    for _ in range(4):
        d = rng.randint(lo, hi)
        terms[tuple(rng.randrange(ctx.n) for _ in range(d))] = rand_coeff(rng)
    return CyclicSeries(ctx, terms)


def rand_arrow(rng, ctx, short=True):
    p = ArrowPrimitive(rand_tder(rng, ctx), [rand_coeff(rng) if short else 0 for _ in range(ctx.n)],
                       rand_cyclic(rng, ctx))
    return GroupLikeArrow(p)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def ctx2():
    return TruncationContext(N, ("x", "y"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
        if line.startswith("criterion 7:"):
            for d in mod.DETAILS:
                terminalreporter.write_line(d)
