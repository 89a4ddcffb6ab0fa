"""Sparse exact Gaussian elimination over Q.

Vectors are dicts key -> Fraction.  Columns are processed in the order
given; free columns are set to zero in the particular solution.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence


class Inconsistent(ValueError):
    def __init__(self, row_key, residual):
        super().__init__(f"inconsistent system at {row_key!r}: residual {residual}")
        self.row_key = row_key
        self.residual = residual


def _rows(columns: Sequence[Mapping], rhs: Mapping) -> dict:
    rows: dict = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                rows.setdefault(k, [{}, Fraction(0)])[0][j] = Fraction(v)
    for k, v in rhs.items():
        if v:
            rows.setdefault(k, [{}, Fraction(0)])[1] = Fraction(v)
    return rows


def rref(columns: Sequence[Mapping], rhs: Mapping | None = None):
    """Reduce the system sum_j c_j columns[j] = rhs.

    Returns (pivots, reduced) where pivots maps a column index to its
    reduced row (coefficients dict, rhs value); raises Inconsistent when a
    row reduces to 0 = r != 0."""
    rows = _rows(columns, rhs or {})
    order = sorted(rows, key=repr)
    pending = [rows[k] + [k] for k in order]
    pivots: dict = {}
    for j in range(len(columns)):
        pick = None
        for idx, (coef, _, _) in enumerate(pending):
            if coef.get(j):
                pick = idx
                break
        if pick is None:
            continue
        coef, b, key = pending.pop(pick)
        inv = 1 / coef[j]
        coef = {c: v * inv for c, v in coef.items()}
        b = b * inv
        for r in pending:
            f = r[0].get(j)
            if f:
                _axpy(r, -f, coef, b)
        for r in pivots.values():
            f = r[0].get(j)
            if f:
                _axpy(r, -f, coef, b)
        pivots[j] = [coef, b, key]
    for coef, b, key in pending:
        if b:
            raise Inconsistent(key, b)
    return pivots


def _axpy(row, f, coef, b):
    d = row[0]
    for c, v in coef.items():
        nv = d.get(c, 0) + f * v
        if nv:
            d[c] = nv
        else:
            d.pop(c, None)
    row[1] = row[1] + f * b


def solve(columns: Sequence[Mapping], rhs: Mapping) -> list:
    """Particular solution with all free variables zero."""
    pivots = rref(columns, rhs)
    x = [Fraction(0)] * len(columns)
    for j, (_, b, _) in pivots.items():
        x[j] = b
    return x


def nullspace(columns: Sequence[Mapping]) -> list:
    """Basis of {c : sum c_j columns[j] = 0}, one vector per free column."""
    pivots = rref(columns, {})
    free = [j for j in range(len(columns)) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * len(columns)
        v[f] = Fraction(1)
        for j, (coef, _, _) in pivots.items():
            v[j] = -coef.get(f, 0)
        basis.append(v)
    return basis


def rank(columns: Sequence[Mapping]) -> int:
    return len(rref(columns, {}))
