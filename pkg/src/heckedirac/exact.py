"""Exact rational helpers: scalar coercion, "p/q" serialization and sparse
Gaussian elimination over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, List, Sequence, Tuple

Scalar = object  # Fraction | int | float | complex

SparseRow = Dict[int, Fraction]


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def to_exact(x):
    """Coerce ints and decimal-like strings to Fraction; leave floats alone."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return x


def qstr(x) -> str | float:
    """Serialize a scalar: exact rationals as "p/q" strings, floats as-is."""
    if isinstance(x, Rational):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        if x.imag == 0:
            return float(x.real)
        return [float(x.real), float(x.imag)]  # type: ignore[return-value]
    return float(x)


def qparse(s):
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, (list, tuple)) and len(s) == 2:
        return complex(s[0], s[1])
    if isinstance(s, int):
        return Fraction(s)
    return s


def sqrt_scalar(q):
    """Square root that stays exact when q is the square of a rational."""
    if isinstance(q, Rational):
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative argument")
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
        return math.sqrt(q)
    return math.sqrt(q)


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, Rational):
        return x == 0
    return abs(x) <= tol


# ---------------------------------------------------------------------------
# sparse elimination


def _reduce(rows: List[SparseRow], ncols: int) -> Tuple[List[SparseRow], List[int]]:
    """Reduced row echelon form of sparse rational rows.  Returns the nonzero
    reduced rows and their pivot columns (increasing)."""
    pivots: Dict[int, SparseRow] = {}
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v != 0}
        # pivot rows are fully reduced, so one pass clears every pivot column
        for col in [c for c in r if c in pivots]:
            f = r.get(col)
            if not f:
                continue
            for k, v in pivots[col].items():
                nv = r.get(k, 0) - f * v
                if nv == 0:
                    r.pop(k, None)
                else:
                    r[k] = nv
        if not r:
            continue
        col = min(r)
        inv = 1 / r[col]
        r = {k: v * inv for k, v in r.items()}
        # back-substitute into previous pivot rows
        for pc, p in pivots.items():
            f = p.get(col)
            if f:
                for k, v in r.items():
                    nv = p.get(k, 0) - f * v
                    if nv == 0:
                        p.pop(k, None)
                    else:
                        p[k] = nv
        pivots[col] = r
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def rref(rows: Iterable[SparseRow], ncols: int):
    return _reduce(list(rows), ncols)


def rank(rows: Iterable[SparseRow], ncols: int | None = None) -> int:
    rows = list(rows)
    if ncols is None:
        ncols = 1 + max((max(r) for r in rows if r), default=-1)
    return len(_reduce(rows, ncols)[0])


def dense_to_sparse(mat: Sequence[Sequence]) -> List[SparseRow]:
    return [{j: Fraction(v) for j, v in enumerate(row) if v != 0} for row in mat]


def columns_to_rows(cols: Sequence[SparseRow]) -> List[SparseRow]:
    rows: Dict[int, SparseRow] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v != 0:
                rows.setdefault(i, {})[j] = v
    return [rows[i] for i in sorted(rows)]


def column_rank(cols: Sequence[SparseRow]) -> int:
    return rank(columns_to_rows(cols), len(cols))


def nullspace(rows: Sequence[SparseRow], ncols: int) -> List[SparseRow]:
    """Basis of {x : A x = 0} with A given by sparse rows."""
    red, piv = _reduce(list(rows), ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v: SparseRow = {free: Fraction(1)}
        for r, pc in zip(red, piv):
            f = r.get(free)
            if f:
                v[pc] = -f
        basis.append(v)
    return basis


def solve(rows: Sequence[SparseRow], rhs: Sequence, ncols: int):
    """One exact solution of A x = b, or None if inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        rr = dict(r)
        if b != 0:
            rr[ncols] = Fraction(b)
        aug.append(rr)
    red, piv = _reduce(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in zip(red, piv):
        x[pc] = r.get(ncols, Fraction(0))
    return x
