from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from heckedirac import exact as ex

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_qstr_and_qparse_round_trip():
    assert ex.qstr(F(3, 4)) == "3/4"
    assert ex.qstr(F(6, 3)) == "2"
    assert ex.qparse("3/4") == F(3, 4)
    assert ex.qstr(0.25) == 0.25
    assert ex.qparse([1.0, 2.0]) == complex(1, 2)


def test_to_exact_rejects_bool():
    with pytest.raises(TypeError):
        ex.to_exact(True)
    assert ex.to_exact("0.5") == F(1, 2)
    assert ex.to_exact(0.5) == 0.5


def test_sqrt_scalar_exact_only_for_squares():
    assert ex.sqrt_scalar(F(9, 4)) == F(3, 2)
    assert isinstance(ex.sqrt_scalar(F(2)), float)
    with pytest.raises(ValueError):
        ex.sqrt_scalar(F(-1))


def test_rank_and_nullspace_small():
    rows = [{0: F(1), 1: F(2)}, {0: F(2), 1: F(4)}, {2: F(1)}]
    assert ex.rank(rows, 3) == 2
    null = ex.nullspace(rows, 3)
    assert len(null) == 1
    v = null[0]
    assert all(sum(r.get(j, 0) * v.get(j, 0) for j in range(3)) == 0 for r in rows)


def test_solve_inconsistent_returns_none():
    rows = [{0: F(1)}, {0: F(1)}]
    assert ex.solve(rows, [F(1), F(2)], 1) is None
    assert ex.solve(rows, [F(3), F(3)], 1) == [F(3)]


@given(st.lists(st.lists(fracs, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_matches_column_rank(mat):
    rows = ex.dense_to_sparse(mat)
    cols = [{i: mat[i][j] for i in range(len(mat)) if mat[i][j] != 0} for j in range(3)]
    assert ex.rank(rows, 3) == ex.column_rank(cols)
