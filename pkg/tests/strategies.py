"""Hypothesis strategies for small exact matrices."""

from hypothesis import strategies as st

from maslov_witt.exactcore import Field, Matrix

FIELDS = [Field.GF(3), Field.GF(5), Field.GF(7), Field.Q()]

fields = st.sampled_from(FIELDS)
small_ints = st.integers(min_value=-10, max_value=10)


@st.composite
def matrices(draw, n=None, m=None, field=None):
    F = draw(fields) if field is None else field
    n = draw(st.integers(1, 4)) if n is None else n
    m = n if m is None else m
    rows = draw(st.lists(st.lists(small_ints, min_size=m, max_size=m), min_size=n, max_size=n))
    return Matrix(F, rows)


@st.composite
def symmetric_matrices(draw, n=None, field=None):
    F = draw(fields) if field is None else field
    n = draw(st.integers(1, 5)) if n is None else n
    vals = draw(st.lists(small_ints, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2))
    rows = [[0] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = next(it)
    return Matrix(F, rows)
