import random

import pytest
from hypothesis import given, settings, strategies as st

from maslov_witt.exactcore import DomainError, Field, Matrix
from maslov_witt.symplectic import (
    Lagrangian,
    act,
    affine_diff,
    beta,
    common_transverse,
    generator_h,
    generator_lower,
    generator_m,
    generator_upper,
    is_lagrangian,
    is_symplectic,
    project_along,
    random_lagrangian,
    random_symplectic,
    restrict,
    symplectic_inverse,
    transverse,
)

Q = Field.Q()
F3, F5, F7 = Field.GF(3), Field.GF(5), Field.GF(7)
FIELDS = [F3, F5, F7, Q]


def m1(F, v):
    return Matrix(F, [[v]])


def test_beta_standard_pair():
    L, Ls = Lagrangian.L(Q, 1), Lagrangian.Lstar(Q, 1)
    # with omega(u, v) = u^T J v and J = [[0, 1], [-1, 0]]
    assert beta(L, Ls) == m1(Q, 1)
    assert beta(L, L).is_zero()
    assert beta(L, Ls).is_invertible()


def test_affine_diff_translation_sign():
    for g in (1, 2):
        q = Matrix(Q, [[1, 2], [2, -1]]).sub(range(g), range(g))
        L, Ls = Lagrangian.L(Q, g), Lagrangian.Lstar(Q, g)
        assert affine_diff(Ls, L, act(generator_lower(q), L)) == q
        assert affine_diff(Ls, L, L).is_zero()
    with pytest.raises(DomainError):
        affine_diff(Lagrangian.L(Q, 1), Lagrangian.L(Q, 1), Lagrangian.Lstar(Q, 1))


def test_project_along_examples():
    L, Ls = Lagrangian.L(Q, 1), Lagrangian.Lstar(Q, 1)
    p1, p2 = project_along(L, L, Ls)
    assert p1 == Matrix.identity(Q, 1) and p2.is_zero()
    X = Lagrangian(Matrix(Q, [[1], [1]]))
    p1, p2 = project_along(X, L, Ls)
    assert p1.rank() == 1 and p2.rank() == 1
    assert L.basis @ p1 + Ls.basis @ p2 == X.basis
    with pytest.raises(DomainError):
        project_along(X, L, L)


def test_generators():
    I1 = Matrix.identity(Q, 1)
    assert generator_upper(Matrix.zeros(Q, 1)) == Matrix.identity(Q, 2)
    assert generator_m(I1) == Matrix(Q, [[0, -1], [1, 0]])
    y = m1(Q, 3)
    assert generator_m(y) == generator_lower(y) @ generator_upper(-y.inverse()) @ generator_lower(y)
    p, q = Matrix(Q, [[2, 1], [1, 1]]), Matrix(Q, [[0, 1], [1, 3]])
    assert generator_m(-p) @ generator_m(q) == generator_h(p.inverse() @ q)
    with pytest.raises(DomainError):
        generator_upper(Matrix(Q, [[0, 1], [0, 0]]))


def test_lower_acts_as_graph():
    q = Matrix(F5, [[1, 2], [2, 0]])
    assert act(generator_lower(q), Lagrangian.L(F5, 2)) == Lagrangian.graph(q)
    assert act(generator_upper(q), Lagrangian.Lstar(F5, 2)) == Lagrangian.cograph(q)


def test_common_transverse_examples():
    L, Ls = Lagrangian.L(F3, 1), Lagrangian.Lstar(F3, 1)
    got = common_transverse([L, Ls, Lagrangian.graph(m1(F3, 1))])
    assert got == Lagrangian.graph(m1(F3, 2))
    graphs = [Lagrangian.graph(m1(Q, c)) for c in range(3)]
    got = common_transverse(graphs)
    assert all(transverse(got, lam) for lam in graphs)
    assert transverse(common_transverse([Lagrangian.L(Q, 2)]), Lagrangian.L(Q, 2))


def test_lagrangian_validation():
    with pytest.raises(DomainError):
        Lagrangian(Matrix(Q, [[1, 0], [0, 1], [0, 0], [0, 0]]).sub(range(4), [0]).T)
    assert not is_lagrangian(Matrix(Q, [[1, 0], [0, 0], [0, 1], [0, 0]]))


def _rng(seed):
    return random.Random(seed)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 3), st.integers(0, 10**6))
def test_action_and_naturality(F, g, seed):
    rng = _rng(seed)
    phi = random_symplectic(F, g, rng)
    lam, M = random_lagrangian(F, g, rng), random_lagrangian(F, g, rng)
    assert is_symplectic(phi)
    assert phi @ symplectic_inverse(phi) == Matrix.identity(F, 2 * g)
    assert is_lagrangian(act(phi, lam).basis)
    assert beta(lam, M) == -beta(M, lam).T
    assert transverse(lam, M) == transverse(act(phi, lam), act(phi, M))
    lhs = restrict(phi, M).T @ beta(act(phi, lam), act(phi, M)) @ restrict(phi, lam)
    assert lhs == beta(lam, M)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 3), st.integers(0, 10**6))
def test_affine_diff_cocycle(F, g, seed):
    rng = _rng(seed)
    lams = [random_lagrangian(F, g, rng) for _ in range(3)]
    X = common_transverse(lams)
    a, b, c = lams
    d = affine_diff
    assert d(X, a, b) + d(X, b, c) == d(X, a, c)
    assert d(X, a, b) == -d(X, b, a)
    assert d(X, a, b).is_symmetric()
