import random

import pytest
from hypothesis import given, settings, strategies as st

from maslov_witt.exactcore import DomainError, Field, Matrix
from maslov_witt.maslov import (
    LagrangianPath,
    kashiwara_form,
    loop_variants,
    maslov_of_loop,
    maslov_of_path,
    maslov_triple,
    nondegenerate_iff_transverse,
    random_path,
    shortcut,
    sylvester_matrix,
    transversality_witness,
)
from maslov_witt.symplectic import (
    Lagrangian,
    common_transverse,
    random_lagrangian,
    random_symplectic,
    transverse,
)
from maslov_witt.witt import is_isometric, orthogonal_sum, witt_class

Q = Field.Q()
F3, F5, F7 = Field.GF(3), Field.GF(5), Field.GF(7)
FIELDS = [F3, F5, F7, Q]


def std(F, g=1):
    return Lagrangian.L(F, g), Lagrangian.Lstar(F, g)


def graph(F, v):
    return Lagrangian.graph(Matrix(F, [[v]]))


def test_sylvester_examples():
    L, Ls = std(Q)
    assert sylvester_matrix(LagrangianPath([L, Ls, L])).gram.is_zero()
    assert sylvester_matrix(LagrangianPath([L, Ls])).support_dim == 0
    # sign follows the J convention: d_{L*}(L, graph 1) = +1
    assert sylvester_matrix(LagrangianPath([L, Ls, graph(Q, 1)])).gram == Matrix(Q, [[1]])


def test_path_requires_transversality():
    L, _ = std(Q)
    with pytest.raises(DomainError):
        LagrangianPath([L, L])


def test_nondegenerate_iff_transverse_examples():
    L, Ls = std(Q)
    assert nondegenerate_iff_transverse(LagrangianPath([L, Ls, L])) == (False, False)
    assert nondegenerate_iff_transverse(LagrangianPath([L, Ls])) == (True, True)


def test_witness_n1():
    L, Ls = std(Q)
    alpha = LagrangianPath([L, Ls, graph(Q, 2)])
    S = sylvester_matrix(alpha).gram
    E0, Tn, s = transversality_witness(alpha)
    from maslov_witt.symplectic import beta
    assert S @ E0 == Tn @ beta(alpha[0], alpha[-1])
    assert s.nrows == 0 or s.is_invertible()


def test_shortcut_trivial_and_loop_tail():
    rng = random.Random(3)
    alpha = random_path(F7, 2, 4, rng)
    sub, short = shortcut(alpha, 1, 2)
    assert short.nodes == alpha.nodes and sub.n == 0
    L, Ls = std(Q)
    M = graph(Q, 5)
    looped = LagrangianPath([L, Ls, graph(Q, 1), L, M])
    sub, short = shortcut(looped, 2, 4)
    assert is_isometric(sylvester_matrix(looped),
                        orthogonal_sum(sylvester_matrix(sub), sylvester_matrix(short)))


def test_loop_examples():
    L, Ls = std(Q)
    assert maslov_of_loop(LagrangianPath([L, Ls, L])).is_zero()
    with pytest.raises(DomainError):
        maslov_of_loop(LagrangianPath([L, Ls]))


def test_triple_examples():
    L, Ls = std(Q)
    G = graph(Q, 1)
    assert maslov_triple(L, L, G).is_zero()
    assert maslov_triple(L, Ls, G) == -maslov_triple(Ls, L, G)
    X = common_transverse([L, Ls, G])
    from maslov_witt.symplectic import affine_diff
    from maslov_witt.witt import witt_class_of_diagonal
    d = lambda a, b: affine_diff(X, a, b)[0, 0]
    expected = witt_class_of_diagonal(Q, [d(L, G), -d(L, Ls), -d(Ls, G)])
    assert maslov_triple(L, Ls, G) == expected


def test_kashiwara_examples():
    L, Ls = std(Q)
    assert kashiwara_form(L, L, L).gram.is_zero()
    k = kashiwara_form(L, Ls, graph(Q, 1))
    assert k.gram.rank() == 3
    # the J convention flips the sign relative to the -ab + bc + ca display
    assert witt_class(k).signature == -1
    rng = random.Random(11)
    for _ in range(20):
        a, b, c = (random_lagrangian(F5, 1, rng) for _ in range(3))
        if transverse(a, b) and transverse(b, c) and transverse(a, c):
            assert kashiwara_form(a, b, c).is_nondegenerate()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 2), st.integers(2, 6), st.integers(0, 10**6))
def test_path_properties(F, g, nodes, seed):
    rng = random.Random(seed)
    alpha = random_path(F, g, nodes, rng)
    nd, tr = nondegenerate_iff_transverse(alpha)
    assert nd == tr
    assert maslov_of_path(alpha) == -maslov_of_path(alpha.inverse())
    assert maslov_of_path(alpha.concat(alpha.inverse())).is_zero()
    if alpha.n >= 1:
        S = sylvester_matrix(alpha).gram
        E0, Tn, s = transversality_witness(alpha)
        from maslov_witt.symplectic import beta
        assert S @ E0 == Tn @ beta(alpha[0], alpha[-1])
        assert s.nrows == 0 or s.is_invertible()
    phi = random_symplectic(F, g, rng)
    assert witt_class(sylvester_matrix(alpha.act(phi))) == maslov_of_path(alpha)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 2), st.integers(0, 10**6))
def test_loop_variants_agree(F, g, seed):
    rng = random.Random(seed)
    alpha = random_path(F, g, 3, rng)
    X = common_transverse([alpha[0], alpha[-1]])
    loop = LagrangianPath(list(alpha.nodes) + [X, alpha[0]])
    classes = {witt_class(v) for v in loop_variants(loop)}
    assert len(classes) == 1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 2), st.integers(0, 10**6))
def test_triple_properties(F, g, seed):
    rng = random.Random(seed)
    a, b, c, d = (random_lagrangian(F, g, rng) for _ in range(4))
    m = maslov_triple
    assert m(a, b, c) == m(a, b, c, rng=rng)
    phi = random_symplectic(F, g, rng)
    from maslov_witt.symplectic import act
    assert m(*(act(phi, x) for x in (a, b, c))) == m(a, b, c)
    assert (m(b, c, d) - m(a, c, d) + m(a, b, d) - m(a, b, c)).is_zero()
    assert m(a, b, c) == -m(b, a, c) == m(b, c, a)
