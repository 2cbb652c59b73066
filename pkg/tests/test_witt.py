import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maslov_witt.exactcore import DomainError, Field, Matrix
from maslov_witt.witt import (
    F_map,
    SymmetricForm,
    WittClass,
    WittModI2,
    hasse_invariant,
    is_isometric,
    is_neutral,
    isometry_record,
    mod_I2,
    orthogonal_sum,
    regularize,
    signed_discriminant,
    witt_class,
    witt_class_of_diagonal,
    witt_sum,
)

from strategies import symmetric_matrices

Q = Field.Q()
F3, F5, F7 = Field.GF(3), Field.GF(5), Field.GF(7)


# -- brute-force oracle over GF(3): isometry by search over GL_n ------------------------

def _gl(F, n):
    for entries in itertools.product(range(F.p), repeat=n * n):
        C = Matrix(F, [entries[i * n:(i + 1) * n] for i in range(n)])
        if C.is_invertible():
            yield C


def brute_isometric(q1: SymmetricForm, q2: SymmetricForm) -> bool:
    if q1.support_dim != q2.support_dim:
        return False
    return any(C.T @ q1.gram @ C == q2.gram for C in _gl(q1.field, q1.support_dim))


def brute_neutral(q: SymmetricForm) -> bool:
    """Nondegenerate with a totally isotropic subspace of half the dimension (GF(p), dim <= 4)."""
    n = q.support_dim
    if n % 2 or not q.is_nondegenerate():
        return False
    if n == 0:
        return True
    F = q.field
    vecs = [Matrix(F, [[x] for x in v]) for v in itertools.product(range(F.p), repeat=n) if any(v)]
    iso = [v for v in vecs if (v.T @ q.gram @ v).is_zero()]
    for sub in itertools.combinations(iso, n // 2):
        B = Matrix.hstack(list(sub))
        if B.rank() == n // 2 and (B.T @ q.gram @ B).is_zero():
            return True
    return False


def test_regularize_example():
    q = SymmetricForm.of(Q, [[1, 1, 0], [1, 0, 0], [0, 0, 0]])
    reg, rad = regularize(q)
    assert rad == 1
    assert reg.support_dim == 2
    assert is_neutral(reg)


def test_signed_discriminant_examples():
    assert signed_discriminant(SymmetricForm.hyperbolic(Q)) == 1
    assert signed_discriminant(SymmetricForm.diagonal(Q, [1, 1])) == -1
    with pytest.raises(DomainError):
        signed_discriminant(SymmetricForm.of(Q, [[0]]))


def test_witt_fp_examples():
    one = witt_class_of_diagonal(F3, [1])
    assert (one + one + one + one).is_zero()
    assert not (one + one).is_zero()
    assert witt_class(SymmetricForm.diagonal(F5, [1, 1])).is_zero()


def test_witt_q_examples():
    c = witt_class(SymmetricForm.diagonal(Q, [1, 1, -1]))
    assert c == witt_class_of_diagonal(Q, [1])
    assert witt_class(SymmetricForm.diagonal(Q, [2, -2])).is_zero()
    # <1,1> and <2,2> are isometric over Q, <1,1> and <3,3> are not
    assert is_isometric(SymmetricForm.diagonal(Q, [1, 1]), SymmetricForm.diagonal(Q, [2, 2]))
    assert not is_isometric(SymmetricForm.diagonal(Q, [1, 1]), SymmetricForm.diagonal(Q, [3, 3]))
    assert hasse_invariant(SymmetricForm.diagonal(Q, [-1, -1]), 2) == -1


def test_empty_form():
    e = SymmetricForm.empty(Q)
    assert e.is_nondegenerate()
    assert witt_class(e).is_zero()


def test_mod_I2_and_F():
    assert F_map(1, 2, Q) == WittModI2(Q, 0, -1)
    assert mod_I2(witt_class_of_diagonal(Q, [1, -3])) == WittModI2(Q, 0, 3)
    # F(lambda, 0) is the Pfister class, whose signed disc is lambda
    assert F_map(5, 0, Q) == WittModI2(Q, 0, 5)
    assert F_map(1, 4, F3) == WittModI2.zero(F3)


def test_to_json_is_exact():
    c = witt_class_of_diagonal(Q, [Fraction(1, 3), 5])
    js = c.to_json()
    assert js["disc"] == "-15" and js["signature"] == 2
    assert all(isinstance(v["disc"], str) for v in js["residues"].values())


@pytest.mark.parametrize("n", [1, 2])
def test_isometry_against_brute_force(n):
    forms = []
    for vals in itertools.product(range(3), repeat=n * (n + 1) // 2):
        rows = [[0] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = next(it)
        forms.append(SymmetricForm.of(F3, rows))
    for a, b in itertools.combinations(forms, 2):
        assert is_isometric(a, b) == brute_isometric(a, b)


def test_neutrality_against_brute_force():
    for diag in itertools.product(range(1, 3), repeat=4):
        q = SymmetricForm.diagonal(F3, diag)
        assert witt_class(q).is_zero() == brute_neutral(q)
    for diag in itertools.product(range(1, 5), repeat=2):
        q = SymmetricForm.diagonal(F5, diag)
        assert witt_class(q).is_zero() == brute_neutral(q)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_witt_group_laws(data):
    a = data.draw(symmetric_matrices())
    b = data.draw(symmetric_matrices(field=a.field))
    qa, qb = SymmetricForm(a), SymmetricForm(b)
    ca, cb = witt_class(qa), witt_class(qb)
    assert witt_class(orthogonal_sum(qa, qb)) == ca + cb
    assert witt_class(orthogonal_sum(qa, -qa)).is_zero()
    assert ca - ca == WittClass.zero(a.field)
    assert witt_sum([ca, cb, -cb], a.field) == ca


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_invariants_under_congruence(data):
    S = data.draw(symmetric_matrices())
    C = data.draw(symmetric_matrices(n=S.nrows, field=S.field))
    C = C + Matrix.identity(S.field, S.nrows).scale(11)
    if not C.is_invertible():
        return
    q = SymmetricForm(S)
    assert isometry_record(q) == isometry_record(q.transform(C))
    assert is_isometric(q, q.transform(C))


@settings(max_examples=40, deadline=None)
@given(symmetric_matrices())
def test_regularization_keeps_class(S):
    q = SymmetricForm(S)
    reg, rad = regularize(q)
    assert reg.is_nondegenerate()
    assert rad == q.radical_dim()
    assert witt_class(reg) == witt_class(q)
