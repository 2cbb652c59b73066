"""Lagrangians in H(L) = L + L*, the pairings beta, affine differences and generators.

Coordinates: a vector of H(L) = k^g + k^g is a column (x, xi).  The
symplectic form is the Gram matrix ``J = [[0, 1], [-1, 0]]`` (blocks of
size g), i.e. ``omega((x, xi), (y, eta)) = eta(x) - xi(y)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .exactcore import DomainError, Field, Matrix


class NotFound(LookupError):
    """A finite search for a common transverse Lagrangian came back empty."""


def gram_J(field: Field, g: int) -> Matrix:
    I = Matrix.identity(field, g)
    Z = Matrix.zeros(field, g)
    return Matrix.block([[Z, I], [-I, Z]])


def omega(u: Matrix, v: Matrix) -> object:
    """omega(u, v) for column vectors u, v of length 2g."""
    g = u.nrows // 2
    return (u.T @ gram_J(u.field, g) @ v)[0, 0]


def _column_canonical(B: Matrix) -> Matrix:
    """Column-reduced echelon basis of the column span of ``B``."""
    red = B.T.rref()
    return red.reduced.sub(range(red.rank), range(B.nrows)).T


@dataclass(frozen=True)
class SymplecticSpace:
    g: int
    field: Field

    def __post_init__(self):
        if self.g < 1:
            raise DomainError("genus must be at least 1")

    @property
    def J(self) -> Matrix:
        return gram_J(self.field, self.g)

    @property
    def L(self) -> "Lagrangian":
        return Lagrangian.L(self.field, self.g)

    @property
    def Lstar(self) -> "Lagrangian":
        return Lagrangian.Lstar(self.field, self.g)


def is_lagrangian(B: Matrix) -> bool:
    """Columns of B span a g-dimensional isotropic subspace of k^2g."""
    if B.nrows % 2 or B.nrows == 0:
        return False
    g = B.nrows // 2
    if B.ncols != g or B.rank() != g:
        return False
    return (B.T @ gram_J(B.field, g) @ B).is_zero()


def is_symplectic(M: Matrix) -> bool:
    if not M.is_square() or M.nrows % 2 or M.nrows == 0:
        return False
    J = gram_J(M.field, M.nrows // 2)
    return M.T @ J @ M == J


class Lagrangian:
    """A Lagrangian subspace stored through its canonical column-reduced basis."""

    __slots__ = ("basis",)

    def __init__(self, basis: Matrix, *, check: bool = True):
        if check and not is_lagrangian(basis):
            raise DomainError("columns do not span a Lagrangian")
        self.basis = _column_canonical(basis)

    @classmethod
    def L(cls, field: Field, g: int) -> "Lagrangian":
        return cls(Matrix.vstack([Matrix.identity(field, g), Matrix.zeros(field, g)]))

    @classmethod
    def Lstar(cls, field: Field, g: int) -> "Lagrangian":
        return cls(Matrix.vstack([Matrix.zeros(field, g), Matrix.identity(field, g)]))

    @classmethod
    def graph(cls, q: Matrix) -> "Lagrangian":
        """lower(q) . L = {(v, q v)}."""
        return cls(Matrix.vstack([Matrix.identity(q.field, q.nrows), q]))

    @classmethod
    def cograph(cls, p: Matrix) -> "Lagrangian":
        """upper(p) . L* = {(p w, w)}."""
        return cls(Matrix.vstack([p, Matrix.identity(p.field, p.nrows)]))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def g(self) -> int:
        return self.basis.ncols

    def __eq__(self, other):
        return isinstance(other, Lagrangian) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"Lagrangian({self.basis.to_list()})"

    def to_json(self) -> list:
        return self.basis.to_list()


def _check_pair(a: Lagrangian, b: Lagrangian):
    if a.field != b.field or a.g != b.g:
        raise DomainError("Lagrangians live in different symplectic spaces")


def transverse(a: Lagrangian, b: Lagrangian) -> bool:
    _check_pair(a, b)
    return Matrix.hstack([a.basis, b.basis]).rank() == 2 * a.g


def beta(lam: Lagrangian, M: Lagrangian) -> Matrix:
    """Matrix of beta_{lam, M}: lam -> M*, entry (i, j) = omega(lam_j, M_i)."""
    _check_pair(lam, M)
    J = gram_J(lam.field, lam.g)
    return (lam.basis.T @ J @ M.basis).T


def affine_diff(X: Lagrangian, lam: Lagrangian, M: Lagrangian) -> Matrix:
    """d_X(lam, M) = -(beta_{X,M})^-1 beta_{lam,M} (beta_{lam,X})^-1, a form on X*."""
    if not transverse(lam, X) or not transverse(M, X):
        raise DomainError("affine difference needs both Lagrangians transverse to X")
    return -(beta(X, M).inverse() @ beta(lam, M) @ beta(lam, X).inverse())


def project_along(X: Lagrangian, l1: Lagrangian, l2: Lagrangian) -> tuple[Matrix, Matrix]:
    """Projections of X onto l1 (parallel to l2) and onto l2 (parallel to l1).

    Returned as matrices in the stored bases: ``X.basis == l1.basis @ p1 + l2.basis @ p2``.
    """
    if not transverse(l1, l2):
        raise DomainError("projection needs a transverse pair")
    p1 = beta(l1, l2).inverse() @ beta(X, l2)
    p2 = beta(l2, l1).inverse() @ beta(X, l1)
    return p1, p2


# -- generators ---------------------------------------------------------------

def _require_symmetric(q: Matrix):
    if not q.is_symmetric():
        raise DomainError("expected a symmetric matrix")


def generator_upper(q: Matrix) -> Matrix:
    """[[1, q], [0, 1]], an element of the pointwise stabiliser of L."""
    _require_symmetric(q)
    F, g = q.field, q.nrows
    return Matrix.block([[Matrix.identity(F, g), q], [Matrix.zeros(F, g), Matrix.identity(F, g)]])


def generator_lower(q: Matrix) -> Matrix:
    """[[1, 0], [q, 1]], an element of the pointwise stabiliser of L*."""
    _require_symmetric(q)
    F, g = q.field, q.nrows
    return Matrix.block([[Matrix.identity(F, g), Matrix.zeros(F, g)], [q, Matrix.identity(F, g)]])


def generator_h(x: Matrix) -> Matrix:
    """[[x, 0], [0, x^-T]]."""
    F, g = x.field, x.nrows
    return Matrix.block([[x, Matrix.zeros(F, g)], [Matrix.zeros(F, g), x.inverse().T]])


def generator_m(y: Matrix) -> Matrix:
    """[[0, -y^-T], [y, 0]]; for symmetric y this is lower(y) upper(-y^-1) lower(y)."""
    F, g = y.field, y.nrows
    return Matrix.block([[Matrix.zeros(F, g), -y.inverse().T], [y, Matrix.zeros(F, g)]])


def symplectic_inverse(M: Matrix) -> Matrix:
    """M^-1 = -J M^T J for symplectic M."""
    J = gram_J(M.field, M.nrows // 2)
    return -(J @ M.T @ J)


def act(phi: Matrix, lam: Lagrangian) -> Lagrangian:
    return Lagrangian(phi @ lam.basis, check=False)


def restrict(phi: Matrix, lam: Lagrangian) -> Matrix:
    """Matrix of phi|_lam : lam -> phi(lam) in the stored bases."""
    target = act(phi, lam)
    image = phi @ lam.basis
    rows = list(Matrix.hstack([target.basis]).T.rref().pivots)
    # pivot columns of target^T are independent rows of target
    A = target.basis.sub(rows, range(target.g))
    return A.inverse() @ image.sub(rows, range(target.g))


# -- common transverse ----------------------------------------------------------

def _diagonal_candidates(field: Field, g: int, limit: int):
    seen = set()
    for c in itertools.islice(field.ladder(), limit):
        q = Matrix.scalar(field, g, c)
        if q not in seen:
            seen.add(q)
            yield q
    for entries in itertools.product(list(itertools.islice(field.ladder(), min(limit, 5))), repeat=g):
        q = Matrix.diag(field, entries)
        if q not in seen:
            seen.add(q)
            yield q


def _symmetric_from_upper(field: Field, g: int, vals) -> Matrix:
    rows = [[field.zero] * g for _ in range(g)]
    it = iter(vals)
    for i in range(g):
        for j in range(i, g):
            v = next(it)
            rows[i][j] = rows[j][i] = v
    return Matrix(field, rows)


def common_transverse(lams, seed: int = 0) -> Lagrangian:
    """A Lagrangian transverse to every member of ``lams``.

    Graphs lower(q).L and cographs upper(q).L* are tried for q on a ladder of
    small diagonal matrices, then (over GF(p)) for every symmetric q, then in
    randomly moved symplectic frames.
    """
    lams = list(lams)
    if not lams:
        raise DomainError("empty list")
    F, g = lams[0].field, lams[0].g

    def ok(c):
        return all(transverse(c, lam) for lam in lams)

    for q in _diagonal_candidates(F, g, 2 * g + 7):
        for cand in (Lagrangian.graph(q), Lagrangian.cograph(q)):
            if ok(cand):
                return cand
    n = g * (g + 1) // 2
    if not F.is_rational and F.p ** n <= 20000:
        for vals in itertools.product(F.elements(), repeat=n):
            q = _symmetric_from_upper(F, g, vals)
            for cand in (Lagrangian.graph(q), Lagrangian.cograph(q)):
                if ok(cand):
                    return cand
    rng = random.Random(seed)
    for _ in range(2000):
        phi = random_symplectic(F, g, rng, length=3)
        q = random_symmetric(F, g, rng)
        cand = act(phi, Lagrangian.graph(q))
        if ok(cand):
            return cand
    raise NotFound("no common transverse Lagrangian found")


# -- random sampling helpers (used by tests, property suites and decompose) -----

def random_scalar(field: Field, rng: random.Random, bound: int = 10):
    if field.is_rational:
        return field(rng.randint(-bound, bound))
    return field(rng.randrange(field.p))


def random_symmetric(field: Field, g: int, rng: random.Random, bound: int = 10) -> Matrix:
    n = g * (g + 1) // 2
    return _symmetric_from_upper(field, g, [random_scalar(field, rng, bound) for _ in range(n)])


def random_invertible(field: Field, g: int, rng: random.Random, bound: int = 10) -> Matrix:
    while True:
        x = Matrix(field, [[random_scalar(field, rng, bound) for _ in range(g)] for _ in range(g)])
        if x.is_invertible():
            return x


def random_symplectic(field: Field, g: int, rng: random.Random, length: int = 4, bound: int = 3) -> Matrix:
    """Product of random elementary generators, alternating lower and upper."""
    M = Matrix.identity(field, 2 * g)
    start = rng.randrange(2)
    for i in range(length):
        q = random_symmetric(field, g, rng, bound)
        M = M @ (generator_lower(q) if (i + start) % 2 == 0 else generator_upper(q))
    return M


def random_lagrangian(field: Field, g: int, rng: random.Random) -> Lagrangian:
    return act(random_symplectic(field, g, rng, length=3), Lagrangian.L(field, g))
