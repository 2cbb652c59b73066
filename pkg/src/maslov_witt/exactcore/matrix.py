"""Dense exact matrices over a :class:`~maslov_witt.exactcore.field.Field`."""

from __future__ import annotations

from typing import NamedTuple, Sequence

from fractions import Fraction
from math import gcd

from .field import DomainError, Field, FpElement


class RREF(NamedTuple):
    rank: int
    pivots: tuple
    reduced: "Matrix"
    kernel: tuple  # column vectors (as n x 1 matrices) spanning the null space
    transform: "Matrix"  # invertible T with T @ M == reduced


def _common_denominator(rows) -> int:
    d = 1
    for r in rows:
        for x in r:
            q = x.denominator
            if q != 1 and d % q:
                d = d * q // gcd(d, q)
    return d


class Matrix:
    """Immutable dense matrix.  Entries are field elements, stored row-major."""

    __slots__ = ("field", "rows", "ncols", "_hash")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not self.rows:
                raise DomainError("column count required for a matrix with no rows")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise DomainError("ragged rows")
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        # rows must already hold field elements
        m = object.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.ncols = ncols
        m._hash = None
        return m

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        z = field.zero
        return cls._raw(field, [[z] * m for _ in range(n)], m)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, field: Field, entries) -> "Matrix":
        entries = [field(x) for x in entries]
        n = len(entries)
        z = field.zero
        return cls._raw(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def scalar(cls, field: Field, n: int, c) -> "Matrix":
        return cls.diag(field, [c] * n)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a matrix from a rectangular grid of blocks."""
        field = blocks[0][0].field
        rows = []
        for brow in blocks:
            h = brow[0].nrows
            if any(b.nrows != h for b in brow):
                raise DomainError("block heights disagree")
            for i in range(h):
                rows.append([x for b in brow for x in b.rows[i]])
        ncols = sum(b.ncols for b in blocks[0])
        return cls._raw(field, rows, ncols)

    @classmethod
    def block_diag(cls, field: Field, mats: Sequence["Matrix"]) -> "Matrix":
        n = sum(m.nrows for m in mats)
        k = sum(m.ncols for m in mats)
        z = field.zero
        out = [[z] * k for _ in range(n)]
        r0 = c0 = 0
        for m in mats:
            for i, row in enumerate(m.rows):
                out[r0 + i][c0:c0 + m.ncols] = row
            r0 += m.nrows
            c0 += m.ncols
        return cls._raw(field, out, k)

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        return cls.block([list(mats)])

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        return cls.block([[m] for m in mats])

    # -- basic protocol ----------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.serialize(x) for x in r) for r in self.rows)
        return f"Matrix[{self.field!r}]({self.nrows}x{self.ncols}: {body})"

    def to_list(self) -> list:
        return [[self.field.serialize(x) for x in r] for r in self.rows]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise DomainError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._raw(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._raw(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        F = self.field
        if not F.is_rational:
            p = F.p
            colv = [[b.v for b in c] for c in cols]
            out = []
            for r in self.rows:
                rv = [a.v for a in r]
                out.append([FpElement(sum(a * b for a, b in zip(rv, c)), p) for c in colv])
            return Matrix._raw(F, out, other.ncols)
        # integer numerators over one common denominator per factor
        da = _common_denominator(self.rows)
        db = _common_denominator(other.rows)
        na = [[a.numerator * (da // a.denominator) for a in r] for r in self.rows]
        nb = [[b.numerator * (db // b.denominator) for b in c] for c in cols]
        d = da * db
        out = [[Fraction(sum(a * b for a, b in zip(r, c)), d) for c in nb] for r in na]
        return Matrix._raw(F, out, other.ncols)

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix._raw(self.field, [[] for _ in range(self.ncols)], 0)
        return Matrix._raw(self.field, [list(c) for c in zip(*self.rows)], self.nrows)

    def sub(self, rows, cols) -> "Matrix":
        rows = list(rows)
        cols = list(cols)
        return Matrix._raw(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def blk(self, i: int, j: int, h: int, w: int | None = None) -> "Matrix":
        """The (i, j) block when the matrix is cut into h x w tiles."""
        w = h if w is None else w
        return self.sub(range(i * h, (i + 1) * h), range(j * w, (j + 1) * w))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i + 1, self.ncols)
        )

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    # -- elimination -------------------------------------------------------

    def _eliminate(self, want_transform: bool):
        """Gauss-Jordan on a copy; returns (A, T, pivots) with entries as raw values.

        Over GF(p) raw values are ints in [0, p); over Q they are Fractions.
        """
        F = self.field
        n, m = self.shape
        fp = not F.is_rational
        p = F.p
        if fp:
            A = [[x.v for x in r] for r in self.rows]
            one, zero = 1, 0
        else:
            A = [list(r) for r in self.rows]
            one, zero = Fraction(1), Fraction(0)
        T = [[one if i == j else zero for j in range(n)] for i in range(n)] if want_transform else None
        pivots = []
        r = 0
        for c in range(m):
            if r == n:
                break
            piv = next((i for i in range(r, n) if A[i][c]), None)
            if piv is None:
                continue
            A[r], A[piv] = A[piv], A[r]
            if fp:
                inv = pow(A[r][c], -1, p)
                A[r] = [x * inv % p for x in A[r]]
            else:
                inv = 1 / A[r][c]
                A[r] = [x * inv if x else x for x in A[r]]
            if T is not None:
                T[r], T[piv] = T[piv], T[r]
                T[r] = [x * inv % p for x in T[r]] if fp else [x * inv if x else x for x in T[r]]
            Ar = A[r]
            Tr = T[r] if T is not None else None
            for i in range(n):
                if i != r and A[i][c]:
                    f = A[i][c]
                    if fp:
                        A[i] = [(x - f * y) % p for x, y in zip(A[i], Ar)]
                        if T is not None:
                            T[i] = [(x - f * y) % p for x, y in zip(T[i], Tr)]
                    else:
                        A[i] = [x - f * y if y else x for x, y in zip(A[i], Ar)]
                        if T is not None:
                            T[i] = [x - f * y if y else x for x, y in zip(T[i], Tr)]
            pivots.append(c)
            r += 1
        return A, T, pivots

    def _wrap(self, raw, ncols: int) -> "Matrix":
        F = self.field
        if F.is_rational:
            return Matrix._raw(F, raw, ncols)
        p = F.p
        return Matrix._raw(F, [[FpElement(x, p) for x in r] for r in raw], ncols)

    def rref(self) -> RREF:
        """Exact reduced row echelon form with the row transform and a kernel basis."""
        F = self.field
        n, m = self.shape
        A, T, pivots = self._eliminate(True)
        reduced = self._wrap(A, m)
        free = [c for c in range(m) if c not in pivots]
        kernel = []
        for fc in free:
            v = [F.zero] * m
            v[fc] = F.one
            for row, pc in enumerate(pivots):
                v[pc] = -reduced.rows[row][fc]
            kernel.append(Matrix._raw(F, [[x] for x in v], 1))
        return RREF(len(pivots), tuple(pivots), reduced, tuple(kernel), self._wrap(T, n))

    def rank(self) -> int:
        return len(self._eliminate(False)[2])

    def kernel(self) -> tuple:
        return self.rref().kernel

    def det(self):
        if not self.is_square():
            raise DomainError("determinant of a non-square matrix")
        F = self.field
        n = self.nrows
        A = [list(r) for r in self.rows]
        d = F.one
        for c in range(n):
            piv = next((i for i in range(c, n) if A[i][c]), None)
            if piv is None:
                return F.zero
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = -d
            d = d * A[c][c]
            inv = F.one / A[c][c]
            for i in range(c + 1, n):
                if A[i][c]:
                    f = A[i][c] * inv
                    A[i] = [x - f * y for x, y in zip(A[i], A[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DomainError("inverse of a non-square matrix")
        res = self.rref()
        if res.rank < self.nrows:
            raise DomainError("matrix is singular")
        return res.transform

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows


def congruence_diagonalize(S: Matrix) -> tuple[list, Matrix]:
    """Diagonalise a symmetric matrix by congruence.

    Returns ``(d, C)`` with ``C`` invertible and ``C.T @ S @ C == diag(d)``.
    The number of zeros in ``d`` is the dimension of the radical.
    """
    if not S.is_symmetric():
        raise DomainError("congruence diagonalisation needs a symmetric matrix")
    F = S.field
    n = S.nrows
    A = [list(r) for r in S.rows]
    C = [list(r) for r in Matrix.identity(F, n).rows]

    def add_col_row(i, j, f):
        # column i += f * column j, then row i += f * row j  (keeps A symmetric)
        for r in range(n):
            A[r][i] = A[r][i] + f * A[r][j]
        A[i] = [x + f * y for x, y in zip(A[i], A[j])]
        for r in range(n):
            C[r][i] = C[r][i] + f * C[r][j]

    def swap(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            C[r][i], C[r][j] = C[r][j], C[r][i]

    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # diagonal entries vanish here, so the new A[i][i] is 2 A[i][j] != 0
            add_col_row(i, j, F.one)
            piv = i
        if piv != k:
            swap(piv, k)
        inv = F.one / A[k][k]
        for r in range(k + 1, n):
            if A[r][k]:
                add_col_row(r, k, -A[r][k] * inv)
    d = [A[i][i] for i in range(n)]
    return d, Matrix._raw(F, C, n)


def congruence_diagonal(S: Matrix) -> list:
    """Diagonal entries of some congruence diagonalisation of symmetric ``S``.

    Same multiset of square classes as :func:`congruence_diagonalize`, without
    tracking the transform; works on the symmetric Schur complement only.
    """
    if not S.is_symmetric():
        raise DomainError("congruence diagonalisation needs a symmetric matrix")
    F = S.field
    n = S.nrows
    fp = not F.is_rational
    p = F.p
    A = [[x.v for x in r] for r in S.rows] if fp else [list(r) for r in S.rows]
    out = []
    live = list(range(n))
    while live:
        k = next((i for i in live if A[i][i]), None)
        if k is None:
            pair = next(((i, j) for a, i in enumerate(live) for j in live[a + 1:] if A[i][j]), None)
            if pair is None:
                out.extend([0] * len(live))
                break
            i, j = pair
            # e_i += e_j: the new A[i][i] is 2 A[i][j] since both diagonals vanish
            for r in live:
                A[r][i] = A[r][i] + A[r][j]
            for c in live:
                A[i][c] = A[i][c] + A[j][c]
            if fp:
                for r in live:
                    A[r][i] %= p
                    A[i][r] %= p
            k = i
        piv = A[k][k]
        out.append(piv)
        live.remove(k)
        Ak = A[k]
        if fp:
            inv = pow(piv, -1, p)
            for r in live:
                f = Ak[r]
                if f:
                    f = f * inv % p
                    Ar = A[r]
                    for c in live:
                        if Ak[c]:
                            Ar[c] = (Ar[c] - f * Ak[c]) % p
        else:
            for r in live:
                f = Ak[r]
                if f:
                    f = f / piv
                    Ar = A[r]
                    for c in live:
                        if Ak[c]:
                            Ar[c] = Ar[c] - f * Ak[c]
    if fp:
        return [FpElement(x, p) for x in out]
    return [Fraction(x) for x in out]
