"""Symmetric bilinear forms up to Witt equivalence.

Classes in W(k) are recorded by complete, canonical invariants so that two
classes compare equal exactly when the forms are Witt-equivalent:

* over GF(p): rank mod 2 and the signed discriminant;
* over Q: additionally the signature and the second residues at the odd
  primes (each an element of W(GF(p)), stored only when nonzero).  The
  residue at 2 is determined by the 2-adic valuation of the discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactcore import (
    INF,
    DomainError,
    Field,
    Matrix,
    congruence_diagonal,
    hilbert_symbol,
    relevant_places,
)
from .exactcore.field import factor


@dataclass(frozen=True)
class SymmetricForm:
    """A symmetric Gram matrix; ``support_dim`` is its size."""

    gram: Matrix

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise DomainError("Gram matrix is not symmetric")

    @classmethod
    def of(cls, field: Field, rows) -> "SymmetricForm":
        return cls(Matrix(field, rows))

    @classmethod
    def diagonal(cls, field: Field, entries) -> "SymmetricForm":
        return cls(Matrix.diag(field, entries))

    @classmethod
    def empty(cls, field: Field) -> "SymmetricForm":
        return cls(Matrix.zeros(field, 0, 0))

    @classmethod
    def hyperbolic(cls, field: Field, copies: int = 1) -> "SymmetricForm":
        h = Matrix(field, [[0, 1], [1, 0]])
        return cls(Matrix.block_diag(field, [h] * copies))

    @property
    def field(self) -> Field:
        return self.gram.field

    @property
    def support_dim(self) -> int:
        return self.gram.nrows

    def __neg__(self) -> "SymmetricForm":
        return SymmetricForm(-self.gram)

    def perp(self, other: "SymmetricForm") -> "SymmetricForm":
        """Orthogonal sum."""
        return SymmetricForm(Matrix.block_diag(self.field, [self.gram, other.gram]))

    def transform(self, C: Matrix) -> "SymmetricForm":
        return SymmetricForm(C.T @ self.gram @ C)

    def radical_dim(self) -> int:
        return self.support_dim - self.gram.rank()

    def is_nondegenerate(self) -> bool:
        return self.radical_dim() == 0

    def to_json(self) -> list:
        return self.gram.to_list()


def orthogonal_sum(*forms: SymmetricForm) -> SymmetricForm:
    if not forms:
        raise DomainError("orthogonal sum of nothing")
    return SymmetricForm(Matrix.block_diag(forms[0].field, [f.gram for f in forms]))


def regularize(q: SymmetricForm) -> tuple[SymmetricForm, int]:
    """Induced nondegenerate form on support / radical, and the radical dimension.

    The quotient is realised on a coordinate complement of the radical, so
    the result is a principal submatrix of the Gram matrix.
    """
    kernel = q.gram.kernel()
    if not kernel:
        return q, 0
    K = Matrix.hstack(list(kernel)).T
    pivots = set(K.rref().pivots)
    keep = [i for i in range(q.support_dim) if i not in pivots]
    return SymmetricForm(q.gram.sub(keep, keep)), len(kernel)


def _nonzero_diagonal(q: SymmetricForm) -> list:
    return [x for x in congruence_diagonal(q.gram) if x]


def _signed_disc_of_diag(field: Field, d: list) -> int:
    r = len(d)
    det = field.one
    for x in d:
        det = det * x
    if (r * (r - 1) // 2) % 2:
        det = -det
    return field.square_class(det)


def signed_discriminant(q: SymmetricForm) -> int:
    """Square class of (-1)^(r(r-1)/2) det(q) for a nondegenerate form."""
    if not q.is_nondegenerate():
        raise DomainError("signed discriminant of a degenerate form; regularize first")
    return _signed_disc_of_diag(q.field, _nonzero_diagonal(q))


# -- W(GF(p)) arithmetic on (rank mod 2, signed disc) pairs -----------------

def _twisted_add(field: Field, a: tuple, b: tuple) -> tuple:
    r1, d1 = a
    r2, d2 = b
    d = field.class_mul(d1, d2)
    if r1 and r2:
        d = field.class_mul(d, field.square_class(-1))
    return ((r1 + r2) % 2, d)


def _twisted_neg(field: Field, a: tuple) -> tuple:
    r, d = a
    if r:
        d = field.class_mul(d, field.square_class(-1))
    return (r, d)


@dataclass(frozen=True)
class WittClass:
    """Canonical invariant record of an element of W(k)."""

    field: Field
    rank_mod_2: int
    disc: int
    signature: int | None = None
    residues: tuple = ()  # sorted ((p, rank_mod_2, disc), ...) over Q, nonzero ones only

    @classmethod
    def zero(cls, field: Field) -> "WittClass":
        if field.is_rational:
            return cls(field, 0, 1, 0, ())
        return cls(field, 0, 1)

    def is_zero(self) -> bool:
        return self == WittClass.zero(self.field)

    def __add__(self, other: "WittClass") -> "WittClass":
        return witt_add(self, other)

    def __neg__(self) -> "WittClass":
        return witt_neg(self)

    def __sub__(self, other: "WittClass") -> "WittClass":
        return witt_add(self, witt_neg(other))

    def to_json(self) -> dict:
        out = {"rank_mod_2": self.rank_mod_2, "disc": str(self.disc)}
        if self.field.is_rational:
            out["signature"] = self.signature
            out["residues"] = {str(p): {"rank_mod_2": r, "disc": str(d)} for p, r, d in self.residues}
        return out


@dataclass(frozen=True)
class WittModI2:
    """Element of W(k)/I^2 as (rank mod 2, signed discriminant)."""

    field: Field
    rank_mod_2: int
    disc: int

    @classmethod
    def zero(cls, field: Field) -> "WittModI2":
        return cls(field, 0, 1)

    def __add__(self, other: "WittModI2") -> "WittModI2":
        if self.field != other.field:
            raise DomainError("field mismatch")
        r, d = _twisted_add(self.field, (self.rank_mod_2, self.disc), (other.rank_mod_2, other.disc))
        return WittModI2(self.field, r, d)

    def __neg__(self) -> "WittModI2":
        r, d = _twisted_neg(self.field, (self.rank_mod_2, self.disc))
        return WittModI2(self.field, r, d)

    def __sub__(self, other: "WittModI2") -> "WittModI2":
        return self + (-other)

    def to_json(self) -> dict:
        return {"rank_mod_2": self.rank_mod_2, "disc": str(self.disc)}


def _p_part(x: Fraction, p: int) -> tuple[int, Fraction]:
    e = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    return e, Fraction(num, den)


def _residues(diag: list) -> tuple:
    primes = set()
    for x in diag:
        for n in (x.numerator, x.denominator):
            if abs(n) > 1:
                primes.update(p for p in factor(n) if p != 2)
    out = []
    for p in sorted(primes):
        Fp = Field.GF(p)
        acc = (0, 1)
        for x in diag:
            e, u = _p_part(x, p)
            if e % 2:
                acc = _twisted_add(Fp, acc, (1, Fp.square_class(u)))
        if acc != (0, 1):
            out.append((p, acc[0], acc[1]))
    return tuple(out)


def witt_class_of_diagonal(field: Field, diag) -> WittClass:
    d = [field(x) for x in diag if field(x)]
    r = len(d)
    disc = _signed_disc_of_diag(field, d)
    if not field.is_rational:
        return WittClass(field, r % 2, disc)
    sig = sum(1 if x > 0 else -1 for x in d)
    return WittClass(field, r % 2, disc, sig, _residues(d))


def witt_class(q: SymmetricForm) -> WittClass:
    """Class in W(k) of the regularisation of ``q``."""
    return witt_class_of_diagonal(q.field, _nonzero_diagonal(q))


def witt_add(c1: WittClass, c2: WittClass) -> WittClass:
    if c1.field != c2.field:
        raise DomainError("field mismatch in Witt group addition")
    F = c1.field
    r, d = _twisted_add(F, (c1.rank_mod_2, c1.disc), (c2.rank_mod_2, c2.disc))
    if not F.is_rational:
        return WittClass(F, r, d)
    res = {p: (a, b) for p, a, b in c1.residues}
    for p, a, b in c2.residues:
        res[p] = _twisted_add(Field.GF(p), res.get(p, (0, 1)), (a, b))
    residues = tuple((p, a, b) for p, (a, b) in sorted(res.items()) if (a, b) != (0, 1))
    return WittClass(F, r, d, c1.signature + c2.signature, residues)


def witt_neg(c: WittClass) -> WittClass:
    F = c.field
    r, d = _twisted_neg(F, (c.rank_mod_2, c.disc))
    if not F.is_rational:
        return WittClass(F, r, d)
    residues = tuple((p,) + _twisted_neg(Field.GF(p), (a, b)) for p, a, b in c.residues)
    return WittClass(F, r, d, -c.signature, residues)


def witt_sum(classes, field: Field) -> WittClass:
    acc = WittClass.zero(field)
    for c in classes:
        acc = witt_add(acc, c)
    return acc


def is_neutral(q: SymmetricForm) -> bool:
    """Nondegenerate with a Lagrangian (half-dimensional self-orthogonal) subspace."""
    return q.is_nondegenerate() and q.support_dim % 2 == 0 and witt_class(q).is_zero()


def hasse_invariant(q: SymmetricForm, place) -> int:
    """Product of Hilbert symbols (d_i, d_j) over i < j for a diagonalisation of q."""
    if not q.field.is_rational:
        raise DomainError("Hasse invariants are computed over Q only")
    if not q.is_nondegenerate():
        raise DomainError("Hasse invariant of a degenerate form")
    d = _nonzero_diagonal(q)
    return _hasse_of_diag(d, place)


def _hasse_of_diag(d: list, place) -> int:
    s = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            s *= hilbert_symbol(d[i], d[j], place)
    return s


def is_isometric(q1: SymmetricForm, q2: SymmetricForm) -> bool:
    """Isometry test by complete invariants (radical dimension plus regular part)."""
    if q1.field != q2.field:
        return False
    if q1.support_dim != q2.support_dim:
        return False
    d1 = _nonzero_diagonal(q1)
    d2 = _nonzero_diagonal(q2)
    if len(d1) != len(d2):
        return False
    F = q1.field
    if _signed_disc_of_diag(F, d1) != _signed_disc_of_diag(F, d2):
        return False
    if not F.is_rational:
        return True
    if sum(1 if x > 0 else -1 for x in d1) != sum(1 if x > 0 else -1 for x in d2):
        return False
    if not d1:
        return True
    places = relevant_places(*d1, *d2)
    return all(_hasse_of_diag(d1, v) == _hasse_of_diag(d2, v) for v in places if v != INF)


def isometry_record(q: SymmetricForm) -> tuple:
    """Hashable invariant summary: (support dim, radical dim, Witt class of regular part)."""
    return (q.support_dim, q.radical_dim(), witt_class(q))


def mod_I2(c: WittClass) -> WittModI2:
    return WittModI2(c.field, c.rank_mod_2, c.disc)


def F_map(lam, n: int, field: Field) -> WittModI2:
    """The class of <1, -lam> + n<1> in W(k)/I^2 (n read modulo 4)."""
    lam = field(lam)
    if lam == 0:
        raise DomainError("F is defined on nonzero square classes")
    n %= 4
    pfister = witt_class_of_diagonal(field, [1, -lam])
    ones = witt_class_of_diagonal(field, [1] * n)
    return mod_I2(witt_add(pfister, ones))
