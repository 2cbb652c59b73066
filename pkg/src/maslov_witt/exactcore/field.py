"""Scalar fields: the rationals and prime fields of odd characteristic.

A :class:`Field` is a small descriptor object.  Rational elements are
plain :class:`fractions.Fraction` values; prime-field elements are
:class:`FpElement` instances carrying their modulus.  Both support the
usual arithmetic operators so that the matrix code can stay generic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime


class DomainError(ValueError):
    """Raised when an operation is applied outside of its mathematical domain."""


class FpElement:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise DomainError(f"mixing GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return FpElement(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return FpElement(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """Descriptor of the scalar domain: ``Field.Q()`` or ``Field.GF(p)``."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "Q":
            p = None
        elif kind == "Fp":
            if p is None or p < 2 or not isprime(p):
                raise DomainError(f"modulus {p!r} is not a prime")
            if p == 2:
                raise DomainError("characteristic 2 unsupported")
        else:
            raise DomainError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    @classmethod
    def Q(cls) -> "Field":
        return _RATIONALS

    @classmethod
    def GF(cls, p: int) -> "Field":
        return _prime_field(p)

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Q" if self.is_rational else f"GF({self.p})"

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, "a/b" string, or element) into the field."""
        if self.is_rational:
            if isinstance(x, FpElement):
                raise DomainError("cannot coerce a prime-field element into Q")
            if isinstance(x, str):
                return Fraction(x.strip())
            if isinstance(x, float):
                raise DomainError("floating point input is not exact")
            return Fraction(x)
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise DomainError(f"element of GF({x.p}) used in GF({self.p})")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DomainError(f"{x} has no image in GF({self.p})")
            return FpElement(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, bool) or not isinstance(x, int):
            raise DomainError(f"cannot coerce {x!r} into {self!r}")
        return FpElement(x, self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def elements(self):
        """All elements of a prime field, in the order 0, 1, ..., p-1."""
        if self.is_rational:
            raise DomainError("Q is infinite")
        return [FpElement(i, self.p) for i in range(self.p)]

    def ladder(self):
        """Deterministic sequence of small scalars 0, 1, -1, 2, -2, ...

        Over a prime field every residue appears exactly once; over Q the
        sequence is infinite.
        """
        if self.is_rational:
            yield Fraction(0)
            n = 1
            while True:
                yield Fraction(n)
                yield Fraction(-n)
                n += 1
        else:
            seen = set()
            for n in range(self.p):
                for v in (n, -n):
                    r = v % self.p
                    if r not in seen:
                        seen.add(r)
                        yield FpElement(r, self.p)

    def serialize(self, x) -> str:
        if self.is_rational:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(self(x).v)

    # -- square classes -------------------------------------------------

    def nonresidue(self) -> int:
        if self.is_rational:
            raise DomainError("Q has no canonical nonresidue")
        return _least_nonresidue(self.p)

    def square_class(self, a) -> int:
        """Canonical representative of the class of ``a`` modulo squares.

        Over Q: the squarefree integer in the class.  Over GF(p): 1 for
        squares, otherwise the least positive nonresidue.
        """
        a = self(a)
        if a == 0:
            raise DomainError("zero has no square class")
        if self.is_rational:
            return squarefree_part(a.numerator * a.denominator)
        return 1 if legendre(a.v, self.p) == 1 else _least_nonresidue(self.p)

    def is_square(self, a) -> bool:
        return self.square_class(a) == 1

    def class_mul(self, c1: int, c2: int) -> int:
        """Product of two canonical square classes."""
        return self.square_class(self(c1) * self(c2))


_RATIONALS = Field("Q")


@lru_cache(maxsize=None)
def _prime_field(p: int) -> Field:
    return Field("Fp", p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def _least_nonresidue(p: int) -> int:
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple:
    return tuple(sorted(factorint(n).items()))


def factor(n: int) -> dict:
    """Prime factorisation of a nonzero integer (sign dropped)."""
    n = abs(n)
    if n == 0:
        raise DomainError("cannot factor zero")
    return dict(_factor(n))


def squarefree_part(n: int) -> int:
    """Signed squarefree integer s with n = s * m**2."""
    if n == 0:
        raise DomainError("zero has no square class")
    s = -1 if n < 0 else 1
    for q, e in factor(n).items():
        if e % 2:
            s *= q
    return s
