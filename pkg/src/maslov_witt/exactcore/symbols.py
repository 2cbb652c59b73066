"""Hilbert symbols over Q at every place."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .field import DomainError, factor, legendre, squarefree_part

INF = "inf"


def _valuation(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def _as_squarefree(a) -> int:
    a = Fraction(a)
    if a == 0:
        raise DomainError("Hilbert symbol of zero")
    return squarefree_part(a.numerator * a.denominator)


def hilbert_symbol(a, b, place) -> int:
    """The Hilbert symbol (a, b) at ``place`` (a prime number or ``INF``).

    Only the square classes of ``a`` and ``b`` matter, so both are first
    reduced to squarefree integers.
    """
    return _hilbert(_as_squarefree(a), _as_squarefree(b), place)


@lru_cache(maxsize=65536)
def _hilbert(a: int, b: int, place) -> int:
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if p < 2 or len(factor(p)) != 1 or factor(p)[p] != 1:
        raise DomainError(f"{place!r} is not a place of Q")
    alpha, u = _valuation(a, p)
    beta, v = _valuation(b, p)
    if p == 2:
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


def relevant_places(*values) -> list:
    """INF, 2 and the odd primes dividing any of the given nonzero rationals."""
    primes = {2}
    for x in values:
        x = Fraction(x)
        if x == 0:
            raise DomainError("zero has no places")
        for n in (x.numerator, x.denominator):
            if abs(n) > 1:
                primes.update(factor(n))
    return [INF] + sorted(primes)
