"""Sturm sequences: words in the free product of the two elementary subgroups.

A word of type (m, n) is a list of symmetric g x g letters q_m, ..., q_n.
A letter at an even position j evaluates to the lower elementary matrix
``[[1, 0], [q, 1]]`` and a letter at an odd position to ``[[1, q], [0, 1]]``.
Only positions mod 2 matter, so ``start`` is stored as 0 or 1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .exactcore import DomainError, Field, Matrix
from .maslov import LagrangianPath
from .symplectic import (
    Lagrangian,
    act,
    generator_lower,
    generator_upper,
    is_symplectic,
    random_symmetric,
    symplectic_inverse,
    transverse,
)
from .witt import (
    SymmetricForm,
    WittClass,
    WittModI2,
    mod_I2,
    witt_class,
    witt_class_of_diagonal,
)


def base_lagrangian(field: Field, g: int, j: int) -> Lagrangian:
    """L_j: L for even j, L* for odd j."""
    return Lagrangian.L(field, g) if j % 2 == 0 else Lagrangian.Lstar(field, g)


def elementary(q: Matrix, parity: int) -> Matrix:
    return generator_lower(q) if parity % 2 == 0 else generator_upper(q)


@dataclass(frozen=True)
class SturmWord:
    field: Field
    g: int
    start: int
    letters: tuple

    def __post_init__(self):
        if self.start not in (0, 1):
            raise DomainError("start parity must be 0 or 1")
        for q in self.letters:
            if q.shape != (self.g, self.g) or q.field != self.field:
                raise DomainError("letter has the wrong size or field")
            if not q.is_symmetric():
                raise DomainError("letters must be symmetric")

    @classmethod
    def of(cls, start: int, letters) -> "SturmWord":
        letters = tuple(letters)
        if not letters:
            raise DomainError("use SturmWord.empty for the empty word")
        return cls(letters[0].field, letters[0].nrows, start % 2, letters)

    @classmethod
    def empty(cls, field: Field, g: int) -> "SturmWord":
        return cls(field, g, 0, ())

    @classmethod
    def zero(cls, field: Field, g: int, parity: int) -> "SturmWord":
        """The one-letter word 0 at the given parity."""
        return cls(field, g, parity % 2, (Matrix.zeros(field, g),))

    def __len__(self):
        return len(self.letters)

    @property
    def end(self) -> int:
        return (self.start + len(self.letters) - 1) % 2

    @property
    def type(self) -> tuple:
        return (self.start, self.end)

    def parity(self, i: int) -> int:
        return (self.start + i) % 2

    def __mul__(self, other: "SturmWord") -> "SturmWord":
        """Product in the free product; adjacent letters of equal parity merge."""
        if (self.field, self.g) != (other.field, other.g):
            raise DomainError("words over different spaces")
        if not self.letters:
            return other
        if not other.letters:
            return self
        if other.start != self.end:
            return SturmWord(self.field, self.g, self.start, self.letters + other.letters)
        merged = self.letters[-1] + other.letters[0]
        return SturmWord(self.field, self.g, self.start, self.letters[:-1] + (merged,) + other.letters[1:])

    def inverse(self) -> "SturmWord":
        if not self.letters:
            return self
        return SturmWord(self.field, self.g, self.end, tuple(-q for q in reversed(self.letters)))

    def padded(self, m: int, n: int) -> "SturmWord":
        """Representative of type (m, n), obtained by adding zero letters at the ends only."""
        F, g = self.field, self.g
        if not self.letters:
            w = SturmWord.zero(F, g, m)
            return w if m == n else SturmWord(F, g, m, w.letters + (Matrix.zeros(F, g),))
        letters = self.letters
        start = self.start
        if start != m:
            letters = (Matrix.zeros(F, g),) + letters
            start = m
        w = SturmWord(F, g, start, letters)
        if w.end != n:
            w = SturmWord(F, g, start, letters + (Matrix.zeros(F, g),))
        return w

    def to_json(self) -> dict:
        return {"start_parity": self.start, "letters": [q.to_list() for q in self.letters]}


def evaluate(w: SturmWord) -> Matrix:
    M = Matrix.identity(w.field, 2 * w.g)
    for i, q in enumerate(w.letters):
        M = M @ elementary(q, w.parity(i))
    return M


@dataclass(frozen=True)
class KernelWord:
    """A word evaluating to the identity."""

    word: SturmWord

    def __post_init__(self):
        if evaluate(self.word) != Matrix.identity(self.word.field, 2 * self.word.g):
            raise DomainError("word does not evaluate to the identity")


def sylvester_of_sturm(w: SturmWord) -> SymmetricForm:
    """Tridiagonal form with diagonal blocks (-1)^j q_j and identity off-diagonal blocks."""
    F, g, n = w.field, w.g, len(w.letters)
    if n == 0:
        return SymmetricForm.empty(F)
    Z, I = Matrix.zeros(F, g), Matrix.identity(F, g)
    grid = [[Z] * n for _ in range(n)]
    for a, q in enumerate(w.letters):
        grid[a][a] = -q if w.parity(a) else q
        if a + 1 < n:
            grid[a][a + 1] = grid[a + 1][a] = I
    return SymmetricForm(Matrix.block(grid))


def path_of_sturm(w: SturmWord) -> LagrangianPath:
    """(L_m, L_{m-1}, E(q_m) L_m, E(q_m q_{m+1}) L_{m+1}, ..., E(q_m ... q_n) L_n)."""
    F, g, m = w.field, w.g, w.start
    nodes = [base_lagrangian(F, g, m), base_lagrangian(F, g, m - 1)]
    M = Matrix.identity(F, 2 * g)
    for i, q in enumerate(w.letters):
        j = w.parity(i)
        M = M @ elementary(q, j)
        nodes.append(act(M, base_lagrangian(F, g, j)))
    return LagrangianPath(nodes)


def _letter_from(lam: Lagrangian, parity: int) -> Matrix:
    """The unique q with E_parity(q) L_parity = lam (lam transverse to L_{parity-1})."""
    g = lam.g
    top = lam.basis.sub(range(g), range(g))
    bot = lam.basis.sub(range(g, 2 * g), range(g))
    if parity == 0:
        return bot @ top.inverse()
    return top @ bot.inverse()


def sturm_of_path(path: LagrangianPath, start: int) -> SturmWord:
    """Inverse of :func:`path_of_sturm`: peel one letter per node."""
    F, g = path.field, path.g
    nodes = path.nodes
    if len(nodes) < 2 or nodes[0] != base_lagrangian(F, g, start) or nodes[1] != base_lagrangian(F, g, start - 1):
        raise DomainError("path is not anchored at (L_m, L_{m-1})")
    M = Matrix.identity(F, 2 * g)
    letters = []
    for k, lam in enumerate(nodes[2:]):
        j = (start + k) % 2
        local = act(symplectic_inverse(M), lam)
        if not transverse(local, base_lagrangian(F, g, j - 1)):
            raise DomainError("node is not transverse to its predecessor")
        q = _letter_from(local, j)
        letters.append(q)
        M = M @ elementary(q, j)
    if not letters:
        return SturmWord.empty(F, g)
    return SturmWord(F, g, start % 2, tuple(letters))


def f_mn(w: SturmWord, m: int, n: int) -> WittClass:
    return witt_class(sylvester_of_sturm(w.padded(m, n)))


def f00(w: SturmWord) -> WittClass:
    return f_mn(w, 0, 0)


def f01(w: SturmWord) -> WittClass:
    return f_mn(w, 0, 1)


# -- symmetric factorisation and decomposition ------------------------------------

def _sym_unit(field: Field, g: int, i: int, j: int) -> Matrix:
    rows = [[field.zero] * g for _ in range(g)]
    rows[i][j] = rows[j][i] = field.one
    return Matrix(field, rows)


def symmetric_factorization(x: Matrix) -> tuple[Matrix, Matrix]:
    """Symmetric invertible p, q with x = p^-1 q.

    Solves x^T T = T x over symmetric T; any invertible solution gives
    p = T and q = T x.
    """
    F, g = x.field, x.nrows
    if not x.is_invertible():
        raise DomainError("symmetric factorisation needs an invertible matrix")
    I = Matrix.identity(F, g)
    if x.is_symmetric():
        return I, x
    units = [_sym_unit(F, g, i, j) for i in range(g) for j in range(i, g)]
    cols = []
    for E in units:
        D = x.T @ E - E @ x
        cols.append([D[a, b] for a in range(g) for b in range(g)])
    system = Matrix(F, [list(r) for r in zip(*cols)])
    basis = []
    for v in system.kernel():
        T = Matrix.zeros(F, g)
        for k, E in enumerate(units):
            if v[k, 0]:
                T = T + E.scale(v[k, 0])
        basis.append(T)

    def candidates():
        yield from basis
        ladder = list(itertools.islice(F.ladder(), 4))
        for coeffs in itertools.product(ladder, repeat=len(basis)):
            yield _combine(F, g, basis, coeffs)
        rng = random.Random(0)
        while True:
            yield _combine(F, g, basis, [F(rng.randint(-20, 20)) for _ in basis])

    for T in candidates():
        if T.is_invertible():
            p, q = T, T @ x
            assert p.inverse() @ q == x and q.is_symmetric()
            return p, q
    raise AssertionError("unreachable")


def _combine(F, g, basis, coeffs) -> Matrix:
    T = Matrix.zeros(F, g)
    for c, B in zip(coeffs, basis):
        if c:
            T = T + B.scale(c)
    return T


def _word(F, g, start, letters) -> SturmWord:
    return SturmWord(F, g, start % 2, tuple(letters))


def m_word(y: Matrix) -> SturmWord:
    """(y, -y^-1, y) at parities (0, 1, 0); evaluates to m(y) for symmetric y."""
    return _word(y.field, y.nrows, 0, (y, -y.inverse(), y))


def _m_general_word(C: Matrix) -> SturmWord:
    """A word for [[0, -C^-T], [C, 0]] = m(1) m(-p) m(q), where C = p^-1 q."""
    F, g = C.field, C.nrows
    p, q = symmetric_factorization(C)
    return m_word(Matrix.identity(F, g)) * m_word(-p) * m_word(q)


def _blocks(M: Matrix):
    g = M.nrows // 2
    return M.blk(0, 0, g), M.blk(0, 1, g), M.blk(1, 0, g), M.blk(1, 1, g)


def _shift_candidates(F: Field, g: int, rng: random.Random | None):
    if rng is not None:
        yield random_symmetric(F, g, rng, 5)
    for c in itertools.islice(F.ladder(), 9):
        yield Matrix.scalar(F, g, c)
    r = rng or random.Random(1)
    while True:
        yield random_symmetric(F, g, r, 10)


def _strip_zero_ends(w: SturmWord) -> SturmWord:
    letters, start = list(w.letters), w.start
    while len(letters) > 1 and letters[0].is_zero():
        letters.pop(0)
        start ^= 1
    while len(letters) > 1 and letters[-1].is_zero():
        letters.pop()
    return SturmWord(w.field, w.g, start, tuple(letters))


def _recognise(M: Matrix) -> SturmWord | None:
    """Short words for elementary matrices and for m(y) with y symmetric."""
    F, g = M.field, M.nrows // 2
    A, B, C, D = _blocks(M)
    I = Matrix.identity(F, g)
    if A == I and D == I and C.is_zero():
        return _word(F, g, 1, (B,))
    if A == I and D == I and B.is_zero():
        return _word(F, g, 0, (C,))
    if A.is_zero() and D.is_zero() and C.is_symmetric() and C.is_invertible():
        return m_word(C)
    return None


def decompose(M: Matrix, rng: random.Random | None = None) -> SturmWord:
    """A word evaluating to M.

    With C invertible: M = upper(A C^-1) m(C) upper(C^-1 D).  Otherwise
    M = lower(-S) (lower(S) M) for a symmetric S making C + S A invertible.
    Passing ``rng`` randomises the choice of S, giving an independent word.
    """
    if not is_symplectic(M):
        raise DomainError("matrix is not symplectic")
    F, g = M.field, M.nrows // 2
    if rng is None:
        short = _recognise(M)
        if short is not None:
            return short
    for S in _shift_candidates(F, g, rng):
        A, _, C, _ = _blocks(M)
        if (C + S @ A).is_invertible():
            break
    Mp = generator_lower(S) @ M
    A, B, C, D = _blocks(Mp)
    Ci = C.inverse()
    middle = m_word(C) if C.is_symmetric() else _m_general_word(C)
    core = _word(F, g, 1, (A @ Ci,)) * middle * _word(F, g, 1, (Ci @ D,))
    w = _strip_zero_ends(_word(F, g, 0, (-S,)) * core)
    assert evaluate(w) == M
    return w


def kernel_word(w: SturmWord, rng: random.Random | None = None) -> KernelWord:
    """w * decompose(E(w))^-1, which evaluates to the identity."""
    return KernelWord(w * decompose(evaluate(w), rng).inverse())


def random_word(field: Field, g: int, length: int, rng: random.Random, bound: int = 3, start: int | None = None) -> SturmWord:
    start = rng.randrange(2) if start is None else start
    return _word(field, g, start, [random_symmetric(field, g, rng, bound) for _ in range(length)])


# -- cocycle and its trivialisation mod I^2 ---------------------------------------

def lift00(M: Matrix, rng: random.Random | None = None) -> SturmWord:
    return decompose(M, rng).padded(0, 0)


def mu_cocycle(x: Matrix, y: Matrix, rng: random.Random | None = None) -> WittClass:
    """f00(x~ 0bar y~) - f00(x~) - f00(y~) for type 00 lifts."""
    xt, yt = lift00(x, rng), lift00(y, rng)
    F, g = xt.field, xt.g
    joined = SturmWord(F, g, 0, xt.letters + (Matrix.zeros(F, g),) + yt.letters)
    return f00(joined) - f00(xt) - f00(yt)


def phi(M: Matrix, rng: random.Random | None = None) -> WittModI2:
    return mod_I2(f00(decompose(M, rng)))


class NotApplicable:
    """Marker returned by :func:`phi_closed_forms` for unrecognised shapes."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NOT_APPLICABLE"

    def to_json(self):
        return "not applicable"


NOT_APPLICABLE = NotApplicable()


def _pfister(F: Field, a) -> WittClass:
    return witt_class_of_diagonal(F, [1, -a])


def phi_of_swap(y: Matrix) -> WittModI2:
    """Phi(m(y)): rank 3g and signed discriminant (-1)^(g(g-1)/2) det y."""
    F, g = y.field, y.nrows
    s = -1 if (g * (g - 1) // 2) % 2 else 1
    return WittModI2(F, (3 * g) % 2, F.square_class(F(s) * y.det()))


def phi_closed_forms(M: Matrix):
    """Phi from block shape alone, or NOT_APPLICABLE.

    Recognised shapes: C = 0 (stabiliser of L), B = 0 (stabiliser of L*),
    and C invertible with A = 0 or D = 0 (the swap cosets of m(C)).
    """
    if not is_symplectic(M):
        raise DomainError("matrix is not symplectic")
    F = M.field
    A, B, C, D = _blocks(M)
    if C.is_zero():
        return mod_I2(_pfister(F, A.det()))
    if B.is_zero():
        return mod_I2(_pfister(F, A.det()) + witt_class(SymmetricForm(C @ A.inverse())))
    if (A.is_zero() or D.is_zero()) and C.is_invertible():
        return phi_of_swap(C)
    return NOT_APPLICABLE
