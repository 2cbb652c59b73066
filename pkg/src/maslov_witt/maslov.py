"""Lagrangian paths, Sylvester matrices and Maslov indices."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exactcore import DomainError, Field, Matrix
from .symplectic import (
    Lagrangian,
    act,
    affine_diff,
    beta,
    common_transverse,
    gram_J,
    random_lagrangian,
    random_symmetric,
    transverse,
)
from .witt import SymmetricForm, WittClass, is_isometric, orthogonal_sum, witt_class


@dataclass(frozen=True)
class LagrangianPath:
    """Nodes Lambda_0, ..., Lambda_{n+1} with consecutive nodes transverse."""

    nodes: tuple

    def __init__(self, nodes):
        nodes = tuple(nodes)
        if not nodes:
            raise DomainError("a path needs at least one node")
        F, g = nodes[0].field, nodes[0].g
        for a in nodes:
            if a.field != F or a.g != g:
                raise DomainError("path nodes live in different spaces")
        for i, (a, b) in enumerate(zip(nodes, nodes[1:])):
            if not transverse(a, b):
                raise DomainError(f"nodes {i} and {i + 1} are not transverse")
        object.__setattr__(self, "nodes", nodes)

    @property
    def field(self) -> Field:
        return self.nodes[0].field

    @property
    def g(self) -> int:
        return self.nodes[0].g

    @property
    def n(self) -> int:
        """Number of interior nodes."""
        return max(len(self.nodes) - 2, 0)

    @property
    def is_loop(self) -> bool:
        return len(self.nodes) >= 2 and self.nodes[0] == self.nodes[-1]

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    def inverse(self) -> "LagrangianPath":
        return LagrangianPath(reversed(self.nodes))

    def concat(self, other: "LagrangianPath") -> "LagrangianPath":
        if self.nodes[-1] != other.nodes[0]:
            raise DomainError("paths do not meet")
        return LagrangianPath(self.nodes + other.nodes[1:])

    def act(self, phi: Matrix) -> "LagrangianPath":
        return LagrangianPath(act(phi, lam) for lam in self.nodes)

    def to_json(self) -> list:
        return [lam.to_json() for lam in self.nodes]


def sylvester_matrix(alpha: LagrangianPath) -> SymmetricForm:
    """Block tridiagonal form on Lambda_1* + ... + Lambda_n*.

    Diagonal blocks d_{Lambda_i}(Lambda_{i-1}, Lambda_{i+1}); block (i, i+1) is
    beta_{i,i+1}^-1 and block (i+1, i) is -beta_{i+1,i}^-1, its transpose.
    """
    F, g, n = alpha.field, alpha.g, alpha.n
    if n == 0:
        return SymmetricForm.empty(F)
    lam = alpha.nodes
    Z = Matrix.zeros(F, g)
    grid = [[Z] * n for _ in range(n)]
    for a in range(n):
        i = a + 1
        grid[a][a] = affine_diff(lam[i], lam[i - 1], lam[i + 1])
        if a + 1 < n:
            up = beta(lam[i], lam[i + 1]).inverse()
            grid[a][a + 1] = up
            grid[a + 1][a] = up.T
    return SymmetricForm(Matrix.block(grid))


def nondegenerate_iff_transverse(alpha: LagrangianPath) -> tuple[bool, bool]:
    S = sylvester_matrix(alpha)
    ends = transverse(alpha.nodes[0], alpha.nodes[-1]) if len(alpha) > 1 else False
    return S.is_nondegenerate(), ends


def transversality_witness(alpha: LagrangianPath) -> tuple[Matrix, Matrix, Matrix]:
    """(E0, Tn, s) with S(alpha) E0 = Tn beta_{0,n+1}; s is S minus its first block column and last block row."""
    n, g, F = alpha.n, alpha.g, alpha.field
    if n < 1:
        raise DomainError("witness needs at least one interior node")
    lam = alpha.nodes
    E0 = Matrix.vstack([beta(lam[0], lam[k]) for k in range(1, n + 1)])
    blocks = [Matrix.zeros(F, g)] * (n - 1) + [-beta(lam[n], lam[n + 1]).inverse()]
    Tn = Matrix.vstack(blocks)
    S = sylvester_matrix(alpha).gram
    s = S.sub(range(0, (n - 1) * g), range(g, n * g))
    return E0, Tn, s


def shortcut(alpha: LagrangianPath, i: int, j: int) -> tuple[LagrangianPath, LagrangianPath]:
    """Split alpha at a transverse pair (i, j) into the detour and the shortened path."""
    nodes = alpha.nodes
    if not (0 <= i < j < len(nodes)):
        raise DomainError("need 0 <= i < j <= n+1")
    if not transverse(nodes[i], nodes[j]):
        raise DomainError("shortcut endpoints must be transverse")
    return LagrangianPath(nodes[i : j + 1]), LagrangianPath(nodes[: i + 1] + nodes[j:])


def maslov_of_path(alpha: LagrangianPath) -> WittClass:
    return witt_class(sylvester_matrix(alpha))


def loop_variants(loop: LagrangianPath, M: Lagrangian | None = None) -> list[SymmetricForm]:
    """The four Sylvester matrices attached to a loop Lambda_0, ..., Lambda_n, Lambda_0."""
    if not loop.is_loop or len(loop) < 3:
        raise DomainError("not a loop with an interior node")
    nodes = loop.nodes
    body = nodes[:-1]
    if M is None:
        M = common_transverse([nodes[0]])
    elif not transverse(M, nodes[0]):
        raise DomainError("auxiliary Lagrangian must be transverse to the base point")
    paths = [
        LagrangianPath(body),
        LagrangianPath(nodes[1:]),
        LagrangianPath(nodes + (M,)),
        LagrangianPath((M,) + nodes),
    ]
    return [sylvester_matrix(p) for p in paths]


def maslov_of_loop(loop: LagrangianPath, variant: int = 0, M: Lagrangian | None = None) -> WittClass:
    if not loop.is_loop:
        raise DomainError("not a loop")
    if len(loop) < 3:
        return WittClass.zero(loop.field)
    return witt_class(loop_variants(loop, M)[variant])


def _transverse_to_both(a: Lagrangian, b: Lagrangian, rng: random.Random) -> Lagrangian:
    for _ in range(500):
        c = random_lagrangian(a.field, a.g, rng)
        if transverse(a, c) and transverse(b, c):
            return c
    return common_transverse([a, b], seed=rng.randrange(1 << 30))


def _leg(a: Lagrangian, b: Lagrangian, rng: random.Random) -> LagrangianPath:
    """A random path from a to b with one or three intermediate nodes."""
    if rng.random() < 0.5:
        return LagrangianPath((a, _transverse_to_both(a, b, rng), b))
    mid = random_lagrangian(a.field, a.g, rng)
    return LagrangianPath((a, _transverse_to_both(a, mid, rng), mid, _transverse_to_both(mid, b, rng), b))


def triple_paths(l0: Lagrangian, l1: Lagrangian, l2: Lagrangian, rng: random.Random | None = None):
    """Paths alpha_01, alpha_12 used for the triple index.

    Without ``rng`` both legs pass through one shared common transverse.
    """
    if rng is None:
        t = common_transverse([l0, l1, l2])
        return LagrangianPath((l0, t, l1)), LagrangianPath((l1, t, l2))
    return _leg(l0, l1, rng), _leg(l1, l2, rng)


def maslov_triple(l0: Lagrangian, l1: Lagrangian, l2: Lagrangian, rng: random.Random | None = None) -> WittClass:
    """mu_BL = Mas(a01 * a12) - Mas(a01) - Mas(a12)."""
    a01, a12 = triple_paths(l0, l1, l2, rng)
    return maslov_of_path(a01.concat(a12)) - maslov_of_path(a01) - maslov_of_path(a12)


def kashiwara_form(l0: Lagrangian, l1: Lagrangian, l2: Lagrangian) -> SymmetricForm:
    """Gram matrix of omega(x0,x1) + omega(x1,x2) + omega(x2,x0) on l0 + l1 + l2."""
    F, g = l0.field, l0.g
    J = gram_J(F, g)
    B = [l0.basis, l1.basis, l2.basis]
    Z = Matrix.zeros(F, g)
    grid = [[Z] * 3 for _ in range(3)]
    half = F(1) / F(2)
    for a, b in ((0, 1), (1, 2), (2, 0)):
        W = (B[a].T @ J @ B[b]).scale(half)
        grid[a][b] = grid[a][b] + W
        grid[b][a] = grid[b][a] + W.T
    return SymmetricForm(Matrix.block(grid))


def random_path(field: Field, g: int, length: int, rng: random.Random, bound: int = 3) -> LagrangianPath:
    """Random path of ``length`` nodes: alternate translations along L and L*, then a random frame."""
    from .symplectic import generator_lower, generator_upper, random_symplectic

    phi = random_symplectic(field, g, rng, length=2, bound=bound)
    M = Matrix.identity(field, 2 * g)
    start = rng.randrange(2)
    base = [Lagrangian.L(field, g), Lagrangian.Lstar(field, g)]
    nodes = []
    for k in range(length):
        parity = (k + start) % 2
        nodes.append(act(phi @ M, base[parity]))
        q = random_symmetric(field, g, rng, bound)
        # translating along the node just emitted keeps it fixed and moves the next one
        M = M @ (generator_upper(q) if parity == 0 else generator_lower(q))
    return LagrangianPath(nodes)


def path_report(alpha: LagrangianPath) -> dict:
    S = sylvester_matrix(alpha)
    nd, tr = nondegenerate_iff_transverse(alpha)
    return {
        "sylvester": S.to_json(),
        "maslov": witt_class(S).to_json(),
        "nondegenerate": nd,
        "endpoints_transverse": tr,
    }


__all__ = [
    "LagrangianPath",
    "sylvester_matrix",
    "nondegenerate_iff_transverse",
    "transversality_witness",
    "shortcut",
    "maslov_of_path",
    "maslov_of_loop",
    "loop_variants",
    "maslov_triple",
    "triple_paths",
    "kashiwara_form",
    "random_path",
    "path_report",
    "is_isometric",
    "orthogonal_sum",
]
