"""Seeded property families shared by the command line and the test suite.

Each family is a function ``(rng, field, g) -> (ok, detail)`` checking one
randomly drawn case.  :func:`run_family` spreads cases round-robin over the
(field, genus) grid and derives every case seed from ``(seed, family, index)``
so any failure can be replayed alone with :func:`replay`.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable

from .exactcore import Field, Matrix
from .maslov import (
    LagrangianPath,
    kashiwara_form,
    loop_variants,
    maslov_of_path,
    maslov_triple,
    nondegenerate_iff_transverse,
    random_path,
    shortcut,
    sylvester_matrix,
    transversality_witness,
)
from .sturm import (
    SturmWord,
    decompose,
    evaluate,
    f_mn,
    f00,
    f01,
    kernel_word,
    m_word,
    mu_cocycle,
    phi,
    phi_closed_forms,
    phi_of_swap,
    random_word,
    sylvester_of_sturm,
    symmetric_factorization,
)
from .symplectic import (
    Lagrangian,
    act,
    affine_diff,
    beta,
    generator_h,
    generator_lower,
    generator_m,
    generator_upper,
    random_invertible,
    random_lagrangian,
    random_symmetric,
    random_symplectic,
    symplectic_inverse,
    transverse,
)
from .witt import (
    F_map,
    SymmetricForm,
    WittClass,
    WittModI2,
    is_isometric,
    isometry_record,
    mod_I2,
    orthogonal_sum,
    signed_discriminant,
    witt_class,
    witt_class_of_diagonal,
)

FIELDS = (Field.GF(3), Field.GF(5), Field.GF(7), Field.Q())
GENERA = (1, 2, 3)
GRID = tuple(itertools.product(FIELDS, GENERA))

FAMILIES: dict[str, Callable] = {}


def family(name: str):
    def deco(fn):
        FAMILIES[name] = fn
        return fn
    return deco


def _mats(*ms) -> list:
    return [m.to_list() for m in ms]


def _lags(*ls) -> list:
    return [lam.to_json() for lam in ls]


def _random_path_mixed(F: Field, g: int, rng: random.Random) -> LagrangianPath:
    """Random path, closed up into a loop about a third of the time when possible."""
    a = random_path(F, g, rng.randint(2, 7), rng)
    if rng.random() < 0.35 and len(a) >= 3 and transverse(a[-2], a[0]):
        a = LagrangianPath(a.nodes[:-1] + (a.nodes[0],))
    return a


# -- symplectic ---------------------------------------------------------------

@family("relfond")
def _relfond(rng, F, g):
    while True:
        l1, l2, l3, X = (random_lagrangian(F, g, rng) for _ in range(4))
        if transverse(l1, l2) and transverse(l2, l3):
            break
    lhs = (
        -(beta(l2, l1).inverse() @ beta(X, l1))
        + affine_diff(l2, l1, l3) @ beta(X, l2)
        + beta(l2, l3).inverse() @ beta(X, l3)
    )
    return lhs.is_zero(), {"lagrangians": _lags(X, l1, l2, l3)}


@family("beta_naturality")
def _naturality(rng, F, g):
    from .symplectic import restrict

    lam, M = random_lagrangian(F, g, rng), random_lagrangian(F, g, rng)
    phi_ = random_symplectic(F, g, rng)
    rhs = restrict(phi_, M).T @ beta(act(phi_, lam), act(phi_, M)) @ restrict(phi_, lam)
    anti = beta(lam, M) == -beta(M, lam).T
    return beta(lam, M) == rhs and anti, {"lagrangians": _lags(lam, M), "phi": _mats(phi_)}


# -- paths ------------------------------------------------------------------------

@family("transversality")
def _transversality(rng, F, g):
    a = _random_path_mixed(F, g, rng)
    nd, tr = nondegenerate_iff_transverse(a)
    return nd == tr, {"path": a.to_json(), "nondegenerate": nd, "transverse": tr}


@family("shortcut")
def _shortcut(rng, F, g):
    while True:
        a = _random_path_mixed(F, g, rng)
        pairs = [(i, j) for i in range(len(a)) for j in range(i + 1, len(a)) if transverse(a[i], a[j])]
        wide = [p for p in pairs if p[1] - p[0] >= 2]
        if wide or (pairs and rng.random() < 0.1):
            break
    i, j = rng.choice(wide or pairs)
    sub, short = shortcut(a, i, j)
    S = sylvester_matrix(a)
    T = orthogonal_sum(sylvester_matrix(sub), sylvester_matrix(short))
    ok = isometry_record(S) == isometry_record(T) and is_isometric(S, T)
    return ok, {"path": a.to_json(), "i": i, "j": j}


@family("witness")
def _witness(rng, F, g):
    a = random_path(F, g, rng.randint(3, 7), rng)
    E0, Tn, s = transversality_witness(a)
    S = sylvester_matrix(a).gram
    ok = S @ E0 == Tn @ beta(a[0], a[-1]) and (s.nrows == 0 or s.is_invertible())
    return ok, {"path": a.to_json()}


@family("loops")
def _loops(rng, F, g):
    while True:
        a = random_path(F, g, rng.randint(3, 6), rng)
        if transverse(a[-2], a[0]):
            break
    loop = LagrangianPath(a.nodes[:-1] + (a.nodes[0],))
    M = random_lagrangian(F, g, rng)
    while not transverse(M, loop[0]):
        M = random_lagrangian(F, g, rng)
    classes = {witt_class(S) for S in loop_variants(loop, M)}
    # Mas(alpha * alpha^-1) = 0 and Mas(alpha) = Mas(beta) + Mas(beta^-1 * alpha)
    alpha = random_path(F, g, rng.randint(2, 5), rng)
    back = maslov_of_path(alpha.concat(alpha.inverse())).is_zero()
    inv = maslov_of_path(alpha) == -maslov_of_path(alpha.inverse())
    return len(classes) == 1 and back and inv, {"loop": loop.to_json(), "M": M.to_json()}


# -- triple index ---------------------------------------------------------------------

def _triple(rng, F, g):
    return [random_lagrangian(F, g, rng) for _ in range(3)]


@family("triple_vanishing")
def _vanishing(rng, F, g):
    lam, M = random_lagrangian(F, g, rng), random_lagrangian(F, g, rng)
    vals = [maslov_triple(lam, lam, M), maslov_triple(lam, M, lam), maslov_triple(M, lam, lam)]
    return all(v.is_zero() for v in vals), {"lagrangians": _lags(lam, M)}


@family("triple_equivariance")
def _equivariance(rng, F, g):
    ls = _triple(rng, F, g)
    phi_ = random_symplectic(F, g, rng)
    moved = [act(phi_, x) for x in ls]
    return maslov_triple(*ls) == maslov_triple(*moved), {"lagrangians": _lags(*ls), "phi": _mats(phi_)}


@family("triple_cocycle")
def _cocycle4(rng, F, g):
    l0, l1, l2, l3 = (random_lagrangian(F, g, rng) for _ in range(4))
    s = maslov_triple(l1, l2, l3) - maslov_triple(l0, l2, l3) + maslov_triple(l0, l1, l3) - maslov_triple(l0, l1, l2)
    return s.is_zero(), {"lagrangians": _lags(l0, l1, l2, l3)}


def _sign(perm) -> int:
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


@family("triple_antisymmetry")
def _antisym(rng, F, g):
    ls = _triple(rng, F, g)
    base = maslov_triple(*ls)
    ok = True
    for perm in itertools.permutations(range(3)):
        v = maslov_triple(*(ls[i] for i in perm))
        ok &= v == (base if _sign(perm) == 1 else -base)
    return ok, {"lagrangians": _lags(*ls)}


@family("path_independence")
def _indep(rng, F, g):
    ls = _triple(rng, F, g)
    a = maslov_triple(*ls)
    b = maslov_triple(*ls, rng=random.Random(rng.randrange(1 << 30)))
    return a == b, {"lagrangians": _lags(*ls), "first": a.to_json(), "second": b.to_json()}


# -- words ---------------------------------------------------------------------------

@family("sturm_paths")
def _sturm_paths(rng, F, g):
    from .sturm import path_of_sturm, sturm_of_path

    w = random_word(F, g, rng.randint(1, 6), rng)
    p = path_of_sturm(w)
    ok = is_isometric(sylvester_matrix(p), sylvester_of_sturm(w)) and sturm_of_path(p, w.start) == w
    return ok, {"word": w.to_json()}


@family("f_welldefined")
def _f_welldefined(rng, F, g):
    m, n = rng.randrange(2), rng.randrange(2)
    w = random_word(F, g, rng.randint(1, 6), rng).padded(m, n)
    Z = SturmWord.zero
    base = f_mn(w, m, n)
    # extra zero pairs at either end
    front = SturmWord(F, g, m, Z(F, g, m).letters + Z(F, g, m + 1).letters + w.letters)
    back = SturmWord(F, g, m, w.letters + Z(F, g, n + 1).letters + Z(F, g, n).letters)
    # split a letter q into a, 0, q - a
    k = rng.randrange(len(w))
    a = random_symmetric(F, g, rng, 5)
    split_letters = w.letters[:k] + (a, Matrix.zeros(F, g), w.letters[k] - a) + w.letters[k + 1:]
    split = SturmWord(F, g, m, split_letters)
    vals = [f_mn(front, m, n), f_mn(back, m, n), f_mn(split, m, n)]
    return all(v == base for v in vals), {"word": w.to_json(), "type": [m, n], "split_at": k}


def _kernel(rng, F, g):
    w = random_word(F, g, rng.randint(1, 5), rng)
    return kernel_word(w, random.Random(rng.randrange(1 << 30))).word.padded(0, 1)


@family("kernel_f01")
def _kernel_f01(rng, F, g):
    k, l = _kernel(rng, F, g), _kernel(rng, F, g)
    fk, fl = f01(k), f01(l)
    hom = f01(k * l) == fk + fl
    w = random_word(F, g, rng.randint(1, 4), rng).padded(0, 0)
    Z1 = SturmWord.zero(F, g, 1).letters
    conj = SturmWord(F, g, 0, w.letters + Z1 + k.letters + w.inverse().letters + Z1)
    inv = f01(conj) == fk
    i2 = mod_I2(fk) == WittModI2.zero(F)
    same = all(f_mn(k, m, n) == fk for m in (0, 1) for n in (0, 1))
    return hom and inv and i2 and same, {"k": k.to_json(), "l": l.to_json(), "w": w.to_json(),
                                        "hom": hom, "conj": inv, "I2": i2, "four_agree": same}


@family("decompose")
def _decompose(rng, F, g):
    M = random_symplectic(F, g, rng, length=rng.randint(1, 6))
    w = decompose(M, random.Random(rng.randrange(1 << 30)))
    x = random_invertible(F, g, rng)
    p, q = symmetric_factorization(x)
    ok = evaluate(w) == M and p.is_symmetric() and q.is_symmetric() and p.inverse() @ q == x
    return ok, {"M": _mats(M), "x": _mats(x)}


# -- cocycle and Phi --------------------------------------------------------------------

def _pair(rng, F, g):
    return random_symplectic(F, g, rng, length=rng.randint(1, 5)), random_symplectic(F, g, rng, length=rng.randint(1, 5))


@family("coboundary")
def _coboundary(rng, F, g):
    x, y = _pair(rng, F, g)
    lhs = phi(x @ y) - phi(x) - phi(y)
    rhs = mod_I2(mu_cocycle(x, y))
    return lhs == rhs, {"x": _mats(x), "y": _mats(y), "lhs": lhs.to_json(), "rhs": rhs.to_json()}


@family("phi_welldefined")
def _phi_welldefined(rng, F, g):
    M = random_symplectic(F, g, rng, length=rng.randint(1, 6))
    a = phi(M)
    b = phi(M, random.Random(rng.randrange(1 << 30)))
    return a == b, {"M": _mats(M)}


@family("cocycle_crosscheck")
def _crosscheck(rng, F, g):
    x, y = _pair(rng, F, g)
    L = Lagrangian.L(F, g)
    mu = mu_cocycle(x, y)
    ls = (act(symplectic_inverse(x), L), L, act(y, L))
    bl = maslov_triple(*ls)
    kf = witt_class(kashiwara_form(*ls))
    return mu == bl, {"x": _mats(x), "y": _mats(y), "mu": mu.to_json(), "mu_BL": bl.to_json(),
                      "two_mu_BL": (bl + bl).to_json(), "kashiwara": kf.to_json()}


@family("cocycle_identity")
def _cocycle_identity(rng, F, g):
    x, y = _pair(rng, F, g)
    z = random_symplectic(F, g, rng, length=rng.randint(1, 5))
    s = mu_cocycle(y, z) - mu_cocycle(x @ y, z) + mu_cocycle(x, y @ z) - mu_cocycle(x, y)
    return s.is_zero(), {"x": _mats(x), "y": _mats(y), "z": _mats(z)}


@family("phi_levi")
def _phi_levi(rng, F, g):
    x = random_invertible(F, g, rng)
    want = mod_I2(witt_class_of_diagonal(F, [1, -x.det()]))
    return phi(generator_h(x)) == want, {"x": _mats(x)}


@family("phi_unipotent")
def _phi_unipotent(rng, F, g):
    u = random_symmetric(F, g, rng)
    x = random_invertible(F, g, rng)
    stab = generator_upper(u) @ generator_h(x)
    want = mod_I2(witt_class_of_diagonal(F, [1, -x.det()]))
    ok = phi(generator_upper(u)) == WittModI2.zero(F) and phi(stab) == want
    return ok, {"u": _mats(u), "x": _mats(x)}


def _sign_gg(g: int) -> int:
    return -1 if (g * (g - 1) // 2) % 2 else 1


@family("phi_swap_literal")
def _phi_swap_literal(rng, F, g):
    """Phi(m(y)) against F((-1)^(g(g-1)/2) det y, 3g), read literally through F."""
    y = random_invertible(F, g, rng)
    got = phi(generator_m(y))
    want = F_map(_sign_gg(g) * y.det(), 3 * g, F)
    return got == want, {"y": _mats(y), "phi": got.to_json(), "F": want.to_json()}


@family("phi_swap")
def _phi_swap(rng, F, g):
    """Phi(m(y)) has rank 3g and signed discriminant (-1)^(g(g-1)/2) det y."""
    y = random_invertible(F, g, rng)
    got = phi(generator_m(y))
    return got == phi_of_swap(y), {"y": _mats(y), "phi": got.to_json()}


@family("closed_forms")
def _closed_forms(rng, F, g):
    x = random_invertible(F, g, rng)
    v = random_symmetric(F, g, rng)
    mats = [
        generator_upper(v) @ generator_h(x),
        generator_lower(v) @ generator_h(x),
        generator_h(x) @ generator_m(Matrix.identity(F, g)),
        generator_upper(v) @ generator_m(x),
        generator_m(x) @ generator_upper(v),
    ]
    ok = all(phi_closed_forms(M) == phi(M) for M in mats)
    summed = phi_closed_forms(mats[2]) == phi_closed_forms(generator_h(x)) + phi_closed_forms(generator_m(Matrix.identity(F, g)))
    return ok and summed, {"x": _mats(x), "v": _mats(v)}


@family("discriminants")
def _discriminants(rng, F, g):
    v = random_invertible(F, g, rng)
    v = v.T @ v if not v.is_symmetric() else v
    while not v.is_invertible():
        v = random_symmetric(F, g, rng)
    d_swap = signed_discriminant(sylvester_of_sturm(m_word(v))) == F.square_class(F(_sign_gg(g)) * v.det())
    # even-length words evaluating to h(a): the Levi word r.0bar times a kernel word
    a = random_invertible(F, g, rng)
    p, q = symmetric_factorization(a)
    r = SturmWord(F, g, 0, (-p, p.inverse(), q - p, -q.inverse(), q, Matrix.zeros(F, g)))
    k = _kernel(rng, F, g)
    w = r * k if rng.random() < 0.7 else r
    ok_eval = evaluate(w) == generator_h(a) and len(w) % 2 == 0
    d_levi = signed_discriminant(sylvester_of_sturm(w)) == F.square_class(a.det())
    return d_swap and d_levi and ok_eval, {"v": _mats(v), "a": _mats(a), "word": w.to_json()}


FP_WITT_FIELDS = (Field.GF(3), Field.GF(5), Field.GF(7))


def witt_group_structure() -> dict:
    """Order of <1> in W(GF(3)) and the number of classes of W(GF(p))."""
    F3 = Field.GF(3)
    one = witt_class_of_diagonal(F3, [1])
    acc, order = one, 1
    while not acc.is_zero():
        acc, order = acc + one, order + 1
    sizes = {}
    for F in FP_WITT_FIELDS:
        classes = set()
        for r in range(0, 5):
            for diag in itertools.product(range(1, F.p), repeat=r):
                classes.add(witt_class_of_diagonal(F, diag))
        sizes[F.p] = len(classes)
    return {"order_of_one_in_W_F3": order, "sizes": sizes}


# -- driver ------------------------------------------------------------------------

def case_seed(seed: int, name: str, index: int) -> int:
    return random.Random(f"{seed}:{name}:{index}").randrange(1 << 62)


def _grid_at(index: int, grid=GRID):
    return grid[index % len(grid)]


def replay(name: str, cseed: int, field: Field, g: int):
    return FAMILIES[name](random.Random(cseed), field, g)


def run_family(name: str, cases: int, seed: int = 0, grid=GRID, stop_after: int | None = None) -> dict:
    if name not in FAMILIES:
        raise KeyError(name)
    failures = []
    passed = 0
    for i in range(cases):
        F, g = _grid_at(i, grid)
        cs = case_seed(seed, name, i)
        try:
            ok, detail = replay(name, cs, F, g)
        except Exception as exc:  # surfaced as a failing case
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        if ok:
            passed += 1
        else:
            failures.append({"case": i, "seed": cs, "field": repr(F), "g": g, "detail": detail})
            if stop_after is not None and len(failures) >= stop_after:
                break
    return {"family": name, "cases": cases, "passed": passed, "failures": failures}


def parse_field(text: str) -> Field:
    text = text.strip()
    if text in ("Q", "QQ"):
        return Field.Q()
    if text.startswith("GF(") and text.endswith(")"):
        return Field.GF(int(text[3:-1]))
    raise ValueError(f"unknown field {text!r}")
