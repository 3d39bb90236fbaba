"""Shared generators and independent oracles for the test suite."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from flagorbits.clans import Clan, enumerate_params
from flagorbits.classify import expected_dual_value, expected_isotropic_value, special_basis
from flagorbits.errors import InvalidSetup, Singular
from flagorbits.exactfield import I, ONE, ZERO
from flagorbits.flaglin import (
    Flag,
    intersection_dim,
    kernel,
    mat,
    mat_mul,
    mat_vec,
    solve,
    identity,
    mat_add,
    mat_scale,
    rank,
)
from flagorbits.spaces import ALL_B2, BCD_TYPES, TYPES, Setup, default_setup, random_element


def canonical_setups(nmax: int, types=TYPES):
    """One setup per (type, block-aligned n, (p, q) split)."""
    for t in types:
        for n in range(1, nmax + 1):
            if t in ALL_B2 and n % 2:
                continue
            if t in ("A1", "A2"):
                yield Setup(t, n)
                continue
            for p in range(n + 1):
                try:
                    yield default_setup(t, n, p)
                except InvalidSetup:
                    pass


def varied_setups(nmax: int, types=TYPES):
    """Canonical setups plus some alternative block and sign layouts."""
    seen = set()
    for S in canonical_setups(nmax, types):
        seen.add(S)
        yield S
    for n in range(1, nmax + 1):
        for t in types:
            alts = []
            if t == "A1" and n >= 2:
                alts.append(Setup(t, n, ("B2",) + ("B1",) * (n - 2)))
                alts.append(Setup(t, n, ("B1",) * (n - 2) + ("B2",)))
            if t == "A3" and n >= 2:
                alts.append(Setup(t, n, (), "".join("+-"[k % 2] for k in range(n))))
            if t == "BD1" and n >= 3:
                bl = ("B1",) + ("B2",) * ((n - 1) // 2) + ("B1",) * ((n - 1) % 2)
                for p in range(n + 1):
                    try:
                        alts.append(default_setup(t, n, p, blocks=bl))
                    except InvalidSetup:
                        pass
            if t in ("C1", "D3") and n % 2 == 0 and n >= 2:
                alts.append(Setup(t, n, (), "-+" + "+-" * (n // 2 - 1)))
            for S in alts:
                if S not in seen:
                    seen.add(S)
                    yield S


# -- independent oracles --------------------------------------------------------

def relpos_by_dims(F: Flag, G: Flag) -> tuple:
    """w_j = min{k : dim F_k & G_j > dim F_k & G_{j-1}}, straight from ranks."""
    n = F.n
    d = [[intersection_dim(F.subspace(k), G.subspace(l)) if k and l else 0
          for l in range(n + 1)] for k in range(n + 1)]
    return tuple(min(k for k in range(1, n + 1) if d[k][j] > d[k][j - 1]) for j in range(1, n + 1))


def brute_force_involutions(n: int):
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if all(perm[perm[k] - 1] == k + 1 for k in range(n)):
            out.append(perm)
    return out


def brute_force_clans(setup: Setup):
    """Parameter set straight from the definitions, via all permutations and sign maps."""
    n, t = setup.n, setup.type
    out = []
    for w in brute_force_involutions(n):
        fixed = [k for k in range(1, n + 1) if w[k - 1] == k]
        if t == "A1":
            out.append(Clan(n, w))
            continue
        if t == "A2":
            if not fixed:
                out.append(Clan(n, w))
            continue
        for signs in itertools.product((1, -1), repeat=len(fixed)):
            c = Clan(n, w, tuple(zip(fixed, signs)))
            # signature from scratch: arcs count once on each side
            arcs = (n - len(fixed)) // 2
            p = arcs + sum(1 for s in signs if s > 0)
            q = arcs + sum(1 for s in signs if s < 0)
            if (p, q) != (setup.p, setup.q):
                continue
            if t in BCD_TYPES:
                eta = {"BD1": 1, "C2": 1, "C1": -1, "D3": -1}[t]
                eps = {"BD1": 1, "C2": -1, "C1": -1, "D3": 1}[t]
                w0 = lambda k: n + 1 - k  # noqa: E731
                if any(w[w0(k) - 1] != w0(w[k - 1]) for k in range(1, n + 1)):
                    continue
                sm = dict(zip(fixed, signs))
                if any(sm[w0(k)] != eta * sm[k] for k in fixed):
                    continue
                if eta != eps and any(w[k - 1] == w0(k) != k for k in range(1, n + 1)):
                    continue
            out.append(c)
    return out


# -- random data ------------------------------------------------------------------

def random_gaussian(rng: random.Random, spread: int = 3):
    return Fraction(rng.randint(-spread, spread)) + I * Fraction(rng.randint(-spread, spread))


def random_flag(setup: Setup, rng: random.Random) -> Flag:
    """A random flag: any basis for the A types, an isotropic one otherwise."""
    n = setup.n
    if setup.type in BCD_TYPES:
        params = enumerate_params(setup)
        c = rng.choice(params)
        F = Flag(special_basis(c, setup), n, check=False)
        return F.transform(random_element(setup, "G", rng, terms=3))
    while True:
        basis = [[random_gaussian(rng) for _ in range(n)] for _ in range(n)]
        try:
            return Flag(basis, n)
        except Singular:
            continue


def _upper_lie(n, forms):
    """Upper triangular X (over R, entries in Q(i)) with X^T H + H X = 0 or X^* H + H X = 0."""
    idx = [(a, b) for a in range(n) for b in range(a, n)]
    out = []
    for imag in (False, True):
        cols = []
        for a, b in idx:
            E = [[ZERO] * n for _ in range(n)]
            E[a][b] = ONE
            img = []
            for H, herm in forms:
                Et = [list(r) for r in zip(*E)]
                t1 = mat_mul(Et, H)
                if herm and imag:
                    t1 = mat_scale(-1, t1)
                M = mat_add(t1, mat_mul(H, E))
                img += [x for r in M for x in r]
            cols.append(img)
        rows = [[cols[j][i] for j in range(len(idx))] for i in range(len(cols[0]))]
        K = kernel(rows, len(idx))
        dim = len(K[0]) if K and K[0] else 0
        for j in range(dim):
            X = [[ZERO] * n for _ in range(n)]
            for r, (a, b) in enumerate(idx):
                X[a][b] = K[r][j] * (I if imag else ONE)
            out.append(X)
    return out


def dual_stabilizer_element(c: Clan, setup: Setup, rng: random.Random):
    """Upper triangular T with v.T still dual for c whenever v is (flag preserved)."""
    n = setup.n
    forms = []
    H = mat([[expected_dual_value(c, setup, k, l) for l in range(1, n + 1)] for k in range(1, n + 1)])
    forms.append((H, setup.type not in ("A1", "A2")))
    if setup.type in BCD_TYPES:
        Hw = mat([[expected_isotropic_value(c, setup, k, l) for l in range(1, n + 1)]
                  for k in range(1, n + 1)])
        forms.append((Hw, False))
    basis = _upper_lie(n, forms)
    for _ in range(20):
        X = [[ZERO] * n for _ in range(n)]
        for B in rng.sample(basis, min(3, len(basis))):
            X = mat_add(X, mat_scale(Fraction(rng.randint(-2, 2), rng.randint(1, 3)), B))
        Id = identity(n)
        try:
            return solve(mat_add(Id, mat_scale(-1, X)), mat_add(Id, X))
        except Singular:
            continue
    return identity(n)


def apply_right(basis, T):
    """Columns of (basis matrix) * T."""
    n = len(basis)
    return [tuple(sum((basis[k][i] * T[k][j] for k in range(n) if T[k][j]), ZERO) for i in range(n))
            for j in range(n)]


def scrambled_dual_input(c: Clan, setup: Setup, rng: random.Random):
    """(F, dual basis of F) with F in the K & G0 orbit of the special representative of c."""
    g = random_element(setup, "KG0", rng)
    v = [tuple(mat_vec(g, x)) for x in special_basis(c, setup)]
    T = dual_stabilizer_element(c, setup, rng)
    vt = apply_right(v, T)
    return Flag(v, setup.n, check=False), vt


# -- orbit dimensions from the Lie algebra ------------------------------------------

def orbit_dimension(F: Flag, setup: Setup, group: str) -> int:
    """Real dimension of the orbit through F: dim k - dim(k & b_F)."""
    from flagorbits.flaglin import inverse
    from flagorbits.spaces import lie_algebra_basis

    n = setup.n
    V = F.matrix()
    Vi = inverse(V)
    rows = []
    cols = []
    for B in lie_algebra_basis(setup, group):
        M = mat_mul(mat_mul(Vi, B), V)
        col = []
        for a in range(n):
            for b in range(a):
                col += [M[a][b].real(), M[a][b].imag()]
        cols.append(col)
    if not cols or not cols[0]:
        return 0
    rows = [[c[i] for c in cols] for i in range(len(cols[0]))]
    return rank(rows)


def flag_variety_dimension(setup: Setup) -> int:
    """Real dimension of the full flag variety (isotropic flags for B, C, D)."""
    n = setup.n
    if setup.type not in BCD_TYPES:
        return n * (n - 1)
    m = n // 2
    cdim = m * m if (n % 2 or setup.eps_form == -1) else m * (m - 1)
    return 2 * cdim
