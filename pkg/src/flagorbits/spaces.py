"""Ambient setups: the form omega, its conjugation gamma, the hermitian form phi
and the involution delta, plus the groups K, G0 and K & G0.

Omega is block diagonal with blocks (1), [[0,1],[1,0]] (symmetric types) or
[[0,1],[-1,0]] (symplectic types).  Phi = diag(+-1) is read off the sign
string.  Indices in the public API are 1-based.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FormUnavailable, InvalidSetup, OutOfRange, Singular
from .exactfield import I, ONE, ZERO, Scalar
from .flaglin import (
    Matrix,
    conj,
    conj_transpose,
    identity,
    inverse,
    kernel,
    mat_add,
    mat_eq,
    mat_mul,
    mat_scale,
    mat_vec,
    solve,
    transpose,
    zeros,
)

TYPES = ("A1", "A2", "A3", "BD1", "C1", "C2", "D3")
A_TYPES = ("A1", "A2", "A3")
BCD_TYPES = ("BD1", "C1", "C2", "D3")

# (eta, eps) per orthogonal/symplectic type
ETA_EPS = {"BD1": (1, 1), "C2": (1, -1), "C1": (-1, -1), "D3": (-1, 1)}

SYMPLECTIC = ("A2", "C1", "C2")
ALL_B2 = ("A2", "C1", "C2", "D3")


@dataclass(frozen=True)
class Setup:
    type: str
    n: int
    blocks: tuple = ()
    signs: str = ""
    partner: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        t, n = self.type, self.n
        if t not in TYPES:
            raise InvalidSetup(f"unknown type {t!r}")
        if not isinstance(n, int) or n < 0:
            raise InvalidSetup(f"bad dimension {n!r}")
        blocks = tuple(self.blocks)
        if t == "A3":
            if blocks and any(b != "B1" for b in blocks):
                raise InvalidSetup("type A3 has no form omega; omit blocks")
            blocks = ("B1",) * n
        elif not blocks:
            blocks = ("B2",) * (n // 2) if t in ALL_B2 else ("B1",) * n
        if any(b not in ("B1", "B2") for b in blocks):
            raise InvalidSetup(f"blocks must be B1 or B2: {blocks}")
        if sum(1 if b == "B1" else 2 for b in blocks) != n:
            raise InvalidSetup(f"blocks {blocks} do not fill dimension {n}")
        if t in ALL_B2 and "B1" in blocks:
            raise InvalidSetup(f"type {t} needs all blocks of size 2")
        object.__setattr__(self, "blocks", blocks)
        partner = []
        for b in blocks:
            k = len(partner) + 1
            partner += [k] if b == "B1" else [k + 1, k]
        object.__setattr__(self, "partner", tuple(partner))
        signs = self.signs
        if t in ("A1", "A2"):
            if signs:
                raise InvalidSetup(f"type {t} takes no signs")
        else:
            if len(signs) != n or any(c not in "+-" for c in signs):
                raise InvalidSetup(f"type {t} needs a sign string of length {n}")
            if t in ("BD1", "C2"):
                for k in range(1, n + 1):
                    if signs[k - 1] != signs[partner[k - 1] - 1]:
                        raise InvalidSetup(f"type {t} needs iota-stable signs")
            if t in ("C1", "D3"):
                for k in range(1, n + 1):
                    if signs[k - 1] == signs[partner[k - 1] - 1]:
                        raise InvalidSetup(f"type {t} needs iota to swap N+ and N-")

    # -- derived data
    @property
    def eps_form(self) -> int:
        return -1 if self.type in SYMPLECTIC else 1

    @property
    def eta(self) -> int:
        return ETA_EPS[self.type][0]

    @property
    def p(self) -> int:
        return self.signs.count("+")

    @property
    def q(self) -> int:
        return self.signs.count("-")

    def iota(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise OutOfRange(f"index {k} outside 1..{self.n}")
        return self.partner[k - 1]

    def plus(self) -> list[int]:
        return [k for k in range(1, self.n + 1) if self.signs[k - 1] == "+"]

    def minus(self) -> list[int]:
        return [k for k in range(1, self.n + 1) if self.signs[k - 1] == "-"]

    def has_omega(self) -> bool:
        return self.type != "A3"

    def has_phi(self) -> bool:
        return self.type not in ("A1", "A2")

    def omega_matrix(self) -> Matrix:
        if not self.has_omega():
            raise FormUnavailable("type A3 carries no form omega")
        return _omega(self.blocks, self.eps_form)

    def phi_matrix(self) -> Matrix:
        if not self.has_phi():
            raise FormUnavailable(f"type {self.type} carries no hermitian form phi")
        n = self.n
        M = zeros(n, n)
        for k in range(n):
            M[k][k] = ONE if self.signs[k] == "+" else -ONE
        return M

    def to_json(self) -> dict:
        d = {"type": self.type, "n": self.n}
        if self.type != "A3":
            d["blocks"] = list(self.blocks)
        if self.signs:
            d["signs"] = self.signs
        return d


def _omega(blocks, eps: int) -> Matrix:
    n = sum(1 if b == "B1" else 2 for b in blocks)
    M = zeros(n, n)
    k = 0
    for b in blocks:
        if b == "B1":
            M[k][k] = ONE
            k += 1
        else:
            M[k][k + 1] = ONE
            M[k + 1][k] = ONE if eps == 1 else -ONE
            k += 2
    return M


def default_setup(type_: str, n: int, p: int | None = None, q: int | None = None,
                  blocks=None) -> Setup:
    """A canonical setup for (type, n, p, q)."""
    if type_ in ("A1", "A2"):
        return Setup(type_, n, tuple(blocks or ()))
    if p is None and q is None:
        p = n // 2 if type_ in ("C1", "D3") else (n + 1) // 2
    if p is None:
        p = n - q
    if q is None:
        q = n - p
    if p + q != n or p < 0 or q < 0:
        raise InvalidSetup(f"p + q must equal n ({p} + {q} != {n})")
    if type_ in ("A3",):
        return Setup(type_, n, (), "+" * p + "-" * q)
    if type_ == "BD1":
        if blocks:
            return Setup(type_, n, tuple(blocks), _stable_signs(tuple(blocks), p, q))
        return Setup(type_, n, (), "+" * p + "-" * q)
    if type_ == "C2":
        if p % 2 or q % 2:
            raise InvalidSetup("type C2 needs p and q even")
        return Setup(type_, n, (), "++" * (p // 2) + "--" * (q // 2))
    if p != q:
        raise InvalidSetup(f"type {type_} needs p = q")
    return Setup(type_, n, (), "+-" * (n // 2))


def _stable_signs(blocks, p, q) -> str:
    """An iota-stable sign string with p pluses, earliest blocks first."""
    b2 = blocks.count("B2")
    x2 = min(b2, p // 2)
    x1 = p - 2 * x2
    if x1 > blocks.count("B1"):
        raise InvalidSetup(f"cannot place {p} pluses iota-stably in blocks {blocks}")
    out = []
    for b in blocks:
        if b == "B2":
            out.append("++" if x2 > 0 else "--")
            x2 -= 1
        else:
            out.append("+" if x1 > 0 else "-")
            x1 -= 1
    return "".join(out)


# -- forms and involutions ---------------------------------------------------

def omega(setup: Setup, x, y) -> Scalar:
    M = setup.omega_matrix()
    return _bil(x, mat_vec(M, y))


def phi(setup: Setup, x, y) -> Scalar:
    M = setup.phi_matrix()
    return _bil([a.conjugate() for a in x], mat_vec(M, y))


def _bil(x, y) -> Scalar:
    acc = ZERO
    for a, b in zip(x, y):
        if a and b:
            acc = acc + a * b
    return acc


def gamma(setup: Setup, x) -> list:
    """gamma(x) = Omega conj(x)."""
    return mat_vec(setup.omega_matrix(), [a.conjugate() for a in x])


def delta(setup: Setup, x) -> list:
    """delta(x) = Phi x."""
    setup.phi_matrix()
    return [a if setup.signs[k] == "+" else -a for k, a in enumerate(x)]


# -- groups ------------------------------------------------------------------

GROUPS = ("G", "K", "G0", "KG0")


def _conditions(setup: Setup, group: str) -> list[str]:
    t = setup.type
    if group not in GROUPS:
        raise InvalidSetup(f"unknown group {group!r}")
    if t in ("A1", "A2"):
        table = {"G": [], "K": ["omega"], "G0": ["gamma"], "KG0": ["omega", "gamma"]}
    elif t == "A3":
        table = {"G": [], "K": ["delta"], "G0": ["phi"], "KG0": ["delta", "phi"]}
    else:
        table = {"G": ["omega"], "K": ["omega", "delta"], "G0": ["omega", "phi"],
                 "KG0": ["omega", "delta", "phi"]}
    return table[group]


def is_in_group(g: Matrix, setup: Setup, group: str) -> bool:
    n = setup.n
    if len(g) != n or any(len(r) != n for r in g):
        return False
    conds = _conditions(setup, group)
    inverse(g)  # raises Singular
    for c in conds:
        if c == "omega":
            W = setup.omega_matrix()
            if not mat_eq(mat_mul(mat_mul(transpose(g), W), g), W):
                return False
        elif c == "gamma":
            W = setup.omega_matrix()
            if not mat_eq(mat_mul(W, conj(g)), mat_mul(g, W)):
                return False
        elif c == "delta":
            P = setup.phi_matrix()
            if not mat_eq(mat_mul(P, g), mat_mul(g, P)):
                return False
        elif c == "phi":
            P = setup.phi_matrix()
            if not mat_eq(mat_mul(mat_mul(conj_transpose(g), P), g), P):
                return False
    return True


def _linear_condition(setup: Setup, cond: str, X: Matrix, imag: bool) -> Matrix:
    """Lie algebra condition on the real (imag=False) or imaginary part of X."""
    if cond == "omega":
        W = setup.omega_matrix()
        return mat_add(mat_mul(transpose(X), W), mat_mul(W, X))
    if cond == "gamma":
        # Omega conj(X) = X Omega
        W = setup.omega_matrix()
        a, b = mat_mul(W, X), mat_mul(X, W)
        return mat_add(a, b) if imag else mat_add(a, mat_scale(-1, b))
    if cond == "delta":
        P = setup.phi_matrix()
        return mat_add(mat_mul(X, P), mat_scale(-1, mat_mul(P, X)))
    if cond == "phi":
        # X^* Phi + Phi X = 0 with X^* = A^T - i B^T
        P = setup.phi_matrix()
        t = mat_mul(transpose(X), P)
        return mat_add(mat_scale(-1, t) if imag else t, mat_mul(P, X))
    raise ValueError(cond)


_LIE_CACHE: dict = {}


def lie_algebra_basis(setup: Setup, group: str) -> list[Matrix]:
    """A basis over R of the real Lie algebra of the group, entries in Q(i)."""
    key = (setup, group)
    if key in _LIE_CACHE:
        return _LIE_CACHE[key]
    n = setup.n
    conds = _conditions(setup, group)
    out = []
    for imag in (False, True):
        rows = []  # equations: one row per output entry, one column per unknown
        cols = []
        for a in range(n):
            for b in range(n):
                E = zeros(n, n)
                E[a][b] = ONE
                img = []
                for c in conds:
                    M = _linear_condition(setup, c, E, imag)
                    img += [x for r in M for x in r]
                cols.append(img)
        if conds:
            rows = [[cols[j][i] for j in range(n * n)] for i in range(len(cols[0]))]
            K = kernel(rows, n * n)
            sols = [[K[i][j] for i in range(n * n)] for j in range(len(K[0]) if K and K[0] else 0)]
        else:
            sols = [[ONE if i == j else ZERO for i in range(n * n)] for j in range(n * n)]
        for v in sols:
            X = [[v[a * n + b] * (I if imag else ONE) for b in range(n)] for a in range(n)]
            out.append(X)
    _LIE_CACHE[key] = out
    return out


def cayley(X: Matrix) -> Matrix:
    """(1 - X)^-1 (1 + X)."""
    n = len(X)
    Id = identity(n)
    return solve(mat_add(Id, mat_scale(-1, X)), mat_add(Id, X))


def _discrete_candidate(setup: Setup, rng: random.Random) -> Matrix:
    """A monomial matrix built from block phases, block swaps and in-block flips."""
    n = setup.n
    units = [ONE, -ONE, I, -I]
    starts = []
    k = 0
    for b in setup.blocks:
        starts.append((k, b))
        k += 1 if b == "B1" else 2
    perm = list(range(n))
    # swap two blocks of the same size and matching signs
    same = [(i, j) for i in range(len(starts)) for j in range(i + 1, len(starts))
            if starts[i][1] == starts[j][1]]
    if same and rng.random() < 0.5:
        i, j = rng.choice(same)
        (si, b), (sj, _) = starts[i], starts[j]
        size = 1 if b == "B1" else 2
        for d in range(size):
            perm[si + d], perm[sj + d] = perm[sj + d], perm[si + d]
    M = zeros(n, n)
    for col in range(n):
        M[perm[col]][col] = rng.choice(units)
    if rng.random() < 0.3:
        # swap the two vectors of one 2-block
        twos = [s for s, b in starts if b == "B2"]
        if twos:
            s = rng.choice(twos)
            M[s], M[s + 1] = M[s + 1], M[s]
    return M


def random_element(setup: Setup, group: str, rng: random.Random, terms: int = 2,
                   spread: int = 2) -> Matrix:
    """A random exact element: a Cayley transform, sometimes times a discrete element."""
    basis = lie_algebra_basis(setup, group)
    n = setup.n
    for _ in range(50):
        X = zeros(n, n)
        for _ in range(terms):
            if not basis:
                break
            c = Fraction(rng.randint(-spread, spread), rng.randint(1, 2))
            if c:
                X = mat_add(X, mat_scale(c, rng.choice(basis)))
        try:
            g = cayley(X)
            inverse(g)
        except Singular:
            continue
        if rng.random() < 0.5:
            for _ in range(20):
                d = _discrete_candidate(setup, rng)
                if is_in_group(d, setup, group):
                    g = mat_mul(g, d)
                    break
        return g
    return identity(n)
