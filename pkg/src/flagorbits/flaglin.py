"""Exact linear algebra over tower fields, subspaces and complete flags.

Matrices are lists of rows of Scalars.  Subspaces are given by spanning
columns.  Elimination divides by one pivot inverse per step: inversion in a
tower is the expensive operation, so every other update is a multiply-add.
"""
from __future__ import annotations


from .errors import AmbientMismatch, DimensionMismatch, Singular
from .exactfield import ONE, ZERO, Scalar, join_towers, scalar

Matrix = list  # list[list[Scalar]]


# -- construction -----------------------------------------------------------

def mat(rows) -> Matrix:
    return [[scalar(x) for x in r] for r in rows]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[ZERO] * n for _ in range(m)]


def from_columns(cols, n: int | None = None) -> Matrix:
    cols = [list(c) for c in cols]
    if n is None:
        if not cols:
            raise ValueError("need n for an empty column list")
        n = len(cols[0])
    for c in cols:
        if len(c) != n:
            raise AmbientMismatch(f"column of length {len(c)} in ambient of dim {n}")
    return [[scalar(cols[j][i]) for j in range(len(cols))] for i in range(n)]


def columns(M: Matrix) -> list[tuple]:
    if not M:
        return []
    return [tuple(M[i][j] for i in range(len(M))) for j in range(len(M[0]))]


def shape(M: Matrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Matrix) -> Matrix:
    return [list(r) for r in zip(*M)] if M else []


def conj(M: Matrix) -> Matrix:
    return [[x.conjugate() for x in r] for r in M]


def conj_transpose(M: Matrix) -> Matrix:
    return [[x.conjugate() for x in r] for r in zip(*M)] if M else []


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B:
        return []
    if len(A[0]) != len(B):
        raise AmbientMismatch(f"cannot multiply {shape(A)} by {shape(B)}")
    Bt = list(zip(*B))
    out = []
    for r in A:
        nz = [(k, a) for k, a in enumerate(r) if a]
        row = []
        for col in Bt:
            acc = ZERO
            for k, a in nz:
                b = col[k]
                if b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Matrix, v) -> list:
    out = []
    for r in A:
        acc = ZERO
        for a, x in zip(r, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A: Matrix) -> Matrix:
    c = scalar(c)
    return [[c * a for a in r] for r in A]


def hconcat(*Ms: Matrix) -> Matrix:
    n = len(Ms[0])
    for M in Ms:
        if len(M) != n:
            raise AmbientMismatch("row counts differ")
    return [sum((list(M[i]) for M in Ms), []) for i in range(n)]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return shape(A) == shape(B) and all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for r in A for x in r)


# -- elimination ------------------------------------------------------------

def rref(M: Matrix):
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in M]
    m, n = shape(A)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        p = next((r for r in range(row, m) if A[r][col]), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = A[row][col].inverse()
        A[row] = [x * inv if x else x for x in A[row]]
        piv = A[row]
        for r in range(m):
            if r != row:
                f = A[r][col]
                if f:
                    A[r] = [x - f * y if y else x for x, y in zip(A[r], piv)]
        pivots.append(col)
        row += 1
    return A, pivots


def rank(M: Matrix) -> int:
    A = [list(r) for r in M]
    m, n = shape(A)
    rk = 0
    for col in range(n):
        if rk >= m:
            break
        p = next((r for r in range(rk, m) if A[r][col]), None)
        if p is None:
            continue
        A[rk], A[p] = A[p], A[rk]
        inv = A[rk][col].inverse()
        piv = A[rk]
        for r in range(rk + 1, m):
            f = A[r][col]
            if f:
                f = f * inv
                A[r] = [x - f * y if y else x for x, y in zip(A[r], piv)]
        rk += 1
    return rk


def kernel(M: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {x : Mx = 0} as columns of an (ncols x d) matrix."""
    if not M:
        n = ncols if ncols is not None else 0
        return identity(n)
    R, pivots = rref(M)
    n = len(M[0])
    free = [j for j in range(n) if j not in pivots]
    cols = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        cols.append(v)
    if not cols:
        return [[] for _ in range(n)]
    return from_columns(cols, n)


def solve(A: Matrix, B: Matrix) -> Matrix:
    """X with AX = B for square invertible A."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("solve needs a square matrix")
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    for col in range(n):
        p = next((r for r in range(col, n) if aug[r][col]), None)
        if p is None:
            raise Singular("matrix is singular")
        aug[col], aug[p] = aug[p], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv if x else x for x in aug[col]]
        piv = aug[col]
        for r in range(n):
            if r != col:
                f = aug[r][col]
                if f:
                    aug[r] = [x - f * y if y else x for x, y in zip(aug[r], piv)]
    return [r[n:n + k] for r in aug]


def inverse(A: Matrix) -> Matrix:
    return solve(A, identity(len(A)))


def det(A: Matrix) -> Scalar:
    A = [list(r) for r in A]
    n = len(A)
    d = ONE
    for col in range(n):
        p = next((r for r in range(col, n) if A[r][col]), None)
        if p is None:
            return ZERO
        if p != col:
            A[col], A[p] = A[p], A[col]
            d = -d
        piv = A[col]
        d = d * piv[col]
        inv = piv[col].inverse()
        for r in range(col + 1, n):
            f = A[r][col]
            if f:
                f = f * inv
                A[r] = [x - f * y if y else x for x, y in zip(A[r], piv)]
    return d


def pivot_profile(M: Matrix) -> list:
    """Left-to-right column reduction keyed on the last nonzero row.

    Entry j is the least k such that some vector of span(col_1..col_j) outside
    span(col_1..col_{j-1}) has support in rows 1..k (1-based), or None when
    col_j is dependent on the earlier columns.
    """
    m, n = shape(M)
    by_pivot: dict[int, list] = {}
    out = []
    for j in range(n):
        v = [M[i][j] for i in range(m)]
        while True:
            r = next((i for i in range(m - 1, -1, -1) if v[i]), None)
            if r is None or r not in by_pivot:
                break
            c = by_pivot[r]
            f = v[r] / c[r]
            v = [x - f * y if y else x for x, y in zip(v, c)]
        if r is None:
            out.append(None)
        else:
            by_pivot[r] = v
            out.append(r + 1)
    return out


# -- subspaces --------------------------------------------------------------

def _check_ambient(*Ms):
    ns = {len(M) for M in Ms}
    if len(ns) > 1:
        raise AmbientMismatch(f"ambient dimensions differ: {sorted(ns)}")


def intersection_dim(U: Matrix, W: Matrix) -> int:
    _check_ambient(U, W)
    return rank(U) + rank(W) - rank(hconcat(U, W))


def span_basis(U: Matrix) -> Matrix:
    """Independent columns of U spanning the same space."""
    R, pivots = rref(U)
    n = len(U)
    if not pivots:
        return [[] for _ in range(n)]
    return [[U[i][j] for j in pivots] for i in range(n)]


def perp(U: Matrix, form: Matrix, hermitian: bool = False) -> Matrix:
    """{x : f(u, x) = 0 for all columns u}, f(u,x) = u^T F x or conj(u)^T F x."""
    _check_ambient(U, form)
    n = len(form)
    if not U or not U[0]:
        return identity(n)
    Ut = conj_transpose(U) if hermitian else transpose(U)
    return kernel(mat_mul(Ut, form), n)


def gram(U: Matrix, form: Matrix, hermitian: bool = False, V: Matrix | None = None) -> Matrix:
    V = U if V is None else V
    Ut = conj_transpose(U) if hermitian else transpose(U)
    return mat_mul(mat_mul(Ut, form), V)


def hermitian_signature_matrix(H: Matrix) -> tuple[int, int]:
    """(p, q) of a hermitian matrix by congruence diagonalisation."""
    from .exactfield import sign_of_real

    A = [list(r) for r in H]
    p = q = 0
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i]), None)
        if k is None:
            hit = next(((i, j) for i in range(n) for j in range(n) if A[i][j]), None)
            if hit is None:
                break
            i, j = hit
            # x_i <- x_i + c x_j with c = conj(h_ij) gives diagonal 2|h_ij|^2
            c = A[i][j].conjugate()
            cc = c.conjugate()
            A[i] = [a + cc * b for a, b in zip(A[i], A[j])]
            for r in A:
                r[i] = r[i] + c * r[j]
            k = i
        d = A[k][k]
        s = sign_of_real(d)
        if s > 0:
            p += 1
        else:
            q += 1
        inv = d.inverse()
        rowk = A[k]
        rest = [i for i in range(n) if i != k]
        B = []
        for i in rest:
            f = A[i][k] * inv
            ri = A[i]
            B.append([ri[j] - f * rowk[j] if f and rowk[j] else ri[j] for j in rest])
        A = B
    return p, q


def hermitian_signature(U: Matrix, Phi: Matrix) -> tuple[int, int]:
    """Signature of the restriction of conj(x)^T Phi y to span(U)."""
    _check_ambient(U, Phi)
    if not U or not U[0]:
        return 0, 0
    return hermitian_signature_matrix(gram(U, Phi, hermitian=True))


# -- flags ------------------------------------------------------------------

class Flag:
    """A complete flag F_1 < ... < F_n of C^n, F_k spanned by the first k basis columns."""

    __slots__ = ("n", "basis")

    def __init__(self, basis, n: int | None = None, check: bool = True):
        basis = [tuple(scalar(x) for x in v) for v in basis]
        n = len(basis) if n is None else n
        if len(basis) != n or any(len(v) != n for v in basis):
            raise AmbientMismatch(f"a flag of C^{n} needs {n} vectors of length {n}")
        self.n = n
        self.basis = tuple(basis)
        if check and n and rank(self.matrix()) != n:
            raise Singular("flag basis is linearly dependent")

    @classmethod
    def standard(cls, n: int) -> "Flag":
        return cls(columns(identity(n)), n, check=False)

    def matrix(self) -> Matrix:
        """Basis vectors as columns."""
        if not self.n:
            return []
        return [[v[i] for v in self.basis] for i in range(self.n)]

    def subspace(self, k: int) -> Matrix:
        if not 0 <= k <= self.n:
            raise DimensionMismatch(f"no F_{k} in a flag of C^{self.n}")
        return [[v[i] for v in self.basis[:k]] for i in range(self.n)]

    def tower(self):
        return join_towers(*(x.tower for v in self.basis for x in v))

    def transform(self, g: Matrix) -> "Flag":
        return Flag([mat_vec(g, v) for v in self.basis], self.n, check=False)

    def same_as(self, other: "Flag") -> bool:
        """Equality as flags (not as bases)."""
        if self.n != other.n:
            return False
        return all(
            rank(hconcat(self.subspace(k), other.subspace(k))) == k for k in range(1, self.n + 1)
        )

    def __repr__(self):
        return f"Flag(n={self.n}, basis={[[str(x) for x in v] for v in self.basis]})"


def relative_position(F: Flag, G: Flag) -> tuple[int, ...]:
    """The permutation w with dim F_k & G_l = #{j <= l : w_j <= k}."""
    if F.n != G.n:
        raise DimensionMismatch(f"flags of C^{F.n} and C^{G.n}")
    if F.n == 0:
        return ()
    coords = solve(F.matrix(), G.matrix())
    return tuple(pivot_profile(coords))

