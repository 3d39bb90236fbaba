"""Classification of flags into K- and G0-orbits, special representatives and
the normalisation of a dual basis into one that is dual and conjugate at once.

Conventions: a basis (v_1..v_n) determines the flag F_k = <v_1..v_k>.  For
types A1/A2 the K-side condition is w-duality for omega and the G0-side one
is w-conjugacy for gamma; for A3 and the orthogonal/symplectic types the
K-side condition is (w,eps)-conjugacy for delta and the G0-side one is
(w,eps)-duality for phi.
"""
from __future__ import annotations

from .clans import Clan, check_param, in_param_set
from .errors import (
    ClassificationInconsistent,
    DimensionMismatch,
    InvalidDualBasis,
    InvalidParam,
    NegativePivot,
    NotInIntersection,
    NotIsotropic,
)
from .exactfield import I, ONE, ZERO, TowerField, adjoin_sqrt, join_towers, sign_of_real
from .flaglin import (
    Flag,
    conj_transpose,
    gram,
    hermitian_signature_matrix,
    inverse,
    mat_mul,
    pivot_profile,
    rank,
    hconcat,
    relative_position,
    transpose,
)
from .spaces import BCD_TYPES, ETA_EPS, Setup, delta, gamma, omega, phi

FAMILIES = ("K", "G0")

_SQRT2_TOWER, _SQRT2 = adjoin_sqrt(TowerField.base(), 2)
_HALF_SQRT2 = _SQRT2 / 2  # 1/sqrt(2)


def _check_family(family: str):
    if family not in FAMILIES:
        raise InvalidParam(f"unknown family {family!r}")


def condition_for(setup: Setup, family: str) -> str:
    """'dual' or 'conjugate': the basis condition characterising the family's orbits."""
    _check_family(family)
    if setup.type in ("A1", "A2"):
        return "dual" if family == "K" else "conjugate"
    return "conjugate" if family == "K" else "dual"


# -- derived flags -------------------------------------------------------------

def _reverse_cols(M):
    return [list(reversed(r)) for r in M]


def perp_flag(F: Flag, setup: Setup) -> Flag:
    """The flag F^perp whose k-th member is (F_{n-k})^perp for omega."""
    V = F.matrix()
    U = _reverse_cols(inverse(mat_mul(transpose(V), setup.omega_matrix())))
    return Flag([tuple(r[j] for r in U) for j in range(F.n)], F.n, check=False)


def dagger_flag(F: Flag, setup: Setup) -> Flag:
    """The flag F^dagger whose k-th member is (F_{n-k})^perp for phi."""
    V = F.matrix()
    U = _reverse_cols(inverse(mat_mul(conj_transpose(V), setup.phi_matrix())))
    return Flag([tuple(r[j] for r in U) for j in range(F.n)], F.n, check=False)


def gamma_flag(F: Flag, setup: Setup) -> Flag:
    return Flag([tuple(gamma(setup, v)) for v in F.basis], F.n, check=False)


def delta_flag(F: Flag, setup: Setup) -> Flag:
    return Flag([tuple(delta(setup, v)) for v in F.basis], F.n, check=False)


def is_isotropic(F: Flag, setup: Setup) -> bool:
    """F_k^perp = F_{n-k} for all k, i.e. omega(v_i, v_j) = 0 whenever i + j <= n."""
    G = gram(F.matrix(), setup.omega_matrix())
    n = F.n
    return all(not G[i][j] for i in range(n) for j in range(n) if i + j + 2 <= n)


# -- classification ------------------------------------------------------------

def _compose_w0(w) -> tuple:
    n = len(w)
    return tuple(n + 1 - x for x in w)


def _sign_jumps(seq) -> list:
    """Per step: +1 if only the first entry grew, -1 if only the second, 0 if both."""
    out = []
    prev = (0, 0)
    for cur in seq:
        dp, dq = cur[0] - prev[0], cur[1] - prev[1]
        out.append({(1, 0): 1, (0, 1): -1, (1, 1): 0}.get((dp, dq)))
        prev = cur
    return out


def subspace_sign_dims(F: Flag, setup: Setup) -> tuple:
    """(dim F_l & V+, dim F_l & V-) for l = 1..n."""
    V = F.matrix()
    n = F.n
    out_plus = _kernel_growth([V[i - 1] for i in setup.minus()], n)
    out_minus = _kernel_growth([V[i - 1] for i in setup.plus()], n)
    return tuple(zip(out_plus, out_minus))


def _kernel_growth(rows, n) -> list:
    """dim {x in F_l : rows(x) = 0} for l = 1..n, where rows are coordinates of F's basis."""
    if not rows:
        return list(range(1, n + 1))
    prof = pivot_profile(rows)
    out, rk = [], 0
    for l, p in enumerate(prof, 1):
        if p is not None:
            rk += 1
        out.append(l - rk)
    return out


def hermitian_signatures(F: Flag, setup: Setup) -> tuple:
    """Signature of phi restricted to F_l for l = 1..n."""
    H = gram(F.matrix(), setup.phi_matrix(), hermitian=True)
    return tuple(hermitian_signature_matrix([r[:l] for r in H[:l]]) for l in range(1, F.n + 1))


def classify(F: Flag, setup: Setup, family: str) -> Clan:
    """The orbit parameter of F for the K-orbits (family 'K') or G0-orbits ('G0')."""
    _check_family(family)
    if F.n != setup.n:
        raise DimensionMismatch(f"flag in C^{F.n}, setup of dimension {setup.n}")
    n, t = F.n, setup.type
    if n == 0:
        c = Clan(0, ())
        if t not in ("A1", "A2"):
            c = Clan(0, (), ())
        return c
    if t in ("A1", "A2"):
        if family == "K":
            w = _compose_w0(relative_position(perp_flag(F, setup), F))
        else:
            w = relative_position(gamma_flag(F, setup), F)
        try:
            c = Clan(n, w)
        except InvalidParam as e:
            raise ClassificationInconsistent(f"relative position {w} is not an involution") from e
        if not in_param_set(c, setup):
            raise ClassificationInconsistent(f"{c} is not a parameter for {t}")
        return c
    if t in BCD_TYPES and not is_isotropic(F, setup):
        raise NotIsotropic("flag is not omega-isotropic")
    if family == "K":
        w = relative_position(delta_flag(F, setup), F)
        sig = subspace_sign_dims(F, setup)
    else:
        w = _compose_w0(relative_position(dagger_flag(F, setup), F))
        sig = hermitian_signatures(F, setup)
    try:
        plain = Clan(n, w)
    except InvalidParam as e:
        raise ClassificationInconsistent(f"relative position {w} is not an involution") from e
    jumps = _sign_jumps(sig)
    signs = {}
    for k in plain.fixed_points():
        s = jumps[k - 1]
        if s not in (1, -1):
            raise ClassificationInconsistent(f"no sign jump at fixed point {k}")
        signs[k] = s
    c = Clan(n, w, tuple(signs.items()))
    if c.signature() != tuple(sig):
        raise ClassificationInconsistent(f"signature of {c} disagrees with the flag")
    if not in_param_set(c, setup):
        raise ClassificationInconsistent(f"{c} is not a parameter for {t}")
    return c


# -- basis conditions ----------------------------------------------------------

def expected_dual_value(c: Clan, setup: Setup, k: int, l: int) -> int:
    """Prescribed value of omega(v_k, v_l) (A1/A2) or phi(v_k, v_l) (A3 and the rest)."""
    w = c.w
    if w[k - 1] != l:
        return 0
    if setup.type in ("A1", "A2"):
        return 1 if l >= k else setup.eps_form
    if k == l:
        return c.sign(k)
    return 1


def is_dual_basis(basis, c: Clan, setup: Setup) -> bool:
    n = setup.n
    if setup.type in ("A1", "A2"):
        G = gram(_cols(basis, n), setup.omega_matrix())
    else:
        G = gram(_cols(basis, n), setup.phi_matrix(), hermitian=True)
    return all(G[k][l] == expected_dual_value(c, setup, k + 1, l + 1)
               for k in range(n) for l in range(n))


def is_conjugate_basis(basis, c: Clan, setup: Setup) -> bool:
    n = setup.n
    w = c.w
    basis = [list(v) for v in basis]
    for k in range(1, n + 1):
        v = basis[k - 1]
        target = basis[w[k - 1] - 1]
        if setup.type in ("A1", "A2"):
            img = gamma(setup, v)
            coef = setup.eps_form if w[k - 1] >= k else 1
        else:
            img = delta(setup, v)
            coef = c.sign(k) if w[k - 1] == k else 1
        if any(a != coef * b for a, b in zip(img, target)):
            return False
    return True


def expected_isotropic_value(c: Clan, setup: Setup, k: int, l: int) -> int:
    """Prescribed omega(v_k, v_l) for the orthogonal/symplectic special bases."""
    n = setup.n
    if l != n + 1 - k:
        return 0
    eta, eps = ETA_EPS[setup.type]
    wk, wl = c.w[k - 1], c.w[l - 1]
    if k <= l and k <= wk <= l and k <= wl <= l:
        return 1
    if l <= k and l <= wk <= k and l <= wl <= k:
        return eps
    if wk < k < wl and wk < l < wl:
        return eta
    if wl < k < wk and wl < l < wk:
        return eta * eps
    raise InvalidParam(f"no prescribed value at ({k}, {l}) for {c}")


def satisfies_isotropic_gram(basis, c: Clan, setup: Setup) -> bool:
    n = setup.n
    G = gram(_cols(basis, n), setup.omega_matrix())
    return all(G[k][l] == expected_isotropic_value(c, setup, k + 1, l + 1)
               for k in range(n) for l in range(n))


def is_special_basis(basis, c: Clan, setup: Setup) -> bool:
    ok = is_dual_basis(basis, c, setup) and is_conjugate_basis(basis, c, setup)
    if ok and setup.type in BCD_TYPES:
        ok = satisfies_isotropic_gram(basis, c, setup)
    return ok


def _cols(basis, n):
    return [[v[i] for v in basis] for i in range(n)]


# -- special representatives -----------------------------------------------------

def _unit(n: int, k: int) -> list:
    v = [ZERO] * n
    v[k - 1] = ONE
    return v


def _lin(*terms) -> list:
    """sum of c * v."""
    out = None
    for c, v in terms:
        cv = [c * x for x in v]
        out = cv if out is None else [a + b for a, b in zip(out, cv)]
    return out


def _a1_base(setup: Setup) -> list:
    """An orthonormal basis f with omega(f_j, f_k) = delta_jk and gamma(f_k) = f_k."""
    n = setup.n
    f = []
    k = 1
    for b in setup.blocks:
        if b == "B1":
            f.append(_unit(n, k))
            k += 1
        else:
            e, e2 = _unit(n, k), _unit(n, k + 1)
            f.append(_lin((_HALF_SQRT2, e), (_HALF_SQRT2, e2)))
            f.append(_lin((-I * _HALF_SQRT2, e), (I * _HALF_SQRT2, e2)))
            k += 2
    return f


def special_basis(c: Clan, setup: Setup) -> list:
    """A basis that is dual and conjugate for c (and, for the orthogonal and
    symplectic types, has the prescribed omega-Gram matrix)."""
    check_param(c, setup)
    t, n = setup.type, setup.n
    v = [None] * n
    arcs = c.arcs()
    if t == "A1":
        f = _a1_base(setup)
        m = len(arcs)
        for l, (a, b) in enumerate(arcs, 1):
            f1, f2 = f[2 * l - 2], f[2 * l - 1]
            v[a - 1] = _lin((_HALF_SQRT2, f1), (I * _HALF_SQRT2, f2))
            v[b - 1] = _lin((_HALF_SQRT2, f1), (-I * _HALF_SQRT2, f2))
        for k, x in enumerate(c.fixed_points(), 1):
            v[x - 1] = f[2 * m + k - 1]
    elif t == "A2":
        for l, (a, b) in enumerate(arcs, 1):
            v[a - 1] = _unit(n, 2 * l - 1)
            v[b - 1] = _unit(n, 2 * l)
    elif t == "A3":
        ep = [_unit(n, k) for k in setup.plus()]
        em = [_unit(n, k) for k in setup.minus()]
        m = len(arcs)
        for k, (a, b) in enumerate(arcs):
            v[a - 1] = _lin((_HALF_SQRT2, ep[k]), (_HALF_SQRT2, em[k]))
            v[b - 1] = _lin((_HALF_SQRT2, ep[k]), (-_HALF_SQRT2, em[k]))
        plus = [k for k, s in c.signs if s > 0]
        minus = [k for k, s in c.signs if s < 0]
        for j, x in enumerate(plus):
            v[x - 1] = ep[m + j]
        for j, x in enumerate(minus):
            v[x - 1] = em[m + j]
    else:
        v = _bcd_special(c, setup)
    return [tuple(x) for x in v]


def _bcd_decompose(c: Clan):
    n = c.n
    sym, pairs = [], []
    for a, b in c.arcs():
        if b == n + 1 - a:
            sym.append(a)
        else:
            mirror = (n + 1 - b, n + 1 - a)
            if a < mirror[0]:
                pairs.append(a)
    plus = [k for k, s in c.signs if s > 0]
    minus = [k for k, s in c.signs if s < 0]
    return sorted(sym), sorted(pairs), plus, minus


def _bcd_special(c: Clan, setup: Setup) -> list:
    n, t = setup.n, setup.type
    eps = setup.eps_form
    star = lambda k: n + 1 - k  # noqa: E731
    sym, pairs, plus, minus = _bcd_decompose(c)
    tt, s = len(sym), len(pairs)
    v = [None] * n
    if t in ("BD1", "C2"):
        # allocate x, y, y*, z inside V+ and V- separately
        alloc = {}
        for sg, idx, fixed in (("+", setup.plus(), plus), ("-", setup.minus(), minus)):
            blocks = _blocks_within(setup, idx)
            alloc[sg] = _alloc_stable(setup, blocks, tt, s, len(fixed), n)
        for j, d in enumerate(sym):
            xp, xm = alloc["+"]["x"][j], alloc["-"]["x"][j]
            v[d - 1] = _lin((_HALF_SQRT2, xp), (I * _HALF_SQRT2, xm))
            v[star(d) - 1] = _lin((_HALF_SQRT2, xp), (-I * _HALF_SQRT2, xm))
        ys = {sg: alloc[sg]["y"] for sg in "+-"}
        for j, cj in enumerate(pairs):
            (yp, yps), (ym, yms) = ys["+"][j], ys["-"][j]
            _place_pair(v, c, cj, yp, yps, ym, yms, star)
        for sg, fixed in (("+", plus), ("-", minus)):
            for j, a in enumerate(fixed):
                v[a - 1] = alloc[sg]["z"][j]
        return v
    # C1 and D3: every block has one index in N+ and one in N-
    blocks = []
    for k in range(1, n + 1):
        if k < setup.iota(k):
            a = k if setup.signs[k - 1] == "+" else setup.iota(k)
            b = setup.iota(a)
            kappa = 1 if a < b else eps
            blocks.append((_unit(n, a), _unit(n, b), kappa))
    it = iter(blocks)
    for d in sym:
        ea, eb, kappa = next(it)
        xp, xm = ea, [I * kappa * x for x in eb]
        v[d - 1] = _lin((_HALF_SQRT2, xp), (I * _HALF_SQRT2, xm))
        v[star(d) - 1] = _lin((_HALF_SQRT2, xp), (-I * _HALF_SQRT2, xm))
    for cj in pairs:
        ea, eb, kappa = next(it)
        yp, yms = ea, [kappa * x for x in eb]
        ea2, eb2, kappa2 = next(it)
        ym, yps = eb2, [eps * kappa2 * x for x in ea2]
        _place_pair(v, c, cj, yp, yps, ym, yms, star)
    P = len(plus)
    for j, a in enumerate(plus):
        ea, eb, kappa = next(it)
        b = minus[P - 1 - j]
        target = 1 if a < b else eps
        v[a - 1] = ea
        v[b - 1] = [target * kappa * x for x in eb]
    return v


def _place_pair(v, c, cj, yp, yps, ym, yms, star):
    cp = c.w[cj - 1]
    v[cj - 1] = _lin((_HALF_SQRT2, yp), (_HALF_SQRT2, ym))
    v[cp - 1] = _lin((_HALF_SQRT2, yp), (-_HALF_SQRT2, ym))
    v[star(cj) - 1] = _lin((_HALF_SQRT2, yps), (_HALF_SQRT2, yms))
    v[star(cp) - 1] = _lin((_HALF_SQRT2, yps), (-_HALF_SQRT2, yms))


def _blocks_within(setup: Setup, idx) -> list:
    out = []
    for k in idx:
        j = setup.iota(k)
        if j == k:
            out.append((k,))
        elif k < j:
            out.append((k, j))
    return out


def _alloc_stable(setup: Setup, blocks, tt: int, s: int, P: int, n: int) -> dict:
    """x (t vectors), y pairs (s), z (P vectors) in V+ or V- for BD1 and C2."""
    if setup.type == "BD1":
        f = []
        for b in blocks:
            if len(b) == 1:
                f.append(_unit(n, b[0]))
            else:
                e, e2 = _unit(n, b[0]), _unit(n, b[1])
                f.append(_lin((_HALF_SQRT2, e), (_HALF_SQRT2, e2)))
                f.append(_lin((-I * _HALF_SQRT2, e), (I * _HALF_SQRT2, e2)))
        it = iter(f)

        def pair():
            f1, f2 = next(it), next(it)
            return (_lin((_HALF_SQRT2, f1), (I * _HALF_SQRT2, f2)),
                    _lin((_HALF_SQRT2, f1), (-I * _HALF_SQRT2, f2)))

        x = [next(it) for _ in range(tt)]
        y = [pair() for _ in range(s)]
        z = [None] * P
        for j in range(P // 2):
            z[j], z[P - 1 - j] = pair()
        if P % 2:
            z[P // 2] = next(it)
        return {"x": x, "y": y, "z": z}
    # C2: symplectic pairs (e_k, e_k+1) with omega = 1
    it = iter(blocks)

    def spair():
        a, b = next(it)
        return _unit(n, a), _unit(n, b)

    y = [spair() for _ in range(s)]
    z = [None] * P
    for j in range(P // 2):
        z[j], z[P - 1 - j] = spair()
    return {"x": [], "y": y, "z": z}


def build_representative(c: Clan, setup: Setup, family: str = "K") -> Flag:
    """A flag in the orbit of c (for either family: the special basis serves both)."""
    _check_family(family)
    return Flag(special_basis(c, setup), setup.n, check=False)


# -- normalisation ---------------------------------------------------------------

def spans_flag(basis, F: Flag) -> bool:
    n = F.n
    M = _cols(basis, n)
    for k in range(1, n + 1):
        sub = [r[:k] for r in M]
        if rank(hconcat(sub, F.subspace(k))) != k or rank(sub) != k:
            return False
    return True


def normalize_to_special(F: Flag, dual_basis, c: Clan, setup: Setup) -> list:
    """Turn a dual basis of F into a basis that is both dual and conjugate.

    F must lie in the K-orbit and in the G0-orbit of c.  Square roots of
    positive pivots are adjoined to the tower as needed.
    """
    n = setup.n
    if F.n != n or len(dual_basis) != n:
        raise DimensionMismatch("flag, basis and setup dimensions differ")
    check_param(c, setup)
    if classify(F, setup, "K") != c or classify(F, setup, "G0") != c:
        raise NotInIntersection(f"flag is not in the intersection of the orbits of {c}")
    v = [list(x) for x in dual_basis]
    if not spans_flag(v, F):
        raise InvalidDualBasis("basis does not span the flag")
    a_type = setup.type in ("A1", "A2")
    eps = setup.eps_form if a_type else 1
    w = c.w
    tower = join_towers(F.tower(), *(x.tower for vec in v for x in vec))
    for l in range(1, n + 1):
        wl = w[l - 1]
        vl = v[l - 1]
        if wl < l:
            continue
        alpha = ZERO
        for x in vl:
            if x:
                alpha = alpha + x * x.conjugate()
        if sign_of_real(alpha) <= 0:
            raise NegativePivot(f"pivot {alpha} at position {l}")
        if wl == l:
            # gamma- or delta-fixed vector: only its length may be off
            if a_type and alpha != 1:
                tower, r = adjoin_sqrt(tower, alpha)
                v[l - 1] = [x / r for x in vl]
            continue
        g = gamma(setup, vl) if a_type else delta(setup, vl)
        lam = omega(setup, vl, g) if a_type else phi(setup, vl, g)
        tower, r = adjoin_sqrt(tower, alpha)
        rinv = r.inverse()
        new = [list(x) for x in v]
        new[l - 1] = [x * rinv for x in vl]
        new[wl - 1] = [eps * rinv * x for x in g]
        laminv = lam.inverse()
        for k in range(l, n + 1):
            if k in (l, wl) or w[k - 1] < l:
                continue
            vk = v[k - 1]
            if a_type:
                coef = omega(setup, vk, g) * laminv
            else:
                coef = phi(setup, g, vk) * laminv
            if coef:
                new[k - 1] = [a - coef * b for a, b in zip(vk, vl)]
        v = new
    if not (is_dual_basis(v, c, setup) and is_conjugate_basis(v, c, setup)):
        raise InvalidDualBasis("input basis was not dual for the given parameter")
    return [tuple(x) for x in v]


# -- the middle swap for type D3 ------------------------------------------------------

def tilde_flag(F: Flag, setup: Setup) -> Flag:
    """Swap the two middle basis vectors (n = 2m); stays isotropic for adapted bases."""
    n = F.n
    if n % 2:
        raise DimensionMismatch("the middle swap needs even n")
    m = n // 2
    b = list(F.basis)
    b[m - 1], b[m] = b[m], b[m - 1]
    G = Flag(b, n, check=False)
    if setup.type in BCD_TYPES and not is_isotropic(G, setup):
        raise NotIsotropic("basis is not adapted: the swapped flag is not isotropic")
    return G
