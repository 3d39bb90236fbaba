"""Involutions, signed involutions (clans) and the orbit parameter sets.

A clan is an involution w of {1..n} (given by its arcs) together with a
sign in {+1, -1} at each fixed point.  A plain involution carries no signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import InvalidParam, OutOfRange, UnsignedClan
from .spaces import BCD_TYPES, ETA_EPS, Setup


@dataclass(frozen=True)
class Clan:
    n: int
    w: tuple
    signs: tuple = ()  # sorted (k, +-1) pairs at fixed points

    def __post_init__(self):
        n, w = self.n, tuple(self.w)
        if len(w) != n:
            raise InvalidParam(f"involution of length {len(w)} for n = {n}")
        for k, v in enumerate(w, 1):
            if not 1 <= v <= n:
                raise OutOfRange(f"w({k}) = {v} outside 1..{n}")
            if w[v - 1] != k:
                raise InvalidParam(f"{w} is not an involution")
        signs = tuple(sorted(dict(self.signs).items()))
        for k, s in signs:
            if not 1 <= k <= n:
                raise OutOfRange(f"sign at {k} outside 1..{n}")
            if w[k - 1] != k:
                raise InvalidParam(f"sign at {k}, which is not a fixed point")
            if s not in (1, -1):
                raise InvalidParam(f"sign {s!r} at {k} is not +-1")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_arcs(cls, n: int, arcs=(), signs=None) -> "Clan":
        w = list(range(1, n + 1))
        seen = set()
        for a, b in arcs:
            for x in (a, b):
                if not 1 <= x <= n:
                    raise OutOfRange(f"arc endpoint {x} outside 1..{n}")
                if x in seen:
                    raise InvalidParam(f"point {x} lies on two arcs")
                seen.add(x)
            if a == b:
                raise InvalidParam(f"degenerate arc ({a}, {b})")
            w[a - 1], w[b - 1] = b, a
        if signs is None:
            signs = {}
        elif isinstance(signs, (list, tuple)) and signs and not isinstance(signs[0], tuple):
            fixed = [k for k in range(1, n + 1) if w[k - 1] == k]
            if len(signs) != len(fixed):
                raise InvalidParam("sign list does not match the fixed points")
            signs = dict(zip(fixed, signs))
        return cls(n, tuple(w), tuple(dict(signs).items()))

    # -- structure
    def arcs(self) -> tuple:
        return tuple((k, v) for k, v in enumerate(self.w, 1) if k < v)

    def fixed_points(self) -> tuple:
        return tuple(k for k, v in enumerate(self.w, 1) if k == v)

    def sign(self, k: int):
        return dict(self.signs).get(k)

    def sign_map(self) -> dict:
        return dict(self.signs)

    def is_signed(self) -> bool:
        return len(self.signs) == len(self.fixed_points())

    def is_fixed_point_free(self) -> bool:
        return not self.fixed_points()

    def __call__(self, k: int) -> int:
        return self.w[k - 1]

    def sort_key(self):
        return (self.arcs(), self.signs)

    def signature(self) -> tuple:
        """(p_l, q_l) for l = 1..n: signs up to l plus arcs closed by l."""
        if not self.is_signed():
            raise UnsignedClan("signature needs a sign at every fixed point")
        sm = dict(self.signs)
        out = []
        p = q = 0
        for l in range(1, self.n + 1):
            v = self.w[l - 1]
            if v == l:
                if sm[l] > 0:
                    p += 1
                else:
                    q += 1
            elif v < l:
                p += 1
                q += 1
            out.append((p, q))
        return tuple(out)

    def pq(self) -> tuple:
        return self.signature()[-1] if self.n else (0, 0)

    # -- rendering
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "arcs": [list(a) for a in self.arcs()],
            "signs": {str(k): s for k, s in self.signs},
        }

    @classmethod
    def from_json(cls, d: dict) -> "Clan":
        try:
            n = int(d["n"])
            arcs = [tuple(int(x) for x in a) for a in d.get("arcs", [])]
            signs = {int(k): int(v) for k, v in d.get("signs", {}).items()}
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidParam(f"malformed clan: {e}") from e
        for a in arcs:
            if len(a) != 2:
                raise InvalidParam(f"arc {a} needs two endpoints")
        return cls.from_arcs(n, [(min(a), max(a)) for a in arcs], signs)

    def render_ascii(self) -> str:
        """Arcs above the baseline, signs below it."""
        n = self.n
        width = len(str(n))
        step = width + 1
        col = {k: (k - 1) * step + width - 1 for k in range(1, n + 1)}
        total = n * step
        arcs = sorted(self.arcs(), key=lambda a: (a[0] - a[1], a[0]))
        rows = []
        open_cols: set = set()
        for a, b in arcs:
            line = [" "] * total
            for c in open_cols:
                line[c] = "|"
            for c in range(col[a], col[b] + 1):
                line[c] = "-"
            line[col[a]] = line[col[b]] = "+"
            rows.append("".join(line).rstrip())
            open_cols |= {col[a], col[b]}
        if arcs:
            line = [" "] * total
            for c in open_cols:
                line[c] = "|"
            rows.append("".join(line).rstrip())
        rows.append(" ".join(str(k).rjust(width) for k in range(1, n + 1)))
        sm = dict(self.signs)
        if sm:
            line = [" "] * total
            for k, s in sm.items():
                line[col[k]] = "+" if s > 0 else "-"
            rows.append("".join(line).rstrip())
        return "\n".join(rows)

    def render_dot(self) -> str:
        sm = dict(self.signs)
        lines = ["graph clan {", "  rankdir=LR;", "  node [shape=circle];"]
        for k in range(1, self.n + 1):
            label = str(k) + ("+" if sm.get(k, 0) > 0 else "-" if sm.get(k, 0) < 0 else "")
            lines.append(f'  v{k} [label="{label}"];')
        for k in range(1, self.n):
            lines.append(f"  v{k} -- v{k + 1} [style=invis];")
        for a, b in self.arcs():
            lines.append(f"  v{a} -- v{b} [constraint=false];")
        lines.append("}")
        return "\n".join(lines)

    def __str__(self):
        arcs = "".join(f"({a};{b})" for a, b in self.arcs()) or "id"
        if not self.signs:
            return arcs
        return arcs + " " + ",".join(f"{k}{'+' if s > 0 else '-'}" for k, s in self.signs)


# -- enumeration --------------------------------------------------------------

def w0(n: int) -> tuple:
    return tuple(n + 1 - k for k in range(1, n + 1))


def involutions(n: int, fixed_point_free: bool = False):
    """All involutions of {1..n} as image tuples."""
    def rec(w, free):
        if not free:
            yield tuple(w)
            return
        a = free[0]
        rest = free[1:]
        if not fixed_point_free:
            yield from rec(w, rest)
        for i, b in enumerate(rest):
            w[a - 1], w[b - 1] = b, a
            yield from rec(w, rest[:i] + rest[i + 1:])
            w[a - 1], w[b - 1] = a, b

    if fixed_point_free and n % 2:
        return
    yield from rec(list(range(1, n + 1)), list(range(1, n + 1)))


def signed_involutions(n: int, p: int, q: int):
    """Clans of {1..n} with final signature (p, q)."""
    if p + q != n or p < 0 or q < 0:
        return
    for w in involutions(n):
        fixed = [k for k in range(1, n + 1) if w[k - 1] == k]
        arcs = (n - len(fixed)) // 2
        plus = p - arcs
        if plus < 0 or q - arcs < 0:
            continue
        for pos in combinations(fixed, plus):
            ps = set(pos)
            yield Clan(n, w, tuple((k, 1 if k in ps else -1) for k in fixed))


def is_symmetric_clan(c: Clan, eta: int, eps: int) -> bool:
    """w commutes with w0, eps_{w0(k)} = eta eps_k, and no w0-arcs when eta != eps."""
    n = c.n
    w = c.w
    for k in range(1, n + 1):
        if n + 1 - w[k - 1] != w[n - k]:
            return False
    sm = dict(c.signs)
    for k, s in sm.items():
        if sm.get(n + 1 - k) != eta * s:
            return False
    if eta != eps and any(w[k - 1] == n + 1 - k and k != n + 1 - k for k in range(1, n + 1)):
        return False
    return True


def in_param_set(c: Clan, setup: Setup) -> bool:
    t = setup.type
    if c.n != setup.n:
        return False
    if t == "A1":
        return not c.signs
    if t == "A2":
        return not c.signs and c.is_fixed_point_free()
    if not c.is_signed() or c.pq() != (setup.p, setup.q):
        return False
    if t == "A3":
        return True
    eta, eps = ETA_EPS[t]
    return is_symmetric_clan(c, eta, eps)


def check_param(c: Clan, setup: Setup) -> None:
    if not in_param_set(c, setup):
        raise InvalidParam(f"{c} is not an orbit parameter for {setup.type} (n={setup.n}, "
                           f"p={setup.p}, q={setup.q})")


def enumerate_params(setup: Setup) -> list:
    t, n = setup.type, setup.n
    if t == "A1":
        out = [Clan(n, w) for w in involutions(n)]
    elif t == "A2":
        out = [Clan(n, w) for w in involutions(n, fixed_point_free=True)]
    elif t == "A3":
        out = list(signed_involutions(n, setup.p, setup.q))
    else:
        eta, eps = ETA_EPS[t]
        out = [c for c in signed_involutions(n, setup.p, setup.q) if is_symmetric_clan(c, eta, eps)]
    return sorted(out, key=Clan.sort_key)


# -- open and closed orbits ---------------------------------------------------

def _w0_partial(n: int, t: int) -> list:
    w = list(range(1, n + 1))
    for k in range(1, t + 1):
        w[k - 1], w[n - k] = n + 1 - k, k
    return w


def _v0_conj(n: int, w: list, t: int) -> list:
    """v w v with v = (1;2)(3;4)...(t-1;t)."""
    def v(k):
        if k <= t:
            return k + 1 if k % 2 else k - 1
        return k
    out = [0] * n
    for k in range(1, n + 1):
        out[v(k) - 1] = v(w[k - 1])
    return out


def _with_fixed_signs(n: int, w: list, s: int) -> Clan:
    return Clan(n, tuple(w), tuple((k, s) for k in range(1, n + 1) if w[k - 1] == k))


def open_params(setup: Setup, family: str = "K") -> list:
    """Parameters of the open orbits (one, or two for D3)."""
    if family == "G0":
        return closed_params(setup, "K")
    t, n, p, q = setup.type, setup.n, setup.p, setup.q
    sg = 1 if p >= q else -1
    tt = min(p, q)
    if t == "A1":
        out = [Clan(n, tuple(range(1, n + 1)))]
    elif t == "A2":
        out = [Clan(n, tuple(k + 1 if k % 2 else k - 1 for k in range(1, n + 1)))]
    elif t in ("A3", "BD1"):
        out = [_with_fixed_signs(n, _w0_partial(n, tt), sg)]
    elif t == "C1":
        out = [Clan(n, w0(n))]
    elif t == "C2":
        w = _v0_conj(n, _w0_partial(n, tt), tt)
        out = [_with_fixed_signs(n, w, sg)]
    elif t == "D3":
        m = n // 2
        # w0 v0 with v0 = (1;2)(3;4)...(n-1;n)
        w = [0] * n
        for k in range(1, n + 1):
            v = k + 1 if k % 2 else k - 1
            w[k - 1] = n + 1 - v
        if m % 2 == 0:
            first = Clan(n, tuple(w))
            out = [first, tilde_param(first)]
        else:
            out = [Clan(n, tuple(w), ((m, 1), (m + 1, -1))), Clan(n, tuple(w), ((m, -1), (m + 1, 1)))]
    else:  # pragma: no cover
        raise InvalidParam(t)
    return sorted(out, key=Clan.sort_key)


def tilde_param(c: Clan) -> Clan:
    """Conjugate by the middle transposition (m; m+1), n = 2m."""
    n = c.n
    m = n // 2

    def s(k):
        return m + 1 if k == m else m if k == m + 1 else k

    w = [0] * n
    for k in range(1, n + 1):
        w[s(k) - 1] = s(c.w[k - 1])
    return Clan(n, tuple(w), tuple((s(k), v) for k, v in c.signs))


def closed_params(setup: Setup, family: str = "K") -> list:
    if family == "G0":
        return open_params(setup, "K")
    t, n = setup.type, setup.n
    if t in ("A1", "A2"):
        return [Clan(n, w0(n))]
    if t == "A3":
        return sorted(signed_involutions_id(n, setup.p), key=Clan.sort_key)
    m = n // 2
    if t == "BD1" and n % 2 == 0 and setup.p % 2 == 1:
        base = list(range(1, n + 1))
        base[m - 1], base[m] = m + 1, m
    else:
        base = list(range(1, n + 1))
    return [c for c in enumerate_params(setup) if list(c.w) == base]


def signed_involutions_id(n: int, p: int):
    for pos in combinations(range(1, n + 1), p):
        ps = set(pos)
        yield Clan(n, tuple(range(1, n + 1)), tuple((k, 1 if k in ps else -1) for k in range(1, n + 1)))


def is_open_param(c: Clan, setup: Setup, family: str = "K") -> bool:
    check_param(c, setup)
    return c in open_params(setup, family)


def is_closed_param(c: Clan, setup: Setup, family: str = "K") -> bool:
    check_param(c, setup)
    return c in closed_params(setup, family)


def count_params(setup: Setup) -> int:
    return len(enumerate_params(setup))


def count_closed(setup: Setup) -> int:
    """Closed K-orbits (closed-form count)."""
    t, n, p, q = setup.type, setup.n, setup.p, setup.q
    if t in ("A1", "A2"):
        return 1
    if t == "A3":
        return comb(n, p)
    if t in ("BD1", "C2"):
        return comb(p // 2 + q // 2, p // 2)
    return 2 ** (n // 2)


def count_open(setup: Setup) -> int:
    return 2 if setup.type == "D3" else 1


def matsuki_dual(c: Clan, family: str) -> tuple:
    """The same clan, read as a parameter for the other family."""
    if family not in ("K", "G0"):
        raise InvalidParam(f"unknown family {family!r}")
    return c, ("G0" if family == "K" else "K")


def involution_count(n: int) -> int:
    """T(n) = T(n-1) + (n-1) T(n-2)."""
    a, b = 1, 1
    for k in range(2, n + 1):
        a, b = b, b + (k - 1) * a
    return b if n else 1


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


__all__ = [
    "Clan", "w0", "involutions", "signed_involutions", "is_symmetric_clan", "in_param_set",
    "check_param", "enumerate_params", "open_params", "closed_params", "is_open_param",
    "is_closed_param", "count_params", "count_closed", "count_open", "matsuki_dual",
    "tilde_param", "involution_count", "double_factorial", "BCD_TYPES",
]
