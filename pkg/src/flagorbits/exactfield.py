"""Exact arithmetic in towers Q(i)(sqrt a_1)...(sqrt a_r).

Every radicand a_k is a positive real element of the tower built so far, and
each adjunction is proper (the radicand is not already a square), so the
monomials ``i^e * r_1^b_1 * ... * r_r^b_r`` form a Q-basis.  A scalar is a
sparse map from monomials to rationals; the monomial is a bitmask where bit 0
is ``i`` and bit k is ``r_k``.  Zero testing is therefore structural.

Towers are interned and only ever extended, so a scalar living in a prefix of
another tower is usable there unchanged.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

from gmpy2 import is_square, isqrt, mpq

from .errors import DivisionByZero, NotPositive, NotReal, ParseError, TowerMismatch

I_BIT = 1

_ONE = mpq(1)


class TowerField:
    """A tower Q(i)(r_1, ..., r_depth) with r_k = +sqrt(radicands[k-1])."""

    _interned: dict = {}

    def __new__(cls, radicands=()):
        radicands = tuple(radicands)
        key = tuple(a.key() for a in radicands)
        hit = cls._interned.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self.radicands = radicands
        self.depth = len(radicands)
        self._key = key
        self._mul_cache = {}
        self._ancestors = None
        cls._interned[key] = self
        return self

    @classmethod
    def base(cls) -> "TowerField":
        return cls(())

    def prefix(self, k: int) -> "TowerField":
        if self._ancestors is None:
            self._ancestors = [TowerField(self.radicands[:j]) for j in range(self.depth)] + [self]
        return self._ancestors[k]

    def contains(self, other: "TowerField") -> bool:
        return other.depth <= self.depth and self.prefix(other.depth) is other

    def extend(self, a: "Scalar") -> "TowerField":
        return TowerField(self.radicands + (a,))

    def degree(self) -> int:
        """Degree over Q."""
        return 2 ** (self.depth + 1)

    def radical(self, k: int) -> "Scalar":
        """r_k as a scalar (1-based)."""
        if not 1 <= k <= self.depth:
            raise IndexError(k)
        return Scalar._make({1 << k: _ONE}, self.prefix(k))

    def i(self) -> "Scalar":
        return I

    # monomial products, cached per tower
    def mono_mul(self, m1: int, m2: int) -> dict:
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        shared = m1 & m2
        if not shared:
            res = {m1 | m2: _ONE}
        else:
            b = shared.bit_length() - 1
            bit = 1 << b
            rest = self.mono_mul(m1 & ~bit, m2 & ~bit)
            if b == 0:
                res = {m: -c for m, c in rest.items()}
            else:
                res = _mul_coords(rest, self.radicands[b - 1]._c, self)
        self._mul_cache[key] = res
        return res

    def __repr__(self):
        return "TowerField(" + ", ".join(str(a) for a in self.radicands) + ")"


def _mul_coords(x: dict, y: dict, tower: TowerField) -> dict:
    out: dict = {}
    mm = tower.mono_mul
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            c = c1 * c2
            for m, k in mm(m1, m2).items():
                v = out.get(m)
                v = c * k if v is None else v + c * k
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def _top(coords) -> int:
    """Index of the highest radical used (0 if none)."""
    return max((m.bit_length() - 1 for m in coords if m > 1), default=0)


def _to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _coerce(x) -> "Scalar":
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq":
        q = _to_mpq(x)
        return Scalar._make({0: q} if q else {}, _BASE)
    if isinstance(x, complex):
        raise TypeError("floating point values are not exact scalars")
    return NotImplemented


@total_ordering
class Scalar:
    """Immutable exact element of a tower field.

    Only real scalars are ordered; ``<`` on a non-real value raises NotReal.
    """

    __slots__ = ("_c", "tower", "_hash")

    def __init__(self, value=0):
        s = _coerce(value)
        if s is NotImplemented:
            raise TypeError(f"cannot make a scalar from {value!r}")
        self._c = s._c
        self.tower = s.tower
        self._hash = None

    @classmethod
    def _make(cls, coords: dict, tower: TowerField) -> "Scalar":
        self = object.__new__(cls)
        self._c = coords
        top = _top(coords)
        self.tower = tower.prefix(top) if top < tower.depth else tower
        self._hash = None
        return self

    @classmethod
    def rational(cls, num, den=1) -> "Scalar":
        return cls(Fraction(num, den))

    def coords(self) -> dict:
        """Copy of the monomial -> rational map (values as Fractions)."""
        return {m: Fraction(int(c.numerator), int(c.denominator)) for m, c in self._c.items()}

    def key(self):
        return tuple(sorted(self._c.items()))

    # -- structure
    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def is_rational(self) -> bool:
        return all(m == 0 for m in self._c)

    def is_real(self) -> bool:
        return all(not (m & I_BIT) for m in self._c)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NotReal(f"{self} is not rational")
        c = self._c.get(0, mpq(0))
        return Fraction(int(c.numerator), int(c.denominator))

    def real(self) -> "Scalar":
        return Scalar._make({m: c for m, c in self._c.items() if not m & I_BIT}, self.tower)

    def imag(self) -> "Scalar":
        return Scalar._make({m ^ I_BIT: c for m, c in self._c.items() if m & I_BIT}, self.tower)

    def conjugate(self) -> "Scalar":
        return Scalar._make({m: (-c if m & I_BIT else c) for m, c in self._c.items()}, self.tower)

    def abs2(self) -> "Scalar":
        return self * self.conjugate()

    # -- arithmetic
    def _join(self, other: "Scalar") -> TowerField:
        a, b = self.tower, other.tower
        if a is b or b.depth == 0:
            return a
        if a.depth == 0:
            return b
        if a.contains(b):
            return a
        if b.contains(a):
            return b
        raise TowerMismatch(f"{a} and {b} are not nested")

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        t = self._join(other)
        out = dict(self._c)
        for m, c in other._c.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                del out[m]
        return Scalar._make(out, t)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make({m: -c for m, c in self._c.items()}, self.tower)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return ZERO
        t = self._join(other)
        if len(other._c) == 1 and 0 in other._c:
            k = other._c[0]
            return Scalar._make({m: c * k for m, c in self._c.items()}, t)
        if len(self._c) == 1 and 0 in self._c:
            k = self._c[0]
            return Scalar._make({m: c * k for m, c in other._c.items()}, t)
        return Scalar._make(_mul_coords(self._c, other._c, t), t)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._c:
            raise DivisionByZero("inverse of zero")
        if len(self._c) == 1 and 0 in self._c:
            return Scalar._make({0: 1 / self._c[0]}, _BASE)
        # peel radicals from the top: x * sigma_k(x) has no r_k
        x = self
        acc = ONE
        while True:
            top = _top(x._c)
            if top == 0:
                break
            bit = 1 << top
            conj = Scalar._make({m: (-c if m & bit else c) for m, c in x._c.items()}, x.tower)
            acc = acc * conj
            x = x * conj
        # x in Q(i)
        a = x._c.get(0, mpq(0))
        b = x._c.get(I_BIT, mpq(0))
        n = a * a + b * b
        xinv = Scalar._make({m: c for m, c in ((0, a / n), (I_BIT, -b / n)) if c}, _BASE)
        return acc * xinv

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._c != other._c:
            return False
        if self._c:
            self._join(other)
        return True

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return sign_of_real(self - other) < 0

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        return to_text(self)


_BASE = TowerField.base()
ZERO = Scalar._make({}, _BASE)
ONE = Scalar._make({0: _ONE}, _BASE)
I = Scalar._make({I_BIT: _ONE}, _BASE)


def scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


def _split(x: Scalar, k: int):
    """x = x0 + x1 * r_k with x0, x1 free of r_k (k >= 1)."""
    bit = 1 << k
    lo, hi = {}, {}
    for m, c in x._c.items():
        if m & bit:
            hi[m ^ bit] = c
        else:
            lo[m] = c
    return Scalar._make(lo, x.tower), Scalar._make(hi, x.tower)


def sign_of_real(x: Scalar) -> int:
    """Exact sign of a real tower element.

    Recurses on the top radical: for x0 + x1*sqrt(a) with signs of opposite
    parity the answer is sign(x0) * sign(x0^2 - x1^2 a).
    """
    if not x.is_real():
        raise NotReal(f"{x} is not real")
    return _sign(x)


def _sign(x: Scalar) -> int:
    if not x._c:
        return 0
    top = _top(x._c)
    if top == 0:
        c = x._c[0]
        return 1 if c > 0 else -1
    x0, x1 = _split(x, top)
    s0, s1 = _sign(x0), _sign(x1)
    if s0 == 0:
        return s1
    if s1 == 0 or s0 == s1:
        return s0
    a = x.tower.radicands[top - 1]
    return s0 * _sign(x0 * x0 - x1 * x1 * a)


def _rational_sqrt(q: mpq):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if is_square(n) and is_square(d):
        return mpq(isqrt(n), isqrt(d))
    return None


def _sqrt_in(a: Scalar, tower: TowerField, k: int):
    """A square root of the real element a inside the real part of tower.prefix(k), or None."""
    if not a._c:
        return ZERO
    if k == 0:
        if not a.is_rational():
            return None
        r = _rational_sqrt(a._c[0])
        return None if r is None else Scalar._make({0: r}, _BASE)
    x, y = _split(a, k)
    rk = tower.radical(k)
    ak = tower.radicands[k - 1]
    if not y._c:
        s = _sqrt_in(x, tower, k - 1)
        if s is not None:
            return s
        t = _sqrt_in(x / ak, tower, k - 1)
        return None if t is None else t * rk
    norm = x * x - y * y * ak
    sn = _sqrt_in(norm, tower, k - 1)
    if sn is None:
        return None
    for s in (sn, -sn):
        u = _sqrt_in((x + s) / 2, tower, k - 1)
        if u is not None and u._c:
            return u + (y / (2 * u)) * rk
    return None


def _squarefree_split(q: mpq):
    """q = s^2 * c with c a square-free integer, for modest sizes; else c = num*den."""
    n, d = int(q.numerator), int(q.denominator)
    m = n * d
    s, c = 1, 1
    p = 2
    while p * p <= m and p < 10_000:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            c *= p
        p += 1
    c *= m
    return mpq(s, d), c


def adjoin_sqrt(tower: TowerField, a) -> tuple[TowerField, Scalar]:
    """Return (tower', s) with s = +sqrt(a) in tower' and tower' extending tower.

    A new radical is adjoined only if a is not already a square.
    """
    a = scalar(a)
    if not tower.contains(a.tower) and a.tower.depth:
        raise TowerMismatch(f"{a} does not live in {tower}")
    if not a.is_real():
        raise NotReal(f"sqrt of non-real {a}")
    sg = _sign(a)
    if sg <= 0:
        raise NotPositive(f"sqrt of non-positive {a}")
    s = _sqrt_in(a, tower, tower.depth)
    if s is not None:
        return tower, (s if _sign(s) > 0 else -s)
    if a.is_rational():
        mult, c = _squarefree_split(a._c[0])
        cs = Scalar(c)
        s = _sqrt_in(cs, tower, tower.depth)
        if s is not None:  # pragma: no cover - c is not a square when a is not
            return tower, Scalar._make({0: mult}, _BASE) * (s if _sign(s) > 0 else -s)
        t = tower.extend(cs)
        return t, Scalar._make({0: mult}, _BASE) * t.radical(t.depth)
    t = tower.extend(a)
    return t, t.radical(t.depth)


def sqrt(a, tower: TowerField | None = None) -> tuple[TowerField, Scalar]:
    a = scalar(a)
    return adjoin_sqrt(tower if tower is not None else a.tower, a)


# -- text form ---------------------------------------------------------------

def _mono_text(m: int) -> list[str]:
    parts = []
    if m & I_BIT:
        parts.append("i")
    k = 1
    m >>= 1
    while m:
        if m & 1:
            parts.append(f"r{k}")
        m >>= 1
        k += 1
    return parts


def _rat_text(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _mono_order(m: int):
    return (bin(m >> 1).count("1"), m >> 1, m & I_BIT)


def to_text(x: Scalar) -> str:
    """Canonical rendering, e.g. ``1/2 + 1/2*i*r1``."""
    if not x._c:
        return "0"
    out = []
    for idx, m in enumerate(sorted(x._c, key=_mono_order)):
        c = x._c[m]
        neg = c < 0
        a = -c if neg else c
        parts = _mono_text(m)
        if a != 1 or not parts:
            parts = [_rat_text(a)] + parts
        body = "*".join(parts)
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^(?:(\d+)(?:/(\d+))?|i|r(\d+))$")


def parse(text: str, tower: TowerField | None = None) -> Scalar:
    """Parse the grammar produced by ``to_text``; r<k> refers to tower's radicals."""
    tower = tower or _BASE
    s = text.strip()
    if not s:
        raise ParseError("empty scalar")
    pos = 0
    total = ZERO
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad scalar {text!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r}")
        term = ONE
        for f in body.split("*"):
            f = f.strip()
            fm = _FACTOR.match(f)
            if not fm:
                raise ParseError(f"bad factor {f!r} in {text!r}")
            if fm.group(1) is not None:
                den = int(fm.group(2)) if fm.group(2) else 1
                if den == 0:
                    raise ParseError(f"zero denominator in {text!r}")
                term = term * Scalar(Fraction(int(fm.group(1)), den))
            elif f == "i":
                term = term * I
            else:
                k = int(fm.group(3))
                if not 1 <= k <= tower.depth:
                    raise ParseError(f"r{k} is not a radical of {tower}")
                term = term * tower.radical(k)
        total = total + (-term if sign == "-" else term)
        first = False
        pos = m.end()
    return total


def tower_from_radicands(texts) -> TowerField:
    """Rebuild a tower from radicand strings, each parsed in the tower before it."""
    t = _BASE
    for txt in texts:
        a = parse(txt, t)
        if not a.is_real() or _sign(a) <= 0:
            raise NotPositive(f"radicand {txt!r} must be a positive real")
        t = t.extend(a)
    return t


def radicand_texts(tower: TowerField) -> list[str]:
    return [to_text(a) for a in tower.radicands]


def join_towers(*towers: TowerField) -> TowerField:
    best = _BASE
    for t in towers:
        if t.contains(best):
            best = t
        elif not best.contains(t):
            raise TowerMismatch(f"{best} and {t} are not nested")
    return best


def to_complex(x: Scalar) -> complex:
    """Floating-point approximation (display and test oracles only)."""
    import math

    vals = [1.0]
    for a in x.tower.radicands:
        vals.append(math.sqrt(to_complex(a).real))
    out = 0j
    for m, c in x._c.items():
        v = float(c)
        if m & I_BIT:
            v = v * 1j
        k = 1
        mm = m >> 1
        while mm:
            if mm & 1:
                v *= vals[k]
            mm >>= 1
            k += 1
        out += v
    return out
