"""Inductive limits: orbit parameters and flags for the union of the windows
C^{n_1} < C^{n_2} < ..., with the generalised flag F_sigma of a total order
given by keys sigma(l).

Finite parameters live in flag-position space (position k = k-th basis vector
of the flag); infinite parameters live in index space (index l = basis vector
e_l), related by the sorting permutation tau of the keys.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .clans import Clan, closed_params, open_params
from .classify import classify
from .errors import (
    HorizonExceeded,
    InvalidParam,
    InvalidSetup,
    UnalignedWindow,
    Undecidable,
)
from .exactfield import ZERO
from .flaglin import Flag
from .spaces import ALL_B2, BCD_TYPES, TYPES, Setup

HORIZON = 64
FAMILIES = ("NAT", "TWOSIDED", "DENSE", "ISO_TWOSIDED")
TAIL_IOTA = "TAIL_IOTA"
TAIL_ID_SIGNS = "TAIL_ID_SIGNS"


def calkin_wilf(k: int) -> Fraction:
    """k-th term (k >= 1) of 1, 1/2, 2, 1/3, 3/2, ..."""
    q = Fraction(1)
    for _ in range(k - 1):
        q = 1 / (2 * floor(q) - q + 1)
    return q


@dataclass(frozen=True)
class OrderSpec:
    family: str
    prefix_perm: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSetup(f"unknown order family {self.family!r}")
        pp = tuple(int(x) for x in self.prefix_perm)
        if sorted(pp) != list(range(1, len(pp) + 1)):
            raise InvalidSetup(f"prefix_perm {pp} is not a permutation of 1..{len(pp)}")
        object.__setattr__(self, "prefix_perm", pp)

    def _pi(self, l: int) -> int:
        return self.prefix_perm[l - 1] if l <= len(self.prefix_perm) else l

    def key(self, l: int, iota=None) -> Fraction:
        """sigma(l); ISO_TWOSIDED needs the pairing iota."""
        m = self._pi(l)
        f = self.family
        if f == "NAT":
            return Fraction(m)
        if f == "TWOSIDED":
            return Fraction((-1) ** m, m)
        if f == "DENSE":
            if m == 1:
                return Fraction(0)
            j = m // 2
            q = calkin_wilf(j)
            return q if m % 2 == 0 else -q
        if iota is None:
            raise InvalidSetup("ISO_TWOSIDED keys need the block structure")
        partner = iota(m)
        if partner == m:
            return Fraction(0)
        # number the 2-blocks in order of their first index
        k = _block_number(m, iota)
        return Fraction(-1, k) if m < partner else Fraction(1, k)

    def to_json(self) -> dict:
        d = {"family": self.family}
        if self.prefix_perm:
            d["prefix_perm"] = list(self.prefix_perm)
        return d


def _block_number(m: int, iota) -> int:
    first = min(m, iota(m))
    k = 0
    l = 1
    while l <= first:
        j = iota(l)
        if j > l:
            k += 1
            l = j + 1
        else:
            l += 1
    return k


_TAIL = re.compile(r"^\(?((?:B[12])+)\)?\*$")


def _parse_tail_blocks(text: str) -> tuple:
    m = _TAIL.match(text.replace(" ", ""))
    if not m:
        raise InvalidSetup(f"block tail must look like 'B1*' or '(B1B2)*', got {text!r}")
    return tuple(re.findall(r"B[12]", m.group(1)))


def _parse_tail_signs(text: str) -> str:
    m = re.match(r"^\(?([+-]+)\)?\*$", text.replace(" ", ""))
    if not m:
        raise InvalidSetup(f"sign tail must look like '+*' or '(+-)*', got {text!r}")
    return m.group(1)


@dataclass(frozen=True)
class IndSetup:
    """Eventually periodic description of an infinite setup."""

    type: str
    omega_prefix: tuple = ()
    omega_tail: tuple = ()
    signs_prefix: str = ""
    signs_tail: str = ""
    order: OrderSpec = OrderSpec("NAT")

    def __post_init__(self):
        t = self.type
        if t not in TYPES:
            raise InvalidSetup(f"unknown type {t!r}")
        pre = tuple(self.omega_prefix)
        tail = tuple(self.omega_tail)
        if t == "A3":
            pre, tail = ("B1",) * len(self.signs_prefix), ("B1",)
        elif not tail:
            tail = ("B2",) if t in ALL_B2 else ("B1",)
        if any(b not in ("B1", "B2") for b in pre + tail):
            raise InvalidSetup("blocks must be B1 or B2")
        if t in ALL_B2 and "B1" in pre + tail:
            raise InvalidSetup(f"type {t} needs all blocks of size 2")
        object.__setattr__(self, "omega_prefix", pre)
        object.__setattr__(self, "omega_tail", tail)
        if t in ("A1", "A2"):
            if self.signs_prefix or self.signs_tail:
                raise InvalidSetup(f"type {t} takes no signs")
        else:
            if not self.signs_tail:
                raise InvalidSetup(f"type {t} needs a sign tail")
            if t == "A3" and (len(self.signs_tail) != 1 and self.order.family == "ISO_TWOSIDED"):
                pass
        if self.order.family == "ISO_TWOSIDED":
            if "B1" in tail and t != "A3":
                raise InvalidSetup("an isotropic order allows only finitely many 1-blocks")
            if t != "A3" and pre.count("B1") > 1:
                raise InvalidSetup("an isotropic order allows at most one 1-block")
            if t == "A3":
                raise InvalidSetup("ISO_TWOSIDED needs a form omega")
        # validate a few windows through the finite setups
        for n in self.windows(upto=4 * (self.prefix_length() + 2 * len(self.omega_tail) + 2)):
            self.window(n)
        if self.order.prefix_perm:
            pp = self.order.prefix_perm
            if len(pp) not in self.windows(upto=len(pp)) and len(pp):
                raise InvalidSetup("prefix_perm must cover a block-aligned window")
            if self.order.family == "ISO_TWOSIDED":
                for l in range(1, len(pp) + 1):
                    if pp[self.iota(l) - 1] != self.iota(pp[l - 1]):
                        raise InvalidSetup("prefix_perm must commute with iota for ISO_TWOSIDED")
        if t not in ("A1", "A2"):
            plus = "+" in self.signs_prefix or "+" in self.signs_tail
            minus = "-" in self.signs_prefix or "-" in self.signs_tail
            if not (plus and minus):
                raise InvalidSetup("the decomposition into N+ and N- must be proper")

    # -- blocks and signs
    def prefix_length(self) -> int:
        return sum(1 if b == "B1" else 2 for b in self.omega_prefix)

    def block_at(self, k: int) -> str:
        """k-th block (1-based)."""
        if k <= len(self.omega_prefix):
            return self.omega_prefix[k - 1]
        return self.omega_tail[(k - len(self.omega_prefix) - 1) % len(self.omega_tail)]

    def blocks_upto(self, n: int) -> tuple:
        out, size, k = [], 0, 1
        while size < n:
            b = self.block_at(k)
            out.append(b)
            size += 1 if b == "B1" else 2
            k += 1
        if size != n:
            raise UnalignedWindow(f"window {n} splits a 2-block")
        return tuple(out)

    def windows(self, upto: int) -> list:
        out, size, k = [], 0, 1
        while True:
            b = self.block_at(k)
            size += 1 if b == "B1" else 2
            if size > upto:
                return out
            out.append(size)
            k += 1

    def next_window(self, n: int) -> int:
        self.blocks_upto(n)
        b = self.block_at(len(self.blocks_upto(n)) + 1)
        return n + (1 if b == "B1" else 2)

    def iota(self, l: int) -> int:
        size, k = 0, 1
        while True:
            b = self.block_at(k)
            if b == "B1":
                if size + 1 == l:
                    return l
                size += 1
            else:
                if size + 1 == l:
                    return l + 1
                if size + 2 == l:
                    return l - 1
                size += 2
            k += 1

    def sign(self, l: int) -> int:
        if not self.signs_tail:
            raise InvalidSetup(f"type {self.type} has no signs")
        if l <= len(self.signs_prefix):
            c = self.signs_prefix[l - 1]
        else:
            c = self.signs_tail[(l - len(self.signs_prefix) - 1) % len(self.signs_tail)]
        return 1 if c == "+" else -1

    def window(self, n: int) -> Setup:
        blocks = self.blocks_upto(n)
        if self.type == "A3":
            return Setup("A3", n, (), "".join("+" if self.sign(l) > 0 else "-" for l in range(1, n + 1)))
        signs = ""
        if self.type not in ("A1", "A2"):
            signs = "".join("+" if self.sign(l) > 0 else "-" for l in range(1, n + 1))
        return Setup(self.type, n, blocks, signs)

    def key(self, l: int) -> Fraction:
        return self.order.key(l, self.iota)

    def d(self):
        """min(|N+|, |N-|), or None when both are infinite."""
        tail = set(self.signs_tail)
        if len(tail) == 2:
            return None
        minority = "-" if tail == {"+"} else "+"
        return self.signs_prefix.count(minority)

    def tail_all_b1(self) -> bool:
        return set(self.omega_tail) == {"B1"}

    def to_json(self) -> dict:
        d = {"type": self.type, "order": self.order.to_json()}
        if self.type != "A3":
            d["omega_prefix"] = list(self.omega_prefix)
            d["omega_tail"] = "(" + "".join(self.omega_tail) + ")*"
        if self.signs_tail:
            d["signs_prefix"] = self.signs_prefix
            d["signs_tail"] = "(" + self.signs_tail + ")*"
        return d

    @classmethod
    def from_json(cls, d: dict) -> "IndSetup":
        try:
            order = d.get("order", {"family": "NAT"})
            spec = OrderSpec(order["family"], tuple(order.get("prefix_perm", ())))
            tail = d.get("omega_tail")
            stail = d.get("signs_tail")
            return cls(
                d["type"],
                tuple(d.get("omega_prefix", ())),
                _parse_tail_blocks(tail) if tail else (),
                d.get("signs_prefix", ""),
                _parse_tail_signs(stail) if stail else "",
                spec,
            )
        except (KeyError, TypeError) as e:
            raise InvalidSetup(f"malformed infinite setup: {e}") from e


def tau_perm(si_or_spec, n: int, iota=None) -> tuple:
    """Indices 1..n sorted by key: tau_k is the index with the k-th smallest key."""
    if n > HORIZON:
        raise HorizonExceeded(f"window {n} beyond horizon {HORIZON}")
    if isinstance(si_or_spec, IndSetup):
        key = si_or_spec.key
    else:
        key = lambda l: si_or_spec.key(l, iota)  # noqa: E731
    return tuple(sorted(range(1, n + 1), key=key))


# -- infinite parameters ----------------------------------------------------------

@dataclass(frozen=True)
class IndParam:
    """Finite core on indices 1..m plus the tail rule beyond m."""

    setup: IndSetup
    m: int
    w: tuple
    signs: tuple = ()
    tail: str = TAIL_IOTA

    def image(self, l: int) -> int:
        if l <= self.m:
            return self.w[l - 1]
        return self.setup.iota(l) if self.tail == TAIL_IOTA else l

    def sign(self, l: int):
        if l <= self.m:
            return dict(self.signs).get(l)
        if self.tail == TAIL_ID_SIGNS:
            return self.setup.sign(l)
        return None

    def widen(self, m2: int) -> "IndParam":
        if m2 < self.m:
            raise UnalignedWindow("widen needs a larger window")
        self.setup.blocks_upto(m2)
        w = tuple(self.image(l) for l in range(1, m2 + 1))
        signs = tuple((l, self.sign(l)) for l in range(1, m2 + 1)
                      if w[l - 1] == l and self.sign(l) is not None)
        return IndParam(self.setup, m2, w, signs, self.tail)

    def canonical(self) -> "IndParam":
        """Smallest aligned window beyond which the tail rule holds."""
        si = self.setup
        wins = [0] + si.windows(self.m)
        sm = dict(self.signs)

        def follows(l):
            if self.tail == TAIL_IOTA:
                return self.w[l - 1] == si.iota(l)
            return self.w[l - 1] == l and sm.get(l) == si.sign(l)

        k = len(wins) - 1
        while k > 0 and all(follows(l) for l in range(wins[k - 1] + 1, wins[k] + 1)):
            k -= 1
        m = wins[k]
        return IndParam(si, m, self.w[:m], tuple((l, s) for l, s in self.signs if l <= m), self.tail)

    def __eq__(self, other):
        if not isinstance(other, IndParam):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.setup, a.m, a.w, a.signs, a.tail) == (b.setup, b.m, b.w, b.signs, b.tail)

    def __hash__(self):
        a = self.canonical()
        return hash((a.setup, a.m, a.w, a.signs, a.tail))

    def to_json(self) -> dict:
        a = self.canonical()
        return {
            "window": a.m,
            "arcs": [[l, v] for l, v in enumerate(a.w, 1) if l < v],
            "signs": {str(l): s for l, s in a.signs},
            "tail": a.tail,
        }


def _tail_kind(t: str) -> str:
    return TAIL_IOTA if t in ("A1", "A2") else TAIL_ID_SIGNS


def embed_param(c: Clan, n: int, si: IndSetup) -> IndParam:
    """The infinite parameter whose orbit meets the window n in the orbit of c."""
    si.blocks_upto(n)
    if c.n != n:
        raise InvalidParam(f"clan on {c.n} points for window {n}")
    tau = tau_perm(si, n)
    pos = {idx: k for k, idx in enumerate(tau, 1)}  # tau^-1
    w = tuple(tau[c.w[pos[l] - 1] - 1] for l in range(1, n + 1))
    sm = c.sign_map()
    signs = tuple((l, sm[pos[l]]) for l in range(1, n + 1) if pos[l] in sm)
    return IndParam(si, n, w, signs, _tail_kind(si.type))


def embed_flag(F: Flag, n: int, si: IndSetup, target: int) -> Flag:
    """Image of F under the embeddings X_n -> X_target determined by the order."""
    si.blocks_upto(n)
    si.blocks_upto(target)
    if F.n != n:
        raise InvalidParam(f"flag in C^{F.n} for window {n}")
    if target < n:
        raise UnalignedWindow("target window must not be smaller")
    tau = tau_perm(si, n)
    v = {}
    for k, idx in enumerate(tau):
        v[idx] = tuple(F.basis[k]) + (ZERO,) * (target - n)
    for l in range(n + 1, target + 1):
        e = [ZERO] * target
        e[l - 1] = 1
        v[l] = tuple(e)
    tau2 = tau_perm(si, target)
    return Flag([v[idx] for idx in tau2], target, check=False)


def ind_classify(F: Flag, n: int, si: IndSetup, family: str) -> IndParam:
    """Classify a flag of the window n and read the result as an infinite parameter."""
    c = classify(F, si.window(n), family)
    return embed_param(c, n, si).canonical()


# -- open and closed orbits -----------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    value: object  # True, False or "infinitely_many"
    clause: str
    reason: str

    def to_json(self) -> dict:
        return {"value": self.value, "clause": self.clause, "reason": self.reason}


def _open_k(si: IndSetup) -> Verdict:
    t, fam = si.type, si.order.family
    if t == "A1":
        ok = si.tail_all_b1()
        return Verdict(ok, "a1", "iota is eventually the identity" if ok
                       else "infinitely many 2-blocks")
    if t == "A2":
        if fam == "NAT":
            return Verdict(True, "a2", "sigma(2l-1), sigma(2l) are consecutive with an even "
                                       "number of smaller earlier keys")
        return Verdict(False, "a2", f"{fam}: keys of a 2-block are never consecutive")
    d = si.d()
    if t == "A3":
        if d is None:
            return Verdict(False, "a3", "both N+ and N- are infinite")
        if fam in ("TWOSIDED", "ISO_TWOSIDED"):
            return Verdict(True, "a3", f"d = {d} and both ends of the order are discrete")
        if fam == "NAT":
            return Verdict(False, "a3", "no subspace of finite codimension d in the flag")
        return Verdict(False, "a3", "a dense order has no finite-dimensional member")
    if t in ("C1", "D3"):
        return Verdict(False, "bcd", f"type {t} has no open K-orbit")
    if fam != "ISO_TWOSIDED":
        raise Undecidable(f"clause bcd: order {fam} is not isotropic")
    if d is None:
        return Verdict(False, "bcd", "both N+ and N- are infinite")
    return Verdict(True, "bcd", f"d = {d} and the flag has a member of every finite dimension")


def _closed_k(si: IndSetup) -> Verdict:
    t, fam = si.type, si.order.family
    if t == "A3":
        return Verdict("infinitely_many", "a3", "infinitely many closed K-orbits")
    if t in BCD_TYPES:
        if fam != "ISO_TWOSIDED":
            raise Undecidable(f"clause bcd: order {fam} is not isotropic")
        return Verdict("infinitely_many", "bcd", "infinitely many closed K-orbits")
    clause = "a'12"
    if fam == "ISO_TWOSIDED":
        return Verdict(True, clause, "negation is an involutive antiautomorphism matching iota")
    if fam == "NAT":
        return Verdict(False, clause, "the order has a least but no greatest element")
    if "B1" in si.omega_tail:
        return Verdict(False, clause, "iota has infinitely many fixed points")
    # tail of 2-blocks; pairs (l, l+1) start at odd l iff the prefix length is even
    period = sum(1 if b == "B1" else 2 for b in si.omega_tail)
    odd_start = si.prefix_length() % 2 == 0
    assert period % 2 == 0
    if fam == "TWOSIDED":
        if odd_start:
            return Verdict(True, clause, "the unique antiautomorphism swaps sigma(2l-1), sigma(2l)")
        return Verdict(False, clause, "the unique antiautomorphism does not match iota")
    # DENSE: index 2j has key q_j and index 2j+1 has key -q_j
    if not odd_start:
        return Verdict(True, clause, "negation matches iota on the tail")
    return Verdict(False, clause, "matching iota forces the Calkin-Wilf successor map to be "
                                  "increasing, which fails across every integer")


def has_open_orbit(si: IndSetup, family: str = "K") -> Verdict:
    if family == "K":
        return _open_k(si)
    if family != "G0":
        raise InvalidParam(f"unknown family {family!r}")
    v = _closed_k(si)
    return Verdict(bool(v.value), v.clause, "dual to closed K-orbits: " + v.reason)


def has_closed_orbit(si: IndSetup, family: str = "K") -> Verdict:
    if family == "K":
        return _closed_k(si)
    if family != "G0":
        raise InvalidParam(f"unknown family {family!r}")
    v = _open_k(si)
    return Verdict(v.value, v.clause, "dual to open K-orbits: " + v.reason)


def window_open_params(si: IndSetup, n: int) -> list:
    """Open K-orbit parameters of window n, read in index space."""
    return [embed_param(c, n, si).canonical() for c in open_params(si.window(n), "K")]


def window_closed_params(si: IndSetup, n: int) -> list:
    return [embed_param(c, n, si).canonical() for c in closed_params(si.window(n), "K")]
