"""Command-line front end: ``flagorbits <verb> [options]``.

Exit codes: 0 success, 2 domain error, 1 parse or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import clans, classify as cl, indlimits as ind
from .errors import DomainError, ParseError
from .exactfield import join_towers, parse, radicand_texts, to_text, tower_from_radicands
from .flaglin import Flag, relative_position
from .spaces import BCD_TYPES, TYPES, Setup, default_setup


class SchemaError(ParseError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- payload conversions ---------------------------------------------------------------

def flag_to_json(F: Flag) -> dict:
    tower = join_towers(*(x.tower for v in F.basis for x in v))
    d = {"n": F.n, "basis": [[to_text(x) for x in v] for v in F.basis]}
    if tower.depth:
        d["radicands"] = radicand_texts(tower)
    return d


def flag_from_json(d, path: str = "$") -> Flag:
    if not isinstance(d, dict):
        raise SchemaError(f"{path}: expected an object")
    if "basis" not in d:
        raise SchemaError(f"{path}.basis: missing")
    basis = d["basis"]
    if not isinstance(basis, list) or not all(isinstance(v, list) for v in basis):
        raise SchemaError(f"{path}.basis: expected a list of vectors")
    rad = d.get("radicands", [])
    if not isinstance(rad, list):
        raise SchemaError(f"{path}.radicands: expected a list of strings")
    tower = tower_from_radicands([str(r) for r in rad])
    vecs = []
    for i, v in enumerate(basis):
        row = []
        for j, x in enumerate(v):
            if not isinstance(x, (str, int)):
                raise SchemaError(f"{path}.basis[{i}][{j}]: expected a string")
            row.append(parse(str(x), tower))
        vecs.append(row)
    n = d.get("n", len(vecs))
    return Flag(vecs, int(n))


def setup_from_args(a) -> Setup:
    if a.setup:
        d = _load_json(a.setup)
        try:
            return Setup(d["type"], int(d["n"]), tuple(d.get("blocks", ())), d.get("signs", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"$.{e.args[0] if e.args else ''}: bad setup") from e
    if a.type is None or a.n is None:
        raise SchemaError("need --setup or --type and --n")
    blocks = tuple(a.blocks.split(",")) if a.blocks else None
    if a.signs:
        return Setup(a.type, a.n, blocks or (), _signs(a.signs))
    return default_setup(a.type, a.n, a.p, a.q, blocks)


def _signs(text: str) -> str:
    # argparse swallows a bare "--", so p/m spell +/- as well
    return text.replace("p", "+").replace("m", "-")


def ind_setup_from_args(a) -> ind.IndSetup:
    if a.setup:
        return ind.IndSetup.from_json(_load_json(a.setup))
    if a.type is None:
        raise SchemaError("need --setup or --type")
    t = a.type
    fam = a.order or ("ISO_TWOSIDED" if t in BCD_TYPES else "NAT")
    order = ind.OrderSpec(fam)
    pre = tuple(a.omega_prefix.split(",")) if a.omega_prefix else ()
    tail = ind._parse_tail_blocks(a.omega_tail) if a.omega_tail else ()
    stail = a.signs_tail
    if stail is None and t not in ("A1", "A2"):
        stail = "(+-)*"
    stail = ind._parse_tail_signs(_signs(stail)) if stail else ""
    return ind.IndSetup(t, pre, tail, _signs(a.signs_prefix or ""), stail, order)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})") from e


def _read_input(a):
    try:
        text = open(a.input).read() if a.input and a.input != "-" else sys.stdin.read()
    except OSError as e:
        raise SchemaError(str(e)) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"$: invalid JSON ({e})") from e


def _clan_payload(d):
    if isinstance(d, dict) and "clan" in d:
        d = d["clan"]
    if not isinstance(d, dict):
        raise SchemaError("$: expected a clan object")
    return clans.Clan.from_json(d)


def _render_clans(cs, fmt: str) -> str:
    if fmt == "json":
        return "\n".join(_dump(c.to_json()) for c in cs)
    if fmt == "ascii":
        return "\n\n".join(c.render_ascii() for c in cs)
    return "\n".join(c.render_dot() for c in cs)


# -- verbs -------------------------------------------------------------------------------

def cmd_enumerate(a) -> str:
    S = setup_from_args(a)
    return _render_clans(clans.enumerate_params(S), a.format)


def cmd_classify(a) -> str:
    S = setup_from_args(a)
    F = flag_from_json(_read_input(a))
    c = cl.classify(F, S, a.family)
    if a.format != "json":
        return _render_clans([c], a.format)
    return _dump(dict(c.to_json(), family=a.family, type=S.type))


def cmd_represent(a) -> str:
    S = setup_from_args(a)
    c = _clan_payload(_read_input(a))
    return _dump(flag_to_json(cl.build_representative(c, S, a.family)))


def cmd_dual(a) -> str:
    S = setup_from_args(a)
    c = _clan_payload(_read_input(a))
    clans.check_param(c, S)
    d, fam = clans.matsuki_dual(c, a.family)
    return _dump({"clan": d.to_json(), "family": fam})


def cmd_special(a) -> str:
    S = setup_from_args(a)
    c = _clan_payload(_read_input(a))
    basis = cl.special_basis(c, S)
    out = flag_to_json(Flag(basis, S.n))
    out["special"] = cl.is_special_basis(basis, c, S)
    return _dump(out)


def cmd_relpos(a) -> str:
    d = _read_input(a)
    if not isinstance(d, dict) or "F" not in d or "G" not in d:
        raise SchemaError("$: expected {\"F\": flag, \"G\": flag}")
    w = relative_position(flag_from_json(d["F"], "$.F"), flag_from_json(d["G"], "$.G"))
    return _dump({"w": list(w)})


def cmd_counts(a) -> str:
    S = setup_from_args(a)
    return _dump({
        "params": clans.count_params(S),
        "closed": clans.count_closed(S),
        "open": clans.count_open(S),
    })


def cmd_ind_check(a) -> str:
    si = ind_setup_from_args(a)
    ok = ind.has_open_orbit(si, "K")
    ck = ind.has_closed_orbit(si, "K")
    og = ind.has_open_orbit(si, "G0")
    cg = ind.has_closed_orbit(si, "G0")
    return _dump({
        "setup": si.to_json(),
        "open_K": ok.value,
        "closed_K": ck.value,
        "open_G0": og.value,
        "closed_G0": cg.value,
        "clause": ok.clause,
        "clauses": {"open_K": ok.clause, "closed_K": ck.clause},
        "reasons": {"open_K": ok.reason, "closed_K": ck.reason},
    })


VERBS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "represent": cmd_represent,
    "dual": cmd_dual,
    "special": cmd_special,
    "relpos": cmd_relpos,
    "counts": cmd_counts,
    "ind-check": cmd_ind_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flagorbits", description="Orbits of symmetric subgroups on flags.")
    sub = p.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        s = sub.add_parser(verb)
        s.add_argument("--type", choices=TYPES)
        s.add_argument("--n", type=int)
        s.add_argument("--p", type=int)
        s.add_argument("--q", type=int)
        s.add_argument("--blocks", help="comma separated, e.g. B1,B2")
        s.add_argument("--signs", help="one +/- (or p/m) per index")
        s.add_argument("--setup", help="setup JSON file")
        s.add_argument("--family", choices=("K", "G0"), default="K")
        s.add_argument("--format", choices=("json", "ascii", "dot"), default="json")
        s.add_argument("--input", "-i", help="input JSON file (default stdin)")
        s.add_argument("--output", "-o", help="output file (default stdout)")
        if verb == "ind-check":
            s.add_argument("--order", choices=ind.FAMILIES)
            s.add_argument("--omega-prefix")
            s.add_argument("--omega-tail", help="e.g. B1* or (B1B2)*")
            s.add_argument("--signs-prefix")
            s.add_argument("--signs-tail", help="e.g. +* or (+-)*")
    return p


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        out = VERBS[a.verb](a)
    except DomainError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    try:
        if a.output:
            with open(a.output, "w") as fh:
                fh.write(out + "\n")
        else:
            sys.stdout.write(out + "\n")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
