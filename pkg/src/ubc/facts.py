"""Side-condition facts recorded in proof trees.

Facts are short strings in set-theory notation, e.g. ``G ∉ {A}`` or
``A,G ∈ {A,G,H} ⟹ H ∈ {A,G,H}``.  Most are closed (all sets written out);
the graph facts are checked against a system supplied by the caller:

    isolated c              no connection touches c            (premise)
    ¬(c ⇝ i)                c does not reach i                 (premise)
    separate X | Y          no edge or grant joins X and Y     (premise)
    u guards n ⇝ i          every n ⇝ i path meets u           (conclusion)

:func:`holds` parses and evaluates a fact from scratch; it shares no code
with the tactics that discharged it.
"""

from __future__ import annotations

import re
from typing import Iterable

from .model import Edge, System, format_edges, format_set

_ID = r"[A-Za-z][A-Za-z0-9_]*"
_SET = rf"(?:∅|\{{(?:{_ID}(?:,{_ID})*)?\}})"
_PAIR = rf"⟨{_ID},{_ID}⟩"
_ESET = rf"(?:∅|\{{{_PAIR}(?:,{_PAIR})*\}})"
_IDS = rf"{_ID}(?:,{_ID})*"
_MEM = rf"({_IDS}) ([∈∉]) ({_SET})"

_FORMS = {
    "mem": re.compile(rf"{_MEM}\Z"),
    "imp": re.compile(rf"{_MEM} ⟹ {_MEM}\Z"),
    "edge": re.compile(rf"⟨({_ID}),({_ID})⟩ ([∈∉]) ({_ESET})\Z"),
    "neq": re.compile(rf"({_ID}) ≠ ({_ID})\Z"),
    "disjoint": re.compile(rf"({_SET}) ∩ ({_SET}) = ∅\Z"),
    "union": re.compile(rf"({_SET}) ∪ ({_SET}) = ({_SET})\Z"),
    "isolated": re.compile(rf"isolated ({_ID})\Z"),
    "nopath": re.compile(rf"¬\(({_ID}) ⇝ ({_ID})\)\Z"),
    "guards": re.compile(rf"({_ID}) guards ({_ID}) ⇝ ({_ID})\Z"),
    "separate": re.compile(rf"separate ({_SET}) \| ({_SET})\Z"),
}


class FactSyntaxError(ValueError):
    pass


# -- constructors --------------------------------------------------------------


def member(xs: str | Iterable[str], of: Iterable[str], negated: bool = False) -> str:
    names = [xs] if isinstance(xs, str) else sorted(xs)
    return f"{','.join(names)} {'∉' if negated else '∈'} {format_set(of)}"


def implies(premise: str, conclusion: str) -> str:
    return f"{premise} ⟹ {conclusion}"


def edge_member(e: Edge, of: Iterable[Edge], negated: bool = False) -> str:
    return f"⟨{e[0]},{e[1]}⟩ {'∉' if negated else '∈'} {format_edges(of)}"


def distinct(a: str, b: str) -> str:
    return f"{a} ≠ {b}"


def disjoint(x: Iterable[str], y: Iterable[str]) -> str:
    return f"{format_set(x)} ∩ {format_set(y)} = ∅"


def union(x: Iterable[str], y: Iterable[str], z: Iterable[str]) -> str:
    return f"{format_set(x)} ∪ {format_set(y)} = {format_set(z)}"


def isolated(c: str) -> str:
    return f"isolated {c}"


def no_path(c: str, i: str) -> str:
    return f"¬({c} ⇝ {i})"


def guards(u: str, n: str, i: str) -> str:
    return f"{u} guards {n} ⇝ {i}"


def separate(x: Iterable[str], y: Iterable[str]) -> str:
    return f"separate {format_set(x)} | {format_set(y)}"


# -- evaluation -----------------------------------------------------------------


def _names(text: str) -> set[str]:
    return set(re.findall(_ID, text))


def _pairs(text: str) -> set[Edge]:
    return set(re.findall(rf"⟨({_ID}),({_ID})⟩", text))


def _mem(xs: str, op: str, of: str) -> bool:
    lhs, rhs = xs.split(","), _names(of)
    return all((x in rhs) == (op == "∈") for x in lhs)


def _walk(s: System, start: str, blocked: str | None = None) -> set[str]:
    adjacent: dict[str, list[str]] = {}
    for a, b in s.connections:
        adjacent.setdefault(a, []).append(b)
    seen: set[str] = set()
    stack = list(adjacent.get(start, []))
    while stack:
        x = stack.pop()
        if x in seen or x == blocked:
            continue
        seen.add(x)
        stack.extend(adjacent.get(x, []))
    return seen


def holds(fact: str, premise: System | None, conclusion: System) -> bool:
    """Evaluate ``fact``; raises :class:`FactSyntaxError` if it does not parse."""
    for form, pattern in _FORMS.items():
        m = pattern.match(fact)
        if m:
            break
    else:
        raise FactSyntaxError(f"unrecognised fact {fact!r}")
    g = m.groups()
    context = premise if premise is not None else conclusion
    if form == "mem":
        return _mem(*g)
    if form == "imp":
        return (not _mem(*g[:3])) or _mem(*g[3:])
    if form == "edge":
        return (((g[0], g[1]) in _pairs(g[3])) == (g[2] == "∈"))
    if form == "neq":
        return g[0] != g[1]
    if form == "disjoint":
        return not (_names(g[0]) & _names(g[1]))
    if form == "union":
        return _names(g[0]) | _names(g[1]) == _names(g[2])
    if form == "isolated":
        return g[0] in context.components and all(g[0] not in e for e in context.connections)
    if form == "nopath":
        return g[1] not in _walk(context, g[0])
    if form == "guards":
        u, n, i = g
        return n not in (u, i) and i in _walk(conclusion, n) and i not in _walk(conclusion, n, blocked=u)
    if form == "separate":
        x, y = _names(g[0]), _names(g[1])
        if any((a in x and b in y) or (a in y and b in x) for a, b in context.connections):
            return False
        for i, cs in context.allowed.items():
            side = x if i in x else y
            if not cs <= side:
                return False
        return True
    raise AssertionError(form)
