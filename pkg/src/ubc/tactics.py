"""The construction tactics.

Each tactic is a pure function from a well-formed :class:`~ubc.model.System`
(plus arguments) to a new system, raising :class:`~ubc.diagnostics.TacticError`
with a concrete witness when a side condition fails.  Soundness rests on one
fact: starting from :func:`axiom`, every tactic preserves the closure
invariant (every reacher of an interactive ``i`` is in ``A(i)``, unless an
enhancer guards all of its paths).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .diagnostics import Diagnostic, TacticError
from .model import (
    System,
    downstream,
    find_path,
    format_set,
    guard_for,
    is_identifier,
    require_component,
    upstream,
)

if TYPE_CHECKING:
    from .proof import Script


class Kind(enum.Enum):
    CREATE_GENERAL = "create"
    CREATE_INTERACTIVE = "create-interactive"
    DELETE = "delete"
    CONNECT = "connect"
    DISCONNECT = "disconnect"
    ALLOW = "allow"
    REVOKE = "revoke"
    DESIGNATE = "designate"
    SIMPLIFY = "simplify"
    MERGE = "merge"
    SPLIT = "split"


_ARITY = {
    Kind.CREATE_GENERAL: 1,
    Kind.CREATE_INTERACTIVE: 1,
    Kind.DELETE: 1,
    Kind.CONNECT: 2,
    Kind.DISCONNECT: 2,
    Kind.ALLOW: 2,
    Kind.REVOKE: 2,
    Kind.DESIGNATE: 1,
    Kind.SIMPLIFY: 0,
    Kind.MERGE: 0,
    Kind.SPLIT: 0,
}


@dataclass(frozen=True)
class TacticStep:
    """One tactic invocation.

    ``args`` holds component names; for ``ALLOW``/``REVOKE`` they are
    ``(interactive, component)``.  ``MERGE`` carries the sub-script building
    the right-hand system and ``SPLIT`` the component set that is kept.
    ``span`` is the (line, column) of the statement when parsed from text.
    """

    kind: Kind
    args: tuple[str, ...] = ()
    script: Script | None = None
    part: frozenset[str] | None = None
    span: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if self.part is not None:
            object.__setattr__(self, "part", frozenset(self.part))
        if len(self.args) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} takes {_ARITY[self.kind]} argument(s), got {self.args}")
        if (self.kind is Kind.MERGE) != (self.script is not None):
            raise ValueError("a merge step carries exactly one sub-script")
        if (self.kind is Kind.SPLIT) != (self.part is not None):
            raise ValueError("a split step carries exactly one component set")


def step(kind: Kind | str, *args: str) -> TacticStep:
    return TacticStep(Kind(kind), args)


def create_interactive_with(i: str, grants: Iterable[str]) -> list[TacticStep]:
    """Macro: create interactive ``i`` then allow each of ``grants`` to use it."""
    steps = [step(Kind.CREATE_INTERACTIVE, i)]
    steps += [step(Kind.ALLOW, i, c) for c in sorted(set(grants) - {i})]
    return steps


def _fail(code: str, rule: str, witness: Iterable[str], message: str) -> TacticError:
    return TacticError(Diagnostic(code, rule, tuple(witness), message))


def axiom() -> System:
    return System()


def _fresh(s: System, c: str, rule: str) -> None:
    if not is_identifier(c):
        raise _fail("invalid-identifier", rule, (repr(c),), f"{c!r} is not a valid component name")
    if c in s.components:
        raise _fail("duplicate-component", rule, (c,), f"{c} is already in C = {format_set(s.components)}")


def create_general(s: System, c: str) -> System:
    _fresh(s, c, "create⁺₁")
    return s.replace(components=s.components | {c})


def create_interactive(s: System, i: str) -> System:
    _fresh(s, i, "create⁺₂")
    return s.replace(
        components=s.components | {i},
        interactive=s.interactive | {i},
        allowed={**s.allowed, i: frozenset({i})},
    )


def delete(s: System, c: str) -> System:
    rule = "delete⁺₂" if c in s.interactive else "delete⁺₁"
    require_component(s, rule, c)
    # a self-loop also blocks deletion: the edge would dangle afterwards
    for a, b in sorted(s.connections):
        if c in (a, b):
            raise _fail("not-isolated", rule, (a, b), f"{c} is not isolated: ⟨{a},{b}⟩ ∈ N")
    for i in sorted(s.interactive - {c}):
        if c in s.allowed[i]:
            raise _fail("still-allowed", rule, (i, c), f"{c} is still in A({i}) = {format_set(s.allowed[i])}")
    if c not in s.interactive:
        return s.replace(components=s.components - {c}, enhancers=s.enhancers - {c})
    allowed = {i: cs for i, cs in s.allowed.items() if i != c}
    return s.replace(
        components=s.components - {c},
        interactive=s.interactive - {c},
        allowed=allowed,
        enhancers=s.enhancers - {c},
    )


def connect(s: System, a: str, b: str) -> System:
    """Add ``(a, b)`` if every new reacher of a grant holder is itself granted.

    For each interactive ``i``, each ``d`` downstream of ``b`` with
    ``d in A(i)`` and each ``c'`` upstream of ``a``: ``c'`` must be in
    ``A(i)``, unless an enhancer guards every ``c' ~> i`` path in the
    resulting system.
    """
    rule = "connect⁺"
    require_component(s, rule, a, b)
    if (a, b) in s.connections:
        raise _fail("duplicate-connection", rule, (a, b), f"⟨{a},{b}⟩ is already in N")
    post = s.replace(connections=s.connections | {(a, b)})
    down = downstream(s, b)
    up = upstream(s, a)
    for i in sorted(s.interactive):
        members = s.allowed[i]
        hit = sorted(down & members)
        if not hit:
            continue
        for c in sorted(up - members):
            if guard_for(post, c, i) is not None:
                continue
            raise _fail(
                "access-violation",
                rule,
                (c, hit[0], i),
                f"connecting {a} -> {b} lets {c} reach {hit[0]} ∈ A({i}) but {c} ∉ A({i}) = {format_set(members)}",
            )
    return post


def disconnect(s: System, a: str, b: str) -> System:
    if (a, b) not in s.connections:
        raise _fail("unknown-connection", "disconnect⁺", (a, b), f"⟨{a},{b}⟩ is not in N")
    return s.replace(connections=s.connections - {(a, b)})


def _interactive(s: System, i: str, rule: str) -> None:
    require_component(s, rule, i)
    if i not in s.interactive:
        raise _fail("not-interactive", rule, (i,), f"{i} is not interactive; I = {format_set(s.interactive)}")


def allow(s: System, i: str, c: str) -> System:
    rule = "allowed⁺"
    _interactive(s, i, rule)
    require_component(s, rule, c)
    return s.with_grants(i, s.allowed[i] | {c})


def revoke(s: System, i: str, c: str) -> System:
    rule = "revoke⁺"
    _interactive(s, i, rule)
    require_component(s, rule, c)
    if c == i:
        raise _fail("cannot-revoke-self", rule, (i,), f"{i} must stay in its own allowed set")
    if c not in s.allowed[i]:
        raise _fail("not-in-allowed-set", rule, (i, c), f"{c} ∉ A({i}) = {format_set(s.allowed[i])}")
    path = find_path(s, c, i)
    if path is not None:
        raise _fail("path-exists", rule, path, f"{c} still reaches {i} via {' -> '.join(path)}")
    return s.with_grants(i, s.allowed[i] - {c})


def merge(left: System, right: System) -> System:
    shared = sorted(left.components & right.components)
    if shared:
        raise _fail("overlap", "naming₁", shared, f"systems share component(s) {format_set(shared)}")
    return System(
        left.components | right.components,
        left.connections | right.connections,
        left.interactive | right.interactive,
        {**left.allowed, **right.allowed},
        left.enhancers | right.enhancers,
    )


def restrict(s: System, part: frozenset[str]) -> System:
    return System(
        part,
        {(a, b) for a, b in s.connections if a in part and b in part},
        s.interactive & part,
        {i: cs & part for i, cs in s.allowed.items() if i in part},
        s.enhancers & part,
    )


def crossing(s: System, part: frozenset[str]) -> Diagnostic | None:
    """The first edge or grant joining ``part`` to the rest, if any."""
    for a, b in sorted(s.connections):
        if (a in part) != (b in part):
            return Diagnostic("crossing-connection", "naming₂", (a, b), f"⟨{a},{b}⟩ crosses the partition")
    for i in sorted(s.interactive):
        inside = i in part
        for c in sorted(s.allowed[i]):
            if (c in part) != inside:
                return Diagnostic("crossing-grant", "naming₂", (i, c), f"{c} ∈ A({i}) crosses the partition")
    return None


def split(s: System, part: Iterable[str]) -> tuple[System, System]:
    part = frozenset(part)
    require_component(s, "naming₂", *sorted(part))
    problem = crossing(s, part)
    if problem is not None:
        raise TacticError(problem)
    return restrict(s, part), restrict(s, s.components - part)


def apply_step(s: System, st: TacticStep) -> System:
    """Apply one step without building a proof (sub-scripts are run recursively)."""
    from . import enhance

    k = st.kind
    if k is Kind.CREATE_GENERAL:
        return create_general(s, *st.args)
    if k is Kind.CREATE_INTERACTIVE:
        return create_interactive(s, *st.args)
    if k is Kind.DELETE:
        return delete(s, *st.args)
    if k is Kind.CONNECT:
        return connect(s, *st.args)
    if k is Kind.DISCONNECT:
        return disconnect(s, *st.args)
    if k is Kind.ALLOW:
        return allow(s, *st.args)
    if k is Kind.REVOKE:
        return revoke(s, *st.args)
    if k is Kind.DESIGNATE:
        return enhance.designate(s, *st.args)
    if k is Kind.SIMPLIFY:
        return enhance.simplify(s)
    if k is Kind.MERGE:
        return merge(s, run_steps(st.script.steps))
    if k is Kind.SPLIT:
        return split(s, st.part)[0]
    raise AssertionError(k)


def run_steps(steps: Iterable[TacticStep], start: System | None = None) -> System:
    s = axiom() if start is None else start
    for index, st in enumerate(steps):
        try:
            s = apply_step(s, st)
        except TacticError as exc:
            raise TacticError(exc.diagnostic.at_step(index)) from None
    return s
