"""Systems, judgments and reachability.

A system is the quintuple ``<C, N, I, A, U>``: components, directed
connections (``(a, b)`` means *a uses b*), interactive components, the
allowed-set map ``A`` (one entry per interactive component) and the
usability-enhancing components ``U``.  Systems are immutable values; every
tactic returns a fresh one.
"""

from __future__ import annotations

import dataclasses
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import AbstractSet, Iterable, Mapping

from .diagnostics import Diagnostic, TacticError

Edge = tuple[str, str]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def is_identifier(name: object) -> bool:
    return isinstance(name, str) and _IDENT.match(name) is not None


@dataclass(frozen=True)
class System:
    components: frozenset[str] = frozenset()
    connections: frozenset[Edge] = frozenset()
    interactive: frozenset[str] = frozenset()
    allowed: Mapping[str, frozenset[str]] = field(default_factory=dict)
    enhancers: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        setattr_ = object.__setattr__
        setattr_(self, "components", frozenset(self.components))
        setattr_(self, "connections", frozenset((a, b) for a, b in self.connections))
        setattr_(self, "interactive", frozenset(self.interactive))
        grants = {i: frozenset(cs) for i, cs in sorted(dict(self.allowed).items())}
        setattr_(self, "allowed", MappingProxyType(grants))
        setattr_(self, "enhancers", frozenset(self.enhancers))

    def __hash__(self) -> int:
        return hash(
            (
                self.components,
                self.connections,
                self.interactive,
                frozenset(self.allowed.items()),
                self.enhancers,
            )
        )

    def __reduce__(self):
        return (
            System,
            (
                self.components,
                self.connections,
                self.interactive,
                dict(self.allowed),
                self.enhancers,
            ),
        )

    def replace(self, **changes) -> System:
        return dataclasses.replace(self, **changes)

    def grants(self, i: str) -> frozenset[str]:
        return self.allowed.get(i, frozenset())

    def with_grants(self, i: str, members: Iterable[str]) -> System:
        allowed = dict(self.allowed)
        allowed[i] = frozenset(members)
        return self.replace(allowed=allowed)

    @cached_property
    def successors(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for a, b in self.connections:
            out.setdefault(a, set()).add(b)
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def predecessors(self) -> Mapping[str, frozenset[str]]:
        out: dict[str, set[str]] = {}
        for a, b in self.connections:
            out.setdefault(b, set()).add(a)
        return {k: frozenset(v) for k, v in out.items()}

    def __str__(self) -> str:
        return format_judgment(self)


def empty_system() -> System:
    return System()


_KERNEL_KEY = object()


@dataclass(frozen=True)
class Judgment:
    """The contract ``A |= <C, N, U, I>`` for a system derived by the rules.

    Only the proof kernel constructs judgments; there is deliberately no way
    to promote a raw :class:`System` into one.
    """

    system: System
    _key: object = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self._key is not _KERNEL_KEY:
            raise TypeError("judgments are only produced by the proof kernel")

    @property
    def assumptions(self) -> Mapping[str, frozenset[str]]:
        return self.system.allowed

    @property
    def structure(self) -> tuple[frozenset[str], frozenset[Edge], frozenset[str], frozenset[str]]:
        s = self.system
        return (s.components, s.connections, s.enhancers, s.interactive)

    def __str__(self) -> str:
        return format_judgment(self.system)


# -- notation ---------------------------------------------------------------


def format_set(items: Iterable[str]) -> str:
    items = sorted(items)
    return "{" + ",".join(items) + "}" if items else "∅"


def format_edges(edges: Iterable[Edge]) -> str:
    edges = sorted(edges)
    return "{" + ",".join(f"⟨{a},{b}⟩" for a, b in edges) + "}" if edges else "∅"


def format_assumptions(allowed: Mapping[str, AbstractSet[str]]) -> str:
    if not allowed:
        return "∅"
    body = ", ".join(f"{i} ↦ {format_set(cs)}" for i, cs in sorted(allowed.items()))
    return "{" + body + "}"


def format_judgment(s: System) -> str:
    """Render as ``A ⊨ ⟨C, N, I⟩``; ``U`` is shown only when non-empty."""
    parts = [format_set(s.components), format_edges(s.connections)]
    if s.enhancers:
        parts.append(format_set(s.enhancers))
    parts.append(format_set(s.interactive))
    return f"{format_assumptions(s.allowed)} ⊨ ⟨{', '.join(parts)}⟩"


# -- well-formedness ----------------------------------------------------------


def malformations(s: System) -> list[Diagnostic]:
    """Every broken system invariant, in a deterministic order."""
    out: list[Diagnostic] = []

    def bad(code: str, witness: tuple[str, ...], message: str) -> None:
        out.append(Diagnostic(code, "well-formed", witness, message))

    for c in sorted(s.components):
        if not is_identifier(c):
            bad("invalid-identifier", (repr(c),), f"{c!r} is not a valid component name")
    for i in sorted(s.interactive - s.components):
        bad("unknown-component", (i,), f"interactive {i} is not a component")
    for u in sorted(s.enhancers - s.components):
        bad("unknown-component", (u,), f"enhancer {u} is not a component")
    for a, b in sorted(s.connections):
        for end in (a, b):
            if end not in s.components:
                bad("unknown-component", (a, b), f"connection ⟨{a},{b}⟩ mentions unknown {end}")
                break
    keys = frozenset(s.allowed)
    for i in sorted(s.interactive - keys):
        bad("missing-allowed-set", (i,), f"interactive {i} has no allowed set")
    for k in sorted(keys - s.interactive):
        bad("stray-allowed-set", (k,), f"{k} has an allowed set but is not interactive")
    for i in sorted(keys & s.interactive):
        members = s.allowed[i]
        for c in sorted(members - s.components):
            bad("unknown-component", (i, c), f"A({i}) mentions unknown {c}")
        if i not in members:
            bad("self-access", (i,), f"{i} is missing from its own allowed set")
    return out


def well_formed(s: System) -> bool:
    return not malformations(s)


# -- reachability ---------------------------------------------------------------


def require_component(s: System, rule: str, *names: str) -> None:
    for name in names:
        if name not in s.components:
            raise TacticError(
                Diagnostic("unknown-component", rule, (str(name),), f"{name} is not a component")
            )


def _search(adj: Mapping[str, frozenset[str]], start: str, blocked: AbstractSet[str] = frozenset()) -> set[str]:
    # strict: start is included only if it lies on a cycle
    seen: set[str] = set()
    queue = deque(adj.get(start, ()))
    while queue:
        x = queue.popleft()
        if x in seen or x in blocked:
            continue
        seen.add(x)
        queue.extend(adj.get(x, ()))
    return seen


def reaches(s: System, source: str, target: str) -> bool:
    """Strict transitive closure of the connections: no implicit self-paths."""
    require_component(s, "reaches", source, target)
    return target in _search(s.successors, source)


def downstream(s: System, c: str) -> frozenset[str]:
    require_component(s, "downstream", c)
    return frozenset(_search(s.successors, c)) | {c}


def upstream(s: System, c: str) -> frozenset[str]:
    require_component(s, "upstream", c)
    return frozenset(_search(s.predecessors, c)) | {c}


def find_path(s: System, source: str, target: str) -> tuple[str, ...] | None:
    """A shortest connection path from ``source`` to ``target``, if any."""
    parent: dict[str, str] = {}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in sorted(s.successors.get(x, ())):
            if y in parent:
                continue
            parent[y] = x
            if y == target:
                path = [y]
                while True:
                    path.append(parent[path[-1]])
                    if path[-1] == source:
                        return tuple(reversed(path))
            queue.append(y)
    return None


def guarded(s: System, u: str, n: str, i: str) -> bool:
    """True iff ``n`` reaches ``i`` and every such path meets ``u``.

    Endpoints count, so an enhancer that is itself ``i`` guards every path
    into it.  ``n`` never guards itself and is never guarded w.r.t. itself.
    """
    if n == u or n == i:
        return False
    succ = s.successors
    if i not in _search(succ, n):
        return False
    return i not in _search(succ, n, blocked={u})


def guard_for(s: System, n: str, i: str) -> str | None:
    """The lexicographically first enhancer guarding the pair ``(n, i)``."""
    for u in sorted(s.enhancers):
        if guarded(s, u, n, i):
            return u
    return None


def closure_invariant(s: System) -> list[Diagnostic]:
    """Components reaching an interactive ``i`` without being in ``A(i)``.

    A reacher absent from ``A(i)`` is tolerated when some single enhancer
    guards every one of its paths into ``i``.
    """
    out: list[Diagnostic] = []
    pred = s.predecessors
    for i in sorted(s.interactive):
        members = s.grants(i)
        for c in sorted(_search(pred, i) - {i}):
            if c in members or guard_for(s, c, i) is not None:
                continue
            out.append(
                Diagnostic(
                    "closure-violation",
                    "closure",
                    (c, i),
                    f"{c} reaches interactive {i} but is not in A({i}) = {format_set(members)}",
                )
            )
    return out
