"""Derivation trees over the construction rules.

:func:`replay` runs a script through the tactics and records each step as a
:class:`ProofNode` whose side conditions are kept as explicit ``ST`` facts.
:func:`verify` re-checks a tree from scratch: it recomputes every node's
conclusion from its premises under the named rule, demands exactly the
required facts and evaluates each of them with :func:`ubc.facts.holds`.
It never calls the tactics, so a hand-built or deserialized tree gets the
same scrutiny as one produced by :func:`replay`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from . import enhance, facts, tactics
from .diagnostics import Diagnostic, ProofError, TacticError
from .model import (
    _KERNEL_KEY,
    Judgment,
    System,
    downstream,
    format_judgment,
    guard_for,
    is_identifier,
    malformations,
    upstream,
)
from .tactics import Kind, TacticStep

RULES = (
    "axiom",
    "create⁺₁",
    "create⁺₂",
    "delete⁺₁",
    "delete⁺₂",
    "connect⁺",
    "disconnect⁺",
    "disconnect⁻",
    "allowed⁺",
    "revoke⁺",
    "naming₁",
    "naming₂",
    "enhance⁺",
    "healthiness",
    "ST",
)


@dataclass(frozen=True)
class Script:
    steps: tuple[TacticStep, ...] = ()
    initial: System | None = field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: Script) -> Script:
        return Script(self.steps + tuple(other.steps), self.initial)


@dataclass(frozen=True)
class ProofNode:
    rule: str
    premises: tuple[ProofNode, ...]
    facts: tuple[str, ...]
    conclusion: System

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "facts", tuple(self.facts))

    def spine(self) -> list[ProofNode]:
        """Left-spine nodes, axiom first."""
        out, node = [], self
        while True:
            out.append(node)
            if not node.premises:
                return out[::-1]
            node = node.premises[0]


def _entail(s: System) -> Judgment:
    return Judgment(s, _KERNEL_KEY)


# -- rule schemas ----------------------------------------------------------------
#
# For every rule: which parameters could explain a (premises, conclusion)
# pair, what conclusion the rule yields for given parameters, and which
# facts it requires.  Facts are returned sorted and de-duplicated.


def _single(xs: Iterable) -> list:
    xs = list(xs)
    return [xs[0]] if len(xs) == 1 else []


def _candidates(rule: str, ps: Sequence[System], q: System) -> list:
    p = ps[0] if ps else None
    if rule in ("axiom", "naming₁", "healthiness"):
        return [None]
    if rule in ("create⁺₁", "create⁺₂"):
        return _single(q.components - p.components)
    if rule in ("delete⁺₁", "delete⁺₂"):
        return _single(p.components - q.components)
    if rule in ("connect⁺", "disconnect⁻"):
        return _single(q.connections - p.connections)
    if rule == "disconnect⁺":
        return _single(p.connections - q.connections)
    if rule == "allowed⁺":
        if q == p:
            return sorted((i, c) for i, cs in p.allowed.items() for c in cs)
        return [
            (i, c)
            for i in sorted(set(p.allowed) & set(q.allowed))
            for c in _single(q.allowed[i] - p.allowed[i])
        ]
    if rule == "revoke⁺":
        return [
            (i, c)
            for i in sorted(set(p.allowed) & set(q.allowed))
            for c in _single(p.allowed[i] - q.allowed[i])
        ]
    if rule == "naming₂":
        return [q.components]
    if rule == "enhance⁺":
        return sorted(p.enhancers) if q == p else _single(q.enhancers - p.enhancers)
    return []


def _conclude(rule: str, ps: Sequence[System], x) -> System | None:
    p = ps[0] if ps else None
    if rule == "axiom":
        return System()
    if rule == "create⁺₁":
        return p.replace(components=p.components | {x}) if is_identifier(x) else None
    if rule == "create⁺₂":
        if not is_identifier(x):
            return None
        return p.replace(
            components=p.components | {x},
            interactive=p.interactive | {x},
            allowed={**p.allowed, x: {x}},
        )
    if rule == "delete⁺₁":
        return p.replace(components=p.components - {x}, enhancers=p.enhancers - {x})
    if rule == "delete⁺₂":
        return System(
            p.components - {x},
            p.connections,
            p.interactive - {x},
            {i: cs for i, cs in p.allowed.items() if i != x},
            p.enhancers - {x},
        )
    if rule in ("connect⁺", "disconnect⁻"):
        return p.replace(connections=p.connections | {x})
    if rule == "disconnect⁺":
        return p.replace(connections=p.connections - {x})
    if rule == "allowed⁺":
        i, c = x
        return p.with_grants(i, p.grants(i) | {c})
    if rule == "revoke⁺":
        i, c = x
        return p.with_grants(i, p.grants(i) - {c})
    if rule == "naming₁":
        l, r = ps
        return System(
            l.components | r.components,
            l.connections | r.connections,
            l.interactive | r.interactive,
            {**r.allowed, **l.allowed},
            l.enhancers | r.enhancers,
        )
    if rule == "naming₂":
        part = frozenset(x)
        return System(
            part,
            {(a, b) for a, b in p.connections if a in part and b in part},
            p.interactive & part,
            {i: cs & part for i, cs in p.allowed.items() if i in part},
            p.enhancers & part,
        )
    if rule == "enhance⁺":
        return p.replace(enhancers=p.enhancers | {x})
    if rule == "healthiness":
        return enhance.simplify(p)
    return None


def _connect_facts(p: System, q: System, a: str, b: str) -> list[str]:
    out = [facts.member(a, p.components), facts.member(b, p.components)]
    out.append(facts.edge_member((a, b), p.connections, negated=True))
    down, up = downstream(p, b), upstream(p, a)
    for i in sorted(p.interactive):
        members = p.allowed[i]
        hit = down & members
        if not hit:
            continue
        for c in sorted(up):
            u = None if c in members else guard_for(q, c, i)
            if u is None:
                out.append(facts.implies(facts.member(hit, members), facts.member(c, members)))
            else:
                out.append(facts.guards(u, c, i))
    return out


def obligations(rule: str, ps: Sequence[System], x, q: System) -> list[str]:
    """The facts a node needs, given premises ``ps``, parameter ``x`` and conclusion ``q``."""
    p = ps[0] if ps else None
    out: list[str] = []
    if rule in ("create⁺₁", "create⁺₂"):
        out = [facts.member(x, p.components, negated=True)]
    elif rule in ("delete⁺₁", "delete⁺₂"):
        out = [
            facts.member(x, p.components),
            facts.member(x, p.interactive, negated=(rule == "delete⁺₁")),
            facts.isolated(x),
        ]
        out += [facts.member(x, p.allowed[i], negated=True) for i in sorted(p.interactive - {x})]
    elif rule == "connect⁺":
        out = _connect_facts(p, q, *x)
    elif rule == "disconnect⁺":
        out = [facts.edge_member(x, p.connections)]
    elif rule == "disconnect⁻":
        out = [facts.member(x, p.components)]
    elif rule == "allowed⁺":
        i, c = x
        out = [facts.member(i, p.interactive), facts.member(c, p.components)]
    elif rule == "revoke⁺":
        i, c = x
        out = [
            facts.member(i, p.interactive),
            facts.member(c, p.grants(i)),
            facts.distinct(c, i),
            facts.edge_member((c, i), p.connections, negated=True),
            facts.no_path(c, i),
        ]
    elif rule == "naming₁":
        out = [facts.disjoint(ps[0].components, ps[1].components)]
    elif rule == "naming₂":
        rest = p.components - frozenset(x)
        out = [
            facts.union(x, rest, p.components),
            facts.disjoint(x, rest),
            facts.separate(x, rest),
        ]
    elif rule == "enhance⁺":
        out = [facts.member(x, p.components)]
    elif rule == "healthiness":
        for i in sorted(p.interactive):
            for n in sorted(p.allowed[i] - q.grants(i)):
                u = guard_for(p, n, i)
                out.append(facts.guards(u if u is not None else "∅", n, i))
    return sorted(set(out))


_ARITY = {r: 1 for r in RULES}
_ARITY.update({"axiom": 0, "naming₁": 2, "ST": -1})


# -- replay ---------------------------------------------------------------------------


def _node(rule: str, premises: Sequence[ProofNode], x, q: System) -> ProofNode:
    ps = [n.conclusion for n in premises]
    return ProofNode(rule, tuple(premises), tuple(obligations(rule, ps, x, q)), q)


def _replay_steps(steps: Sequence[TacticStep]) -> tuple[System, ProofNode]:
    node = ProofNode("axiom", (), (), System())
    for index, st in enumerate(steps):
        try:
            node = _extend(node, st)
        except TacticError as exc:
            d = exc.diagnostic.at_step(index)
            if st.span is not None and d.span is None:
                d = d.at_span(*st.span)
            raise TacticError(d) from None
    return node.conclusion, node


def _extend(node: ProofNode, st: TacticStep) -> ProofNode:
    s = node.conclusion
    k = st.kind
    if k is Kind.MERGE:
        try:
            sub, right = _replay_steps(st.script.steps)
        except TacticError as exc:
            d = exc.diagnostic
            raise TacticError(
                Diagnostic(d.code, d.rule, d.witness, f"in merged sub-script step {d.step}: {d.message}", span=d.span)
            ) from None
        return _node("naming₁", (node, right), None, tactics.merge(s, sub))
    q = tactics.apply_step(s, st)
    if k is Kind.CREATE_GENERAL:
        return _node("create⁺₁", (node,), st.args[0], q)
    if k is Kind.CREATE_INTERACTIVE:
        return _node("create⁺₂", (node,), st.args[0], q)
    if k is Kind.DELETE:
        c = st.args[0]
        return _node("delete⁺₂" if c in s.interactive else "delete⁺₁", (node,), c, q)
    if k is Kind.CONNECT:
        return _node("connect⁺", (node,), st.args, q)
    if k is Kind.DISCONNECT:
        return _node("disconnect⁺", (node,), st.args, q)
    if k is Kind.ALLOW:
        return _node("allowed⁺", (node,), st.args, q)
    if k is Kind.REVOKE:
        return _node("revoke⁺", (node,), st.args, q)
    if k is Kind.DESIGNATE:
        return _node("enhance⁺", (node,), st.args[0], q)
    if k is Kind.SIMPLIFY:
        return _node("healthiness", (node,), None, q)
    if k is Kind.SPLIT:
        return _node("naming₂", (node,), st.part, q)
    raise AssertionError(k)


def replay(script: Script | Sequence[TacticStep]) -> tuple[Judgment, ProofNode]:
    """Run ``script`` from the axiom, returning its judgment and proof tree.

    A script with an ``initial`` system first constructs that system with
    the synthesizer, so the tree still starts at the axiom.  The first
    failing step raises :class:`TacticError` annotated with its index.
    """
    if not isinstance(script, Script):
        script = Script(tuple(script))
    prefix: tuple[TacticStep, ...] = ()
    if script.initial is not None:
        from .synth import synthesize

        prefix = synthesize(script.initial).steps
    try:
        s, node = _replay_steps(prefix + script.steps)
    except TacticError as exc:
        d = exc.diagnostic
        raise TacticError(d.at_step(d.step - len(prefix))) from None
    return _entail(s), node


# -- verification ----------------------------------------------------------------------


def _reject(code: str, path: str, message: str, *extra: str) -> ProofError:
    return ProofError(Diagnostic(code, "verify", (path or "root",) + extra, message))


def _check_node(node: ProofNode, path: str) -> None:
    rule = node.rule
    if rule not in _ARITY or rule == "ST":
        raise _reject("bad-rule-application", path, f"{rule!r} is not an inference rule")
    if len(node.premises) != _ARITY[rule]:
        raise _reject(
            "bad-rule-application", path, f"{rule} takes {_ARITY[rule]} premise(s), got {len(node.premises)}"
        )
    ps = [p.conclusion for p in node.premises]
    q = node.conclusion
    if malformations(q):
        raise _reject("bad-rule-application", path, f"conclusion is not well formed: {malformations(q)[0].message}")
    if rule == "disconnect⁻":
        inner = node.premises[0]
        if inner.rule != "disconnect⁺" or inner.premises[0].conclusion != q:
            raise _reject(
                "bad-rule-application",
                path,
                "disconnect⁻ only undoes a disconnect⁺ whose premise already held the connection",
            )
    fitting = []
    for x in _candidates(rule, ps, q):
        if _conclude(rule, ps, x) == q:
            fitting.append(x)
            required = tuple(obligations(rule, ps, x, q))
            if required == node.facts:
                break
    else:
        if not fitting:
            raise _reject("bad-rule-application", path, f"conclusion does not follow from the premises by {rule}")
        required = tuple(obligations(rule, ps, fitting[0], q))
        missing = sorted(set(required) - set(node.facts))
        extra = sorted(set(node.facts) - set(required))
        witness = (missing or extra or ["duplicate fact"])[0]
        why = "missing" if missing else "unexpected"
        raise _reject("bad-fact", path, f"{why} side-condition fact for {rule}", witness)
    premise = ps[0] if ps else None
    for fact in node.facts:
        try:
            ok = facts.holds(fact, premise, q)
        except facts.FactSyntaxError:
            ok = False
        if not ok:
            raise _reject("bad-fact", path, f"fact does not hold: {fact}", fact)


def verify(tree: ProofNode) -> bool:
    """Check ``tree`` bottom-up; returns True or raises :class:`ProofError`."""

    def walk(node: ProofNode, path: str) -> None:
        for k, p in enumerate(node.premises):
            walk(p, f"{path}.{k}" if path else str(k))
        _check_node(node, path)

    walk(tree, "")
    return True


def judgment_of(tree: ProofNode) -> Judgment:
    """The root judgment of a tree, available only once the tree verifies."""
    verify(tree)
    return _entail(tree.conclusion)


# -- serialization ------------------------------------------------------------------------


def system_to_json(s: System) -> dict[str, Any]:
    return {
        "assumptions": {i: sorted(cs) for i, cs in sorted(s.allowed.items())},
        "components": sorted(s.components),
        "connections": [list(e) for e in sorted(s.connections)],
        "interactive": sorted(s.interactive),
        "enhancers": sorted(s.enhancers),
    }


def system_from_json(obj: Any) -> System:
    keys = {"assumptions", "components", "connections", "interactive", "enhancers"}
    if not isinstance(obj, dict) or set(obj) != keys:
        raise ValueError(f"conclusion must have exactly the fields {sorted(keys)}")
    for name in keys - {"assumptions", "connections"}:
        if not isinstance(obj[name], list) or not all(isinstance(x, str) for x in obj[name]):
            raise ValueError(f"{name} must be a list of names")
    if not all(isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e) for e in obj["connections"]):
        raise ValueError("connections must be a list of [from, to] pairs")
    a = obj["assumptions"]
    if not isinstance(a, dict) or not all(isinstance(v, list) for v in a.values()):
        raise ValueError("assumptions must map names to lists of names")
    return System(
        obj["components"],
        [tuple(e) for e in obj["connections"]],
        obj["interactive"],
        {i: v for i, v in a.items()},
        obj["enhancers"],
    )


def proof_to_json(node: ProofNode) -> dict[str, Any]:
    return {
        "rule": node.rule,
        "premises": [proof_to_json(p) for p in node.premises],
        "facts": sorted(node.facts),
        "conclusion": system_to_json(node.conclusion),
    }


def proof_from_json(obj: Any) -> ProofNode:
    try:
        if not isinstance(obj, dict) or set(obj) != {"rule", "premises", "facts", "conclusion"}:
            raise ValueError("a node has exactly the fields rule, premises, facts, conclusion")
        if not isinstance(obj["rule"], str) or not isinstance(obj["premises"], list):
            raise ValueError("rule must be a string and premises a list")
        if not isinstance(obj["facts"], list) or not all(isinstance(f, str) for f in obj["facts"]):
            raise ValueError("facts must be a list of strings")
        return ProofNode(
            obj["rule"],
            tuple(proof_from_json(p) for p in obj["premises"]),
            tuple(obj["facts"]),
            system_from_json(obj["conclusion"]),
        )
    except ValueError as exc:
        raise ProofError(Diagnostic("malformed-proof", "parse", ("json",), str(exc))) from None


def parse_proof(text: str) -> ProofNode:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofError(
            Diagnostic("malformed-proof", "parse", ("json",), f"invalid JSON: {exc.msg}", span=(exc.lineno, exc.colno))
        ) from None
    return proof_from_json(obj)


# -- rendering --------------------------------------------------------------------------


def _text(tree: ProofNode) -> str:
    rows: list[tuple[int, str, str]] = []

    def walk(node: ProofNode, depth: int) -> None:
        for p in node.premises:
            walk(p, depth + 1)
        rows.extend((depth + 1, f, "ST") for f in node.facts)
        rows.append((depth, format_judgment(node.conclusion), node.rule))

    walk(tree, 0)
    width = max(2 * d + len(t) for d, t, _ in rows)
    label = max(len(r) for _, _, r in rows)
    lines = [f"{('  ' * d + t).ljust(width)}  {r.rjust(label)}".rstrip() for d, t, r in rows]
    return "\n".join(lines) + "\n"


RENDERERS: dict[str, Callable[[ProofNode], str]] = {
    "text": _text,
    "json": lambda t: json.dumps(proof_to_json(t), indent=2, ensure_ascii=False) + "\n",
}


def render(tree: ProofNode, format: str = "text") -> str:
    try:
        return RENDERERS[format](tree)
    except KeyError:
        raise ValueError(f"unknown proof format {format!r}; expected one of {sorted(RENDERERS)}") from None
