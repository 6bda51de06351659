"""Goal-directed construction.

A goal is satisfiable exactly when it meets the closure invariant: every
tactic preserves the invariant, so it is necessary, and the phase-ordered
strategy below always reaches a goal that meets it.

Strategy: create the interactive components, then the general ones, then
designate enhancers.  Connections follow in lexicographic order; just
before each one, every goal grant ``c ∈ A(i)`` whose holder will reach
``i`` once the edge is in place is issued.  The remaining grants come last.
Granting lazily matters: a grant issued before its holder is wired up
can block a later connection into the holder.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, Unsatisfiable
from .model import System, _search, closure_invariant, format_assumptions, format_judgment, malformations
from .proof import Script, replay
from .tactics import Kind, TacticStep


@dataclass(frozen=True)
class Goal:
    target: System


def synthesize(goal: Goal | System) -> Script:
    target = goal.target if isinstance(goal, Goal) else goal
    broken = malformations(target)
    if broken:
        d = broken[0]
        raise Unsatisfiable(Diagnostic("malformed-goal", "synthesize", d.witness, d.message))
    violations = closure_invariant(target)
    if violations:
        d = violations[0]
        raise Unsatisfiable(
            Diagnostic(
                "unsatisfiable",
                "synthesize",
                d.witness,
                f"no tactic sequence builds this goal: {d.message}",
            )
        )

    steps = [TacticStep(Kind.CREATE_INTERACTIVE, (i,)) for i in sorted(target.interactive)]
    steps += [TacticStep(Kind.CREATE_GENERAL, (c,)) for c in sorted(target.components - target.interactive)]
    steps += [TacticStep(Kind.DESIGNATE, (u,)) for u in sorted(target.enhancers)]

    granted = {i: {i} for i in target.interactive}
    wired: dict[str, set[str]] = {}
    for a, b in sorted(target.connections):
        wired.setdefault(a, set()).add(b)
        adjacency = {k: frozenset(v) for k, v in wired.items()}
        for i in sorted(target.interactive):
            for c in sorted(target.allowed[i] - granted[i]):
                if i in _search(adjacency, c):
                    steps.append(TacticStep(Kind.ALLOW, (i, c)))
                    granted[i].add(c)
        steps.append(TacticStep(Kind.CONNECT, (a, b)))
    for i in sorted(target.interactive):
        steps += [TacticStep(Kind.ALLOW, (i, c)) for c in sorted(target.allowed[i] - granted[i])]
    return Script(tuple(steps))


def explain(script: Script) -> list[str]:
    """One narrative entry per proof step, the axiom first.

    Each entry names the rule, lists the side conditions it discharged and
    shows the assumption set accumulated so far; the last entry states the
    contract for the finished system.
    """
    judgment, tree = replay(script)
    spine = tree.spine()
    entries = []
    for k, node in enumerate(spine):
        s = node.conclusion
        label = "start" if k == 0 else f"step {k}"
        text = f"{label}: {node.rule} gives {format_judgment(s)}"
        if node.rule == "naming₁":
            text += f" (merged with {format_judgment(node.premises[1].conclusion)})"
        if node.facts:
            text += "\n  discharged: " + "; ".join(node.facts)
        text += f"\n  assumptions: {format_assumptions(s.allowed)}"
        if k == len(spine) - 1:
            structure = format_judgment(s).split(" ⊨ ", 1)[1]
            text += (
                f"\n  contract: assuming the grants {format_assumptions(s.allowed)} are acceptable,"
                f" the system {structure} is usable"
            )
        entries.append(text)
    return entries
