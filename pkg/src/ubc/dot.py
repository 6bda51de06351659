"""Graphviz rendering of a system."""

from __future__ import annotations

from .model import System, format_set


def export_dot(s: System, name: str = "system") -> str:
    """Directed graph text: interactive nodes double-circled and annotated
    with their allowed set, enhancers boxed.  Output order is canonical."""
    lines = [f'digraph "{name}" {{']
    for c in sorted(s.components):
        attrs = []
        if c in s.enhancers:
            attrs.append("shape=box")
            if c in s.interactive:
                attrs.append("peripheries=2")
        elif c in s.interactive:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        if c in s.interactive:
            attrs.append(f'xlabel="{format_set(s.allowed[c])}"')
        lines.append(f'  "{c}" [{", ".join(attrs)}];')
    for a, b in sorted(s.connections):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
