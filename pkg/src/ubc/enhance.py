"""Usability-enhancing components and the healthiness simplification.

Designating ``u`` records an external judgment that ``u`` is a verified
barrier.  :func:`simplify` then drops from each ``A(i)`` the components
whose every path into ``i`` passes through a single enhancer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import System, guard_for, guarded, reaches, require_component


@dataclass(frozen=True)
class EnhancerDesignation:
    component: str
    justification: str = ""


def designate(s: System, u: str | EnhancerDesignation) -> System:
    if isinstance(u, EnhancerDesignation):
        u = u.component
    require_component(s, "enhance⁺", u)
    return s.replace(enhancers=s.enhancers | {u})


def dominates(s: System, u: str, n: str, i: str) -> bool:
    """Does ``u`` lie on every ``n ~> i`` path (endpoints included)?

    False when ``n`` does not reach ``i`` at all, and for the degenerate
    pairs ``n == u`` or ``n == i``.
    """
    require_component(s, "dominates", u, n, i)
    return guarded(s, u, n, i)


def removable(s: System, i: str) -> frozenset[str]:
    """Members of ``A(i)`` that an enhancer shields and can be dropped."""
    out = set()
    for n in s.grants(i):
        if n == i or n in s.enhancers or not reaches(s, n, i):
            continue
        if guard_for(s, n, i) is not None:
            out.add(n)
    return frozenset(out)


def simplify(s: System) -> System:
    if not s.enhancers:
        return s
    allowed = {i: cs - removable(s, i) for i, cs in s.allowed.items()}
    return s.replace(allowed=allowed)
