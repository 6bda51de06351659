"""Shared generators and brute-force oracles for the test-suite.

The oracles deliberately avoid the package's graph code: reachability is
decided by enumerating edge sequences, dominance by enumerating simple
paths.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from hypothesis import strategies as st

from ubc import System, TacticError
from ubc.proof import Script
from ubc.tactics import Kind, TacticStep, apply_step

AGH_STEPS = [
    ("create-interactive", "A"),
    ("create", "G"),
    ("create", "H"),
    ("allow", "A", "G"),
    ("allow", "A", "H"),
    ("connect", "G", "A"),
    ("connect", "H", "G"),
]

AGH_TEXT = """\
create-interactive A
create G
create H
allow A <- G
allow A <- H
connect G -> A
connect H -> G
"""

AGH = System(
    {"A", "G", "H"},
    {("G", "A"), ("H", "G")},
    {"A"},
    {"A": {"A", "G", "H"}},
)


def agh_script() -> Script:
    return Script(tuple(TacticStep(Kind(k), args) for k, *args in AGH_STEPS))


# -- oracles -------------------------------------------------------------------------


def walks_reach(s: System, a: str, b: str) -> bool:
    """Enumerate every edge sequence of length <= |C| starting at ``a``."""
    edges = sorted(s.connections)
    limit = max(len(s.components), 1)

    def go(x: str, depth: int) -> bool:
        if depth == limit:
            return False
        for u, v in edges:
            if u == x and (v == b or go(v, depth + 1)):
                return True
        return False

    return go(a, 0)


def simple_paths(s: System, a: str, b: str) -> Iterator[tuple[str, ...]]:
    """Every simple path from ``a`` to ``b`` with at least one edge."""
    edges = sorted(s.connections)

    def go(path: list[str]) -> Iterator[tuple[str, ...]]:
        x = path[-1]
        for u, v in edges:
            if u != x:
                continue
            if v == b:
                yield tuple(path + [v])
            elif v not in path:
                yield from go(path + [v])

    yield from go([a])


def oracle_dominates(s: System, u: str, n: str, i: str) -> bool:
    if n in (u, i):
        return False
    paths = list(simple_paths(s, n, i))
    return bool(paths) and all(u in p for p in paths)


def oracle_removed(s: System) -> dict[str, set[str]]:
    """What the healthiness simplification should drop, by path enumeration."""
    out = {}
    for i in s.interactive:
        out[i] = {
            n
            for n in s.allowed[i]
            if n != i
            and n not in s.enhancers
            and any(oracle_dominates(s, u, n, i) for u in s.enhancers)
        }
    return out


def oracle_closure_violations(s: System) -> set[tuple[str, str]]:
    out = set()
    for i in s.interactive:
        for c in s.components:
            if c == i or not walks_reach(s, c, i) or c in s.allowed[i]:
                continue
            if not any(oracle_dominates(s, u, c, i) for u in s.enhancers):
                out.add((c, i))
    return out


# -- random systems ---------------------------------------------------------------------


def names(n: int, prefix: str = "c") -> list[str]:
    return [f"{prefix}{k}" for k in range(n)]


def random_system(
    rng: random.Random,
    max_components: int = 10,
    *,
    edge_p: float | None = None,
    grant_p: float | None = None,
    enhancer_p: float = 0.0,
    prefix: str = "c",
    min_components: int = 0,
) -> System:
    n = rng.randint(min_components, max_components)
    cs = names(n, prefix)
    edge_p = rng.uniform(0.05, 0.35) if edge_p is None else edge_p
    grant_p = rng.uniform(0.2, 1.0) if grant_p is None else grant_p
    edges = {(a, b) for a in cs for b in cs if a != b and rng.random() < edge_p}
    interactive = {c for c in cs if rng.random() < 0.35}
    allowed = {i: {i} | {c for c in cs if rng.random() < grant_p} for i in interactive}
    enhancers = {c for c in cs if rng.random() < enhancer_p}
    return System(cs, edges, interactive, allowed, enhancers)


def close(s: System, rng: random.Random | None = None) -> System:
    """Add the grants the closure invariant demands (minimal but for extras)."""
    from ubc.model import guard_for, upstream

    allowed = {}
    for i in s.interactive:
        need = {c for c in upstream(s, i) if c == i or guard_for(s, c, i) is None}
        allowed[i] = set(s.allowed[i]) | need
    return s.replace(allowed=allowed)


def random_closed_goal(rng: random.Random, max_components: int = 20) -> System:
    s = random_system(rng, max_components, enhancer_p=rng.choice([0.0, 0.0, 0.15, 0.3]), grant_p=rng.uniform(0, 0.4))
    return close(s)


def random_open_goal(rng: random.Random, max_components: int = 20) -> System:
    from ubc.model import guard_for, upstream

    while True:
        s = random_closed_goal(rng, max_components)
        pairs = [
            (c, i)
            for i in sorted(s.interactive)
            for c in sorted(upstream(s, i) - {i})
            if guard_for(s, c, i) is None
        ]
        if pairs:
            c, i = rng.choice(pairs)
            return s.with_grants(i, s.allowed[i] - {c})


# -- random scripts -------------------------------------------------------------------------


def _random_step(rng: random.Random, s: System, pool: list[str], depth: int) -> TacticStep:
    cs = sorted(s.components)
    ints = sorted(s.interactive)
    pick = lambda xs: rng.choice(xs) if xs else rng.choice(pool)  # noqa: E731
    kind = rng.choices(
        list(Kind),
        weights=[4, 3, 2, 6, 2, 5, 2, 1, 1, 1 if depth == 0 else 0, 1],
    )[0]
    if kind in (Kind.CREATE_GENERAL, Kind.CREATE_INTERACTIVE, Kind.DELETE, Kind.DESIGNATE):
        if kind in (Kind.CREATE_GENERAL, Kind.CREATE_INTERACTIVE):
            return TacticStep(kind, (rng.choice(pool),))
        return TacticStep(kind, (pick(cs),))
    if kind in (Kind.CONNECT, Kind.DISCONNECT):
        if kind is Kind.DISCONNECT and s.connections and rng.random() < 0.8:
            return TacticStep(kind, rng.choice(sorted(s.connections)))
        return TacticStep(kind, (pick(cs), pick(cs)))
    if kind in (Kind.ALLOW, Kind.REVOKE):
        return TacticStep(kind, (pick(ints), pick(cs)))
    if kind is Kind.SIMPLIFY:
        return TacticStep(kind)
    if kind is Kind.SPLIT:
        part = {c for c in cs if rng.random() < 0.5}
        if rng.random() < 0.5:
            part = _closed_part(s, rng)
        return TacticStep(kind, part=frozenset(part))
    sub_pool = [f"m{rng.randrange(10**6)}x{k}" for k in range(4)]
    sub = random_script(rng, length=rng.randint(0, 6), pool=sub_pool, depth=depth + 1, valid_only=True)
    return TacticStep(kind, script=sub)


def _closed_part(s: System, rng: random.Random) -> set[str]:
    # union of random weakly connected groups (edges and grants both link)
    parent = {c: c for c in s.components}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    links = list(s.connections) + [(i, c) for i, cs in s.allowed.items() for c in cs]
    for a, b in links:
        parent[find(a)] = find(b)
    groups: dict[str, set[str]] = {}
    for c in s.components:
        groups.setdefault(find(c), set()).add(c)
    return set().union(*[g for g in groups.values() if rng.random() < 0.5])


def random_script(
    rng: random.Random,
    length: int = 50,
    pool: list[str] | None = None,
    depth: int = 0,
    valid_only: bool = False,
) -> Script:
    """A script of at most ``length`` steps built by trial against the tactics.

    Failed trials are normally discarded; unless ``valid_only`` the script
    may end on one failing step, which replay must then reject.
    """
    pool = pool or names(8)
    s = System()
    steps: list[TacticStep] = []
    attempts = 0
    while len(steps) < length and attempts < length * 20:
        attempts += 1
        candidate = _random_step(rng, s, pool, depth)
        try:
            s = apply_step(s, candidate)
        except TacticError:
            if not valid_only and rng.random() < 0.02:
                steps.append(candidate)
                break
            continue
        steps.append(candidate)
    return Script(tuple(steps))


# -- hypothesis strategies ---------------------------------------------------------------


@st.composite
def systems(draw, max_components: int = 6, enhancers: bool = True) -> System:
    n = draw(st.integers(0, max_components))
    cs = names(n)
    edges = draw(st.sets(st.tuples(st.sampled_from(cs), st.sampled_from(cs)), max_size=3 * n)) if n else set()
    interactive = draw(st.sets(st.sampled_from(cs))) if n else set()
    allowed = {i: {i} | (draw(st.sets(st.sampled_from(cs))) if n else set()) for i in sorted(interactive)}
    us = draw(st.sets(st.sampled_from(cs), max_size=2)) if (n and enhancers) else set()
    return System(cs, edges, interactive, allowed, us)


@st.composite
def closed_systems(draw, max_components: int = 6, enhancers: bool = True) -> System:
    return close(draw(systems(max_components, enhancers)))


def all_systems(cs: list[str]) -> Iterator[System]:
    """Every well-formed system over exactly the components ``cs``."""
    pairs = [(a, b) for a in cs for b in cs]
    for r in range(len(cs) + 1):
        for interactive in itertools.combinations(cs, r):
            grant_choices = [
                [frozenset({i, *extra}) for k in range(len(cs)) for extra in itertools.combinations([c for c in cs if c != i], k)]
                for i in interactive
            ]
            for grants in itertools.product(*grant_choices):
                allowed = dict(zip(interactive, grants))
                for ur in range(len(cs) + 1):
                    for us in itertools.combinations(cs, ur):
                        for mask in range(1 << len(pairs)):
                            edges = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
                            yield System(cs, edges, interactive, allowed, us)


# -- proof tampering -----------------------------------------------------------------------


def _swap_membership(fact: str) -> str:
    for a, b in (("∉", "∈"), ("∈", "∉"), ("≠", "="), ("⟹", "∧")):
        if a in fact:
            return fact.replace(a, b, 1)
    return "¬" + fact


def _system_variants(s: System) -> Iterator[System]:
    """Single-field perturbations of ``s``; each differs from ``s``."""
    cs = sorted(s.components)
    yield s.replace(components=s.components | {"Zz"})
    for c in cs:
        yield s.replace(components=s.components - {c})
        if c in s.enhancers:
            yield s.replace(enhancers=s.enhancers - {c})
        else:
            yield s.replace(enhancers=s.enhancers | {c})
    for e in sorted(s.connections):
        yield s.replace(connections=s.connections - {e})
    for a in cs:
        for b in cs:
            if (a, b) not in s.connections:
                yield s.replace(connections=s.connections | {(a, b)})
    for c in cs:
        if c in s.interactive:
            yield s.replace(interactive=s.interactive - {c})
        else:
            yield s.replace(interactive=s.interactive | {c})
    for i in sorted(s.interactive):
        for c in cs:
            yield s.with_grants(i, s.allowed[i] ^ {c})


def tree_mutations(tree, rules) -> Iterator[tuple[str, object]]:
    """Every single-point corruption of ``tree``: each rule name swapped for
    each other name, each fact dropped, negated or duplicated, an extra fact
    added, and each conclusion field perturbed."""
    from ubc.proof import ProofNode

    def rebuild(node, path, change):
        if not path:
            return change(node)
        k, *rest = path
        ps = list(node.premises)
        ps[k] = rebuild(ps[k], rest, change)
        return ProofNode(node.rule, tuple(ps), node.facts, node.conclusion)

    def nodes(node, path):
        yield path, node
        for k, p in enumerate(node.premises):
            yield from nodes(p, path + [k])

    for path, node in nodes(tree, []):
        where = ".".join(map(str, path)) or "root"
        for r in list(rules) + ["bogus"]:
            if r != node.rule:
                yield f"{where}: rule {node.rule} -> {r}", rebuild(
                    tree, path, lambda n, r=r: ProofNode(r, n.premises, n.facts, n.conclusion)
                )
        for k, f in enumerate(node.facts):
            fs = list(node.facts)
            for label, new in (
                ("drop", fs[:k] + fs[k + 1 :]),
                ("negate", fs[:k] + [_swap_membership(f)] + fs[k + 1 :]),
                ("duplicate", fs + [f]),
            ):
                yield f"{where}: {label} fact {f}", rebuild(
                    tree, path, lambda n, new=new: ProofNode(n.rule, n.premises, tuple(new), n.conclusion)
                )
        yield f"{where}: extra fact", rebuild(
            tree, path, lambda n: ProofNode(n.rule, n.premises, n.facts + ("Zz ∉ ∅",), n.conclusion)
        )
        for v in _system_variants(node.conclusion):
            yield f"{where}: conclusion {v}", rebuild(
                tree, path, lambda n, v=v: ProofNode(n.rule, n.premises, n.facts, v)
            )


# -- exhaustive enumeration up to renaming -------------------------------------------------


def relaxed_reach(s: System, start: str, blocked: str | None = None) -> set[str]:
    """Components reachable from ``start`` in one or more steps, never
    entering ``blocked``; computed by relaxing the edge list to a fixpoint."""
    out: set[str] = set()
    changed = True
    while changed:
        changed = False
        for a, b in s.connections:
            if (a == start or a in out) and a != blocked and b != blocked and b not in out:
                out.add(b)
                changed = True
    return out


def _key(s: System, m: dict[str, str]) -> tuple:
    return (
        tuple(sorted((m[a], m[b]) for a, b in s.connections)),
        tuple(sorted(m[i] for i in s.interactive)),
        tuple(sorted((m[i], tuple(sorted(m[c] for c in cs))) for i, cs in s.allowed.items())),
        tuple(sorted(m[u] for u in s.enhancers)),
    )


def canonical(s: System, pool: list[str]) -> System:
    """The representative of ``s`` up to renaming, over a prefix of ``pool``."""
    cs = sorted(s.components)
    target = pool[: len(cs)]
    edges, interactive, allowed, enhancers = min(
        _key(s, dict(zip(cs, p))) for p in itertools.permutations(target)
    )
    return System(target, edges, interactive, dict(allowed), enhancers)


def renamings(s: System) -> Iterator[System]:
    cs = sorted(s.components)
    for p in itertools.permutations(cs):
        m = dict(zip(cs, p))
        yield System(
            [m[c] for c in cs],
            [(m[a], m[b]) for a, b in s.connections],
            [m[i] for i in s.interactive],
            {m[i]: [m[c] for c in g] for i, g in s.allowed.items()},
            [m[u] for u in s.enhancers],
        )


def primitive_moves(pool: list[str]) -> list[TacticStep]:
    """Every step over ``pool`` except merge and split."""
    out = [
        TacticStep(k, (n,))
        for n in pool
        for k in (Kind.CREATE_GENERAL, Kind.CREATE_INTERACTIVE, Kind.DELETE, Kind.DESIGNATE)
    ]
    out += [
        TacticStep(k, (a, b))
        for a in pool
        for b in pool
        for k in (Kind.CONNECT, Kind.DISCONNECT, Kind.ALLOW, Kind.REVOKE)
    ]
    return out + [TacticStep(Kind.SIMPLIFY)]


def reachable_classes(pool: list[str], max_depth: int | None = None) -> dict[System, int]:
    """Breadth-first search over scripts, one state per renaming class.

    Maps each reached representative to the length of its shortest script.
    Without ``max_depth`` the search runs to its fixpoint.
    """
    moves = primitive_moves(pool)
    depth = {System(): 0}
    frontier = [System()]
    cache: dict[System, System] = {}
    d = 0
    while frontier and (max_depth is None or d < max_depth):
        d += 1
        nxt = []
        for s in frontier:
            for m in moves:
                try:
                    q = apply_step(s, m)
                except TacticError:
                    continue
                c = cache.get(q)
                if c is None:
                    c = cache[q] = canonical(q, pool)
                if c not in depth:
                    depth[c] = d
                    nxt.append(c)
        frontier = nxt
    return depth
