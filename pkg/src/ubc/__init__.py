"""Usable-by-construction: a proof kernel for component systems whose every
construction step carries a checkable argument that the result is usable.
"""

from .diagnostics import Diagnostic, KernelError, ParseError, ProofError, TacticError, Unsatisfiable
from .enhance import EnhancerDesignation, designate, dominates, simplify
from .model import (
    Judgment,
    System,
    closure_invariant,
    downstream,
    reaches,
    upstream,
    well_formed,
)
from .proof import ProofNode, Script, render, replay, verify
from .synth import Goal, explain, synthesize
from .tactics import (
    Kind,
    TacticStep,
    allow,
    axiom,
    connect,
    create_general,
    create_interactive,
    delete,
    disconnect,
    merge,
    revoke,
    split,
    step,
)

__all__ = [
    "Diagnostic", "KernelError", "ParseError", "ProofError", "TacticError", "Unsatisfiable",
    "EnhancerDesignation", "designate", "dominates", "simplify",
    "Judgment", "System", "closure_invariant", "downstream", "reaches", "upstream", "well_formed",
    "ProofNode", "Script", "render", "replay", "verify",
    "Goal", "explain", "synthesize",
    "Kind", "TacticStep", "allow", "axiom", "connect", "create_general", "create_interactive",
    "delete", "disconnect", "merge", "revoke", "split", "step",
]
