"""Structured side-condition violations and the exceptions that carry them."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Diagnostic:
    """A violated condition together with the concrete witness that violates it.

    ``code`` is a stable kebab-case identifier (``access-violation``,
    ``not-isolated`` ...), ``rule`` names the rule or tactic that was being
    applied and ``witness`` lists the components, edges or facts involved.
    """

    code: str
    rule: str
    witness: tuple[str, ...]
    message: str
    step: int | None = None
    span: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not self.witness:
            raise ValueError(f"diagnostic {self.code!r} needs at least one witness")
        object.__setattr__(self, "witness", tuple(self.witness))

    def at_step(self, step: int) -> Diagnostic:
        return replace(self, step=step)

    def at_span(self, line: int, column: int) -> Diagnostic:
        return replace(self, span=(line, column))

    def render(self, source: str | None = None) -> str:
        prefix = ""
        if source is not None:
            prefix = f"{source}:"
            if self.span is not None:
                prefix += f"{self.span[0]}:{self.span[1]}:"
            prefix += " "
        elif self.span is not None:
            prefix = f"{self.span[0]}:{self.span[1]}: "
        where = f" (step {self.step})" if self.step is not None else ""
        return (
            f"{prefix}error[{self.code}] in {self.rule}{where}: {self.message}"
            f" [witness: {', '.join(self.witness)}]"
        )

    def __str__(self) -> str:
        return self.render()


class KernelError(Exception):
    """Base class; every failure in this package carries a :class:`Diagnostic`."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class TacticError(KernelError):
    """A tactic's side condition does not hold on the given system."""


class ProofError(KernelError):
    """A proof tree does not check."""


class ParseError(KernelError):
    """A DSL document is syntactically or semantically invalid."""


class Unsatisfiable(KernelError):
    """No tactic sequence can construct the requested goal."""
