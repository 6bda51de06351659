"""Line-oriented ``.ubc`` documents: system literals and tactic scripts.

System literal (also used for goals)::

    interactive A
    component G
    enhancer G
    allow A <- G
    edge G -> A

Script::

    create-interactive A
    create G
    allow A <- G
    connect G -> A
    disconnect G -> A
    revoke A -/- G
    delete G
    designate G
    simplify
    split A G          # keep {A, G}; the rest must be separable
    merge {            # replay the block and take the disjoint union
      create B
    }

One statement per line; ``#`` starts a comment.  Columns are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Diagnostic, ParseError
from .model import System, is_identifier, malformations
from .proof import Script
from .tactics import Kind, TacticStep

_TOKEN = re.compile(r"->|<-|-/-|[{}]|[A-Za-z0-9_]+(?:-[A-Za-z0-9_]+)*|\S")

KINDS = ("system", "script", "goal")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SourceDocument:
    kind: str
    text: str
    name: str = "<input>"


def tokenize(line: str, lineno: int) -> list[Token]:
    line = line.split("#", 1)[0]
    return [Token(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(line)]


def _error(code: str, tok: Token, message: str) -> ParseError:
    return ParseError(Diagnostic(code, "parse", (tok.text,), message, span=(tok.line, tok.column)))


class _Line:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def head(self) -> Token:
        return self.tokens[0]

    def _last(self) -> Token:
        return self.tokens[self.pos - 1] if self.pos else self.tokens[0]

    def ident(self) -> str:
        if self.pos >= len(self.tokens):
            t = self._last()
            raise _error("syntax-error", t, f"expected identifier after {t.text!r}")
        t = self.tokens[self.pos]
        if not is_identifier(t.text):
            raise _error("syntax-error", t, f"expected identifier, found {t.text!r}")
        self.pos += 1
        return t.text

    def expect(self, symbol: str) -> None:
        if self.pos >= len(self.tokens):
            t = self._last()
            raise _error("syntax-error", t, f"expected {symbol!r} after {t.text!r}")
        t = self.tokens[self.pos]
        if t.text != symbol:
            raise _error("syntax-error", t, f"expected {symbol!r}, found {t.text!r}")
        self.pos += 1

    def end(self) -> None:
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
            raise _error("syntax-error", t, f"unexpected {t.text!r} at end of statement")

    def rest_idents(self) -> list[str]:
        out = []
        while self.pos < len(self.tokens):
            out.append(self.ident())
        return out


def _lines(text: str) -> list[_Line]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        toks = tokenize(raw, n)
        if toks:
            out.append(_Line(toks))
    return out


# -- scripts ------------------------------------------------------------------------------

_BINARY = {
    "connect": (Kind.CONNECT, "->"),
    "disconnect": (Kind.DISCONNECT, "->"),
    "allow": (Kind.ALLOW, "<-"),
    "revoke": (Kind.REVOKE, "-/-"),
}
_UNARY = {
    "create": Kind.CREATE_GENERAL,
    "create-interactive": Kind.CREATE_INTERACTIVE,
    "delete": Kind.DELETE,
    "designate": Kind.DESIGNATE,
}


def _script_block(lines: list[_Line], start: int, nested: bool) -> tuple[list[TacticStep], int]:
    steps: list[TacticStep] = []
    k = start
    while k < len(lines):
        ln = lines[k]
        head = ln.head
        span = (head.line, head.column)
        word = head.text
        ln.pos = 1
        if word == "}":
            if not nested:
                raise _error("syntax-error", head, "unmatched '}'")
            ln.end()
            return steps, k + 1
        if word in _UNARY:
            steps.append(TacticStep(_UNARY[word], (ln.ident(),), span=span))
            ln.end()
        elif word in _BINARY:
            kind, arrow = _BINARY[word]
            a = ln.ident()
            ln.expect(arrow)
            b = ln.ident()
            ln.end()
            steps.append(TacticStep(kind, (a, b), span=span))
        elif word == "simplify":
            ln.end()
            steps.append(TacticStep(Kind.SIMPLIFY, span=span))
        elif word == "split":
            steps.append(TacticStep(Kind.SPLIT, part=frozenset(ln.rest_idents()), span=span))
        elif word == "merge":
            ln.expect("{")
            ln.end()
            inner, k = _script_block(lines, k + 1, nested=True)
            steps.append(TacticStep(Kind.MERGE, script=Script(tuple(inner)), span=span))
            continue
        else:
            raise _error("syntax-error", head, f"unknown statement {word!r}")
        k += 1
    if nested:
        t = lines[-1].tokens[-1] if lines else Token("merge", 1, 1)
        raise _error("syntax-error", t, "merge block is not closed with '}'")
    return steps, k


def parse_script(text: str) -> Script:
    steps, _ = _script_block(_lines(text), 0, nested=False)
    return Script(tuple(steps))


# -- system literals -----------------------------------------------------------------------


def parse_system(text: str) -> System:
    components: set[str] = set()
    interactive: set[str] = set()
    enhancers: set[str] = set()
    allowed: dict[str, set[str]] = {}
    edges: set[tuple[str, str]] = set()

    def known(name: str, tok: Token) -> None:
        if name not in components:
            raise _error("semantic-error", tok, f"{name} is not declared")

    for ln in _lines(text):
        head = ln.head
        ln.pos = 1
        word = head.text
        if word in ("interactive", "component"):
            tok = ln.tokens[1] if len(ln.tokens) > 1 else head
            name = ln.ident()
            ln.end()
            if name in components:
                raise _error("semantic-error", tok, f"{name} is declared twice")
            components.add(name)
            if word == "interactive":
                interactive.add(name)
                allowed[name] = {name}
        elif word == "enhancer":
            tok = ln.tokens[1] if len(ln.tokens) > 1 else head
            name = ln.ident()
            ln.end()
            known(name, tok)
            enhancers.add(name)
        elif word == "allow":
            tok = ln.tokens[1] if len(ln.tokens) > 1 else head
            i = ln.ident()
            ln.expect("<-")
            ctok = ln.tokens[ln.pos] if ln.pos < len(ln.tokens) else head
            c = ln.ident()
            ln.end()
            known(i, tok)
            known(c, ctok)
            if i not in interactive:
                raise _error("semantic-error", tok, f"allow target {i} is not declared interactive")
            allowed[i].add(c)
        elif word == "edge":
            tok = ln.tokens[1] if len(ln.tokens) > 1 else head
            a = ln.ident()
            ln.expect("->")
            btok = ln.tokens[ln.pos] if ln.pos < len(ln.tokens) else head
            b = ln.ident()
            ln.end()
            known(a, tok)
            known(b, btok)
            edges.add((a, b))
        else:
            raise _error("syntax-error", head, f"unknown declaration {word!r}")
    s = System(components, edges, interactive, allowed, enhancers)
    broken = malformations(s)
    if broken:  # pragma: no cover - the declarations above keep literals well formed
        d = broken[0]
        raise ParseError(Diagnostic("semantic-error", "parse", d.witness, d.message))
    return s


def parse(doc: SourceDocument) -> Script | System:
    if doc.kind == "script":
        return parse_script(doc.text)
    if doc.kind in ("system", "goal"):
        return parse_system(doc.text)
    raise ValueError(f"unknown document kind {doc.kind!r}; expected one of {KINDS}")


# -- canonical printing ---------------------------------------------------------------------


def print_system(s: System) -> str:
    lines = [f"interactive {i}" for i in sorted(s.interactive)]
    lines += [f"component {c}" for c in sorted(s.components - s.interactive)]
    lines += [f"enhancer {u}" for u in sorted(s.enhancers)]
    lines += [f"allow {i} <- {c}" for i, cs in sorted(s.allowed.items()) for c in sorted(cs) if c != i]
    lines += [f"edge {a} -> {b}" for a, b in sorted(s.connections)]
    return "".join(line + "\n" for line in lines)


def _print_steps(steps, indent: str) -> list[str]:
    out = []
    for st in steps:
        k = st.kind
        if k in (Kind.CONNECT, Kind.DISCONNECT, Kind.ALLOW, Kind.REVOKE):
            arrow = {Kind.CONNECT: "->", Kind.DISCONNECT: "->", Kind.ALLOW: "<-", Kind.REVOKE: "-/-"}[k]
            out.append(f"{indent}{k.value} {st.args[0]} {arrow} {st.args[1]}")
        elif k is Kind.SIMPLIFY:
            out.append(f"{indent}simplify")
        elif k is Kind.SPLIT:
            out.append(" ".join([f"{indent}split", *sorted(st.part)]))
        elif k is Kind.MERGE:
            out.append(f"{indent}merge {{")
            out += _print_steps(st.script.steps, indent + "  ")
            out.append(f"{indent}}}")
        else:
            out.append(f"{indent}{k.value} {st.args[0]}")
    return out


def print_script(script: Script) -> str:
    return "".join(line + "\n" for line in _print_steps(script.steps, ""))
