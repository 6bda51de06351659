"""Command-line front end.

    ubc check <script> [--emit-proof FILE] [--text-proof FILE]
    ubc synth <goal> [-o SCRIPT]
    ubc simplify <system> [-o SYSTEM]
    ubc invariants <system>
    ubc render <system> --dot FILE
    ubc verify <proof.json>
    ubc explain <script>

Exit status: 0 success, 1 a checked failure (diagnostic printed on stderr),
2 a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import dsl, enhance
from .diagnostics import Diagnostic, KernelError
from .dot import export_dot
from .model import closure_invariant, format_judgment, malformations
from .proof import judgment_of, parse_proof, render, replay
from .synth import explain, synthesize


class _Failure(Exception):
    def __init__(self, diagnostic: Diagnostic, source: str | None = None):
        self.diagnostic = diagnostic
        self.source = source


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Failure(Diagnostic("file-not-found", "io", (path,), f"cannot read {path}: {exc.strerror}")) from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _load(path: str, kind: str):
    text = _read(path)
    try:
        return dsl.parse(dsl.SourceDocument(kind, text, path))
    except KernelError as exc:
        raise _Failure(exc.diagnostic, path) from None


def _replay(path: str):
    script = _load(path, "script")
    try:
        return replay(script)
    except KernelError as exc:
        raise _Failure(exc.diagnostic, path) from None


def cmd_check(args) -> int:
    judgment, tree = _replay(args.script)
    if args.emit_proof:
        _write(args.emit_proof, render(tree, "json"))
    if args.text_proof:
        _write(args.text_proof, render(tree, "text"))
    print(judgment)
    return 0


def cmd_explain(args) -> int:
    script = _load(args.script, "script")
    try:
        entries = explain(script)
    except KernelError as exc:
        raise _Failure(exc.diagnostic, args.script) from None
    print("\n".join(entries))
    return 0


def cmd_synth(args) -> int:
    goal = _load(args.goal, "goal")
    try:
        script = synthesize(goal)
    except KernelError as exc:
        raise _Failure(exc.diagnostic, args.goal) from None
    _write(args.output, dsl.print_script(script))
    return 0


def cmd_simplify(args) -> int:
    s = _load(args.system, "system")
    _write(args.output, dsl.print_system(enhance.simplify(s)))
    return 0


def cmd_invariants(args) -> int:
    s = _load(args.system, "system")
    problems = malformations(s) or closure_invariant(s)
    for d in problems:
        print(d.render(args.system), file=sys.stderr)
    if not problems:
        print(f"ok: {format_judgment(s)}")
    return 1 if problems else 0


def cmd_render(args) -> int:
    s = _load(args.system, "system")
    _write(args.dot, export_dot(s, Path(args.system).stem))
    return 0


def cmd_verify(args) -> int:
    text = _read(args.proof)
    try:
        judgment = judgment_of(parse_proof(text))
    except KernelError as exc:
        raise _Failure(exc.diagnostic, args.proof) from None
    print(f"verified: {judgment}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ubc", description="Usable-by-construction proof kernel.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="replay a script and print its judgment")
    p.add_argument("script")
    p.add_argument("--emit-proof", metavar="FILE", help="write the proof tree as JSON")
    p.add_argument("--text-proof", metavar="FILE", help="write the proof tree as text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("explain", help="narrate how a script builds its system")
    p.add_argument("script")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("synth", help="synthesize a script constructing a goal system")
    p.add_argument("goal")
    p.add_argument("-o", "--output", metavar="SCRIPT")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simplify", help="drop assumptions made redundant by enhancers")
    p.add_argument("system")
    p.add_argument("-o", "--output", metavar="SYSTEM")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("invariants", help="check well-formedness and the closure invariant")
    p.add_argument("system")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("render", help="export a system as a DOT graph")
    p.add_argument("system")
    p.add_argument("--dot", metavar="FILE", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="check a JSON proof tree from scratch")
    p.add_argument("proof")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print(exc.diagnostic.render(exc.source), file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
