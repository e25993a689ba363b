"""Command-line runner and REPL.

    flp FILE GOAL                   evaluate GOAL with the suspension engine
    flp FILE -e GOAL --engine let   use the let-rewriting calculus
    flp FILE -e GOAL --compare      run every engine and diff the results
    flp [FILE]                      interactive session

Exit status: 0 when at least one answer was printed, 1 when there were no
answers, 2 on diagnostics.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import TextIO

from .corpus import FILES
from .desugar import desugar_rrt, load_program
from .engines import ENGINES, compare_engines, reduction_graph, run_engine
from .errors import DerivationNotFound, FlpError
from .letcalc import trace_derivation
from .search import SearchBounds
from .susp import solve
from .syntax import parse_expr, print_expr, read_resource
from .terms import Program, Rrt

EXIT_OK, EXIT_NO_ANSWERS, EXIT_DIAGNOSTIC = 0, 1, 2


@dataclass
class Options:
    engine: str = "susp"
    max_steps: int = 30
    max_states: int = 100_000
    max_answers: int = 100
    trace: bool = False
    rrt: bool = False

    @property
    def bounds(self) -> SearchBounds:
        return SearchBounds(self.max_steps, self.max_states)


def load_file(path: str | None, prelude: bool = True) -> Program:
    """Load ``path``; a bare name like ``coin.flp`` falls back to the bundled corpus."""
    if not path:
        return load_program("", prelude=prelude)
    file = Path(path)
    if not file.exists() and file.name == path and path in FILES:
        return load_program(read_resource(path), filename=path, prelude=prelude)
    return load_program(file.read_text(encoding="utf-8"), filename=path, prelude=prelude)


def parse_goal(text: str, program: Program, opts: Options):
    goal = parse_expr(text, program)
    if opts.rrt and not isinstance(goal, Rrt):
        goal = Rrt(goal)
    return goal


def evaluate(text: str, program: Program, opts: Options, out: TextIO) -> int:
    """Evaluate one goal and print its answers.  Returns the answer count."""
    goal, prog = desugar_rrt(parse_goal(text, program, opts), program)
    if opts.trace and opts.engine == "let":
        print(trace_derivation(goal, prog, opts.bounds).format(), file=out)
    if opts.engine == "susp":
        result = solve(goal, prog, opts.max_answers, opts.max_steps)
        for ans in result.answers:
            print(print_expr(ans.value), file=out)
            if opts.trace:
                steps = " ".join(f"{c.function}{'^rt' if c.rt else ''}#{c.susp_id}/{c.rule_index + 1}"
                                 for c in ans.branch_trace)
                print(f"  % {steps}", file=out)
        count, complete = len(result.answers), result.exhausted
    else:
        run = run_engine(opts.engine, goal, prog, opts.bounds, opts.max_answers)
        shown = run.values[: opts.max_answers]
        for v in shown:
            print(print_expr(v), file=out)
        count, complete = len(shown), run.complete and len(shown) == len(run.values)
    print("no more answers." if complete else "search bound reached.", file=out)
    return count


HELP = """commands:
  :load FILE                       load a program (the prelude is always present)
  :engine pop|let|susp             select the evaluation engine
  :trace on|off                    print derivations (let) or choice traces (susp)
  :bounds steps=N states=N answers=N
  :compare GOAL                    run all engines on GOAL
  :quit
anything else is evaluated as a goal"""


class Repl:
    def __init__(self, opts: Options, program: Program | None = None,
                 out: TextIO = sys.stdout, err: TextIO = sys.stderr):
        self.opts = opts
        self.program = program or load_file(None)
        self.out = out
        self.err = err

    def handle(self, line: str) -> bool:
        """Process one input line; ``False`` ends the session."""
        line = line.strip()
        if not line or line.startswith("%"):
            return True
        try:
            if line.startswith(":"):
                return self.command(line)
            evaluate(line, self.program, self.opts, self.out)
        except FlpError as exc:
            print(f"error: {exc}", file=self.err)
        except RecursionError:
            print("error: evaluation too deep; lower the step bound", file=self.err)
        return True

    def command(self, line: str) -> bool:
        cmd, _, arg = line.partition(" ")
        arg = arg.strip()
        if cmd in (":quit", ":q"):
            return False
        if cmd == ":help":
            print(HELP, file=self.out)
        elif cmd == ":load":
            try:
                self.program = load_file(arg)
            except OSError as exc:
                print(f"error: {exc}", file=self.err)
                return True
            print(f"loaded {arg}", file=self.out)
        elif cmd == ":engine":
            if arg not in ENGINES:
                print(f"error: unknown engine {arg!r}", file=self.err)
            else:
                self.opts.engine = arg
        elif cmd == ":trace":
            if arg not in ("on", "off"):
                print("error: use :trace on|off", file=self.err)
            else:
                self.opts.trace = arg == "on"
        elif cmd == ":bounds":
            self._bounds(arg)
        elif cmd == ":compare":
            goal = parse_goal(arg, self.program, self.opts)
            print(compare_engines(goal, self.program, self.opts.bounds).format(), file=self.out)
        else:
            print(f"error: unknown command {cmd} (try :help)", file=self.err)
        return True

    def _bounds(self, arg: str) -> None:
        names = {"steps": "max_steps", "states": "max_states", "answers": "max_answers"}
        updates = {}
        for item in arg.split():
            key, _, value = item.partition("=")
            if key not in names or not value.isdigit() or int(value) <= 0:
                print(f"error: bad bound {item!r}", file=self.err)
                return
            updates[names[key]] = int(value)
        self.opts = replace(self.opts, **updates)
        o = self.opts
        print(f"steps={o.max_steps} states={o.max_states} answers={o.max_answers}", file=self.out)

    def run(self, lines) -> None:
        for line in lines:
            if not self.handle(line):
                break

    def loop(self, stdin: TextIO = sys.stdin) -> None:
        interactive = stdin.isatty()
        while True:
            if interactive:
                print("flp> ", end="", file=self.out, flush=True)
            line = stdin.readline()
            if not line or not self.handle(line):
                break


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flp", description="Evaluate first-order functional "
                                 "logic programs with call-time and run-time choice.")
    ap.add_argument("file", nargs="?", help="program file (.flp)")
    ap.add_argument("goal", nargs="?", help="goal expression")
    ap.add_argument("-e", dest="expr", help="goal expression")
    ap.add_argument("--engine", choices=ENGINES, default="susp")
    ap.add_argument("--rrt", action="store_true", help="evaluate the goal as rrt(goal)")
    ap.add_argument("--max-steps", type=int, default=30)
    ap.add_argument("--max-states", type=int, default=100_000)
    ap.add_argument("--max-answers", type=int, default=100)
    ap.add_argument("--trace", action="store_true")
    ap.add_argument("--compare", action="store_true", help="run all engines and diff them")
    ap.add_argument("--dot", metavar="PATH", help="write the reduction graph (pop or let)")
    ap.add_argument("--no-prelude", action="store_true")
    return ap


def main(argv: list[str] | None = None, out: TextIO = sys.stdout,
         err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    for name in ("max_steps", "max_states", "max_answers"):
        if getattr(args, name) <= 0:
            print(f"error: --{name.replace('_', '-')} must be positive", file=err)
            return EXIT_DIAGNOSTIC
    opts = Options(args.engine, args.max_steps, args.max_states, args.max_answers,
                   args.trace, args.rrt)
    try:
        program = load_file(args.file, prelude=not args.no_prelude)
    except (FlpError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIAGNOSTIC
    goal_text = args.expr or args.goal
    if goal_text is None:
        Repl(opts, program, out, err).loop()
        return EXIT_OK
    try:
        if args.dot:
            engine = "let" if opts.engine == "susp" else opts.engine
            goal, prog = desugar_rrt(parse_goal(goal_text, program, opts), program)
            Path(args.dot).write_text(reduction_graph(goal, prog, engine, opts.bounds))
        if args.compare:
            report = compare_engines(parse_goal(goal_text, program, opts), program, opts.bounds,
                                     max_answers=max(opts.max_answers, 10_000))
            print(report.format(), file=out)
            return EXIT_OK if report.verdict == "PASS" else EXIT_NO_ANSWERS
        count = evaluate(goal_text, program, opts, out)
    except DerivationNotFound as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NO_ANSWERS
    except FlpError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIAGNOSTIC
    return EXIT_OK if count else EXIT_NO_ANSWERS


if __name__ == "__main__":
    sys.exit(main())
