"""Command-line front end: compile, fold, eval, trace, stream, and a stepping REPL."""

from __future__ import annotations

import argparse
import sys
from collections import deque
from dataclasses import dataclass

from .engine import EngineState, format_step_event
from .parser import ParseError, Program, format_clause, parse_program, parse_query
from .terms import Term, VarNaming, format_term, reset_fresh_vars, unify
from .transform import compile_triggers, fold_program, format_trigger_rule

EXIT_OK = 0
EXIT_LIMIT = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


@dataclass
class CliConfig:
    command: str
    input_path: str
    fold_enabled: bool = False
    max_steps: int | None = None
    max_facts: int | None = None
    limit: int | None = None
    query: str | None = None
    stats_enabled: bool = False
    first_arg_index: bool = False
    occurs_check: bool = False


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bulog",
        description="Bottom-up evaluation of pure positive Horn-clause programs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("compile", "print the trigger (implies) rules for a program"),
        ("fold", "print the program folded to <=2-literal bodies"),
        ("eval", "run to fixpoint and print the final fact store"),
        ("trace", "run and print one 'F adds [...]' line per step"),
        ("stream", "print answers one by one as they are derived"),
        ("repl", "interactive stepping session"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input_path", metavar="file.pl")
        p.add_argument("--fold", action="store_true", dest="fold_enabled",
                       help="fold wide bodies before compiling/running")
        p.add_argument("--max-steps", type=int, default=None, metavar="N")
        p.add_argument("--max-facts", type=int, default=None, metavar="N")
        p.add_argument("--limit", type=int, default=None, metavar="N",
                       help="stop streaming after N answers (stream only)")
        p.add_argument("--query", default=None, metavar="TERM",
                       help="only report facts unifying with TERM")
        p.add_argument("--stats", action="store_true", dest="stats_enabled")
        p.add_argument("--first-arg-index", action="store_true")
        p.add_argument("--occurs-check", action="store_true")
    return parser


def _load_program(cfg: CliConfig) -> Program:
    with open(cfg.input_path, encoding="utf-8") as f:
        src = f.read()
    program = parse_program(src)
    if cfg.fold_enabled:
        program = fold_program(program)
    return program


def _engine(cfg: CliConfig, program: Program) -> EngineState:
    return EngineState(compile_triggers(program),
                       occurs_check=cfg.occurs_check,
                       first_arg_index=cfg.first_arg_index)


def _parse_cli_query(cfg: CliConfig) -> Term | None:
    if cfg.query is None:
        return None
    try:
        return parse_query(cfg.query)
    except ParseError as exc:
        raise ParseError(f"in --query: {exc.message}", exc.line, exc.col) from exc


def cmd_compile(cfg: CliConfig) -> int:
    program = _load_program(cfg)
    for rule in compile_triggers(program).rules:
        print(format_trigger_rule(rule))
    return EXIT_OK


def cmd_fold(cfg: CliConfig) -> int:
    with open(cfg.input_path, encoding="utf-8") as f:
        program = parse_program(f.read())
    for clause in fold_program(program).clauses:
        print(format_clause(clause))
    return EXIT_OK


def cmd_eval(cfg: CliConfig) -> int:
    program = _load_program(cfg)
    query = _parse_cli_query(cfg)
    engine = _engine(cfg, program)
    store, stats, completed = engine.run(cfg.max_steps, cfg.max_facts)
    for fact in store.facts():
        if query is None or unify(fact, query) is not None:
            print(format_term(fact) + ".")
    if cfg.stats_enabled:
        for line in stats.lines():
            print(line)
    return EXIT_OK if completed else EXIT_LIMIT


def cmd_trace(cfg: CliConfig) -> int:
    program = _load_program(cfg)
    engine = _engine(cfg, program)
    steps_done = 0
    while True:
        if cfg.max_steps is not None and steps_done >= cfg.max_steps:
            completed = False
            break
        if cfg.max_facts is not None and engine.stats.facts_stored >= cfg.max_facts:
            completed = False
            break
        event = engine.step()
        if event is None:
            completed = True
            break
        steps_done += 1
        print(format_step_event(event))
    if completed:
        print("finished")
    if cfg.stats_enabled:
        for line in engine.stats.lines():
            print(line)
    return EXIT_OK if completed else EXIT_LIMIT


def cmd_stream(cfg: CliConfig) -> int:
    program = _load_program(cfg)
    query = _parse_cli_query(cfg)
    engine = _engine(cfg, program)
    naming = VarNaming()  # answers share one naming, like the on-demand trace
    yielded = 0
    for fact in engine.stream_answers(query, cfg.limit):
        print(format_term(fact, naming))
        yielded += 1
    if cfg.stats_enabled:
        for line in engine.stats.lines():
            print(line)
    limited = cfg.limit is not None and yielded == cfg.limit
    return EXIT_LIMIT if limited else EXIT_OK


_REPL_HELP = "commands: step, more [N], facts [pred/arity], stats, quit"


def cmd_repl(cfg: CliConfig, stdin=None) -> int:
    program = _load_program(cfg)
    query = _parse_cli_query(cfg)
    engine = _engine(cfg, program)
    stdin = stdin if stdin is not None else sys.stdin
    answer_naming = VarNaming()
    pending: deque[Term] = deque()  # query-matching facts not yet shown by `more`

    def absorb(added) -> None:
        for fact in added:
            if query is None or unify(fact, query) is not None:
                pending.append(fact)

    while True:
        print(f"bu[{engine.stats.steps}]> ", end="", flush=True)
        line = stdin.readline()
        if not line:
            print()
            return EXIT_OK
        words = line.split()
        if not words:
            continue
        cmd, args = words[0], words[1:]
        if cmd == "quit":
            return EXIT_OK
        elif cmd == "step":
            event = engine.step()
            if event is None:
                print("finished")
            else:
                print(format_step_event(event))
                absorb(event.added)
        elif cmd == "more":
            try:
                want = int(args[0]) if args else 1
            except ValueError:
                print(f"more: not a count: {args[0]}")
                continue
            shown = 0
            while shown < want:
                if pending:
                    print(format_term(pending.popleft(), answer_naming))
                    shown += 1
                    continue
                event = engine.step()
                if event is None:
                    print("no more answers")
                    break
                absorb(event.added)
        elif cmd == "facts":
            if args:
                name, _, arity = args[0].partition("/")
                if not arity.isdigit():
                    print(f"facts: expected pred/arity, got {args[0]}")
                    continue
                facts = engine.store.bucket((name, int(arity)))
            else:
                facts = engine.store.facts()
            for fact in facts:
                print(format_term(fact) + ".")
        elif cmd == "stats":
            for line_text in engine.stats.lines():
                print(line_text)
        else:
            print(f"unknown command: {cmd}; {_REPL_HELP}")


_COMMANDS = {
    "compile": cmd_compile,
    "fold": cmd_fold,
    "eval": cmd_eval,
    "trace": cmd_trace,
    "stream": cmd_stream,
}


def main(argv=None, stdin=None) -> int:
    parser = _build_arg_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = CliConfig(command=ns.command, input_path=ns.input_path,
                    fold_enabled=ns.fold_enabled, max_steps=ns.max_steps,
                    max_facts=ns.max_facts, limit=ns.limit, query=ns.query,
                    stats_enabled=ns.stats_enabled,
                    first_arg_index=ns.first_arg_index,
                    occurs_check=ns.occurs_check)
    reset_fresh_vars()  # identical invocations produce identical output
    try:
        if cfg.command == "repl":
            return cmd_repl(cfg, stdin=stdin)
        return _COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"{cfg.input_path}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"bulog: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
