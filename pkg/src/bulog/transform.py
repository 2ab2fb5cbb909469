"""Compile object rules into trigger rules, and fold wide bodies down to two literals.

A trigger rule fires when its trigger literal arrives as a newly derived fact;
the residual literals are then checked against the fact store. Object facts
become rules triggered by the distinguished seed constant ``true``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .parser import Clause, Program
from .terms import (
    TRUE,
    Atom,
    Struct,
    Term,
    Var,
    VarNaming,
    format_term,
    pred_key,
    rename_fresh_all,
    variables_of,
)


@dataclass(frozen=True)
class TriggerRule:
    """trigger + residual => head; residual keeps the original literal order."""

    trigger: Term
    residual: tuple[Term, ...]
    head: Term


@dataclass
class TriggerProgram:
    """Trigger rules in object-program order, indexed by trigger predicate key."""

    rules: list[TriggerRule]
    index: dict[tuple[str, int], list[int]]


@dataclass
class GensymState:
    """Source of fresh predicate names for folding; skips reserved symbols."""

    counter: int = 0
    prefix: str = "_$Tmp"
    reserved: frozenset[str] = frozenset()

    def next_name(self) -> str:
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in self.reserved:
                return name


def body_deletions(body) -> list[tuple[Term, list[Term]]]:
    """All n ways to select one literal from an n-literal body, in order."""
    body = list(body)
    return [(body[i], body[:i] + body[i + 1:]) for i in range(len(body))]


def compile_triggers(program: Program) -> TriggerProgram:
    """One seed rule per fact, one trigger rule per (clause, body literal) pair.

    Every rule is renamed apart so firing one never binds another's variables.
    """
    rules: list[TriggerRule] = []
    for clause in program.clauses:
        if not clause.body:
            head, = rename_fresh_all([clause.head])
            rules.append(TriggerRule(TRUE, (), head))
            continue
        for selected, residual in body_deletions(clause.body):
            trigger, head, *rest = rename_fresh_all([selected, clause.head, *residual])
            rules.append(TriggerRule(trigger, tuple(rest), head))
    index: dict[tuple[str, int], list[int]] = {}
    for pos, rule in enumerate(rules):
        key = pred_key(rule.trigger)
        assert key is not None  # parser rejects variable/integer literals
        index.setdefault(key, []).append(pos)
    return TriggerProgram(rules, index)


def _symbols(t: Term, out: set[str]) -> None:
    if isinstance(t, Atom):
        out.add(t.name)
    elif isinstance(t, Struct):
        out.add(t.functor)
        for a in t.args:
            _symbols(a, out)


def program_symbols(program: Program) -> set[str]:
    """Every atom and functor name appearing anywhere in the program."""
    out: set[str] = set()
    for clause in program.clauses:
        _symbols(clause.head, out)
        for lit in clause.body:
            _symbols(lit, out)
    return out


def fold_clause(clause: Clause,
                gensym: GensymState) -> tuple[Clause, Clause] | None:
    """Split off the tail of a >2-literal body behind a fresh predicate.

    ``h :- l1, t1, ..., tm`` becomes ``h :- l1, mid(...)`` plus
    ``mid(...) :- t1, ..., tm``; the fresh head carries the variables shared
    between {head, l1} and the tail, in first-occurrence order over the
    original clause. Returns None when the body already has <= 2 literals.
    Both output clauses are renamed apart.
    """
    if len(clause.body) <= 2:
        return None
    first, tail = clause.body[0], clause.body[1:]
    outer_ids = {v.id for t in (clause.head, first) for v in variables_of(t)}
    tail_ids = {v.id for t in tail for v in variables_of(t)}
    shared_ids = outer_ids & tail_ids
    shared: list[Var] = []
    for t in (clause.head, first, *tail):
        for v in variables_of(t):
            if v.id in shared_ids and all(u.id != v.id for u in shared):
                shared.append(v)
    name = gensym.next_name()
    mid: Term = Struct(name, tuple(shared)) if shared else Atom(name)
    rep_head, rep_first, rep_mid = rename_fresh_all([clause.head, first, mid])
    rem_mid, *rem_tail = rename_fresh_all([mid, *tail])
    return (Clause(rep_head, (rep_first, rep_mid)),
            Clause(rem_mid, tuple(rem_tail)))


def fold_program(program: Program, gensym: GensymState | None = None) -> Program:
    """Fold until every clause body has <= 2 literals.

    Remainders are re-queued at the front, so the chain a wide clause expands
    into stays contiguous in the output. When no GensymState is given, a fresh
    one is used that avoids every symbol of this program; pass a shared state
    to keep names unique across several folds.
    """
    if gensym is None:
        gensym = GensymState(reserved=frozenset(program_symbols(program)))
    work = deque(program.clauses)
    out: list[Clause] = []
    while work:
        clause = work.popleft()
        folded = fold_clause(clause, gensym)
        if folded is None:
            out.append(clause)
        else:
            replacement, remainder = folded
            out.append(replacement)
            work.appendleft(remainder)
    return Program(out)


def format_trigger_rule(rule: TriggerRule) -> str:
    """``implies(Trigger,Head).`` or ``implies(Trigger,Head) :- R1, ..., Rk.``"""
    naming = VarNaming()
    text = (f"implies({format_term(rule.trigger, naming)},"
            f"{format_term(rule.head, naming)})")
    if rule.residual:
        text += " :- " + ", ".join(format_term(b, naming) for b in rule.residual)
    return text + "."
