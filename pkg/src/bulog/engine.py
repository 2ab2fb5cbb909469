"""Semi-naive bottom-up evaluator: fact store, FIFO schedule, one fact per step.

Each step dequeues one derived fact, fires every trigger rule it matches,
solves the residual literals against the store as it stood when the step
began, and inserts whatever survives the subsumption check. Evaluation starts
by consuming the virtual seed ``true``, which fires all object facts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, fields
from typing import Iterator

from .parser import Program
from .terms import (
    TRUE,
    Atom,
    Int,
    Struct,
    Subst,
    Term,
    VarNaming,
    format_term,
    is_instance_of,
    pred_key,
    rename_fresh,
    rename_fresh_all,
    substitute,
    unify,
)
from .transform import TriggerProgram, compile_triggers


@dataclass
class EngineStats:
    facts_stored: int = 0
    facts_subsumed: int = 0
    rule_firings: int = 0
    residual_resolution_steps: int = 0
    steps: int = 0

    def lines(self) -> list[str]:
        return [f"{f.name}: {getattr(self, f.name)}" for f in fields(self)]


def _arg_key(t: Term):
    # Index key for a resolved first argument; None means "variable, matches
    # anything".
    if isinstance(t, Atom):
        return ("atom", t.name)
    if isinstance(t, Int):
        return ("int", t.value)
    if isinstance(t, Struct):
        return ("struct", t.functor, len(t.args))
    return None


class FactStore:
    """Predicate-indexed, insertion-ordered store of derived facts.

    A fact that is an instance of an earlier fact is never stored; the
    converse is allowed (a later, more general fact does not evict earlier
    instances unless eviction is explicitly requested).
    """

    def __init__(self, first_arg_index: bool = False):
        self.first_arg_index = first_arg_index
        self.buckets: dict[tuple[str, int], list[Term]] = {}
        self._by_arg: dict[tuple[str, int], dict[object, list[int]]] = {}
        self._var_first: dict[tuple[str, int], list[int]] = {}

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())

    def facts(self) -> Iterator[Term]:
        """All facts, grouped by predicate in first-insertion order."""
        for bucket in self.buckets.values():
            yield from bucket

    def bucket(self, key: tuple[str, int]) -> list[Term]:
        return self.buckets.get(key, [])

    def add(self, fact: Term) -> None:
        key = pred_key(fact)
        assert key is not None
        bucket = self.buckets.setdefault(key, [])
        pos = len(bucket)
        bucket.append(fact)
        if self.first_arg_index:
            self._index_one(key, fact, pos)

    def _index_one(self, key, fact: Term, pos: int) -> None:
        if not isinstance(fact, Struct):
            return
        akey = _arg_key(fact.args[0])
        if akey is None:
            self._var_first.setdefault(key, []).append(pos)
        else:
            self._by_arg.setdefault(key, {}).setdefault(akey, []).append(pos)

    def _reindex(self, key) -> None:
        self._by_arg.pop(key, None)
        self._var_first.pop(key, None)
        for pos, fact in enumerate(self.buckets.get(key, [])):
            self._index_one(key, fact, pos)

    def candidates(self, goal: Term) -> list[Term]:
        """Facts worth unifying with ``goal``, in insertion order.

        With first-argument indexing on, facts whose concrete first argument
        cannot match the goal's are skipped without an attempt.
        """
        key = pred_key(goal)
        bucket = self.buckets.get(key)
        if not bucket:
            return []
        if not (self.first_arg_index and isinstance(goal, Struct)):
            return bucket
        akey = _arg_key(goal.args[0])
        if akey is None:
            return bucket
        concrete = self._by_arg.get(key, {}).get(akey, [])
        anything = self._var_first.get(key, [])
        positions = sorted(concrete + anything)
        return [bucket[i] for i in positions]

    def subsumed(self, fact: Term, occurs_check: bool = False) -> bool:
        """True iff some stored fact generalizes ``fact`` (paper's stored check).

        ``fact`` must be renamed apart from store contents.
        """
        for stored in self.buckets.get(pred_key(fact), ()):
            if is_instance_of(fact, stored, occurs_check):
                return True
        return False

    def evict_instances_of(self, fact: Term,
                           occurs_check: bool = False) -> list[Term]:
        """Remove stored facts that are instances of ``fact``; returns them."""
        key = pred_key(fact)
        bucket = self.buckets.get(key)
        if not bucket:
            return []
        evicted = [g for g in bucket if is_instance_of(g, fact, occurs_check)]
        if evicted:
            self.buckets[key] = [g for g in bucket if g not in evicted]
            if self.first_arg_index:
                self._reindex(key)
        return evicted


def solve_residual(residual, store: FactStore, subst: Subst,
                   stats: EngineStats | None = None,
                   occurs_check: bool = False) -> list[Subst]:
    """All solutions of the conjunction over the store, left-to-right depth-first.

    Candidate facts are tried in insertion order and renamed fresh before each
    unification attempt; every attempt bumps ``residual_resolution_steps``.
    The store must not change while this runs (the engine inserts only after
    a step's firing has finished, which is what gives each step its snapshot
    view).
    """
    out: list[Subst] = []
    _solve(list(residual), store, subst, stats, occurs_check, out)
    return out


def _solve(lits, store, s, stats, occurs_check, out) -> None:
    if not lits:
        out.append(s)
        return
    goal = substitute(s, lits[0])
    rest = lits[1:]
    for fact in store.candidates(goal):
        if stats is not None:
            stats.residual_resolution_steps += 1
        s2 = unify(goal, rename_fresh(fact), s, occurs_check=occurs_check)
        if s2 is not None:
            _solve(rest, store, s2, stats, occurs_check, out)


@dataclass
class StepEvent:
    """What one step consumed, everything it inferred, and what was kept."""

    consumed: Term
    inferred: list[Term]
    added: list[Term]


def format_step_event(event: StepEvent) -> str:
    """Trace record: ``<consumed> adds [<added1>,...]`` with one naming per line."""
    naming = VarNaming()
    consumed = format_term(event.consumed, naming)
    added = ",".join(format_term(f, naming) for f in event.added)
    return f"{consumed} adds [{added}]"


class EngineState:
    """One evaluation in progress. Single-threaded; distinct states are independent."""

    def __init__(self, triggers: TriggerProgram, *, occurs_check: bool = False,
                 first_arg_index: bool = False, evict_subsumed: bool = False):
        self.triggers = triggers
        self.store = FactStore(first_arg_index=first_arg_index)
        self.schedule: deque[Term] = deque()
        self.seeded = False
        self.stats = EngineStats()
        self.occurs_check = occurs_check
        self.evict_subsumed = evict_subsumed

    @classmethod
    def from_program(cls, program: Program, **flags) -> "EngineState":
        return cls(compile_triggers(program), **flags)

    def at_fixpoint(self) -> bool:
        return self.seeded and not self.schedule

    def fire(self, trigger_fact: Term) -> list[Term]:
        """Heads inferred by consuming ``trigger_fact``; the store is untouched.

        Rules are tried in program order (via the predicate-key index); each
        matching rule contributes one head instance per residual solution,
        renamed fresh so the result is safe to store.
        """
        renamed = rename_fresh(trigger_fact)
        inferred: list[Term] = []
        for pos in self.triggers.index.get(pred_key(renamed), ()):
            rule = self.triggers.rules[pos]
            self.stats.rule_firings += 1
            s = unify(renamed, rule.trigger, occurs_check=self.occurs_check)
            if s is None:
                continue
            for sol in solve_residual(rule.residual, self.store, s,
                                      self.stats, self.occurs_check):
                inferred.append(rename_fresh(substitute(sol, rule.head)))
        return inferred

    def insert_batch(self, facts) -> list[Term]:
        """Store and schedule the non-subsumed facts, left to right.

        Facts stored earlier in the same batch already count for the
        subsumption check, so in-batch duplicates are dropped.
        """
        added: list[Term] = []
        for fact in facts:
            if self.store.subsumed(fact, occurs_check=self.occurs_check):
                self.stats.facts_subsumed += 1
                continue
            if self.evict_subsumed:
                for old in self.store.evict_instances_of(fact, self.occurs_check):
                    try:
                        self.schedule.remove(old)
                    except ValueError:
                        pass  # already consumed
            self.store.add(fact)
            self.schedule.append(fact)
            self.stats.facts_stored += 1
            added.append(fact)
        return added

    def step(self) -> StepEvent | None:
        """Consume one fact (the virtual seed first); None once at fixpoint."""
        if not self.seeded:
            self.seeded = True
            consumed: Term = TRUE
        elif self.schedule:
            consumed = self.schedule.popleft()
        else:
            return None
        inferred = self.fire(consumed)
        added = self.insert_batch(inferred)
        self.stats.steps += 1
        return StepEvent(consumed, inferred, added)

    def run(self, max_steps: int | None = None,
            max_facts: int | None = None) -> tuple[FactStore, EngineStats, bool]:
        """Step to fixpoint (completed=True) or until a limit trips (False).

        ``max_steps`` bounds the steps taken by this call; ``max_facts``
        bounds the total store size.
        """
        steps_done = 0
        while True:
            if max_steps is not None and steps_done >= max_steps:
                return self.store, self.stats, False
            if max_facts is not None and self.stats.facts_stored >= max_facts:
                return self.store, self.stats, False
            if self.step() is None:
                return self.store, self.stats, True
            steps_done += 1

    def stream_answers(self, query: Term | None = None,
                       limit: int | None = None) -> Iterator[Term]:
        """Lazily yield added facts (unifying with ``query`` when given).

        Driving stops at fixpoint or after ``limit`` yields; abandoning the
        iterator performs no further computation.
        """
        yielded = 0
        pending: deque[Term] = deque()
        while limit is None or yielded < limit:
            while not pending:
                event = self.step()
                if event is None:
                    return
                pending.extend(event.added)
            fact = pending.popleft()
            if query is None or unify(fact, query) is not None:
                yield fact
                yielded += 1


def naive_fixpoint(program: Program, max_rounds: int | None = None,
                   occurs_check: bool = False) -> tuple[FactStore, bool]:
    """Round-based immediate-consequence iteration over the original clauses.

    Deliberately naive (every clause, every round, full-body joins); used as
    an independent oracle for the trigger-rule engine.
    """
    store = FactStore()
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        rounds += 1
        derived: list[Term] = []
        for clause in program.clauses:
            head, *body = rename_fresh_all([clause.head, *clause.body])
            for sol in solve_residual(body, store, {}, None, occurs_check):
                derived.append(rename_fresh(substitute(sol, head)))
        progress = False
        for fact in derived:
            if not store.subsumed(fact, occurs_check=occurs_check):
                store.add(fact)
                progress = True
        if not progress:
            return store, True
    return store, False
