"""Independent brute-force oracles used to compute expected test values.

Nothing here goes through unification or the engine's own matching code:
instance checks are done by enumerating ground instantiations, joins by
enumerating fact tuples with a one-way structural matcher.
"""

from __future__ import annotations

import itertools
import random

from bulog import (
    Atom,
    Clause,
    Program,
    Struct,
    Term,
    Var,
    format_term,
    fresh_var,
    variables_of,
)

UNIVERSE = (Atom("u1"), Atom("u2"), Atom("u3"))


def ground_with(t: Term, env: dict[int, Term]) -> Term:
    if isinstance(t, Var):
        return env[t.id]
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(ground_with(a, env) for a in t.args))
    return t


def ground_instances(t: Term, universe=UNIVERSE) -> set[str]:
    """Every instantiation of t's variables over the universe, as canonical text."""
    vs = variables_of(t)
    out = set()
    for combo in itertools.product(universe, repeat=len(vs)):
        env = {v.id: c for v, c in zip(vs, combo)}
        out.add(format_term(ground_with(t, env)))
    return out


def brute_is_instance(specific: Term, general: Term) -> bool:
    """specific is an instance of general iff its ground instances are a subset."""
    return ground_instances(specific) <= ground_instances(general)


def match_ground(pattern: Term, ground: Term, env: dict[int, Term]) -> bool:
    """One-way match of a pattern onto a ground term, extending env in place."""
    if isinstance(pattern, Var):
        bound = env.get(pattern.id)
        if bound is None:
            env[pattern.id] = ground
            return True
        return bound == ground
    if isinstance(pattern, Struct):
        return (isinstance(ground, Struct)
                and pattern.functor == ground.functor
                and len(pattern.args) == len(ground.args)
                and all(match_ground(p, g, env)
                        for p, g in zip(pattern.args, ground.args)))
    return pattern == ground


def brute_join(literals, facts) -> list[dict[int, Term]]:
    """All consistent assignments of ground facts to literals, in tuple order."""
    solutions = []
    for combo in itertools.product(facts, repeat=len(literals)):
        env: dict[int, Term] = {}
        if all(match_ground(lit, fact, env)
               for lit, fact in zip(literals, combo)):
            solutions.append(env)
    return solutions


def brute_shared_vars(head: Term, first: Term, tail) -> list[Var]:
    """Variables in both {head, first} and the tail, by first occurrence."""
    outer = {v.id for t in (head, first) for v in variables_of(t)}
    inner = {v.id for t in tail for v in variables_of(t)}
    both = outer & inner
    ordered: list[Var] = []
    for t in (head, first, *tail):
        for v in variables_of(t):
            if v.id in both and all(u.id != v.id for u in ordered):
                ordered.append(v)
    return ordered


def ground_fact_set(store) -> set[str]:
    """Canonical text of every stored fact; only meaningful for ground stores."""
    return {format_term(f) for f in store.facts()}


def random_ground_program(rng: random.Random) -> Program:
    """A small ground-Datalog program: <=4 predicates, <=8 facts, <=6 rules,
    bodies <=3, range-restricted heads."""
    preds = [(f"p{i}", rng.randint(0, 2)) for i in range(rng.randint(1, 4))]
    consts = [Atom(c) for c in "abcde"[: rng.randint(2, 5)]]

    def literal(name, arity, args):
        return Struct(name, tuple(args)) if arity else Atom(name)

    clauses: list[Clause] = []
    for _ in range(rng.randint(1, 8)):
        name, arity = rng.choice(preds)
        clauses.append(Clause(literal(name, arity,
                                      [rng.choice(consts) for _ in range(arity)])))
    for _ in range(rng.randint(0, 6)):
        pool = [fresh_var() for _ in range(3)]
        body = []
        for _ in range(rng.randint(1, 3)):
            name, arity = rng.choice(preds)
            args = [rng.choice(pool) if rng.random() < 0.6 else rng.choice(consts)
                    for _ in range(arity)]
            body.append(literal(name, arity, args))
        body_vars = [v for lit in body for v in variables_of(lit)]
        name, arity = rng.choice(preds)
        head_args = [rng.choice(body_vars) if body_vars and rng.random() < 0.7
                     else rng.choice(consts)
                     for _ in range(arity)]
        clauses.append(Clause(literal(name, arity, head_args), tuple(body)))
    rng.shuffle(clauses)
    return Program(clauses)
