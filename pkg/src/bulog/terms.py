"""First-order terms, substitutions, unification, and deterministic printing."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Var:
    """A logic variable. Identity is the numeric id; ``name`` is display-only."""

    id: int
    name: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Atom:
    """A symbolic constant, including the empty list ``[]``."""

    name: str


@dataclass(frozen=True)
class Int:
    """An integer constant. No arithmetic is ever performed on these."""

    value: int


@dataclass(frozen=True)
class Struct:
    """A compound term ``functor(arg1, ..., argN)`` with N >= 1."""

    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("compound terms need at least one argument")


Term = Var | Atom | Int | Struct

# A substitution maps variable ids to terms. Bindings may chain (var to var);
# `walk` follows chains, `substitute` resolves to fixpoint.
Subst = dict[int, Term]

NIL = Atom("[]")
TRUE = Atom("true")
CONS = "."

# itertools.count().__next__ is atomic under the GIL, which satisfies the
# "safely incrementable if shared" contract without locking.
_fresh_ids = itertools.count()


def fresh_var(name: str | None = None) -> Var:
    """Allocate a never-before-issued variable."""
    return Var(next(_fresh_ids), name)


def reset_fresh_vars() -> None:
    """Restart the id counter. Only safe when no earlier terms are still live."""
    global _fresh_ids
    _fresh_ids = itertools.count()


def make_list(items, tail: Term = NIL) -> Term:
    """Build the right-nested cons structure for ``[i1, ..., ik | tail]``."""
    out = tail
    for item in reversed(list(items)):
        out = Struct(CONS, (item, out))
    return out


def pred_key(t: Term) -> tuple[str, int] | None:
    """Functor/arity dispatch key; None for variables and integers."""
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Struct):
        return (t.functor, len(t.args))
    return None


def walk(t: Term, s: Subst) -> Term:
    """Follow variable bindings in ``s`` until an unbound var or non-var term."""
    while isinstance(t, Var):
        bound = s.get(t.id)
        if bound is None:
            return t
        t = bound
    return t


def substitute(s: Subst, t: Term) -> Term:
    """Apply ``s`` to ``t``, resolving chained bindings to fixpoint."""
    t = walk(t, s)
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(substitute(s, a) for a in t.args))
    return t


def _occurs(var: Var, t: Term, s: Subst) -> bool:
    t = walk(t, s)
    if isinstance(t, Var):
        return t.id == var.id
    if isinstance(t, Struct):
        return any(_occurs(var, a, s) for a in t.args)
    return False


def unify(t1: Term, t2: Term, subst: Subst | None = None,
          occurs_check: bool = False) -> Subst | None:
    """Most general unifier of ``t1`` and ``t2`` extending ``subst``, or None.

    Without the occurs check (the default, matching Prolog) a variable may be
    bound to a term containing it; `substitute` on such a binding would not
    terminate, so callers that enable cyclic programs are on their own.
    """
    s = {} if subst is None else dict(subst)
    if _unify(t1, t2, s, occurs_check):
        return s
    return None


def _unify(t1: Term, t2: Term, s: Subst, occurs_check: bool) -> bool:
    t1 = walk(t1, s)
    t2 = walk(t2, s)
    if isinstance(t1, Var):
        if isinstance(t2, Var) and t1.id == t2.id:
            return True
        if occurs_check and _occurs(t1, t2, s):
            return False
        s[t1.id] = t2
        return True
    if isinstance(t2, Var):
        if occurs_check and _occurs(t2, t1, s):
            return False
        s[t2.id] = t1
        return True
    if isinstance(t1, Atom):
        return isinstance(t2, Atom) and t1.name == t2.name
    if isinstance(t1, Int):
        return isinstance(t2, Int) and t1.value == t2.value
    if isinstance(t2, Struct):
        if t1.functor != t2.functor or len(t1.args) != len(t2.args):
            return False
        return all(_unify(a, b, s, occurs_check) for a, b in zip(t1.args, t2.args))
    return False


def _rename(t: Term, mapping: dict[int, Var]) -> Term:
    if isinstance(t, Var):
        v = mapping.get(t.id)
        if v is None:
            v = fresh_var(t.name)
            mapping[t.id] = v
        return v
    if isinstance(t, Struct):
        return Struct(t.functor, tuple(_rename(a, mapping) for a in t.args))
    return t


def rename_fresh(t: Term) -> Term:
    """Structurally identical copy with fresh variables; sharing is preserved."""
    return _rename(t, {})


def rename_fresh_all(terms) -> list[Term]:
    """Rename several terms with one shared mapping, preserving cross-term sharing."""
    mapping: dict[int, Var] = {}
    return [_rename(t, mapping) for t in terms]


def _collect_vars(t: Term, seen: dict[int, Var]) -> None:
    if isinstance(t, Var):
        seen.setdefault(t.id, t)
    elif isinstance(t, Struct):
        for a in t.args:
            _collect_vars(a, seen)


def variables_of(t: Term) -> list[Var]:
    """Distinct variables of ``t`` in first-occurrence order."""
    seen: dict[int, Var] = {}
    _collect_vars(t, seen)
    return list(seen.values())


def is_instance_of(specific: Term, general: Term,
                   occurs_check: bool = False) -> bool:
    """True iff ``specific`` is ``general`` under some binding of general's variables.

    The two terms must come from disjoint variable spaces (rename first).
    Implemented as unify-then-check: after unification every variable of
    ``specific`` must still resolve to a variable, all pairwise distinct.
    """
    s = unify(specific, general, occurs_check=occurs_check)
    if s is None:
        return False
    seen: set[int] = set()
    for v in variables_of(specific):
        r = walk(v, s)
        if not isinstance(r, Var) or r.id in seen:
            return False
        seen.add(r.id)
    return True


def is_variant(t1: Term, t2: Term) -> bool:
    """Mutual instances, i.e. equal up to variable renaming (disjoint spaces)."""
    return is_instance_of(t1, t2) and is_instance_of(t2, t1)


_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class VarNaming:
    """Display names for variables: A, B, ..., Z, A1, B1, ... by first use.

    One naming spans however much output should share names (a trace line,
    a printed clause, a whole answer stream).
    """

    def __init__(self) -> None:
        self._names: dict[int, str] = {}

    def name_of(self, v: Var) -> str:
        name = self._names.get(v.id)
        if name is None:
            k = len(self._names)
            name = _LETTERS[k % 26] + (str(k // 26) if k >= 26 else "")
            self._names[v.id] = name
        return name


_PLAIN_ATOM = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def atom_text(name: str) -> str:
    """Quote an atom when it is not a plain lowercase token."""
    if _PLAIN_ATOM.match(name) or name == "[]":
        return name
    return "'" + name.replace("'", "''") + "'"


def format_term(t: Term, naming: VarNaming | None = None) -> str:
    """Canonical text form: list sugar applied, no spaces, names via ``naming``."""
    if naming is None:
        naming = VarNaming()
    parts: list[str] = []
    _format(t, naming, parts)
    return "".join(parts)


def _format(t: Term, naming: VarNaming, out: list[str]) -> None:
    if isinstance(t, Var):
        out.append(naming.name_of(t))
    elif isinstance(t, Atom):
        out.append(atom_text(t.name))
    elif isinstance(t, Int):
        out.append(str(t.value))
    elif t.functor == CONS and len(t.args) == 2:
        _format_list(t, naming, out)
    else:
        out.append(atom_text(t.functor))
        out.append("(")
        for i, a in enumerate(t.args):
            if i:
                out.append(",")
            _format(a, naming, out)
        out.append(")")


def _format_list(t: Struct, naming: VarNaming, out: list[str]) -> None:
    out.append("[")
    _format(t.args[0], naming, out)
    tail = t.args[1]
    while isinstance(tail, Struct) and tail.functor == CONS and len(tail.args) == 2:
        out.append(",")
        _format(tail.args[0], naming, out)
        tail = tail.args[1]
    if tail != NIL:
        out.append("|")
        _format(tail, naming, out)
    out.append("]")
