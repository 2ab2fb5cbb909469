"""Bottom-up evaluation of pure positive Horn-clause programs.

Object rules are compiled into trigger rules; a schedule-driven semi-naive
loop then derives the least model one fact at a time, with subsumption
checking, streaming of answers, and an optional body-folding pre-pass.
"""

from .engine import (
    EngineState,
    EngineStats,
    FactStore,
    StepEvent,
    format_step_event,
    naive_fixpoint,
    solve_residual,
)
from .parser import (
    Clause,
    ParseError,
    Program,
    format_clause,
    format_program,
    parse_program,
    parse_query,
)
from .terms import (
    NIL,
    TRUE,
    Atom,
    Int,
    Struct,
    Term,
    Var,
    VarNaming,
    format_term,
    fresh_var,
    is_instance_of,
    is_variant,
    make_list,
    pred_key,
    rename_fresh,
    rename_fresh_all,
    reset_fresh_vars,
    substitute,
    unify,
    variables_of,
)
from .transform import (
    GensymState,
    TriggerProgram,
    TriggerRule,
    body_deletions,
    compile_triggers,
    fold_clause,
    fold_program,
    format_trigger_rule,
)

__version__ = "0.1.0"
