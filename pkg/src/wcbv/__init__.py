"""Abstract machines and resource meters for the weak call-by-value lambda calculus."""

from .combined import BudgetExhausted, CombinedReport, Path, poly_p, run_combined, space_meter
from .heap_machine import (
    Closure,
    HeapEntry,
    HeapState,
    heap_lookup,
    heap_put,
    heap_step,
    run_heap,
    state_size_heap,
    unfold,
    unfolds_check,
)
from .programs import (
    APP,
    LAM,
    RET,
    compile_term,
    decompile,
    dump_program,
    jump_target,
    load_program,
    represents,
    size_program,
    split_body,
    subst_program,
)
from .subst_machine import Outcome, SubstState, initial_subst, run_subst, state_size, subst_step
from .syntax import ParseError, parse, show
from .terms import (
    App,
    DepthExceeded,
    Diverged,
    EvalReport,
    Family,
    Lam,
    NotClosed,
    Term,
    Var,
    bounded,
    church_bool,
    church_nat,
    closed,
    eval_bigstep,
    evaluate,
    gen_family,
    size_term,
    step,
    subst_term,
)
