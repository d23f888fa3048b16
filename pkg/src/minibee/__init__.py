"""minibee: a miniature analysis workbench for guarded-event abstract
systems — parse, compose, animate, model-check, refinement-check, and
discharge proof obligations at finite scope."""

from .animator import (
    AnimationLog,
    Session,
    fire,
    new_session,
    random_animate,
    reduced_view,
    step_options,
    undo,
)
from .composer import compose, compose_all
from .errors import (
    AlphabetError,
    CorpusCorrupt,
    DuplicateError,
    EmptyHistory,
    EventClash,
    IllegalChoice,
    InitError,
    MinibeeError,
    PropertyViolation,
    ScopeError,
    SharedInitConflict,
    SpecSyntaxError,
    SpecTypeError,
    StateSpaceTooLarge,
    TypeClash,
    UnresolvedConstant,
    WellDefinednessError,
)
from .evaluator import (
    apply_event,
    enabled_bindings,
    eval_expr,
    eval_pred,
    initial_state,
    resolve_constants,
    typed_state_count,
    typed_state_space,
)
from .explorer import (
    CBCResult,
    CoverageReport,
    DeadlockDiagnosis,
    ExploreLimits,
    StateGraph,
    check_invariant_pointwise,
    constraint_based_check,
    coverage_report,
    explore,
    find_deadlocks,
)
from .parser import parse_system
from .po import (
    DischargeResult,
    ProofObligation,
    discharge_all,
    discharge_bounded,
    generate_pos,
)
from .printer import render_system
from .refiner import RefinementReport, check_refinement, traces_to_depth
from .syntax import AbstractSystem, EventDef
from .values import Binding, Elem, FinSet, Scope, SysState

__version__ = "0.1.0"
