"""Exact-rational simulation and bounded model checking of hybrid thermal systems."""

from .analysis import (
    CheckResult,
    Sample,
    Trace,
    find_earliest,
    model_check,
    simulate,
    timed_search,
    write_csv,
)
from .cases import builtin
from .engine import (
    Rule,
    RuleInstance,
    apply_rule,
    enabled_rules,
    normalize_discrete,
    step,
    tick,
    time_can_advance,
)
from .errors import (
    InconclusiveError,
    LivelockError,
    RoleMismatchError,
    SceneError,
    ThermflowError,
    UrgencyViolation,
    ValidationError,
)
from .ltl import parse_formula
from .model import Configuration, SystemState, validate
from .numeric import display, parse_rational, rat
from .physics import DEFAULT_CONSTANTS, PhysConstants
from .predicate import parse_predicate
from .scene import SceneDef, load_scene, parse_scene, serialize_scene

__version__ = "0.1.0"
