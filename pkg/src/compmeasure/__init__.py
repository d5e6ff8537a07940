"""Composition of probability measures on finite spaces.

Dense probability tables over small sets of discrete variables, the right
(``|>``) and left (``<|``) composition operators, perfect sequences and local
computation over decomposable coverings.
"""

from .compose import Op, anticipate, compose, compose_chain, compose_left, compose_right
from .errors import (
    CompositionError,
    DominanceViolation,
    NegativeEntry,
    NoBucket,
    NotDecomposable,
    NotNormalized,
    ParseError,
    ScopeMismatch,
    ScopeNotContained,
    ShapeMismatch,
    UndefinedSubexpression,
    ValidationError,
    ZeroEvidence,
)
from .local import (
    Covering,
    LocalState,
    assign_buckets,
    final_joint,
    final_row,
    run_procedure,
    verify_prefix_consistency,
)
from .measure import (
    Configuration,
    Measure,
    VariableTable,
    consistent,
    dominates,
    equal,
    is_extension_of,
    make_measure,
    make_scope,
    marginalize,
    max_diff,
    project,
    uniform,
    unit_measure,
)
from .model import Model, emit_measure, load_model, query_conditional
from .sequence import (
    ExchangeRule,
    MeasureSequence,
    RipOrdering,
    applicable_exchange_rules,
    find_rip_ordering,
    has_rip,
    is_perfect,
    is_perfect_by_definition,
    kellerer_sufficient,
    perfectize,
)

__version__ = "0.1.0"
