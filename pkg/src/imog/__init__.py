"""Innovation Modeling Grid: an executable modeling language.

Models span five perspectives (strategy, functional, quality, structural,
domain knowledge) crossed with abstraction levels. This package loads and
saves them in a canonical document format, validates them, analyses feature
configurations, resolves structural variants, reports trace coverage, and
serves the whole thing over HTTP for interactive use.
"""

from .diagnostics import (
    Diagnostic,
    InvalidModelError,
    Severity,
    has_errors,
    sort_diagnostics,
)
from .document import (
    DocumentSyntaxError,
    DuplicateIdError,
    SchemaError,
    model_from_obj,
    model_to_obj,
    parse_document,
    serialize_document,
)
from .dot import EmptyPerspectiveError, export_dot
from .elements import (
    CONTEXT,
    COMPONENT,
    IMOG_VERSION,
    SYSTEM,
    AbstractionLevel,
    FpBlock,
    FpBlockKind,
    FpGroup,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    KnowledgeEntry,
    Model,
    Property,
    Requirement,
    SpBlock,
    SpRelation,
    StructuralModel,
    TraceKind,
    TraceLink,
)
from .fp import (
    BasicFeatureTree,
    CapExceededError,
    Configuration,
    DecisionState,
    EnumerationResult,
    PropagationResult,
    count_configurations,
    dead_blocks,
    enumerate_configurations,
    is_valid_configuration,
    is_void,
    normalize,
    propagate,
)
from .sp import (
    EffectiveBlock,
    IllegalSelectionError,
    Origin,
    SelectionState,
    check_sp_consistency,
    resolve_effective_block,
)
from .trace import (
    Predicate,
    TraceReport,
    UnknownFieldError,
    build_trace_report,
    query_requirements,
)
from .validate import (
    EmptyFilterError,
    NotFoundError,
    filter_by_abstraction_level,
    validate_model,
)

__version__ = "0.1.0"
