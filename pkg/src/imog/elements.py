"""Core element types of the Innovation Modeling Grid.

A model spans five perspectives (strategy, functional, quality, structural,
domain knowledge) crossed with abstraction levels. Every element is a frozen
dataclass; analyses build derived views and never mutate a loaded model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

# Element ids are free-form non-empty strings, unique across the whole model.
ElementId = str

# Property and identifiable-element values: plain JSON scalars.
Scalar = Union[int, float, str, bool]


# ---------------------------------------------------------------------------
# Abstraction levels

@dataclass(frozen=True)
class AbstractionLevel:
    """Vertical axis of the grid: Context, System, Component, or a custom name."""

    name: str

    @property
    def is_custom(self) -> bool:
        return self.name not in PREDEFINED_LEVEL_NAMES


CONTEXT = AbstractionLevel("Context")
SYSTEM = AbstractionLevel("System")
COMPONENT = AbstractionLevel("Component")

PREDEFINED_LEVEL_NAMES = ("Context", "System", "Component")


# ---------------------------------------------------------------------------
# Shared scraps

@dataclass(frozen=True)
class Property:
    """Named value with an optional unit. An empty unit means unitless."""

    name: str
    value: Scalar
    unit: str = ""


# Predefined property names with constrained value kinds.
PROP_AVAILABILITY = "Availability"   # timestamp string or calendar year
PROP_FEASIBILITY = "Feasibility"     # number in [0, 1]


@dataclass(frozen=True)
class IdentifiableElement:
    """Traceable snippet embedded in a strategy description."""

    id: ElementId
    category: str
    text: str
    value: Scalar | None = None
    discussion: tuple[str, ...] = ()
    version: str = ""


@dataclass(frozen=True)
class StrategyDiv:
    """Container for strategy content: textual goals, diagrams, free HTML."""

    name: str = ""
    html_content: str = ""
    embedded_elements: tuple[IdentifiableElement, ...] = ()


# ---------------------------------------------------------------------------
# Functional perspective

class FpBlockKind(str, Enum):
    FEATURE = "Feature"
    FUNCTION = "Function"


@dataclass(frozen=True)
class FpBlock:
    id: ElementId
    name: str
    kind: FpBlockKind
    level: AbstractionLevel
    custom_block_type: str = ""
    description: str = ""
    custom_properties: tuple[Property, ...] = ()
    user_stories: tuple[str, ...] = ()
    discussion: tuple[str, ...] = ()
    version: str = ""


class FpRelationKind(str, Enum):
    MANDATORY = "Mandatory"
    OPTIONAL = "Optional"
    ALTERNATIVE = "Alternative"
    OR = "Or"
    REQUIRE = "Require"
    EXCLUDE = "Exclude"
    CUSTOM_CONSTRAINT = "CustomConstraint"
    CUSTOM_1TO1 = "Custom1to1"
    VP_DERIVATION = "VpDerivation"
    CUSTOM_VP = "CustomVp"


# Kinds that form the feature tree itself.
PARENT_CHILD_KINDS = (
    FpRelationKind.MANDATORY,
    FpRelationKind.OPTIONAL,
    FpRelationKind.ALTERNATIVE,
    FpRelationKind.OR,
)

# Kinds that must connect exactly one child to the parent endpoint.
ONE_TO_ONE_KINDS = (
    FpRelationKind.MANDATORY,
    FpRelationKind.OPTIONAL,
    FpRelationKind.REQUIRE,
    FpRelationKind.EXCLUDE,
    FpRelationKind.CUSTOM_1TO1,
    FpRelationKind.VP_DERIVATION,
    FpRelationKind.CUSTOM_VP,
)

# Kinds carrying a user-defined relation type; stored but never analysed.
CUSTOM_KINDS = (
    FpRelationKind.CUSTOM_CONSTRAINT,
    FpRelationKind.CUSTOM_1TO1,
    FpRelationKind.CUSTOM_VP,
)

# Kinds whose endpoints are variation points rather than blocks.
VP_ENDPOINT_KINDS = (FpRelationKind.VP_DERIVATION, FpRelationKind.CUSTOM_VP)


class PcType(str, Enum):
    DECOMPOSITION = "Decomposition"
    REFINEMENT = "Refinement"


@dataclass(frozen=True)
class VariationPoint:
    """Named choice attached to an Alternative or Or relation.

    optionLabels align position-wise with the relation's children.
    """

    id: ElementId
    label: str
    option_labels: tuple[str, ...]


@dataclass(frozen=True)
class FpRelation:
    id: ElementId
    kind: FpRelationKind
    parent: ElementId
    children: tuple[ElementId, ...]
    pc_type: PcType | None = None
    cardinality: tuple[int, int] | None = None      # Or relations only
    variation_point: VariationPoint | None = None   # Alternative/Or only
    custom_type: str = ""                           # Custom* kinds only


@dataclass(frozen=True)
class FpGroup:
    """Block group; when applied it requires all members together."""

    id: ElementId
    members: tuple[ElementId, ...]
    enabled: bool = True


@dataclass(frozen=True)
class FunctionalModel:
    blocks: tuple[FpBlock, ...] = ()
    relations: tuple[FpRelation, ...] = ()
    groups: tuple[FpGroup, ...] = ()
    roots: tuple[ElementId, ...] = ()


# ---------------------------------------------------------------------------
# Quality perspective

@dataclass(frozen=True)
class FutureAvailability:
    """Either "Now" (year is None) or a calendar year. Now sorts first."""

    year: int | None = None

    @property
    def is_now(self) -> bool:
        return self.year is None

    def sort_key(self) -> tuple[int, int]:
        return (0, 0) if self.year is None else (1, self.year)


NOW = FutureAvailability(None)

# Predefined assignees; any other non-empty string is a custom assignee.
ASSIGNEE_OEM = "OEM"
ASSIGNEE_TIER1 = "Tier1"
ASSIGNEE_TIER2 = "Tier2"

# Predefined requirement stereotypes. The list is open; custom strings are fine.
REQUIREMENT_CATEGORY_STEREOTYPES = (
    "Quality Requirement",
    "Performance Requirement",
    "Technical Professional Guess",
    "User Need",
    "Constraint",
    "Safety Requirement",
    "Security Requirement",
    "Legal Constraint",
    "Technology Requirement",
)

# Status stereotypes; at most one may appear, absence means Confirmed.
STATUS_DISCARDED = "Discarded"
STATUS_PROPOSED = "Proposed"
STATUS_CONFIRMED = "Confirmed"
STATUS_STEREOTYPES = (STATUS_DISCARDED, STATUS_PROPOSED, STATUS_CONFIRMED)


@dataclass(frozen=True)
class Requirement:
    id: ElementId
    name: str
    text: str
    satisfiability: float                 # degree of fulfilment in [0, 1]
    level: AbstractionLevel
    future_availability: FutureAvailability = NOW
    priority: int | None = None           # 1 = most important
    stereotypes: tuple[str, ...] = ()
    assignee: str = ""                    # OEM/Tier1/Tier2 or custom; "" = unset
    parent: ElementId | None = None
    parent_type: PcType | None = None
    targets: tuple[ElementId, ...] = ()   # constrained functional/structural blocks
    custom_attributes: tuple[Property, ...] = ()
    reasoning: str = ""
    discussion: tuple[str, ...] = ()
    version: str = ""

    @property
    def status(self) -> str:
        for s in self.stereotypes:
            if s in STATUS_STEREOTYPES:
                return s
        return STATUS_CONFIRMED


# ---------------------------------------------------------------------------
# Structural perspective

SP_BLOCK_STEREOTYPES = (
    "Environment",
    "Innovation",
    "Logic",
    "Service",
    "Part",
    "Hardware",
    "Software",
)

REFINEMENT_STEREOTYPES = ("Technology", "MissionProfile", "Application")


@dataclass(frozen=True)
class SolutionSpaceDescription:
    """Opaque behavioural payload plus declared input/output property names."""

    payload: str = ""
    input_properties: tuple[str, ...] = ()
    output_properties: tuple[str, ...] = ()

    def declared_names(self) -> frozenset[str]:
        return frozenset(self.input_properties) | frozenset(self.output_properties)


@dataclass(frozen=True)
class RefinementBlock:
    """One concrete realisation inside a refinement group."""

    id: ElementId
    name: str
    description: str = ""
    stereotype: str = ""   # Technology, MissionProfile, Application, or custom
    properties: tuple[Property, ...] = ()
    refinement_groups: tuple[RefinementGroup, ...] = ()
    discussion: tuple[str, ...] = ()
    version: str = ""


@dataclass(frozen=True)
class RefinementGroup:
    """Non-empty set of refinement blocks with an optional selection marker."""

    id: ElementId
    name: str
    blocks: tuple[RefinementBlock, ...]
    selected_refinement: ElementId | None = None


class SpRelationKind(str, Enum):
    CHANNEL = "Channel"
    ARROW = "Arrow"
    EFFECT = "Effect"


class Direction(str, Enum):
    UNIDIRECTIONAL = "Unidirectional"
    BIDIRECTIONAL = "Bidirectional"


class EffectType(str, Enum):
    DESIRED = "Desired"
    UNDESIRED = "Undesired"
    MISUSE = "Misuse"


@dataclass(frozen=True)
class SpRelation:
    id: ElementId
    kind: SpRelationKind
    source: ElementId
    target: ElementId
    direction: Direction | None = None     # Arrow and Effect rows only
    label: str = ""
    description: str = ""
    stereotype: str = ""
    properties: tuple[Property, ...] = ()
    effect_type: EffectType | None = None  # Effect rows only
    endpoint_type: str = ""                # Effect rows only: thermal, acoustic, ...
    notes: tuple[str, ...] = ()
    discussion: tuple[str, ...] = ()
    version: str = ""


@dataclass(frozen=True)
class SpPackage:
    """Named grouping of structural elements inside a decomposition."""

    name: str
    elements: DecompositionModel


@dataclass(frozen=True)
class DecompositionModel:
    blocks: tuple[SpBlock, ...] = ()
    relations: tuple[SpRelation, ...] = ()
    packages: tuple[SpPackage, ...] = ()
    notes: tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return not (self.blocks or self.relations or self.packages or self.notes)


EMPTY_DECOMPOSITION = DecompositionModel()


@dataclass(frozen=True)
class SpBlock:
    id: ElementId
    name: str
    level: AbstractionLevel
    description: str = ""
    stereotype: str = ""   # Environment/Innovation/Logic/Service/Part/Hardware/Software or custom
    properties: tuple[Property, ...] = ()
    sse: SolutionSpaceDescription | None = None
    internal_model_ref: str = ""
    decomposition: DecompositionModel = EMPTY_DECOMPOSITION
    refinement_groups: tuple[RefinementGroup, ...] = ()
    variants: tuple[SpBlock, ...] = ()
    parent_block: ElementId | None = None   # set on variants: the owning block
    selected_variant: ElementId | None = None
    discussion: tuple[str, ...] = ()
    version: str = ""


@dataclass(frozen=True)
class StructuralModel:
    top_models: tuple[DecompositionModel, ...] = ()


# ---------------------------------------------------------------------------
# Domain knowledge perspective

@dataclass(frozen=True)
class KnowledgeEntry:
    id: ElementId
    name: str
    type: str
    year_of_availability: int | None = None
    properties: tuple[Property, ...] = ()


# ---------------------------------------------------------------------------
# Trace links

class TraceKind(str, Enum):
    REFERENCES = "References"
    CONSTRAINS = "Constrains"
    ALLOCATE = "Allocate"


@dataclass(frozen=True)
class TraceLink:
    id: ElementId
    kind: TraceKind
    source: ElementId
    target: ElementId


def constrains_link_id(requirement_id: ElementId, target_id: ElementId) -> ElementId:
    """Deterministic id for a Constrains link derived from a requirement target."""
    return f"constrains::{requirement_id}::{target_id}"


# ---------------------------------------------------------------------------
# The model

IMOG_VERSION = "1.4"


@dataclass(frozen=True)
class Model:
    imog_version: str = IMOG_VERSION
    strategy: tuple[StrategyDiv, ...] = ()
    functional: FunctionalModel = field(default_factory=FunctionalModel)
    quality: tuple[Requirement, ...] = ()
    structural: StructuralModel = field(default_factory=StructuralModel)
    knowledge: tuple[KnowledgeEntry, ...] = ()
    traces: tuple[TraceLink, ...] = ()


# ---------------------------------------------------------------------------
# Walkers. Document order throughout; nesting is physical, so "no element
# reachable from itself" reduces to model-wide id uniqueness.

def iter_structural(model: Model) -> Iterator[tuple[str, object]]:
    """Yield ("sp_block" | "sp_relation" | "refinement_group" | "refinement_block",
    element) pairs for every structural element, depth-first in document order."""
    for dm in model.structural.top_models:
        yield from _iter_decomposition(dm)


def _iter_decomposition(dm: DecompositionModel) -> Iterator[tuple[str, object]]:
    for block in dm.blocks:
        yield from _iter_sp_block(block)
    for rel in dm.relations:
        yield "sp_relation", rel
    for pkg in dm.packages:
        yield from _iter_decomposition(pkg.elements)


def _iter_sp_block(block: SpBlock) -> Iterator[tuple[str, object]]:
    yield "sp_block", block
    for group in block.refinement_groups:
        yield from _iter_refinement_group(group)
    yield from _iter_decomposition(block.decomposition)
    for variant in block.variants:
        yield from _iter_sp_block(variant)


def _iter_refinement_group(group: RefinementGroup) -> Iterator[tuple[str, object]]:
    yield "refinement_group", group
    for rb in group.blocks:
        yield "refinement_block", rb
        for nested in rb.refinement_groups:
            yield from _iter_refinement_group(nested)


def iter_sp_blocks(model: Model) -> Iterator[SpBlock]:
    for kind, element in iter_structural(model):
        if kind == "sp_block":
            yield element  # type: ignore[misc]


def iter_elements(model: Model) -> Iterator[tuple[str, str, ElementId, object]]:
    """Yield (perspective, kind, id, element) for every id-carrying element.

    Perspectives: strategy, functional, quality, structural, knowledge, trace.
    Variation points count as functional elements; they carry ids that
    derivation relations connect.
    """
    for div in model.strategy:
        for ie in div.embedded_elements:
            yield "strategy", "identifiable_element", ie.id, ie
    for block in model.functional.blocks:
        yield "functional", "fp_block", block.id, block
    for rel in model.functional.relations:
        yield "functional", "fp_relation", rel.id, rel
        if rel.variation_point is not None:
            yield "functional", "variation_point", rel.variation_point.id, rel.variation_point
    for group in model.functional.groups:
        yield "functional", "fp_group", group.id, group
    for req in model.quality:
        yield "quality", "requirement", req.id, req
    for kind, element in iter_structural(model):
        yield "structural", kind, element.id, element  # type: ignore[attr-defined]
    for entry in model.knowledge:
        yield "knowledge", "knowledge_entry", entry.id, entry
    for link in model.traces:
        yield "trace", "trace_link", link.id, link
