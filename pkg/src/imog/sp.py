"""Variant and refinement resolution for structural blocks.

A block may carry variant blocks (alternative realisations of the whole
block) and refinement groups (alternative realisations of single aspects).
Resolution folds one chosen variant chain and the selected refinements into
a single effective view. The merge applies, in order:

  1. the variant's name, description, level, stereotype, discussion and
     version replace the base's unconditionally,
  2. the variant's properties extend the base's, same names overwritten in
     place (first position kept),
  3. the behavioural description extends (inputs/outputs deduplicated,
     payloads joined) when base and variant share at most one declared
     property name, otherwise the variant's replaces the base's,
  4. decompositions are concatenated without any deduplication,
  5. refinement groups extend, a variant group replacing a base group of
     the same name in place,
  6. the selected refinement of every group overtakes the block properties,
     recursing into the refinement's own nested groups,
  7. a variant's own selected variant is folded into the variant first,
     recursively, before the variant is folded into the base.

Explicit selections override the selected variants and refinements stored in
the model. Every effective property remembers where its final value came
from (base, variant, or refinement).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .diagnostics import Diagnostic, make, sort_diagnostics
from .elements import (
    DecompositionModel,
    ElementId,
    Model,
    Property,
    RefinementBlock,
    RefinementGroup,
    SolutionSpaceDescription,
    SpBlock,
    SpPackage,
    SpRelation,
    TraceKind,
    iter_sp_blocks,
)
from .validate import NotFoundError


class IllegalSelectionError(ValueError):
    """A selection names a variant or refinement its owner does not offer."""

    def __init__(self, owner: ElementId, chosen: ElementId, offered: str):
        self.owner = owner
        self.chosen = chosen
        super().__init__(f"{chosen!r} is not a {offered} of {owner!r}")


class Origin(str, Enum):
    BASE = "Base"
    VARIANT = "Variant"
    REFINEMENT = "Refinement"


@dataclass(frozen=True)
class EffectiveProperty:
    name: str
    value: object
    unit: str
    origin: Origin

    def as_property(self) -> Property:
        return Property(self.name, self.value, self.unit)  # type: ignore[arg-type]


@dataclass(frozen=True)
class SelectionState:
    """Explicit choices: block id -> variant id, group id -> refinement id."""

    variant_choices: Mapping[ElementId, ElementId] = field(default_factory=dict)
    refinement_choices: Mapping[ElementId, ElementId] = field(default_factory=dict)


EMPTY_SELECTION = SelectionState()


@dataclass(frozen=True)
class EffectiveBlock:
    id: ElementId                       # always the base block's id
    name: str
    level: object
    description: str
    stereotype: str
    properties: tuple[EffectiveProperty, ...]
    sse: SolutionSpaceDescription | None
    decomposition: DecompositionModel
    refinement_groups: tuple[RefinementGroup, ...]   # selected markers made effective
    internal_model_refs: tuple[str, ...]             # most derived variant first
    provenance: tuple[ElementId, ...]                # base id, then applied variants
    discussion: tuple[str, ...]
    version: str

    def property_map(self) -> dict[str, EffectiveProperty]:
        return {p.name: p for p in self.properties}


# ---------------------------------------------------------------------------
# Selection legality

def _walk_groups(groups) -> list[RefinementGroup]:
    out: list[RefinementGroup] = []
    for group in groups:
        out.append(group)
        for rb in group.blocks:
            out.extend(_walk_groups(rb.refinement_groups))
    return out


def check_selection(model: Model, selection: SelectionState) -> None:
    """Raise unless every choice names an offered variant or refinement."""
    blocks = {b.id: b for b in iter_sp_blocks(model)}
    groups: dict[ElementId, RefinementGroup] = {}
    for block in blocks.values():
        for group in _walk_groups(block.refinement_groups):
            groups[group.id] = group
    for owner, chosen in selection.variant_choices.items():
        if owner not in blocks:
            raise NotFoundError(owner)
        if chosen not in {v.id for v in blocks[owner].variants}:
            raise IllegalSelectionError(owner, chosen, "variant")
    for group_id, chosen in selection.refinement_choices.items():
        if group_id not in groups:
            raise NotFoundError(group_id)
        if chosen not in {rb.id for rb in groups[group_id].blocks}:
            raise IllegalSelectionError(group_id, chosen, "refinement")


# ---------------------------------------------------------------------------
# The merge

@dataclass
class _Payload:
    """Mutable view of a (possibly merged) variant chain."""

    name: str
    description: str
    level: object
    stereotype: str
    discussion: tuple[str, ...]
    version: str
    properties: dict[str, Property]      # insertion order = first appearance
    sse: SolutionSpaceDescription | None
    d_blocks: list[SpBlock]
    d_relations: list[SpRelation]
    d_packages: list[SpPackage]
    d_notes: list[str]
    groups: dict[str, RefinementGroup]   # keyed by group NAME, insertion order
    refs: list[str]                      # most derived first
    trail: list[ElementId]


def _payload_of(block: SpBlock) -> _Payload:
    return _Payload(
        name=block.name,
        description=block.description,
        level=block.level,
        stereotype=block.stereotype,
        discussion=block.discussion,
        version=block.version,
        properties={p.name: p for p in block.properties},
        sse=block.sse,
        d_blocks=list(block.decomposition.blocks),
        d_relations=list(block.decomposition.relations),
        d_packages=list(block.decomposition.packages),
        d_notes=list(block.decomposition.notes),
        groups={g.name: g for g in block.refinement_groups},
        refs=[block.internal_model_ref] if block.internal_model_ref else [],
        trail=[block.id],
    )


def _merge_sse(base: SolutionSpaceDescription | None,
               incoming: SolutionSpaceDescription | None) -> SolutionSpaceDescription | None:
    if incoming is None:
        return base
    if base is None:
        return incoming
    common = base.declared_names() & incoming.declared_names()
    if len(common) > 1:
        return incoming   # too much overlap: the variant describes a different behaviour
    inputs = list(base.input_properties)
    outputs = list(base.output_properties)
    for name in incoming.input_properties:
        if name not in inputs:
            inputs.append(name)
    for name in incoming.output_properties:
        if name not in outputs:
            outputs.append(name)
    # A name on both sides of the merged lists counts as an output.
    inputs = [n for n in inputs if n not in outputs]
    payloads = [p for p in (base.payload, incoming.payload) if p]
    return SolutionSpaceDescription("\n".join(payloads), tuple(inputs), tuple(outputs))


def _merge(base: _Payload, incoming: _Payload) -> _Payload:
    base.name = incoming.name
    base.description = incoming.description
    base.level = incoming.level
    base.stereotype = incoming.stereotype
    base.discussion = incoming.discussion
    base.version = incoming.version
    for name, prop in incoming.properties.items():
        base.properties[name] = prop
    base.sse = _merge_sse(base.sse, incoming.sse)
    base.d_blocks.extend(incoming.d_blocks)
    base.d_relations.extend(incoming.d_relations)
    base.d_packages.extend(incoming.d_packages)
    base.d_notes.extend(incoming.d_notes)
    for name, group in incoming.groups.items():
        base.groups[name] = group
    base.refs = incoming.refs + base.refs
    base.trail = base.trail + incoming.trail
    return base


def _chain_payload(block: SpBlock, selection: SelectionState) -> _Payload:
    """The block with its own selected variant already folded in, recursively."""
    payload = _payload_of(block)
    chosen = selection.variant_choices.get(block.id, block.selected_variant)
    if chosen is None:
        return payload
    variant = next(v for v in block.variants if v.id == chosen)
    return _merge(payload, _chain_payload(variant, selection))


# ---------------------------------------------------------------------------
# Refinement overtake

def _effective_choice(group: RefinementGroup, selection: SelectionState) -> ElementId | None:
    return selection.refinement_choices.get(group.id, group.selected_refinement)


def _effective_group(group: RefinementGroup, selection: SelectionState) -> RefinementGroup:
    blocks = tuple(
        RefinementBlock(rb.id, rb.name, rb.description, rb.stereotype, rb.properties,
                        tuple(_effective_group(g, selection) for g in rb.refinement_groups),
                        rb.discussion, rb.version)
        for rb in group.blocks)
    return RefinementGroup(group.id, group.name, blocks, _effective_choice(group, selection))


def _overtake(groups, selection: SelectionState,
              properties: dict[str, tuple[Property, Origin]]) -> None:
    for group in groups:
        chosen = _effective_choice(group, selection)
        if chosen is None:
            continue
        block = next((rb for rb in group.blocks if rb.id == chosen), None)
        if block is None:
            continue   # a dangling marker is a validation finding, not a crash
        for prop in block.properties:
            properties[prop.name] = (prop, Origin.REFINEMENT)
        _overtake(block.refinement_groups, selection, properties)


# ---------------------------------------------------------------------------
# Resolution

def find_sp_block(model: Model, block_id: ElementId) -> SpBlock:
    for block in iter_sp_blocks(model):
        if block.id == block_id:
            return block
    raise NotFoundError(block_id)


def resolve_effective_block(model: Model, block_id: ElementId,
                            selection: SelectionState | None = None) -> EffectiveBlock:
    selection = selection or EMPTY_SELECTION
    check_selection(model, selection)
    block = find_sp_block(model, block_id)

    base = _payload_of(block)
    properties: dict[str, tuple[Property, Origin]] = {
        name: (prop, Origin.BASE) for name, prop in base.properties.items()}

    chosen = selection.variant_choices.get(block.id, block.selected_variant)
    if chosen is not None:
        variant = next(v for v in block.variants if v.id == chosen)
        incoming = _chain_payload(variant, selection)
        merged = _merge(base, incoming)
        for name, prop in incoming.properties.items():
            properties[name] = (prop, Origin.VARIANT)
    else:
        merged = base

    _overtake(merged.groups.values(), selection, properties)

    effective_groups = tuple(_effective_group(g, selection) for g in merged.groups.values())
    decomposition = DecompositionModel(tuple(merged.d_blocks), tuple(merged.d_relations),
                                       tuple(merged.d_packages), tuple(merged.d_notes))
    return EffectiveBlock(
        id=block.id,
        name=merged.name,
        level=merged.level,
        description=merged.description,
        stereotype=merged.stereotype,
        properties=tuple(EffectiveProperty(p.name, p.value, p.unit, origin)
                         for p, origin in properties.values()),
        sse=merged.sse,
        decomposition=decomposition,
        refinement_groups=effective_groups,
        internal_model_refs=tuple(merged.refs),
        provenance=tuple(merged.trail),
        discussion=merged.discussion,
        version=merged.version,
    )


# ---------------------------------------------------------------------------
# Consistency with the quality perspective

def _allocation_map(model: Model) -> dict[ElementId, list[ElementId]]:
    out: dict[ElementId, list[ElementId]] = {}
    for link in model.traces:
        if link.kind is TraceKind.ALLOCATE:
            out.setdefault(link.source, []).append(link.target)
    return out


def check_sp_consistency(model: Model,
                         selection: SelectionState | None = None,
                         block_ids: frozenset[ElementId] | None = None) -> tuple[Diagnostic, ...]:
    """Compare requirement attributes against effective block properties.

    A requirement reaches a block either by targeting it directly or by
    targeting a functional block that is allocated to it. A differing value
    or unit is a warning; two confirmed requirements pinning different
    values of the same attribute on the same block is an error. Discarded
    requirements are skipped entirely.
    """
    selection = selection or EMPTY_SELECTION
    sp_ids = {b.id for b in iter_sp_blocks(model)}
    allocations = _allocation_map(model)
    out: list[Diagnostic] = []
    effective: dict[ElementId, EffectiveBlock] = {}
    pins: dict[tuple[ElementId, str], list[tuple[ElementId, Property]]] = {}

    def eff(block_id: ElementId) -> EffectiveBlock:
        if block_id not in effective:
            effective[block_id] = resolve_effective_block(model, block_id, selection)
        return effective[block_id]

    for req in model.quality:
        if req.status == "Discarded":
            continue
        reached: list[ElementId] = []
        for target in req.targets:
            if target in sp_ids:
                reached.append(target)
            else:
                reached.extend(t for t in allocations.get(target, ()) if t in sp_ids)
        for sp_id in sorted(set(reached)):
            if block_ids is not None and sp_id not in block_ids:
                continue
            props = eff(sp_id).property_map()
            for attr in req.custom_attributes:
                if req.status == "Confirmed":
                    pins.setdefault((sp_id, attr.name), []).append((req.id, attr))
                prop = props.get(attr.name)
                if prop is None:
                    continue
                if prop.value != attr.value or prop.unit != attr.unit:
                    out.append(make(
                        "SP-PROP",
                        f"property {attr.name!r} is {prop.value!r} {prop.unit}".rstrip()
                        + f" but requirement {req.id!r} asks for {attr.value!r} {attr.unit}".rstrip(),
                        sp_id))

    for (sp_id, attr_name), entries in sorted(pins.items()):
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                (req_a, prop_a), (req_b, prop_b) = entries[i], entries[j]
                if (prop_a.value, prop_a.unit) != (prop_b.value, prop_b.unit):
                    out.append(make(
                        "SP-REQCONFLICT",
                        f"requirements {req_a!r} and {req_b!r} pin {attr_name!r} "
                        f"to different values on {sp_id!r}",
                        sp_id))

    return tuple(sort_diagnostics(out))


# ---------------------------------------------------------------------------
# Report (de)serialization

def effective_block_to_obj(eff: EffectiveBlock) -> dict:
    from .document import emit_decomposition, emit_refinement_group, emit_sse

    obj: dict = {
        "id": eff.id,
        "name": eff.name,
        "level": eff.level.name,   # type: ignore[attr-defined]
        "properties": [
            {"name": p.name, "value": p.value, "unit": p.unit, "origin": p.origin.value}
            for p in eff.properties
        ],
        "provenance": list(eff.provenance),
    }
    if eff.description:
        obj["description"] = eff.description
    if eff.stereotype:
        obj["stereotype"] = eff.stereotype
    if eff.sse is not None:
        obj["sse"] = emit_sse(eff.sse)
    if not eff.decomposition.is_empty():
        obj["decomposition"] = emit_decomposition(eff.decomposition)
    if eff.refinement_groups:
        obj["refinementGroups"] = [emit_refinement_group(g) for g in eff.refinement_groups]
    if eff.internal_model_refs:
        obj["internalModelRefs"] = list(eff.internal_model_refs)
    if eff.discussion:
        obj["discussion"] = list(eff.discussion)
    if eff.version:
        obj["version"] = eff.version
    return obj


def effective_block_from_obj(obj: dict) -> EffectiveBlock:
    from .document import parse_decomposition_obj, parse_refinement_group_obj, parse_sse_obj
    from .elements import AbstractionLevel

    return EffectiveBlock(
        id=obj["id"],
        name=obj["name"],
        level=AbstractionLevel(obj["level"]),
        description=obj.get("description", ""),
        stereotype=obj.get("stereotype", ""),
        properties=tuple(
            EffectiveProperty(p["name"], p["value"], p.get("unit", ""), Origin(p["origin"]))
            for p in obj.get("properties", [])
        ),
        sse=parse_sse_obj(obj["sse"]) if "sse" in obj else None,
        decomposition=parse_decomposition_obj(obj.get("decomposition", {})),
        refinement_groups=tuple(parse_refinement_group_obj(g)
                                for g in obj.get("refinementGroups", [])),
        internal_model_refs=tuple(obj.get("internalModelRefs", [])),
        provenance=tuple(obj.get("provenance", [])),
        discussion=tuple(obj.get("discussion", [])),
        version=obj.get("version", ""),
    )
