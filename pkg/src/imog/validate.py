"""Model validation, reference resolution, and abstraction-level filtering."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import diagnostics as dg
from .diagnostics import Diagnostic
from .elements import (
    CUSTOM_KINDS,
    IMOG_VERSION,
    ONE_TO_ONE_KINDS,
    PARENT_CHILD_KINDS,
    PROP_AVAILABILITY,
    PROP_FEASIBILITY,
    STATUS_STEREOTYPES,
    VP_ENDPOINT_KINDS,
    AbstractionLevel,
    DecompositionModel,
    ElementId,
    FpBlock,
    FpGroup,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    Model,
    Property,
    Requirement,
    SpBlock,
    SpPackage,
    SpRelation,
    SpRelationKind,
    StructuralModel,
    TraceKind,
    TraceLink,
    iter_elements,
)


class NotFoundError(KeyError):
    """An element id does not resolve in the model."""

    def __init__(self, element_id: ElementId):
        self.element_id = element_id
        super().__init__(element_id)

    def __str__(self) -> str:
        return f"no element with id {self.element_id!r}"


class EmptyFilterError(ValueError):
    """filter_by_abstraction_level was called with an empty level set."""


@dataclass(frozen=True)
class Handle:
    """Resolved element plus where it lives in the grid."""

    perspective: str   # strategy | functional | quality | structural | knowledge | trace
    kind: str          # e.g. fp_block, requirement, sp_block, trace_link
    element: object


def build_index(model: Model) -> dict[ElementId, Handle]:
    """First occurrence wins; duplicate ids are reported by validate_model."""
    index: dict[ElementId, Handle] = {}
    for perspective, kind, element_id, element in iter_elements(model):
        if element_id not in index:
            index[element_id] = Handle(perspective, kind, element)
    return index


def resolve_reference(model: Model, element_id: ElementId) -> Handle:
    handle = build_index(model).get(element_id)
    if handle is None:
        raise NotFoundError(element_id)
    return handle


# ---------------------------------------------------------------------------
# Validation

def validate_model(model: Model) -> list[Diagnostic]:
    """Check every structural invariant; deterministic (code, element id) order.

    Parsing already guarantees shape for file-loaded models; this re-checks
    everything so programmatically built models get the same scrutiny.
    """
    out: list[Diagnostic] = []
    index = build_index(model)

    if model.imog_version != IMOG_VERSION:
        out.append(dg.make("DOC-VERSION",
                           f"unsupported document version {model.imog_version!r}, expected {IMOG_VERSION!r}"))

    _check_ids(model, out)
    _check_strategy(model, out)
    _check_functional(model, index, out)
    _check_quality(model, index, out)
    _check_structural(model, index, out)
    _check_knowledge(model, out)
    _check_traces(model, index, out)
    return dg.sort_diagnostics(out)


def _check_ids(model: Model, out: list[Diagnostic]) -> None:
    seen: set[ElementId] = set()
    for _, kind, element_id, _ in iter_elements(model):
        if element_id == "":
            out.append(dg.make("ID-EMPTY", f"{kind} has an empty id"))
        elif element_id in seen:
            out.append(dg.make("ID-DUP", f"id {element_id!r} is used by more than one element", element_id))
        else:
            seen.add(element_id)


def _check_level(level: AbstractionLevel, owner: ElementId, out: list[Diagnostic]) -> None:
    if level.name == "":
        out.append(dg.make("LEVEL-EMPTY", "abstraction level name is empty", owner))


def _check_properties(props: tuple[Property, ...], owner: ElementId, out: list[Diagnostic]) -> None:
    for prop in props:
        if prop.name == "":
            out.append(dg.make("PROP-NAME", "property with empty name", owner))
        if prop.name == PROP_AVAILABILITY:
            ok = isinstance(prop.value, int) and not isinstance(prop.value, bool)
            ok = ok or (isinstance(prop.value, str) and prop.value != "")
            if not ok:
                out.append(dg.make("PROP-AVAIL",
                                   f"Availability must be a year or timestamp string, got {prop.value!r}", owner))
        if prop.name == PROP_FEASIBILITY:
            ok = isinstance(prop.value, (int, float)) and not isinstance(prop.value, bool) \
                and 0 <= prop.value <= 1
            if not ok:
                out.append(dg.make("PROP-FEAS",
                                   f"Feasibility must be a number in [0, 1], got {prop.value!r}", owner))


def _check_strategy(model: Model, out: list[Diagnostic]) -> None:
    for div in model.strategy:
        for ie in div.embedded_elements:
            if ie.category == "" or ie.text == "":
                out.append(dg.make("IE-TEXT", "identifiable element needs a category and a text", ie.id))


def _check_functional(model: Model, index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    fp = model.functional
    block_ids = {b.id for b in fp.blocks}
    vp_labels: dict[ElementId, frozenset[str]] = {}

    for block in fp.blocks:
        if block.name == "":
            out.append(dg.make("FP-NAME", "functional block with empty name", block.id))
        _check_level(block.level, block.id, out)
        _check_properties(block.custom_properties, block.id, out)

    for rel in fp.relations:
        _check_fp_relation(rel, block_ids, index, out)
        if rel.variation_point is not None:
            vp_labels[rel.variation_point.id] = frozenset(rel.variation_point.option_labels)

    _check_derivations(fp, vp_labels, index, out)
    _check_forest(fp, block_ids, out)

    for group in fp.groups:
        members_ok = len(group.members) >= 2 and len(set(group.members)) == len(group.members)
        members_ok = members_ok and all(m in block_ids for m in group.members)
        if not members_ok:
            out.append(dg.make("FP-GROUP",
                               "group needs at least two distinct existing functional blocks", group.id))


def _check_fp_relation(rel: FpRelation, block_ids: set[ElementId],
                       index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    # Arity per kind.
    if rel.kind in ONE_TO_ONE_KINDS:
        if len(rel.children) != 1:
            out.append(dg.make("FP-ARITY",
                               f"{rel.kind.value} relation needs exactly one child, got {len(rel.children)}", rel.id))
    elif rel.kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
        if len(rel.children) < 2:
            out.append(dg.make("FP-ARITY",
                               f"{rel.kind.value} relation needs at least two children, got {len(rel.children)}", rel.id))
    elif len(rel.children) < 1:
        out.append(dg.make("FP-ARITY", "relation needs at least one child", rel.id))

    # Endpoint resolution and kind.
    if rel.kind in VP_ENDPOINT_KINDS:
        pass  # variation point endpoints handled in _check_derivations
    else:
        for endpoint in (rel.parent, *rel.children):
            if endpoint not in index:
                out.append(dg.make("ID-DANGLING", f"relation endpoint {endpoint!r} does not exist", rel.id))
            elif endpoint not in block_ids:
                out.append(dg.make("FP-ENDPOINT",
                                   f"relation endpoint {endpoint!r} is not a functional block", rel.id))

    # Field shape per kind.
    if rel.cardinality is not None and rel.kind is not FpRelationKind.OR:
        out.append(dg.make("FP-SHAPE", "cardinality is only admitted on Or relations", rel.id))
    if rel.variation_point is not None and rel.kind not in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
        out.append(dg.make("FP-SHAPE", "a variation point is only admitted on Alternative or Or relations", rel.id))
    if rel.pc_type is not None and rel.kind not in PARENT_CHILD_KINDS:
        out.append(dg.make("FP-SHAPE", "a parent-child type is only admitted on tree relations", rel.id))
    if (rel.custom_type != "") != (rel.kind in CUSTOM_KINDS):
        out.append(dg.make("FP-SHAPE", "custom relation kinds need a custom type, others must not carry one", rel.id))

    # Or cardinality range; refinement-typed Or must be [1, 1].
    if rel.kind is FpRelationKind.OR:
        if rel.cardinality is None:
            out.append(dg.make("FP-CARD", "Or relation without a cardinality", rel.id))
        else:
            lo, hi = rel.cardinality
            if not (1 <= lo <= hi <= len(rel.children)):
                out.append(dg.make("FP-CARD",
                                   f"cardinality [{lo}, {hi}] violates 1 <= min <= max <= {len(rel.children)}", rel.id))
            if rel.pc_type is not None and rel.pc_type.value == "Refinement" and (lo, hi) != (1, 1):
                out.append(dg.make("FP-REFCARD",
                                   f"refinement-typed Or must have cardinality [1, 1], got [{lo}, {hi}]", rel.id))

    # Variation point labels align with children and are pairwise distinct.
    vp = rel.variation_point
    if vp is not None and rel.kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
        if len(vp.option_labels) != len(rel.children) or len(set(vp.option_labels)) != len(vp.option_labels):
            out.append(dg.make("FP-VPLABEL",
                               "option labels must be pairwise distinct and match the children one-to-one", vp.id))


def _check_derivations(fp: FunctionalModel, vp_labels: dict[ElementId, frozenset[str]],
                       index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    edges: list[tuple[ElementId, ElementId]] = []
    for rel in fp.relations:
        if rel.kind not in VP_ENDPOINT_KINDS:
            continue
        endpoints = (rel.parent, *rel.children)
        ok = True
        for endpoint in endpoints:
            if endpoint not in index:
                out.append(dg.make("ID-DANGLING", f"relation endpoint {endpoint!r} does not exist", rel.id))
                ok = False
            elif endpoint not in vp_labels:
                out.append(dg.make("FP-VPDERIVE",
                                   f"endpoint {endpoint!r} is not a variation point", rel.id))
                ok = False
        if rel.kind is not FpRelationKind.VP_DERIVATION:
            continue  # custom variation point relations are stored, not analysed
        if ok and len(rel.children) == 1:
            src, dst = rel.parent, rel.children[0]
            if vp_labels[src] != vp_labels[dst]:
                out.append(dg.make("FP-VPDERIVE",
                                   "derivation endpoints must offer equal option label sets", rel.id))
            else:
                edges.append((src, dst))

    # Acyclicity of the derivation graph over variation point ids.
    adjacency: dict[ElementId, list[ElementId]] = {}
    for src, dst in edges:
        adjacency.setdefault(src, []).append(dst)
    state: dict[ElementId, int] = {}  # 1 = on stack, 2 = done

    def visit(node: ElementId) -> bool:
        state[node] = 1
        for nxt in adjacency.get(node, ()):
            if state.get(nxt) == 1:
                return False
            if state.get(nxt) is None and not visit(nxt):
                return False
        state[node] = 2
        return True

    for node in sorted(adjacency):
        if state.get(node) is None and not visit(node):
            out.append(dg.make("FP-VPCYCLE", "variation point derivations form a cycle", node))
            break


def _check_forest(fp: FunctionalModel, block_ids: set[ElementId], out: list[Diagnostic]) -> None:
    parent_of: dict[ElementId, ElementId] = {}
    forest_ok = True
    for rel in fp.relations:
        if rel.kind not in PARENT_CHILD_KINDS:
            continue
        for child in rel.children:
            if child in parent_of:
                out.append(dg.make("FP-FOREST", f"block {child!r} hangs under more than one parent", child))
                forest_ok = False
            else:
                parent_of[child] = rel.parent

    # A single-parent graph can still cycle; every block must reach a parentless one.
    for block_id in sorted(block_ids):
        seen: set[ElementId] = set()
        node = block_id
        while node in parent_of:
            if node in seen:
                out.append(dg.make("FP-FOREST", f"parent chain of {block_id!r} cycles", block_id))
                forest_ok = False
                break
            seen.add(node)
            node = parent_of[node]

    if forest_ok:
        parentless = {b for b in block_ids if b not in parent_of}
        declared = list(fp.roots)
        if len(set(declared)) != len(declared) or set(declared) != parentless:
            out.append(dg.make("FP-ROOTS",
                               f"declared roots {sorted(declared)} do not match parentless blocks {sorted(parentless)}"))


def _check_quality(model: Model, index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    requirement_ids = {r.id for r in model.quality}
    parent_of = {r.id: r.parent for r in model.quality if r.parent is not None}

    for req in model.quality:
        _check_level(req.level, req.id, out)
        _check_properties(req.custom_attributes, req.id, out)
        if not 0 <= req.satisfiability <= 1:
            out.append(dg.make("QP-SAT", f"satisfiability {req.satisfiability} is outside [0, 1]", req.id))
        statuses = [s for s in req.stereotypes if s in STATUS_STEREOTYPES]
        if len(statuses) > 1:
            out.append(dg.make("QP-STATUS", f"conflicting status stereotypes {statuses}", req.id))
        if req.parent is not None:
            if req.parent not in index:
                out.append(dg.make("ID-DANGLING", f"parent {req.parent!r} does not exist", req.id))
            elif req.parent not in requirement_ids:
                out.append(dg.make("QP-PARENT", f"parent {req.parent!r} is not a requirement", req.id))
        for target in req.targets:
            if target not in index:
                out.append(dg.make("ID-DANGLING", f"target {target!r} does not exist", req.id))

    # Parent chains must terminate.
    for req_id in sorted(parent_of):
        seen: set[ElementId] = set()
        node: ElementId | None = req_id
        while node is not None and node in parent_of:
            if node in seen:
                out.append(dg.make("QP-PARENT", f"parent chain of {req_id!r} cycles", req_id))
                break
            seen.add(node)
            node = parent_of.get(node)


def _check_structural(model: Model, index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    sp_block_ids = {h.element.id for h in index.values() if h.kind == "sp_block"}  # type: ignore[attr-defined]

    for dm in model.structural.top_models:
        _check_decomposition(dm, index, sp_block_ids, out)


def _check_decomposition(dm: DecompositionModel, index: dict[ElementId, Handle],
                         sp_block_ids: set[ElementId], out: list[Diagnostic]) -> None:
    for block in dm.blocks:
        _check_sp_block(block, index, sp_block_ids, out)
    for rel in dm.relations:
        _check_sp_relation(rel, index, sp_block_ids, out)
    for pkg in dm.packages:
        _check_decomposition(pkg.elements, index, sp_block_ids, out)


def _check_sp_block(block: SpBlock, index: dict[ElementId, Handle],
                    sp_block_ids: set[ElementId], out: list[Diagnostic]) -> None:
    _check_level(block.level, block.id, out)
    _check_properties(block.properties, block.id, out)

    if block.sse is not None:
        overlap = set(block.sse.input_properties) & set(block.sse.output_properties)
        if overlap:
            out.append(dg.make("SSE-DISJ",
                               f"input and output property lists share {sorted(overlap)}", block.id))

    variant_ids = {v.id for v in block.variants}
    for variant in block.variants:
        if variant.parent_block != block.id:
            out.append(dg.make("SP-VARPARENT",
                               f"variant {variant.id!r} must name {block.id!r} as its parent block", variant.id))
        if block.sse is not None and variant.sse is not None:
            common = block.sse.declared_names() & variant.sse.declared_names()
            if len(common) > 1:
                out.append(dg.make("SP-SSEINFO",
                                   f"variant {variant.id!r} shares {len(common)} solution space properties "
                                   f"with the base; its solution space replaces the base one", block.id))
        _check_sp_block(variant, index, sp_block_ids, out)
    if block.selected_variant is not None and block.selected_variant not in variant_ids:
        out.append(dg.make("SP-SELVAR",
                           f"selected variant {block.selected_variant!r} is not a variant of this block", block.id))

    # Property names of the block and of each refinement group (union over its
    # members, nested groups included) must be pairwise disjoint so that
    # overtaking can never collide. Within one group, members may share names.
    pools: list[tuple[str, set[str]]] = [(block.id, {p.name for p in block.properties})]
    for group in block.refinement_groups:
        pools.append((group.id, _group_property_names(group)))
        _check_refinement_group(group, index, out)
    for i, (_, left) in enumerate(pools):
        for owner, right in pools[i + 1:]:
            overlap = left & right
            if overlap:
                out.append(dg.make("SP-PROPDISJ",
                                   f"property names {sorted(overlap)} are declared more than once "
                                   f"across the block and its refinement groups", block.id))

    _check_decomposition(block.decomposition, index, sp_block_ids, out)


def _group_property_names(group) -> set[str]:
    names: set[str] = set()
    for rb in group.blocks:
        names.update(p.name for p in rb.properties)
        for nested in rb.refinement_groups:
            names.update(_group_property_names(nested))
    return names


def _check_refinement_group(group, index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    if len(group.blocks) == 0:
        out.append(dg.make("RG-EMPTY", "refinement group without refinement blocks", group.id))
    member_ids = {rb.id for rb in group.blocks}
    if group.selected_refinement is not None and group.selected_refinement not in member_ids:
        out.append(dg.make("RG-SELREF",
                           f"selected refinement {group.selected_refinement!r} is not a member", group.id))
    for rb in group.blocks:
        _check_properties(rb.properties, rb.id, out)
        for nested in rb.refinement_groups:
            _check_refinement_group(nested, index, out)


def _check_sp_relation(rel: SpRelation, index: dict[ElementId, Handle],
                       sp_block_ids: set[ElementId], out: list[Diagnostic]) -> None:
    _check_properties(rel.properties, rel.id, out)
    for endpoint in (rel.source, rel.target):
        if endpoint not in index:
            out.append(dg.make("ID-DANGLING", f"relation endpoint {endpoint!r} does not exist", rel.id))
        elif rel.kind is SpRelationKind.CHANNEL and endpoint not in sp_block_ids:
            out.append(dg.make("SPR-ENDPOINT",
                               f"channel endpoint {endpoint!r} is not a structural block", rel.id))

    is_effect = rel.kind is SpRelationKind.EFFECT
    if is_effect and rel.effect_type is None:
        out.append(dg.make("SPR-EFFECT", "effect relation without an effect type", rel.id))
    if not is_effect and (rel.effect_type is not None or rel.endpoint_type != ""):
        out.append(dg.make("SPR-EFFECT", "effect fields on a relation that is not an effect", rel.id))
    if rel.kind is SpRelationKind.CHANNEL and rel.direction is not None:
        out.append(dg.make("SPR-EFFECT", "channels carry no direction", rel.id))


def _check_knowledge(model: Model, out: list[Diagnostic]) -> None:
    for entry in model.knowledge:
        _check_properties(entry.properties, entry.id, out)


# Kind table: link kind -> admissible (source kind, target kind) pairs.
_TRACE_TABLE: dict[TraceKind, tuple[tuple[str, str], ...]] = {
    TraceKind.REFERENCES: (("fp_block", "identifiable_element"), ("sp_block", "knowledge_entry")),
    TraceKind.CONSTRAINS: (("requirement", "fp_block"), ("requirement", "sp_block")),
    TraceKind.ALLOCATE: (("fp_block", "sp_block"),),
}


def trace_link_fits(link: TraceLink, index: dict[ElementId, Handle]) -> bool:
    source = index.get(link.source)
    target = index.get(link.target)
    if source is None or target is None:
        return False
    return (source.kind, target.kind) in _TRACE_TABLE[link.kind]


def _check_traces(model: Model, index: dict[ElementId, Handle], out: list[Diagnostic]) -> None:
    for link in model.traces:
        for endpoint in (link.source, link.target):
            if endpoint not in index:
                out.append(dg.make("ID-DANGLING", f"trace endpoint {endpoint!r} does not exist", link.id))
        if link.source in index and link.target in index and not trace_link_fits(link, index):
            source_kind = index[link.source].kind
            target_kind = index[link.target].kind
            out.append(dg.make("TR-KIND",
                               f"{link.kind.value} link from {source_kind} to {target_kind} "
                               f"does not fit the endpoint table", link.id))


# ---------------------------------------------------------------------------
# Abstraction level filtering

def filter_by_abstraction_level(model: Model, levels: set[AbstractionLevel]) -> Model:
    """Project the model onto the given levels.

    Leveled elements (functional blocks, requirements, structural blocks with
    nested variants at their own level) survive iff their level is in the set.
    Elements without a level (strategy content, knowledge entries, packages,
    notes) always survive. Relations, groups, trace links, and requirement
    targets are pruned to endpoints that survive; groups shrink below two
    members are dropped. The input model is left untouched.
    """
    if not levels:
        raise EmptyFilterError("at least one abstraction level is required")
    keep_levels = {lv.name for lv in levels}

    fp = model.functional
    kept_blocks = tuple(b for b in fp.blocks if b.level.name in keep_levels)
    kept_ids = {b.id for b in kept_blocks}
    kept_relations = []
    kept_vps: set[ElementId] = set()
    for rel in fp.relations:
        if rel.kind in VP_ENDPOINT_KINDS:
            continue  # decided on a second pass once surviving variation points are known
        if rel.parent in kept_ids and all(c in kept_ids for c in rel.children):
            kept_relations.append(rel)
            if rel.variation_point is not None:
                kept_vps.add(rel.variation_point.id)
    for rel in fp.relations:
        if rel.kind in VP_ENDPOINT_KINDS and rel.parent in kept_vps \
                and all(c in kept_vps for c in rel.children):
            kept_relations.append(rel)
    kept_groups = tuple(
        dataclasses.replace(g, members=tuple(m for m in g.members if m in kept_ids))
        for g in fp.groups
        if sum(m in kept_ids for m in g.members) >= 2
    )
    child_ids = {c for rel in kept_relations if rel.kind in PARENT_CHILD_KINDS for c in rel.children}
    kept_roots = tuple(b.id for b in kept_blocks if b.id not in child_ids)

    quality = tuple(r for r in model.quality if r.level.name in keep_levels)

    # Pass one keeps every structural relation: bridging relations may point
    # upward out of their decomposition, so pruning needs the full surviving
    # id set, known only after all blocks are filtered.
    structural = StructuralModel(tuple(
        _filter_decomposition(dm, keep_levels) for dm in model.structural.top_models
    ))

    draft = dataclasses.replace(
        model,
        functional=FunctionalModel(kept_blocks, tuple(kept_relations), kept_groups, kept_roots),
        quality=quality,
        structural=structural,
    )
    surviving: set[ElementId] = {element_id for _, _, element_id, _ in iter_elements(draft)}

    structural = StructuralModel(tuple(
        _prune_sp_relations(dm, surviving) for dm in structural.top_models
    ))
    quality = tuple(
        dataclasses.replace(r, targets=tuple(t for t in r.targets if t in surviving),
                            parent=r.parent if r.parent in surviving else None,
                            parent_type=r.parent_type if r.parent in surviving else None)
        for r in quality
    )
    traces = tuple(l for l in model.traces if l.source in surviving and l.target in surviving)
    return dataclasses.replace(draft, structural=structural, quality=quality, traces=traces)


def _filter_decomposition(dm: DecompositionModel, keep_levels: set[str]) -> DecompositionModel:
    blocks = tuple(
        _filter_sp_block(b, keep_levels) for b in dm.blocks if b.level.name in keep_levels
    )
    packages = tuple(
        SpPackage(p.name, _filter_decomposition(p.elements, keep_levels)) for p in dm.packages
    )
    return DecompositionModel(blocks, tuple(dm.relations), packages, dm.notes)


def _filter_sp_block(block: SpBlock, keep_levels: set[str]) -> SpBlock:
    variants = tuple(
        _filter_sp_block(v, keep_levels) for v in block.variants if v.level.name in keep_levels
    )
    variant_ids = {v.id for v in variants}
    return dataclasses.replace(
        block,
        decomposition=_filter_decomposition(block.decomposition, keep_levels),
        variants=variants,
        selected_variant=block.selected_variant if block.selected_variant in variant_ids else None,
    )


def _prune_sp_relations(dm: DecompositionModel, surviving: set[ElementId]) -> DecompositionModel:
    blocks = tuple(_prune_block_relations(b, surviving) for b in dm.blocks)
    relations = tuple(r for r in dm.relations if r.source in surviving and r.target in surviving)
    packages = tuple(SpPackage(p.name, _prune_sp_relations(p.elements, surviving)) for p in dm.packages)
    return DecompositionModel(blocks, relations, packages, dm.notes)


def _prune_block_relations(block: SpBlock, surviving: set[ElementId]) -> SpBlock:
    return dataclasses.replace(
        block,
        decomposition=_prune_sp_relations(block.decomposition, surviving),
        variants=tuple(_prune_block_relations(v, surviving) for v in block.variants),
    )
