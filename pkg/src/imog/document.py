"""Document format: strict parsing and canonical serialization.

A document is a JSON object with exactly the top-level keys imogVersion,
strategy, functional, quality, structural, knowledge, traces. Parsing is
strict about shape (types, admitted keys, enum spellings) and raises on the
first problem; semantic invariants are left to validate_model. Serialization
is canonical: keys sorted, two-space indent, trailing newline, and a field is
omitted exactly when its value equals its schema default, so equal models
serialize to identical bytes and parse(serialize(m)) == m.

Constrains trace links are derived data: the loader materializes one link per
requirement target (id "constrains::<req>::<target>"), the serializer writes
targets only and a document must not carry Constrains rows itself.
"""

from __future__ import annotations

import json
from typing import Any

from .diagnostics import InvalidModelError, has_errors
from .elements import (
    CUSTOM_KINDS,
    EMPTY_DECOMPOSITION,
    PARENT_CHILD_KINDS,
    AbstractionLevel,
    DecompositionModel,
    Direction,
    EffectType,
    ElementId,
    FpBlock,
    FpBlockKind,
    FpGroup,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    FutureAvailability,
    IdentifiableElement,
    KnowledgeEntry,
    Model,
    NOW,
    PcType,
    Property,
    RefinementBlock,
    RefinementGroup,
    Requirement,
    Scalar,
    SolutionSpaceDescription,
    SpBlock,
    SpPackage,
    SpRelation,
    SpRelationKind,
    StrategyDiv,
    StructuralModel,
    TraceKind,
    TraceLink,
    VariationPoint,
    constrains_link_id,
    iter_elements,
)
from .validate import validate_model

TOP_LEVEL_KEYS = ("imogVersion", "strategy", "functional", "quality",
                  "structural", "knowledge", "traces")


class DocumentSyntaxError(ValueError):
    """The document is not well-formed JSON."""

    def __init__(self, reason: str, line: int, col: int):
        self.reason = reason
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {reason}")


class SchemaError(ValueError):
    """The document is JSON but does not fit the format."""

    def __init__(self, path: str, expected: str, got: str):
        self.path = path
        self.expected = expected
        self.got = got
        super().__init__(f"{path}: expected {expected}, got {got}")


class DuplicateIdError(ValueError):
    def __init__(self, element_id: ElementId):
        self.element_id = element_id
        super().__init__(f"id {element_id!r} is used more than once")


# ---------------------------------------------------------------------------
# Low-level readers

def _typename(value: Any) -> str:
    if value is None:
        return "null"
    return {dict: "object", list: "array", str: "string", bool: "boolean",
            int: "number", float: "number"}.get(type(value), type(value).__name__)


class _Obj:
    """One JSON object under strict key accounting."""

    def __init__(self, raw: Any, path: str):
        if not isinstance(raw, dict):
            raise SchemaError(path, "object", _typename(raw))
        self.raw = raw
        self.path = path
        self.seen: set[str] = set()

    def req(self, key: str) -> Any:
        self.seen.add(key)
        if key not in self.raw:
            raise SchemaError(f"{self.path}.{key}", "a value", "missing key")
        return self.raw[key]

    def opt(self, key: str, default: Any = None) -> Any:
        self.seen.add(key)
        return self.raw.get(key, default)

    def has(self, key: str) -> bool:
        return key in self.raw

    def done(self) -> None:
        unknown = sorted(set(self.raw) - self.seen)
        if unknown:
            raise SchemaError(f"{self.path}.{unknown[0]}", "a known key", "unknown key")


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, "string", _typename(value))
    return value


def _bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, "boolean", _typename(value))
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "integer", _typename(value))
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, "number", _typename(value))
    return value


def _scalar(value: Any, path: str) -> Scalar:
    if isinstance(value, (str, bool, int, float)):
        return value
    raise SchemaError(path, "number, string or boolean", _typename(value))


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, "array", _typename(value))
    return value


def _str_list(value: Any, path: str) -> tuple[str, ...]:
    return tuple(_str(v, f"{path}[{i}]") for i, v in enumerate(_list(value, path)))


def _enum(value: Any, path: str, enum_cls) -> Any:
    text = _str(value, path)
    try:
        return enum_cls(text)
    except ValueError:
        options = " | ".join(e.value for e in enum_cls)
        raise SchemaError(path, options, repr(text)) from None


def _level(value: Any, path: str) -> AbstractionLevel:
    return AbstractionLevel(_str(value, path))


def _availability(value: Any, path: str) -> FutureAvailability:
    if value == "Now":
        return NOW
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, '"Now" or an integer year', repr(value))
    return FutureAvailability(value)


# ---------------------------------------------------------------------------
# Element parsers

def _parse_property(raw: Any, path: str) -> Property:
    o = _Obj(raw, path)
    prop = Property(
        name=_str(o.req("name"), f"{path}.name"),
        value=_scalar(o.req("value"), f"{path}.value"),
        unit=_str(o.opt("unit", ""), f"{path}.unit"),
    )
    o.done()
    return prop


def _parse_properties(raw: Any, path: str) -> tuple[Property, ...]:
    return tuple(_parse_property(v, f"{path}[{i}]") for i, v in enumerate(_list(raw, path)))


def _parse_identifiable(raw: Any, path: str) -> IdentifiableElement:
    o = _Obj(raw, path)
    element = IdentifiableElement(
        id=_str(o.req("id"), f"{path}.id"),
        category=_str(o.req("category"), f"{path}.category"),
        text=_str(o.req("text"), f"{path}.text"),
        value=None if not o.has("value") else _scalar(o.opt("value"), f"{path}.value"),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return element


def _parse_strategy_div(raw: Any, path: str) -> StrategyDiv:
    o = _Obj(raw, path)
    div = StrategyDiv(
        name=_str(o.opt("name", ""), f"{path}.name"),
        html_content=_str(o.opt("htmlContent", ""), f"{path}.htmlContent"),
        embedded_elements=tuple(
            _parse_identifiable(v, f"{path}.embeddedElements[{i}]")
            for i, v in enumerate(_list(o.opt("embeddedElements", []), f"{path}.embeddedElements"))
        ),
    )
    o.done()
    return div


def _parse_fp_block(raw: Any, path: str) -> FpBlock:
    o = _Obj(raw, path)
    block = FpBlock(
        id=_str(o.req("id"), f"{path}.id"),
        name=_str(o.req("name"), f"{path}.name"),
        kind=_enum(o.req("kind"), f"{path}.kind", FpBlockKind),
        level=_level(o.req("level"), f"{path}.level"),
        custom_block_type=_str(o.opt("customBlockType", ""), f"{path}.customBlockType"),
        description=_str(o.opt("description", ""), f"{path}.description"),
        custom_properties=_parse_properties(o.opt("customProperties", []), f"{path}.customProperties"),
        user_stories=_str_list(o.opt("userStories", []), f"{path}.userStories"),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return block


def _parse_variation_point(raw: Any, path: str) -> VariationPoint:
    o = _Obj(raw, path)
    vp = VariationPoint(
        id=_str(o.req("id"), f"{path}.id"),
        label=_str(o.req("label"), f"{path}.label"),
        option_labels=_str_list(o.req("optionLabels"), f"{path}.optionLabels"),
    )
    o.done()
    return vp


def _parse_fp_relation(raw: Any, path: str) -> FpRelation:
    o = _Obj(raw, path)
    kind = _enum(o.req("kind"), f"{path}.kind", FpRelationKind)

    cardinality = None
    if o.has("cardinality"):
        if kind is not FpRelationKind.OR:
            raise SchemaError(f"{path}.cardinality", "no cardinality (Or relations only)", "a value")
        pair = _list(o.opt("cardinality"), f"{path}.cardinality")
        if len(pair) != 2:
            raise SchemaError(f"{path}.cardinality", "[min, max]", f"array of {len(pair)}")
        cardinality = (_int(pair[0], f"{path}.cardinality[0]"), _int(pair[1], f"{path}.cardinality[1]"))

    variation_point = None
    if o.has("variationPoint"):
        if kind not in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
            raise SchemaError(f"{path}.variationPoint",
                              "no variation point (Alternative/Or relations only)", "a value")
        variation_point = _parse_variation_point(o.opt("variationPoint"), f"{path}.variationPoint")

    pc_type = None
    if o.has("pcType"):
        if kind not in PARENT_CHILD_KINDS:
            raise SchemaError(f"{path}.pcType", "no parent-child type (tree relations only)", "a value")
        pc_type = _enum(o.opt("pcType"), f"{path}.pcType", PcType)

    custom_type = ""
    if o.has("customType"):
        if kind not in CUSTOM_KINDS:
            raise SchemaError(f"{path}.customType", "no custom type (custom relation kinds only)", "a value")
        custom_type = _str(o.opt("customType"), f"{path}.customType")

    rel = FpRelation(
        id=_str(o.req("id"), f"{path}.id"),
        kind=kind,
        parent=_str(o.req("parent"), f"{path}.parent"),
        children=_str_list(o.req("children"), f"{path}.children"),
        pc_type=pc_type,
        cardinality=cardinality,
        variation_point=variation_point,
        custom_type=custom_type,
    )
    o.done()
    return rel


def _parse_fp_group(raw: Any, path: str) -> FpGroup:
    o = _Obj(raw, path)
    group = FpGroup(
        id=_str(o.req("id"), f"{path}.id"),
        members=_str_list(o.req("members"), f"{path}.members"),
        enabled=_bool(o.opt("enabled", True), f"{path}.enabled"),
    )
    o.done()
    return group


def _parse_functional(raw: Any, path: str) -> FunctionalModel:
    o = _Obj(raw, path)
    fm = FunctionalModel(
        blocks=tuple(_parse_fp_block(v, f"{path}.blocks[{i}]")
                     for i, v in enumerate(_list(o.opt("blocks", []), f"{path}.blocks"))),
        relations=tuple(_parse_fp_relation(v, f"{path}.relations[{i}]")
                        for i, v in enumerate(_list(o.opt("relations", []), f"{path}.relations"))),
        groups=tuple(_parse_fp_group(v, f"{path}.groups[{i}]")
                     for i, v in enumerate(_list(o.opt("groups", []), f"{path}.groups"))),
        roots=_str_list(o.opt("roots", []), f"{path}.roots"),
    )
    o.done()
    return fm


def _parse_requirement(raw: Any, path: str) -> Requirement:
    o = _Obj(raw, path)
    req = Requirement(
        id=_str(o.req("id"), f"{path}.id"),
        name=_str(o.req("name"), f"{path}.name"),
        text=_str(o.req("text"), f"{path}.text"),
        satisfiability=_number(o.req("satisfiability"), f"{path}.satisfiability"),
        level=_level(o.req("level"), f"{path}.level"),
        future_availability=_availability(o.opt("futureAvailability", "Now"), f"{path}.futureAvailability"),
        priority=None if not o.has("priority") else _int(o.opt("priority"), f"{path}.priority"),
        stereotypes=_str_list(o.opt("stereotypes", []), f"{path}.stereotypes"),
        assignee=_str(o.opt("assignee", ""), f"{path}.assignee"),
        parent=None if not o.has("parent") else _str(o.opt("parent"), f"{path}.parent"),
        parent_type=None if not o.has("parentType") else _enum(o.opt("parentType"), f"{path}.parentType", PcType),
        targets=_str_list(o.opt("targets", []), f"{path}.targets"),
        custom_attributes=_parse_properties(o.opt("customAttributes", []), f"{path}.customAttributes"),
        reasoning=_str(o.opt("reasoning", ""), f"{path}.reasoning"),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return req


def _parse_sse(raw: Any, path: str) -> SolutionSpaceDescription:
    o = _Obj(raw, path)
    sse = SolutionSpaceDescription(
        payload=_str(o.opt("payload", ""), f"{path}.payload"),
        input_properties=_str_list(o.opt("inputProperties", []), f"{path}.inputProperties"),
        output_properties=_str_list(o.opt("outputProperties", []), f"{path}.outputProperties"),
    )
    o.done()
    return sse


def _parse_refinement_block(raw: Any, path: str) -> RefinementBlock:
    o = _Obj(raw, path)
    rb = RefinementBlock(
        id=_str(o.req("id"), f"{path}.id"),
        name=_str(o.req("name"), f"{path}.name"),
        description=_str(o.opt("description", ""), f"{path}.description"),
        stereotype=_str(o.opt("stereotype", ""), f"{path}.stereotype"),
        properties=_parse_properties(o.opt("properties", []), f"{path}.properties"),
        refinement_groups=tuple(
            _parse_refinement_group(v, f"{path}.refinementGroups[{i}]")
            for i, v in enumerate(_list(o.opt("refinementGroups", []), f"{path}.refinementGroups"))
        ),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return rb


def _parse_refinement_group(raw: Any, path: str) -> RefinementGroup:
    o = _Obj(raw, path)
    group = RefinementGroup(
        id=_str(o.req("id"), f"{path}.id"),
        name=_str(o.req("name"), f"{path}.name"),
        blocks=tuple(_parse_refinement_block(v, f"{path}.blocks[{i}]")
                     for i, v in enumerate(_list(o.req("blocks"), f"{path}.blocks"))),
        selected_refinement=None if not o.has("selectedRefinement")
        else _str(o.opt("selectedRefinement"), f"{path}.selectedRefinement"),
    )
    o.done()
    return group


def _parse_sp_relation(raw: Any, path: str) -> SpRelation:
    o = _Obj(raw, path)
    kind = _enum(o.req("kind"), f"{path}.kind", SpRelationKind)

    direction = None
    if o.has("direction"):
        if kind is SpRelationKind.CHANNEL:
            raise SchemaError(f"{path}.direction", "no direction (arrows and effects only)", "a value")
        direction = _enum(o.opt("direction"), f"{path}.direction", Direction)
    elif kind is not SpRelationKind.CHANNEL:
        direction = Direction.UNIDIRECTIONAL

    effect_type = None
    endpoint_type = ""
    if o.has("effectType"):
        if kind is not SpRelationKind.EFFECT:
            raise SchemaError(f"{path}.effectType", "no effect type (effects only)", "a value")
        effect_type = _enum(o.opt("effectType"), f"{path}.effectType", EffectType)
    if o.has("endpointType"):
        if kind is not SpRelationKind.EFFECT:
            raise SchemaError(f"{path}.endpointType", "no endpoint type (effects only)", "a value")
        endpoint_type = _str(o.opt("endpointType"), f"{path}.endpointType")

    rel = SpRelation(
        id=_str(o.req("id"), f"{path}.id"),
        kind=kind,
        source=_str(o.req("source"), f"{path}.source"),
        target=_str(o.req("target"), f"{path}.target"),
        direction=direction,
        label=_str(o.opt("label", ""), f"{path}.label"),
        description=_str(o.opt("description", ""), f"{path}.description"),
        stereotype=_str(o.opt("stereotype", ""), f"{path}.stereotype"),
        properties=_parse_properties(o.opt("properties", []), f"{path}.properties"),
        effect_type=effect_type,
        endpoint_type=endpoint_type,
        notes=_str_list(o.opt("notes", []), f"{path}.notes"),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return rel


def _parse_sp_block(raw: Any, path: str, parent_id: ElementId | None) -> SpBlock:
    o = _Obj(raw, path)
    block_id = _str(o.req("id"), f"{path}.id")
    block = SpBlock(
        id=block_id,
        name=_str(o.req("name"), f"{path}.name"),
        level=_level(o.req("level"), f"{path}.level"),
        description=_str(o.opt("description", ""), f"{path}.description"),
        stereotype=_str(o.opt("stereotype", ""), f"{path}.stereotype"),
        properties=_parse_properties(o.opt("properties", []), f"{path}.properties"),
        sse=None if not o.has("sse") else _parse_sse(o.opt("sse"), f"{path}.sse"),
        internal_model_ref=_str(o.opt("internalModelRef", ""), f"{path}.internalModelRef"),
        decomposition=_parse_decomposition(o.opt("decomposition", {}), f"{path}.decomposition"),
        refinement_groups=tuple(
            _parse_refinement_group(v, f"{path}.refinementGroups[{i}]")
            for i, v in enumerate(_list(o.opt("refinementGroups", []), f"{path}.refinementGroups"))
        ),
        variants=tuple(
            _parse_sp_block(v, f"{path}.variants[{i}]", block_id)
            for i, v in enumerate(_list(o.opt("variants", []), f"{path}.variants"))
        ),
        parent_block=parent_id,   # nesting is the single source of the parent
        selected_variant=None if not o.has("selectedVariant")
        else _str(o.opt("selectedVariant"), f"{path}.selectedVariant"),
        discussion=_str_list(o.opt("discussion", []), f"{path}.discussion"),
        version=_str(o.opt("version", ""), f"{path}.version"),
    )
    o.done()
    return block


def _parse_package(raw: Any, path: str) -> SpPackage:
    o = _Obj(raw, path)
    pkg = SpPackage(
        name=_str(o.req("name"), f"{path}.name"),
        elements=_parse_decomposition(o.opt("elements", {}), f"{path}.elements"),
    )
    o.done()
    return pkg


def _parse_decomposition(raw: Any, path: str) -> DecompositionModel:
    o = _Obj(raw, path)
    dm = DecompositionModel(
        blocks=tuple(_parse_sp_block(v, f"{path}.blocks[{i}]", None)
                     for i, v in enumerate(_list(o.opt("blocks", []), f"{path}.blocks"))),
        relations=tuple(_parse_sp_relation(v, f"{path}.relations[{i}]")
                        for i, v in enumerate(_list(o.opt("relations", []), f"{path}.relations"))),
        packages=tuple(_parse_package(v, f"{path}.packages[{i}]")
                       for i, v in enumerate(_list(o.opt("packages", []), f"{path}.packages"))),
        notes=_str_list(o.opt("notes", []), f"{path}.notes"),
    )
    o.done()
    return dm


def _parse_structural(raw: Any, path: str) -> StructuralModel:
    o = _Obj(raw, path)
    sm = StructuralModel(
        top_models=tuple(_parse_decomposition(v, f"{path}.topModels[{i}]")
                         for i, v in enumerate(_list(o.opt("topModels", []), f"{path}.topModels"))),
    )
    o.done()
    return sm


def _parse_knowledge_entry(raw: Any, path: str) -> KnowledgeEntry:
    o = _Obj(raw, path)
    entry = KnowledgeEntry(
        id=_str(o.req("id"), f"{path}.id"),
        name=_str(o.req("name"), f"{path}.name"),
        type=_str(o.req("type"), f"{path}.type"),
        year_of_availability=None if not o.has("yearOfAvailability")
        else _int(o.opt("yearOfAvailability"), f"{path}.yearOfAvailability"),
        properties=_parse_properties(o.opt("properties", []), f"{path}.properties"),
    )
    o.done()
    return entry


def _parse_trace_link(raw: Any, path: str) -> TraceLink:
    o = _Obj(raw, path)
    kind = _enum(o.req("kind"), f"{path}.kind", TraceKind)
    if kind is TraceKind.CONSTRAINS:
        # Derived from requirement targets; a document never carries them.
        raise SchemaError(f"{path}.kind", "References | Allocate (Constrains is derived from targets)",
                          '"Constrains"')
    link = TraceLink(
        id=_str(o.req("id"), f"{path}.id"),
        kind=kind,
        source=_str(o.req("source"), f"{path}.source"),
        target=_str(o.req("target"), f"{path}.target"),
    )
    o.done()
    return link


def model_from_obj(raw: Any) -> Model:
    """Build a Model from decoded JSON; strict about shape, silent on semantics."""
    o = _Obj(raw, "$")
    for key in TOP_LEVEL_KEYS:
        if not o.has(key):
            raise SchemaError(f"$.{key}", "a value", "missing key")
    version = _str(o.req("imogVersion"), "$.imogVersion")
    strategy = tuple(_parse_strategy_div(v, f"$.strategy[{i}]")
                     for i, v in enumerate(_list(o.req("strategy"), "$.strategy")))
    functional = _parse_functional(o.req("functional"), "$.functional")
    quality = tuple(_parse_requirement(v, f"$.quality[{i}]")
                    for i, v in enumerate(_list(o.req("quality"), "$.quality")))
    structural = _parse_structural(o.req("structural"), "$.structural")
    knowledge = tuple(_parse_knowledge_entry(v, f"$.knowledge[{i}]")
                      for i, v in enumerate(_list(o.req("knowledge"), "$.knowledge")))
    traces = [_parse_trace_link(v, f"$.traces[{i}]")
              for i, v in enumerate(_list(o.req("traces"), "$.traces"))]
    o.done()

    # Materialize the Constrains links that requirement targets imply.
    for req in quality:
        for target in req.targets:
            traces.append(TraceLink(constrains_link_id(req.id, target),
                                    TraceKind.CONSTRAINS, req.id, target))

    model = Model(version, strategy, functional, quality, structural, knowledge, tuple(traces))

    seen: set[ElementId] = set()
    for _, _, element_id, _ in iter_elements(model):
        if element_id in seen:
            raise DuplicateIdError(element_id)
        seen.add(element_id)
    return model


def parse_document(text: str) -> Model:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return model_from_obj(raw)


# Fragment parsers, for payloads that embed document pieces (reports, APIs).

def parse_sse_obj(raw: Any, path: str = "$") -> SolutionSpaceDescription:
    return _parse_sse(raw, path)


def parse_refinement_group_obj(raw: Any, path: str = "$") -> RefinementGroup:
    return _parse_refinement_group(raw, path)


def parse_decomposition_obj(raw: Any, path: str = "$") -> DecompositionModel:
    return _parse_decomposition(raw, path)


# ---------------------------------------------------------------------------
# Emitters

def _put(obj: dict, key: str, value: Any, default: Any) -> None:
    if value != default:
        obj[key] = value


def emit_property(prop: Property) -> dict:
    obj: dict[str, Any] = {"name": prop.name, "value": prop.value}
    _put(obj, "unit", prop.unit, "")
    return obj


def _emit_properties(props: tuple[Property, ...]) -> list:
    return [emit_property(p) for p in props]


def _emit_identifiable(ie: IdentifiableElement) -> dict:
    obj: dict[str, Any] = {"id": ie.id, "category": ie.category, "text": ie.text}
    if ie.value is not None:
        obj["value"] = ie.value
    _put(obj, "discussion", list(ie.discussion), [])
    _put(obj, "version", ie.version, "")
    return obj


def _emit_strategy_div(div: StrategyDiv) -> dict:
    obj: dict[str, Any] = {}
    _put(obj, "name", div.name, "")
    _put(obj, "htmlContent", div.html_content, "")
    _put(obj, "embeddedElements", [_emit_identifiable(ie) for ie in div.embedded_elements], [])
    return obj


def _emit_fp_block(block: FpBlock) -> dict:
    obj: dict[str, Any] = {
        "id": block.id,
        "name": block.name,
        "kind": block.kind.value,
        "level": block.level.name,
    }
    _put(obj, "customBlockType", block.custom_block_type, "")
    _put(obj, "description", block.description, "")
    _put(obj, "customProperties", _emit_properties(block.custom_properties), [])
    _put(obj, "userStories", list(block.user_stories), [])
    _put(obj, "discussion", list(block.discussion), [])
    _put(obj, "version", block.version, "")
    return obj


def _emit_fp_relation(rel: FpRelation) -> dict:
    obj: dict[str, Any] = {
        "id": rel.id,
        "kind": rel.kind.value,
        "parent": rel.parent,
        "children": list(rel.children),
    }
    # Mirror the parser's key admission so serializer output always reparses.
    if rel.pc_type is not None and rel.kind in PARENT_CHILD_KINDS:
        obj["pcType"] = rel.pc_type.value
    if rel.cardinality is not None and rel.kind is FpRelationKind.OR:
        obj["cardinality"] = list(rel.cardinality)
    if rel.variation_point is not None and rel.kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
        obj["variationPoint"] = {
            "id": rel.variation_point.id,
            "label": rel.variation_point.label,
            "optionLabels": list(rel.variation_point.option_labels),
        }
    if rel.kind in CUSTOM_KINDS:
        _put(obj, "customType", rel.custom_type, "")
    return obj


def _emit_fp_group(group: FpGroup) -> dict:
    obj: dict[str, Any] = {"id": group.id, "members": list(group.members)}
    _put(obj, "enabled", group.enabled, True)
    return obj


def _emit_functional(fm: FunctionalModel) -> dict:
    obj: dict[str, Any] = {}
    _put(obj, "blocks", [_emit_fp_block(b) for b in fm.blocks], [])
    _put(obj, "relations", [_emit_fp_relation(r) for r in fm.relations], [])
    _put(obj, "groups", [_emit_fp_group(g) for g in fm.groups], [])
    _put(obj, "roots", list(fm.roots), [])
    return obj


def emit_requirement(req: Requirement) -> dict:
    obj: dict[str, Any] = {
        "id": req.id,
        "name": req.name,
        "text": req.text,
        "satisfiability": req.satisfiability,
        "level": req.level.name,
    }
    _put(obj, "futureAvailability",
         "Now" if req.future_availability.is_now else req.future_availability.year, "Now")
    if req.priority is not None:
        obj["priority"] = req.priority
    _put(obj, "stereotypes", list(req.stereotypes), [])
    _put(obj, "assignee", req.assignee, "")
    if req.parent is not None:
        obj["parent"] = req.parent
    if req.parent_type is not None:
        obj["parentType"] = req.parent_type.value
    _put(obj, "targets", list(req.targets), [])
    _put(obj, "customAttributes", _emit_properties(req.custom_attributes), [])
    _put(obj, "reasoning", req.reasoning, "")
    _put(obj, "discussion", list(req.discussion), [])
    _put(obj, "version", req.version, "")
    return obj


def emit_sse(sse: SolutionSpaceDescription) -> dict:
    obj: dict[str, Any] = {}
    _put(obj, "payload", sse.payload, "")
    _put(obj, "inputProperties", list(sse.input_properties), [])
    _put(obj, "outputProperties", list(sse.output_properties), [])
    return obj


def _emit_refinement_block(rb: RefinementBlock) -> dict:
    obj: dict[str, Any] = {"id": rb.id, "name": rb.name}
    _put(obj, "description", rb.description, "")
    _put(obj, "stereotype", rb.stereotype, "")
    _put(obj, "properties", _emit_properties(rb.properties), [])
    _put(obj, "refinementGroups", [emit_refinement_group(g) for g in rb.refinement_groups], [])
    _put(obj, "discussion", list(rb.discussion), [])
    _put(obj, "version", rb.version, "")
    return obj


def emit_refinement_group(group: RefinementGroup) -> dict:
    obj: dict[str, Any] = {
        "id": group.id,
        "name": group.name,
        "blocks": [_emit_refinement_block(rb) for rb in group.blocks],
    }
    if group.selected_refinement is not None:
        obj["selectedRefinement"] = group.selected_refinement
    return obj


def _emit_sp_relation(rel: SpRelation) -> dict:
    obj: dict[str, Any] = {
        "id": rel.id,
        "kind": rel.kind.value,
        "source": rel.source,
        "target": rel.target,
    }
    if (rel.kind is not SpRelationKind.CHANNEL
            and rel.direction is not None
            and rel.direction is not Direction.UNIDIRECTIONAL):
        obj["direction"] = rel.direction.value
    _put(obj, "label", rel.label, "")
    _put(obj, "description", rel.description, "")
    _put(obj, "stereotype", rel.stereotype, "")
    _put(obj, "properties", _emit_properties(rel.properties), [])
    if rel.effect_type is not None and rel.kind is SpRelationKind.EFFECT:
        obj["effectType"] = rel.effect_type.value
    if rel.kind is SpRelationKind.EFFECT:
        _put(obj, "endpointType", rel.endpoint_type, "")
    _put(obj, "notes", list(rel.notes), [])
    _put(obj, "discussion", list(rel.discussion), [])
    _put(obj, "version", rel.version, "")
    return obj


def emit_sp_block(block: SpBlock) -> dict:
    obj: dict[str, Any] = {
        "id": block.id,
        "name": block.name,
        "level": block.level.name,
    }
    _put(obj, "description", block.description, "")
    _put(obj, "stereotype", block.stereotype, "")
    _put(obj, "properties", _emit_properties(block.properties), [])
    if block.sse is not None:
        obj["sse"] = emit_sse(block.sse)
    _put(obj, "internalModelRef", block.internal_model_ref, "")
    if not block.decomposition.is_empty():
        obj["decomposition"] = emit_decomposition(block.decomposition)
    _put(obj, "refinementGroups", [emit_refinement_group(g) for g in block.refinement_groups], [])
    _put(obj, "variants", [emit_sp_block(v) for v in block.variants], [])
    if block.selected_variant is not None:
        obj["selectedVariant"] = block.selected_variant
    _put(obj, "discussion", list(block.discussion), [])
    _put(obj, "version", block.version, "")
    return obj


def emit_decomposition(dm: DecompositionModel) -> dict:
    obj: dict[str, Any] = {}
    _put(obj, "blocks", [emit_sp_block(b) for b in dm.blocks], [])
    _put(obj, "relations", [_emit_sp_relation(r) for r in dm.relations], [])
    _put(obj, "packages", [_emit_package(p) for p in dm.packages], [])
    _put(obj, "notes", list(dm.notes), [])
    return obj


def _emit_package(pkg: SpPackage) -> dict:
    obj: dict[str, Any] = {"name": pkg.name}
    if not pkg.elements.is_empty():
        obj["elements"] = emit_decomposition(pkg.elements)
    return obj


def _emit_knowledge_entry(entry: KnowledgeEntry) -> dict:
    obj: dict[str, Any] = {"id": entry.id, "name": entry.name, "type": entry.type}
    if entry.year_of_availability is not None:
        obj["yearOfAvailability"] = entry.year_of_availability
    _put(obj, "properties", _emit_properties(entry.properties), [])
    return obj


def _emit_trace_link(link: TraceLink) -> dict:
    return {"id": link.id, "kind": link.kind.value, "source": link.source, "target": link.target}


def model_to_obj(model: Model) -> dict:
    return {
        "imogVersion": model.imog_version,
        "strategy": [_emit_strategy_div(d) for d in model.strategy],
        "functional": _emit_functional(model.functional),
        "quality": [emit_requirement(r) for r in model.quality],
        "structural": {"topModels": [emit_decomposition(dm) for dm in model.structural.top_models]}
        if model.structural.top_models else {},
        "knowledge": [_emit_knowledge_entry(e) for e in model.knowledge],
        "traces": [_emit_trace_link(l) for l in model.traces if l.kind is not TraceKind.CONSTRAINS],
    }


def canonical_json(obj: Any) -> str:
    """Canonical rendering shared by the document writer, CLI and service."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_document(model: Model) -> str:
    diags = validate_model(model)
    if has_errors(diags):
        raise InvalidModelError(diags)
    return canonical_json(model_to_obj(model))
