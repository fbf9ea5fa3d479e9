"""Cross-perspective trace analysis and requirement queries."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .diagnostics import InvalidModelError, has_errors
from .elements import (
    ElementId,
    FpBlockKind,
    Model,
    Requirement,
    TraceKind,
)
from .validate import build_index, trace_link_fits, validate_model


@dataclass(frozen=True)
class TraceReport:
    """What the trace links do and do not cover, all lists sorted by id."""

    unallocated_functions: tuple[ElementId, ...]   # functions with no allocation
    unallocated_features: tuple[ElementId, ...]    # features with no allocation
    dangling_links: tuple[ElementId, ...]          # links whose endpoints don't fit their kind
    orphan_requirements: tuple[ElementId, ...]     # requirements constraining nothing
    knowledge_reuse: tuple[tuple[ElementId, ElementId], ...]   # (block, knowledge entry)


def build_trace_report(model: Model) -> TraceReport:
    """Summarize allocation coverage; refuses models with error findings."""
    diags = validate_model(model)
    if has_errors(diags):
        raise InvalidModelError(diags)
    index = build_index(model)

    allocated: set[ElementId] = set()
    dangling: list[ElementId] = []
    reuse: list[tuple[ElementId, ElementId]] = []
    for link in model.traces:
        if not trace_link_fits(link, index):
            dangling.append(link.id)
            continue
        if link.kind is TraceKind.ALLOCATE:
            allocated.add(link.source)
        elif (link.kind is TraceKind.REFERENCES
              and index[link.source].kind == "sp_block"
              and index[link.target].kind == "knowledge_entry"):
            reuse.append((link.source, link.target))

    functions = sorted(b.id for b in model.functional.blocks
                       if b.kind is FpBlockKind.FUNCTION and b.id not in allocated)
    features = sorted(b.id for b in model.functional.blocks
                      if b.kind is FpBlockKind.FEATURE and b.id not in allocated)
    orphans = sorted(r.id for r in model.quality if not r.targets)

    return TraceReport(
        unallocated_functions=tuple(functions),
        unallocated_features=tuple(features),
        dangling_links=tuple(sorted(dangling)),
        orphan_requirements=tuple(orphans),
        knowledge_reuse=tuple(sorted(reuse)),
    )


def trace_report_to_obj(report: TraceReport) -> dict:
    return {
        "unallocatedFunctions": list(report.unallocated_functions),
        "unallocatedFeatures": list(report.unallocated_features),
        "danglingLinks": list(report.dangling_links),
        "orphanRequirements": list(report.orphan_requirements),
        "knowledgeReuse": [{"block": b, "entry": e} for b, e in report.knowledge_reuse],
    }


def trace_report_from_obj(obj: dict) -> TraceReport:
    return TraceReport(
        tuple(obj.get("unallocatedFunctions", [])),
        tuple(obj.get("unallocatedFeatures", [])),
        tuple(obj.get("danglingLinks", [])),
        tuple(obj.get("orphanRequirements", [])),
        tuple((row["block"], row["entry"]) for row in obj.get("knowledgeReuse", [])),
    )


# ---------------------------------------------------------------------------
# Requirement queries

class UnknownFieldError(ValueError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"unknown requirement field {field!r}")


OPS = ("==", "!=", "<=", ">=", "<", ">", "~")
OP_NAMES = {"eq": "==", "ne": "!=", "le": "<=", "ge": ">=", "lt": "<", "gt": ">",
            "contains": "~"}

# Scalar fields compare with any operator; list fields only with "~".
_SCALAR_FIELDS = ("id", "name", "text", "satisfiability", "level", "futureAvailability",
                  "priority", "assignee", "parent", "parentType", "reasoning", "version",
                  "status")
_LIST_FIELDS = ("stereotypes", "targets", "discussion")


@dataclass(frozen=True)
class Predicate:
    field: str
    op: str       # one of OPS, or an OP_NAMES key
    value: object

    def normalized_op(self) -> str:
        return OP_NAMES.get(self.op, self.op)


def parse_predicate(text: str) -> Predicate:
    """Parse "field<op>value"; the value reads as JSON when it can, else verbatim."""
    for op in OPS:
        split = text.find(op)
        if split > 0:
            field = text[:split].strip()
            raw = text[split + len(op):].strip()
            try:
                value = json.loads(raw)
            except json.JSONDecodeError:
                value = raw
            return Predicate(field, op, value)
    raise ValueError(f"no comparison operator in {text!r}")


def _availability_key(value: object) -> tuple[int, int]:
    if value == "Now":
        return (0, 0)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"availability compares against \"Now\" or a year, not {value!r}")
    return (1, value)


def _field_value(req: Requirement, field: str) -> object:
    if field == "id":
        return req.id
    if field == "name":
        return req.name
    if field == "text":
        return req.text
    if field == "satisfiability":
        return req.satisfiability
    if field == "level":
        return req.level.name
    if field == "futureAvailability":
        return req.future_availability.sort_key()
    if field == "priority":
        return req.priority
    if field == "assignee":
        return req.assignee
    if field == "parent":
        return req.parent
    if field == "parentType":
        return None if req.parent_type is None else req.parent_type.value
    if field == "reasoning":
        return req.reasoning
    if field == "version":
        return req.version
    if field == "status":
        return req.status
    if field == "stereotypes":
        return req.stereotypes
    if field == "targets":
        return req.targets
    if field == "discussion":
        return req.discussion
    raise UnknownFieldError(field)


def _matches(req: Requirement, predicate: Predicate) -> bool:
    field, op = predicate.field, predicate.normalized_op()
    if field not in _SCALAR_FIELDS and field not in _LIST_FIELDS:
        raise UnknownFieldError(field)
    actual = _field_value(req, field)
    wanted = predicate.value

    if field in _LIST_FIELDS:
        if op != "~":
            raise ValueError(f"list field {field!r} only supports the contains operator")
        return wanted in actual  # type: ignore[operator]

    if op == "~":
        return isinstance(actual, str) and isinstance(wanted, str) and wanted in actual

    if field == "futureAvailability":
        wanted = _availability_key(wanted)
    if actual is None:
        return False   # an unset field matches nothing, not even !=

    try:
        if op == "==":
            return actual == wanted
        if op == "!=":
            return actual != wanted
        if op == "<":
            return actual < wanted       # type: ignore[operator]
        if op == "<=":
            return actual <= wanted      # type: ignore[operator]
        if op == ">":
            return actual > wanted       # type: ignore[operator]
        if op == ">=":
            return actual >= wanted      # type: ignore[operator]
    except TypeError:
        return False
    raise ValueError(f"unknown operator {predicate.op!r}")


def query_requirements(model: Model, predicates: Iterable[Predicate],
                       conjunctive: bool = True) -> tuple[Requirement, ...]:
    """Requirements matching the predicates (all of them, or any), ordered by id."""
    predicates = tuple(predicates)

    def keep(req: Requirement) -> bool:
        if not predicates:
            return True
        hits = (_matches(req, p) for p in predicates)
        return all(hits) if conjunctive else any(hits)

    return tuple(sorted((r for r in model.quality if keep(r)), key=lambda r: r.id))
