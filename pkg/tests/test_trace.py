"""Traceability report and the requirement query language."""

from __future__ import annotations

import pytest

from imog.diagnostics import InvalidModelError
from imog.elements import (
    CONTEXT,
    FutureAvailability,
    Model,
    Requirement,
    TraceKind,
    TraceLink,
)
from imog.trace import (
    Predicate,
    UnknownFieldError,
    build_trace_report,
    parse_predicate,
    query_requirements,
    trace_report_from_obj,
    trace_report_to_obj,
)


def without_link(model: Model, link_id: str) -> Model:
    traces = tuple(t for t in model.traces if t.id != link_id)
    assert len(traces) == len(model.traces) - 1
    return Model(model.imog_version, model.strategy, model.functional,
                 model.quality, model.structural, model.knowledge, traces)


def with_link(model: Model, link: TraceLink) -> Model:
    return Model(model.imog_version, model.strategy, model.functional,
                 model.quality, model.structural, model.knowledge,
                 model.traces + (link,))


# ---------------------------------------------------------------------------
# Report

def test_the_reference_model_reports_clean_allocation(escooter):
    report = build_trace_report(escooter)
    assert report.unallocated_functions == ()
    assert report.unallocated_features == (
        "fp-balancing", "fp-carrying", "fp-comfort", "fp-damping", "fp-driving",
        "fp-insurance", "fp-loading", "fp-maintaining", "fp-simple")
    assert report.dangling_links == ()
    assert report.orphan_requirements == ()
    assert report.knowledge_reuse == (
        ("sp-battery", "ke-cell"), ("sp-controller", "ke-rules"),
        ("sp-motor", "ke-motor"))


def test_removing_an_allocation_exposes_the_function(escooter):
    report = build_trace_report(without_link(escooter, "tr-alloc-limit"))
    assert report.unallocated_functions == ("fn-limiting",)


def test_kind_violating_links_count_as_dangling(escooter):
    bad = TraceLink("tr-wrong", TraceKind.ALLOCATE, "fp-escooter", "req-speed")
    report = build_trace_report(with_link(escooter, bad))
    assert report.dangling_links == ("tr-wrong",)


def test_an_allocation_through_a_misfit_link_does_not_count(escooter):
    model = without_link(escooter, "tr-alloc-limit")
    bad = TraceLink("tr-alloc-limit2", TraceKind.ALLOCATE, "fn-limiting", "req-speed")
    report = build_trace_report(with_link(model, bad))
    assert report.unallocated_functions == ("fn-limiting",)
    assert report.dangling_links == ("tr-alloc-limit2",)


def test_requirements_without_targets_are_orphans(escooter):
    orphan = Requirement(id="req-idle", name="Idle", text="t",
                         satisfiability=0.5, level=CONTEXT)
    model = Model(escooter.imog_version, escooter.strategy, escooter.functional,
                  escooter.quality + (orphan,), escooter.structural,
                  escooter.knowledge, escooter.traces)
    assert build_trace_report(model).orphan_requirements == ("req-idle",)


def test_reports_refuse_invalid_models():
    model = Model(imog_version="0.0")
    with pytest.raises(InvalidModelError):
        build_trace_report(model)


def test_report_objects_round_trip(escooter):
    report = build_trace_report(escooter)
    obj = trace_report_to_obj(report)
    assert obj["knowledgeReuse"][0] == {"block": "sp-battery", "entry": "ke-cell"}
    assert trace_report_from_obj(obj) == report


# ---------------------------------------------------------------------------
# Predicate parsing

def test_predicates_parse_operator_and_json_value():
    pred = parse_predicate("satisfiability>=0.8")
    assert pred == Predicate("satisfiability", ">=", 0.8)
    assert parse_predicate("name==Limited Top Speed").value == "Limited Top Speed"
    assert parse_predicate("priority!=2").value == 2
    assert parse_predicate("stereotypes~User Need").field == "stereotypes"


def test_predicates_without_an_operator_are_rejected():
    with pytest.raises(ValueError):
        parse_predicate("satisfiability")


def test_unknown_fields_are_rejected(escooter):
    with pytest.raises(UnknownFieldError):
        query_requirements(escooter, [Predicate("weight", "==", 1)])


# ---------------------------------------------------------------------------
# Queries

def ids(model, *texts, any_of=False):
    preds = [parse_predicate(t) for t in texts]
    return [r.id for r in query_requirements(model, preds, conjunctive=not any_of)]


def test_comparisons_on_numbers(escooter):
    assert ids(escooter, "satisfiability>=1") == ["req-speed"]
    assert ids(escooter, "satisfiability<0.8") == ["req-range"]
    assert ids(escooter, "priority<=2") == ["req-speed", "req-weight"]
    assert ids(escooter, "satisfiability==0.9") == ["req-carry"]


def test_contains_matches_lists_and_substrings(escooter):
    assert ids(escooter, "stereotypes~User Need") == ["req-carry", "req-range", "req-weight"]
    assert ids(escooter, "name~Speed") == ["req-speed"]
    assert ids(escooter, "targets~fn-carrying-load") == ["req-carry", "req-weight"]


def test_missing_values_match_nothing(escooter):
    # req-range has no priority, so neither == nor != can see it.
    assert "req-range" not in ids(escooter, "priority!=1")
    assert "req-range" not in ids(escooter, "priority==1")
    assert ids(escooter, "assignee==Tier1") == ["req-range"]


def test_conjunctive_and_disjunctive_composition(escooter):
    assert ids(escooter, "stereotypes~User Need", "priority<=2") == ["req-weight"]
    assert ids(escooter, "satisfiability>=1", "assignee==Tier1",
               any_of=True) == ["req-range", "req-speed"]


def test_derived_fields_are_queryable(escooter):
    assert ids(escooter, "status==Confirmed") == ["req-carry", "req-range",
                                                  "req-speed", "req-weight"]
    assert ids(escooter, "parent==req-weight") == ["req-carry"]
    assert ids(escooter, "parentType==Refinement") == ["req-carry"]


def test_availability_ordering_treats_now_as_earliest():
    now_req = Requirement(id="req-now", name="N", text="t", satisfiability=0.5,
                          level=CONTEXT)
    later = Requirement(id="req-later", name="L", text="t", satisfiability=0.5,
                        level=CONTEXT, future_availability=FutureAvailability(2030))
    model = Model(quality=(now_req, later))
    assert ids(model, "futureAvailability<=2029") == ["req-now"]
    assert ids(model, "futureAvailability>2029") == ["req-later"]
    assert ids(model, "futureAvailability==Now") == ["req-now"]


def test_type_mismatches_do_not_match(escooter):
    assert ids(escooter, "satisfiability>bananas") == []
