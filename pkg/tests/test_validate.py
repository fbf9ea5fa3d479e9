"""Model checking: finding codes, reference resolution, level filtering."""

from __future__ import annotations

import pytest

from imog.diagnostics import Severity, has_errors
from imog.elements import (
    CONTEXT,
    SYSTEM,
    AbstractionLevel,
    DecompositionModel,
    EffectType,
    FpBlock,
    FpBlockKind,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    IdentifiableElement,
    Model,
    PcType,
    Property,
    RefinementBlock,
    RefinementGroup,
    Requirement,
    SpBlock,
    SpRelation,
    SpRelationKind,
    StrategyDiv,
    StructuralModel,
    TraceLink,
    TraceKind,
)
from imog.validate import (
    EmptyFilterError,
    NotFoundError,
    build_index,
    filter_by_abstraction_level,
    resolve_reference,
    validate_model,
)

from conftest import defect_path, load_fixture
from imog.document import parse_document


def codes(model: Model) -> list[str]:
    return [d.code for d in validate_model(model)]


def single_feature(block_id: str = "fp-a", name: str = "A") -> FpBlock:
    return FpBlock(block_id, name, FpBlockKind.FEATURE, CONTEXT)


def functional_only(*, blocks, relations=(), roots) -> Model:
    return Model(functional=FunctionalModel(tuple(blocks), tuple(relations), roots=tuple(roots)))


# ---------------------------------------------------------------------------
# Clean fixtures

@pytest.mark.parametrize("name", ["escooter", "escooter_fp_context",
                                  "escooter_fp_context_require", "void",
                                  "dead_block", "minimal"])
def test_reference_fixtures_have_no_findings(name):
    assert validate_model(load_fixture(name)) == []


def test_variants_fixture_reports_only_the_replacement_note(variants_model):
    diags = validate_model(variants_model)
    assert [d.code for d in diags] == ["SP-SSEINFO"]
    assert diags[0].severity is Severity.INFO
    assert not has_errors(diags)


# ---------------------------------------------------------------------------
# Defect fixtures, one finding each

DEFECT_EXPECTATIONS = {
    "fp_card": ("FP-CARD", Severity.ERROR),
    "vp_cycle": ("FP-VPCYCLE", Severity.ERROR),
    "id_dangling": ("ID-DANGLING", Severity.ERROR),
    "qp_sat": ("QP-SAT", Severity.ERROR),
    "sse_disj": ("SSE-DISJ", Severity.ERROR),
    "rg_selref": ("RG-SELREF", Severity.ERROR),
    "sp_selvar": ("SP-SELVAR", Severity.ERROR),
    "fp_forest": ("FP-FOREST", Severity.ERROR),
    "vp_label": ("FP-VPLABEL", Severity.ERROR),
    "qp_status": ("QP-STATUS", Severity.ERROR),
    "tr_kind": ("TR-KIND", Severity.WARNING),
    "fp_roots": ("FP-ROOTS", Severity.ERROR),
}


@pytest.mark.parametrize("name", sorted(DEFECT_EXPECTATIONS))
def test_defect_fixture_yields_exactly_its_finding(name):
    expected_code, expected_severity = DEFECT_EXPECTATIONS[name]
    model = parse_document(defect_path(name).read_text(encoding="utf-8"))
    diags = validate_model(model)
    assert [(d.code, d.severity) for d in diags] == [(expected_code, expected_severity)]


# ---------------------------------------------------------------------------
# Findings only reachable through programmatic models

def test_duplicate_ids_across_perspectives_are_flagged():
    model = Model(
        functional=FunctionalModel((single_feature("shared"),), roots=("shared",)),
        quality=(Requirement(id="shared", name="R", text="t",
                             satisfiability=0.5, level=CONTEXT),))
    assert "ID-DUP" in codes(model)


def test_empty_id_and_empty_level_are_flagged():
    model = functional_only(
        blocks=[FpBlock("", "A", FpBlockKind.FEATURE, AbstractionLevel(""))],
        roots=[""])
    found = codes(model)
    assert "ID-EMPTY" in found and "LEVEL-EMPTY" in found


def test_property_names_must_be_non_empty():
    block = FpBlock("fp-a", "A", FpBlockKind.FEATURE, CONTEXT,
                    custom_properties=(Property("", 1),))
    model = functional_only(blocks=[block], roots=["fp-a"])
    assert "PROP-NAME" in codes(model)


def test_availability_property_value_must_be_a_year_or_timestamp():
    block = SpBlock("sp-a", "A", SYSTEM, properties=(Property("Availability", True),))
    model = Model(structural=StructuralModel((DecompositionModel(blocks=(block,)),)))
    assert "PROP-AVAIL" in codes(model)


def test_feasibility_property_value_must_be_a_probability():
    block = SpBlock("sp-a", "A", SYSTEM, properties=(Property("Feasibility", 1.5),))
    model = Model(structural=StructuralModel((DecompositionModel(blocks=(block,)),)))
    assert "PROP-FEAS" in codes(model)


def test_strategy_elements_need_text():
    div = StrategyDiv(name="Mission", embedded_elements=(
        IdentifiableElement("ie-a", "Goal", ""),))
    assert "IE-TEXT" in codes(Model(strategy=(div,)))


def test_relation_endpoint_of_wrong_perspective_is_flagged():
    model = Model(
        functional=FunctionalModel(
            (single_feature(),),
            (FpRelation("rel-m", FpRelationKind.MANDATORY, "fp-a", ("req-b",)),),
            roots=("fp-a",)),
        quality=(Requirement(id="req-b", name="R", text="t",
                             satisfiability=0.5, level=CONTEXT),))
    assert "FP-ENDPOINT" in codes(model)


def test_refinement_typed_or_must_pick_exactly_one():
    model = functional_only(
        blocks=[single_feature("fp-r", "Root"), single_feature("fp-a", "A"),
                single_feature("fp-b", "B")],
        relations=[FpRelation("rel-or", FpRelationKind.OR, "fp-r", ("fp-a", "fp-b"),
                              cardinality=(1, 2), pc_type=PcType.REFINEMENT)],
        roots=["fp-r"])
    assert "FP-REFCARD" in codes(model)


def test_misplaced_relation_fields_are_flagged():
    model = functional_only(
        blocks=[single_feature("fp-r", "Root"), single_feature("fp-a", "A")],
        relations=[FpRelation("rel-m", FpRelationKind.MANDATORY, "fp-r", ("fp-a",),
                              cardinality=(1, 1))],
        roots=["fp-r"])
    assert "FP-SHAPE" in codes(model)


def test_requirement_parent_cycle_is_flagged():
    reqs = (
        Requirement(id="req-a", name="A", text="t", satisfiability=0.5,
                    level=CONTEXT, parent="req-b"),
        Requirement(id="req-b", name="B", text="t", satisfiability=0.5,
                    level=CONTEXT, parent="req-a"),
    )
    assert "QP-PARENT" in codes(Model(quality=reqs))


def test_block_and_refinement_pool_property_names_must_be_disjoint():
    group = RefinementGroup("rg-a", "G", blocks=(
        RefinementBlock("rb-a", "RA", properties=(Property("Mass", 1, "kg"),)),))
    block = SpBlock("sp-a", "A", SYSTEM, properties=(Property("Mass", 2, "kg"),),
                    refinement_groups=(group,))
    model = Model(structural=StructuralModel((DecompositionModel(blocks=(block,)),)))
    assert "SP-PROPDISJ" in codes(model)


def test_refinement_group_needs_members():
    block = SpBlock("sp-a", "A", SYSTEM,
                    refinement_groups=(RefinementGroup("rg-a", "G", blocks=()),))
    model = Model(structural=StructuralModel((DecompositionModel(blocks=(block,)),)))
    assert "RG-EMPTY" in codes(model)


def test_channel_endpoints_must_be_structural_blocks():
    block = SpBlock("sp-a", "A", SYSTEM)
    rel = SpRelation("spr-x", SpRelationKind.CHANNEL, "sp-a", "req-b")
    model = Model(
        structural=StructuralModel((DecompositionModel(blocks=(block,), relations=(rel,)),)),
        quality=(Requirement(id="req-b", name="R", text="t",
                             satisfiability=0.5, level=CONTEXT),))
    assert "SPR-ENDPOINT" in codes(model)


def test_effect_fields_are_only_legal_on_effects():
    blocks = (SpBlock("sp-a", "A", SYSTEM), SpBlock("sp-b", "B", SYSTEM))
    rel = SpRelation("spr-x", SpRelationKind.CHANNEL, "sp-a", "sp-b",
                     effect_type=EffectType.DESIRED)
    model = Model(structural=StructuralModel(
        (DecompositionModel(blocks=blocks, relations=(rel,)),)))
    assert "SPR-EFFECT" in codes(model)


def test_unsupported_document_version_is_flagged():
    assert codes(Model(imog_version="9.9")) == ["DOC-VERSION"]


def test_findings_come_out_sorted():
    model = functional_only(
        blocks=[FpBlock("", "", FpBlockKind.FEATURE, AbstractionLevel(""))],
        roots=[""])
    diags = validate_model(model)
    assert diags == sorted(diags, key=lambda d: d.sort_key())
    assert len(diags) >= 2


# ---------------------------------------------------------------------------
# Reference resolution

def test_resolve_reference_finds_elements_in_every_perspective(escooter):
    assert resolve_reference(escooter, "fp-escooter").perspective == "functional"
    assert resolve_reference(escooter, "req-speed").perspective == "quality"
    assert resolve_reference(escooter, "sp-motor").perspective == "structural"
    assert resolve_reference(escooter, "ke-motor").perspective == "knowledge"
    assert resolve_reference(escooter, "ie-goal-1").perspective == "strategy"
    assert resolve_reference(escooter, "vp-type").kind == "variation_point"
    assert resolve_reference(escooter, "rb-copper").kind == "refinement_block"


def test_resolve_reference_raises_on_unknown_id(escooter):
    with pytest.raises(NotFoundError):
        resolve_reference(escooter, "does-not-exist")


def test_index_covers_loader_materialized_requirement_links(escooter):
    index = build_index(escooter)
    assert "constrains::req-speed::fn-limiting" in index


# ---------------------------------------------------------------------------
# Level filtering

def test_context_filter_keeps_only_context_leveled_elements(escooter):
    filtered = filter_by_abstraction_level(escooter, {CONTEXT})
    fp_ids = {b.id for b in filtered.functional.blocks}
    assert fp_ids == {"fp-escooter", "fp-driving", "fp-damping", "fp-insurance",
                      "fp-loading", "fp-simple", "fp-comfort", "fp-carrying",
                      "fp-balancing", "fp-maintaining"}
    rel_ids = {r.id for r in filtered.functional.relations}
    assert "rel-fn-acc" not in rel_ids and "rel-controller" not in rel_ids
    assert {r.id for r in filtered.quality} == {"req-speed", "req-weight",
                                                "req-carry", "req-range"}
    top = filtered.structural.top_models[0]
    assert {b.id for b in top.blocks} == {"sp-driver", "sp-road", "sp-escooter"}
    # System-level internals of the scooter are gone, context variants stay.
    escooter_block = next(b for b in top.blocks if b.id == "sp-escooter")
    assert escooter_block.decomposition.blocks == ()
    assert {v.id for v in escooter_block.variants} == {"spv-comfort", "spv-simple"}
    # Trace links survive only with both endpoints present.
    trace_ids = {t.id for t in filtered.traces}
    assert "tr-alloc-root" in trace_ids
    assert "tr-alloc-acc" not in trace_ids
    # Unleveled perspectives are untouched.
    assert filtered.strategy == escooter.strategy
    assert filtered.knowledge == escooter.knowledge


def test_filtered_model_still_validates_clean(escooter):
    for levels in ({CONTEXT}, {SYSTEM}, {CONTEXT, SYSTEM}):
        assert validate_model(filter_by_abstraction_level(escooter, levels)) == []


def test_filter_requires_at_least_one_level(escooter):
    with pytest.raises(EmptyFilterError):
        filter_by_abstraction_level(escooter, set())


def test_filter_drops_requirement_targets_that_did_not_survive(escooter):
    filtered = filter_by_abstraction_level(escooter, {CONTEXT})
    req = next(r for r in filtered.quality if r.id == "req-weight")
    assert req.targets == ("fp-escooter",)
