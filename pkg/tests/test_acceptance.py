"""End-to-end checks of the headline behaviours, one test per guarantee.

Every expected number here was computed with the brute-force oracle in
oracle.py (a powerset filter over the raw model) before being frozen, and
the oracle runs again inside the tests that state it.
"""

from __future__ import annotations

import dataclasses
import json
import random
import time

from imog import fp
from imog.document import (
    canonical_json,
    model_from_obj,
    model_to_obj,
    parse_document,
    serialize_document,
)
from imog.elements import (
    DecompositionModel,
    Model,
    SYSTEM,
    SolutionSpaceDescription,
    SpBlock,
    StructuralModel,
    TraceKind,
    TraceLink,
)
from imog.sp import Origin, SelectionState, resolve_effective_block
from imog.trace import build_trace_report, parse_predicate, query_requirements

from conftest import CLEAN_FIXTURES, FIXTURES, load_fixture
from oracle import brute_force_configurations, brute_force_count, random_functional_model

IN = fp.DecisionState.IN
OUT = fp.DecisionState.OUT


def comparable(configs):
    return sorted((tuple(sorted(sel)), tuple(sorted(vps.items())))
                  for sel, vps in configs)


def engine_configs(model: Model, groups: bool):
    tree = fp.normalize(model, groups_enabled=groups)
    result = fp.enumerate_configurations(tree)
    assert not result.truncated
    return [(c.selected, c.vp_choice_map()) for c in result.configurations]


def test_fixture_configuration_counts_match_the_brute_force_oracle():
    cases = (
        ("escooter_fp_context", False, 16),
        ("escooter_fp_context_require", False, 12),
        ("escooter_fp_context", True, 8),
    )
    for name, groups, expected in cases:
        model = load_fixture(name)
        started = time.perf_counter()
        tree = fp.normalize(model, groups_enabled=groups)
        count = fp.count_configurations(tree)
        oracle = brute_force_count(model, groups_enabled=groups)
        elapsed = time.perf_counter() - started
        assert count == expected == oracle, (name, groups)
        assert elapsed < 1.0, (name, groups, elapsed)


def test_enumeration_equals_the_oracle_on_500_generated_models():
    rng = random.Random(20260816)
    started = time.perf_counter()
    for _ in range(500):
        model = random_functional_model(rng, max_blocks=12)
        expected = comparable(brute_force_configurations(model, groups_enabled=False))
        actual = comparable(engine_configs(model, groups=False))
        assert actual == expected
    assert time.perf_counter() - started < 60.0


def test_excluded_mandatory_siblings_void_the_model_and_kill_every_block():
    tree = fp.normalize(load_fixture("void"))
    assert fp.is_void(tree) is True
    assert fp.count_configurations(tree) == 0
    assert fp.dead_blocks(tree) == ("fp-a", "fp-b", "fp-root")


def test_single_decision_propagation_matches_the_filtered_enumeration():
    tree = fp.normalize(load_fixture("escooter_fp_context"))
    configs = fp.enumerate_configurations(tree).configurations
    for block in sorted(tree.blocks):
        for state in (IN, OUT):
            matching = [c.selected for c in configs
                        if (block in c.selected) == (state is IN)]
            result = fp.propagate(tree, {block: state})
            if not matching:
                assert result.conflict is not None, (block, state)
                continue
            assert result.conflict is None, (block, state)
            assert result.forced_in == frozenset.intersection(*matching), (block, state)
            assert result.forced_out == frozenset(tree.blocks) - frozenset.union(
                *matching), (block, state)

    picked_simple = fp.propagate(tree, {"fp-simple": IN})
    assert "fp-comfort" in picked_simple.forced_out

    no_driving = fp.propagate(tree, {"fp-driving": OUT})
    assert no_driving.conflict is not None


def test_variant_resolution_applies_every_merge_rule_field_by_field():
    generator = load_fixture("sp_variants")
    marine = resolve_effective_block(
        generator, "spb-gen", SelectionState(variant_choices={"spb-gen": "spv-marine"}))

    # the chosen variant's own stored choice folds in first
    assert marine.provenance == ("spb-gen", "spv-marine", "spv-arctic")
    # the most derived name wins
    assert marine.name == "Arctic Marine Generator"
    # properties extend, same names overwritten in place, origins tracked
    assert [(p.name, p.value, p.unit, p.origin) for p in marine.properties] == [
        ("Output Power", 100, "W", Origin.BASE),
        ("Efficiency", 0.65, "", Origin.VARIANT),
        ("Ingress Protection", "IP68", "", Origin.VARIANT),
        ("Heater Power", 30, "W", Origin.VARIANT),
        ("Conductivity", 63, "MS/m", Origin.REFINEMENT),
    ]
    # two shared declared names: the variant's behaviour replaces the base's
    assert marine.sse == SolutionSpaceDescription(
        "marine transfer curves", ("Input Power", "Salinity"), ("Output Power Signal",))
    # decompositions concatenate; the duplicated "Coil" survives
    assert [b.id for b in marine.decomposition.blocks] == [
        "spb-coil", "spb-housing", "spb-coil2", "spb-seal", "spb-heater"]
    assert [b.name for b in marine.decomposition.blocks].count("Coil") == 2
    # a variant group replaces the base group with the same name in place
    assert [(g.id, g.name) for g in marine.refinement_groups] == [
        ("rg-conductor2", "Conductor"), ("rg-cooling", "Cooling")]
    # the replaced group dropped the base refinement and its nested content
    names = {p.name for p in marine.properties}
    assert "Purity" not in names

    # at most one shared declared name: the behaviours merge instead
    escooter = load_fixture("escooter")
    comfort = resolve_effective_block(
        escooter, "sp-escooter",
        SelectionState(variant_choices={"sp-escooter": "spv-comfort"}))
    assert comfort.sse == SolutionSpaceDescription(
        "",
        ("Throttle Position", "Rider Mass", "Road Excitation"),
        ("Driving Speed", "Cabin Acceleration"))

    base = SpBlock(
        "sp-a", "A", SYSTEM,
        sse=SolutionSpaceDescription("base curve", ("X",), ("Y",)),
        variants=(SpBlock("spv-b", "B", SYSTEM, parent_block="sp-a",
                          sse=SolutionSpaceDescription("variant curve", ("Z",), ("X",))),))
    inline = Model(structural=StructuralModel((DecompositionModel(blocks=(base,)),)))
    eff = resolve_effective_block(inline, "sp-a",
                                  SelectionState(variant_choices={"sp-a": "spv-b"}))
    assert eff.sse == SolutionSpaceDescription("base curve\nvariant curve",
                                               ("Z",), ("Y", "X"))


def test_every_fixture_parses_back_identically_and_byte_stably():
    clean = sorted(FIXTURES.glob("*.imog.json"))
    defects = sorted((FIXTURES / "defects").glob("*.imog.json"))
    assert len(clean) == len(CLEAN_FIXTURES) and len(defects) == 12

    for path in clean:
        text = path.read_text(encoding="utf-8")
        model = parse_document(text)
        assert serialize_document(model) == text, path.name
        assert parse_document(serialize_document(model)) == model, path.name

    for path in defects:
        text = path.read_text(encoding="utf-8")
        model = model_from_obj(json.loads(text))
        assert canonical_json(model_to_obj(model)) == text, path.name
        assert model_from_obj(model_to_obj(model)) == model, path.name


def test_trace_report_pinpoints_missing_and_dangling_allocations():
    escooter = load_fixture("escooter")
    baseline = build_trace_report(escooter)
    assert baseline.unallocated_functions == ()
    assert baseline.dangling_links == ()

    removed = dataclasses.replace(
        escooter, traces=tuple(t for t in escooter.traces if t.id != "tr-alloc-limit"))
    assert len(removed.traces) == len(escooter.traces) - 1
    assert build_trace_report(removed).unallocated_functions == ("fn-limiting",)

    bad = TraceLink("tr-wrong", TraceKind.ALLOCATE, "fp-escooter", "req-speed")
    injected = dataclasses.replace(escooter, traces=escooter.traces + (bad,))
    assert build_trace_report(injected).dangling_links == ("tr-wrong",)


def test_querying_full_satisfiability_returns_exactly_the_safety_requirement():
    escooter = load_fixture("escooter")
    assert len(escooter.quality) == 4
    hits = query_requirements(escooter, [parse_predicate("satisfiability>=1")])
    assert [r.id for r in hits] == ["req-speed"]
    assert hits[0].stereotypes == ("Safety Requirement",)
