"""Regenerate the test fixture documents under tests/fixtures/.

Well-formed fixtures are built through the package API and written with the
canonical serializer, so they stay in canonical form by construction. The
defect fixtures are written as raw JSON because the serializer refuses
models with error findings.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

from imog.document import canonical_json, model_from_obj, model_to_obj, serialize_document
from imog.elements import (
    COMPONENT,
    CONTEXT,
    SYSTEM,
    DecompositionModel,
    EffectType,
    FpBlock,
    FpBlockKind,
    FpGroup,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    IdentifiableElement,
    KnowledgeEntry,
    Model,
    PcType,
    Property,
    RefinementBlock,
    RefinementGroup,
    Requirement,
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
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FEATURE = FpBlockKind.FEATURE
FUNCTION = FpBlockKind.FUNCTION


def feature(block_id: str, name: str, level=CONTEXT) -> FpBlock:
    return FpBlock(block_id, name, FEATURE, level)


def function(block_id: str, name: str, level=SYSTEM) -> FpBlock:
    return FpBlock(block_id, name, FUNCTION, level)


def mandatory(rel_id: str, parent: str, child: str) -> FpRelation:
    return FpRelation(rel_id, FpRelationKind.MANDATORY, parent, (child,))


def optional(rel_id: str, parent: str, child: str) -> FpRelation:
    return FpRelation(rel_id, FpRelationKind.OPTIONAL, parent, (child,))


# ---------------------------------------------------------------------------
# E-scooter, context slice: the ten feature blocks and their tree

def context_functional() -> FunctionalModel:
    blocks = (
        feature("fp-escooter", "E-Scooter"),
        feature("fp-driving", "Driving"),
        feature("fp-damping", "Damping"),
        feature("fp-insurance", "Insurance"),
        feature("fp-loading", "Loading Capability"),
        feature("fp-simple", "Simple"),
        feature("fp-comfort", "Comfort"),
        feature("fp-carrying", "Carrying"),
        feature("fp-balancing", "Balancing"),
        feature("fp-maintaining", "Maintaining"),
    )
    relations = (
        mandatory("rel-driving", "fp-escooter", "fp-driving"),
        mandatory("rel-damping", "fp-escooter", "fp-damping"),
        mandatory("rel-insurance", "fp-escooter", "fp-insurance"),
        optional("rel-loading", "fp-escooter", "fp-loading"),
        FpRelation("rel-type", FpRelationKind.ALTERNATIVE, "fp-escooter",
                   ("fp-simple", "fp-comfort"),
                   variation_point=VariationPoint("vp-type", "E-Scooter Type",
                                                  ("Simple", "Comfort"))),
        FpRelation("rel-choice", FpRelationKind.OR, "fp-escooter",
                   ("fp-carrying", "fp-balancing", "fp-maintaining"),
                   cardinality=(2, 3)),
    )
    groups = (FpGroup("grp-stability", ("fp-carrying", "fp-balancing")),)
    return FunctionalModel(blocks, relations, groups, roots=("fp-escooter",))


def context_model() -> Model:
    return Model(functional=context_functional())


def context_require_model() -> Model:
    fm = context_functional()
    require = FpRelation("rel-needs-comfort", FpRelationKind.REQUIRE,
                         "fp-loading", ("fp-comfort",))
    return Model(functional=FunctionalModel(fm.blocks, fm.relations + (require,),
                                            fm.groups, fm.roots))


# ---------------------------------------------------------------------------
# E-scooter, full grid

def full_functional() -> FunctionalModel:
    fm = context_functional()
    blocks = fm.blocks + (
        function("fn-accelerating", "Accelerating"),
        function("fn-braking", "Braking"),
        function("fn-limiting", "Limiting Speed"),
        function("fn-absorbing", "Absorbing Shocks"),
        function("fn-displaying", "Displaying Status"),
        function("fn-carrying-load", "Carrying Load"),
        feature("cs-basic", "Basic Controller", SYSTEM),
        feature("cs-premium", "Premium Controller", SYSTEM),
        function("cf-pwm", "PWM Control", COMPONENT),
        function("cf-token", "Token Validation", COMPONENT),
    )
    relations = fm.relations + (
        mandatory("rel-fn-acc", "fp-driving", "fn-accelerating"),
        mandatory("rel-fn-brake", "fp-driving", "fn-braking"),
        mandatory("rel-fn-limit", "fp-driving", "fn-limiting"),
        mandatory("rel-fn-absorb", "fp-damping", "fn-absorbing"),
        mandatory("rel-fn-display", "fp-escooter", "fn-displaying"),
        mandatory("rel-fn-load", "fp-loading", "fn-carrying-load"),
        FpRelation("rel-controller", FpRelationKind.ALTERNATIVE, "fp-escooter",
                   ("cs-basic", "cs-premium"),
                   variation_point=VariationPoint("vp-controller", "Controller Type",
                                                  ("Simple", "Comfort"))),
        # The scooter type dictates the controller: same labels, same pick.
        FpRelation("rel-derive", FpRelationKind.VP_DERIVATION, "vp-type",
                   ("vp-controller",)),
        mandatory("rel-cf-pwm", "fn-accelerating", "cf-pwm"),
        mandatory("rel-cf-token", "fp-insurance", "cf-token"),
    )
    return FunctionalModel(blocks, relations, fm.groups, fm.roots)


def full_quality() -> tuple[Requirement, ...]:
    return (
        Requirement(
            id="req-speed", name="Limited Top Speed",
            text="The e-scooter must not exceed 20 km/h under its own power.",
            satisfiability=1.0, level=CONTEXT, priority=1,
            stereotypes=("Safety Requirement",), assignee="OEM",
            targets=("fn-limiting",),
            custom_attributes=(Property("Maximum Speed", 20, "km/h"),),
            reasoning="Local regulations cap motorized scooter speed."),
        Requirement(
            id="req-weight", name="Carryable Weight",
            text="The e-scooter should weigh no more than 12 kg.",
            satisfiability=0.8, level=CONTEXT, priority=2,
            stereotypes=("User Need",), assignee="OEM",
            targets=("fn-carrying-load", "fp-escooter"),
            custom_attributes=(Property("Weight", 12, "kg"),)),
        Requirement(
            id="req-carry", name="Rider Payload",
            text="A rider of up to 120 kg must be carried safely.",
            satisfiability=0.9, level=CONTEXT, priority=3,
            stereotypes=("User Need",),
            parent="req-weight", parent_type=PcType.REFINEMENT,
            targets=("fn-carrying-load",),
            custom_attributes=(Property("Payload", 120, "kg"),)),
        Requirement(
            id="req-range", name="Commuting Range",
            text="One charge should cover 25 km of mixed urban riding.",
            satisfiability=0.7, level=CONTEXT,
            stereotypes=("User Need",), assignee="Tier1",
            targets=("fn-accelerating",),
            custom_attributes=(Property("Range", 25, "km"),)),
    )


def full_structural() -> StructuralModel:
    motor = SpBlock(
        "sp-motor", "Motor", SYSTEM, stereotype="Part",
        properties=(Property("Peak Power", 500, "W"),),
        refinement_groups=(
            RefinementGroup(
                "rg-conductor", "Conductor",
                blocks=(
                    RefinementBlock("rb-copper", "Copper", stereotype="Technology",
                                    properties=(Property("Conductivity", 58, "MS/m"),
                                                Property("Conductor Mass", 1.2, "kg"))),
                    RefinementBlock("rb-iron", "Iron", stereotype="Technology",
                                    properties=(Property("Conductivity", 10, "MS/m"),
                                                Property("Conductor Mass", 0.9, "kg"))),
                ),
                selected_refinement="rb-copper"),
        ))
    battery = SpBlock("sp-battery", "Battery", SYSTEM, stereotype="Part",
                      properties=(Property("Capacity", 360, "Wh"),
                                  Property("Availability", 2026)))
    controller = SpBlock("sp-controller", "Controller", SYSTEM, stereotype="Logic")
    frame = SpBlock("sp-frame", "Frame", SYSTEM, stereotype="Part")
    gearbox = SpBlock("sp-gearbox", "Gearbox", SYSTEM, stereotype="Part")

    comfort_variant = SpBlock(
        "spv-comfort", "Comfort E-Scooter", CONTEXT, stereotype="Innovation",
        parent_block="sp-escooter",
        properties=(Property("Weight", 15, "kg"), Property("Suspension Travel", 40, "mm")),
        sse=SolutionSpaceDescription(
            input_properties=("Road Excitation",),
            output_properties=("Cabin Acceleration",)),
        decomposition=DecompositionModel(
            blocks=(SpBlock("spv-damper", "Damper", SYSTEM, stereotype="Part"),),
            relations=(SpRelation("spr-eff-damp", SpRelationKind.EFFECT,
                                  "spv-damper", "sp-frame",
                                  effect_type=EffectType.DESIRED,
                                  endpoint_type="mechanical",
                                  description="damps frame oscillation"),)))
    simple_variant = SpBlock("spv-simple", "Simple E-Scooter", CONTEXT,
                             stereotype="Innovation", parent_block="sp-escooter",
                             properties=(Property("Weight", 10, "kg"),))

    escooter = SpBlock(
        "sp-escooter", "E-Scooter", CONTEXT, stereotype="Innovation",
        properties=(Property("Weight", 12, "kg"), Property("Availability", 2027)),
        sse=SolutionSpaceDescription(
            input_properties=("Throttle Position", "Rider Mass"),
            output_properties=("Driving Speed",)),
        decomposition=DecompositionModel(
            blocks=(motor, battery, controller, frame),
            relations=(
                SpRelation("spr-ch-power", SpRelationKind.CHANNEL, "sp-battery", "sp-motor",
                           label="DC power"),
                SpRelation("spr-ch-ctl", SpRelationKind.CHANNEL, "sp-controller", "sp-motor",
                           label="PWM"),
                SpRelation("spr-arrow-cmd", SpRelationKind.ARROW, "sp-controller", "sp-battery",
                           label="load request"),
            ),
            packages=(SpPackage("Drivetrain", DecompositionModel(blocks=(gearbox,))),),
            notes=("Drivetrain split pending supplier decision.",)),
        variants=(comfort_variant, simple_variant))

    top = DecompositionModel(
        blocks=(
            SpBlock("sp-driver", "Driver", CONTEXT, stereotype="Environment"),
            SpBlock("sp-road", "Road", CONTEXT, stereotype="Environment"),
            escooter,
        ),
        relations=(
            SpRelation("spr-eff-road", SpRelationKind.EFFECT, "sp-road", "sp-escooter",
                       effect_type=EffectType.UNDESIRED, endpoint_type="mechanical",
                       description="incoming forces from surface roughness"),
            SpRelation("spr-eff-weight", SpRelationKind.EFFECT, "sp-driver", "sp-escooter",
                       effect_type=EffectType.DESIRED, endpoint_type="mechanical",
                       label="rider weight"),
            SpRelation("spr-ch-hmi", SpRelationKind.CHANNEL, "sp-driver", "sp-escooter",
                       label="controls and display"),
        ))
    return StructuralModel((top,))


def full_model() -> Model:
    strategy = (StrategyDiv(
        name="Mission",
        html_content="<p>Affordable last-mile mobility for urban commuters.</p>",
        embedded_elements=(
            IdentifiableElement("ie-goal-1", "Goal",
                                "Affordable last-mile mobility"),
            IdentifiableElement("ie-market", "Market",
                                "Urban commuters in mid-size cities", value=2026),
        )),)
    knowledge = (
        KnowledgeEntry("ke-motor", "BLDC Motor Data", "Datasheet",
                       year_of_availability=2025,
                       properties=(Property("Peak Power", 500, "W"),)),
        KnowledgeEntry("ke-rules", "Local Scooter Regulations", "Regulation"),
        KnowledgeEntry("ke-cell", "Solid State Cell", "Research",
                       year_of_availability=2027),
    )
    traces = (
        TraceLink("tr-alloc-acc", TraceKind.ALLOCATE, "fn-accelerating", "sp-motor"),
        TraceLink("tr-alloc-brake", TraceKind.ALLOCATE, "fn-braking", "sp-motor"),
        TraceLink("tr-alloc-limit", TraceKind.ALLOCATE, "fn-limiting", "sp-controller"),
        TraceLink("tr-alloc-absorb", TraceKind.ALLOCATE, "fn-absorbing", "sp-frame"),
        TraceLink("tr-alloc-display", TraceKind.ALLOCATE, "fn-displaying", "sp-controller"),
        TraceLink("tr-alloc-load", TraceKind.ALLOCATE, "fn-carrying-load", "sp-frame"),
        TraceLink("tr-alloc-pwm", TraceKind.ALLOCATE, "cf-pwm", "sp-controller"),
        TraceLink("tr-alloc-token", TraceKind.ALLOCATE, "cf-token", "sp-controller"),
        TraceLink("tr-alloc-basic", TraceKind.ALLOCATE, "cs-basic", "sp-controller"),
        TraceLink("tr-alloc-premium", TraceKind.ALLOCATE, "cs-premium", "sp-controller"),
        TraceLink("tr-alloc-root", TraceKind.ALLOCATE, "fp-escooter", "sp-escooter"),
        TraceLink("tr-ref-goal", TraceKind.REFERENCES, "fp-escooter", "ie-goal-1"),
        TraceLink("tr-ref-motor", TraceKind.REFERENCES, "sp-motor", "ke-motor"),
        TraceLink("tr-ref-cell", TraceKind.REFERENCES, "sp-battery", "ke-cell"),
        TraceLink("tr-ref-rules", TraceKind.REFERENCES, "sp-controller", "ke-rules"),
    )
    return Model(strategy=strategy, functional=full_functional(),
                 quality=full_quality(), structural=full_structural(),
                 knowledge=knowledge, traces=traces)


# ---------------------------------------------------------------------------
# Variant resolution exercise: a generator with nested variants and groups

def variants_model() -> Model:
    purity = RefinementGroup(
        "rg-purity", "Purity",
        blocks=(RefinementBlock("rb-ofc", "Oxygen Free",
                                properties=(Property("Purity", 99.99, "%"),)),
                RefinementBlock("rb-etp", "Electrolytic Tough Pitch",
                                properties=(Property("Purity", 99.9, "%"),))),
        selected_refinement="rb-ofc")
    conductor = RefinementGroup(
        "rg-conductor", "Conductor",
        blocks=(RefinementBlock("rb-copper", "Copper",
                                properties=(Property("Conductivity", 58, "MS/m"),),
                                refinement_groups=(purity,)),
                RefinementBlock("rb-iron", "Iron",
                                properties=(Property("Conductivity", 10, "MS/m"),))),
        selected_refinement="rb-copper")
    cooling = RefinementGroup(
        "rg-cooling", "Cooling",
        blocks=(RefinementBlock("rb-air", "Air Cooled",
                                properties=(Property("Cooling Power", 5, "W"),)),
                RefinementBlock("rb-liquid", "Liquid Cooled",
                                properties=(Property("Cooling Power", 50, "W"),))))

    arctic = SpBlock(
        "spv-arctic", "Arctic Marine Generator", SYSTEM, stereotype="Part",
        parent_block="spv-marine",
        properties=(Property("Efficiency", 0.65), Property("Heater Power", 30, "W")),
        decomposition=DecompositionModel(
            blocks=(SpBlock("spb-heater", "Heater", COMPONENT, stereotype="Part"),)))

    marine = SpBlock(
        "spv-marine", "Marine Generator", SYSTEM, stereotype="Part",
        parent_block="spb-gen",
        properties=(Property("Efficiency", 0.75), Property("Ingress Protection", "IP68")),
        # Two shared names with the base description, so it replaces it.
        sse=SolutionSpaceDescription(
            payload="marine transfer curves",
            input_properties=("Input Power", "Salinity"),
            output_properties=("Output Power Signal",)),
        decomposition=DecompositionModel(
            blocks=(SpBlock("spb-coil2", "Coil", COMPONENT, stereotype="Part"),
                    SpBlock("spb-seal", "Seal", COMPONENT, stereotype="Part")),
            relations=(SpRelation("spr-seal", SpRelationKind.CHANNEL,
                                  "spb-seal", "spb-housing", label="sealing surface"),)),
        refinement_groups=(
            RefinementGroup("rg-conductor2", "Conductor",
                            blocks=(RefinementBlock(
                                "rb-silver", "Silver",
                                properties=(Property("Conductivity", 63, "MS/m"),)),),
                            selected_refinement="rb-silver"),),
        variants=(arctic,),
        selected_variant="spv-arctic")

    urban = SpBlock("spv-urban", "Urban Generator", SYSTEM, stereotype="Part",
                    parent_block="spb-gen",
                    properties=(Property("Noise Level", 40, "dB"),))

    generator = SpBlock(
        "spb-gen", "Generator", SYSTEM, stereotype="Part",
        properties=(Property("Output Power", 100, "W"), Property("Efficiency", 0.7)),
        sse=SolutionSpaceDescription(
            payload="nominal transfer curves",
            input_properties=("Input Power", "Ambient Temperature"),
            output_properties=("Output Power Signal",)),
        decomposition=DecompositionModel(
            blocks=(SpBlock("spb-coil", "Coil", COMPONENT, stereotype="Part"),
                    SpBlock("spb-housing", "Housing", COMPONENT, stereotype="Part")),
            relations=(SpRelation("spr-mount", SpRelationKind.CHANNEL,
                                  "spb-coil", "spb-housing", label="mount"),)),
        refinement_groups=(conductor, cooling),
        variants=(marine, urban),
        selected_variant="spv-urban")

    return Model(structural=StructuralModel((DecompositionModel(blocks=(generator,)),)))


# ---------------------------------------------------------------------------
# Small configuration shapes

def void_model() -> Model:
    fm = FunctionalModel(
        blocks=(feature("fp-root", "Root"), feature("fp-a", "A"), feature("fp-b", "B")),
        relations=(mandatory("rel-a", "fp-root", "fp-a"),
                   mandatory("rel-b", "fp-root", "fp-b"),
                   FpRelation("rel-x", FpRelationKind.EXCLUDE, "fp-a", ("fp-b",))),
        roots=("fp-root",))
    return Model(functional=fm)


def dead_block_model() -> Model:
    fm = FunctionalModel(
        blocks=(feature("fp-root", "Root"), feature("fp-a", "A"), feature("fp-b", "B")),
        relations=(mandatory("rel-a", "fp-root", "fp-a"),
                   optional("rel-b", "fp-root", "fp-b"),
                   FpRelation("rel-x", FpRelationKind.EXCLUDE, "fp-a", ("fp-b",))),
        roots=("fp-root",))
    return Model(functional=fm)


def minimal_model() -> Model:
    return Model()


# ---------------------------------------------------------------------------
# Defect documents: schema-valid, each carrying one specific finding

def _doc(functional=None, quality=None, structural=None, traces=None) -> dict:
    return {
        "imogVersion": "1.4",
        "strategy": [],
        "functional": functional or {},
        "quality": quality or [],
        "structural": structural or {},
        "knowledge": [],
        "traces": traces or [],
    }


def _fp(blocks, relations=(), groups=(), roots=("fp-root",)) -> dict:
    return {"blocks": list(blocks), "relations": list(relations),
            "groups": list(groups), "roots": list(roots)}


def _block(block_id: str, name: str, level: str = "Context") -> dict:
    return {"id": block_id, "name": name, "kind": "Feature", "level": level}


DEFECTS: dict[str, dict] = {
    "fp_card": _doc(functional=_fp(
        [_block("fp-root", "Root"), _block("fp-a", "A"), _block("fp-b", "B")],
        [{"id": "rel-or", "kind": "Or", "parent": "fp-root",
          "children": ["fp-a", "fp-b"], "cardinality": [3, 2]}])),
    "vp_cycle": _doc(functional=_fp(
        [_block("fp-root", "Root"), _block("fp-a", "A"), _block("fp-b", "B"),
         _block("fp-c", "C"), _block("fp-d", "D")],
        [{"id": "rel-one", "kind": "Alternative", "parent": "fp-root",
          "children": ["fp-a", "fp-b"],
          "variationPoint": {"id": "vp-one", "label": "One", "optionLabels": ["L", "R"]}},
         {"id": "rel-two", "kind": "Alternative", "parent": "fp-root",
          "children": ["fp-c", "fp-d"],
          "variationPoint": {"id": "vp-two", "label": "Two", "optionLabels": ["L", "R"]}},
         {"id": "rel-d1", "kind": "VpDerivation", "parent": "vp-one", "children": ["vp-two"]},
         {"id": "rel-d2", "kind": "VpDerivation", "parent": "vp-two", "children": ["vp-one"]}])),
    "id_dangling": _doc(functional=_fp(
        [_block("fp-root", "Root")],
        [{"id": "rel-m", "kind": "Mandatory", "parent": "fp-root", "children": ["fp-gone"]}])),
    "qp_sat": _doc(quality=[{"id": "req-hot", "name": "Too Sure", "text": "x",
                             "satisfiability": 1.5, "level": "Context"}]),
    "sse_disj": _doc(structural={"topModels": [{"blocks": [
        {"id": "sp-a", "name": "A", "level": "System",
         "sse": {"inputProperties": ["Power"], "outputProperties": ["Power"]}}]}]}),
    "rg_selref": _doc(structural={"topModels": [{"blocks": [
        {"id": "sp-a", "name": "A", "level": "System",
         "refinementGroups": [{"id": "rg-a", "name": "G",
                               "blocks": [{"id": "rb-a", "name": "RA"}],
                               "selectedRefinement": "rb-missing"}]}]}]}),
    "sp_selvar": _doc(structural={"topModels": [{"blocks": [
        {"id": "sp-a", "name": "A", "level": "System",
         "variants": [{"id": "spv-a", "name": "VA", "level": "System"}],
         "selectedVariant": "spv-other"}]}]}),
    "fp_forest": _doc(functional=_fp(
        [_block("fp-root", "Root"), _block("fp-a", "A"), _block("fp-b", "B")],
        [{"id": "rel-1", "kind": "Mandatory", "parent": "fp-root", "children": ["fp-a"]},
         {"id": "rel-2", "kind": "Mandatory", "parent": "fp-root", "children": ["fp-b"]},
         {"id": "rel-3", "kind": "Optional", "parent": "fp-a", "children": ["fp-b"]}])),
    "vp_label": _doc(functional=_fp(
        [_block("fp-root", "Root"), _block("fp-a", "A"), _block("fp-b", "B")],
        [{"id": "rel-alt", "kind": "Alternative", "parent": "fp-root",
          "children": ["fp-a", "fp-b"],
          "variationPoint": {"id": "vp-dup", "label": "Dup",
                             "optionLabels": ["Same", "Same"]}}])),
    "qp_status": _doc(quality=[{"id": "req-two", "name": "Two States", "text": "x",
                                "satisfiability": 0.5, "level": "Context",
                                "stereotypes": ["Proposed", "Discarded"]}]),
    "tr_kind": _doc(
        functional=_fp([_block("fp-root", "Root")]),
        quality=[{"id": "req-a", "name": "R", "text": "x",
                  "satisfiability": 1, "level": "Context"}],
        traces=[{"id": "tr-bad", "kind": "Allocate", "source": "fp-root",
                 "target": "req-a"}]),
    "fp_roots": _doc(functional=_fp(
        [_block("fp-root", "Root"), _block("fp-stray", "Stray")],
        [], roots=["fp-root"])),
}

EXPECTED_DEFECT_CODES = {
    "fp_card": "FP-CARD",
    "vp_cycle": "FP-VPCYCLE",
    "id_dangling": "ID-DANGLING",
    "qp_sat": "QP-SAT",
    "sse_disj": "SSE-DISJ",
    "rg_selref": "RG-SELREF",
    "sp_selvar": "SP-SELVAR",
    "fp_forest": "FP-FOREST",
    "vp_label": "FP-VPLABEL",
    "qp_status": "QP-STATUS",
    "tr_kind": "TR-KIND",
    "fp_roots": "FP-ROOTS",
}


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "defects").mkdir(exist_ok=True)

    models = {
        "escooter": full_model(),
        "escooter_fp_context": context_model(),
        "escooter_fp_context_require": context_require_model(),
        "sp_variants": variants_model(),
        "void": void_model(),
        "dead_block": dead_block_model(),
        "minimal": minimal_model(),
    }
    for name, model in models.items():
        path = FIXTURES / f"{name}.imog.json"
        path.write_text(serialize_document(model), encoding="utf-8")
        print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")

    for name, obj in DEFECTS.items():
        path = FIXTURES / "defects" / f"{name}.imog.json"
        # The canonical serializer refuses error findings, so defect files go
        # through the raw emitters; a parse first normalizes the hand-written
        # shape to canonical form.
        path.write_text(canonical_json(model_to_obj(model_from_obj(obj))),
                        encoding="utf-8")
        print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
