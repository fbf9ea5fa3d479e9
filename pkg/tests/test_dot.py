"""Graphviz export: node shapes, junctions, clusters, edge styles."""

from __future__ import annotations

import pytest

from imog.dot import EmptyPerspectiveError, export_dot


def test_functional_export_draws_the_tree(context_model):
    text = export_dot(context_model, "functional")
    assert text.startswith("digraph functional {") and text.endswith("}\n")
    assert '"fp-escooter" [label="E-Scooter", shape=box' in text
    assert 'fillcolor="#f7df6a"' in text
    assert '"fp-escooter" -> "fp-driving" [arrowhead=dot];' in text
    assert '"fp-escooter" -> "fp-loading" [arrowhead=odot];' in text


def test_choice_relations_route_through_a_junction(context_model):
    text = export_dot(context_model, "functional")
    assert '"vp-type" [shape=point, width=0.08];' in text
    assert '"fp-escooter" -> "vp-type" [arrowhead=none, label="E-Scooter Type"];' in text
    assert '"vp-type" -> "fp-simple";' in text
    # The or-junction borrows the relation id and shows its cardinality.
    assert '"rel-choice" [shape=point, width=0.08];' in text
    assert 'label="[2,3]"' in text


def test_functions_and_other_levels_change_shape_and_fill(escooter):
    text = export_dot(escooter, "functional")
    assert '"fn-accelerating" [label="Accelerating", shape=ellipse' in text
    assert 'fillcolor="#a8d08d"' in text      # system level
    assert 'fillcolor="#c3a6e0"' in text      # component level


def test_cross_tree_edges_are_styled(context_require_model, void_model, escooter):
    text = export_dot(context_require_model, "functional")
    assert '"fp-loading" -> "fp-comfort" [style=dashed, label="require", constraint=false];' in text

    text = export_dot(void_model, "functional")
    assert '"fp-a" -> "fp-b" [style=dotted, dir=none, label="exclude", constraint=false];' in text

    text = export_dot(escooter, "functional")
    assert '"vp-type" -> "vp-controller" [style=dashed, label="derives", constraint=false];' in text


def test_groups_chain_their_members(context_model):
    text = export_dot(context_model, "functional")
    assert '"fp-carrying" -> "fp-balancing" [style=dotted, dir=none, label="grp-stability", constraint=false];' in text


def test_quality_export_shows_satisfiability_and_parents(escooter):
    text = export_dot(escooter, "quality")
    assert 'label="Limited Top Speed\\nsat 1"' in text
    assert 'label="Carryable Weight\\nsat 0.8"' in text
    assert '"req-weight" -> "req-carry" [style=dashed, label="refinement"];' in text


def test_structural_export_nests_clusters(escooter):
    text = export_dot(escooter, "structural")
    assert "subgraph cluster_sp_escooter {" in text
    assert 'label="Drivetrain"' in text
    assert '"spv-comfort" [label="Comfort E-Scooter\\n«Innovation»"' in text
    assert ('"sp-escooter" -> "spv-comfort" '
            '[style=dotted, label="variant", constraint=false];') in text


def test_structural_edge_styles(escooter):
    text = export_dot(escooter, "structural")
    assert '"sp-battery" -> "sp-motor" [dir=none, label="DC power"];' in text
    # A unidirectional arrow needs no dir attribute.
    assert '"sp-controller" -> "sp-battery" [label="load request"];' in text
    assert '"sp-road" -> "sp-escooter" [style=dashed, label="Undesired\\nmechanical"];' in text


def test_effect_labels_stack_their_lines(escooter):
    text = export_dot(escooter, "structural")
    assert 'label="rider weight\\nDesired\\nmechanical"' in text


@pytest.mark.parametrize("perspective", ["functional", "quality", "structural"])
def test_empty_perspectives_are_refused(minimal_model, perspective):
    with pytest.raises(EmptyPerspectiveError) as err:
        export_dot(minimal_model, perspective)
    assert err.value.perspective == perspective


def test_unknown_perspectives_are_refused(escooter):
    with pytest.raises(ValueError):
        export_dot(escooter, "strategy")


def test_node_names_are_quoted_safely(escooter):
    # Labels may contain double quotes after user edits; exports must escape them.
    text = export_dot(escooter, "structural")
    assert '\\"' not in text   # fixture has none, but export must stay parseable
    assert text.count("{") == text.count("}")
