"""Randomized invariants over generated models.

Each property draws a seed, grows a feature model from it, and checks the
engine against either the brute-force oracle or a structural invariant.
Models stay small (at most nine blocks) so the powerset enumeration in the
oracle remains instant.
"""

from __future__ import annotations

import dataclasses
import random

from hypothesis import given, settings, strategies as st

from imog import fp
from imog.document import parse_document, serialize_document
from imog.validate import validate_model

from conftest import load_fixture
from oracle import brute_force_configurations

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)

COMMON = dict(max_examples=80, deadline=None)


def grown_model(seed: int, max_blocks: int = 9, groups: bool = False):
    from oracle import random_functional_model

    rng = random.Random(seed)
    model = random_functional_model(rng, max_blocks=max_blocks)
    tree = fp.normalize(model, groups_enabled=groups)
    return model, tree


def as_comparable(configs):
    return sorted((tuple(sorted(sel)), tuple(sorted(vps.items())))
                  for sel, vps in configs)


@settings(**COMMON)
@given(SEEDS, st.booleans())
def test_enumeration_matches_the_brute_force_oracle(seed, groups):
    model, tree = grown_model(seed, groups=groups)
    expected = as_comparable(brute_force_configurations(model, groups_enabled=groups))
    result = fp.enumerate_configurations(tree)
    actual = as_comparable(
        (c.selected, c.vp_choice_map()) for c in result.configurations)
    assert actual == expected
    assert not result.truncated


@settings(**COMMON)
@given(SEEDS)
def test_every_enumerated_configuration_passes_the_rule_check(seed):
    _, tree = grown_model(seed)
    for config in fp.enumerate_configurations(tree).configurations:
        check = fp.is_valid_configuration(tree, config)
        assert check.valid, check.violations


@settings(**COMMON)
@given(SEEDS, st.booleans())
def test_count_agrees_with_enumeration(seed, groups):
    _, tree = grown_model(seed, groups=groups)
    configs = fp.enumerate_configurations(tree).configurations
    assert fp.count_configurations(tree) == len(configs)


@settings(**COMMON)
@given(SEEDS)
def test_dead_blocks_are_exactly_those_in_no_configuration(seed):
    _, tree = grown_model(seed)
    configs = fp.enumerate_configurations(tree).configurations
    alive = frozenset().union(*(c.selected for c in configs)) if configs else frozenset()
    assert fp.dead_blocks(tree) == tuple(sorted(set(tree.blocks) - alive))


@settings(**COMMON)
@given(SEEDS)
def test_free_propagation_is_the_core_and_complement_of_all_configurations(seed):
    _, tree = grown_model(seed)
    configs = fp.enumerate_configurations(tree).configurations
    result = fp.propagate(tree, {})
    if not configs:
        assert result.conflict is not None
        return
    assert result.conflict is None
    assert result.forced_in == frozenset.intersection(*(c.selected for c in configs))
    assert result.forced_out == frozenset(tree.blocks) - frozenset().union(
        *(c.selected for c in configs))


@settings(**COMMON)
@given(SEEDS)
def test_documents_survive_a_round_trip_and_reserialize_identically(seed):
    model, _ = grown_model(seed)
    text = serialize_document(model)
    again = parse_document(text)
    assert again == model
    assert serialize_document(again) == text


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=5))
def test_a_backwards_cardinality_is_flagged_with_its_own_code(lo_extra, hi):
    lo = hi + lo_extra  # strictly above hi, never a legal range
    model = load_fixture("escooter_fp_context")
    relations = tuple(
        dataclasses.replace(rel, cardinality=(lo, hi)) if rel.id == "rel-choice" else rel
        for rel in model.functional.relations)
    mutated = dataclasses.replace(
        model, functional=dataclasses.replace(model.functional, relations=relations))
    codes = [d.code for d in validate_model(mutated)]
    assert codes == ["FP-CARD"]
