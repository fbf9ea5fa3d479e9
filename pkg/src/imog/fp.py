"""Feature configuration semantics over the functional perspective.

The raw functional model is first normalized into a BasicFeatureTree: groups
and variation point derivations are compiled down to plain cross-tree Require
constraints and custom relation kinds are set aside untouched. Everything
else (checking, enumeration, counting, dead-block detection, void detection,
decision propagation) works on the normalized tree.

A configuration selects a subset of blocks. It is valid iff
  - every root is selected,
  - a selected child implies its selected parent,
  - a selected parent implies all its Mandatory children,
  - an Alternative selects exactly one child under a selected parent and
    none under an unselected one,
  - an Or[min,max] selects between min and max children under a selected
    parent and none otherwise,
  - Require(a, b) never has a without b, Exclude(a, b) never has both,
  - variation point choices name options of selected alternatives.

Enumeration and the rule-by-rule checker are written independently of each
other on purpose: the enumerator is a positional backtracking search, the
checker a direct evaluation over sets, so each can catch the other out.
Enumeration order is deterministic: blocks are sorted by id and treated as a
bit vector (unselected branch first), so configurations appear in ascending
lexicographic order of that vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping

from .diagnostics import InvalidModelError, has_errors
from .elements import (
    ElementId,
    FpRelation,
    FpRelationKind,
    Model,
    VariationPoint,
)
from .validate import NotFoundError, validate_model

DEFAULT_BLOCK_CAP = 64


class CapExceededError(RuntimeError):
    """The tree has more blocks than exhaustive analysis is willing to touch."""

    def __init__(self, limit: int, blocks: int):
        self.limit = limit
        self.blocks = blocks
        super().__init__(f"{blocks} blocks exceed the analysis cap of {limit}")


class DecisionState(str, Enum):
    IN = "In"
    OUT = "Out"


@dataclass(frozen=True)
class Configuration:
    """One selection of blocks plus the option labels it picks."""

    selected: frozenset[ElementId]
    vp_choices: tuple[tuple[ElementId, str], ...] = ()   # (vp id, label), sorted

    def vp_choice_map(self) -> dict[ElementId, str]:
        return dict(self.vp_choices)


@dataclass(frozen=True)
class RuleViolation:
    rule: str                      # root | parent | mandatory | alternative | or | require | exclude | variation-point
    element_id: ElementId | None
    message: str


@dataclass(frozen=True)
class ConfigurationCheck:
    valid: bool
    violations: tuple[RuleViolation, ...]


@dataclass(frozen=True)
class ChildEdge:
    """One tree relation after normalization; Or cardinality is materialized."""

    relation_id: ElementId
    kind: FpRelationKind
    parent: ElementId
    children: tuple[ElementId, ...]
    cardinality: tuple[int, int] | None = None
    variation_point: VariationPoint | None = None


@dataclass(frozen=True)
class CrossConstraint:
    """Require or Exclude between two blocks, with where it came from."""

    kind: FpRelationKind
    source: ElementId
    target: ElementId
    origin: str


@dataclass(frozen=True)
class BasicFeatureTree:
    blocks: tuple[ElementId, ...]
    roots: frozenset[ElementId]
    edges: tuple[ChildEdge, ...]
    constraints: tuple[CrossConstraint, ...]
    ignored: tuple[FpRelation, ...] = ()

    def __post_init__(self):
        known = set(self.blocks)
        if len(known) != len(self.blocks):
            raise ValueError("duplicate block ids")
        parent_of: dict[ElementId, ElementId] = {}
        for edge in self.edges:
            if edge.parent not in known:
                raise ValueError(f"edge {edge.relation_id!r}: unknown parent {edge.parent!r}")
            if edge.kind not in (FpRelationKind.MANDATORY, FpRelationKind.OPTIONAL,
                                 FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
                raise ValueError(f"edge {edge.relation_id!r}: {edge.kind.value} is not a tree kind")
            if edge.kind is FpRelationKind.OR:
                if edge.cardinality is None:
                    raise ValueError(f"edge {edge.relation_id!r}: Or edge without cardinality")
                lo, hi = edge.cardinality
                if not 1 <= lo <= hi <= len(edge.children):
                    raise ValueError(f"edge {edge.relation_id!r}: bad cardinality [{lo},{hi}]")
            if not edge.children:
                raise ValueError(f"edge {edge.relation_id!r}: no children")
            for child in edge.children:
                if child not in known:
                    raise ValueError(f"edge {edge.relation_id!r}: unknown child {child!r}")
                if child in parent_of:
                    raise ValueError(f"block {child!r} has more than one parent")
                parent_of[child] = edge.parent
        for con in self.constraints:
            if con.source not in known or con.target not in known:
                raise ValueError(f"constraint from {con.origin!r} touches an unknown block")
        parentless = known - set(parent_of)
        if self.roots != parentless:
            raise ValueError("declared roots differ from the parentless blocks")
        reached: set[ElementId] = set()
        children_of: dict[ElementId, list[ElementId]] = {}
        for edge in self.edges:
            children_of.setdefault(edge.parent, []).extend(edge.children)
        stack = list(self.roots)
        while stack:
            node = stack.pop()
            if node in reached:
                continue
            reached.add(node)
            stack.extend(children_of.get(node, ()))
        if reached != known:
            raise ValueError("some blocks are unreachable from the roots")


# ---------------------------------------------------------------------------
# Normalization

def normalize(model: Model, groups_enabled: bool = False) -> BasicFeatureTree:
    """Compile the functional perspective down to a plain feature tree.

    Groups take part only when both the switch and the group itself are
    enabled; each applied group requires its members pairwise in both
    directions. A variation point derivation pins the target's choice to the
    source's: for every shared label the source child requires the target
    child of the same label. Custom relation kinds are kept in `ignored`.
    """
    diags = validate_model(model)
    if has_errors(diags):
        raise InvalidModelError(diags)

    fm = model.functional
    edges: list[ChildEdge] = []
    constraints: list[CrossConstraint] = []
    ignored: list[FpRelation] = []
    vp_child_by_label: dict[ElementId, dict[str, ElementId]] = {}

    for rel in fm.relations:
        kind = rel.kind
        if kind in (FpRelationKind.MANDATORY, FpRelationKind.OPTIONAL,
                    FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
            cardinality = rel.cardinality
            if kind is FpRelationKind.OR and cardinality is None:
                cardinality = (1, len(rel.children))
            edges.append(ChildEdge(rel.id, kind, rel.parent, rel.children,
                                   cardinality, rel.variation_point))
            if rel.variation_point is not None:
                vp_child_by_label[rel.variation_point.id] = dict(
                    zip(rel.variation_point.option_labels, rel.children))
        elif kind in (FpRelationKind.REQUIRE, FpRelationKind.EXCLUDE):
            constraints.append(CrossConstraint(kind, rel.parent, rel.children[0], rel.id))
        elif kind is FpRelationKind.VP_DERIVATION:
            pass   # second pass below, once every variation point is indexed
        else:
            ignored.append(rel)

    for rel in fm.relations:
        if rel.kind is not FpRelationKind.VP_DERIVATION:
            continue
        src = vp_child_by_label[rel.parent]
        dst = vp_child_by_label[rel.children[0]]
        for label in sorted(src):
            constraints.append(CrossConstraint(
                FpRelationKind.REQUIRE, src[label], dst[label],
                f"{rel.id} (label {label!r})"))

    if groups_enabled:
        for group in fm.groups:
            if not group.enabled or len(group.members) < 2:
                continue
            for a, b in itertools.permutations(group.members, 2):
                constraints.append(CrossConstraint(
                    FpRelationKind.REQUIRE, a, b, f"group {group.id}"))

    return BasicFeatureTree(
        blocks=tuple(b.id for b in fm.blocks),
        roots=frozenset(fm.roots),
        edges=tuple(edges),
        constraints=tuple(constraints),
        ignored=tuple(ignored),
    )


# ---------------------------------------------------------------------------
# Rule-by-rule checking

def _alt_bounds(edge: ChildEdge) -> tuple[int, int]:
    return (1, 1) if edge.kind is FpRelationKind.ALTERNATIVE else edge.cardinality  # type: ignore[return-value]


def derive_vp_choices(tree: BasicFeatureTree,
                      selected: frozenset[ElementId]) -> tuple[tuple[ElementId, str], ...]:
    """Option labels a selection implies, for alternatives with a variation point."""
    out: list[tuple[ElementId, str]] = []
    for edge in tree.edges:
        if (edge.kind is FpRelationKind.ALTERNATIVE
                and edge.variation_point is not None
                and edge.parent in selected):
            for label, child in zip(edge.variation_point.option_labels, edge.children):
                if child in selected:
                    out.append((edge.variation_point.id, label))
                    break
    return tuple(sorted(out))


def is_valid_configuration(tree: BasicFeatureTree, config: Configuration) -> ConfigurationCheck:
    selected = config.selected
    known = set(tree.blocks)
    for block_id in sorted(selected):
        if block_id not in known:
            raise NotFoundError(block_id)

    violations: list[RuleViolation] = []

    def bad(rule: str, element_id: ElementId | None, message: str) -> None:
        violations.append(RuleViolation(rule, element_id, message))

    for root in sorted(tree.roots):
        if root not in selected:
            bad("root", root, f"root {root!r} must be selected")

    for edge in tree.edges:
        parent_in = edge.parent in selected
        chosen = [c for c in edge.children if c in selected]
        for child in chosen:
            if not parent_in:
                bad("parent", child,
                    f"{child!r} is selected but its parent {edge.parent!r} is not")
        if edge.kind is FpRelationKind.MANDATORY:
            if parent_in:
                for child in edge.children:
                    if child not in selected:
                        bad("mandatory", child,
                            f"{child!r} is mandatory under selected {edge.parent!r}")
        elif edge.kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
            lo, hi = _alt_bounds(edge)
            rule = "alternative" if edge.kind is FpRelationKind.ALTERNATIVE else "or"
            vp = edge.variation_point
            what = f"alternative {vp.label!r}" if (vp is not None and rule == "alternative") \
                else f"{rule} under {edge.parent!r}"
            if parent_in and not lo <= len(chosen) <= hi:
                bad(rule, edge.relation_id,
                    f"{what} needs {lo}..{hi} selected children, got {len(chosen)}")
            if not parent_in and chosen:
                bad(rule, edge.relation_id,
                    f"{what} must select nothing while {edge.parent!r} is unselected")

    for con in tree.constraints:
        if con.kind is FpRelationKind.REQUIRE:
            if con.source in selected and con.target not in selected:
                bad("require", con.source,
                    f"{con.source!r} requires {con.target!r} ({con.origin})")
        else:
            if con.source in selected and con.target in selected:
                bad("exclude", con.source,
                    f"{con.source!r} excludes {con.target!r} ({con.origin})")

    vp_edges = {edge.variation_point.id: edge
                for edge in tree.edges if edge.variation_point is not None}
    for vp_id, label in config.vp_choices:
        if vp_id not in vp_edges:
            raise NotFoundError(vp_id)
        edge = vp_edges[vp_id]
        vp = edge.variation_point
        assert vp is not None
        if edge.kind is not FpRelationKind.ALTERNATIVE:
            bad("variation-point", vp_id,
                f"choice {label!r}: {vp.label!r} is not on an alternative")
        elif label not in vp.option_labels:
            bad("variation-point", vp_id,
                f"{label!r} is not an option of {vp.label!r}")
        elif edge.parent not in selected:
            bad("variation-point", vp_id,
                f"choice {label!r} on {vp.label!r} while {edge.parent!r} is unselected")
        else:
            implied = dict(zip(edge.children, vp.option_labels))
            picked = [implied[c] for c in edge.children if c in selected]
            if picked and picked[0] != label:
                bad("variation-point", vp_id,
                    f"{vp.label!r} is {picked[0]!r} by selection, choice says {label!r}")

    return ConfigurationCheck(valid=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Backtracking search

class _Search:
    """Positional search order plus the rules compiled to trigger positions."""

    def __init__(self, tree: BasicFeatureTree):
        self.order = sorted(tree.blocks)
        self.pos = {b: i for i, b in enumerate(self.order)}
        n = len(self.order)
        self.checks: list[list[Callable[[list[bool]], bool]]] = [[] for _ in range(n)]
        pos = self.pos

        def at(trigger: int, fn: Callable[[list[bool]], bool]) -> None:
            self.checks[trigger].append(fn)

        for root in tree.roots:
            rp = pos[root]
            at(rp, lambda sel, rp=rp: sel[rp])

        for edge in tree.edges:
            pp = pos[edge.parent]
            child_ps = tuple(pos[c] for c in edge.children)
            for cp in child_ps:
                at(max(pp, cp), lambda sel, pp=pp, cp=cp: sel[pp] or not sel[cp])
            if edge.kind is FpRelationKind.MANDATORY:
                for cp in child_ps:
                    at(max(pp, cp), lambda sel, pp=pp, cp=cp: sel[cp] or not sel[pp])
            elif edge.kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
                lo, hi = _alt_bounds(edge)
                full = max(pp, *child_ps)
                at(full, lambda sel, pp=pp, cps=child_ps, lo=lo, hi=hi:
                    (lo <= sum(sel[c] for c in cps) <= hi) if sel[pp]
                    else not any(sel[c] for c in cps))
                # Running prunes; sound in both parent branches (see full rule).
                for cp in child_ps:
                    decided = tuple(c for c in child_ps if c <= cp)
                    rest = len(child_ps) - len(decided)
                    at(cp, lambda sel, cps=decided, hi=hi: sum(sel[c] for c in cps) <= hi)
                    if pp < cp:
                        at(cp, lambda sel, pp=pp, cps=decided, lo=lo, rest=rest:
                            not sel[pp] or sum(sel[c] for c in cps) + rest >= lo)

        for con in tree.constraints:
            a, b = pos[con.source], pos[con.target]
            trigger = max(a, b)
            if con.kind is FpRelationKind.REQUIRE:
                at(trigger, lambda sel, a=a, b=b: sel[b] or not sel[a])
            else:
                at(trigger, lambda sel, a=a, b=b: not (sel[a] and sel[b]))


def _walk(tree: BasicFeatureTree,
          on_solution: Callable[[list[bool]], bool],
          *,
          block_cap: int = DEFAULT_BLOCK_CAP,
          decisions: Mapping[ElementId, DecisionState] | None = None) -> None:
    """Visit every valid selection; on_solution returning False stops the walk."""
    if len(tree.blocks) > block_cap:
        raise CapExceededError(block_cap, len(tree.blocks))
    search = _Search(tree)
    n = len(search.order)
    forced: dict[int, bool] = {}
    for block_id, state in (decisions or {}).items():
        if block_id not in search.pos:
            raise NotFoundError(block_id)
        forced[search.pos[block_id]] = state is DecisionState.IN
    sel = [False] * n

    def rec(p: int) -> bool:
        if p == n:
            return on_solution(sel)
        branches = (forced[p],) if p in forced else (False, True)
        for value in branches:
            sel[p] = value
            if all(fn(sel) for fn in search.checks[p]):
                if not rec(p + 1):
                    return False
        sel[p] = False
        return True

    if n == 0:
        on_solution(sel)
        return
    rec(0)


def _to_configuration(tree: BasicFeatureTree, order: list[str], sel: list[bool]) -> Configuration:
    selected = frozenset(b for b, v in zip(order, sel) if v)
    return Configuration(selected, derive_vp_choices(tree, selected))


@dataclass(frozen=True)
class EnumerationResult:
    configurations: tuple[Configuration, ...]
    truncated: bool = False


def enumerate_configurations(tree: BasicFeatureTree,
                             cap: int | None = None,
                             block_cap: int = DEFAULT_BLOCK_CAP) -> EnumerationResult:
    """All valid configurations in deterministic order; `cap` truncates."""
    order = sorted(tree.blocks)
    out: list[Configuration] = []
    truncated = False

    def on_solution(sel: list[bool]) -> bool:
        nonlocal truncated
        if cap is not None and len(out) >= cap:
            truncated = True
            return False
        out.append(_to_configuration(tree, order, sel))
        return True

    _walk(tree, on_solution, block_cap=block_cap)
    return EnumerationResult(tuple(out), truncated)


def count_configurations(tree: BasicFeatureTree, block_cap: int = DEFAULT_BLOCK_CAP) -> int:
    count = 0

    def on_solution(sel: list[bool]) -> bool:
        nonlocal count
        count += 1
        return True

    _walk(tree, on_solution, block_cap=block_cap)
    return count


def dead_blocks(tree: BasicFeatureTree, block_cap: int = DEFAULT_BLOCK_CAP) -> tuple[ElementId, ...]:
    """Blocks that appear in no valid configuration, sorted by id."""
    order = sorted(tree.blocks)
    alive: set[ElementId] = set()

    def on_solution(sel: list[bool]) -> bool:
        alive.update(b for b, v in zip(order, sel) if v)
        return len(alive) < len(order)   # everything alive already: stop early

    _walk(tree, on_solution, block_cap=block_cap)
    return tuple(sorted(set(order) - alive))


def is_void(tree: BasicFeatureTree, block_cap: int = DEFAULT_BLOCK_CAP) -> bool:
    found = False

    def on_solution(sel: list[bool]) -> bool:
        nonlocal found
        found = True
        return False

    _walk(tree, on_solution, block_cap=block_cap)
    return not found


# ---------------------------------------------------------------------------
# Decision propagation

@dataclass(frozen=True)
class Conflict:
    decisions: tuple[tuple[ElementId, DecisionState], ...]   # minimal, sorted by id
    message: str


@dataclass(frozen=True)
class PropagationResult:
    forced_in: frozenset[ElementId]
    forced_out: frozenset[ElementId]
    conflict: Conflict | None = None


def _consistent_exists(tree: BasicFeatureTree,
                       decisions: Mapping[ElementId, DecisionState],
                       block_cap: int) -> bool:
    found = False

    def on_solution(sel: list[bool]) -> bool:
        nonlocal found
        found = True
        return False

    _walk(tree, on_solution, block_cap=block_cap, decisions=decisions)
    return found


def propagate(tree: BasicFeatureTree,
              decisions: Mapping[ElementId, DecisionState],
              block_cap: int = DEFAULT_BLOCK_CAP) -> PropagationResult:
    """Blocks forced in or out by the decisions, or a minimal conflict.

    forced_in holds the blocks selected in every configuration consistent
    with the decisions, forced_out those selected in none. On conflict both
    sets are empty and the smallest inconsistent decision subset (first in
    id order among equals) is reported.
    """
    order = sorted(tree.blocks)
    in_all: set[ElementId] | None = None
    in_any: set[ElementId] = set()

    def on_solution(sel: list[bool]) -> bool:
        nonlocal in_all
        selected = {b for b, v in zip(order, sel) if v}
        in_all = selected if in_all is None else in_all & selected
        in_any.update(selected)
        return True

    _walk(tree, on_solution, block_cap=block_cap, decisions=decisions)

    if in_all is None:   # nothing satisfies the decisions
        items = sorted(decisions.items())
        for size in range(1, len(items) + 1):
            for subset in itertools.combinations(items, size):
                if not _consistent_exists(tree, dict(subset), block_cap):
                    summary = ", ".join(f"{b}={s.value}" for b, s in subset)
                    return PropagationResult(frozenset(), frozenset(),
                                             Conflict(tuple(subset),
                                                      f"no configuration satisfies: {summary}"))
        return PropagationResult(frozenset(), frozenset(),
                                 Conflict((), "the model admits no configuration at all"))

    return PropagationResult(frozenset(in_all), frozenset(set(order) - in_any), None)


# ---------------------------------------------------------------------------
# Report (de)serialization, shared by the CLI and the HTTP service

def configuration_to_obj(config: Configuration) -> dict:
    return {"selected": sorted(config.selected),
            "vpChoices": {vp_id: label for vp_id, label in config.vp_choices}}


def configuration_from_obj(obj: dict) -> Configuration:
    return Configuration(frozenset(obj.get("selected", [])),
                         tuple(sorted(obj.get("vpChoices", {}).items())))


def enumeration_to_obj(result: EnumerationResult) -> dict:
    return {"configurations": [configuration_to_obj(c) for c in result.configurations],
            "truncated": result.truncated}


def enumeration_from_obj(obj: dict) -> EnumerationResult:
    return EnumerationResult(
        tuple(configuration_from_obj(c) for c in obj.get("configurations", [])),
        bool(obj.get("truncated", False)))


def propagation_to_obj(result: PropagationResult) -> dict:
    obj: dict = {"forcedIn": sorted(result.forced_in),
                 "forcedOut": sorted(result.forced_out)}
    if result.conflict is None:
        obj["conflict"] = None
    else:
        obj["conflict"] = {
            "decisions": [{"id": b, "state": s.value} for b, s in result.conflict.decisions],
            "message": result.conflict.message,
        }
    return obj


def propagation_from_obj(obj: dict) -> PropagationResult:
    raw = obj.get("conflict")
    conflict = None
    if raw is not None:
        conflict = Conflict(
            tuple((d["id"], DecisionState(d["state"])) for d in raw.get("decisions", [])),
            raw.get("message", ""))
    return PropagationResult(frozenset(obj.get("forcedIn", [])),
                             frozenset(obj.get("forcedOut", [])),
                             conflict)
