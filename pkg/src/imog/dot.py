"""Graphviz DOT export for the functional, quality and structural perspectives.

Output is deterministic: elements are walked in document order and the text
depends only on the model. Tree relations with a choice (Alternative, Or) are
drawn through a small junction node so the choice itself is visible; the edge
into the junction carries the variation point label or the [min,max]
cardinality. Levels are told apart by fill color.
"""

from __future__ import annotations

import re

from .elements import (
    DecompositionModel,
    Direction,
    FpBlockKind,
    FpRelation,
    FpRelationKind,
    FunctionalModel,
    Model,
    Requirement,
    SpBlock,
    SpRelation,
    SpRelationKind,
    StructuralModel,
)

PERSPECTIVES = ("functional", "quality", "structural")

LEVEL_FILL = {
    "Context": "#f7df6a",    # yellow
    "System": "#a8d08d",     # green
    "Component": "#c3a6e0",  # purple
}
CUSTOM_LEVEL_FILL = "#d9d9d9"


class EmptyPerspectiveError(ValueError):
    def __init__(self, perspective: str):
        self.perspective = perspective
        super().__init__(f"perspective {perspective!r} has no elements to draw")


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(*parts: str) -> str:
    # Join after escaping, so the \n line-break markers survive quoting.
    escaped = (p.replace("\\", "\\\\").replace('"', '\\"') for p in parts)
    return '"' + "\\n".join(escaped) + '"'


def _fill(level) -> str:
    return LEVEL_FILL.get(level.name, CUSTOM_LEVEL_FILL)


class _Slugs:
    """Cluster names must be bare identifiers; keep them unique per graph."""

    def __init__(self):
        self.used: set[str] = set()

    def make(self, element_id: str) -> str:
        base = re.sub(r"[^0-9A-Za-z]", "_", element_id) or "x"
        slug, n = base, 1
        while slug in self.used:
            n += 1
            slug = f"{base}_{n}"
        self.used.add(slug)
        return slug


# ---------------------------------------------------------------------------
# Functional perspective

def _junction_id(rel: FpRelation) -> str:
    # The variation point, when present, is the identity of the choice.
    return rel.variation_point.id if rel.variation_point is not None else rel.id


def _or_label(rel: FpRelation) -> str:
    lo, hi = rel.cardinality if rel.cardinality is not None else (1, len(rel.children))
    return f"[{lo},{hi}]"


def _functional_lines(fm: FunctionalModel) -> list[str]:
    if not (fm.blocks or fm.relations or fm.groups):
        raise EmptyPerspectiveError("functional")
    lines = ["digraph functional {", "  rankdir=TB;",
             '  node [fontname="Helvetica"];', '  edge [fontname="Helvetica"];']
    for block in fm.blocks:
        shape = "box" if block.kind is FpBlockKind.FEATURE else "ellipse"
        lines.append(f"  {_q(block.id)} [label={_q(block.name)}, shape={shape}, "
                     f"style=filled, fillcolor={_q(_fill(block.level))}];")
    for rel in fm.relations:
        kind = rel.kind
        if kind is FpRelationKind.MANDATORY:
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} [arrowhead=dot];")
        elif kind is FpRelationKind.OPTIONAL:
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} [arrowhead=odot];")
        elif kind in (FpRelationKind.ALTERNATIVE, FpRelationKind.OR):
            junction = _junction_id(rel)
            lines.append(f"  {_q(junction)} [shape=point, width=0.08];")
            if kind is FpRelationKind.OR:
                label = _or_label(rel)
            else:
                label = rel.variation_point.label if rel.variation_point is not None else ""
            attrs = "arrowhead=none" if not label else f"arrowhead=none, label={_q(label)}"
            lines.append(f"  {_q(rel.parent)} -> {_q(junction)} [{attrs}];")
            for child in rel.children:
                lines.append(f"  {_q(junction)} -> {_q(child)};")
        elif kind is FpRelationKind.REQUIRE:
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} "
                             f'[style=dashed, label="require", constraint=false];')
        elif kind is FpRelationKind.EXCLUDE:
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} "
                             f'[style=dotted, dir=none, label="exclude", constraint=false];')
        elif kind is FpRelationKind.VP_DERIVATION:
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} "
                             f'[style=dashed, label="derives", constraint=false];')
        else:
            # Custom kinds: drawn with their user-defined type, never analysed.
            label = rel.custom_type or kind.value
            for child in rel.children:
                lines.append(f"  {_q(rel.parent)} -> {_q(child)} "
                             f"[style=dashed, label={_q(label)}, constraint=false];")
    for group in fm.groups:
        for left, right in zip(group.members, group.members[1:]):
            lines.append(f"  {_q(left)} -> {_q(right)} "
                         f"[style=dotted, dir=none, label={_q(group.id)}, constraint=false];")
    lines.append("}")
    return lines


# ---------------------------------------------------------------------------
# Quality perspective

def _quality_lines(quality: tuple[Requirement, ...]) -> list[str]:
    if not quality:
        raise EmptyPerspectiveError("quality")
    lines = ["digraph quality {", "  rankdir=TB;",
             '  node [fontname="Helvetica", shape=box];', '  edge [fontname="Helvetica"];']
    ids = {req.id for req in quality}
    for req in quality:
        label = _label(req.name, f"sat {req.satisfiability:g}")
        lines.append(f"  {_q(req.id)} [label={label}, style=filled, "
                     f"fillcolor={_q(_fill(req.level))}];")
    for req in quality:
        if req.parent is not None and req.parent in ids:
            kind = req.parent_type.value.lower() if req.parent_type is not None else ""
            attrs = "style=dashed" if not kind else f"style=dashed, label={_q(kind)}"
            lines.append(f"  {_q(req.parent)} -> {_q(req.id)} [{attrs}];")
    lines.append("}")
    return lines


# ---------------------------------------------------------------------------
# Structural perspective

def _sp_node(block: SpBlock, dashed: bool, indent: str) -> str:
    parts = [block.name] if not block.stereotype else [block.name, f"«{block.stereotype}»"]
    style = "filled,dashed" if dashed else "filled"
    return (f"{indent}{_q(block.id)} [label={_label(*parts)}, shape=box, "
            f"style={_q(style)}, fillcolor={_q(_fill(block.level))}];")


def _sp_edge(rel: SpRelation) -> str:
    attrs: list[str] = []
    if rel.kind is SpRelationKind.CHANNEL:
        attrs.append("dir=none")
    elif rel.direction is Direction.BIDIRECTIONAL:
        attrs.append("dir=both")
    if rel.kind is SpRelationKind.EFFECT:
        attrs.append("style=dashed")
        parts = [p for p in (rel.label,
                             rel.effect_type.value if rel.effect_type is not None else "",
                             rel.endpoint_type) if p]
    else:
        parts = [rel.label] if rel.label else []
    if parts:
        attrs.append(f"label={_label(*parts)}")
    suffix = f" [{', '.join(attrs)}]" if attrs else ""
    return f"  {_q(rel.source)} -> {_q(rel.target)}{suffix};"


def _emit_decomposition(dm: DecompositionModel, lines: list[str], edges: list[str],
                        slugs: _Slugs, indent: str) -> None:
    for block in dm.blocks:
        _emit_sp_block(block, lines, edges, slugs, indent, dashed=False)
    for rel in dm.relations:
        edges.append(_sp_edge(rel))
    for pkg in dm.packages:
        slug = slugs.make(pkg.name)
        lines.append(f"{indent}subgraph cluster_{slug} {{")
        lines.append(f"{indent}  label={_q(pkg.name)};")
        lines.append(f"{indent}  style=dashed;")
        _emit_decomposition(pkg.elements, lines, edges, slugs, indent + "  ")
        lines.append(f"{indent}}}")


def _emit_sp_block(block: SpBlock, lines: list[str], edges: list[str],
                   slugs: _Slugs, indent: str, dashed: bool) -> None:
    nested = not block.decomposition.is_empty() or block.variants
    if not nested:
        lines.append(_sp_node(block, dashed, indent))
        return
    slug = slugs.make(block.id)
    lines.append(f"{indent}subgraph cluster_{slug} {{")
    lines.append(f"{indent}  label={_q(block.name)};")
    lines.append(_sp_node(block, dashed, indent + "  "))
    _emit_decomposition(block.decomposition, lines, edges, slugs, indent + "  ")
    for variant in block.variants:
        _emit_sp_block(variant, lines, edges, slugs, indent + "  ", dashed=True)
        edges.append(f"  {_q(block.id)} -> {_q(variant.id)} "
                     f'[style=dotted, label="variant", constraint=false];')
    lines.append(f"{indent}}}")


def _structural_lines(sm: StructuralModel) -> list[str]:
    if not any(not dm.is_empty() for dm in sm.top_models):
        raise EmptyPerspectiveError("structural")
    lines = ["digraph structural {", "  rankdir=TB;", "  compound=true;",
             '  node [fontname="Helvetica"];', '  edge [fontname="Helvetica"];']
    edges: list[str] = []
    slugs = _Slugs()
    for dm in sm.top_models:
        _emit_decomposition(dm, lines, edges, slugs, "  ")
    lines.extend(edges)
    lines.append("}")
    return lines


def export_dot(model: Model, perspective: str) -> str:
    """Render one perspective as a DOT digraph; raises on an empty perspective."""
    if perspective == "functional":
        lines = _functional_lines(model.functional)
    elif perspective == "quality":
        lines = _quality_lines(model.quality)
    elif perspective == "structural":
        lines = _structural_lines(model.structural)
    else:
        raise ValueError(f"unknown perspective {perspective!r}; "
                         f"expected one of {', '.join(PERSPECTIVES)}")
    return "\n".join(lines) + "\n"
