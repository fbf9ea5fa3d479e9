/**
 * Interactive feature tree for the functional perspective.
 *
 * Blocks are colored by abstraction level. A block's interaction state
 * comes straight from the last server payloads: explicit decisions render
 * as in/out, blocks the server reports as forced render locked (forced in)
 * or disabled (forced out), and everything else is open. The tree itself
 * never infers a forced state.
 */

import { levelColor } from "./color.js";
import type { HighlightRule } from "./state.js";
import type {
  DecisionState,
  FpBlock,
  FpRelation,
  FunctionalModel,
  Propagation,
} from "./types.js";
import { TREE_KINDS } from "./types.js";

export type NodeState = "locked" | "disabled" | "in" | "out" | "open";

export interface FpTreeHandlers {
  onToggle: (id: string) => void;
  onExclude: (id: string) => void;
}

export interface FpTreeOptions {
  decisions: Readonly<Record<string, DecisionState>>;
  propagation: Propagation | null;
  levelFilter: ReadonlySet<string> | null;
  highlightRules: readonly HighlightRule[];
  focus: string | null;
  handlers: FpTreeHandlers;
}

const STATE_MARKS: Record<NodeState, string> = {
  locked: "✓",
  in: "✓",
  out: "✗",
  disabled: "–",
  open: "",
};

function nodeState(id: string, options: FpTreeOptions): NodeState {
  const decided = options.decisions[id];
  if (decided === "In") {
    return "in";
  }
  if (decided === "Out") {
    return "out";
  }
  const propagation = options.propagation;
  if (propagation !== null) {
    if (propagation.forcedIn.includes(id)) {
      return "locked";
    }
    if (propagation.forcedOut.includes(id)) {
      return "disabled";
    }
  }
  return "open";
}

function edgeMarker(kind: string | null): string {
  if (kind === "Mandatory") {
    return "●";
  }
  if (kind === "Optional") {
    return "○";
  }
  return "";
}

function cardinalityText(relation: FpRelation): string {
  if (relation.kind === "Alternative") {
    return "choose 1";
  }
  const [lo, hi] = relation.cardinality ?? [1, 1];
  return `choose ${lo}..${hi}`;
}

function blockRow(
  block: FpBlock,
  edgeKind: string | null,
  options: FpTreeOptions,
): HTMLElement {
  const state = nodeState(block.id, options);
  const row = document.createElement("div");
  row.className = "fp-block";
  row.dataset.blockId = block.id;
  row.dataset.state = state;
  row.dataset.level = block.level;
  row.style.background = levelColor(block.level);
  for (const rule of options.highlightRules) {
    if (rule.kind === block.kind) {
      row.style.outline = `3px solid ${rule.color}`;
    }
  }
  if (options.focus === block.id) {
    row.classList.add("focused");
  }

  const marker = edgeMarker(edgeKind);
  if (marker !== "") {
    const span = document.createElement("span");
    span.className = "edge-marker";
    span.textContent = marker;
    row.append(span);
  }

  const toggle = document.createElement("button");
  toggle.type = "button";
  toggle.className = "fp-toggle";
  toggle.textContent = block.name;
  toggle.title = block.description === undefined || block.description === ""
    ? block.id
    : block.description;
  const interactive = state === "open" || state === "in" || state === "out";
  if (interactive) {
    toggle.addEventListener("click", () => options.handlers.onToggle(block.id));
  } else {
    toggle.disabled = true;
  }
  row.append(toggle);

  const mark = STATE_MARKS[state];
  if (mark !== "") {
    const span = document.createElement("span");
    span.className = "state-mark";
    span.textContent = mark;
    row.append(span);
  }

  const exclude = document.createElement("button");
  exclude.type = "button";
  exclude.className = "fp-exclude";
  exclude.textContent = "✗";
  exclude.title = `exclude ${block.name}`;
  if (interactive) {
    exclude.addEventListener("click", () => options.handlers.onExclude(block.id));
  } else {
    exclude.disabled = true;
  }
  row.append(exclude);
  return row;
}

function describeEndpoint(
  id: string,
  blocks: Map<string, FpBlock>,
  vpLabels: Map<string, string>,
): string {
  return blocks.get(id)?.name ?? vpLabels.get(id) ?? id;
}

/** Render the feature tree plus its cross-tree constraint and group lists. */
export function renderFpTree(functional: FunctionalModel, options: FpTreeOptions): HTMLElement {
  const blocks = new Map<string, FpBlock>();
  for (const block of functional.blocks ?? []) {
    blocks.set(block.id, block);
  }
  const treeRelations = new Map<string, FpRelation[]>();
  const crossRelations: FpRelation[] = [];
  const vpLabels = new Map<string, string>();
  for (const relation of functional.relations ?? []) {
    if (relation.variationPoint !== undefined) {
      vpLabels.set(relation.variationPoint.id, relation.variationPoint.label);
    }
    if (TREE_KINDS.has(relation.kind)) {
      const list = treeRelations.get(relation.parent) ?? [];
      list.push(relation);
      treeRelations.set(relation.parent, list);
    } else {
      crossRelations.push(relation);
    }
  }

  const rendered = new Set<string>();

  const hidden = (block: FpBlock): boolean =>
    options.levelFilter !== null && !options.levelFilter.has(block.level);

  const renderBlock = (id: string, edgeKind: string | null): HTMLElement | null => {
    const block = blocks.get(id);
    if (block === undefined || rendered.has(id)) {
      return null;
    }
    rendered.add(id);
    const item = document.createElement("li");
    item.className = "fp-node";
    if (hidden(block)) {
      item.hidden = true;
    }
    item.append(blockRow(block, edgeKind, options));

    const childItems: HTMLElement[] = [];
    for (const relation of treeRelations.get(id) ?? []) {
      if (relation.kind === "Mandatory" || relation.kind === "Optional") {
        for (const childId of relation.children) {
          const child = renderBlock(childId, relation.kind);
          if (child !== null) {
            childItems.push(child);
          }
        }
      } else {
        const group = document.createElement("li");
        group.className = "fp-vp-group";
        group.dataset.relationId = relation.id;
        const head = document.createElement("div");
        head.className = "fp-vp";
        const label = relation.variationPoint?.label ?? relation.kind;
        head.textContent = `◇ ${label} (${cardinalityText(relation)})`;
        group.append(head);
        const groupList = document.createElement("ul");
        for (const childId of relation.children) {
          const child = renderBlock(childId, null);
          if (child !== null) {
            groupList.append(child);
          }
        }
        group.append(groupList);
        childItems.push(group);
      }
    }
    if (childItems.length > 0) {
      const list = document.createElement("ul");
      list.append(...childItems);
      item.append(list);
    }
    return item;
  };

  const tree = document.createElement("ul");
  tree.className = "fp-tree";
  for (const rootId of functional.roots ?? []) {
    const item = renderBlock(rootId, null);
    if (item !== null) {
      tree.append(item);
    }
  }
  // blocks unreachable from the declared roots stay visible instead of vanishing
  for (const block of functional.blocks ?? []) {
    if (!rendered.has(block.id)) {
      const item = renderBlock(block.id, null);
      if (item !== null) {
        tree.append(item);
      }
    }
  }

  const wrapper = document.createElement("div");
  wrapper.append(tree);

  const footnotes = document.createElement("div");
  footnotes.className = "fp-constraints";
  if (crossRelations.length > 0) {
    const heading = document.createElement("h3");
    heading.textContent = "Cross-tree constraints";
    const list = document.createElement("ul");
    for (const relation of crossRelations) {
      const item = document.createElement("li");
      item.dataset.relationId = relation.id;
      const from = describeEndpoint(relation.parent, blocks, vpLabels);
      const to = relation.children
        .map((id) => describeEndpoint(id, blocks, vpLabels))
        .join(", ");
      const kind = relation.customType === undefined
        ? relation.kind
        : `${relation.kind} (${relation.customType})`;
      item.textContent = `${kind}: ${from} → ${to}`;
      list.append(item);
    }
    footnotes.append(heading, list);
  }
  if ((functional.groups ?? []).length > 0) {
    const heading = document.createElement("h3");
    heading.textContent = "Groups (all or none)";
    const list = document.createElement("ul");
    for (const group of functional.groups ?? []) {
      const item = document.createElement("li");
      item.dataset.groupId = group.id;
      const members = group.members
        .map((id) => blocks.get(id)?.name ?? id)
        .join(", ");
      item.textContent = `${group.id}: ${members}`;
      list.append(item);
    }
    footnotes.append(heading, list);
  }
  if (footnotes.childNodes.length > 0) {
    wrapper.append(footnotes);
  }
  return wrapper;
}
