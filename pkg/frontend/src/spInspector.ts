/**
 * Structural perspective: block list and effective-block inspector.
 *
 * The inspector shows the document's base block next to the server-resolved
 * effective block. Base values come from the model payload, effective
 * values and their origin badges verbatim from the resolve response; the
 * panel never folds variants or refinements itself. Pickers post the
 * chosen variant or refinement and the panel re-renders from the reply.
 */

import { levelColor } from "./color.js";
import type {
  Decomposition,
  EffectiveBlock,
  Property,
  Scalar,
  Selections,
  SpBlock,
  StructuralModel,
} from "./types.js";

export interface SpInspectorHandlers {
  onVariant: (variantId: string | null) => void;
  onRefinement: (groupId: string, refinementId: string | null) => void;
}

export interface SpListHandlers {
  onInspect: (id: string) => void;
}

export function formatValue(value: Scalar, unit?: string): string {
  const text = String(value);
  return unit === undefined || unit === "" ? text : `${text} ${unit}`;
}

/** Locate a block anywhere in the structural part, variants included. */
export function findSpBlock(structural: StructuralModel, id: string): SpBlock | null {
  const fromDecomposition = (dm: Decomposition | undefined): SpBlock | null => {
    for (const block of dm?.blocks ?? []) {
      const found = fromBlock(block);
      if (found !== null) {
        return found;
      }
    }
    for (const pkg of dm?.packages ?? []) {
      const found = fromDecomposition(pkg.elements);
      if (found !== null) {
        return found;
      }
    }
    return null;
  };
  const fromBlock = (block: SpBlock): SpBlock | null => {
    if (block.id === id) {
      return block;
    }
    for (const variant of block.variants ?? []) {
      const found = fromBlock(variant);
      if (found !== null) {
        return found;
      }
    }
    return fromDecomposition(block.decomposition);
  };
  for (const top of structural.topModels ?? []) {
    const found = fromDecomposition(top);
    if (found !== null) {
      return found;
    }
  }
  return null;
}

/** Clickable block listing; variants are folded by the server, not listed. */
export function renderSpBlockList(
  structural: StructuralModel,
  inspected: string | null,
  levelFilter: ReadonlySet<string> | null,
  focus: string | null,
  handlers: SpListHandlers,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "sp-block-list";

  const renderBlocks = (dm: Decomposition | undefined, target: HTMLElement): void => {
    for (const block of dm?.blocks ?? []) {
      const item = document.createElement("li");
      if (levelFilter !== null && !levelFilter.has(block.level)) {
        item.hidden = true;
      }
      const button = document.createElement("button");
      button.type = "button";
      button.dataset.blockId = block.id;
      button.dataset.level = block.level;
      button.style.background = levelColor(block.level);
      button.setAttribute("aria-pressed", inspected === block.id ? "true" : "false");
      if (focus === block.id) {
        button.classList.add("focused");
      }
      button.textContent = block.name;
      if (block.stereotype !== undefined && block.stereotype !== "") {
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.textContent = block.stereotype;
        button.append(chip);
      }
      button.addEventListener("click", () => handlers.onInspect(block.id));
      item.append(button);
      const nested = document.createElement("ul");
      nested.className = "nested";
      renderBlocks(block.decomposition, nested);
      for (const pkg of block.decomposition?.packages ?? []) {
        renderBlocks(pkg.elements, nested);
      }
      if (nested.childNodes.length > 0) {
        item.append(nested);
      }
      target.append(item);
    }
  };

  const list = document.createElement("ul");
  for (const top of structural.topModels ?? []) {
    renderBlocks(top, list);
    for (const pkg of top.packages ?? []) {
      const label = document.createElement("li");
      label.textContent = pkg.name;
      label.className = "placeholder";
      list.append(label);
      renderBlocks(pkg.elements, list);
    }
  }
  if (list.childNodes.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no structural blocks";
    container.append(empty);
  } else {
    container.append(list);
  }
  return container;
}

function baseValueByName(base: SpBlock | null): Map<string, Property> {
  const byName = new Map<string, Property>();
  for (const property of base?.properties ?? []) {
    byName.set(property.name, property);
  }
  return byName;
}

function propertyTable(base: SpBlock | null, effective: EffectiveBlock): HTMLElement {
  const table = document.createElement("table");
  table.className = "grid";
  const head = document.createElement("tr");
  for (const title of ["Property", "Base", "Effective", "Origin"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.append(th);
  }
  table.append(head);

  const baseProps = baseValueByName(base);
  const shown = new Set<string>();
  for (const property of effective.properties) {
    shown.add(property.name);
    const row = document.createElement("tr");
    row.dataset.propName = property.name;

    const name = document.createElement("td");
    name.textContent = property.name;

    const baseCell = document.createElement("td");
    baseCell.className = "cell-base";
    const baseProperty = baseProps.get(property.name);
    baseCell.textContent =
      baseProperty === undefined ? "–" : formatValue(baseProperty.value, baseProperty.unit);

    const effectiveCell = document.createElement("td");
    effectiveCell.className = "cell-effective";
    effectiveCell.textContent = formatValue(property.value, property.unit);

    const originCell = document.createElement("td");
    const badge = document.createElement("span");
    badge.className = `badge badge-${property.origin.toLowerCase()}`;
    badge.textContent = property.origin;
    originCell.append(badge);

    row.append(name, baseCell, effectiveCell, originCell);
    table.append(row);
  }
  // a base property missing from the effective block would be a server bug;
  // keep it visible rather than hiding the disagreement
  for (const [name, property] of baseProps) {
    if (!shown.has(name)) {
      const row = document.createElement("tr");
      row.dataset.propName = name;
      const nameCell = document.createElement("td");
      nameCell.textContent = name;
      const baseCell = document.createElement("td");
      baseCell.className = "cell-base";
      baseCell.textContent = formatValue(property.value, property.unit);
      const effectiveCell = document.createElement("td");
      effectiveCell.className = "cell-effective";
      effectiveCell.textContent = "–";
      row.append(nameCell, baseCell, effectiveCell, document.createElement("td"));
      table.append(row);
    }
  }
  return table;
}

function pickers(
  base: SpBlock | null,
  effective: EffectiveBlock,
  selections: Selections,
  handlers: SpInspectorHandlers,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "sp-pickers";

  if (base !== null && (base.variants ?? []).length > 0) {
    const label = document.createElement("label");
    label.textContent = "Variant";
    const select = document.createElement("select");
    select.dataset.picker = "variant";
    const none = document.createElement("option");
    none.value = "";
    none.textContent = "(document default)";
    select.append(none);
    for (const variant of base.variants ?? []) {
      const option = document.createElement("option");
      option.value = variant.id;
      option.textContent = variant.name;
      select.append(option);
    }
    select.value = selections.variants[base.id] ?? base.selectedVariant ?? "";
    select.addEventListener("change", () => {
      handlers.onVariant(select.value === "" ? null : select.value);
    });
    label.append(select);
    container.append(label);
  }

  for (const group of effective.refinementGroups ?? []) {
    const label = document.createElement("label");
    label.textContent = group.name;
    const select = document.createElement("select");
    select.dataset.picker = "refinement";
    select.dataset.groupId = group.id;
    const none = document.createElement("option");
    none.value = "";
    none.textContent = "(none)";
    select.append(none);
    for (const refinement of group.blocks) {
      const option = document.createElement("option");
      option.value = refinement.id;
      option.textContent = refinement.name;
      select.append(option);
    }
    select.value = group.selectedRefinement ?? "";
    select.addEventListener("change", () => {
      handlers.onRefinement(group.id, select.value === "" ? null : select.value);
    });
    label.append(select);
    container.append(label);
  }
  return container;
}

/** Inspector panel for one resolved block. */
export function renderSpInspector(
  base: SpBlock | null,
  effective: EffectiveBlock | null,
  selections: Selections,
  handlers: SpInspectorHandlers,
): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "sp-inspector";
  if (effective === null) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "select a block to inspect";
    panel.append(empty);
    return panel;
  }

  const title = document.createElement("h2");
  title.dataset.testid = "effective-name";
  title.textContent = effective.name;
  if (base !== null && base.name !== effective.name) {
    const baseName = document.createElement("span");
    baseName.className = "chip";
    baseName.textContent = `base: ${base.name}`;
    title.append(" ", baseName);
  }
  panel.append(title);

  const provenance = document.createElement("p");
  provenance.className = "sp-provenance";
  provenance.dataset.testid = "provenance";
  provenance.textContent = effective.provenance.join(" → ");
  panel.append(provenance);

  panel.append(pickers(base, effective, selections, handlers));
  panel.append(propertyTable(base, effective));

  if (effective.sse !== undefined) {
    const sse = document.createElement("dl");
    sse.className = "sp-sse";
    const rows: [string, string][] = [
      ["Solution space", effective.sse.payload ?? ""],
      ["Inputs", (effective.sse.inputProperties ?? []).join(", ")],
      ["Outputs", (effective.sse.outputProperties ?? []).join(", ")],
    ];
    for (const [term, value] of rows) {
      const dt = document.createElement("dt");
      dt.textContent = term;
      const dd = document.createElement("dd");
      dd.textContent = value;
      sse.append(dt, dd);
    }
    sse.querySelectorAll("dd")[0]?.setAttribute("data-testid", "sse-payload");
    panel.append(sse);
  }

  const parts = effective.decomposition?.blocks ?? [];
  if (parts.length > 0) {
    const section = document.createElement("div");
    section.className = "sp-decomposition";
    const heading = document.createElement("h3");
    heading.textContent = "Decomposition";
    const list = document.createElement("ul");
    for (const part of parts) {
      const item = document.createElement("li");
      item.dataset.decompId = part.id;
      item.textContent = `${part.name} (${part.id})`;
      list.append(item);
    }
    section.append(heading, list);
    panel.append(section);
  }
  return panel;
}
