/**
 * Application shell: perspective toolbar, level filter, highlight rules,
 * error banner, the active perspective's view, and the trace drawer.
 *
 * The whole tree re-renders on every store change; at this scale that is
 * simpler and safer than incremental updates.
 */

import { Client } from "./api.js";
import { levelColor } from "./color.js";
import { renderFpTree } from "./fpTree.js";
import { findSpBlock, formatValue, renderSpBlockList, renderSpInspector } from "./spInspector.js";
import { modelLevels, PERSPECTIVES, Store, type Perspective, type ViewState } from "./state.js";
import { renderTraceView } from "./traceView.js";
import type { ModelDocument } from "./types.js";

const HIGHLIGHT_KINDS = ["Feature", "Function"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderTopbar(store: Store): HTMLElement {
  const state = store.state;
  const bar = el("header", "topbar");
  bar.append(el("h1", undefined, "IMoG Configurator"));

  const nav = el("nav", "perspectives");
  for (const perspective of PERSPECTIVES) {
    const button = el("button", undefined, perspective);
    button.type = "button";
    button.dataset.perspective = perspective;
    button.setAttribute("aria-pressed", state.perspective === perspective ? "true" : "false");
    button.addEventListener("click", () => store.setPerspective(perspective));
    nav.append(button);
  }
  bar.append(nav);

  const levels = modelLevels(state.model);
  if (levels.length > 0) {
    const filter = el("div", "level-filter");
    filter.append(el("span", undefined, "Levels:"));
    for (const level of levels) {
      const label = el("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.level = level;
      box.checked = state.levelFilter === null || state.levelFilter.has(level);
      box.addEventListener("change", () => store.toggleLevel(level));
      label.append(box, level);
      label.style.borderBottom = `3px solid ${levelColor(level)}`;
      filter.append(label);
    }
    bar.append(filter);
  }

  const highlight = el("div", "highlight-editor");
  const kindSelect = document.createElement("select");
  for (const kind of HIGHLIGHT_KINDS) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind;
    kindSelect.append(option);
  }
  const colorInput = document.createElement("input");
  colorInput.type = "color";
  colorInput.value = "#d84315";
  const add = el("button", undefined, "Highlight");
  add.type = "button";
  add.addEventListener("click", () => store.addHighlight(kindSelect.value, colorInput.value));
  highlight.append(kindSelect, colorInput, add);
  state.highlightRules.forEach((rule, index) => {
    const chip = el("span", "highlight-chip", `${rule.kind}`);
    chip.style.borderColor = rule.color;
    const remove = el("button", undefined, "×");
    remove.type = "button";
    remove.addEventListener("click", () => store.removeHighlight(index));
    chip.append(remove);
    highlight.append(chip);
  });
  bar.append(highlight);
  return bar;
}

function renderBanner(store: Store): HTMLElement | null {
  const state = store.state;
  if (state.error === null) {
    return null;
  }
  const banner = el("div", "banner banner-error");
  banner.dataset.testid = "error-banner";
  banner.append(el("span", undefined, state.error));
  const dismiss = el("button", undefined, "dismiss");
  dismiss.type = "button";
  dismiss.addEventListener("click", () => store.dismissError());
  banner.append(dismiss);
  return banner;
}

function renderStrategy(model: ModelDocument): HTMLElement {
  const view = el("div");
  if (model.strategy.length === 0) {
    view.append(el("p", "placeholder", "no strategy content"));
    return view;
  }
  for (const div of model.strategy) {
    const card = el("section", "card");
    card.append(el("h2", undefined, div.name));
    if (div.htmlContent !== undefined && div.htmlContent !== "") {
      const body = el("div");
      body.innerHTML = div.htmlContent;
      card.append(body);
    }
    const elements = div.embeddedElements ?? [];
    if (elements.length > 0) {
      const list = el("ul");
      for (const element of elements) {
        const item = el("li");
        item.dataset.elementId = element.id;
        item.append(el("span", "chip", element.category), element.text);
        if (element.value !== undefined) {
          item.append(` (${String(element.value)})`);
        }
        list.append(item);
      }
      card.append(list);
    }
    view.append(card);
  }
  return view;
}

function renderFunctional(store: Store): HTMLElement {
  const state = store.state;
  const view = el("div");
  const summary = el("div", "fp-summary");
  if (state.analysis !== null) {
    const count = el("span", "count", `${state.analysis.count} configurations`);
    count.dataset.testid = "config-count";
    summary.append(count);
    if (state.analysis.void) {
      summary.append(el("span", "void-flag", "void model: no valid configuration"));
    }
    if (state.analysis.dead.length > 0) {
      const dead = el("span", "dead", `dead: ${state.analysis.dead.join(", ")}`);
      dead.dataset.testid = "dead-blocks";
      summary.append(dead);
    }
  } else if (state.analysisError !== null) {
    summary.append(el("span", "void-flag", `analysis unavailable: ${state.analysisError}`));
  }
  const clear = el("button", undefined, "Clear decisions");
  clear.type = "button";
  clear.dataset.testid = "clear-decisions";
  clear.addEventListener("click", () => {
    void store.clearDecisions();
  });
  summary.append(clear);
  view.append(summary);

  view.append(
    renderFpTree(store.state.model?.functional ?? {}, {
      decisions: state.decisions,
      propagation: state.propagation,
      levelFilter: state.levelFilter,
      highlightRules: state.highlightRules,
      focus: state.focus,
      handlers: {
        onToggle: (id) => {
          void store.toggleDecision(id);
        },
        onExclude: (id) => {
          void store.toggleExclude(id);
        },
      },
    }),
  );
  return view;
}

function renderQuality(state: ViewState): HTMLElement {
  const view = el("div");
  const requirements = state.model?.quality ?? [];
  if (requirements.length === 0) {
    view.append(el("p", "placeholder", "no requirements"));
    return view;
  }
  const table = el("table", "grid");
  const head = el("tr");
  for (const column of ["Id", "Name", "Level", "Stereotypes", "Sat", "Priority", "Targets", "Text"]) {
    head.append(el("th", undefined, column));
  }
  table.append(head);
  for (const requirement of requirements) {
    const row = el("tr");
    row.dataset.requirementId = requirement.id;
    if (state.levelFilter !== null && !state.levelFilter.has(requirement.level)) {
      row.hidden = true;
    }
    if (state.focus === requirement.id) {
      row.classList.add("focused");
    }
    row.append(
      el("td", undefined, requirement.id),
      el("td", undefined, requirement.name),
      el("td", undefined, requirement.level),
      el("td", undefined, (requirement.stereotypes ?? []).join(", ")),
      el("td", undefined, requirement.satisfiability === undefined ? "" : String(requirement.satisfiability)),
      el("td", undefined, requirement.priority === undefined ? "" : String(requirement.priority)),
      el("td", undefined, (requirement.targets ?? []).join(", ")),
      el("td", undefined, requirement.text ?? ""),
    );
    table.append(row);
  }
  view.append(table);
  return view;
}

function renderStructural(store: Store): HTMLElement {
  const state = store.state;
  const view = el("div", "sp-layout");
  const structural = state.model?.structural ?? {};
  view.append(
    renderSpBlockList(structural, state.inspected, state.levelFilter, state.focus, {
      onInspect: (id) => {
        void store.inspect(id);
      },
    }),
  );
  const base = state.inspected === null ? null : findSpBlock(structural, state.inspected);
  view.append(
    renderSpInspector(base, state.effective, state.selections, {
      onVariant: (variantId) => {
        void store.chooseVariant(variantId);
      },
      onRefinement: (groupId, refinementId) => {
        void store.chooseRefinement(groupId, refinementId);
      },
    }),
  );
  return view;
}

function renderKnowledge(state: ViewState): HTMLElement {
  const view = el("div");
  const entries = state.model?.knowledge ?? [];
  if (entries.length === 0) {
    view.append(el("p", "placeholder", "no knowledge entries"));
    return view;
  }
  for (const entry of entries) {
    const card = el("section", "card");
    card.dataset.entryId = entry.id;
    if (state.focus === entry.id) {
      card.classList.add("focused");
    }
    const title = el("h2", undefined, entry.name);
    if (entry.type !== undefined && entry.type !== "") {
      title.append(" ", el("span", "chip", entry.type));
    }
    card.append(title);
    if (entry.yearOfAvailability !== undefined) {
      card.append(el("p", undefined, `available ${entry.yearOfAvailability}`));
    }
    for (const property of entry.properties ?? []) {
      card.append(el("p", undefined, `${property.name}: ${formatValue(property.value, property.unit)}`));
    }
    view.append(card);
  }
  return view;
}

function renderView(store: Store): HTMLElement {
  const state = store.state;
  const main = el("main");
  if (state.phase === "loading") {
    main.append(el("p", "placeholder", "loading model…"));
    return main;
  }
  if (state.phase === "failed" || state.model === null) {
    main.append(el("p", "placeholder", "the model could not be loaded"));
    const retry = el("button", undefined, "Retry");
    retry.type = "button";
    retry.addEventListener("click", () => {
      void store.load();
    });
    main.append(retry);
    return main;
  }
  const views: Record<Perspective, () => HTMLElement> = {
    Strategy: () => renderStrategy(state.model as ModelDocument),
    Functional: () => renderFunctional(store),
    Quality: () => renderQuality(state),
    Structural: () => renderStructural(store),
    Knowledge: () => renderKnowledge(state),
  };
  main.append(views[state.perspective]());
  return main;
}

export function render(root: HTMLElement, store: Store): void {
  const children: (HTMLElement | null)[] = [
    renderTopbar(store),
    renderBanner(store),
    renderView(store),
    renderTraceView(store.state.report, (id) => store.focusElement(id)),
  ];
  root.replaceChildren(...children.filter((child): child is HTMLElement => child !== null));
  const focused = root.querySelector(".focused");
  if (focused !== null && typeof (focused as HTMLElement).scrollIntoView === "function") {
    (focused as HTMLElement).scrollIntoView();
  }
}

/** Mount the app under `root` and load the served model. */
export async function boot(root: HTMLElement, client: Client = new Client()): Promise<Store> {
  const store = new Store(client);
  store.subscribe(() => render(root, store));
  render(root, store);
  await store.load();
  return store;
}

const mount = typeof document === "undefined" ? null : document.getElementById("app");
if (mount !== null) {
  void boot(mount);
}
