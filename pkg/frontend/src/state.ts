/**
 * Client-side view state.
 *
 * The store mirrors server state and never derives semantics on its own:
 * forced decisions, effective blocks, counts, and trace rows are assigned
 * exclusively from response payloads. Local fields cover presentation only
 * (active perspective, level filter, highlight rules, focus).
 *
 * Concurrency: at most one request runs at a time; further interaction is
 * ignored until it settles. A 409 from the service triggers a full
 * re-fetch, never a local merge.
 */

import { ApiError, Client, RevisionConflict } from "./api.js";
import type {
  DecisionRequest,
  DecisionState,
  EffectiveBlock,
  ModelDocument,
  Propagation,
  Selections,
  SpBlock,
  TraceReport,
} from "./types.js";

export type Perspective = "Strategy" | "Functional" | "Quality" | "Structural" | "Knowledge";

export const PERSPECTIVES: readonly Perspective[] = [
  "Strategy",
  "Functional",
  "Quality",
  "Structural",
  "Knowledge",
];

export interface HighlightRule {
  kind: string;
  color: string;
}

export interface Analysis {
  count: number;
  dead: string[];
  void: boolean;
}

export interface ViewState {
  phase: "loading" | "ready" | "failed";
  error: string | null;
  busy: boolean;
  perspective: Perspective;
  /** Levels currently visible; null shows everything. */
  levelFilter: ReadonlySet<string> | null;
  highlightRules: readonly HighlightRule[];
  focus: string | null;
  inspected: string | null;
  revision: number | null;
  model: ModelDocument | null;
  decisions: Readonly<Record<string, DecisionState>>;
  selections: Selections;
  propagation: Propagation | null;
  analysis: Analysis | null;
  analysisError: string | null;
  effective: EffectiveBlock | null;
  report: TraceReport | null;
}

const INITIAL: ViewState = {
  phase: "loading",
  error: null,
  busy: false,
  perspective: "Functional",
  levelFilter: null,
  highlightRules: [],
  focus: null,
  inspected: null,
  revision: null,
  model: null,
  decisions: {},
  selections: { variants: {}, refinements: {} },
  propagation: null,
  analysis: null,
  analysisError: null,
  effective: null,
  report: null,
};

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return typeof error.detail === "string" ? error.detail : error.message;
  }
  if (error instanceof Error) {
    return error.message;
  }
  return String(error);
}

/** Abstraction level names used anywhere in the document, in encounter order. */
export function modelLevels(model: ModelDocument | null): string[] {
  if (model === null) {
    return [];
  }
  const seen = new Set<string>();
  const levels: string[] = [];
  const add = (level: string | undefined) => {
    if (level !== undefined && !seen.has(level)) {
      seen.add(level);
      levels.push(level);
    }
  };
  const walkBlocks = (blocks: SpBlock[] | undefined) => {
    for (const block of blocks ?? []) {
      add(block.level);
      walkBlocks(block.decomposition?.blocks);
      for (const pkg of block.decomposition?.packages ?? []) {
        walkBlocks(pkg.elements?.blocks);
      }
      walkBlocks(block.variants);
    }
  };
  for (const block of model.functional.blocks ?? []) {
    add(block.level);
  }
  for (const requirement of model.quality) {
    add(requirement.level);
  }
  for (const top of model.structural.topModels ?? []) {
    walkBlocks(top.blocks);
  }
  return levels;
}

type Listener = () => void;

export class Store {
  #state: ViewState = INITIAL;
  #listeners = new Set<Listener>();
  #task: Promise<void> | null = null;

  constructor(readonly client: Client) {}

  get state(): ViewState {
    return this.#state;
  }

  subscribe(listener: Listener): () => void {
    this.#listeners.add(listener);
    return () => this.#listeners.delete(listener);
  }

  /** Resolves once no request is in flight; the DOM is settled afterwards. */
  async idle(): Promise<void> {
    while (this.#task !== null) {
      await this.#task;
    }
  }

  // --- presentation-only actions ------------------------------------

  setPerspective(perspective: Perspective): void {
    this.#set({ perspective });
  }

  toggleLevel(name: string): void {
    const all = modelLevels(this.#state.model);
    const current = this.#state.levelFilter ?? new Set(all);
    const next = new Set(current);
    if (next.has(name)) {
      next.delete(name);
    } else {
      next.add(name);
    }
    // a filter that admits every level collapses back to "no filter"
    const filter = all.every((level) => next.has(level)) ? null : next;
    this.#set({ levelFilter: filter });
  }

  addHighlight(kind: string, color: string): void {
    this.#set({ highlightRules: [...this.#state.highlightRules, { kind, color }] });
  }

  removeHighlight(index: number): void {
    this.#set({ highlightRules: this.#state.highlightRules.filter((_, i) => i !== index) });
  }

  /** Highlight an element, switching to the perspective that shows it. */
  focusElement(id: string): void {
    const perspective = this.#locate(id);
    this.#set(perspective === null ? { focus: id } : { focus: id, perspective });
  }

  dismissError(): void {
    this.#set({ error: null });
  }

  // --- server-backed actions ----------------------------------------

  load(): Promise<void> {
    return this.#serialize(() => this.#refetch());
  }

  /** Click on a block name: undecided or excluded picks it, chosen clears it. */
  toggleDecision(id: string): Promise<void> {
    const next = this.#state.decisions[id] === "In" ? "Clear" : "In";
    return this.#sendDecision({ id, state: next });
  }

  /** Click on a block's exclude control: undecided or chosen excludes, excluded clears. */
  toggleExclude(id: string): Promise<void> {
    const next = this.#state.decisions[id] === "Out" ? "Clear" : "Out";
    return this.#sendDecision({ id, state: next });
  }

  clearDecisions(): Promise<void> {
    return this.#sendDecision({ clear: true });
  }

  inspect(id: string): Promise<void> {
    return this.#mutate(async () => {
      const response = await this.client.postResolve({ block: id });
      this.#set({
        inspected: id,
        effective: response.block,
        selections: response.selections,
        revision: response.revision,
        error: null,
      });
    });
  }

  chooseVariant(variantId: string | null): Promise<void> {
    const block = this.#state.inspected;
    if (block === null) {
      return Promise.resolve();
    }
    return this.#mutate(async () => {
      const response = await this.client.postResolve({ block, variants: { [block]: variantId } });
      this.#set({
        effective: response.block,
        selections: response.selections,
        revision: response.revision,
        error: null,
      });
    });
  }

  chooseRefinement(groupId: string, refinementId: string | null): Promise<void> {
    const block = this.#state.inspected;
    if (block === null) {
      return Promise.resolve();
    }
    return this.#mutate(async () => {
      const response = await this.client.postResolve({
        block,
        refinements: { [groupId]: refinementId },
      });
      this.#set({
        effective: response.block,
        selections: response.selections,
        revision: response.revision,
        error: null,
      });
    });
  }

  // --- internals ------------------------------------------------------

  #set(patch: Partial<ViewState>): void {
    this.#state = { ...this.#state, ...patch };
    for (const listener of [...this.#listeners]) {
      listener();
    }
  }

  #sendDecision(body: DecisionRequest): Promise<void> {
    return this.#mutate(async () => {
      const response = await this.client.postDecision(body);
      if (response.applied) {
        this.#set({
          revision: response.revision,
          decisions: response.decisions,
          propagation: response.propagation,
          error: null,
        });
      } else {
        // Rejected as conflicting: the server kept its decision set, so the
        // rendered state stays on the acknowledged payload and only the
        // reason is surfaced.
        this.#set({
          revision: response.revision,
          decisions: response.decisions,
          error: response.propagation.conflict?.message ?? "decision rejected",
        });
      }
    });
  }

  /** Run a mutation; one at a time, 409 falls back to a full re-fetch. */
  #mutate(send: () => Promise<void>): Promise<void> {
    return this.#serialize(async () => {
      try {
        await send();
      } catch (error) {
        if (error instanceof RevisionConflict) {
          await this.#refetch();
        } else {
          this.#set({ error: describe(error) });
        }
      }
    });
  }

  #serialize(action: () => Promise<void>): Promise<void> {
    if (this.#state.busy) {
      return Promise.resolve();
    }
    this.#set({ busy: true });
    const task = action().finally(() => {
      this.#task = null;
      this.#set({ busy: false });
    });
    this.#task = task;
    return task;
  }

  async #refetch(): Promise<void> {
    this.#set({ phase: this.#state.model === null ? "loading" : "ready" });
    try {
      const model = await this.client.getModel();
      let analysis: Analysis | null = null;
      let propagation: Propagation | null = null;
      let analysisError: string | null = null;
      try {
        const response = await this.client.getAnalysis();
        analysis = { count: response.count, dead: response.dead, void: response.void };
        propagation = response.propagation;
      } catch (error) {
        // an oversized model leaves the rest of the UI usable
        analysisError = describe(error);
      }
      const trace = await this.client.getTraceReport();
      this.#set({
        phase: "ready",
        revision: trace.revision,
        model: model.model,
        decisions: model.decisions,
        selections: model.selections,
        analysis,
        analysisError,
        propagation,
        report: trace.report,
        error: null,
      });
      const inspected = this.#state.inspected;
      if (inspected !== null) {
        try {
          const response = await this.client.postResolve({ block: inspected });
          this.#set({ effective: response.block, selections: response.selections });
        } catch {
          this.#set({ inspected: null, effective: null });
        }
      }
    } catch (error) {
      this.#set({ phase: "failed", error: describe(error) });
    }
  }

  #locate(id: string): Perspective | null {
    const model = this.#state.model;
    if (model === null) {
      return null;
    }
    if ((model.functional.blocks ?? []).some((block) => block.id === id)) {
      return "Functional";
    }
    if (model.quality.some((requirement) => requirement.id === id)) {
      return "Quality";
    }
    if (model.knowledge.some((entry) => entry.id === id)) {
      return "Knowledge";
    }
    const inBlocks = (blocks: SpBlock[] | undefined): boolean =>
      (blocks ?? []).some(
        (block) =>
          block.id === id ||
          inBlocks(block.decomposition?.blocks) ||
          (block.decomposition?.packages ?? []).some((pkg) => inBlocks(pkg.elements?.blocks)) ||
          inBlocks(block.variants),
      );
    if ((model.structural.topModels ?? []).some((top) => inBlocks(top.blocks))) {
      return "Structural";
    }
    if (model.strategy.some((div) => (div.embeddedElements ?? []).some((e) => e.id === id))) {
      return "Strategy";
    }
    return null;
  }
}
