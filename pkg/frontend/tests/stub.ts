/**
 * Recording stub for the model service.
 *
 * Serves payloads captured from the real engine (see frozen.ts) and logs
 * every exchange, so tests can both drive the UI and afterwards check
 * that each semantic value in the DOM was delivered over the wire. The
 * stub computes nothing itself: an interaction it has no payload for is
 * a test-setup bug and fails loudly.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import { findSpBlock } from "../src/spInspector.js";
import type {
  DecisionRequest,
  DecisionState,
  Diagnostic,
  EffectiveBlock,
  ModelDocument,
  Propagation,
  ResolveRequest,
  Selections,
  TraceReport,
} from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));

/** Load a model document from the primary package's fixture corpus. */
export function loadFixture(name: string): ModelDocument {
  const path = join(HERE, "..", "..", "tests", "fixtures", `${name}.imog.json`);
  return JSON.parse(readFileSync(path, "utf-8")) as ModelDocument;
}

export const EMPTY_REPORT: TraceReport = {
  unallocatedFunctions: [],
  unallocatedFeatures: [],
  danglingLinks: [],
  orphanRequirements: [],
  knowledgeReuse: [],
};

export const EMPTY_PROPAGATION: Propagation = { forcedIn: [], forcedOut: [], conflict: null };

export interface Exchange {
  method: string;
  path: string;
  requestBody: unknown;
  ifMatch: string | null;
  status: number;
  responseBody: unknown;
}

export interface Resolution {
  block: EffectiveBlock;
  diagnostics: Diagnostic[];
}

export interface StubOptions {
  model: ModelDocument;
  propagations?: Record<string, Propagation>;
  count?: number;
  dead?: string[];
  voidModel?: boolean;
  report?: TraceReport;
  resolutions?: Record<string, Resolution>;
}

function sortedEntries(record: Record<string, string>): [string, string][] {
  return Object.entries(record).sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
}

export function decisionKey(decisions: Record<string, DecisionState>): string {
  return JSON.stringify(Object.fromEntries(sortedEntries(decisions)));
}

export function resolveKey(
  block: string,
  variants: Record<string, string>,
  refinements: Record<string, string>,
): string {
  return JSON.stringify([block, sortedEntries(variants), sortedEntries(refinements)]);
}

interface Routed {
  status: number;
  body: unknown;
}

export class StubServer {
  revision = 1;
  decisions: Record<string, DecisionState> = {};
  variants: Record<string, string> = {};
  refinements: Record<string, string> = {};
  readonly exchanges: Exchange[] = [];
  /** When set, the next request answers with this error once. */
  failNext: { status: number; detail: unknown } | null = null;

  constructor(readonly options: StubOptions) {}

  /** Pretend another session committed `decisions`, bumping the revision. */
  desync(decisions: Record<string, DecisionState> = {}): void {
    this.revision += 1;
    this.decisions = decisions;
  }

  get selections(): Selections {
    return { variants: { ...this.variants }, refinements: { ...this.refinements } };
  }

  readonly fetch: FetchLike = async (input, init) => {
    const url = new URL(input, "http://stub.test");
    const method = (init?.method ?? "GET").toUpperCase();
    const headers = (init?.headers ?? {}) as Record<string, string>;
    const ifMatch = headers["If-Match"] ?? null;
    const requestBody: unknown =
      init?.body === undefined || init.body === null ? undefined : JSON.parse(String(init.body));
    const routed = this.#route(method, url.pathname, requestBody, ifMatch);
    this.exchanges.push({
      method,
      path: url.pathname,
      requestBody,
      ifMatch,
      status: routed.status,
      responseBody: routed.body,
    });
    return new Response(JSON.stringify(routed.body), {
      status: routed.status,
      headers: { "Content-Type": "application/json", ETag: `"${this.revision}"` },
    });
  };

  #route(method: string, path: string, body: unknown, ifMatch: string | null): Routed {
    if (this.failNext !== null) {
      const fail = this.failNext;
      this.failNext = null;
      return { status: fail.status, body: { detail: fail.detail } };
    }
    if (method === "POST" && ifMatch !== null) {
      if (ifMatch.replaceAll('"', "") !== String(this.revision)) {
        return {
          status: 409,
          body: { detail: { reason: "revision mismatch", revision: this.revision } },
        };
      }
    }
    if (method === "GET" && path === "/api/model") {
      return {
        status: 200,
        body: {
          revision: this.revision,
          model: this.options.model,
          decisions: { ...this.decisions },
          selections: this.selections,
          diagnostics: [],
        },
      };
    }
    if (method === "GET" && path === "/api/fp/analysis") {
      return {
        status: 200,
        body: {
          revision: this.revision,
          count: this.options.count ?? 0,
          dead: this.options.dead ?? [],
          void: this.options.voidModel ?? false,
          propagation: this.#propagation(this.decisions),
        },
      };
    }
    if (method === "POST" && path === "/api/fp/decisions") {
      return this.#decide(body as DecisionRequest);
    }
    if (method === "POST" && path === "/api/sp/resolve") {
      return this.#resolve(body as ResolveRequest);
    }
    if (method === "GET" && path === "/api/trace/report") {
      return {
        status: 200,
        body: { revision: this.revision, report: this.options.report ?? EMPTY_REPORT },
      };
    }
    return { status: 404, body: { detail: `no route: ${method} ${path}` } };
  }

  #propagation(decisions: Record<string, DecisionState>): Propagation {
    const key = decisionKey(decisions);
    const hit = (this.options.propagations ?? {})[key];
    if (hit === undefined) {
      throw new Error(`stub has no propagation payload for ${key}`);
    }
    return hit;
  }

  #decide(body: DecisionRequest): Routed {
    const next: Record<string, DecisionState> = { ...this.decisions };
    if ("clear" in body) {
      for (const id of Object.keys(next)) {
        delete next[id];
      }
    } else if (body.state === "Clear") {
      delete next[body.id];
    } else {
      next[body.id] = body.state;
    }
    const propagation = this.#propagation(next);
    if (propagation.conflict !== null) {
      // rejected: the decision set stays as acknowledged, no revision bump
      return {
        status: 200,
        body: {
          revision: this.revision,
          applied: false,
          decisions: { ...this.decisions },
          propagation,
        },
      };
    }
    if (decisionKey(next) !== decisionKey(this.decisions)) {
      this.decisions = next;
      this.revision += 1;
    }
    return {
      status: 200,
      body: {
        revision: this.revision,
        applied: true,
        decisions: { ...this.decisions },
        propagation,
      },
    };
  }

  #resolve(body: ResolveRequest): Routed {
    if (findSpBlock(this.options.model.structural, body.block) === null) {
      return { status: 404, body: { detail: `unknown structural block: ${body.block}` } };
    }
    const variants = { ...this.variants };
    for (const [blockId, variantId] of Object.entries(body.variants ?? {})) {
      if (variantId === null) {
        delete variants[blockId];
      } else {
        variants[blockId] = variantId;
      }
    }
    const refinements = { ...this.refinements };
    for (const [groupId, refinementId] of Object.entries(body.refinements ?? {})) {
      if (refinementId === null) {
        delete refinements[groupId];
      } else {
        refinements[groupId] = refinementId;
      }
    }
    const key = resolveKey(body.block, variants, refinements);
    const hit = (this.options.resolutions ?? {})[key];
    if (hit === undefined) {
      throw new Error(`stub has no resolution payload for ${key}`);
    }
    const changed =
      JSON.stringify([sortedEntries(variants), sortedEntries(refinements)]) !==
      JSON.stringify([sortedEntries(this.variants), sortedEntries(this.refinements)]);
    this.variants = variants;
    this.refinements = refinements;
    if (changed) {
      this.revision += 1;
    }
    return {
      status: 200,
      body: {
        revision: this.revision,
        block: hit.block,
        diagnostics: hit.diagnostics,
        selections: this.selections,
      },
    };
  }
}

/** Semantic values the server actually sent, pooled over all 2xx responses. */
export function recordedSemantics(exchanges: Exchange[]): {
  forcedIn: Set<string>;
  forcedOut: Set<string>;
  decided: Map<string, Set<DecisionState>>;
  counts: Set<number>;
  effectiveValues: Set<string>;
} {
  const forcedIn = new Set<string>();
  const forcedOut = new Set<string>();
  const decided = new Map<string, Set<DecisionState>>();
  const counts = new Set<number>();
  const effectiveValues = new Set<string>();
  for (const exchange of exchanges) {
    if (exchange.status < 200 || exchange.status >= 300) {
      continue;
    }
    const body = exchange.responseBody as {
      propagation?: Propagation;
      decisions?: Record<string, DecisionState>;
      count?: number;
      block?: EffectiveBlock;
    };
    if (body.propagation !== undefined) {
      for (const id of body.propagation.forcedIn) {
        forcedIn.add(id);
      }
      for (const id of body.propagation.forcedOut) {
        forcedOut.add(id);
      }
    }
    if (body.decisions !== undefined) {
      for (const [id, state] of Object.entries(body.decisions)) {
        const states = decided.get(id) ?? new Set<DecisionState>();
        states.add(state);
        decided.set(id, states);
      }
    }
    if (typeof body.count === "number") {
      counts.add(body.count);
    }
    if (body.block !== undefined) {
      for (const property of body.block.properties) {
        effectiveValues.add(
          property.unit === "" ? String(property.value) : `${String(property.value)} ${property.unit}`,
        );
      }
    }
  }
  return { forcedIn, forcedOut, decided, counts, effectiveValues };
}
