/**
 * Wire shapes exchanged with the model service.
 *
 * These mirror the canonical document format plus the service's response
 * envelopes. The canonical form omits empty or defaulted fields, so most
 * fields are optional here. Only the fields the UI reads are typed; any
 * extra keys a document carries ride along untouched.
 */

export type Scalar = string | number | boolean;

export interface Property {
  name: string;
  value: Scalar;
  unit?: string;
}

export type PropertyOrigin = "Base" | "Variant" | "Refinement";

/** Property of a resolved block. The server always fills unit and origin. */
export interface EffectiveProperty {
  name: string;
  value: Scalar;
  unit: string;
  origin: PropertyOrigin;
}

// --- strategy ---------------------------------------------------------

export interface EmbeddedElement {
  id: string;
  category: string;
  text: string;
  value?: Scalar;
}

export interface StrategyDiv {
  name: string;
  htmlContent?: string;
  embeddedElements?: EmbeddedElement[];
}

// --- functional -------------------------------------------------------

export interface FpBlock {
  id: string;
  name: string;
  kind: string;
  level: string;
  description?: string;
}

export interface VariationPoint {
  id: string;
  label: string;
  optionLabels: string[];
}

export interface FpRelation {
  id: string;
  kind: string;
  parent: string;
  children: string[];
  cardinality?: [number, number];
  variationPoint?: VariationPoint;
  pcType?: string;
  customType?: string;
}

export interface FpGroup {
  id: string;
  members: string[];
}

export interface FunctionalModel {
  blocks?: FpBlock[];
  relations?: FpRelation[];
  groups?: FpGroup[];
  roots?: string[];
}

/** Relation kinds that form the feature tree; the rest are cross-tree. */
export const TREE_KINDS = new Set(["Mandatory", "Optional", "Alternative", "Or"]);

// --- quality ----------------------------------------------------------

export interface Requirement {
  id: string;
  name: string;
  level: string;
  text?: string;
  satisfiability?: number;
  priority?: number;
  assignee?: string;
  stereotypes?: string[];
  targets?: string[];
  customAttributes?: Property[];
  reasoning?: string;
}

// --- structural -------------------------------------------------------

export interface SolutionSpace {
  payload?: string;
  inputProperties?: string[];
  outputProperties?: string[];
}

export interface RefinementBlock {
  id: string;
  name: string;
  properties?: Property[];
  refinementGroups?: RefinementGroup[];
}

export interface RefinementGroup {
  id: string;
  name: string;
  blocks: RefinementBlock[];
  selectedRefinement?: string | null;
}

export interface SpRelation {
  id: string;
  kind: string;
  source: string;
  target: string;
  label?: string;
  direction?: string;
  effectType?: string;
  endpointType?: string;
}

export interface SpBlock {
  id: string;
  name: string;
  level: string;
  description?: string;
  stereotype?: string;
  properties?: Property[];
  sse?: SolutionSpace;
  decomposition?: Decomposition;
  refinementGroups?: RefinementGroup[];
  variants?: SpBlock[];
  selectedVariant?: string;
}

export interface SpPackage {
  name: string;
  elements?: Decomposition;
}

export interface Decomposition {
  blocks?: SpBlock[];
  relations?: SpRelation[];
  packages?: SpPackage[];
  notes?: string[];
}

export interface StructuralModel {
  topModels?: Decomposition[];
}

// --- knowledge, traces ------------------------------------------------

export interface KnowledgeEntry {
  id: string;
  name: string;
  type?: string;
  yearOfAvailability?: number;
  properties?: Property[];
}

export interface TraceLink {
  id: string;
  kind: string;
  source: string;
  target: string;
}

// --- the document -----------------------------------------------------

export interface ModelDocument {
  imogVersion: string;
  strategy: StrategyDiv[];
  functional: FunctionalModel;
  quality: Requirement[];
  structural: StructuralModel;
  knowledge: KnowledgeEntry[];
  traces: TraceLink[];
}

// --- service envelopes ------------------------------------------------

export type DecisionState = "In" | "Out";

export interface Conflict {
  decisions: { id: string; state: DecisionState }[];
  message: string;
}

export interface Propagation {
  forcedIn: string[];
  forcedOut: string[];
  conflict: Conflict | null;
}

export interface Diagnostic {
  severity: string;
  code: string;
  elementId: string | null;
  message: string;
}

export interface Selections {
  variants: Record<string, string>;
  refinements: Record<string, string>;
}

export interface ModelResponse {
  revision: number;
  model: ModelDocument;
  decisions: Record<string, DecisionState>;
  selections: Selections;
  diagnostics: Diagnostic[];
}

export interface AnalysisResponse {
  revision: number;
  count: number;
  dead: string[];
  void: boolean;
  propagation: Propagation;
}

export type DecisionRequest = { id: string; state: DecisionState | "Clear" } | { clear: true };

export interface DecisionResponse {
  revision: number;
  applied: boolean;
  decisions: Record<string, DecisionState>;
  propagation: Propagation;
}

export interface ResolveRequest {
  block: string;
  variants?: Record<string, string | null>;
  refinements?: Record<string, string | null>;
}

/** Resolved block: every property carries an origin, provenance is the fold path. */
export interface EffectiveBlock {
  id: string;
  name: string;
  level: string;
  properties: EffectiveProperty[];
  provenance: string[];
  description?: string;
  stereotype?: string;
  sse?: SolutionSpace;
  decomposition?: Decomposition;
  refinementGroups?: RefinementGroup[];
}

export interface ResolveResponse {
  revision: number;
  block: EffectiveBlock;
  diagnostics: Diagnostic[];
  selections: Selections;
}

export interface TraceReport {
  unallocatedFunctions: string[];
  unallocatedFeatures: string[];
  danglingLinks: string[];
  orphanRequirements: string[];
  knowledgeReuse: { block: string; entry: string }[];
}

export interface TraceReportResponse {
  revision: number;
  report: TraceReport;
}
