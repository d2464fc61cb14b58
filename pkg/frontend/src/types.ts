/** JSON shapes exchanged with the recommendation service. */

export type AttrType = "quantitative" | "categorical" | "geographic" | "temporal";

export interface Attribute {
  name: string;
  attrType: AttrType;
  cardinality: number;
  columnIndex: number;
  missingCount: number;
  numericRange?: [number, number] | null;
  temporalRange?: [string, string] | null;
}

export interface DatasetInfo {
  id: string;
  rowCount: number;
  attributes: Attribute[];
}

export interface SessionInfo {
  id: string;
  datasetId: string;
}

export interface UserInput {
  explicitAttrs: string[];
  intents: string[];
}

export interface ViewSpec {
  chartKind: string;
  attrs: Record<string, string>;
  aggFn: string;
  limit?: number | null;
}

export interface WidgetSpec {
  widgetKind: string;
  attr: string;
}

export interface Scores {
  relevance: number;
  attrMatch: number;
  coverage: number;
  explicitMatch: number;
  meanInterestingness: number;
}

export interface RankedCollection {
  templateCode: string;
  intent: string;
  objective: string;
  assignment: Record<string, string>;
  views: ViewSpec[];
  widgets: WidgetSpec[];
  primaryAttrs: string[];
  meanInterestingness: number;
  scores: Scores;
  /** Emitted grammar-conformant chart specs, index-aligned with `views`. */
  viewSpecs: Record<string, unknown>[];
  widgetSpecs: Record<string, unknown>[];
}

export interface Recommendations {
  collections: RankedCollection[];
  diagnostics: string[];
}

export interface Geometry {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface CanvasElement {
  id: string;
  spec: ViewSpec | WidgetSpec;
  geometry: Geometry;
}

export interface CanvasState {
  elements: CanvasElement[];
  linkOverrides: [string, string, string][];
}

export type LinkMode = "highlight" | "filter";

export interface Link {
  sourceId: string;
  targetId: string;
  allowedModes: LinkMode[];
  activeMode: LinkMode | null;
  valid: boolean;
}

export interface Effect {
  targetId: string;
  effect: "highlight" | "filter" | "none";
  predicates: unknown[];
}

export function isViewSpec(spec: ViewSpec | WidgetSpec): spec is ViewSpec {
  return "chartKind" in spec;
}
