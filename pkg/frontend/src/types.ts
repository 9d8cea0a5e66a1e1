// Wire types for the exploration service API.

export type VarTypeName = "quantitative" | "nominal" | "ordinal" | "temporal";

export type ChannelName =
  | "x"
  | "y"
  | "color"
  | "shape"
  | "size"
  | "row"
  | "column";

export const CHANNELS: ChannelName[] = [
  "x",
  "y",
  "color",
  "shape",
  "size",
  "row",
  "column",
];

export interface VariableInfo {
  name: string;
  inferred_type: VarTypeName;
  effective_type: VarTypeName;
}

export interface DatasetInfo {
  variables: VariableInfo[];
  row_count: number;
}

/** One rendered question fragment: literal text or a colored variable name. */
export type Span = { text: string } | { var: string; color: string };

export interface FieldRefJson {
  field?: string;
  aggregate?: string;
  timeUnit?: string;
  bin?: boolean;
}

export interface MappingJson {
  x?: FieldRefJson;
  y?: FieldRefJson;
  color?: FieldRefJson;
  shape?: FieldRefJson;
  size?: FieldRefJson;
  row?: FieldRefJson;
  column?: FieldRefJson;
  mark?: string;
  stacked?: boolean;
}

export interface EncodingEntry {
  field?: string;
  type?: string;
  aggregate?: string;
  timeUnit?: string;
  bin?: { maxbins: number } | boolean;
  stack?: string | boolean;
}

export interface VegaLiteSpec {
  $schema?: string;
  data?: Record<string, unknown>;
  transform?: unknown[];
  mark: string;
  encoding: Partial<Record<ChannelName, EncodingEntry>>;
}

export interface GroupJson {
  question: Span[];
  added: string;
  candidates: VegaLiteSpec[];
  bookmarks: string[];
}

export interface RecommendationsJson {
  groups: GroupJson[];
  notice: string | null;
}

export interface FilterJson {
  variable: string;
  [predicate: string]: unknown;
}

export interface SnapshotJson {
  id: string;
  created_at: number;
  expires_at: number;
  dataset: DatasetInfo;
  mapping: MappingJson;
  filters: FilterJson[];
  main_spec: VegaLiteSpec | null;
  recommendations: RecommendationsJson;
}

export interface BookmarkJson {
  id: string;
  question: string;
  spec: VegaLiteSpec;
  created_at: string;
}

export interface MappingOp {
  op: "assign" | "clear";
  channel: ChannelName;
  field?: FieldRefJson;
}

export function spanText(spans: Span[]): string {
  return spans.map((s) => ("text" in s ? s.text : s.var)).join("");
}

/** The four type color tokens, mirrored from the engine's variable palette. */
export const TYPE_COLORS: Record<VarTypeName, string> = {
  quantitative: "blue",
  nominal: "green",
  ordinal: "orange",
  temporal: "yellow",
};

export const TYPE_LETTERS: Record<VarTypeName, string> = {
  quantitative: "Q",
  nominal: "N",
  ordinal: "O",
  temporal: "T",
};

export const TYPE_CYCLE: VarTypeName[] = [
  "quantitative",
  "nominal",
  "ordinal",
  "temporal",
];
