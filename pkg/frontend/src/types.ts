/** Shared client-side types mirroring the service's JSON wire formats. */

export type DataType = "entity" | "text" | "date" | "number" | "currency" | "percentage";

export const DATA_TYPES: DataType[] = ["entity", "text", "date", "number", "currency", "percentage"];

export interface EntityRef {
  id: string;
  label: string;
}

/** A grid cell: plain text, or an entity reference in the core column. */
export interface CellValue {
  text: string;
  entity?: EntityRef;
}

export interface Column {
  label: string;
  dataType: DataType;
}

export interface SuggestionItem {
  target: string;
  score: number;
  components: Record<string, number>;
}

export interface SuggestResponse {
  suggestions: SuggestionItem[];
  tookMicros: number;
}

export interface EntitySearchHit {
  id: string;
  label: string;
  abstractSnippet: string;
}

export interface LabelSearchHit {
  label: string;
  tableCount: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: unknown;
}

export interface SeedPayload {
  caption: string;
  entities: string[];
  labels: string[];
}

export type PanelKind = "rows" | "columns";
