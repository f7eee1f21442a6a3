/** Persistence: the working table lives in browser local storage, and can be
 * exported/imported as a single corpus-format table object (JSON Lines line).
 */

import type { TableState } from "./model.js";
import { emptyState } from "./model.js";
import type { CellValue, Column } from "./types.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const STORAGE_KEY = "tablecomplete.workingTable";

export function saveState(state: TableState, storage: StorageLike): void {
  storage.setItem(STORAGE_KEY, JSON.stringify(state));
}

export function loadState(storage: StorageLike): TableState | null {
  const raw = storage.getItem(STORAGE_KEY);
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw) as TableState;
    if (!Array.isArray(parsed.columns) || typeof parsed.coreColumnIndex !== "number") {
      return null;
    }
    return parsed;
  } catch {
    return null;
  }
}

interface WireCell {
  text: string;
  entityId: string | null;
}

interface WireTable {
  id: string;
  pageTitle: string;
  sectionTitle: string;
  caption: string;
  headers: string[];
  coreColumnIndex: number;
  rows: WireCell[][];
}

/** Serialize the working table as one corpus-format JSON object. */
export function exportTable(state: TableState, id = "local-table"): string {
  const wire: WireTable = {
    id,
    pageTitle: "",
    sectionTitle: "",
    caption: state.caption,
    headers: state.columns.map((c) => c.label),
    coreColumnIndex: state.coreColumnIndex,
    rows: state.rows.map((row) =>
      row.map((cell) => ({ text: cell.text, entityId: cell.entity?.id ?? null })),
    ),
  };
  return JSON.stringify(wire);
}

/** Rebuild a working table from a corpus-format JSON object line. */
export function importTable(json: string): TableState {
  const wire = JSON.parse(json) as Partial<WireTable>;
  const headers = Array.isArray(wire.headers) ? wire.headers : [];
  const coreIndex =
    typeof wire.coreColumnIndex === "number" && wire.coreColumnIndex >= 0
      ? wire.coreColumnIndex
      : 0;
  if (headers.length === 0) {
    const state = emptyState();
    state.caption = wire.caption ?? "";
    return state;
  }
  const columns: Column[] = headers.map((label, i) => ({
    label,
    dataType: i === coreIndex ? "entity" : "text",
  }));
  const rows: CellValue[][] = (wire.rows ?? []).map((row) =>
    columns.map((_, columnIndex) => {
      const cell = row[columnIndex];
      if (!cell) return { text: "" };
      if (columnIndex === coreIndex && cell.entityId) {
        return { text: cell.text, entity: { id: cell.entityId, label: cell.text || cell.entityId } };
      }
      return { text: cell.text };
    }),
  );
  return {
    caption: wire.caption ?? "",
    columns,
    coreColumnIndex: Math.min(coreIndex, columns.length - 1),
    rows,
  };
}
