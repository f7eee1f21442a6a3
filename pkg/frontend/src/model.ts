/** The working table: state, edit operations, and invariant guards.
 *
 * Exactly one column is designated the core column; its cells hold entity
 * references (or are empty) while every other cell is plain text. All edits
 * go through methods here so listeners (suggestion panels, persistence)
 * always see a consistent state, and every mutation is undoable.
 */

import type { CellValue, Column, DataType, EntityRef } from "./types.js";

export interface TableState {
  caption: string;
  columns: Column[];
  coreColumnIndex: number;
  rows: CellValue[][];
}

export function normalizeLabel(raw: string): string {
  return raw.trim().toLowerCase().replace(/\s+/g, " ");
}

export function emptyState(): TableState {
  return {
    caption: "",
    columns: [{ label: "Entity", dataType: "entity" }],
    coreColumnIndex: 0,
    rows: [],
  };
}

function cloneState(state: TableState): TableState {
  return {
    caption: state.caption,
    columns: state.columns.map((c) => ({ ...c })),
    coreColumnIndex: state.coreColumnIndex,
    rows: state.rows.map((row) => row.map((cell) => ({ ...cell, entity: cell.entity && { ...cell.entity } }))),
  };
}

export class EditRejected extends Error {}

export class TableModel {
  private state: TableState;
  private undoStack: TableState[] = [];
  private listeners: Array<(state: TableState) => void> = [];

  constructor(initial?: TableState) {
    this.state = initial ? cloneState(initial) : emptyState();
    this.assertInvariants();
  }

  getState(): TableState {
    return cloneState(this.state);
  }

  onChange(listener: (state: TableState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** Ordered distinct entity ids currently in the core column. */
  coreEntities(): EntityRef[] {
    const seen = new Set<string>();
    const out: EntityRef[] = [];
    for (const row of this.state.rows) {
      const cell = row[this.state.coreColumnIndex];
      if (cell?.entity && !seen.has(cell.entity.id)) {
        seen.add(cell.entity.id);
        out.push(cell.entity);
      }
    }
    return out;
  }

  labels(): string[] {
    return this.state.columns.map((c) => c.label).filter((l) => normalizeLabel(l) !== "");
  }

  caption(): string {
    return this.state.caption;
  }

  undo(): boolean {
    const previous = this.undoStack.pop();
    if (!previous) return false;
    this.state = previous;
    this.emit();
    return true;
  }

  // -- edits ---------------------------------------------------------------

  setCaption(caption: string): void {
    this.mutate((state) => {
      state.caption = caption;
    });
  }

  addRow(at?: number): void {
    this.mutate((state) => {
      const row = state.columns.map(() => ({ text: "" }) as CellValue);
      state.rows.splice(at ?? state.rows.length, 0, row);
    });
  }

  deleteRow(index: number): void {
    this.mutate((state) => {
      if (index < 0 || index >= state.rows.length) throw new EditRejected("no such row");
      state.rows.splice(index, 1);
    });
  }

  moveRow(from: number, to: number): void {
    this.mutate((state) => {
      if (from < 0 || from >= state.rows.length || to < 0 || to >= state.rows.length) {
        throw new EditRejected("row index out of range");
      }
      const [row] = state.rows.splice(from, 1);
      state.rows.splice(to, 0, row!);
    });
  }

  addColumn(label: string, dataType: DataType, at?: number): void {
    this.mutate((state) => {
      const norm = normalizeLabel(label);
      if (norm && state.columns.some((c) => normalizeLabel(c.label) === norm)) {
        throw new EditRejected(`column "${label}" already exists`);
      }
      const index = at ?? state.columns.length;
      state.columns.splice(index, 0, { label, dataType });
      if (index <= state.coreColumnIndex) state.coreColumnIndex += 1;
      for (const row of state.rows) row.splice(index, 0, { text: "" });
    });
  }

  deleteColumn(index: number): void {
    this.mutate((state) => {
      if (index < 0 || index >= state.columns.length) throw new EditRejected("no such column");
      if (index === state.coreColumnIndex) {
        throw new EditRejected("the core column cannot be deleted");
      }
      state.columns.splice(index, 1);
      if (index < state.coreColumnIndex) state.coreColumnIndex -= 1;
      for (const row of state.rows) row.splice(index, 1);
    });
  }

  moveColumn(from: number, to: number): void {
    this.mutate((state) => {
      const n = state.columns.length;
      if (from < 0 || from >= n || to < 0 || to >= n) {
        throw new EditRejected("column index out of range");
      }
      const [column] = state.columns.splice(from, 1);
      state.columns.splice(to, 0, column!);
      // the core column keeps its designation wherever it lands
      if (state.coreColumnIndex === from) {
        state.coreColumnIndex = to;
      } else {
        if (from < state.coreColumnIndex) state.coreColumnIndex -= 1;
        if (to <= state.coreColumnIndex) state.coreColumnIndex += 1;
      }
      for (const row of state.rows) {
        const [cell] = row.splice(from, 1);
        row.splice(to, 0, cell!);
      }
    });
  }

  renameColumn(index: number, label: string): void {
    this.mutate((state) => {
      const column = state.columns[index];
      if (!column) throw new EditRejected("no such column");
      const norm = normalizeLabel(label);
      if (
        norm &&
        state.columns.some((c, i) => i !== index && normalizeLabel(c.label) === norm)
      ) {
        throw new EditRejected(`column "${label}" already exists`);
      }
      column.label = label;
    });
  }

  setColumnType(index: number, dataType: DataType): void {
    this.mutate((state) => {
      const column = state.columns[index];
      if (!column) throw new EditRejected("no such column");
      if (index === state.coreColumnIndex && dataType !== "entity") {
        throw new EditRejected("the core column always holds entities");
      }
      column.dataType = dataType;
    });
  }

  /** Plain-text edit; rejected for core cells, which hold entity references. */
  setCellText(rowIndex: number, columnIndex: number, text: string): void {
    this.mutate((state) => {
      const cell = state.rows[rowIndex]?.[columnIndex];
      if (!cell) throw new EditRejected("no such cell");
      if (columnIndex === state.coreColumnIndex) {
        throw new EditRejected("core column cells are edited via entity search");
      }
      cell.text = text;
    });
  }

  setCoreCell(rowIndex: number, entity: EntityRef | null): void {
    this.mutate((state) => {
      const row = state.rows[rowIndex];
      if (!row) throw new EditRejected("no such row");
      const duplicate =
        entity &&
        state.rows.some(
          (r, i) => i !== rowIndex && r[state.coreColumnIndex]?.entity?.id === entity.id,
        );
      if (duplicate) throw new EditRejected(`entity "${entity!.label}" is already in the table`);
      row[state.coreColumnIndex] = entity
        ? { text: entity.label, entity: { ...entity } }
        : { text: "" };
    });
  }

  /** Accepting a row suggestion: the entity goes into the next empty core row. */
  appendCoreEntity(entity: EntityRef): void {
    this.mutate((state) => {
      if (this.coreEntityIds(state).includes(entity.id)) {
        throw new EditRejected(`entity "${entity.label}" is already in the table`);
      }
      let target = state.rows.findIndex((row) => !row[state.coreColumnIndex]?.entity);
      if (target === -1) {
        state.rows.push(state.columns.map(() => ({ text: "" }) as CellValue));
        target = state.rows.length - 1;
      }
      state.rows[target]![state.coreColumnIndex] = {
        text: entity.label,
        entity: { ...entity },
      };
    });
  }

  // -- internals -----------------------------------------------------------

  private coreEntityIds(state: TableState): string[] {
    const ids: string[] = [];
    for (const row of state.rows) {
      const entity = row[state.coreColumnIndex]?.entity;
      if (entity) ids.push(entity.id);
    }
    return ids;
  }

  private mutate(edit: (state: TableState) => void): void {
    const snapshot = cloneState(this.state);
    try {
      edit(this.state);
      this.assertInvariants();
    } catch (error) {
      this.state = snapshot; // rejected edits leave the state untouched
      throw error;
    }
    this.undoStack.push(snapshot);
    if (this.undoStack.length > 200) this.undoStack.shift();
    this.emit();
  }

  private assertInvariants(): void {
    const { columns, coreColumnIndex, rows } = this.state;
    if (columns.length === 0) throw new EditRejected("a table needs at least one column");
    if (coreColumnIndex < 0 || coreColumnIndex >= columns.length) {
      throw new EditRejected("core column designation out of range");
    }
    if (columns[coreColumnIndex]!.dataType !== "entity") {
      throw new EditRejected("the core column must have the entity type");
    }
    for (const row of rows) {
      if (row.length !== columns.length) throw new EditRejected("ragged row");
    }
  }

  private emit(): void {
    const snapshot = this.getState();
    for (const listener of this.listeners) listener(snapshot);
  }
}
