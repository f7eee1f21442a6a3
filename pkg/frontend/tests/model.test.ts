import { describe, expect, it } from "vitest";

import { EditRejected, TableModel, emptyState } from "../src/model.js";

function modelWithEntities(...ids: string[]): TableModel {
  const model = new TableModel();
  for (const id of ids) model.appendCoreEntity({ id, label: `Entity ${id}` });
  return model;
}

describe("TableModel", () => {
  it("starts with a single entity-typed core column", () => {
    const state = new TableModel().getState();
    expect(state.columns).toHaveLength(1);
    expect(state.columns[state.coreColumnIndex]!.dataType).toBe("entity");
  });

  it("appends accepted entities into the next empty core row", () => {
    const model = modelWithEntities("E1", "E2");
    expect(model.coreEntities().map((e) => e.id)).toEqual(["E1", "E2"]);
    model.addRow();
    model.appendCoreEntity({ id: "E3", label: "Three" });
    expect(model.getState().rows).toHaveLength(3);
    expect(model.coreEntities().map((e) => e.id)).toEqual(["E1", "E2", "E3"]);
  });

  it("rejects duplicate entities and leaves the state unchanged", () => {
    const model = modelWithEntities("E1");
    const before = model.getState();
    expect(() => model.appendCoreEntity({ id: "E1", label: "dup" })).toThrow(EditRejected);
    expect(model.getState()).toEqual(before);
  });

  it("undo restores the exact pre-accept state", () => {
    const model = modelWithEntities("E1");
    const before = model.getState();
    model.appendCoreEntity({ id: "E2", label: "Two" });
    expect(model.getState()).not.toEqual(before);
    expect(model.undo()).toBe(true);
    expect(model.getState()).toEqual(before);
  });

  it("adds and renames columns with normalized-duplicate protection", () => {
    const model = new TableModel();
    model.addColumn("Wins", "number");
    expect(() => model.addColumn(" WINS ", "text")).toThrow(EditRejected);
    model.addColumn("Losses", "number");
    expect(() => model.renameColumn(2, "wins")).toThrow(EditRejected);
    model.renameColumn(2, "Defeats");
    expect(model.labels()).toEqual(["Entity", "Wins", "Defeats"]);
  });

  it("keeps the core designation on the same column through moves", () => {
    const model = new TableModel();
    model.addColumn("Wins", "number");
    model.addColumn("Year", "date");
    const coreLabel = () => {
      const state = model.getState();
      return state.columns[state.coreColumnIndex]!.label;
    };
    expect(coreLabel()).toBe("Entity");
    model.moveColumn(2, 0); // move a non-core column across the core column
    expect(coreLabel()).toBe("Entity");
    expect(model.getState().columns.map((c) => c.label)).toEqual(["Year", "Entity", "Wins"]);
    model.moveColumn(1, 2); // move the core column itself
    expect(coreLabel()).toBe("Entity");
    expect(model.getState().coreColumnIndex).toBe(2);
  });

  it("protects the core column from deletion and type changes", () => {
    const model = new TableModel();
    model.addColumn("Wins", "number");
    const core = model.getState().coreColumnIndex;
    expect(() => model.deleteColumn(core)).toThrow(EditRejected);
    expect(() => model.setColumnType(core, "text")).toThrow(EditRejected);
    model.setColumnType(1, "currency");
    expect(model.getState().columns[1]!.dataType).toBe("currency");
  });

  it("routes core-cell edits through entity references only", () => {
    const model = modelWithEntities("E1");
    const core = model.getState().coreColumnIndex;
    expect(() => model.setCellText(0, core, "free text")).toThrow(EditRejected);
    model.setCoreCell(0, { id: "E7", label: "Seven" });
    expect(model.coreEntities().map((e) => e.id)).toEqual(["E7"]);
    model.setCoreCell(0, null);
    expect(model.coreEntities()).toEqual([]);
  });

  it("keeps rows rectangular when columns change", () => {
    const model = modelWithEntities("E1", "E2");
    model.addColumn("Wins", "number");
    for (const row of model.getState().rows) expect(row).toHaveLength(2);
    model.setCellText(0, 1, "3");
    model.deleteColumn(1);
    for (const row of model.getState().rows) expect(row).toHaveLength(1);
  });

  it("moves and deletes rows", () => {
    const model = modelWithEntities("E1", "E2", "E3");
    model.moveRow(2, 0);
    expect(model.coreEntities().map((e) => e.id)).toEqual(["E3", "E1", "E2"]);
    model.deleteRow(1);
    expect(model.coreEntities().map((e) => e.id)).toEqual(["E3", "E2"]);
  });

  it("rejects a constructor state that violates the invariants", () => {
    const broken = emptyState();
    broken.coreColumnIndex = 5;
    expect(() => new TableModel(broken)).toThrow(EditRejected);
  });
});
