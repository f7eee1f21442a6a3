/** DOM layer: the editable grid, the two suggestion panels, and the search boxes. */

import type { RestClient } from "./api.js";
import { EditRejected, TableModel } from "./model.js";
import type { PanelState, SuggestionController } from "./suggestions.js";
import type { DataType, EntityRef, PanelKind } from "./types.js";
import { DATA_TYPES } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class GridView {
  private notice: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly model: TableModel,
    private readonly controller: SuggestionController,
    private readonly client: RestClient,
  ) {
    this.notice = el("div", "notice");
    this.model.onChange(() => this.renderTable());
    this.controller.onPanelChange((panel) => this.renderPanel(panel));
    this.renderSkeleton();
    this.renderTable();
  }

  private renderSkeleton(): void {
    this.root.replaceChildren();

    const toolbar = el("div", "toolbar");
    const captionInput = el("input", "caption-input") as HTMLInputElement;
    captionInput.placeholder = "table caption";
    captionInput.value = this.model.caption();
    captionInput.addEventListener("change", () => this.model.setCaption(captionInput.value));
    toolbar.append(captionInput);

    const addRow = el("button", "", "add row");
    addRow.addEventListener("click", () => this.model.addRow());
    const undo = el("button", "", "undo");
    undo.addEventListener("click", () => this.model.undo());
    const exportButton = el("button", "", "export");
    exportButton.addEventListener("click", () => this.exportTable());
    toolbar.append(addRow, undo, exportButton, this.notice);
    this.root.append(toolbar);

    this.root.append(el("div", "grid-host"));

    const panels = el("div", "panels");
    for (const kind of ["rows", "columns"] as PanelKind[]) {
      const panel = el("section", `panel panel-${kind}`);
      panel.append(el("h3", "", kind === "rows" ? "Row suggestions" : "Column suggestions"));
      panel.append(el("div", "panel-items"));
      panels.append(panel);
    }
    this.root.append(panels);
  }

  private renderTable(): void {
    const host = this.root.querySelector(".grid-host")!;
    const state = this.model.getState();
    const table = el("table", "grid");

    const head = el("tr");
    state.columns.forEach((column, columnIndex) => {
      const th = el("th", columnIndex === state.coreColumnIndex ? "core" : "");
      const labelInput = el("input") as HTMLInputElement;
      labelInput.value = column.label;
      labelInput.addEventListener("change", () =>
        this.guarded(() => this.model.renameColumn(columnIndex, labelInput.value)),
      );
      th.append(labelInput);

      const typeSelect = el("select") as HTMLSelectElement;
      for (const dataType of DATA_TYPES) {
        const option = el("option", "", dataType) as HTMLOptionElement;
        option.value = dataType;
        option.selected = dataType === column.dataType;
        typeSelect.append(option);
      }
      typeSelect.addEventListener("change", () =>
        this.guarded(() => this.model.setColumnType(columnIndex, typeSelect.value as DataType)),
      );
      th.append(typeSelect);

      const left = el("button", "mini", "◂");
      left.addEventListener("click", () =>
        this.guarded(() => this.model.moveColumn(columnIndex, Math.max(0, columnIndex - 1))),
      );
      const right = el("button", "mini", "▸");
      right.addEventListener("click", () =>
        this.guarded(() =>
          this.model.moveColumn(
            columnIndex,
            Math.min(state.columns.length - 1, columnIndex + 1),
          ),
        ),
      );
      const remove = el("button", "mini", "✕");
      remove.addEventListener("click", () =>
        this.guarded(() => this.model.deleteColumn(columnIndex)),
      );
      th.append(left, right, remove);
      head.append(th);
    });
    table.append(head);

    state.rows.forEach((row, rowIndex) => {
      const tr = el("tr");
      row.forEach((cell, columnIndex) => {
        const td = el("td", columnIndex === state.coreColumnIndex ? "core" : "");
        if (columnIndex === state.coreColumnIndex) {
          const display = el("span", "entity-cell", cell.entity ? cell.entity.label : "");
          display.addEventListener("click", () => this.openEntitySearch(td, rowIndex));
          td.append(display);
        } else {
          const input = el("input") as HTMLInputElement;
          input.value = cell.text;
          input.addEventListener("change", () =>
            this.guarded(() => this.model.setCellText(rowIndex, columnIndex, input.value)),
          );
          td.append(input);
        }
        tr.append(td);
      });
      const actions = el("td", "row-actions");
      const remove = el("button", "mini", "✕");
      remove.addEventListener("click", () => this.guarded(() => this.model.deleteRow(rowIndex)));
      actions.append(remove);
      tr.append(actions);
      table.append(tr);
    });

    host.replaceChildren(table);
  }

  private renderPanel(panel: PanelState): void {
    const host = this.root.querySelector(`.panel-${panel.kind} .panel-items`);
    if (!host) return;
    host.replaceChildren();
    if (panel.loading) host.append(el("div", "loading", "…"));
    if (panel.notice) {
      const notice = el("div", "panel-notice", panel.notice);
      if (panel.retryable) {
        const retry = el("button", "", "retry");
        retry.addEventListener("click", () => void this.controller.retry(panel.kind));
        notice.append(" ", retry);
      }
      host.append(notice);
      return;
    }
    for (const item of panel.items) {
      const row = el("div", "suggestion");
      row.append(el("span", "target", item.target));
      row.append(el("span", "score", item.score.toPrecision(3)));
      if (panel.kind === "rows") {
        const accept = el("button", "", "add");
        accept.addEventListener("click", () => this.guarded(() => this.controller.acceptRow(item)));
        row.append(accept);
      } else {
        const typeSelect = el("select") as HTMLSelectElement;
        for (const dataType of DATA_TYPES) {
          const option = el("option", "", dataType) as HTMLOptionElement;
          option.value = dataType;
          if (dataType === "text") option.selected = true;
          typeSelect.append(option);
        }
        const accept = el("button", "", "add");
        accept.addEventListener("click", () =>
          this.guarded(() =>
            this.controller.acceptColumn(item, typeSelect.value as DataType),
          ),
        );
        row.append(typeSelect, accept);
      }
      host.append(row);
    }
  }

  private openEntitySearch(cell: HTMLElement, rowIndex: number): void {
    const box = el("div", "entity-search");
    const input = el("input") as HTMLInputElement;
    input.placeholder = "search entities";
    const results = el("div", "entity-results");
    box.append(input, results);
    cell.append(box);
    input.focus();

    let closed = false;
    const close = () => {
      if (!closed) {
        closed = true;
        box.remove();
      }
    };
    input.addEventListener("keydown", (event) => {
      if (event.key === "Escape") close();
    });
    input.addEventListener("input", () => {
      const q = input.value.trim();
      if (!q) {
        results.replaceChildren();
        return;
      }
      this.client
        .searchEntities(q, 8)
        .then((hits) => {
          if (closed || q !== input.value.trim()) return;
          results.replaceChildren(
            ...hits.map((hit) => {
              const item = el("div", "entity-hit", `${hit.label} — ${hit.abstractSnippet}`);
              item.addEventListener("click", () => {
                const entity: EntityRef = { id: hit.id, label: hit.label };
                this.guarded(() => this.model.setCoreCell(rowIndex, entity));
                close();
              });
              return item;
            }),
          );
        })
        .catch(() => {
          if (!closed) results.replaceChildren(el("div", "panel-notice", "search unavailable"));
        });
    });
  }

  private exportTable(): void {
    void import("./storage.js").then(({ exportTable }) => {
      const blob = new Blob([exportTable(this.model.getState()) + "\n"], {
        type: "application/json",
      });
      const url = URL.createObjectURL(blob);
      const anchor = el("a") as HTMLAnchorElement;
      anchor.href = url;
      anchor.download = "table.jsonl";
      anchor.click();
      URL.revokeObjectURL(url);
    });
  }

  private guarded(edit: () => void): void {
    try {
      edit();
      this.setNotice("");
    } catch (error) {
      if (error instanceof EditRejected) {
        this.setNotice(error.message);
      } else {
        throw error;
      }
    }
  }

  private setNotice(text: string): void {
    this.notice.textContent = text;
  }
}
