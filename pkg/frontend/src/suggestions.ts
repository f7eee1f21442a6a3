/** Suggestion panels: debounced refresh, stale-response discard, accept flows.
 *
 * Each edit schedules a refresh of both panels; edits inside the debounce
 * window coalesce into a single request per panel. A response is rendered
 * only if the fingerprint of the seed it was computed for still matches the
 * current table state, so a stale response can never overwrite a newer one.
 */

import type { RestClient } from "./api.js";
import { ApiError } from "./api.js";
import type { TableModel } from "./model.js";
import { normalizeLabel } from "./model.js";
import type { DataType, PanelKind, SeedPayload, SuggestionItem } from "./types.js";

export interface PanelState {
  kind: PanelKind;
  items: SuggestionItem[];
  loading: boolean;
  /** Guidance or retryable-error text; null when the panel is healthy. */
  notice: string | null;
  retryable: boolean;
  fingerprint: string;
}

export interface ControllerOptions {
  debounceMs?: number;
  limit?: number;
  setTimeoutImpl?: (fn: () => void, ms: number) => unknown;
  clearTimeoutImpl?: (handle: unknown) => void;
}

const GUIDANCE: Record<string, string> = {
  EMPTY_SEED_ENTITIES: "add an entity first",
  EMPTY_SEED: "add an entity, a label, or a caption first",
};

export function seedFingerprint(seed: SeedPayload): string {
  return JSON.stringify([seed.caption, seed.entities, seed.labels]);
}

export class SuggestionController {
  readonly panels: Record<PanelKind, PanelState>;
  private readonly debounceMs: number;
  private readonly limit: number;
  private readonly setTimeoutImpl: (fn: () => void, ms: number) => unknown;
  private readonly clearTimeoutImpl: (handle: unknown) => void;
  private timers: Partial<Record<PanelKind, unknown>> = {};
  private requestIds: Record<PanelKind, number> = { rows: 0, columns: 0 };
  private listeners: Array<(panel: PanelState) => void> = [];

  constructor(
    private readonly client: RestClient,
    private readonly model: TableModel,
    options: ControllerOptions = {},
  ) {
    this.debounceMs = options.debounceMs ?? 400;
    this.limit = options.limit ?? 10;
    this.setTimeoutImpl = options.setTimeoutImpl ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimeoutImpl = options.clearTimeoutImpl ?? ((h) => clearTimeout(h as number));
    this.panels = {
      rows: { kind: "rows", items: [], loading: false, notice: null, retryable: false, fingerprint: "" },
      columns: { kind: "columns", items: [], loading: false, notice: null, retryable: false, fingerprint: "" },
    };
    model.onChange(() => this.refreshAll());
  }

  onPanelChange(listener: (panel: PanelState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  currentSeed(): SeedPayload {
    return {
      caption: this.model.caption(),
      entities: this.model.coreEntities().map((e) => e.id),
      labels: this.model.labels(),
    };
  }

  refreshAll(): void {
    this.refresh("rows");
    this.refresh("columns");
  }

  /** Debounced: rapid edits collapse into one request per panel kind. */
  refresh(kind: PanelKind): void {
    const pending = this.timers[kind];
    if (pending !== undefined) this.clearTimeoutImpl(pending);
    this.timers[kind] = this.setTimeoutImpl(() => {
      delete this.timers[kind];
      void this.fire(kind);
    }, this.debounceMs);
  }

  /** Immediate refresh, bypassing the debounce (used by the retry button). */
  retry(kind: PanelKind): Promise<void> {
    return this.fire(kind);
  }

  private async fire(kind: PanelKind): Promise<void> {
    const seed = this.currentSeed();
    const fingerprint = seedFingerprint(seed);
    const panel = this.panels[kind];
    // Seed-neutral edits (e.g. a column type change) leave the fingerprint
    // untouched; the panel already reflects this seed, so don't re-request.
    if (!panel.loading && !panel.retryable && panel.fingerprint === fingerprint) return;
    const requestId = ++this.requestIds[kind];
    panel.loading = true;
    this.emit(panel);
    try {
      const response =
        kind === "rows"
          ? await this.client.suggestRows(seed, this.limit)
          : await this.client.suggestColumns(seed, this.limit);
      if (this.isStale(kind, requestId, fingerprint)) return;
      panel.items = response.suggestions;
      panel.notice = null;
      panel.retryable = false;
      panel.fingerprint = fingerprint;
    } catch (error) {
      if (this.isStale(kind, requestId, fingerprint)) return;
      panel.items = [];
      panel.fingerprint = fingerprint;
      if (error instanceof ApiError && error.status === 422) {
        panel.notice = GUIDANCE[error.code] ?? error.message;
        panel.retryable = false;
      } else {
        panel.notice = "suggestions unavailable (service unreachable)";
        panel.retryable = true;
      }
    } finally {
      if (!this.isStale(kind, requestId, fingerprint)) {
        panel.loading = false;
        this.emit(panel);
      }
    }
  }

  /** Stale when a newer request exists or the table changed since the request. */
  private isStale(kind: PanelKind, requestId: number, fingerprint: string): boolean {
    if (requestId !== this.requestIds[kind]) return true;
    return fingerprint !== seedFingerprint(this.currentSeed());
  }

  /** Accept a row suggestion; duplicates are rejected with the model's notice. */
  acceptRow(item: SuggestionItem): void {
    this.model.appendCoreEntity({ id: item.target, label: item.target });
  }

  acceptRowEntity(id: string, label: string): void {
    this.model.appendCoreEntity({ id, label });
  }

  /** Accept a column suggestion with the user's chosen data type. */
  acceptColumn(item: SuggestionItem, dataType: DataType): void {
    this.model.addColumn(item.target, dataType);
  }

  hasSeedLabel(label: string): boolean {
    const norm = normalizeLabel(label);
    return this.model.labels().some((l) => normalizeLabel(l) === norm);
  }

  private emit(panel: PanelState): void {
    for (const listener of this.listeners) listener({ ...panel, items: [...panel.items] });
  }
}
