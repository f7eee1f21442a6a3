/** Application wiring: model + controller + grid + local-storage persistence. */

import { RestClient } from "./api.js";
import { GridView } from "./grid.js";
import { TableModel } from "./model.js";
import { loadState, saveState } from "./storage.js";
import { SuggestionController } from "./suggestions.js";

export function startApp(root: HTMLElement, baseUrl = ""): void {
  const client = new RestClient(baseUrl);
  const stored = loadState(window.localStorage);
  let model: TableModel;
  try {
    model = new TableModel(stored ?? undefined);
  } catch {
    model = new TableModel(); // stored state from an incompatible version
  }
  const controller = new SuggestionController(client, model);
  model.onChange((state) => saveState(state, window.localStorage));
  new GridView(root, model, controller, client);
  controller.refreshAll();
}

const root = document.getElementById("app");
if (root) startApp(root);
