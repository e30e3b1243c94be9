/** Page wiring: two dataset panels, options, compute, results. */

import { diffFields, estimateFields, type DisplayField } from "./format.js";
import { ConsoleStore, type DatasetKey } from "./state.js";
import { renderTable } from "./table.js";
import { METHODS } from "./types.js";
import { hasMeans } from "./validate.js";

const store = new ConsoleStore();

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function renderMethodSelect(key: DatasetKey, select: HTMLSelectElement): void {
  const ds = key === "a" ? store.a : store.b;
  if (!ds) return;
  select.replaceChildren();
  for (const { value, label } of METHODS) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    // the Linear method is available exactly when every bin has a mean
    if (value === "linear" && !hasMeans(ds.rows)) {
      option.disabled = true;
      option.title = "needs a mean for every bin";
    }
    if (ds.method === value) option.selected = true;
    select.appendChild(option);
  }
}

function renderResults(fields: DisplayField[] | null, root: HTMLElement): void {
  root.replaceChildren();
  if (!fields) return;
  const dl = document.createElement("dl");
  for (const { label, value } of fields) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  root.appendChild(dl);
}

interface FocusMemo {
  panel: string;
  row: string;
  field: string;
  cursor: number | null;
}

function captureFocus(): FocusMemo | null {
  const active = document.activeElement;
  if (!(active instanceof HTMLInputElement)) return null;
  const panel = active.closest("[data-panel]");
  if (!panel || !active.dataset.row || !active.dataset.field) return null;
  return {
    panel: (panel as HTMLElement).dataset.panel ?? "",
    row: active.dataset.row,
    field: active.dataset.field,
    cursor: active.selectionStart,
  };
}

function restoreFocus(memo: FocusMemo | null): void {
  if (!memo) return;
  const input = document.querySelector<HTMLInputElement>(
    `[data-panel="${memo.panel}"] input[data-row="${memo.row}"][data-field="${memo.field}"]`,
  );
  if (!input) return;
  input.focus();
  if (memo.cursor !== null) input.setSelectionRange(memo.cursor, memo.cursor);
}

function render(): void {
  const memo = captureFocus();

  renderTable(store, "a", byId("table-a"));
  renderMethodSelect("a", byId<HTMLSelectElement>("method-a"));
  byId("csv-error-a").textContent = store.a.csvError ?? "";

  const panelB = byId("panel-b");
  panelB.hidden = store.b === null;
  byId<HTMLButtonElement>("enable-b").hidden = store.b !== null;
  if (store.b) {
    renderTable(store, "b", byId("table-b"));
    renderMethodSelect("b", byId<HTMLSelectElement>("method-b"));
    byId("csv-error-b").textContent = store.b.csvError ?? "";
  }

  const optionErrors = store.optionErrors();
  byId("option-errors").textContent = optionErrors.join("; ");

  const compute = byId<HTMLButtonElement>("compute");
  compute.disabled = !store.canCompute() || store.computing;
  compute.textContent = store.computing ? "computing..." : "Calculate now";

  byId("compute-error").textContent = store.computeError ?? "";

  renderResults(store.results.single && estimateFields(store.results.single), byId("result-single"));
  const diffPanel = byId("result-diff-panel");
  diffPanel.hidden = store.b === null;
  renderResults(store.results.diff && diffFields(store.results.diff), byId("result-diff"));

  restoreFocus(memo);
}

function wireUpload(key: DatasetKey, input: HTMLInputElement): void {
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then((text) => store.loadCsv(key, text));
    input.value = "";
  });
}

function setup(): void {
  wireUpload("a", byId<HTMLInputElement>("upload-a"));
  wireUpload("b", byId<HTMLInputElement>("upload-b"));
  byId("add-row-a").addEventListener("click", () => store.addRow("a"));
  byId("add-row-b").addEventListener("click", () => store.addRow("b"));
  byId<HTMLSelectElement>("method-a").addEventListener("change", (e) =>
    store.setMethod("a", (e.target as HTMLSelectElement).value as never),
  );
  byId<HTMLSelectElement>("method-b").addEventListener("change", (e) =>
    store.setMethod("b", (e.target as HTMLSelectElement).value as never),
  );
  byId("enable-b").addEventListener("click", () => store.enableSecondDataset());
  byId("disable-b").addEventListener("click", () => store.disableSecondDataset());
  byId<HTMLInputElement>("p-input").addEventListener("input", (e) =>
    store.setP((e.target as HTMLInputElement).value),
  );
  byId<HTMLInputElement>("level-input").addEventListener("input", (e) =>
    store.setLevel((e.target as HTMLInputElement).value),
  );
  byId<HTMLInputElement>("tail-input").addEventListener("change", (e) =>
    store.setUnboundedTail((e.target as HTMLInputElement).checked),
  );
  byId("compute").addEventListener("click", () => void store.compute());
  store.subscribe(render);
  render();
}

setup();
