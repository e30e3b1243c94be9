/** DOM rendering of one editable bin table with inline cell errors. */

import type { ConsoleStore, DatasetKey } from "./state.js";
import type { CellError, RowField } from "./types.js";

const FIELDS: RowField[] = ["lower", "upper", "freq", "mean"];

function errorFor(errors: CellError[], row: number, field: RowField): string | null {
  const hit = errors.find((e) => e.row === row && e.field === field);
  return hit ? hit.message : null;
}

export function renderTable(store: ConsoleStore, key: DatasetKey, root: HTMLElement): void {
  const ds = key === "a" ? store.a : store.b;
  if (!ds) {
    root.replaceChildren();
    return;
  }
  const table = document.createElement("table");
  table.className = "bin-table";
  const head = table.createTHead().insertRow();
  for (const label of ["lower", "upper", "freq", "mean", ""]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  const body = table.createTBody();
  ds.rows.forEach((row, i) => {
    const tr = body.insertRow();
    for (const field of FIELDS) {
      const td = tr.insertCell();
      const input = document.createElement("input");
      input.value = row[field];
      input.inputMode = "decimal";
      input.dataset.row = String(i);
      input.dataset.field = field;
      const message = errorFor(ds.errors, i, field);
      if (message) {
        input.classList.add("invalid");
        input.title = message;
        const note = document.createElement("div");
        note.className = "cell-error";
        note.textContent = message;
        td.appendChild(input);
        td.appendChild(note);
      } else {
        td.appendChild(input);
      }
      input.addEventListener("input", () => {
        store.setCell(key, i, field, input.value);
      });
    }
    const td = tr.insertCell();
    const del = document.createElement("button");
    del.textContent = "x";
    del.title = "delete row";
    del.addEventListener("click", () => store.deleteRow(key, i));
    td.appendChild(del);
  });
  root.replaceChildren(table);
}
