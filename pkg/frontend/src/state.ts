/** Console state and transitions, kept free of DOM so it is testable.
 *
 * Rules enforced here:
 *  - compute is unavailable while any cell or option is invalid;
 *  - any edit immediately invalidates displayed results;
 *  - a response is discarded when the tables changed while it was in
 *    flight (revision check), and newer computes abort older ones.
 */

import { postEstimate, postEstimateDiff, ServiceFailure, type FetchLike } from "./api.js";
import { parseGroupedCsv } from "./csv.js";
import type {
  BinRow,
  CellError,
  DiffResult,
  EstimateResult,
  MethodName,
  RowField,
} from "./types.js";
import {
  methodDisabledReason,
  rowsToJson,
  validateProbability,
  validateRows,
} from "./validate.js";

export interface DatasetState {
  rows: BinRow[];
  method: MethodName;
  errors: CellError[];
  csvError: string | null;
}

export type DatasetKey = "a" | "b";

export interface Results {
  single: EstimateResult | null;
  diff: DiffResult | null;
}

function emptyRow(): BinRow {
  return { lower: "", upper: "", freq: "", mean: "" };
}

function freshDataset(): DatasetState {
  const rows = [emptyRow()];
  return { rows, method: "histogram", errors: validateRows(rows), csvError: null };
}

export class ConsoleStore {
  a: DatasetState = freshDataset();
  b: DatasetState | null = null;
  p = "0.5";
  level = "0.95";
  unboundedTail = false;
  results: Results = { single: null, diff: null };
  computeError: string | null = null;
  computing = false;

  private revision = 0;
  private controller: AbortController | null = null;
  private listeners: Array<() => void> = [];

  constructor(private fetchImpl: FetchLike = fetch) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private dataset(key: DatasetKey): DatasetState {
    if (key === "a") return this.a;
    if (!this.b) throw new Error("second dataset is not enabled");
    return this.b;
  }

  /** Any change to inputs: results no longer describe what is shown. */
  private edited(): void {
    this.revision += 1;
    this.results = { single: null, diff: null };
    this.computeError = null;
    this.notify();
  }

  enableSecondDataset(): void {
    if (!this.b) {
      this.b = freshDataset();
      this.edited();
    }
  }

  disableSecondDataset(): void {
    if (this.b) {
      this.b = null;
      this.edited();
    }
  }

  loadCsv(key: DatasetKey, text: string): void {
    const ds = this.dataset(key);
    try {
      const parsed = parseGroupedCsv(text);
      ds.rows = parsed.rows;
      ds.csvError = null;
      ds.errors = validateRows(ds.rows);
    } catch (err) {
      ds.csvError = err instanceof Error ? err.message : String(err);
    }
    this.edited();
  }

  setCell(key: DatasetKey, row: number, field: RowField, value: string): void {
    const ds = this.dataset(key);
    const target = ds.rows[row];
    if (!target) return;
    target[field] = value;
    ds.errors = validateRows(ds.rows);
    this.edited();
  }

  addRow(key: DatasetKey): void {
    const ds = this.dataset(key);
    const last = ds.rows[ds.rows.length - 1];
    const row = emptyRow();
    // convenience: a new row usually continues from the previous edge
    if (last && last.upper.trim() !== "") row.lower = last.upper;
    ds.rows.push(row);
    ds.errors = validateRows(ds.rows);
    this.edited();
  }

  deleteRow(key: DatasetKey, row: number): void {
    const ds = this.dataset(key);
    ds.rows.splice(row, 1);
    ds.errors = validateRows(ds.rows);
    this.edited();
  }

  setMethod(key: DatasetKey, method: MethodName): void {
    this.dataset(key).method = method;
    this.edited();
  }

  setP(value: string): void {
    this.p = value;
    this.edited();
  }

  setLevel(value: string): void {
    this.level = value;
    this.edited();
  }

  setUnboundedTail(value: boolean): void {
    this.unboundedTail = value;
    this.edited();
  }

  optionErrors(): string[] {
    const errors: string[] = [];
    const pError = validateProbability(this.p, "p");
    if (pError) errors.push(pError);
    const levelError = validateProbability(this.level, "level");
    if (levelError) errors.push(levelError);
    return errors;
  }

  methodReason(key: DatasetKey): string | null {
    const ds = this.dataset(key);
    return methodDisabledReason(ds.method, ds.rows);
  }

  /** Compute is allowed only when every input is structurally valid. */
  canCompute(): boolean {
    const datasets = this.b ? [this.a, this.b] : [this.a];
    if (datasets.some((ds) => ds.errors.length > 0 || ds.csvError !== null)) return false;
    if (this.optionErrors().length > 0) return false;
    if (this.methodReason("a")) return false;
    if (this.b && this.methodReason("b")) return false;
    return true;
  }

  async compute(): Promise<void> {
    if (!this.canCompute()) return;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const startedAt = this.revision;
    this.computing = true;
    this.computeError = null;
    this.notify();
    try {
      const p = Number(this.p);
      const level = Number(this.level);
      const single = await postEstimate(
        {
          data: rowsToJson(this.a.rows),
          method: this.a.method,
          p,
          level,
          unbounded_tail: this.unboundedTail,
        },
        controller.signal,
        this.fetchImpl,
      );
      let diff: DiffResult | null = null;
      if (this.b) {
        diff = await postEstimateDiff(
          {
            data_x: rowsToJson(this.a.rows),
            data_y: rowsToJson(this.b.rows),
            method_x: this.a.method,
            method_y: this.b.method,
            p,
            level,
            unbounded_tail: this.unboundedTail,
          },
          controller.signal,
          this.fetchImpl,
        );
      }
      if (this.revision !== startedAt) return; // stale: table changed meanwhile
      this.results = { single, diff };
    } catch (err) {
      if (controller.signal.aborted || this.revision !== startedAt) return;
      this.computeError =
        err instanceof ServiceFailure ? err.detail.message : "service unreachable";
    } finally {
      if (this.controller === controller) {
        this.computing = false;
        this.controller = null;
      }
      this.notify();
    }
  }
}
