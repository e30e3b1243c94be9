/** Structural validation of the editable table and the option inputs.
 * The server re-checks everything; this layer exists so problems are
 * flagged inline, on the cell that caused them, before any request. */

import type { BinJson, BinRow, CellError, MethodName } from "./types.js";

function parseNumber(raw: string): number | null {
  const trimmed = raw.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}

/** Cell-keyed errors for the whole table; empty list means valid. */
export function validateRows(rows: BinRow[]): CellError[] {
  const errors: CellError[] = [];
  if (rows.length === 0) {
    return [{ row: 0, field: "lower", message: "add at least one bin" }];
  }
  const parsed: Array<{ lower: number | null; upper: number | null }> = [];
  rows.forEach((row, i) => {
    const lower = parseNumber(row.lower);
    const upper = parseNumber(row.upper);
    const freq = parseNumber(row.freq);
    parsed.push({ lower, upper });
    if (lower === null) errors.push({ row: i, field: "lower", message: "enter a number" });
    if (upper === null) errors.push({ row: i, field: "upper", message: "enter a number" });
    if (freq === null) {
      errors.push({ row: i, field: "freq", message: "enter a number" });
    } else if (freq < 0) {
      errors.push({ row: i, field: "freq", message: "frequency must be >= 0" });
    }
    if (lower !== null && upper !== null && !(lower < upper)) {
      errors.push({ row: i, field: "upper", message: "upper must exceed lower" });
    }
    if (row.mean.trim() !== "") {
      const mean = parseNumber(row.mean);
      if (mean === null) {
        errors.push({ row: i, field: "mean", message: "enter a number or leave blank" });
      } else if (lower !== null && upper !== null && (mean < lower || mean > upper)) {
        errors.push({ row: i, field: "mean", message: "mean must lie inside the bin" });
      }
    }
  });
  if (errors.length > 0) return errors;

  // Contiguity, checked in lower-edge order but reported on input rows.
  const order = rows.map((_, i) => i).sort((a, b) => parsed[a]!.lower! - parsed[b]!.lower!);
  for (let k = 1; k < order.length; k++) {
    const prev = parsed[order[k - 1]!]!;
    const cur = parsed[order[k]!]!;
    if (cur.lower !== prev.upper) {
      const kind = cur.lower! > prev.upper! ? "gap" : "overlap";
      errors.push({
        row: order[k]!,
        field: "lower",
        message: `${kind}: previous bin ends at ${prev.upper}`,
      });
    }
  }
  return errors;
}

/** True when every row carries a usable mean (the Linear method's gate). */
export function hasMeans(rows: BinRow[]): boolean {
  return rows.length > 0 && rows.every((row) => parseNumber(row.mean) !== null);
}

/** Why a method cannot run on this table, or null when it can. */
export function methodDisabledReason(method: MethodName, rows: BinRow[]): string | null {
  if (method === "linear" && !hasMeans(rows)) {
    return "needs a mean for every bin";
  }
  return null;
}

export function validateProbability(raw: string, label: string): string | null {
  const value = parseNumber(raw);
  if (value === null || !(value > 0 && value < 1)) {
    return `${label} must be a number inside (0, 1)`;
  }
  return null;
}

/** Rows -> request payload; call only after validateRows returns []. */
export function rowsToJson(rows: BinRow[]): { bins: BinJson[] } {
  const bins = rows.map((row) => {
    const bin: BinJson = {
      lower: Number(row.lower),
      upper: Number(row.upper),
      freq: Number(row.freq),
    };
    if (row.mean.trim() !== "") bin.mean = Number(row.mean);
    return bin;
  });
  bins.sort((a, b) => a.lower - b.lower);
  return { bins };
}
