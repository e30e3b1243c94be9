/** Parsing for the grouped-data CSV dialect: comma separated, dot
 * decimals, required header lower,upper,freq with an optional mean
 * column.  Parsing only populates the editable table; all numeric
 * validation happens in validate.ts so inline errors land on cells. */

import type { BinRow } from "./types.js";

export interface ParsedCsv {
  rows: BinRow[];
  hasMeanColumn: boolean;
}

export function parseGroupedCsv(text: string): ParsedCsv {
  const lines = text
    .split(/\r\n|\r|\n/)
    .map((line) => line.trim())
    .filter((line) => line !== "");
  if (lines.length === 0) {
    throw new Error("empty file: no header row");
  }
  const header = (lines[0] ?? "").split(",").map((h) => h.trim().toLowerCase());
  const lower = header.indexOf("lower");
  const upper = header.indexOf("upper");
  const freq = header.indexOf("freq");
  const mean = header.indexOf("mean");
  if (lower < 0 || upper < 0 || freq < 0) {
    throw new Error("header must contain the columns lower, upper and freq");
  }
  if (lines.length === 1) {
    throw new Error("empty file: no data rows");
  }
  const rows: BinRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",").map((c) => c.trim());
    rows.push({
      lower: cells[lower] ?? "",
      upper: cells[upper] ?? "",
      freq: cells[freq] ?? "",
      mean: mean >= 0 ? cells[mean] ?? "" : "",
    });
  }
  return { rows, hasMeanColumn: mean >= 0 };
}
