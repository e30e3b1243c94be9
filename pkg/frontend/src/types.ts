/** Shared types for the console: table rows, service payloads, results. */

export type MethodName = "histogram" | "polygon" | "linear" | "gld";

export const METHODS: ReadonlyArray<{ value: MethodName; label: string }> = [
  { value: "histogram", label: "Histogram" },
  { value: "polygon", label: "Frequency polygon" },
  { value: "linear", label: "Linear interpolation" },
  { value: "gld", label: "GLD" },
];

/** One editable table row; cells are kept as raw strings while editing. */
export interface BinRow {
  lower: string;
  upper: string;
  freq: string;
  mean: string;
}

export type RowField = keyof BinRow;

/** A validation message anchored to one cell (or a whole row via field). */
export interface CellError {
  row: number;
  field: RowField;
  message: string;
}

export interface BinJson {
  lower: number;
  upper: number;
  freq: number;
  mean?: number;
}

export interface EstimateResult {
  method: string;
  p: number;
  level: number;
  n: number;
  point: number;
  lower: number;
  upper: number;
  width: number;
  f_hat: number;
}

export interface DiffGroupResult {
  method: string;
  n: number;
  point: number;
  f_hat: number;
}

export interface DiffResult {
  p: number;
  level: number;
  point: number;
  lower: number;
  upper: number;
  width: number;
  x: DiffGroupResult;
  y: DiffGroupResult;
}

export interface ServiceError {
  code: string;
  message: string;
  location: string | null;
}
