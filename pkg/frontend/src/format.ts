/** Rendering of service responses.
 *
 * Numbers are displayed exactly as received: `String(x)` on the parsed
 * JSON number, which is the shortest decimal that round-trips to the
 * same double.  No arithmetic is ever applied to response values. */

import type { DiffResult, EstimateResult } from "./types.js";

export interface DisplayField {
  label: string;
  value: string;
}

export function renderNumber(value: number): string {
  return String(value);
}

export function estimateFields(result: EstimateResult): DisplayField[] {
  return [
    { label: "method", value: result.method },
    { label: "p", value: renderNumber(result.p) },
    { label: "point estimate", value: renderNumber(result.point) },
    { label: "lower", value: renderNumber(result.lower) },
    { label: "upper", value: renderNumber(result.upper) },
    { label: "width", value: renderNumber(result.width) },
    { label: "density estimate", value: renderNumber(result.f_hat) },
    { label: "level", value: renderNumber(result.level) },
    { label: "n", value: renderNumber(result.n) },
  ];
}

export function diffFields(result: DiffResult): DisplayField[] {
  return [
    { label: "methods", value: `${result.x.method} vs ${result.y.method}` },
    { label: "p", value: renderNumber(result.p) },
    { label: "difference", value: renderNumber(result.point) },
    { label: "lower", value: renderNumber(result.lower) },
    { label: "upper", value: renderNumber(result.upper) },
    { label: "width", value: renderNumber(result.width) },
    { label: "level", value: renderNumber(result.level) },
  ];
}
