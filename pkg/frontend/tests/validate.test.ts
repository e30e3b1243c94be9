import { describe, expect, it } from "vitest";

import type { BinRow } from "../src/types";
import {
  hasMeans,
  methodDisabledReason,
  rowsToJson,
  validateProbability,
  validateRows,
} from "../src/validate";

function row(lower: string, upper: string, freq: string, mean = ""): BinRow {
  return { lower, upper, freq, mean };
}

describe("validateRows", () => {
  it("accepts a clean table", () => {
    expect(validateRows([row("0", "1", "50"), row("1", "2", "50")])).toEqual([]);
  });

  it("flags unparseable cells on the right cell", () => {
    const errors = validateRows([row("0", "1", "abc")]);
    expect(errors).toEqual([{ row: 0, field: "freq", message: "enter a number" }]);
  });

  it("flags inverted edges, negative freq and out-of-bin means", () => {
    const errors = validateRows([row("1", "1", "5"), row("1", "2", "-3", "5")]);
    expect(errors).toContainEqual({ row: 0, field: "upper", message: "upper must exceed lower" });
    expect(errors).toContainEqual({ row: 1, field: "freq", message: "frequency must be >= 0" });
    expect(errors).toContainEqual({ row: 1, field: "mean", message: "mean must lie inside the bin" });
  });

  it("reports a gap on the second row", () => {
    const errors = validateRows([row("0", "1", "10"), row("2", "3", "10")]);
    expect(errors).toEqual([
      { row: 1, field: "lower", message: "gap: previous bin ends at 1" },
    ]);
  });

  it("checks contiguity in sorted order regardless of row order", () => {
    const errors = validateRows([row("1", "2", "10"), row("0", "1", "10")]);
    expect(errors).toEqual([]);
  });

  it("requires at least one row", () => {
    expect(validateRows([])).toHaveLength(1);
  });
});

describe("method availability", () => {
  it("linear is disabled exactly when the mean column is absent", () => {
    const noMeans = [row("0", "1", "5"), row("1", "2", "5")];
    const someMeans = [row("0", "1", "5", "0.5"), row("1", "2", "5")];
    const allMeans = [row("0", "1", "5", "0.5"), row("1", "2", "5", "1.5")];
    expect(hasMeans(noMeans)).toBe(false);
    expect(hasMeans(someMeans)).toBe(false);
    expect(hasMeans(allMeans)).toBe(true);
    expect(methodDisabledReason("linear", noMeans)).toMatch(/mean/);
    expect(methodDisabledReason("linear", allMeans)).toBeNull();
    for (const method of ["histogram", "polygon", "gld"] as const) {
      expect(methodDisabledReason(method, noMeans)).toBeNull();
    }
  });
});

describe("options", () => {
  it("validates probabilities", () => {
    expect(validateProbability("0.5", "p")).toBeNull();
    expect(validateProbability("1.5", "p")).toMatch(/inside \(0, 1\)/);
    expect(validateProbability("0", "p")).toMatch(/p/);
    expect(validateProbability("", "level")).toMatch(/level/);
  });
});

describe("rowsToJson", () => {
  it("converts and sorts rows, omitting blank means", () => {
    const body = rowsToJson([row("1", "2", "30"), row("0", "1", "70", "0.4")]);
    expect(body).toEqual({
      bins: [
        { lower: 0, upper: 1, freq: 70, mean: 0.4 },
        { lower: 1, upper: 2, freq: 30 },
      ],
    });
  });
});
