"""Grouped (binned) data: the bin/frequency data model, CSV and JSON
ingestion, zero-count merging, and cumulative probability tables.

All types are immutable and all operations are pure functions.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import IO

from .errors import ValidationError

__all__ = [
    "Bin",
    "GroupedData",
    "CumulativeTable",
    "from_csv",
    "to_csv",
    "from_json_dict",
    "to_json_dict",
    "merge_zero_bins",
    "cumulative",
    "locate_bin",
]


@dataclass(frozen=True)
class Bin:
    """One interval [lower, upper) with its observed frequency.

    ``freq`` may be non-integer: pre-normalized histograms publish
    relative frequencies.  ``mean`` is the per-bin sample mean when known.
    """

    lower: float
    upper: float
    freq: float
    mean: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        object.__setattr__(self, "freq", float(self.freq))
        if self.mean is not None:
            object.__setattr__(self, "mean", float(self.mean))
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValidationError("bin edges must be finite numbers")
        if not self.lower < self.upper:
            raise ValidationError(
                f"bin lower edge {self.lower!r} must be strictly below upper edge {self.upper!r}"
            )
        if not (math.isfinite(self.freq) and self.freq >= 0):
            raise ValidationError(f"bin frequency must be a finite value >= 0, got {self.freq!r}")
        if self.mean is not None and not (self.lower <= self.mean <= self.upper):
            raise ValidationError(
                f"bin mean {self.mean!r} lies outside the bin [{self.lower!r}, {self.upper!r}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


@dataclass(frozen=True)
class GroupedData:
    """An ordered, contiguous sequence of bins. The sole input data model.

    The total count ``n`` is the frequency sum; it may be fractional when
    frequencies are relative.
    """

    bins: tuple[Bin, ...]

    def __post_init__(self):
        object.__setattr__(self, "bins", tuple(self.bins))
        if not self.bins:
            raise ValidationError("grouped data needs at least one bin")
        for j in range(1, len(self.bins)):
            prev, cur = self.bins[j - 1], self.bins[j]
            if cur.lower != prev.upper:
                raise ValidationError(
                    f"bins are not contiguous: bin {j} starts at {cur.lower!r} "
                    f"but the previous bin ends at {prev.upper!r}"
                )
        if not self.n > 0:
            raise ValidationError("empty sample: total frequency must be positive")

    @property
    def n(self) -> float:
        """Total count, the plain left-to-right frequency sum."""
        return sum(b.freq for b in self.bins)

    @property
    def has_means(self) -> bool:
        return all(b.mean is not None for b in self.bins)

    @property
    def edges(self) -> tuple[float, ...]:
        return (self.bins[0].lower,) + tuple(b.upper for b in self.bins)


@dataclass(frozen=True)
class CumulativeTable:
    """Bin edges paired with cumulative probabilities.

    ``cum_prob[j]`` is the probability mass strictly below ``edges[j]``,
    so ``cum_prob[0] == 0`` and ``cum_prob[-1] == 1``.
    """

    edges: tuple[float, ...]
    cum_prob: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        object.__setattr__(self, "cum_prob", tuple(float(c) for c in self.cum_prob))
        if len(self.edges) != len(self.cum_prob):
            raise ValidationError("edges and cum_prob must have equal length")
        if len(self.edges) < 2:
            raise ValidationError("cumulative table needs at least two edges")
        if self.cum_prob[0] != 0.0 or self.cum_prob[-1] != 1.0:
            raise ValidationError("cum_prob must start at 0 and end at 1")
        for a, b in zip(self.cum_prob, self.cum_prob[1:]):
            if b < a:
                raise ValidationError("cum_prob must be nondecreasing")


_REQUIRED_COLUMNS = ("lower", "upper", "freq")


def from_csv(source: str | IO[str]) -> GroupedData:
    """Parse grouped data from CSV text with header lower,upper,freq[,mean].

    Rows are sorted by lower edge before the contiguity check.  Extra
    columns are ignored; an empty mean cell means "unknown".  Errors name
    the offending data row (the first row after the header is row 1).
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("empty file: no header row") from None
    names = [h.strip().lstrip("﻿").lower() for h in header]
    columns = {name: i for i, name in enumerate(names)}
    missing = [c for c in _REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise ValidationError(f"missing required column(s): {', '.join(missing)}")
    mean_col = columns.get("mean")

    rows: list[tuple[int, Bin]] = []
    for rowno, cells in enumerate(reader, start=1):
        if not any(cell.strip() for cell in cells):
            continue
        loc = f"row {rowno}"

        def cell(col: int) -> str:
            return cells[col].strip() if col < len(cells) else ""

        values = {}
        for name in _REQUIRED_COLUMNS:
            text = cell(columns[name])
            if not text:
                raise ValidationError(f"{loc}: missing value for {name!r}", location=loc)
            try:
                values[name] = float(text)
            except ValueError:
                raise ValidationError(
                    f"{loc}: could not parse {name}={text!r} as a number", location=loc
                ) from None
        mean = None
        if mean_col is not None:
            text = cell(mean_col)
            if text:
                try:
                    mean = float(text)
                except ValueError:
                    raise ValidationError(
                        f"{loc}: could not parse mean={text!r} as a number", location=loc
                    ) from None
        try:
            rows.append((rowno, Bin(values["lower"], values["upper"], values["freq"], mean)))
        except ValidationError as exc:
            raise ValidationError(f"{loc}: {exc}", location=loc) from None

    if not rows:
        raise ValidationError("empty file: no data rows")

    rows.sort(key=lambda item: item[1].lower)
    for (_, prev), (rowno, cur) in zip(rows, rows[1:]):
        if cur.lower != prev.upper:
            kind = "gap" if cur.lower > prev.upper else "overlap"
            raise ValidationError(
                f"row {rowno}: {kind} between bins "
                f"(bin starts at {cur.lower!r}, previous ends at {prev.upper!r})",
                location=f"row {rowno}",
            )
    return GroupedData(tuple(b for _, b in rows))


def to_csv(gd: GroupedData) -> str:
    """Serialize to the CSV dialect accepted by :func:`from_csv`."""
    with_means = any(b.mean is not None for b in gd.bins)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["lower", "upper", "freq", "mean"] if with_means else ["lower", "upper", "freq"])
    for b in gd.bins:
        row = [repr(b.lower), repr(b.upper), repr(b.freq)]
        if with_means:
            row.append("" if b.mean is None else repr(b.mean))
        writer.writerow(row)
    return out.getvalue()


def to_json_dict(gd: GroupedData) -> dict:
    """JSON object {bins: [{lower, upper, freq, mean?}], n}."""
    bins = []
    for b in gd.bins:
        entry = {"lower": b.lower, "upper": b.upper, "freq": b.freq}
        if b.mean is not None:
            entry["mean"] = b.mean
        bins.append(entry)
    return {"bins": bins, "n": gd.n}


def from_json_dict(doc: dict) -> GroupedData:
    """Inverse of :func:`to_json_dict`, with path-labelled validation errors."""
    if not isinstance(doc, dict) or "bins" not in doc:
        raise ValidationError("grouped data JSON must be an object with a 'bins' list")
    raw_bins = doc["bins"]
    if not isinstance(raw_bins, list) or not raw_bins:
        raise ValidationError("'bins' must be a non-empty list", location="bins")
    bins = []
    for i, entry in enumerate(raw_bins):
        loc = f"bins[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{loc}: each bin must be an object", location=loc)
        try:
            bins.append(
                Bin(entry["lower"], entry["upper"], entry["freq"], entry.get("mean"))
            )
        except KeyError as exc:
            raise ValidationError(f"{loc}: missing field {exc.args[0]!r}", location=loc) from None
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{loc}: {exc}", location=loc) from None
        except ValidationError as exc:
            raise ValidationError(f"{loc}: {exc}", location=loc) from None
    bins.sort(key=lambda b: b.lower)
    gd = GroupedData(tuple(bins))
    stated_n = doc.get("n")
    if stated_n is not None and not math.isclose(float(stated_n), gd.n, rel_tol=1e-9):
        raise ValidationError(
            f"stated n={stated_n!r} does not match the frequency sum {gd.n!r}", location="n"
        )
    return gd


def merge_zero_bins(gd: GroupedData) -> GroupedData:
    """Merge empty bins into neighbours so every remaining frequency is > 0.

    A zero bin joins its right neighbour; trailing zero bins (nothing to
    the right) extend the last non-empty bin.  Means combine as
    frequency-weighted averages, so a zero bin contributes nothing.
    Idempotent.
    """
    if all(b.freq == 0 for b in gd.bins):
        raise ValidationError("empty sample: all bins have zero frequency")
    merged: list[Bin] = []
    pending_lower: float | None = None
    for b in gd.bins:
        if b.freq == 0:
            if pending_lower is None:
                pending_lower = b.lower
            continue
        lower = b.lower if pending_lower is None else pending_lower
        pending_lower = None
        merged.append(Bin(lower, b.upper, b.freq, b.mean))
    if pending_lower is not None:
        # Trailing zero span: widen the last kept bin up to the data's end.
        last = merged.pop()
        merged.append(Bin(last.lower, gd.bins[-1].upper, last.freq, last.mean))
    return GroupedData(tuple(merged))


def cumulative(gd: GroupedData) -> CumulativeTable:
    """Cumulative probabilities at every bin edge; the last entry is
    exactly 1 because the running sum is divided by its own final value."""
    running = 0.0
    sums = [0.0]
    for b in gd.bins:
        running += b.freq
        sums.append(running)
    total = sums[-1]
    probs = [s / total for s in sums]
    return CumulativeTable(gd.edges, tuple(probs))


def _locate(cum_prob: tuple[float, ...], p: float) -> int:
    """Index of the bin containing probability level p.

    When p sits exactly on a cumulative boundary the lower-indexed bin is
    chosen, so the quantile lands on the shared edge.
    """
    j = bisect_left(cum_prob, p) - 1
    return min(max(j, 0), len(cum_prob) - 2)


def locate_bin(gd: GroupedData, p: float) -> int:
    """Index of the bin that contains the p-th quantile."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be inside (0, 1), got {p!r}")
    return _locate(cumulative(gd).cum_prob, p)
