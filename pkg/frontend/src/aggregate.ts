/**
 * Group sweep rows for plotting: one series per group value, one point per
 * x value, aggregated over seeds as median with a min-max band.
 */

import { SweepRow } from "./csv.js";

export type XAxis = "N" | "k" | "r";
export type Metric = "accuracy" | "avg_error";
export type GroupBy = "strategy" | "measure" | "scene";

export interface FigureSpec {
  csvPath: string;
  x: XAxis;
  metric: Metric;
  groupBy: GroupBy;
  /** equality filters on row fields, e.g. {scene: "clutter", param: "10"} */
  filter: Record<string, string>;
  outPath: string;
}

export interface SidecarPoint {
  group: string;
  x: number;
  median: number;
  min: number;
  max: number;
  seeds: number;
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  return sorted.length % 2 === 1
    ? sorted[mid]
    : (sorted[mid - 1] + sorted[mid]) / 2;
}

export function xValue(row: SweepRow, x: XAxis): number {
  return x === "N" ? row.N : row.param; // k and r both live in the param column
}

export function applyFilter(rows: SweepRow[], filter: Record<string, string>): SweepRow[] {
  return rows.filter((row) =>
    Object.entries(filter).every(([key, value]) => {
      const actual = row[key as keyof SweepRow];
      return typeof actual === "number"
        ? actual === Number(value)
        : String(actual) === value;
    }),
  );
}

export function aggregate(
  rows: SweepRow[],
  x: XAxis,
  metric: Metric,
  groupBy: GroupBy,
): SidecarPoint[] {
  const buckets = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    const value = row[metric];
    if (!Number.isFinite(value)) {
      continue; // flagged failed cell
    }
    const group = String(row[groupBy]);
    const xv = xValue(row, x);
    let series = buckets.get(group);
    if (!series) {
      series = new Map();
      buckets.set(group, series);
    }
    const values = series.get(xv);
    if (values) {
      values.push(value);
    } else {
      series.set(xv, [value]);
    }
  }
  const points: SidecarPoint[] = [];
  for (const group of [...buckets.keys()].sort()) {
    const series = buckets.get(group)!;
    for (const xv of [...series.keys()].sort((a, b) => a - b)) {
      const values = series.get(xv)!;
      points.push({
        group,
        x: xv,
        median: median(values),
        min: Math.min(...values),
        max: Math.max(...values),
        seeds: values.length,
      });
    }
  }
  return points;
}

const SIDECAR_HEADER = "group,x,median,min,max,seeds";

/** Serialize with String(number): shortest form that parses back exactly. */
export function sidecarToCsv(points: SidecarPoint[]): string {
  const lines = [SIDECAR_HEADER];
  for (const p of points) {
    lines.push([p.group, p.x, p.median, p.min, p.max, p.seeds].join(","));
  }
  return lines.join("\n") + "\n";
}

export function sidecarFromCsv(text: string): SidecarPoint[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines[0] !== SIDECAR_HEADER) {
    throw new Error(`sidecar header mismatch: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const [group, x, med, min, max, seeds] = line.split(",");
    return {
      group,
      x: Number(x),
      median: Number(med),
      min: Number(min),
      max: Number(max),
      seeds: Number(seeds),
    };
  });
}
