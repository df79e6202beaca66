/**
 * Reader for the benchmark sweep CSV schema:
 *
 *   scene,strategy,measure,N,param,seed,accuracy,avg_error,build_ms,query_us
 *
 * Rows with non-finite metric values (flagged failed cells) are rejected at
 * selection time, not at parse time, so callers can see and report them.
 */

export const SWEEP_HEADER = [
  "scene",
  "strategy",
  "measure",
  "N",
  "param",
  "seed",
  "accuracy",
  "avg_error",
  "build_ms",
  "query_us",
] as const;

export interface SweepRow {
  scene: string;
  strategy: string;
  measure: string;
  N: number;
  param: number;
  seed: number;
  accuracy: number;
  avg_error: number;
  build_ms: number;
  query_us: number;
}

export class SchemaError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV document");
  }
  const header = lines[0].split(",");
  if (header.length !== SWEEP_HEADER.length ||
      !SWEEP_HEADER.every((name, i) => header[i] === name)) {
    throw new SchemaError(
      `header mismatch: expected ${SWEEP_HEADER.join(",")}, got ${lines[0]}`,
    );
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== SWEEP_HEADER.length) {
      throw new SchemaError(`row ${i + 1} has ${parts.length} fields`);
    }
    return {
      scene: parts[0],
      strategy: parts[1],
      measure: parts[2],
      N: Number(parts[3]),
      param: Number(parts[4]),
      seed: Number(parts[5]),
      accuracy: Number(parts[6]),
      avg_error: Number(parts[7]),
      build_ms: Number(parts[8]),
      query_us: Number(parts[9]),
    };
  });
}
