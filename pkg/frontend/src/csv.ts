/**
 * Typed readers for the simulator's CSV exports. Each reader validates the
 * header against the documented schema and fails with the offending column
 * name; figures only consume data through these readers.
 */
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

function parseRows(path: string, expected: string[]): Record<string, string>[] {
  const text = readFileSync(path, "utf8");
  const res = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (res.errors.length > 0) {
    throw new SchemaError(`${path}: ${res.errors[0].message}`);
  }
  const fields = res.meta.fields ?? [];
  for (const col of expected) {
    if (!fields.includes(col)) {
      throw new SchemaError(`${path}: missing column "${col}"`);
    }
  }
  return res.data;
}

function num(row: Record<string, string>, col: string, path: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`${path}: non-numeric value "${row[col]}" in column "${col}"`);
  }
  return v;
}

export interface QdelaySample {
  queue: string;
  tUs: number;
  sojournUs: number;
}

export function readQdelay(path: string): QdelaySample[] {
  return parseRows(path, ["queue", "t_us", "sojourn_us"]).map((r) => ({
    queue: r.queue,
    tUs: num(r, "t_us", path),
    sojournUs: num(r, "sojourn_us", path),
  }));
}

export interface SummaryRow {
  scenario: string;
  metric: string;
  mean: number | null;
  p1: number | null;
  p25: number | null;
  p99: number | null;
}

export function readSummary(path: string): SummaryRow[] {
  const opt = (r: Record<string, string>, col: string) =>
    r[col] === "" || r[col] === undefined ? null : num(r, col, path);
  return parseRows(path, ["scenario", "metric", "mean", "p1", "p25", "p99"]).map(
    (r) => ({
      scenario: r.scenario,
      metric: r.metric,
      mean: opt(r, "mean"),
      p1: opt(r, "p1"),
      p25: opt(r, "p25"),
      p99: opt(r, "p99"),
    }),
  );
}

export interface FctRow {
  flowId: number;
  sizeBytes: number;
  startUs: number;
  fctUs: number;
  efficiency: number;
}

export function readFct(path: string): FctRow[] {
  return parseRows(path, ["flow_id", "size_bytes", "start_us", "fct_us", "efficiency"]).map(
    (r) => ({
      flowId: num(r, "flow_id", path),
      sizeBytes: num(r, "size_bytes", path),
      startUs: num(r, "start_us", path),
      fctUs: num(r, "fct_us", path),
      efficiency: num(r, "efficiency", path),
    }),
  );
}
