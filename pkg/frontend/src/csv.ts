/**
 * CSV loading and schema validation for mslab experiment output.
 *
 * The Python package writes one header row plus one record per line; every
 * figure kind declares the columns it needs and rendering refuses to guess
 * when they are missing.
 */
import * as fs from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function loadCsv(path: string): Table {
  const text = fs.readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
    delimiter: ",",
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${path}: malformed CSV (${first.message})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new SchemaError(`${path}: empty input`);
  }
  return { columns, rows: parsed.data };
}

export function requireColumns(table: Table, needed: string[], kind: string): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `figure kind "${kind}" needs columns [${missing.join(", ")}] ` +
      `that the CSV does not provide (found: ${table.columns.join(", ")})`,
    );
  }
}

export function num(row: Record<string, string>, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `column "${column}" holds non-numeric value "${row[column]}"`,
    );
  }
  return value;
}

/** Distinct values of a column, in first-appearance order. */
export function distinct(table: Table, column: string): string[] {
  const seen = new Set<string>();
  const out: string[] = [];
  for (const row of table.rows) {
    const v = row[column];
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}

/** Seed list for figure provenance: distinct `seed` values, when present. */
export function provenanceSeeds(table: Table): string[] {
  if (!table.columns.includes("seed")) return [];
  return distinct(table, "seed");
}
