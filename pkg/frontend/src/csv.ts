/**
 * Readers for the harness CSV schemas.  Lines starting with '#' carry run
 * metadata and are skipped; the documented headers are validated so schema
 * drift fails loudly with a column diagnostic.
 */

import Papa from "papaparse";

export const HISTOGRAM_COLUMNS = ["k", "trial", "eps_hat", "attempts", "undetected", "censored"];
export const BLER_COLUMNS = ["C", "epsilon", "trials", "block_errors", "undetected"];
export const DE_TABLE_COLUMNS = ["m", "dc", "epsilon_star"];

export interface HistogramRow {
  k: number;
  trial: number;
  epsHat: number | null; // null when the trial was censored
  attempts: number;
  undetected: boolean;
  censored: boolean;
}

export interface BlerRow {
  capacity: number;
  epsilon: number;
  trials: number;
  blockErrors: number;
  undetected: number;
}

export interface DeTableRow {
  m: number;
  dc: number;
  epsilonStar: number;
}

export class SchemaError extends Error {}

function parseRows(text: string, expected: string[], kind: string): string[][] {
  const parsed = Papa.parse<string[]>(text.trim(), {
    comments: "#",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${kind}: CSV parse error: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError(`${kind}: no header row found`);
  }
  const header = rows[0].map((c) => c.trim());
  if (header.length !== expected.length || header.some((c, i) => c !== expected[i])) {
    throw new SchemaError(
      `${kind}: expected columns [${expected.join(",")}], got [${header.join(",")}]`,
    );
  }
  return rows.slice(1);
}

function num(value: string, column: string, kind: string): number {
  const x = Number(value);
  if (!Number.isFinite(x)) {
    throw new SchemaError(`${kind}: bad numeric value '${value}' in column ${column}`);
  }
  return x;
}

export function readHistogramCsv(text: string): HistogramRow[] {
  return parseRows(text, HISTOGRAM_COLUMNS, "histogram").map((r) => ({
    k: num(r[0], "k", "histogram"),
    trial: num(r[1], "trial", "histogram"),
    epsHat: r[2].trim() === "" ? null : num(r[2], "eps_hat", "histogram"),
    attempts: num(r[3], "attempts", "histogram"),
    undetected: num(r[4], "undetected", "histogram") !== 0,
    censored: num(r[5], "censored", "histogram") !== 0,
  }));
}

export function readBlerCsv(text: string): BlerRow[] {
  return parseRows(text, BLER_COLUMNS, "bler").map((r) => ({
    capacity: num(r[0], "C", "bler"),
    epsilon: num(r[1], "epsilon", "bler"),
    trials: num(r[2], "trials", "bler"),
    blockErrors: num(r[3], "block_errors", "bler"),
    undetected: num(r[4], "undetected", "bler"),
  }));
}

export function readDeTableCsv(text: string): DeTableRow[] {
  return parseRows(text, DE_TABLE_COLUMNS, "de-table").map((r) => ({
    m: num(r[0], "m", "de-table"),
    dc: num(r[1], "dc", "de-table"),
    epsilonStar: num(r[2], "epsilon_star", "de-table"),
  }));
}
