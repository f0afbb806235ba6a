import * as fs from "node:fs";
import Papa from "papaparse";

import { DataError, SchemaError } from "./errors";

/** One parsed CSV: header order plus rows keyed by column name. */
export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

/**
 * Read a CSV file and check that every required column is present.
 *
 * Values stay strings; figure code converts the columns it plots with
 * `numbers`, so label columns pass through untouched.
 */
export function readTable(path: string, required: readonly string[] = []): Table {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf8");
  } catch (exc) {
    throw new DataError(`cannot read ${path}: ${(exc as Error).message}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  // short rows and undetectable delimiters (empty or one-column files) are
  // survivable; the schema check below reports what is actually missing
  const benign = new Set(["TooFewFields", "UndetectableDelimiter"]);
  const fatal = parsed.errors.find((e) => !benign.has(e.code));
  if (fatal) {
    throw new DataError(`${path}: malformed CSV: ${fatal.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  for (const column of required) {
    if (!columns.includes(column)) {
      throw new SchemaError(`${path}: missing column "${column}"`);
    }
  }
  return { path, columns, rows: parsed.data };
}

/** Parse one column as floats; any non-numeric cell is reported by position. */
export function numbers(table: Table, column: string): number[] {
  if (!table.columns.includes(column)) {
    throw new SchemaError(`${table.path}: missing column "${column}"`);
  }
  return table.rows.map((row, index) => {
    const raw = row[column];
    const value = raw === undefined || raw.trim() === "" ? NaN : Number(raw);
    if (Number.isNaN(value)) {
      throw new DataError(
        `${table.path}: column "${column}" row ${index + 1} is not numeric: "${raw ?? ""}"`,
      );
    }
    return value;
  });
}
