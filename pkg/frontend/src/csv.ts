/**
 * CSV loading for the ceilingwkb output schema.
 *
 * Files start with '#' metadata lines, then a header row, then numeric rows
 * (17-significant-digit scientific floats; the classify/flag columns are
 * plain strings). Metadata is returned as a key/value map.
 */
import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}
export class MissingFileError extends Error {}

export interface CsvTable {
  /** '# key: value' metadata lines, in file order */
  meta: Record<string, string>;
  columns: string[];
  /** column name -> per-row values; numeric where parseable */
  rows: Record<string, string>[];
}

export function loadCsv(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new MissingFileError(`cannot read ${path}`);
  }
  const meta: Record<string, string> = {};
  const body: string[] = [];
  for (const line of text.split("\n")) {
    if (line.startsWith("#")) {
      const sep = line.indexOf(":");
      if (sep > 0) {
        meta[line.slice(1, sep).trim()] = line.slice(sep + 1).trim();
      }
    } else if (line.trim() !== "") {
      body.push(line);
    }
  }
  if (body.length === 0) {
    throw new SchemaError(`${path}: no header row`);
  }
  const parsed = Papa.parse<Record<string, string>>(body.join("\n"), {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { meta, columns, rows: parsed.data };
}

/** Numeric column accessor; throws SchemaError on a missing or non-numeric column. */
export function numericColumn(table: CsvTable, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new SchemaError(`missing column '${name}' (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((row, i) => {
    const v = Number(row[name]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(`column '${name}' row ${i}: not a finite number (${row[name]})`);
    }
    return v;
  });
}

export function requireColumns(table: CsvTable, names: string[], path: string): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(`${path}: missing column '${name}'`);
    }
  }
}
