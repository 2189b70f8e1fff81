/**
 * Survey report loading: the CSV emitted by the survey tool, or the JSON
 * mirror of the same rows.  Figures declare which columns they need and
 * get a named error when one is missing.
 */

import * as fs from "node:fs";

export type ReportRow = Record<string, number | null>;

export class SchemaError extends Error {}

export class MissingColumnError extends SchemaError {
  readonly column: string;

  constructor(column: string) {
    super(`missing column: ${column}`);
    this.column = column;
  }
}

function parseCell(text: string): number | null {
  if (text === "" || text === "null") return null;
  const value = Number(text);
  if (Number.isNaN(value)) {
    throw new SchemaError(`cell is not numeric: ${JSON.stringify(text)}`);
  }
  return value;
}

export function parseCsv(text: string): ReportRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
  if (lines.length < 2) {
    throw new SchemaError("report has no data rows");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `row has ${cells.length} cells, header has ${header.length}`,
      );
    }
    const row: ReportRow = {};
    header.forEach((name, i) => {
      row[name] = parseCell(cells[i]);
    });
    return row;
  });
}

export function parseJsonReport(text: string): ReportRow[] {
  const data = JSON.parse(text);
  if (!Array.isArray(data) || data.length === 0) {
    throw new SchemaError("JSON report must be a nonempty array of rows");
  }
  return data.map((entry) => {
    if (typeof entry !== "object" || entry === null) {
      throw new SchemaError("JSON report rows must be objects");
    }
    const row: ReportRow = {};
    for (const [key, value] of Object.entries(entry)) {
      if (value === null) {
        row[key] = null;
      } else if (typeof value === "number") {
        row[key] = value;
      } else {
        throw new SchemaError(`field ${key} is not numeric`);
      }
    }
    return row;
  });
}

export function loadReport(path: string): ReportRow[] {
  const text = fs.readFileSync(path, "utf-8");
  const body = text.trimStart();
  return body.startsWith("[") ? parseJsonReport(text) : parseCsv(text);
}

/** Pull a required column; every figure goes through here so a truncated
 *  file always fails with the column's name. */
export function requireColumn(rows: ReportRow[], name: string): number[] {
  const out: number[] = [];
  for (const row of rows) {
    if (!(name in row)) {
      throw new MissingColumnError(name);
    }
    const value = row[name];
    if (value !== null) {
      out.push(value);
    }
  }
  if (out.length === 0) {
    throw new SchemaError(`column ${name} has no usable values`);
  }
  return out;
}
