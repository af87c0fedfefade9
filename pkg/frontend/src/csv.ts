/**
 * Minimal CSV reading for run-directory artifacts.
 *
 * Every file is numeric with a single header row; columns are returned as
 * Float64Arrays keyed by header name.
 */

import { readFileSync } from "fs";

export interface Table {
  columns: string[];
  data: Map<string, Float64Array>;
  rows: number;
}

export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf-8").trimEnd();
  const lines = text.split("\n");
  if (lines.length < 2) {
    throw new Error(`csv has no data rows: ${path}`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.length - 1;
  const buffers = columns.map(() => new Float64Array(rows));
  for (let r = 0; r < rows; r++) {
    const cells = lines[r + 1].split(",");
    if (cells.length !== columns.length) {
      throw new Error(`row ${r + 2} of ${path} has ${cells.length} cells, expected ${columns.length}`);
    }
    for (let c = 0; c < columns.length; c++) {
      buffers[c][r] = Number(cells[c]);
    }
  }
  const data = new Map<string, Float64Array>();
  columns.forEach((name, c) => data.set(name, buffers[c]));
  return { columns, data, rows };
}

export function column(table: Table, name: string): Float64Array {
  const values = table.data.get(name);
  if (values === undefined) {
    throw new Error(`missing column ${name}`);
  }
  return values;
}
