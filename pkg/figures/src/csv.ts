/**
 * Reader for the toolkit's CSV artifacts: `#`-prefixed `key=value` metadata
 * lines, a single header row, then numeric rows.  Cells are kept both as
 * numbers (for layout) and as the raw strings (so figures can copy values
 * verbatim instead of re-deriving them).
 */

import { readFileSync } from "node:fs";

export interface Table {
  path: string;
  meta: Record<string, string>;
  header: string[];
  rows: number[][];
  raw: string[][];
}

export function parseTable(text: string, path = "<memory>"): Table {
  const meta: Record<string, string> = {};
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  let i = 0;
  while (i < lines.length && lines[i]!.startsWith("#")) {
    const body = lines[i]!.replace(/^#\s*/, "");
    const eq = body.indexOf("=");
    if (eq > 0) meta[body.slice(0, eq)] = body.slice(eq + 1);
    i += 1;
  }
  if (i >= lines.length) throw new Error(`empty CSV (no header row): ${path}`);
  const header = lines[i]!.split(",");
  const raw = lines.slice(i + 1).map((l) => l.split(","));
  const rows = raw.map((cells, r) => {
    if (cells.length !== header.length) {
      throw new Error(`row ${r + 1} has ${cells.length} cells, expected ${header.length}: ${path}`);
    }
    return cells.map((c, j) => {
      const x = Number(c);
      if (Number.isNaN(x)) throw new Error(`non-numeric cell '${c}' in column ${header[j]}: ${path}`);
      return x;
    });
  });
  return { path, meta, header, rows, raw };
}

export function readTable(path: string): Table {
  return parseTable(readFileSync(path, "utf-8"), path);
}

/** Column values by header name; throws on a missing column. */
export function col(t: Table, name: string): number[] {
  const j = t.header.indexOf(name);
  if (j < 0) throw new Error(`missing column '${name}' (have: ${t.header.join(", ")}): ${t.path}`);
  return t.rows.map((r) => r[j]!);
}

/** Metadata value as a raw string; throws if absent. */
export function metaStr(t: Table, key: string): string {
  const v = t.meta[key];
  if (v === undefined) throw new Error(`missing metadata '${key}': ${t.path}`);
  return v;
}

export function metaNum(t: Table, key: string): number {
  const x = Number(metaStr(t, key));
  if (Number.isNaN(x)) throw new Error(`metadata '${key}' is not numeric: ${t.path}`);
  return x;
}

/** Rows must exist before anything is drawn or written. */
export function requireRows(t: Table): Table {
  if (t.rows.length === 0) throw new Error(`empty CSV (no data rows): ${t.path}`);
  return t;
}
