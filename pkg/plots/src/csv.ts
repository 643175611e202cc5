/** Reader for the versioned result CSVs produced by the cupgames harness. */

export const CURVE_SCHEMA = "cupgames-curve-v1";
export const SWEEP_SCHEMA = "cupgames-sweep-v1";
export const KNOWN_SCHEMAS = [CURVE_SCHEMA, SWEEP_SCHEMA];

export class SchemaError extends Error {}

export interface ResultTable {
  schema: string;
  comments: string[];
  header: string[];
  rows: string[][];
}

function splitLine(line: string): string[] {
  const cells: string[] = [];
  let cell = "";
  let quoted = false;
  for (let i = 0; i < line.length; i += 1) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        cell += '"';
        i += 1;
      } else if (ch === '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      cells.push(cell.trim());
      cell = "";
    } else {
      cell += ch;
    }
  }
  cells.push(cell.trim());
  return cells;
}

export function parseResultCsv(text: string): ResultTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  const comments: string[] = [];
  let schema: string | null = null;
  let i = 0;
  while (i < lines.length && lines[i].startsWith("#")) {
    const comment = lines[i].slice(1).trim();
    comments.push(comment);
    const match = comment.match(/^schema:\s*(\S+)$/);
    if (match) schema = match[1];
    i += 1;
  }
  if (schema === null) {
    throw new SchemaError(
      `no schema marker found; expected one of ${KNOWN_SCHEMAS.join(", ")}`
    );
  }
  if (!KNOWN_SCHEMAS.includes(schema)) {
    throw new SchemaError(
      `unknown schema ${schema}; expected one of ${KNOWN_SCHEMAS.join(", ")}`
    );
  }
  if (i >= lines.length) {
    throw new SchemaError("CSV has a schema marker but no header row");
  }
  const header = splitLine(lines[i]);
  const rows = lines.slice(i + 1).map(splitLine);
  if (rows.length === 0) {
    throw new SchemaError("CSV contains no data rows");
  }
  return { schema, comments, header, rows };
}

export function column(table: ResultTable, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column ${name} missing from ${table.schema} CSV`);
  }
  return table.rows.map((row) => row[idx]);
}

export function numericColumn(table: ResultTable, name: string): number[] {
  return column(table, name).map((cell) => {
    const value = Number(cell);
    if (!Number.isFinite(value)) {
      throw new SchemaError(`non-numeric value ${cell} in column ${name}`);
    }
    return value;
  });
}
