/** Trace CSV parsing: `# algo=...` comment, header row, numeric rows. */

export interface TraceData {
  algo: string;
  columns: string[];
  rows: number[][];
}

export class TraceFormatError extends Error {}

export function parseTrace(text: string, name: string): TraceData {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new TraceFormatError(`${name}: empty trace file`);
  let algo = '';
  let start = 0;
  if (lines[0].startsWith('#')) {
    const body = lines[0].replace(/^#\s*/, '');
    if (body.startsWith('algo=')) algo = body.slice('algo='.length).trim();
    start = 1;
  }
  const header = lines[start]?.split(',') ?? [];
  if (header[0] !== 'outer_iter') {
    throw new TraceFormatError(`${name}: missing trace header (first column must be outer_iter)`);
  }
  const rows: number[][] = [];
  for (let i = start + 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new TraceFormatError(
        `${name}:${i + 1}: expected ${header.length} columns, got ${cells.length}`,
      );
    }
    const row = cells.map(Number);
    const bad = row.findIndex((v) => Number.isNaN(v));
    if (bad >= 0) {
      throw new TraceFormatError(`${name}:${i + 1}: column ${header[bad]} is not numeric`);
    }
    rows.push(row);
  }
  if (rows.length === 0) throw new TraceFormatError(`${name}: trace has no data rows`);
  return { algo, columns: header, rows };
}

/** Extract one named column; errors name the file and column. */
export function traceColumn(trace: TraceData, column: string, name: string): number[] {
  const idx = trace.columns.indexOf(column);
  if (idx < 0) {
    throw new TraceFormatError(`${name}: no column named ${column}`);
  }
  return trace.rows.map((r) => r[idx]);
}
