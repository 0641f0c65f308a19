import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';

import { describe, expect, it } from 'vitest';

import { ManifestError, parseManifest } from '../src/manifest.js';

const TEXT = `title = Training loss
column = total

[curve]
label = with clipping
trace = runs/a/trace.csv
trace = runs/b/trace.csv

[curve]
label = without clipping
trace = runs/c/trace.csv
`;

describe('parseManifest', () => {
  it('parses title, column, and curve blocks with resolved paths', () => {
    const m = parseManifest(TEXT, '/work/fig.manifest');
    expect(m.title).toBe('Training loss');
    expect(m.column).toBe('total');
    expect(m.curves.map((c) => c.label)).toEqual(['with clipping', 'without clipping']);
    expect(m.curves[0].traces[0]).toBe(resolve('/work', 'runs/a/trace.csv'));
  });

  it('rejects unknown keys with the line number', () => {
    expect(() => parseManifest('nonsense = 1\n[curve]\nlabel = x\ntrace = t.csv\n', 'm'))
      .toThrow(/m:1/);
  });

  it('rejects a curve without traces', () => {
    expect(() => parseManifest('[curve]\nlabel = x\n', 'm')).toThrow(/lists no traces/);
  });

  it('rejects a manifest without curves', () => {
    expect(() => parseManifest('title = x\n', 'm')).toThrow(ManifestError);
  });

  it('ignores comments and blank lines', () => {
    const m = parseManifest('# header\n\n[curve]\nlabel = a\ntrace = t.csv # inline\n', 'm');
    expect(m.curves[0].traces).toHaveLength(1);
  });
});
