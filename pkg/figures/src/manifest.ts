/** Figure manifest: top-level `key = value` lines plus [curve] blocks. */

import { dirname, resolve } from 'node:path';

export interface CurveSpec {
  label: string;
  traces: string[];
}

export interface Manifest {
  title: string;
  column: string;
  curves: CurveSpec[];
}

export class ManifestError extends Error {}

export function parseManifest(text: string, manifestPath: string): Manifest {
  const base = dirname(resolve(manifestPath));
  const manifest: Manifest = { title: '', column: 'total', curves: [] };
  let current: CurveSpec | null = null;
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].replace(/#.*$/, '').trim();
    if (!line) continue;
    if (line === '[curve]') {
      current = { label: '', traces: [] };
      manifest.curves.push(current);
      continue;
    }
    const eq = line.indexOf('=');
    if (eq < 0) {
      throw new ManifestError(`${manifestPath}:${i + 1}: expected 'key = value', got '${line}'`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (current === null) {
      if (key === 'title') manifest.title = value;
      else if (key === 'column') manifest.column = value;
      else throw new ManifestError(`${manifestPath}:${i + 1}: unknown key '${key}'`);
    } else {
      if (key === 'label') current.label = value;
      else if (key === 'trace') current.traces.push(resolve(base, value));
      else throw new ManifestError(`${manifestPath}:${i + 1}: unknown curve key '${key}'`);
    }
  }
  if (manifest.curves.length === 0) {
    throw new ManifestError(`${manifestPath}: manifest declares no [curve] blocks`);
  }
  for (const curve of manifest.curves) {
    if (!curve.label) throw new ManifestError(`${manifestPath}: a [curve] block is missing a label`);
    if (curve.traces.length === 0) {
      throw new ManifestError(`${manifestPath}: curve '${curve.label}' lists no traces`);
    }
  }
  return manifest;
}
