/** CLI: layerbcd-figures <manifest> --out <png> */

import { readFileSync, writeFileSync } from 'node:fs';

import { TraceFormatError } from './csv.js';
import { loadCurves, renderFigure } from './figure.js';
import { ManifestError, parseManifest } from './manifest.js';

export function run(argv: string[]): number {
  let manifestPath = '';
  let outPath = 'figure.png';
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === '--out') {
      outPath = argv[++i] ?? '';
    } else if (!manifestPath) {
      manifestPath = argv[i];
    } else {
      console.error(`unexpected argument: ${argv[i]}`);
      return 2;
    }
  }
  if (!manifestPath || !outPath) {
    console.error('usage: layerbcd-figures <manifest> --out <png>');
    return 2;
  }
  try {
    const manifest = parseManifest(readFileSync(manifestPath, 'latin1'), manifestPath);
    const curves = loadCurves(manifest);
    const { png, meta } = renderFigure(curves, manifest.title, manifest.column);
    writeFileSync(outPath, png);
    console.log(`wrote ${outPath} (${png.length} bytes, ${meta.curves.length} curves)`);
    return 0;
  } catch (err) {
    if (err instanceof ManifestError || err instanceof TraceFormatError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && 'code' in err && err.code === 'ENOENT') {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('main.js') || entry.endsWith('main.ts')) {
  process.exit(run(process.argv.slice(2)));
}
