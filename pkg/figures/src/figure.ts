/** Loss-over-iteration figure: log-scale y, one curve per label, std bands. */

import { readFileSync } from 'node:fs';
import { basename } from 'node:path';

import { parseTrace, traceColumn } from './csv.js';
import { Manifest } from './manifest.js';
import { encodePng } from './png.js';
import { Color, Raster } from './raster.js';
import { BandSeries, meanBand } from './stats.js';

const PALETTE: Color[] = [
  [31, 119, 180],   // blue
  [214, 39, 40],    // red
  [44, 160, 44],    // green
  [255, 127, 14],   // orange
  [148, 103, 189],  // purple
  [140, 86, 75],    // brown
];

const WIDTH = 960;
const HEIGHT = 600;
const MARGIN = { left: 80, right: 24, top: 46, bottom: 56 };

export interface CurveData {
  label: string;
  band: BandSeries;
}

export interface FigureMeta {
  title: string;
  column: string;
  yscale: string;
  curves: { label: string; traces: number; points: number; band: boolean }[];
}

export function loadCurves(manifest: Manifest): CurveData[] {
  return manifest.curves.map((spec) => {
    let x: number[] | null = null;
    const series: number[][] = [];
    for (const path of spec.traces) {
      const name = basename(path);
      const trace = parseTrace(readFileSync(path, 'latin1'), path);
      const iters = traceColumn(trace, 'outer_iter', name);
      const vals = traceColumn(trace, manifest.column, name);
      if (x === null || iters.length < x.length) x = iters;
      series.push(vals);
    }
    return { label: spec.label, band: meanBand(x as number[], series) };
  });
}

function niceLogTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)); e++) {
    ticks.push(e);
  }
  return ticks;
}

function formatPow10(e: number): string {
  return `1E${e}`;
}

/** Render to RGB pixels plus the JSON metadata embedded in the PNG. */
export function renderFigure(curves: CurveData[], title: string, column: string):
    { png: Buffer; meta: FigureMeta } {
  const canvas = new Raster(WIDTH, HEIGHT);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  // Log-scale y range over every positive plotted value (bands clamp).
  let yLo = Infinity;
  let yHi = -Infinity;
  let xLo = Infinity;
  let xHi = -Infinity;
  for (const c of curves) {
    for (const v of [...c.band.mean, ...c.band.upper, ...c.band.lower]) {
      if (v > 0) {
        yLo = Math.min(yLo, v);
        yHi = Math.max(yHi, v);
      }
    }
    xLo = Math.min(xLo, c.band.x[0]);
    xHi = Math.max(xHi, c.band.x[c.band.x.length - 1]);
  }
  if (!Number.isFinite(yLo)) { yLo = 1e-6; yHi = 1; }
  if (yLo === yHi) { yLo /= 10; yHi *= 10; }
  if (xLo === xHi) xHi = xLo + 1;
  const logLo = Math.log10(yLo);
  const logHi = Math.log10(yHi);

  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (v: number) => {
    const clamped = Math.max(v, yLo);
    return MARGIN.top + (1 - (Math.log10(clamped) - logLo) / (logHi - logLo)) * plotH;
  };

  // Frame, grid, tick labels.
  const frame: Color = [40, 40, 40];
  const grid: Color = [222, 222, 222];
  for (const e of niceLogTicks(yLo, yHi)) {
    const y = py(10 ** e);
    canvas.fillRect(MARGIN.left, y, MARGIN.left + plotW, y, grid);
    canvas.text(MARGIN.left - Raster.textWidth(formatPow10(e)) - 8, y - 3, formatPow10(e), frame);
  }
  const xTickCount = 5;
  for (let t = 0; t <= xTickCount; t++) {
    const xv = xLo + ((xHi - xLo) * t) / xTickCount;
    const x = px(xv);
    canvas.fillRect(x, MARGIN.top, x, MARGIN.top + plotH, grid);
    const label = String(Math.round(xv));
    canvas.text(x - Raster.textWidth(label) / 2, MARGIN.top + plotH + 10, label, frame);
  }
  canvas.fillRect(MARGIN.left, MARGIN.top, MARGIN.left + plotW, MARGIN.top, frame);
  canvas.fillRect(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, frame);
  canvas.fillRect(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, frame);
  canvas.fillRect(MARGIN.left + plotW, MARGIN.top, MARGIN.left + plotW, MARGIN.top + plotH, frame);
  if (title) {
    canvas.text(MARGIN.left, MARGIN.top - 26, title, frame, 2);
  }
  canvas.text(MARGIN.left + plotW / 2 - Raster.textWidth('OUTER ITERATION') / 2,
              HEIGHT - 18, 'OUTER ITERATION', frame);

  // Bands first so every curve stays visible on top.
  curves.forEach((c, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    if (c.band.members >= 2) {
      const xs = [...c.band.x.map(px), ...c.band.x.slice().reverse().map(px)];
      const ys = [...c.band.upper.map(py), ...c.band.lower.slice().reverse().map(py)];
      canvas.fillPolygon(xs, ys, color, 0.22);
    }
  });
  curves.forEach((c, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    canvas.polyline(c.band.x.map(px), c.band.mean.map(py), color);
  });

  // Legend, top right inside the plot.
  const legendX = MARGIN.left + plotW - 10 -
    Math.max(...curves.map((c) => Raster.textWidth(c.label))) - 26;
  curves.forEach((c, idx) => {
    const y = MARGIN.top + 12 + idx * 16;
    canvas.fillRect(legendX, y, legendX + 18, y + 6, PALETTE[idx % PALETTE.length]);
    canvas.text(legendX + 26, y, c.label, frame);
  });

  const meta: FigureMeta = {
    title,
    column,
    yscale: 'log10',
    curves: curves.map((c) => ({
      label: c.label,
      traces: c.band.members,
      points: c.band.x.length,
      band: c.band.members >= 2,
    })),
  };
  return { png: encodePng(WIDTH, HEIGHT, canvas.pixels, JSON.stringify(meta)), meta };
}
