/** Mean and spread across a repeat group of equally-indexed series. */

export interface BandSeries {
  x: number[];
  mean: number[];
  lower: number[];
  upper: number[];
  members: number;
}

/**
 * Align series on their common prefix length and compute mean with a
 * +-1 population standard deviation band (band collapses to the mean for a
 * single member).
 */
export function meanBand(x: number[], series: number[][]): BandSeries {
  const len = Math.min(x.length, ...series.map((s) => s.length));
  const mean: number[] = [];
  const lower: number[] = [];
  const upper: number[] = [];
  for (let i = 0; i < len; i++) {
    const vals = series.map((s) => s[i]);
    const m = vals.reduce((a, b) => a + b, 0) / vals.length;
    const varp = vals.reduce((a, b) => a + (b - m) * (b - m), 0) / vals.length;
    const sd = Math.sqrt(varp);
    mean.push(m);
    lower.push(m - sd);
    upper.push(m + sd);
  }
  return { x: x.slice(0, len), mean, lower, upper, members: series.length };
}
