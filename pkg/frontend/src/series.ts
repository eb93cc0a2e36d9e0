/**
 * Data-series construction: the part of a figure that is checked against
 * golden files.  No statistics beyond binning and rate division happen
 * here, and none happen later in the SVG layer.
 */

import { BlerRow, DeTableRow, HistogramRow } from "./csv.js";

export interface HistogramSeries {
  k: number;
  binWidth: number;
  /** bin center (a multiple of binWidth) -> trial count */
  bins: { eps: number; count: number }[];
  total: number; // binned trials; equals the non-censored row count
  censored: number;
}

export interface BlerSeries {
  capacity: number;
  points: { epsilon: number; bler: number; undetectedRate: number }[];
}

export interface DeTableSeries {
  ms: number[];
  dcs: number[];
  /** values[i][j] = epsilon_star at (ms[i], dcs[j]), NaN when absent */
  values: number[][];
}

export function histogramSeries(rows: HistogramRow[], binWidth = 0.01): HistogramSeries[] {
  const byK = new Map<number, HistogramRow[]>();
  for (const row of rows) {
    const group = byK.get(row.k);
    if (group) group.push(row);
    else byK.set(row.k, [row]);
  }
  const out: HistogramSeries[] = [];
  for (const k of [...byK.keys()].sort((a, b) => a - b)) {
    const group = byK.get(k)!;
    const counts = new Map<number, number>();
    let total = 0;
    let censored = 0;
    for (const row of group) {
      if (row.censored || row.epsHat === null) {
        censored += 1;
        continue;
      }
      const bin = Math.round(row.epsHat / binWidth) * binWidth;
      const key = Number(bin.toFixed(10));
      counts.set(key, (counts.get(key) ?? 0) + 1);
      total += 1;
    }
    const bins = [...counts.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([eps, count]) => ({ eps, count }));
    out.push({ k, binWidth, bins, total, censored });
  }
  return out;
}

export function blerSeries(rows: BlerRow[]): BlerSeries[] {
  const byC = new Map<number, BlerRow[]>();
  for (const row of rows) {
    const group = byC.get(row.capacity);
    if (group) group.push(row);
    else byC.set(row.capacity, [row]);
  }
  const out: BlerSeries[] = [];
  for (const capacity of [...byC.keys()].sort((a, b) => b - a)) {
    const points = byC
      .get(capacity)!
      .slice()
      .sort((a, b) => a.epsilon - b.epsilon)
      .map((r) => ({
        epsilon: r.epsilon,
        bler: r.trials > 0 ? r.blockErrors / r.trials : NaN,
        undetectedRate: r.trials > 0 ? r.undetected / r.trials : NaN,
      }));
    out.push({ capacity, points });
  }
  return out;
}

export function deTableSeries(rows: DeTableRow[]): DeTableSeries {
  const ms = [...new Set(rows.map((r) => r.m))].sort((a, b) => a - b);
  const dcs = [...new Set(rows.map((r) => r.dc))].sort((a, b) => a - b);
  const values = ms.map(() => dcs.map(() => NaN));
  for (const row of rows) {
    values[ms.indexOf(row.m)][dcs.indexOf(row.dc)] = row.epsilonStar;
  }
  return { ms, dcs, values };
}
