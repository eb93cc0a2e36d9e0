/**
 * Self-contained SVG figure emitters.  Everything is drawn from the data
 * series with fixed geometry and formatting, so a byte-identical input CSV
 * produces a byte-identical figure.
 */

import { BlerSeries, DeTableSeries, HistogramSeries } from "./series.js";

const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(x: number, digits = 4): string {
  if (!Number.isFinite(x)) return "";
  return Number(x.toFixed(digits)).toString();
}

interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

function linScale(domain: [number, number], range: [number, number]) {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (x: number) => r0 + ((x - d0) / span) * (r1 - r0);
}

function ticks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / n;
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n) ?? mag * 10;
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    out.push(Number(t.toFixed(12)));
  }
  return out;
}

function axes(frame: Frame, xLabel: string, yLabel: string, title: string): string {
  const { x0, y0, w, h } = frame;
  return [
    `<rect x="${x0}" y="${y0}" width="${w}" height="${h}" fill="none" stroke="#333"/>`,
    `<text x="${x0 + w / 2}" y="${y0 + h + 32}" text-anchor="middle" font-size="12" ${FONT}>${esc(xLabel)}</text>`,
    `<text x="${x0 - 42}" y="${y0 + h / 2}" text-anchor="middle" font-size="12" ${FONT} transform="rotate(-90 ${x0 - 42} ${y0 + h / 2})">${esc(yLabel)}</text>`,
    `<text x="${x0 + w / 2}" y="${y0 - 8}" text-anchor="middle" font-size="13" ${FONT}>${esc(title)}</text>`,
  ].join("\n");
}

function noData(frame: Frame): string {
  return `<text x="${frame.x0 + frame.w / 2}" y="${frame.y0 + frame.h / 2}" text-anchor="middle" font-size="14" fill="#888" ${FONT}>no data</text>`;
}

function document(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
  ].join("\n");
}

export function renderHistogram(series: HistogramSeries[]): string {
  const panelW = 560;
  const panelH = 150;
  const margin = { left: 70, right: 30, top: 40, gap: 46, bottom: 50 };
  const n = Math.max(series.length, 1);
  const height = margin.top + n * panelH + (n - 1) * margin.gap + margin.bottom;
  const width = margin.left + panelW + margin.right;

  const allEps = series.flatMap((s) => s.bins.map((b) => b.eps));
  const binW = series[0]?.binWidth ?? 0.01;
  const xLo = allEps.length ? Math.min(...allEps) - binW : 0;
  const xHi = allEps.length ? Math.max(...allEps) + binW : 1;

  const parts: string[] = [];
  const panels = series.length ? series : [null];
  panels.forEach((s, idx) => {
    const frame: Frame = {
      x0: margin.left,
      y0: margin.top + idx * (panelH + margin.gap),
      w: panelW,
      h: panelH,
    };
    const title = s
      ? `k = ${s.k} (${s.total} trials${s.censored ? `, ${s.censored} censored` : ""})`
      : "overhead histogram";
    parts.push(axes(frame, "overhead", "trials", title));
    if (!s || s.bins.length === 0) {
      parts.push(noData(frame));
      return;
    }
    const yHi = Math.max(...s.bins.map((b) => b.count));
    const sx = linScale([xLo, xHi], [frame.x0, frame.x0 + frame.w]);
    const sy = linScale([0, yHi], [frame.y0 + frame.h, frame.y0]);
    for (const t of ticks(xLo, xHi)) {
      parts.push(
        `<line x1="${fmt(sx(t), 2)}" y1="${frame.y0 + frame.h}" x2="${fmt(sx(t), 2)}" y2="${frame.y0 + frame.h + 4}" stroke="#333"/>`,
        `<text x="${fmt(sx(t), 2)}" y="${frame.y0 + frame.h + 16}" text-anchor="middle" font-size="10" ${FONT}>${fmt(t)}</text>`,
      );
    }
    for (const t of ticks(0, yHi, 4)) {
      parts.push(
        `<line x1="${frame.x0 - 4}" y1="${fmt(sy(t), 2)}" x2="${frame.x0}" y2="${fmt(sy(t), 2)}" stroke="#333"/>`,
        `<text x="${frame.x0 - 7}" y="${fmt(sy(t) + 3, 2)}" text-anchor="end" font-size="10" ${FONT}>${fmt(t)}</text>`,
      );
    }
    const barPx = Math.max((sx(xLo + binW) - sx(xLo)) * 0.9, 1);
    for (const bin of s.bins) {
      const cx = sx(bin.eps);
      const top = sy(bin.count);
      parts.push(
        `<rect x="${fmt(cx - barPx / 2, 2)}" y="${fmt(top, 2)}" width="${fmt(barPx, 2)}" height="${fmt(frame.y0 + frame.h - top, 2)}" fill="${COLORS[0]}" stroke="none"/>`,
      );
    }
  });
  return document(width, height, parts.join("\n"));
}

export function renderBler(series: BlerSeries[], floor = 1e-4): string {
  const frame: Frame = { x0: 70, y0: 40, w: 560, h: 360 };
  const width = frame.x0 + frame.w + 150;
  const height = frame.y0 + frame.h + 60;
  const parts: string[] = [axes(frame, "overhead", "block error rate", "block error rate vs overhead")];

  const pts = series.flatMap((s) => s.points).filter((p) => Number.isFinite(p.bler));
  if (pts.length === 0) {
    parts.push(noData(frame));
    return document(width, height, parts.join("\n"));
  }
  const xLo = Math.min(...pts.map((p) => p.epsilon));
  const xHi = Math.max(...pts.map((p) => p.epsilon));
  const sx = linScale([xLo, xHi], [frame.x0, frame.x0 + frame.w]);
  const logFloor = Math.log10(floor);
  const sy = linScale([logFloor, 0], [frame.y0 + frame.h, frame.y0]);
  const clamp = (b: number) => Math.log10(Math.max(b, floor));

  for (const t of ticks(xLo, xHi)) {
    parts.push(
      `<line x1="${fmt(sx(t), 2)}" y1="${frame.y0 + frame.h}" x2="${fmt(sx(t), 2)}" y2="${frame.y0 + frame.h + 4}" stroke="#333"/>`,
      `<text x="${fmt(sx(t), 2)}" y="${frame.y0 + frame.h + 16}" text-anchor="middle" font-size="10" ${FONT}>${fmt(t)}</text>`,
    );
  }
  for (let e = Math.ceil(logFloor); e <= 0; e++) {
    const y = sy(e);
    parts.push(
      `<line x1="${frame.x0 - 4}" y1="${fmt(y, 2)}" x2="${frame.x0}" y2="${fmt(y, 2)}" stroke="#333"/>`,
      `<text x="${frame.x0 - 7}" y="${fmt(y + 3, 2)}" text-anchor="end" font-size="10" ${FONT}>1e${e}</text>`,
    );
  }
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const coords = s.points
      .filter((p) => Number.isFinite(p.bler))
      .map((p) => `${fmt(sx(p.epsilon), 2)},${fmt(sy(clamp(p.bler)), 2)}`);
    if (coords.length > 1) {
      parts.push(`<polyline points="${coords.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    }
    for (const p of s.points) {
      if (!Number.isFinite(p.bler)) continue;
      parts.push(
        `<circle cx="${fmt(sx(p.epsilon), 2)}" cy="${fmt(sy(clamp(p.bler)), 2)}" r="3.5" fill="${color}"/>`,
      );
    }
    const ly = frame.y0 + 16 + i * 18;
    parts.push(
      `<line x1="${frame.x0 + frame.w + 12}" y1="${ly - 4}" x2="${frame.x0 + frame.w + 40}" y2="${ly - 4}" stroke="${color}" stroke-width="1.5"/>`,
      `<text x="${frame.x0 + frame.w + 46}" y="${ly}" font-size="11" ${FONT}>C = ${fmt(s.capacity)}</text>`,
    );
  });
  return document(width, height, parts.join("\n"));
}

export function renderDeTable(series: DeTableSeries): string {
  const cell = { w: 86, h: 22 };
  const left = 70;
  const top = 60;
  const rows = series.ms.length;
  const cols = series.dcs.length;
  const width = left + Math.max(cols, 1) * cell.w + 40;
  const height = top + Math.max(rows, 1) * cell.h + 50;
  const parts: string[] = [
    `<text x="${left}" y="24" font-size="13" ${FONT}>asymptotic overhead by field degree and check degree</text>`,
  ];
  if (rows === 0 || cols === 0) {
    parts.push(noData({ x0: left, y0: top, w: 4 * cell.w, h: 6 * cell.h }));
    return document(width, height, parts.join("\n"));
  }
  const flat = series.values.flat().filter((v) => Number.isFinite(v));
  const lo = Math.min(...flat);
  const hi = Math.max(...flat);
  const shade = (v: number) => {
    if (!Number.isFinite(v)) return "#eee";
    // log ramp: light for small overhead, dark for large
    const t = hi > lo ? (Math.log(v) - Math.log(lo)) / (Math.log(hi) - Math.log(lo)) : 0;
    const g = Math.round(245 - 140 * t);
    return `rgb(${g},${Math.round(225 - 90 * t)},255)`;
  };
  series.dcs.forEach((dc, j) => {
    parts.push(
      `<text x="${left + j * cell.w + cell.w / 2}" y="${top - 8}" text-anchor="middle" font-size="11" ${FONT}>d_c = ${dc}</text>`,
    );
  });
  series.ms.forEach((m, i) => {
    parts.push(
      `<text x="${left - 8}" y="${top + i * cell.h + cell.h / 2 + 4}" text-anchor="end" font-size="11" ${FONT}>m = ${m}</text>`,
    );
    series.dcs.forEach((_dc, j) => {
      const v = series.values[i][j];
      const x = left + j * cell.w;
      const y = top + i * cell.h;
      parts.push(
        `<rect x="${x}" y="${y}" width="${cell.w}" height="${cell.h}" fill="${shade(v)}" stroke="#999" stroke-width="0.5"/>`,
        `<text x="${x + cell.w / 2}" y="${y + cell.h / 2 + 4}" text-anchor="middle" font-size="11" ${FONT}>${Number.isFinite(v) ? v.toFixed(4) : "-"}</text>`,
      );
    });
  });
  return document(width, height, parts.join("\n"));
}
