/**
 * Hand-rolled SVG line charts: one polyline per group with a translucent
 * min-max band.  No randomness anywhere, so byte output is a pure function
 * of the plotted points.
 */

import { SidecarPoint } from "./aggregate.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 36, right: 170, bottom: 52, left: 64 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
];

function fmt(value: number): string {
  // fixed, locale-free formatting for geometry coordinates
  return value.toFixed(3);
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const tick = step * factor;
  const start = Math.ceil(lo / tick) * tick;
  const ticks: number[] = [];
  for (let v = start; v <= hi + tick * 1e-9; v += tick) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function renderSvg(
  points: SidecarPoint[],
  xLabel: string,
  yLabel: string,
  title: string,
): string {
  if (points.length === 0) {
    throw new Error("nothing to plot: the filter selected no rows");
  }
  const groups = [...new Set(points.map((p) => p.group))].sort();
  const xs = points.map((p) => p.x);
  const ys = points.flatMap((p) => [p.min, p.max]);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const xPad = xLo === xHi ? Math.max(1, Math.abs(xLo)) * 0.05 : 0;
  const yPad = (yHi - yLo || Math.max(1e-6, Math.abs(yHi))) * 0.06;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + ((x - (xLo - xPad)) / ((xHi + xPad) - (xLo - xPad))) * plotW;
  const sy = (y: number) =>
    MARGIN.top + plotH - ((y - (yLo - yPad)) / ((yHi + yPad) - (yLo - yPad))) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left}" y="22" font-size="15" font-weight="bold">${title}</text>`,
  );

  for (const tick of niceTicks(xLo - xPad, xHi + xPad, 6)) {
    const px = sx(tick);
    parts.push(
      `<line x1="${fmt(px)}" y1="${MARGIN.top}" x2="${fmt(px)}" ` +
      `y2="${MARGIN.top + plotH}" stroke="#eeeeee"/>`,
      `<text x="${fmt(px)}" y="${MARGIN.top + plotH + 18}" font-size="11" ` +
      `text-anchor="middle">${tick}</text>`,
    );
  }
  for (const tick of niceTicks(yLo - yPad, yHi + yPad, 6)) {
    const py = sy(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + plotW}" ` +
      `y2="${fmt(py)}" stroke="#eeeeee"/>`,
      `<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" font-size="11" ` +
      `text-anchor="end">${Number(tick.toPrecision(6))}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
    `fill="none" stroke="#444444"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" font-size="13" ` +
    `text-anchor="middle">${xLabel}</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" font-size="13" text-anchor="middle" ` +
    `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${yLabel}</text>`,
  );

  groups.forEach((group, gi) => {
    const color = PALETTE[gi % PALETTE.length];
    const series = points
      .filter((p) => p.group === group)
      .sort((a, b) => a.x - b.x);
    if (series.some((p) => p.max > p.min)) {
      const upper = series.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.max))}`);
      const lower = [...series].reverse()
        .map((p) => `${fmt(sx(p.x))},${fmt(sy(p.min))}`);
      parts.push(
        `<polygon points="${upper.join(" ")} ${lower.join(" ")}" ` +
        `fill="${color}" opacity="0.15"/>`,
      );
    }
    const line = series.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.median))}`);
    if (series.length > 1) {
      parts.push(
        `<polyline points="${line.join(" ")}" fill="none" stroke="${color}" ` +
        `stroke-width="2"/>`,
      );
    }
    for (const p of series) {
      parts.push(
        `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.median))}" r="3.5" ` +
        `fill="${color}"/>`,
      );
    }
    const ly = MARGIN.top + 14 + gi * 18;
    parts.push(
      `<line x1="${WIDTH - MARGIN.right + 12}" y1="${ly - 4}" ` +
      `x2="${WIDTH - MARGIN.right + 34}" y2="${ly - 4}" stroke="${color}" ` +
      `stroke-width="2"/>`,
      `<text x="${WIDTH - MARGIN.right + 40}" y="${ly}" font-size="12">${group}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
