/** Minimal deterministic SVG line-chart rendering, no dependencies. */

import { FigureModel, Series } from "./figures.js";

const WIDTH = 760;
const HEIGHT = 500;
const MARGIN = { left: 70, right: 24, top: 24, bottom: 56 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#e377c2",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round-trip-safe number formatting (same digits JS uses for equality). */
function num(value: number): string {
  return String(value);
}

/** Nice tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1.0;
    return ticks(lo - pad, lo + pad, count);
  }
  const span = hi - lo;
  const rawStep = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => c >= rawStep) ?? candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

function dataBounds(series: Series[]): { x: [number, number]; y: [number, number] } {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      xMin = Math.min(xMin, p.x);
      xMax = Math.max(xMax, p.x);
      const err = p.err ?? 0;
      yMin = Math.min(yMin, p.y - err);
      yMax = Math.max(yMax, p.y + err);
    }
  }
  if (!Number.isFinite(xMin)) {
    throw new Error("figure has no data points");
  }
  if (xMax === xMin) {
    xMax = xMin + 1;
  }
  if (yMax === yMin) {
    yMax = yMin + 1;
  }
  const yPad = (yMax - yMin) * 0.05;
  return { x: [xMin, xMax], y: [yMin - yPad, yMax + yPad] };
}

/** Render the figure model to an SVG document string. */
export function renderFigure(model: FigureModel): string {
  const { x: xr, y: yr } = dataBounds(model.series);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (v: number) => MARGIN.left + ((v - xr[0]) / (xr[1] - xr[0])) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - yr[0]) / (yr[1] - yr[0])) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>`,
  );

  // ticks and grid
  for (const t of ticks(xr[0], xr[1])) {
    const px = sx(t);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${MARGIN.top}" x2="${px.toFixed(2)}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${px.toFixed(2)}" y="${MARGIN.top + plotH + 18}" font-size="12" ` +
        `text-anchor="middle" fill="#222">${esc(num(t))}</text>`,
    );
  }
  for (const t of ticks(yr[0], yr[1])) {
    const py = sy(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py.toFixed(2)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${py.toFixed(2)}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${(py + 4).toFixed(2)}" font-size="12" ` +
        `text-anchor="end" fill="#222">${esc(num(t))}</text>`,
    );
  }

  // axis labels
  parts.push(
    `<text class="x-label" x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" ` +
      `font-size="14" text-anchor="middle" fill="#000">${esc(model.xLabel)}</text>`,
  );
  parts.push(
    `<text class="y-label" x="18" y="${MARGIN.top + plotH / 2}" font-size="14" ` +
      `text-anchor="middle" fill="#000" transform="rotate(-90 18 ${
        MARGIN.top + plotH / 2
      })">${esc(model.yLabel)}</text>`,
  );

  // series
  model.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.points.map((p) => `${sx(p.x).toFixed(3)},${sy(p.y).toFixed(3)}`).join(" ");
    const data = s.points.map((p) => `${num(p.x)}:${num(p.y)}`).join(";");
    const dash = s.dashed ? ` stroke-dasharray="7 4"` : "";
    parts.push(
      `<polyline class="series" data-label="${esc(s.label)}" data-points="${esc(data)}" ` +
        `points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    for (const p of s.points) {
      parts.push(
        `<circle cx="${sx(p.x).toFixed(3)}" cy="${sy(p.y).toFixed(3)}" r="2.6" ` +
          `fill="${color}"/>`,
      );
      if (p.err !== undefined && p.err > 0) {
        const px = sx(p.x).toFixed(3);
        const lo = sy(p.y - p.err).toFixed(3);
        const hi = sy(p.y + p.err).toFixed(3);
        parts.push(
          `<line class="error-bar" x1="${px}" y1="${lo}" x2="${px}" y2="${hi}" ` +
            `stroke="${color}" stroke-width="1.1"/>`,
        );
      }
    }
  });

  // legend
  const legendX = MARGIN.left + 12;
  let legendY = MARGIN.top + 16;
  model.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = s.dashed ? ` stroke-dasharray="7 4"` : "";
    parts.push(
      `<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 26}" y2="${legendY - 4}" ` +
        `stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    parts.push(
      `<text class="legend" x="${legendX + 32}" y="${legendY}" font-size="12" ` +
        `fill="#000">${esc(s.label)}</text>`,
    );
    legendY += 16;
  });

  parts.push("</svg>");
  return parts.join("\n");
}
