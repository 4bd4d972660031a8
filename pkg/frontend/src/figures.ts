/** Builds figure models (series + axis labels) from parsed CSV rows. */

import { FigureKind, Row } from "./csv.js";

export interface Point {
  x: number;
  y: number;
  /** half-length of the vertical error bar, when present */
  err?: number;
}

export interface Series {
  label: string;
  points: Point[];
  dashed: boolean;
}

export interface FigureModel {
  kind: FigureKind;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

export interface FigureOptions {
  /** overlay the deterministic bound curves (snr/region kinds) */
  showBound: boolean;
  /** draw +-1 standard error bars on the Monte Carlo curves */
  showErrorBars: boolean;
  /** restrict to these designs (lower case); empty means all */
  designs: string[];
}

export const DEFAULT_OPTIONS: FigureOptions = {
  showBound: true,
  showErrorBars: true,
  designs: [],
};

const DESIGN_LABELS: Record<string, string> = {
  fa: "FA",
  rfa: "RFA",
  fpa: "FPA",
};

function designLabel(design: string): string {
  return DESIGN_LABELS[design] ?? design.toUpperCase();
}

/** Rows grouped into per-trace series, preserving encounter order. */
function groupBy(rows: Row[], key: (row: Row) => string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(k, [row]);
    }
  }
  return groups;
}

function buildConvergence(rows: Row[]): Series[] {
  const seeds = new Set(rows.map((r) => r.seed as number));
  const groups = groupBy(rows, (r) => `${r.p_max_dbm}|${r.seed}`);
  const series: Series[] = [];
  for (const [, block] of groups) {
    const first = block[0];
    const label =
      seeds.size > 1
        ? `P_max = ${first.p_max_dbm} dBm (seed ${first.seed})`
        : `P_max = ${first.p_max_dbm} dBm`;
    series.push({
      label,
      dashed: false,
      points: block.map((r) => ({ x: r.iteration as number, y: r.rate_bound as number })),
    });
  }
  return series;
}

function buildSweep(rows: Row[], xColumn: string, options: FigureOptions): Series[] {
  const wanted = new Set(options.designs.map((d) => d.toLowerCase()));
  const filtered = wanted.size
    ? rows.filter((r) => wanted.has(String(r.design).toLowerCase()))
    : rows;
  const groups = groupBy(filtered, (r) => String(r.design));
  const series: Series[] = [];
  for (const [design, block] of groups) {
    series.push({
      label: designLabel(design),
      dashed: false,
      points: block.map((r) => ({
        x: r[xColumn] as number,
        y: r.mean_rate as number,
        ...(options.showErrorBars ? { err: r.std_error as number } : {}),
      })),
    });
  }
  if (options.showBound) {
    for (const [design, block] of groups) {
      series.push({
        label: `${designLabel(design)} bound`,
        dashed: true,
        points: block.map((r) => ({
          x: r[xColumn] as number,
          y: r.mean_upper_bound as number,
        })),
      });
    }
  }
  return series;
}

/** Assemble the figure model for one CSV; pure and deterministic. */
export function buildFigure(
  kind: FigureKind,
  rows: Row[],
  options: FigureOptions = DEFAULT_OPTIONS,
): FigureModel {
  switch (kind) {
    case "convergence":
      return {
        kind,
        xLabel: "Outer iteration",
        yLabel: "Rate (bits/s/Hz)",
        series: buildConvergence(rows),
      };
    case "snr":
      return {
        kind,
        xLabel: "SNR (dB)",
        yLabel: "Rate (bits/s/Hz)",
        series: buildSweep(rows, "snr_db", options),
      };
    case "region":
      return {
        kind,
        xLabel: "A/λ",
        yLabel: "Rate (bits/s/Hz)",
        series: buildSweep(rows, "a_over_lambda", options),
      };
  }
}
