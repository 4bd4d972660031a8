#!/usr/bin/env node
/**
 * Render an experiment CSV as an SVG figure.
 *
 * Usage:
 *   fluid-mimo-plots --kind <convergence|snr|region> --in <csv> --out <svg>
 *       [--no-bound] [--no-error-bars] [--designs fa,rfa]
 */

import { readFileSync, writeFileSync } from "fs";
import { CsvError, FigureKind, parseCsv } from "./csv.js";
import { DEFAULT_OPTIONS, FigureOptions, buildFigure } from "./figures.js";
import { renderFigure } from "./svg.js";

interface CliArgs {
  kind: FigureKind;
  input: string;
  output: string;
  options: FigureOptions;
}

const KINDS: FigureKind[] = ["convergence", "snr", "region"];

export function parseArgs(argv: string[]): CliArgs {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  const options: FigureOptions = { ...DEFAULT_OPTIONS, designs: [] };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${arg}`);
      return argv[i];
    };
    switch (arg) {
      case "--kind":
        kind = next();
        break;
      case "--in":
        input = next();
        break;
      case "--out":
        output = next();
        break;
      case "--no-bound":
        options.showBound = false;
        break;
      case "--no-error-bars":
        options.showErrorBars = false;
        break;
      case "--designs":
        options.designs = next()
          .split(",")
          .map((d) => d.trim())
          .filter((d) => d.length > 0);
        break;
      default:
        throw new Error(`unknown argument: ${arg}`);
    }
  }
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (!input) throw new Error("--in <csv> is required");
  if (!output) throw new Error("--out <svg> is required");
  if (!output.endsWith(".svg")) {
    throw new Error("only .svg output is supported");
  }
  return { kind: kind as FigureKind, input, output, options };
}

export function run(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const text = readFileSync(args.input, "utf-8");
    const rows = parseCsv(text, args.kind);
    const model = buildFigure(args.kind, rows, args.options);
    writeFileSync(args.output, renderFigure(model), "utf-8");
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

const isMain = process.argv[1] !== undefined && import.meta.url.endsWith(
  process.argv[1].split("/").pop() ?? "",
);
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
