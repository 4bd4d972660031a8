/** Strict parsing of the experiment CSV outputs. */

export const CONVERGENCE_HEADER = ["p_max_dbm", "seed", "iteration", "rate_bound"] as const;
export const SNR_HEADER = [
  "design",
  "snr_db",
  "num_trials",
  "mean_rate",
  "std_error",
  "mean_upper_bound",
] as const;
export const REGION_HEADER = [
  "design",
  "a_over_lambda",
  "num_trials",
  "mean_rate",
  "std_error",
  "mean_upper_bound",
] as const;

export type FigureKind = "convergence" | "snr" | "region";

export const HEADERS: Record<FigureKind, readonly string[]> = {
  convergence: CONVERGENCE_HEADER,
  snr: SNR_HEADER,
  region: REGION_HEADER,
};

/** One CSV row keyed by column name; numeric columns already parsed. */
export type Row = Record<string, string | number>;

const NUMERIC_EXCEPTIONS = new Set(["design"]);

export class CsvError extends Error {}

/**
 * Parse CSV text against the expected schema for the figure kind.
 *
 * The header must match the experiment CLI schema exactly; a mismatch
 * raises a diagnostic listing expected vs found columns. Rows are
 * returned in file order and never reordered or dropped.
 */
export function parseCsv(text: string, kind: FigureKind): Row[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError("CSV is empty");
  }
  const expected = HEADERS[kind];
  const found = lines[0].split(",");
  if (found.length !== expected.length || expected.some((c, i) => found[i] !== c)) {
    throw new CsvError(
      `CSV header mismatch for kind '${kind}': expected [${expected.join(", ")}], ` +
        `found [${found.join(", ")}]`,
    );
  }
  if (lines.length === 1) {
    throw new CsvError("CSV has a header but no data rows");
  }
  const rows: Row[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== expected.length) {
      throw new CsvError(`row ${i + 1}: expected ${expected.length} cells, found ${cells.length}`);
    }
    const row: Row = {};
    expected.forEach((column, j) => {
      if (NUMERIC_EXCEPTIONS.has(column)) {
        row[column] = cells[j];
        return;
      }
      const value = Number(cells[j]);
      if (!Number.isFinite(value)) {
        throw new CsvError(`row ${i + 1}, column '${column}': not a finite number: '${cells[j]}'`);
      }
      row[column] = value;
    });
    rows.push(row);
  }
  return rows;
}
