import { describe, expect, it } from "vitest";
import { readFileSync } from "fs";
import { join } from "path";
import { CsvError, parseCsv } from "../src/csv.js";

const FIXTURES = join(__dirname, "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

describe("parseCsv", () => {
  it("parses the convergence fixture with numeric columns", () => {
    const rows = parseCsv(fixture("convergence.csv"), "convergence");
    expect(rows.length).toBeGreaterThan(0);
    expect(typeof rows[0].p_max_dbm).toBe("number");
    expect(typeof rows[0].iteration).toBe("number");
    expect(typeof rows[0].rate_bound).toBe("number");
  });

  it("keeps design as a string in sweep files", () => {
    const rows = parseCsv(fixture("snr.csv"), "snr");
    expect(rows[0].design).toBe("fa");
    expect(typeof rows[0].mean_rate).toBe("number");
  });

  it("preserves row order exactly", () => {
    const text = fixture("region.csv");
    const rows = parseCsv(text, "region");
    const firstDataLine = text.split("\n")[1].split(",");
    expect(rows[0].design).toBe(firstDataLine[0]);
    expect(rows[0].a_over_lambda).toBe(Number(firstDataLine[1]));
    expect(rows.length).toBe(text.trim().split("\n").length - 1);
  });

  it("rejects a header mismatch with expected and found columns", () => {
    expect(() => parseCsv(fixture("snr.csv"), "region")).toThrowError(
      /expected \[design, a_over_lambda.*found \[design, snr_db/,
    );
  });

  it("rejects empty input and header-only input", () => {
    expect(() => parseCsv("", "snr")).toThrow(CsvError);
    expect(() => parseCsv("design,snr_db,num_trials,mean_rate,std_error,mean_upper_bound\n", "snr")).toThrowError(
      /no data rows/,
    );
  });

  it("rejects non-numeric cells in numeric columns", () => {
    const bad =
      "design,snr_db,num_trials,mean_rate,std_error,mean_upper_bound\nfa,zero,2,1.0,0.1,2.0\n";
    expect(() => parseCsv(bad, "snr")).toThrowError(/snr_db/);
  });

  it("rejects ragged rows", () => {
    const bad = "p_max_dbm,seed,iteration,rate_bound\n20.0,7,0\n";
    expect(() => parseCsv(bad, "convergence")).toThrowError(/expected 4 cells/);
  });
});
