import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { run } from "../src/cli";
import { FIGURE_KINDS, MissingColumnError, renderFigure } from "../src/figures";
import { loadReport, parseCsv, requireColumn } from "../src/report";

const GOLDEN_CSV = path.join(__dirname, "..", "fixtures", "golden.csv");
const GOLDEN_JSON = path.join(__dirname, "..", "fixtures", "golden.json");

let tmpDir: string;

beforeAll(() => {
  tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
});

afterAll(() => {
  fs.rmSync(tmpDir, { recursive: true, force: true });
});

function truncatedCopy(keep: number): string {
  const lines = fs.readFileSync(GOLDEN_CSV, "utf-8").trim().split("\n");
  const cut = lines.map((line) => line.split(",").slice(0, keep).join(","));
  const out = path.join(tmpDir, `truncated-${keep}.csv`);
  fs.writeFileSync(out, cut.join("\n") + "\n");
  return out;
}

describe("report loading", () => {
  it("parses the golden CSV into 5 rows", () => {
    const rows = loadReport(GOLDEN_CSV);
    expect(rows).toHaveLength(5);
    expect(rows[0].B).toBe(1024);
    expect(rows[4].B).toBe(16384);
    expect(rows[0].pairs_in_S).toBeGreaterThan(0);
  });

  it("parses the JSON mirror into the same rows", () => {
    const csvRows = loadReport(GOLDEN_CSV);
    const jsonRows = loadReport(GOLDEN_JSON);
    expect(jsonRows).toEqual(csvRows);
  });

  it("treats empty cells as null and requireColumn skips them", () => {
    const rows = parseCsv("B,min_pair_freeness\n10,\n20,0.5\n");
    expect(rows[0].min_pair_freeness).toBeNull();
    expect(requireColumn(rows, "min_pair_freeness")).toEqual([0.5]);
  });

  it("names the missing column", () => {
    const rows = parseCsv("B,n\n10,2\n");
    expect(() => requireColumn(rows, "ratio_BlogB")).toThrowError(
      /missing column: ratio_BlogB/,
    );
  });
});

describe("figures from the golden report", () => {
  it.each(FIGURE_KINDS.map((k) => [k] as const))("renders %s", (kind) => {
    const rows = loadReport(GOLDEN_CSV);
    const svg = renderFigure(kind, rows);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("</svg>");
  });

  it("growth plots one marker per row", () => {
    const rows = loadReport(GOLDEN_CSV);
    const svg = renderFigure("growth", rows);
    expect(svg.match(/<circle /g)).toHaveLength(5);
    expect(svg).toContain("16384");
  });

  it("freeness_hist draws the floor reference line at the column value", () => {
    const rows = loadReport(GOLDEN_CSV);
    const svg = renderFigure("freeness_hist", rows);
    expect(svg).toContain("floor 0.533");
    expect(svg).toContain('stroke-dasharray="5,4"');
  });

  it("density_vs_p draws paired bars for p in {2,3,5,7}", () => {
    const rows = loadReport(GOLDEN_CSV);
    const svg = renderFigure("density_vs_p", rows);
    for (const p of [2, 3, 5, 7]) {
      expect(svg).toContain(`p = ${p}`);
    }
    // 4 empirical + 4 closed-form bars + 2 legend swatches + background
    expect(svg.match(/<rect /g)).toHaveLength(11);
  });

  it("fails with the column name on a truncated file", () => {
    const rows = loadReport(truncatedCopy(6));
    expect(() => renderFigure("growth", rows)).toThrowError(MissingColumnError);
    expect(() => renderFigure("growth", rows)).toThrowError(
      /missing column: ratio_BlogB/,
    );
    expect(() => renderFigure("freeness_hist", rows)).toThrowError(
      /missing column: min_pair_freeness/,
    );
    expect(() => renderFigure("density_vs_p", rows)).toThrowError(
      /missing column: density_p2/,
    );
  });
});

describe("cli", () => {
  it("renders all three kinds end to end", () => {
    for (const kind of FIGURE_KINDS) {
      const out = path.join(tmpDir, `${kind}.svg`);
      const code = run([kind, "--in", GOLDEN_CSV, "--out", out]);
      expect(code).toBe(0);
      const svg = fs.readFileSync(out, "utf-8");
      expect(svg).toContain("</svg>");
    }
  });

  it("accepts the JSON mirror", () => {
    const out = path.join(tmpDir, "growth-json.svg");
    expect(run(["growth", "--in", GOLDEN_JSON, "--out", out])).toBe(0);
  });

  it("exits 2 on a truncated file, naming the column", () => {
    const out = path.join(tmpDir, "bad.svg");
    expect(run(["growth", "--in", truncatedCopy(6), "--out", out])).toBe(2);
  });

  it("exits 2 on unknown kinds, bad flags, and non-svg outputs", () => {
    const out = path.join(tmpDir, "x.svg");
    expect(run(["surface", "--in", GOLDEN_CSV, "--out", out])).toBe(2);
    expect(run(["growth", "--in", GOLDEN_CSV])).toBe(2);
    expect(run(["growth", "--bogus", GOLDEN_CSV, "--out", out])).toBe(2);
    expect(run(["growth", "--in", GOLDEN_CSV, "--out",
                path.join(tmpDir, "x.png")])).toBe(2);
    expect(run(["growth", "--in", path.join(tmpDir, "nope.csv"),
                "--out", out])).toBe(2);
  });
});
