/**
 * The three report figures.  Each one declares the columns it needs and
 * renders only values present in the file; the single computed overlay is
 * the closed-form density (p-1)/(p^(n+1)-1) that the density figure
 * exists to compare against.
 */

import {
  MissingColumnError,
  ReportRow,
  SchemaError,
  requireColumn,
} from "./report";
import {
  FRAME,
  Svg,
  drawAxes,
  linearScale,
  log10Scale,
  niceTicks,
  yTicks,
} from "./svg";

export const FIGURE_KINDS = ["growth", "freeness_hist", "density_vs_p"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

const BLUE = "#2b6cb0";
const ORANGE = "#dd6b20";
const RED = "#c53030";

export function renderFigure(kind: FigureKind, rows: ReportRow[]): string {
  switch (kind) {
    case "growth":
      return growthFigure(rows);
    case "freeness_hist":
      return freenessHistFigure(rows);
    case "density_vs_p":
      return densityFigure(rows);
  }
}

/** pairs_in_S / (B log B) against B on a logarithmic x axis. */
function growthFigure(rows: ReportRow[]): string {
  const bs = requireColumn(rows, "B");
  const ratios = requireColumn(rows, "ratio_BlogB");
  const svg = new Svg(640, 420);
  const x = log10Scale({ min: bs[0], max: bs[bs.length - 1] },
                       { min: FRAME.left, max: FRAME.right });
  const yMax = Math.max(...ratios) * 1.15;
  const y = linearScale({ min: 0, max: yMax },
                        { min: FRAME.bottom, max: FRAME.top });
  drawAxes(svg, FRAME, "height bound B (log scale)",
           "pairs_in_S / (B log B)", "Growth of the bounded-ratio family");
  yTicks(svg, FRAME, y, niceTicks({ min: 0, max: yMax }),
         (v) => v.toPrecision(2));
  for (const b of bs) {
    const px = x(b);
    svg.line(px, FRAME.bottom, px, FRAME.bottom + 4, "#222");
    svg.text(px, FRAME.bottom + 18, String(b), { size: 10 });
  }
  const points: Array<[number, number]> =
    bs.map((b, i) => [x(b), y(ratios[i])]);
  svg.polyline(points, BLUE);
  for (const [px, py] of points) {
    svg.circle(px, py, 3.5, BLUE);
  }
  return svg.render();
}

/** Histogram of the reported pair-freeness summaries with the
 *  2*delta*n/(n+1) floor as a vertical reference line. */
function freenessHistFigure(rows: ReportRow[]): string {
  const minima = requireColumn(rows, "min_pair_freeness");
  const means = requireColumn(rows, "mean_pair_freeness");
  const floors = requireColumn(rows, "floor_2dn_over_n1");
  const values = [...minima, ...means];
  const floor = floors[floors.length - 1];
  const bins = 20;
  const counts = new Array<number>(bins).fill(0);
  for (const v of values) {
    const idx = Math.min(bins - 1, Math.max(0, Math.floor(v * bins)));
    counts[idx] += 1;
  }
  const svg = new Svg(640, 420);
  const x = linearScale({ min: 0, max: 1 },
                        { min: FRAME.left, max: FRAME.right });
  const yMax = Math.max(...counts, 1) * 1.2;
  const y = linearScale({ min: 0, max: yMax },
                        { min: FRAME.bottom, max: FRAME.top });
  drawAxes(svg, FRAME, "pair freeness", "count",
           "Reported pair freeness (min and mean per bound)");
  yTicks(svg, FRAME, y, niceTicks({ min: 0, max: yMax }, 4),
         (v) => String(Math.round(v)));
  for (let t = 0; t <= 10; t += 2) {
    const px = x(t / 10);
    svg.line(px, FRAME.bottom, px, FRAME.bottom + 4, "#222");
    svg.text(px, FRAME.bottom + 18, (t / 10).toFixed(1), { size: 10 });
  }
  const width = (FRAME.right - FRAME.left) / bins;
  counts.forEach((count, i) => {
    if (count > 0) {
      const top = y(count);
      svg.rect(x(i / bins) + 1, top, width - 2, FRAME.bottom - top, BLUE);
    }
  });
  const fx = x(floor);
  svg.line(fx, FRAME.top, fx, FRAME.bottom, RED, "5,4");
  svg.text(fx + 4, FRAME.top + 14, `floor ${floor.toFixed(3)}`,
           { anchor: "start", size: 10, fill: RED });
  return svg.render();
}

const DENSITY_PRIMES = [2, 3, 5, 7];

/** Empirical congruent-pair density per prime (last row) against the
 *  closed form (p-1)/(p^(n+1)-1). */
function densityFigure(rows: ReportRow[]): string {
  const ns = requireColumn(rows, "n");
  const n = ns[ns.length - 1];
  const empirical: number[] = [];
  for (const p of DENSITY_PRIMES) {
    const column = requireColumn(rows, `density_p${p}`);
    empirical.push(column[column.length - 1]);
  }
  const expected = DENSITY_PRIMES.map((p) => (p - 1) / (p ** (n + 1) - 1));
  const svg = new Svg(640, 420);
  const yMax = Math.max(...empirical, ...expected) * 1.25;
  const y = linearScale({ min: 0, max: yMax },
                        { min: FRAME.bottom, max: FRAME.top });
  drawAxes(svg, FRAME, "prime p", "congruent-pair density",
           "Empirical density vs (p-1)/(p^(n+1)-1)");
  yTicks(svg, FRAME, y, niceTicks({ min: 0, max: yMax }, 4),
         (v) => v.toPrecision(2));
  const slot = (FRAME.right - FRAME.left) / DENSITY_PRIMES.length;
  const bar = slot * 0.28;
  DENSITY_PRIMES.forEach((p, i) => {
    const cx = FRAME.left + slot * (i + 0.5);
    const eTop = y(empirical[i]);
    const xTop = y(expected[i]);
    svg.rect(cx - bar - 2, eTop, bar, FRAME.bottom - eTop, BLUE);
    svg.rect(cx + 2, xTop, bar, FRAME.bottom - xTop, ORANGE);
    svg.text(cx, FRAME.bottom + 18, `p = ${p}`, { size: 10 });
  });
  svg.rect(FRAME.right - 150, FRAME.top + 6, 10, 10, BLUE);
  svg.text(FRAME.right - 134, FRAME.top + 15, "empirical", { anchor: "start", size: 10 });
  svg.rect(FRAME.right - 150, FRAME.top + 22, 10, 10, ORANGE);
  svg.text(FRAME.right - 134, FRAME.top + 31, "closed form", { anchor: "start", size: 10 });
  return svg.render();
}

export function assertKind(kind: string): FigureKind {
  if ((FIGURE_KINDS as readonly string[]).includes(kind)) {
    return kind as FigureKind;
  }
  throw new SchemaError(
    `unknown figure kind ${JSON.stringify(kind)}; expected one of ${FIGURE_KINDS.join(", ")}`,
  );
}

export { MissingColumnError, SchemaError };
