#!/usr/bin/env node
/**
 * plots <kind> --in <csv|json> --out <file.svg>
 *
 * Renders one figure from a survey report.  Exit codes: 0 success,
 * 2 validation/schema error (bad kind, missing column, bad paths).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { FIGURE_KINDS, assertKind, renderFigure } from "./figures";
import { SchemaError, loadReport } from "./report";

interface Args {
  kind: string;
  input: string;
  output: string;
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0) {
    throw new SchemaError(
      `usage: plots <${FIGURE_KINDS.join("|")}> --in <csv|json> --out <file.svg>`,
    );
  }
  const [kind, ...rest] = argv;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) {
      throw new SchemaError(`flag ${flag} needs a value`);
    }
    if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else throw new SchemaError(`unknown flag ${flag}`);
  }
  if (!input || !output) {
    throw new SchemaError("both --in and --out are required");
  }
  return { kind, input, output };
}

export function run(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const kind = assertKind(args.kind);
    if (path.extname(args.output).toLowerCase() !== ".svg") {
      throw new SchemaError(
        `output must be an .svg path (got ${JSON.stringify(args.output)}); ` +
          "raster formats are not supported",
      );
    }
    if (!fs.existsSync(args.input)) {
      throw new SchemaError(`input file not found: ${args.input}`);
    }
    const rows = loadReport(args.input);
    const svg = renderFigure(kind, rows);
    fs.writeFileSync(args.output, svg + "\n", "utf-8");
    process.stderr.write(`wrote ${args.output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
