#!/usr/bin/env node
/**
 * plots <kind> <in.csv> -o <out.svg>
 *
 * kinds: histogram | bler | de-table.  Reads a harness CSV, builds the data
 * series, writes a deterministic SVG figure.  Schema mismatches exit
 * nonzero with a column diagnostic.
 */

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { readBlerCsv, readDeTableCsv, readHistogramCsv, SchemaError } from "./csv.js";
import { blerSeries, deTableSeries, histogramSeries } from "./series.js";
import { renderBler, renderDeTable, renderHistogram } from "./svg.js";

export const KINDS = ["histogram", "bler", "de-table"] as const;
export type Kind = (typeof KINDS)[number];

export function renderFile(kind: Kind, csvText: string, binWidth = 0.01): string {
  switch (kind) {
    case "histogram":
      return renderHistogram(histogramSeries(readHistogramCsv(csvText), binWidth));
    case "bler":
      return renderBler(blerSeries(readBlerCsv(csvText)));
    case "de-table":
      return renderDeTable(deTableSeries(readDeTableCsv(csvText)));
  }
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("$0 <kind> <input>", "render a figure from a results CSV", (y) =>
      y
        .positional("kind", { choices: KINDS, demandOption: true })
        .positional("input", { type: "string", demandOption: true }),
    )
    .option("output", { alias: "o", type: "string", demandOption: true, describe: "SVG output path" })
    .option("bin-width", { type: "number", default: 0.01, describe: "histogram bin width" })
    .strict()
    .exitProcess(false)
    .parseSync();

  let text: string;
  try {
    text = readFileSync(args.input as string, "utf-8");
  } catch (err) {
    console.error(`error: cannot read ${args.input}: ${(err as Error).message}`);
    return 2;
  }
  try {
    const svg = renderFile(args.kind as Kind, text, args["bin-width"] as number);
    writeFileSync(args.output, svg, "utf-8");
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
