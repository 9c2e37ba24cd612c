#!/usr/bin/env node
/**
 * Figure renderer for the simulator's CSV outputs.
 *
 *   dualq-plots --kind ccdf       --input run/qdelay.csv  --out fig.svg
 *   dualq-plots --kind grid       --input grid/summary.csv --out fig.svg
 *   dualq-plots --kind bands      --input grid/summary.csv --out fig.svg
 *   dualq-plots --kind overload   --input grid/summary.csv --out fig.svg
 *   dualq-plots --kind efficiency --input run/fct.csv      --out fig.svg
 *
 * Exits nonzero on schema mismatch; an input with a valid header but no
 * data rows is a warning and no figure is written.
 */
import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { readFct, readQdelay, readSummary, SchemaError } from "./csv.js";
import { renderRateBands } from "./figures/bands.js";
import { renderCcdf } from "./figures/ccdf.js";
import { renderEfficiency } from "./figures/efficiency.js";
import { renderGridPanels } from "./figures/grid.js";
import { renderOverloadPanels } from "./figures/overload.js";

export const KINDS = ["ccdf", "grid", "bands", "overload", "efficiency"] as const;
export type Kind = (typeof KINDS)[number];

export function renderFigure(kind: Kind, inputPath: string, skipS = 0): string | null {
  switch (kind) {
    case "ccdf": {
      const samples = readQdelay(inputPath).filter((s) => s.tUs >= skipS * 1e6);
      if (samples.length === 0) return null;
      return renderCcdf(samples).svg;
    }
    case "efficiency": {
      const rows = readFct(inputPath);
      if (rows.length === 0) return null;
      return renderEfficiency(rows).svg;
    }
    case "grid":
    case "bands":
    case "overload": {
      const rows = readSummary(inputPath);
      if (rows.length === 0) return null;
      if (kind === "grid") return renderGridPanels(rows);
      if (kind === "bands") return renderRateBands(rows);
      return renderOverloadPanels(rows);
    }
  }
}

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", { choices: KINDS, demandOption: true })
    .option("input", { type: "string", demandOption: true })
    .option("out", { type: "string", demandOption: true })
    .option("skip-s", {
      type: "number",
      default: 0,
      describe: "drop per-packet samples earlier than this time (e.g. the run's warm-up)",
    })
    .strict()
    .exitProcess(false)
    .parseSync();
  try {
    const svg = renderFigure(args.kind, args.input, args["skip-s"]);
    if (svg === null) {
      console.warn(`warning: ${args.input} has no data rows; nothing rendered`);
      return 0;
    }
    writeFileSync(args.out, svg);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(hideBin(process.argv)));
}
