#!/usr/bin/env node
/**
 * render — convergence-figure CLI.
 *
 * Usage:
 *   render --csv <path> --x tau|h --out <svg> [--slopes 0.5,1,2]
 *          [--norms L2,H1] [--title <text>]
 *
 * Reads a study CSV produced by the solver, renders one log-log panel per
 * norm, and writes an SVG.  A schema mismatch (missing column) exits with
 * status 2; a schema-valid file with zero series warns and writes nothing.
 */

import { readFileSync, writeFileSync } from "fs";
import { buildFigure, parseStudyCsv, SchemaError } from "./plot.js";

interface Args {
  csv?: string;
  x?: string;
  out?: string;
  slopes: number[];
  norms: string[];
  title?: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { slopes: [], norms: ["L2", "H1"] };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    const need = (): string => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[i];
    };
    switch (flag) {
      case "--csv":
        args.csv = need();
        break;
      case "--x":
        args.x = need();
        break;
      case "--out":
        args.out = need();
        break;
      case "--slopes":
        args.slopes = need().split(",").map(Number);
        break;
      case "--norms":
        args.norms = need().split(",");
        break;
      case "--title":
        args.title = need();
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    if (!args.csv) throw new Error("missing required flag --csv");
    if (!args.out) throw new Error("missing required flag --out");
    if (args.x !== "tau" && args.x !== "h")
      throw new Error("--x must be 'tau' or 'h'");
    if (args.slopes.some((s) => !Number.isFinite(s)))
      throw new Error("--slopes must be a comma-separated number list");
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }

  let rows;
  try {
    rows = parseStudyCsv(readFileSync(args.csv, "utf-8"));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`cannot read ${args.csv}: ${(err as Error).message}`);
    return 2;
  }

  const svg = buildFigure(rows, {
    xAxis: args.x as "tau" | "h",
    panels: args.norms,
    guideSlopes: args.slopes,
    title: args.title,
  });
  if (svg === null) {
    console.warn("warning: no series to plot, no file written");
    return 0;
  }
  writeFileSync(args.out, svg);
  console.log(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
