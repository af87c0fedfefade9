#!/usr/bin/env node
/**
 * render --kind <kind> --run <dir> [--run <dir> ...] [--out <path>] [--guides 0.5,1]
 *
 * Renders one figure kind from run-directory artifacts into an SVG file.
 * Inputs are never modified.  Exit status: 0 on success, 1 when a run is
 * unusable, 2 for bad arguments; missing series inside an otherwise valid
 * run produce an annotated figure and exit status 1.
 */

import { writeFileSync } from "fs";
import { basename, join } from "path";

import { FIGURE_KINDS, FigureKind, FigureSpec, renderFigure } from "./figures.js";

function parseArgs(argv: string[]): FigureSpec {
  let kind: string | undefined;
  const runs: string[] = [];
  let out: string | undefined;
  let guides: number[] | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      i += 1;
      if (i >= argv.length) {
        throw new UsageError(`flag ${arg} is missing a value`);
      }
      return argv[i];
    };
    switch (arg) {
      case "--kind":
        kind = next();
        break;
      case "--run":
        runs.push(next());
        break;
      case "--out":
        out = next();
        break;
      case "--guides":
        guides = next().split(",").map(Number);
        break;
      default:
        throw new UsageError(`unknown argument ${arg}`);
    }
  }
  if (kind === undefined || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`--kind must be one of ${FIGURE_KINDS.join(", ")}`);
  }
  if (runs.length === 0) {
    throw new UsageError("at least one --run directory is required");
  }
  return { kind: kind as FigureKind, runs, out, guides };
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (error) {
    console.error(String(error instanceof Error ? error.message : error));
    return 2;
  }
  let rendered;
  try {
    rendered = renderFigure(spec);
  } catch (error) {
    console.error(String(error instanceof Error ? error.message : error));
    return 1;
  }
  const out = spec.out ?? join(".", `${spec.kind}_${basename(spec.runs[0])}.svg`);
  writeFileSync(out, rendered.svg, { encoding: "utf-8" });
  console.log(`wrote ${out}`);
  if (rendered.missing.length > 0) {
    for (const note of rendered.missing) {
      console.error(`missing input: ${note}`);
    }
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
