/**
 * Renderer tests against the bundled sample run directory.
 */

import { createHash } from "crypto";
import { mkdtempSync, readdirSync, readFileSync, statSync, writeFileSync, mkdirSync, existsSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { FIGURE_KINDS, renderFigure } from "../src/figures.js";
import { main } from "../src/render.js";

const SAMPLE = join(__dirname, "..", "sample_run");

function treeChecksum(root: string): string {
  const hash = createHash("sha256");
  const walk = (dir: string): void => {
    for (const name of readdirSync(dir).sort()) {
      const path = join(dir, name);
      if (statSync(path).isDirectory()) {
        walk(path);
      } else {
        hash.update(name);
        hash.update(readFileSync(path));
      }
    }
  };
  walk(root);
  return hash.digest("hex");
}

describe("figure kinds from the bundled sample run", () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders ${kind} without error`, () => {
      const { svg, missing } = renderFigure({ kind, runs: [SAMPLE] });
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      expect(missing).toEqual([]);
      expect(svg.length).toBeGreaterThan(2000);
    });
  }

  it("is deterministic for identical inputs", () => {
    for (const kind of FIGURE_KINDS) {
      const a = renderFigure({ kind, runs: [SAMPLE] }).svg;
      const b = renderFigure({ kind, runs: [SAMPLE] }).svg;
      expect(a).toBe(b);
    }
  });

  it("never mutates its inputs", () => {
    const before = treeChecksum(SAMPLE);
    for (const kind of FIGURE_KINDS) {
      renderFigure({ kind, runs: [SAMPLE] });
    }
    expect(treeChecksum(SAMPLE)).toBe(before);
  });

  it("draws the recorded saturation exponents as guide lines", () => {
    const { svg } = renderFigure({ kind: "saturation-scaling", runs: [SAMPLE] });
    const analysis = JSON.parse(readFileSync(join(SAMPLE, "analysis.json"), "utf-8"));
    for (const key of ["op", "vN", "RE"]) {
      const exponent: number | null = analysis.exponents[key];
      if (exponent !== null) {
        expect(svg).toContain(`alpha=${exponent.toFixed(2)}`);
      }
    }
  });
});

describe("render command", () => {
  it("writes an SVG file and exits 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "kfig-"));
    const out = join(dir, "fig.svg");
    const status = main(["--kind", "entropy-growth", "--run", SAMPLE, "--out", out]);
    expect(status).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("</svg>");
  });

  it("rejects unknown kinds with usage status", () => {
    expect(main(["--kind", "nonsense", "--run", SAMPLE])).toBe(2);
  });

  it("errors without writing for an empty directory", () => {
    const dir = mkdtempSync(join(tmpdir(), "kfig-"));
    const empty = join(dir, "empty");
    mkdirSync(empty);
    const out = join(dir, "fig.svg");
    const status = main(["--kind", "schmidt-decay", "--run", empty, "--out", out]);
    expect(status).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("annotates missing series and exits non-zero", () => {
    // a run with analysis.json but no series files for s1/s2
    const dir = mkdtempSync(join(tmpdir(), "kfig-"));
    const run = join(dir, "partial");
    mkdirSync(run);
    writeFileSync(join(run, "analysis.json"), JSON.stringify({
      series_key: { V: 0.5 },
      exponents: { op: null, vN: null, RE: null },
      saturation: {},
      growth_fits: {},
    }));
    const out = join(dir, "fig.svg");
    const status = main(["--kind", "temporal-growth", "--run", run, "--out", out]);
    expect(status).toBe(1);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("no s1 series");
  });
});
