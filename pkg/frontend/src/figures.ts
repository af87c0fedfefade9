/**
 * The standard figure kinds, built from run-directory artifacts only.
 *
 * Fitted guide lines always use the exponents recorded in analysis.json;
 * nothing is re-fit at render time.
 */

import { column } from "./csv.js";
import { RunDir } from "./rundir.js";
import { AxisSpec, color, document, Panel } from "./svg.js";

export const FIGURE_KINDS = [
  "entropy-growth",
  "saturation-scaling",
  "temporal-growth",
  "schmidt-decay",
  "ed-benchmark",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  runs: string[];
  guides?: number[]; // extra reference slopes for temporal-growth
  out?: string;
}

export interface RenderedFigure {
  svg: string;
  missing: string[]; // annotations for absent inputs
}

const OBSERVABLE_TITLES: Record<string, string> = {
  dsop: "operator entropy growth",
  s1: "von Neumann entropy",
  s2: "second Renyi entropy",
  sn: "n-th Renyi entropy",
};

const logAxis = (label: string): AxisSpec => ({ label, scale: "log" });
const linAxis = (label: string): AxisSpec => ({ label, scale: "linear" });

function observablesOf(run: RunDir): string[] {
  const seen = new Set<string>();
  for (const ref of run.listSeries()) {
    seen.add(ref.observable);
  }
  return [...seen].sort();
}

function sizesOf(run: RunDir, observable: string): number[] {
  return run
    .listSeries()
    .filter((ref) => ref.observable === observable)
    .map((ref) => ref.L)
    .sort((a, b) => a - b);
}

export function entropyGrowth(runs: RunDir[]): RenderedFigure {
  const run = runs[0];
  const missing: string[] = [];
  const panels: Panel[] = [];
  const observables = observablesOf(run);
  if (observables.length === 0) {
    missing.push("run has no series/ directory");
  }
  for (const obs of observables) {
    const panel = new Panel(
      `${OBSERVABLE_TITLES[obs] ?? obs} (${run.label()})`,
      logAxis("t"),
      linAxis(obs === "dsop" ? "dS" : "S"),
    );
    for (const [k, L] of sizesOf(run, obs).entries()) {
      const table = run.series(obs, L);
      panel.add({ x: column(table, "t"), y: column(table, "mean"),
                  label: `L=${L}`, stroke: color(k) });
    }
    panels.push(panel);
  }
  return { svg: document(panels), missing };
}

export function saturationScaling(runs: RunDir[]): RenderedFigure {
  const missing: string[] = [];
  const keys: Array<[string, string]> = [["op", "dsop"], ["vN", "s1"], ["RE", "s2"]];
  const panels: Panel[] = [];
  for (const [key, obs] of keys) {
    const panel = new Panel(
      `saturation time of ${OBSERVABLE_TITLES[obs] ?? obs}`,
      logAxis("L"),
      logAxis("t_half"),
    );
    for (const [k, run] of runs.entries()) {
      const analysis = run.analysis();
      const sat = analysis.saturation?.[key];
      if (sat === undefined || Object.keys(sat).length === 0) {
        const note = `${run.label()}: ${key} never grew (x)`;
        panel.annotate(note);
        missing.push(note);
        continue;
      }
      const sizes = Object.keys(sat).map(Number).sort((a, b) => a - b);
      const tHalf = sizes.map((L) => sat[String(L)].t_half);
      panel.add({ x: sizes, y: tHalf, label: run.label(), stroke: color(k), markers: true });
      const exponent = analysis.exponents?.[key];
      if (exponent !== null && exponent !== undefined) {
        // recorded fit line through the last point: t = t_ref (L/L_ref)^alpha
        const lRef = sizes[sizes.length - 1];
        const tRef = tHalf[tHalf.length - 1];
        const xs = [sizes[0] * 0.95, lRef * 1.05];
        const ys = xs.map((L) => tRef * (L / lRef) ** exponent);
        panel.add({ x: xs, y: ys, stroke: color(k), dashed: true,
                    label: `alpha=${exponent.toFixed(2)}` });
      }
    }
    panels.push(panel);
  }
  return { svg: document(panels), missing };
}

export function temporalGrowth(runs: RunDir[], guides: number[] = []): RenderedFigure {
  const missing: string[] = [];
  const panels: Panel[] = [];
  for (const obs of ["s1", "s2"]) {
    const panel = new Panel(
      `growth of ${OBSERVABLE_TITLES[obs]}`,
      logAxis("t"),
      logAxis("S"),
    );
    let k = 0;
    for (const run of runs) {
      const sizes = sizesOf(run, obs);
      if (sizes.length === 0) {
        const note = `${run.label()}: no ${obs} series`;
        panel.annotate(note);
        missing.push(note);
        continue;
      }
      const L = sizes[sizes.length - 1];
      const table = run.series(obs, L);
      panel.add({ x: column(table, "t"), y: column(table, "mean"),
                  label: `${run.label()} L=${L}`, stroke: color(k) });
      const fit = run.analysis().growth_fits?.[obs];
      if (fit !== undefined) {
        // recorded exponent drawn through the window midpoint
        const t = column(table, "t");
        const s = column(table, "mean");
        const [lo, hi] = fit.window;
        const mid = Math.sqrt(lo * hi);
        let anchorS = NaN;
        let best = Infinity;
        for (let i = 0; i < t.length; i++) {
          const dist = Math.abs(Math.log(t[i] / mid));
          if (t[i] >= lo && t[i] <= hi && dist < best && s[i] > 0) {
            best = dist;
            anchorS = s[i];
          }
        }
        if (Number.isFinite(anchorS)) {
          const xs = [lo, hi];
          const ys = xs.map((x) => anchorS * (x / mid) ** fit.exponent);
          panel.add({ x: xs, y: ys, stroke: color(k), dashed: true,
                      label: `~t^${fit.exponent.toFixed(2)}` });
        }
      }
      k += 1;
    }
    for (const guide of guides) {
      const xs = [1, 10];
      const ys = xs.map((x) => 0.5 * x ** guide);
      panel.add({ x: xs, y: ys, stroke: "#999", dashed: true, label: `slope ${guide}` });
    }
    panels.push(panel);
  }
  return { svg: document(panels), missing };
}

export function schmidtDecay(runs: RunDir[]): RenderedFigure {
  const run = runs[0];
  const missing: string[] = [];
  const analysis = run.analysis();
  const beta = analysis.schmidt_beta ?? 1.0;
  const sizes = run.schmidtSizes();
  const panel = new Panel(
    `Schmidt-value decay, ln Lambda vs t^${beta} (${run.label()})`,
    linAxis(`t^${beta}`),
    linAxis("ln Lambda_i"),
  );
  if (sizes.length === 0) {
    const note = "no schmidt/typical_L*.csv in run";
    panel.annotate(note);
    missing.push(note);
    return { svg: document([panel]), missing };
  }
  const L = sizes[sizes.length - 1];
  const table = run.schmidtTypical(L);
  const t = column(table, "t");
  const x = Float64Array.from(t, (v) => v ** beta);
  const k = table.columns.length - 1;
  for (let i = 1; i <= k; i++) {
    const lam = column(table, `lambda_${i}`);
    const logs = Float64Array.from(lam, (v) => (v > 0 ? Math.log(v) : NaN));
    panel.add({ x, y: logs, stroke: color(i - 1), label: i <= 4 ? `i=${i}` : undefined });
  }
  for (const fit of analysis.schmidt_fits ?? []) {
    const ys = Float64Array.from(x, (v) => Math.log(fit.c) - fit.d * v);
    panel.add({ x, y: ys, stroke: color(fit.i - 1), dashed: true });
  }
  return { svg: document([panel]), missing };
}

export function edBenchmark(runs: RunDir[]): RenderedFigure {
  const run = runs[0];
  const { L, table } = run.edBenchmark();
  const panels: Panel[] = [];
  for (const [obs, title] of [
    ["dsop", "operator entropy growth"],
    ["s1", "von Neumann entropy"],
    ["s2", "second Renyi entropy"],
  ] as const) {
    const panel = new Panel(`${title}: contour formula vs ED (L=${L})`,
                            logAxis("t"), linAxis("S"));
    panel.add({ x: column(table, "t"), y: column(table, `${obs}_sk`),
                label: "correlation matrix", stroke: color(0) });
    panel.add({ x: column(table, "t"), y: column(table, `${obs}_ed`),
                label: "many-body ED", stroke: color(1), dashed: true, markers: false });
    panels.push(panel);
  }
  return { svg: document(panels), missing: [] };
}

export function renderFigure(spec: FigureSpec): RenderedFigure {
  const runs = spec.runs.map((root) => new RunDir(root));
  if (runs.length === 0) {
    throw new Error("at least one --run directory is required");
  }
  switch (spec.kind) {
    case "entropy-growth":
      return entropyGrowth(runs);
    case "saturation-scaling":
      return saturationScaling(runs);
    case "temporal-growth":
      return temporalGrowth(runs, spec.guides ?? []);
    case "schmidt-decay":
      return schmidtDecay(runs);
    case "ed-benchmark":
      return edBenchmark(runs);
  }
}
