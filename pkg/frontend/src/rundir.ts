/**
 * Access to a run directory produced by the simulation CLI.
 *
 * Layout consumed here (read-only):
 *   series/<obs>_L<L>.csv        t,mean,stderr[,r...]
 *   schmidt/typical_L<L>.csv     t,lambda_1..K
 *   analysis.json                exponents, growth fits, Schmidt fits
 *   ed_benchmark_L<L>.csv        t,dsop_sk,dsop_ed,s1_sk,s1_ed,s2_sk,s2_ed
 */

import { existsSync, readdirSync, readFileSync } from "fs";
import { join } from "path";

import { readCsv, Table } from "./csv.js";

export interface GrowthFit {
  L: number;
  exponent: number;
  r_squared: number;
  window: [number, number];
}

export interface SchmidtFit {
  i: number;
  c: number;
  d: number;
  r2: number;
}

export interface Analysis {
  model?: string;
  series_key?: Record<string, number>;
  sizes?: number[];
  exponents?: Record<string, number | null>;
  r2?: Record<string, number | null>;
  no_growth?: string[];
  saturation?: Record<string, Record<string, { s_sat: number; t_half: number }>>;
  growth_fits?: Record<string, GrowthFit>;
  schmidt_fits?: SchmidtFit[];
  schmidt_beta?: number | null;
  schmidt_beta_comparison?: Record<string, number[]>;
}

export interface SeriesRef {
  observable: string;
  L: number;
  path: string;
}

export class RunDir {
  constructor(readonly root: string) {
    if (!existsSync(root)) {
      throw new Error(`run directory does not exist: ${root}`);
    }
  }

  analysis(): Analysis {
    const path = join(this.root, "analysis.json");
    if (!existsSync(path)) {
      throw new Error(`run has no analysis.json: ${this.root}`);
    }
    return JSON.parse(readFileSync(path, "utf-8")) as Analysis;
  }

  label(): string {
    try {
      const key = this.analysis().series_key ?? {};
      const [name] = Object.keys(key);
      return name !== undefined ? `${name}=${key[name]}` : this.root;
    } catch {
      return this.root;
    }
  }

  listSeries(): SeriesRef[] {
    const dir = join(this.root, "series");
    if (!existsSync(dir)) {
      return [];
    }
    const refs: SeriesRef[] = [];
    for (const name of readdirSync(dir).sort()) {
      const match = /^([a-z0-9]+)_L(\d+)\.csv$/.exec(name);
      if (match) {
        refs.push({ observable: match[1], L: Number(match[2]), path: join(dir, name) });
      }
    }
    return refs;
  }

  series(observable: string, L: number): Table {
    return readCsv(join(this.root, "series", `${observable}_L${L}.csv`));
  }

  hasSeries(observable: string, L: number): boolean {
    return existsSync(join(this.root, "series", `${observable}_L${L}.csv`));
  }

  schmidtTypical(L: number): Table {
    return readCsv(join(this.root, "schmidt", `typical_L${L}.csv`));
  }

  schmidtSizes(): number[] {
    const dir = join(this.root, "schmidt");
    if (!existsSync(dir)) {
      return [];
    }
    return readdirSync(dir)
      .map((name) => /^typical_L(\d+)\.csv$/.exec(name))
      .filter((m): m is RegExpExecArray => m !== null)
      .map((m) => Number(m[1]))
      .sort((a, b) => a - b);
  }

  edBenchmark(): { L: number; table: Table } {
    const match = readdirSync(this.root)
      .map((name) => /^ed_benchmark_L(\d+)\.csv$/.exec(name))
      .filter((m): m is RegExpExecArray => m !== null)
      .sort((a, b) => Number(a[1]) - Number(b[1]))[0];
    if (match === undefined) {
      throw new Error(`run has no ed_benchmark_L*.csv: ${this.root}`);
    }
    return { L: Number(match[1]), table: readCsv(join(this.root, match.input!)) };
  }
}
