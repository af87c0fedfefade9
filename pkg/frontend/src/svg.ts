/**
 * Dependency-free SVG plotting: log/linear axes, curves, guide lines.
 *
 * Output is deterministic for identical inputs: coordinates are formatted
 * with fixed precision and elements are emitted in insertion order.
 */

export type AxisScale = "linear" | "log";

export interface AxisSpec {
  label: string;
  scale: AxisScale;
}

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 40, bottom: 52 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

export function color(k: number): string {
  return PALETTE[k % PALETTE.length];
}

function fmt(x: number): string {
  return x.toFixed(2);
}

function tickLabel(value: number): string {
  const abs = Math.abs(value);
  if (value !== 0 && (abs >= 1e4 || abs < 1e-3)) {
    return value.toExponential(0).replace("+", "");
  }
  const rounded = Math.round(value * 1000) / 1000;
  return String(rounded);
}

class Scale {
  constructor(
    readonly kind: AxisScale,
    readonly lo: number,
    readonly hi: number,
    readonly pixLo: number,
    readonly pixHi: number,
  ) {}

  pos(value: number): number {
    const [a, b] =
      this.kind === "log" ? [Math.log10(this.lo), Math.log10(this.hi)] : [this.lo, this.hi];
    const v = this.kind === "log" ? Math.log10(value) : value;
    const frac = b === a ? 0.5 : (v - a) / (b - a);
    return this.pixLo + frac * (this.pixHi - this.pixLo);
  }

  ticks(): number[] {
    if (this.kind === "log") {
      const out: number[] = [];
      const lo = Math.ceil(Math.log10(this.lo) - 1e-9);
      const hi = Math.floor(Math.log10(this.hi) + 1e-9);
      for (let e = lo; e <= hi; e++) {
        out.push(10 ** e);
      }
      if (out.length < 2) {
        return [this.lo, this.hi];
      }
      return out;
    }
    const span = this.hi - this.lo;
    if (span <= 0) {
      return [this.lo];
    }
    const step = 10 ** Math.floor(Math.log10(span / 4));
    const mult = span / 4 / step >= 5 ? 5 : span / 4 / step >= 2 ? 2 : 1;
    const inc = mult * step;
    const out: number[] = [];
    for (let v = Math.ceil(this.lo / inc) * inc; v <= this.hi + 1e-12; v += inc) {
      out.push(Math.abs(v) < inc * 1e-9 ? 0 : v);
    }
    return out;
  }
}

export interface Curve {
  x: ArrayLike<number>;
  y: ArrayLike<number>;
  label?: string;
  stroke?: string;
  dashed?: boolean;
  markers?: boolean;
}

export class Panel {
  private curves: Curve[] = [];
  private notes: string[] = [];

  constructor(
    readonly title: string,
    readonly xAxis: AxisSpec,
    readonly yAxis: AxisSpec,
  ) {}

  add(curve: Curve): void {
    this.curves.push(curve);
  }

  annotate(message: string): void {
    this.notes.push(message);
  }

  private finiteValues(get: (c: Curve) => ArrayLike<number>, scale: AxisScale): number[] {
    const out: number[] = [];
    for (const curve of this.curves) {
      const arr = get(curve);
      for (let i = 0; i < arr.length; i++) {
        const v = arr[i];
        if (Number.isFinite(v) && (scale !== "log" || v > 0)) {
          out.push(v);
        }
      }
    }
    return out;
  }

  render(): string {
    const xs = this.finiteValues((c) => c.x, this.xAxis.scale);
    const ys = this.finiteValues((c) => c.y, this.yAxis.scale);
    const body: string[] = [];
    body.push(
      `<text x="${fmt(WIDTH / 2)}" y="22" text-anchor="middle" font-size="15" font-weight="bold">${escapeXml(this.title)}</text>`,
    );
    if (xs.length === 0 || ys.length === 0) {
      body.push(
        `<text x="${fmt(WIDTH / 2)}" y="${fmt(HEIGHT / 2)}" text-anchor="middle" fill="#b00" font-size="14">no plottable data</text>`,
      );
      for (const [k, note] of this.notes.entries()) {
        body.push(
          `<text x="${fmt(WIDTH / 2)}" y="${fmt(HEIGHT / 2 + 20 + 16 * k)}" text-anchor="middle" fill="#b00" font-size="12">${escapeXml(note)}</text>`,
        );
      }
      return body.join("\n");
    }
    const pad = (lo: number, hi: number, scale: AxisScale): [number, number] => {
      if (scale === "log") {
        return [lo / 1.3, hi * 1.3];
      }
      const span = hi - lo || Math.abs(hi) || 1;
      return [lo - 0.06 * span, hi + 0.06 * span];
    };
    const [xLo, xHi] = pad(Math.min(...xs), Math.max(...xs), this.xAxis.scale);
    const [yLo, yHi] = pad(Math.min(...ys), Math.max(...ys), this.yAxis.scale);
    const sx = new Scale(this.xAxis.scale, xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
    const sy = new Scale(this.yAxis.scale, yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

    body.push(
      `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#333"/>`,
    );
    for (const tick of sx.ticks()) {
      const px = sx.pos(tick);
      body.push(`<line x1="${fmt(px)}" y1="${HEIGHT - MARGIN.bottom}" x2="${fmt(px)}" y2="${HEIGHT - MARGIN.bottom + 5}" stroke="#333"/>`);
      body.push(`<text x="${fmt(px)}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" font-size="11">${tickLabel(tick)}</text>`);
    }
    for (const tick of sy.ticks()) {
      const py = sy.pos(tick);
      body.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(py)}" x2="${MARGIN.left}" y2="${fmt(py)}" stroke="#333"/>`);
      body.push(`<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${tickLabel(tick)}</text>`);
    }
    body.push(
      `<text x="${fmt((MARGIN.left + WIDTH - MARGIN.right) / 2)}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${escapeXml(this.xAxis.label)}</text>`,
    );
    body.push(
      `<text transform="translate(16,${fmt((MARGIN.top + HEIGHT - MARGIN.bottom) / 2)}) rotate(-90)" text-anchor="middle" font-size="13">${escapeXml(this.yAxis.label)}</text>`,
    );

    let legendRow = 0;
    for (const [k, curve] of this.curves.entries()) {
      const stroke = curve.stroke ?? color(k);
      const points: string[] = [];
      for (let i = 0; i < curve.x.length; i++) {
        const x = curve.x[i];
        const y = curve.y[i];
        if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
        if (this.xAxis.scale === "log" && x <= 0) continue;
        if (this.yAxis.scale === "log" && y <= 0) continue;
        points.push(`${fmt(sx.pos(x))},${fmt(sy.pos(y))}`);
      }
      if (points.length === 0) continue;
      const dash = curve.dashed ? ' stroke-dasharray="6,4"' : "";
      body.push(
        `<polyline fill="none" stroke="${stroke}" stroke-width="1.6"${dash} points="${points.join(" ")}"/>`,
      );
      if (curve.markers) {
        for (const pt of points) {
          const [px, py] = pt.split(",");
          body.push(`<circle cx="${px}" cy="${py}" r="3" fill="${stroke}"/>`);
        }
      }
      if (curve.label) {
        const ly = MARGIN.top + 14 + 15 * legendRow;
        legendRow += 1;
        body.push(`<line x1="${WIDTH - 170}" y1="${fmt(ly - 4)}" x2="${WIDTH - 146}" y2="${fmt(ly - 4)}" stroke="${stroke}" stroke-width="2"${dash}/>`);
        body.push(`<text x="${WIDTH - 140}" y="${fmt(ly)}" font-size="11">${escapeXml(curve.label)}</text>`);
      }
    }
    for (const [k, note] of this.notes.entries()) {
      body.push(
        `<text x="${MARGIN.left + 8}" y="${fmt(HEIGHT - MARGIN.bottom - 10 - 15 * k)}" fill="#b00" font-size="12">${escapeXml(note)}</text>`,
      );
    }
    return body.join("\n");
  }
}

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function document(panels: Panel[]): string {
  const height = HEIGHT * panels.length;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${height}" viewBox="0 0 ${WIDTH} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${height}" fill="white"/>`,
  ];
  panels.forEach((panel, k) => {
    parts.push(`<g transform="translate(0,${k * HEIGHT})">`);
    parts.push(panel.render());
    parts.push("</g>");
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
