/**
 * Minimal deterministic SVG figure builder: fixed canvas, linear/log scales,
 * polylines, bands, points, and labelled axes. Output depends only on the
 * data handed in, so figures are byte-stable across runs.
 */

export type ScaleKind = "linear" | "log";

export interface Scale {
  (v: number): number;
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
}

export function makeScale(
  kind: ScaleKind,
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  if (kind === "log" && (d0 <= 0 || d1 <= 0)) {
    throw new Error(`log scale domain must be positive, got [${d0}, ${d1}]`);
  }
  const t = (v: number) => (kind === "log" ? Math.log10(v) : v);
  const span = t(d1) - t(d0) || 1;
  const fn = ((v: number) => r0 + ((t(v) - t(d0)) / span) * (r1 - r0)) as Scale;
  fn.kind = kind;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function ticks(scale: Scale, want = 6): number[] {
  const [d0, d1] = scale.domain;
  if (scale.kind === "log") {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(d0)); Math.pow(10, e) <= d1 * 1.0001; e++) {
      out.push(Math.pow(10, e));
    }
    return out.length > 0 ? out : [d0, d1];
  }
  const span = d1 - d0 || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / want)));
  const mult = span / want / step >= 5 ? 5 : span / want / step >= 2 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(d0 / s) * s; v <= d1 + s * 1e-9; v += s) {
    out.push(Number(v.toPrecision(10)));
  }
  return out;
}

const fmt = (v: number) => Number(v.toPrecision(6)).toString();

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, w = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${w}"/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, w = 1.5): void {
    if (points.length === 0) return;
    const d = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${w}"/>`,
    );
  }

  /** Filled region between an upper and a lower polyline. */
  band(upper: [number, number][], lower: [number, number][], fill: string): void {
    if (upper.length === 0 || lower.length === 0) return;
    const pts = [...upper, ...[...lower].reverse()]
      .map(([x, y]) => `${fmt(x)},${fmt(y)}`)
      .join(" ");
    this.parts.push(`<polygon points="${pts}" fill="${fill}" stroke="none"/>`);
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, anchor = "middle", size = 11): void {
    const esc = s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" font-family="sans-serif">${esc}</text>`,
    );
  }

  axes(
    xs: Scale,
    ys: Scale,
    xLabel: string,
    yLabel: string,
    xTickFmt: (v: number) => string = fmt,
    yTickFmt: (v: number) => string = fmt,
  ): void {
    const [x0, x1] = xs.range;
    const [y0, y1] = ys.range; // y0 is the bottom pixel (larger value)
    this.line(x0, y0, x1, y0, "#000");
    this.line(x0, y0, x0, y1, "#000");
    for (const t of ticks(xs)) {
      const x = xs(t);
      this.line(x, y0, x, y0 + 4, "#000");
      this.text(x, y0 + 16, xTickFmt(t));
    }
    for (const t of ticks(ys)) {
      const y = ys(t);
      this.line(x0 - 4, y, x0, y, "#000");
      this.text(x0 - 7, y + 4, yTickFmt(t), "end");
    }
    this.text((x0 + x1) / 2, y0 + 32, xLabel);
    this.parts.push(
      `<text x="14" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="11" font-family="sans-serif" transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})">${yLabel}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="#fff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
