/**
 * Normalized-rate band figure over a multi-flow grid: for each scenario
 * (keyed "...a<nA>_b<nB>"), the per-side mean normalized rate with the
 * P1-P99 band from the summary CSV. A horizontal guide marks the
 * equal-share rate (1.0).
 */
import { SummaryRow } from "../csv.js";
import { makeScale, PALETTE, Svg } from "../svg.js";

const KEY_RE = /a(\d+)_b(\d+)$/;
const METRICS = ["norm_rate_a", "norm_rate_b"];

export function renderRateBands(rows: SummaryRow[]): string {
  interface Pt {
    label: string;
    metric: string;
    mean: number;
    p1: number | null;
    p99: number | null;
  }
  const pts: Pt[] = [];
  for (const row of rows) {
    if (!METRICS.includes(row.metric) || row.mean === null) continue;
    const m = KEY_RE.exec(row.scenario);
    if (!m) continue;
    pts.push({
      label: `${m[1]}:${m[2]}`,
      metric: row.metric,
      mean: row.mean,
      p1: row.p1,
      p99: row.p99,
    });
  }
  if (pts.length === 0) {
    throw new Error("no multi-flow keyed norm_rate rows in summary");
  }
  const labels = [...new Set(pts.map((p) => p.label))].sort((a, b) => {
    const [a1, a2] = a.split(":").map(Number);
    const [b1, b2] = b.split(":").map(Number);
    return a1 - b1 || a2 - b2;
  });

  const width = Math.max(560, 60 + labels.length * 46);
  const height = 380;
  const maxY = Math.max(1.5, ...pts.map((p) => p.p99 ?? p.mean)) * 1.1;
  const xs = makeScale("linear", [0, labels.length], [60, width - 20]);
  const ys = makeScale("linear", [0, maxY], [height - 50, 20]);
  const fig = new Svg(width, height);
  fig.axes(xs, ys, "flow counts (scalable:classic)", "normalized rate", () => "");
  labels.forEach((lab, i) => fig.text(xs(i + 0.5), height - 34, lab, "middle", 10));
  fig.line(xs.range[0], ys(1.0), xs.range[1], ys(1.0), "#999");

  METRICS.forEach((metric, mi) => {
    const color = PALETTE[mi];
    labels.forEach((lab, i) => {
      const p = pts.find((q) => q.label === lab && q.metric === metric);
      if (!p) return;
      const x = xs(i + 0.5) + (mi === 0 ? -7 : 7);
      if (p.p1 !== null && p.p99 !== null) {
        fig.line(x, ys(p.p1), x, ys(p.p99), color, 3);
      }
      fig.circle(x, ys(p.mean), 4, color);
    });
    fig.text(width - 24, 34 + 16 * mi, metric === "norm_rate_a" ? "scalable" : "classic", "end");
    fig.circle(width - 100, 30 + 16 * mi, 4, color);
  });
  return fig.render();
}
