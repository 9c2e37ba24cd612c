/**
 * Panel figure over a rate x RTT scenario grid: one panel per metric, one
 * curve per link rate, RTT on the x axis. Consumes a merged summary CSV
 * whose scenario keys end in "r<rate>_rtt<rtt>". Mean is drawn as the
 * line; where P1/P99 columns are present they are drawn as a shaded band
 * (taken from the CSV, never recomputed).
 */
import { SummaryRow } from "../csv.js";
import { makeScale, PALETTE, Svg } from "../svg.js";

const KEY_RE = /r(\d+)_rtt(\d+)$/;

export interface GridCell {
  rate: number;
  rtt: number;
  row: SummaryRow;
}

export function parseGrid(rows: SummaryRow[], metrics: string[]): Map<string, GridCell[]> {
  const out = new Map<string, GridCell[]>();
  for (const row of rows) {
    if (!metrics.includes(row.metric)) continue;
    const m = KEY_RE.exec(row.scenario);
    if (!m) continue;
    const cell = { rate: Number(m[1]), rtt: Number(m[2]), row };
    const arr = out.get(row.metric);
    if (arr) arr.push(cell);
    else out.set(row.metric, [cell]);
  }
  return out;
}

const DEFAULT_METRICS = ["l_sojourn_ms", "c_sojourn_ms", "utilization", "rate_ratio"];

export function renderGridPanels(
  rows: SummaryRow[],
  metrics: string[] = DEFAULT_METRICS,
): string {
  const grid = parseGrid(rows, metrics);
  const present = metrics.filter((m) => grid.has(m));
  if (present.length === 0) {
    throw new Error(`no grid-keyed rows found for metrics: ${metrics.join(", ")}`);
  }
  const panelW = 300;
  const panelH = 240;
  const cols = Math.min(2, present.length);
  const rowsN = Math.ceil(present.length / cols);
  const fig = new Svg(cols * panelW, rowsN * panelH);

  present.forEach((metric, idx) => {
    const px = (idx % cols) * panelW;
    const py = Math.floor(idx / cols) * panelH;
    const cells = grid.get(metric)!;
    const rates = [...new Set(cells.map((c) => c.rate))].sort((a, b) => a - b);
    const rtts = [...new Set(cells.map((c) => c.rtt))].sort((a, b) => a - b);
    const means = cells.map((c) => c.row.mean ?? 0);
    const highs = cells.map((c) => c.row.p99 ?? c.row.mean ?? 0);
    const lo = Math.min(0, ...means);
    const hi = Math.max(...highs, ...means) * 1.1 || 1;
    const xs = makeScale("log", [rtts[0], rtts[rtts.length - 1]], [px + 55, px + panelW - 15]);
    const ys = makeScale("linear", [lo, hi], [py + panelH - 45, py + 28]);
    fig.axes(xs, ys, "base RTT (ms)", metric, (v) => String(v));
    fig.text(px + panelW / 2, py + 16, metric);

    rates.forEach((rate, ri) => {
      const series = cells
        .filter((c) => c.rate === rate && c.row.mean !== null)
        .sort((a, b) => a.rtt - b.rtt);
      const color = PALETTE[ri % PALETTE.length];
      const banded = series.filter((c) => c.row.p1 !== null && c.row.p99 !== null);
      if (banded.length > 1) {
        fig.band(
          banded.map((c) => [xs(c.rtt), ys(c.row.p99!)] as [number, number]),
          banded.map((c) => [xs(c.rtt), ys(c.row.p1!)] as [number, number]),
          color + "22",
        );
      }
      fig.polyline(
        series.map((c) => [xs(c.rtt), ys(c.row.mean!)] as [number, number]),
        color,
      );
      for (const c of series) fig.circle(xs(c.rtt), ys(c.row.mean!), 2.5, color);
      fig.text(px + panelW - 18, py + 40 + 14 * ri, `${rate} Mb/s`, "end", 10);
    });
  });
  return fig.render();
}
