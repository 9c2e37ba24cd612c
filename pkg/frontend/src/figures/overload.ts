/**
 * Overload panel figure: headline metrics versus unresponsive-UDP load,
 * one curve per ECN placement, from a merged overload-grid summary CSV
 * (scenario keys "...udp<percent>_<ect1|notect>").
 */
import { SummaryRow } from "../csv.js";
import { makeScale, PALETTE, Svg } from "../svg.js";

const KEY_RE = /udp(\d+)_(ect1|notect)$/;
const METRICS = ["l_sojourn_ms", "c_sojourn_ms", "utilization", "p_l_drop"];

export function renderOverloadPanels(rows: SummaryRow[]): string {
  interface Pt {
    pct: number;
    ecn: string;
    metric: string;
    mean: number;
  }
  const pts: Pt[] = [];
  for (const row of rows) {
    if (!METRICS.includes(row.metric) || row.mean === null) continue;
    const m = KEY_RE.exec(row.scenario);
    if (!m) continue;
    pts.push({ pct: Number(m[1]), ecn: m[2], metric: row.metric, mean: row.mean });
  }
  if (pts.length === 0) {
    throw new Error("no overload-keyed rows in summary");
  }
  const present = METRICS.filter((m) => pts.some((p) => p.metric === m));
  const panelW = 300;
  const panelH = 240;
  const cols = Math.min(2, present.length);
  const rowsN = Math.ceil(present.length / cols);
  const fig = new Svg(cols * panelW, rowsN * panelH);

  present.forEach((metric, idx) => {
    const px = (idx % cols) * panelW;
    const py = Math.floor(idx / cols) * panelH;
    const mine = pts.filter((p) => p.metric === metric);
    const pcts = [...new Set(mine.map((p) => p.pct))].sort((a, b) => a - b);
    const hi = Math.max(...mine.map((p) => p.mean)) * 1.15 || 1;
    const xs = makeScale("linear", [0, pcts[pcts.length - 1] * 1.05], [px + 55, px + panelW - 15]);
    const ys = makeScale("linear", [0, hi], [py + panelH - 45, py + 28]);
    fig.axes(xs, ys, "UDP load (% of capacity)", metric, (v) => String(v));
    fig.text(px + panelW / 2, py + 16, metric);
    ["ect1", "notect"].forEach((ecn, ei) => {
      const series = mine.filter((p) => p.ecn === ecn).sort((a, b) => a.pct - b.pct);
      const color = PALETTE[ei];
      fig.polyline(series.map((p) => [xs(p.pct), ys(p.mean)] as [number, number]), color);
      for (const p of series) fig.circle(xs(p.pct), ys(p.mean), 2.5, color);
      if (idx === 0) {
        fig.text(px + panelW - 18, py + 40 + 14 * ei, ecn, "end", 10);
      }
    });
  });
  return fig.render();
}
