/**
 * Flow-completion efficiency versus flow size: samples from an fct CSV are
 * grouped into base-3 logarithmic size bins, and each bin is drawn as its
 * mean with a P1-P99 whisker. Efficiency 1.0 means the flow completed at
 * its unloaded-path theoretical time.
 */
import { FctRow } from "../csv.js";
import { LogBin, logBinStats } from "../stats.js";
import { makeScale, PALETTE, Svg } from "../svg.js";

export interface EfficiencyFigure {
  svg: string;
  bins: LogBin[];
}

export function renderEfficiency(rows: FctRow[]): EfficiencyFigure {
  const bins = logBinStats(
    rows.map((r) => r.sizeBytes),
    rows.map((r) => r.efficiency),
    3,
  );
  if (bins.length === 0) {
    throw new Error("no completion records to bin");
  }
  const width = 560;
  const height = 380;
  const maxY = Math.max(1.1, ...bins.map((b) => b.p99)) * 1.05;
  const xs = makeScale("log", [bins[0].lo, bins[bins.length - 1].hi], [60, width - 20]);
  const ys = makeScale("linear", [0, maxY], [height - 50, 20]);
  const fig = new Svg(width, height);
  fig.axes(xs, ys, "flow size (bytes)", "completion efficiency", (v) => String(v));
  fig.line(xs.range[0], ys(1.0), xs.range[1], ys(1.0), "#999");

  const color = PALETTE[0];
  const centers = bins.map((b) => Math.sqrt(b.lo * b.hi));
  fig.polyline(bins.map((b, i) => [xs(centers[i]), ys(b.mean)] as [number, number]), color);
  bins.forEach((b, i) => {
    const x = xs(centers[i]);
    fig.line(x, ys(b.p1), x, ys(b.p99), color, 2);
    fig.circle(x, ys(b.mean), 3.5, color);
  });
  return { svg: fig.render(), bins };
}
