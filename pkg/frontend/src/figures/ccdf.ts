/**
 * Log-log complementary-CDF figure of per-packet queue sojourn delay, one
 * curve per queue (L and C), read from a qdelay CSV.
 */
import { QdelaySample } from "../csv.js";
import { ccdf, CcdfPoint } from "../stats.js";
import { makeScale, PALETTE, Svg } from "../svg.js";

export interface CcdfFigure {
  svg: string;
  curves: Map<string, CcdfPoint[]>;
}

export function renderCcdf(samples: QdelaySample[]): CcdfFigure {
  const byQueue = new Map<string, number[]>();
  for (const s of samples) {
    const arr = byQueue.get(s.queue);
    // plotted in milliseconds; zero-delay samples sit below the log floor
    const ms = s.sojournUs / 1000;
    if (arr) arr.push(ms);
    else byQueue.set(s.queue, [ms]);
  }
  const curves = new Map<string, CcdfPoint[]>();
  for (const [q, vals] of [...byQueue.entries()].sort()) {
    curves.set(q, ccdf(vals));
  }

  const width = 560;
  const height = 420;
  const allValues = [...curves.values()].flat();
  const maxV = Math.max(0.1, ...allValues.map((p) => p.value));
  const minSurv = Math.max(
    1e-6,
    Math.min(1, ...allValues.filter((p) => p.survival > 0).map((p) => p.survival)),
  );
  const xs = makeScale("log", [0.01, maxV * 1.2], [60, width - 20]);
  const ys = makeScale("log", [minSurv, 1], [height - 50, 20]);

  const fig = new Svg(width, height);
  fig.axes(xs, ys, "queue delay (ms)", "CCDF", (v) => String(v), (v) => v.toExponential(0));
  let color = 0;
  for (const [q, pts] of curves) {
    const path: [number, number][] = [];
    let prevSurv = 1;
    for (const p of pts) {
      const x = Math.max(p.value, xs.domain[0]);
      // step function: hold the previous survival until this value
      path.push([xs(x), ys(Math.max(prevSurv, ys.domain[0]))]);
      path.push([xs(x), ys(Math.max(p.survival, ys.domain[0]))]);
      prevSurv = p.survival;
      if (p.survival <= ys.domain[0]) break;
    }
    const c = PALETTE[color++ % PALETTE.length];
    fig.polyline(path, c);
    fig.text(width - 30, 34 + 16 * color, `${q} queue`, "end");
    fig.line(width - 110, 30 + 16 * color, width - 90, 30 + 16 * color, c, 2);
  }
  return { svg: fig.render(), curves };
}
