/**
 * End-to-end check against the simulator CLI: render the queue-delay CCDF
 * from a real run's CSVs and verify the curve is monotone non-increasing
 * and that its 1e-2 survival crossing matches the CLI's own P99 within one
 * sample bin (the gap to the adjacent distinct sample values).
 */
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";
import { readQdelay, readSummary } from "../src/csv";
import { renderCcdf } from "../src/figures/ccdf";
import { survivalCrossing } from "../src/stats";

const SCENARIO = {
  key: "frontend_ccdf_check",
  link_mbps: 40,
  duration_s: 60,
  seed: 4,
  flows: [
    { kind: "prague", side: "A", rtt_ms: 10 },
    { kind: "cubic", side: "B", rtt_ms: 10 },
  ],
};

let outDir: string;

beforeAll(() => {
  const dir = mkdtempSync(join(tmpdir(), "dualq-accept-"));
  const scenarioPath = join(dir, "scenario.json");
  writeFileSync(scenarioPath, JSON.stringify(SCENARIO));
  outDir = join(dir, "run");
  execFileSync("python3", ["-m", "dualq", "run", "--scenario", scenarioPath, "--out", outDir], {
    stdio: "pipe",
    timeout: 300_000,
  });
}, 300_000);

describe("criterion 13: CCDF figure from a real run", () => {
  it("renders monotone curves whose 1e-2 crossing matches the CLI P99", () => {
    const manifest = JSON.parse(readFileSync(join(outDir, "manifest.json"), "utf8"));
    const warmupUs = manifest.warmup_s * 1e6;
    const samples = readQdelay(join(outDir, "qdelay.csv")).filter((s) => s.tUs >= warmupUs);
    const summary = readSummary(join(outDir, "summary.csv"));
    const { svg, curves } = renderCcdf(samples);
    expect(svg).toContain("<svg");

    for (const [queue, metric] of [
      ["L", "l_sojourn_ms"],
      ["C", "c_sojourn_ms"],
    ] as const) {
      const curve = curves.get(queue)!;
      expect(curve.length).toBeGreaterThan(10);
      for (let i = 1; i < curve.length; i++) {
        expect(curve[i].survival).toBeLessThanOrEqual(curve[i - 1].survival);
      }
      const p99 = summary.find((r) => r.metric === metric)?.p99;
      expect(p99).not.toBeNull();
      const cross = survivalCrossing(curve, 1e-2)!;
      expect(cross).not.toBeNull();
      // "within one sample bin": the CLI's P99 must lie between the distinct
      // sample values adjacent to the crossing (its CSV value is rounded to
      // six decimals, so exact equality is not guaranteed).
      const idx = curve.findIndex((p) => p.value === cross);
      const lo = idx > 0 ? curve[idx - 1].value : cross;
      const hi = idx < curve.length - 1 ? curve[idx + 1].value : cross;
      const slack = Math.max(cross - lo, hi - cross, 0.002);
      expect(Math.abs(p99! - cross)).toBeLessThanOrEqual(slack);
    }
  });
});
