/** Binning and distribution helpers shared by the figure renderers. */

export interface CcdfPoint {
  value: number;
  survival: number;
}

/**
 * Complementary CDF: for each distinct sample value v, the fraction of
 * samples strictly greater than v. Monotone non-increasing by construction.
 */
export function ccdf(samples: number[]): CcdfPoint[] {
  if (samples.length === 0) return [];
  const sorted = [...samples].sort((a, b) => a - b);
  const n = sorted.length;
  const out: CcdfPoint[] = [];
  let i = 0;
  while (i < n) {
    const v = sorted[i];
    while (i < n && sorted[i] === v) i++;
    out.push({ value: v, survival: (n - i) / n });
  }
  return out;
}

/** Nearest-rank percentile, matching the simulator's summary statistics. */
export function percentile(samples: number[], p: number): number {
  if (samples.length === 0) throw new Error("percentile of empty sample set");
  const sorted = [...samples].sort((a, b) => a - b);
  const rank = Math.max(1, Math.ceil((p / 100) * sorted.length));
  return sorted[rank - 1];
}

export function mean(samples: number[]): number {
  if (samples.length === 0) throw new Error("mean of empty sample set");
  return samples.reduce((a, b) => a + b, 0) / samples.length;
}

export interface LogBin {
  lo: number;
  hi: number;
  mean: number;
  p1: number;
  p99: number;
  count: number;
}

/**
 * Group (key, value) samples into logarithmic bins of the given base
 * (bin i covers keys in [base^i, base^(i+1))) and reduce each bin to
 * mean / P1 / P99 of the values.
 */
export function logBinStats(
  keys: number[],
  values: number[],
  base = 3,
): LogBin[] {
  if (keys.length !== values.length) {
    throw new Error("keys and values must have equal length");
  }
  const byBin = new Map<number, number[]>();
  for (let i = 0; i < keys.length; i++) {
    if (keys[i] <= 0) continue;
    const bin = Math.floor(Math.log(keys[i]) / Math.log(base) + 1e-9);
    const arr = byBin.get(bin);
    if (arr) arr.push(values[i]);
    else byBin.set(bin, [values[i]]);
  }
  return [...byBin.keys()].sort((a, b) => a - b).map((bin) => {
    const vals = byBin.get(bin)!;
    return {
      lo: Math.pow(base, bin),
      hi: Math.pow(base, bin + 1),
      mean: mean(vals),
      p1: percentile(vals, 1),
      p99: percentile(vals, 99),
      count: vals.length,
    };
  });
}

/**
 * Value at which a CCDF first reaches or drops below the given survival
 * level, i.e. the smallest sample value v with survival(v) <= level.
 */
export function survivalCrossing(points: CcdfPoint[], level: number): number | null {
  for (const p of points) {
    if (p.survival <= level) return p.value;
  }
  return null;
}
