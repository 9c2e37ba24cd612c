"""Executes one Scenario on the dumbbell engine, reduces the metrics into
summary rows, and writes the CSV result tree (manifest + resolved scenario +
the five exports).
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import __version__
from .baselines import (Pie, PieConfig, Pi2Single, Pi2SingleConfig, TailDrop,
                        TailDropConfig)
from .core import Ecn, MTU, Rng
from .dualpi2 import DualPi2, DualPi2Config
from .metrics import (C_QUEUE, L_QUEUE, MetricStore, mean, percentile,
                      warmup_time, window_estimate, write_summary_csv)
from .analysis import rtt_independence_floor
from .simnet import Dumbbell, TcpFlow, UdpFlow
from .workload import Scenario, gen_web_arrivals

MAX_WARMUP_FRACTION = 0.5

CSV_NAMES = ("qdelay.csv", "flows.csv", "signals.csv", "fct.csv",
             "summary.csv")


def _make_config(cls, params: dict):
    try:
        return cls(**params)
    except TypeError:
        known = set(cls.__dataclass_fields__)
        bad = sorted(set(params) - known)
        raise ValueError(f"unknown AQM parameter(s): {', '.join(bad)}") from None


def build_aqm(scenario: Scenario, rng: Rng):
    """AQM instance plus its PI update interval (None when timerless)."""
    rate = scenario.link_mbps * 1e6
    params = dict(scenario.aqm_params)
    if scenario.aqm == "dualpi2":
        cfg = _make_config(DualPi2Config, params)
        return DualPi2(cfg, rate, rng), cfg.tupdate
    if scenario.aqm == "pi2":
        cfg = _make_config(Pi2SingleConfig, params)
        return Pi2Single(cfg, rate, rng), cfg.tupdate
    if scenario.aqm == "pie":
        cfg = _make_config(PieConfig, params)
        return Pie(cfg, rate, rng), cfg.tupdate
    if scenario.aqm == "taildrop":
        cfg = _make_config(TailDropConfig, params)
        return TailDrop(cfg, rate, rng), None
    raise ValueError(f"unknown aqm {scenario.aqm!r}")


class RunResult:
    def __init__(self, scenario: Scenario, store: MetricStore, net: Dumbbell,
                 long_flows: list, warmup_s: float):
        self.scenario = scenario
        self.store = store
        self.net = net
        self.long_flows = long_flows
        self.warmup_s = warmup_s


def run_scenario(scenario: Scenario, duration_s: float | None = None,
                 seed: int | None = None) -> RunResult:
    scenario.validate()
    if duration_s is not None:
        scenario.duration_s = duration_s
    if seed is not None:
        scenario.seed = seed
    duration = scenario.duration_s
    rate_bps = scenario.link_mbps * 1e6
    warmup = min(warmup_time(scenario.link_mbps, scenario.max_rtt_ms),
                 MAX_WARMUP_FRACTION * duration)
    rng = Rng(scenario.seed)

    aqm, tupdate = build_aqm(scenario, rng.substream("aqm"))
    store = MetricStore(rate_bps, warmup)
    net = Dumbbell(rate_bps, aqm, store, tupdate)

    long_flows = []
    for i, fs in enumerate(scenario.flows):
        if fs.kind == "udp":
            ecn = Ecn.ECT1 if fs.udp_ecn == "ect1" else Ecn.NOT_ECT
            UdpFlow(net, fs.udp_rate_fraction * rate_bps, ecn,
                    start_s=fs.start_s)
        else:
            flow = TcpFlow(net, fs.kind, fs.rtt_ms / 1e3,
                           size_bytes=fs.size_bytes, start_s=fs.start_s,
                           side=fs.side)
            if fs.size_bytes is None:
                long_flows.append((fs, flow))
    for i, ws in enumerate(scenario.web):
        sub = rng.substream(f"web:{i}")
        for t, size in gen_web_arrivals(ws.level, scenario.link_mbps, sub,
                                        duration):
            TcpFlow(net, ws.kind, ws.rtt_ms / 1e3, size_bytes=size,
                    start_s=t, side=ws.side)

    net.run(duration)
    return RunResult(scenario, store, net, long_flows, warmup)


# -- reduction -------------------------------------------------------------

def _stat_row(name: str, samples, scale: float = 1.0):
    if not samples:
        return (name, None, None, None, None)
    return (name, mean(samples) * scale, percentile(samples, 1) * scale,
            percentile(samples, 25) * scale, percentile(samples, 99) * scale)


def summarize(result: RunResult):
    """Headline metric rows for summary.csv: (metric, mean, p1, p25, p99)."""
    sc = result.scenario
    store = result.store
    duration = int(sc.duration_s)
    rate_bps = sc.link_mbps * 1e6
    rows = []

    for q, label in ((L_QUEUE, "l_sojourn_ms"), (C_QUEUE, "c_sojourn_ms")):
        rows.append(_stat_row(label, store.sojourns_after_warmup(q), 1e-6))

    rows.append(_stat_row("utilization", store.utilization_samples(duration)))

    n_long = len(result.long_flows)
    side_rates: dict[str, list[float]] = {"A": [], "B": []}
    side_windows: dict[str, list[float]] = {"A": [], "B": []}
    q_mean_s = {}
    for q in (L_QUEUE, C_QUEUE):
        s = store.sojourns_after_warmup(q)
        q_mean_s[q] = mean(s) / 1e9 if s else 0.0
    for fs, flow in result.long_flows:
        r = store.flow_rate_bytes_per_s(flow.fid, duration)
        q = L_QUEUE if fs.kind == "prague" and sc.aqm == "dualpi2" else C_QUEUE
        w = window_estimate(r, q_mean_s[q], fs.rtt_ms / 1e3)
        side_rates.setdefault(fs.side, []).append(r)
        side_windows.setdefault(fs.side, []).append(w)
    if n_long:
        fair = rate_bps / 8.0 / n_long
        for side in ("A", "B"):
            if side_rates[side]:
                rows.append(_stat_row(f"norm_rate_{side.lower()}",
                                      [r / fair for r in side_rates[side]]))
        if side_rates["A"] and side_rates["B"]:
            ratio = mean(side_rates["A"]) / mean(side_rates["B"])
            rows.append(("rate_ratio", ratio, None, None, None))
            wratio = mean(side_windows["A"]) / mean(side_windows["B"])
            rows.append(("window_ratio", wratio, None, None, None))

    for q, label in ((L_QUEUE, "l"), (C_QUEUE, "c")):
        sig = store.signal_probability(q)
        if sig is not None:
            rows.append((f"p_{label}_mark", sig[0], None, None, None))
            rows.append((f"p_{label}_drop", sig[1], None, None, None))

    sig_l = store.signal_probability(L_QUEUE)
    scal = [(fs, f) for fs, f in result.long_flows if fs.kind == "prague"]
    if sig_l is not None and scal:
        vs = []
        for fs, flow in scal:
            r_pkts = store.flow_rate_bytes_per_s(flow.fid, duration) / MTU
            f_rtt = rtt_independence_floor(fs.rtt_ms / 1e3)
            vs.append(r_pkts * f_rtt * sig_l[0])
        rows.append(("marks_per_round", mean(vs), None, None, None))

    rows.append(("overflow_drops", float(store.overflow_drops),
                 None, None, None))
    rows.append(("ecn_capable_drops", float(store.ecn_capable_drops),
                 None, None, None))
    return rows


# -- output tree -----------------------------------------------------------

def scenario_hash(scenario: Scenario) -> str:
    blob = json.dumps(scenario.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def write_outputs(result: RunResult, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start_wall = time.time()
    store = result.store
    result.scenario.dump(out / "scenario.json")
    store.write_qdelay_csv(out / "qdelay.csv")
    store.write_flows_csv(out / "flows.csv")
    store.write_signals_csv(out / "signals.csv")
    store.write_fct_csv(out / "fct.csv")
    rows = summarize(result)
    write_summary_csv(out / "summary.csv", result.scenario.key, rows)
    manifest = {
        "scenario_key": result.scenario.key,
        "scenario_hash": scenario_hash(result.scenario),
        "seed": result.scenario.seed,
        "version": __version__,
        "warmup_s": result.warmup_s,
        "wall_start": start_wall,
        "wall_end": time.time(),
        "outputs": ["scenario.json", *CSV_NAMES],
    }
    tmp = out / "manifest.json.tmp"
    with open(tmp, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    tmp.rename(out / "manifest.json")
    return manifest
