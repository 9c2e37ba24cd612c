"""Traffic scenarios: long-running flows, the heavy-tailed web model, and the
paper-style experiment grids. Scenarios are plain JSON-serializable records
so runs are replayable byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .core import Rng

LINK_RATES_MBPS = [4, 12, 40, 120, 200]
BASE_RTTS_MS = [5, 10, 20, 50, 100]
AQM_KINDS = ("dualpi2", "pie", "pi2", "taildrop")
FLOW_KINDS = ("prague", "cubic", "cubic_ecn", "reno", "reno_ecn", "udp")
OVERLOAD_UDP_FRACTIONS = [0.5, 0.7, 1.0, 1.4, 2.0]

PARETO_ALPHA = 0.9
PARETO_MIN_B = 1_000
PARETO_MAX_B = 1_000_000


@dataclass
class FlowSpec:
    kind: str                      # one of FLOW_KINDS
    side: str = "A"                # A = scalable/ECN side, B = classic side
    rtt_ms: float = 10.0
    start_s: float = 0.0
    size_bytes: int | None = None  # None = long-running
    udp_rate_fraction: float | None = None   # of link capacity
    udp_ecn: str = "notect"        # "ect1" or "notect"

    def validate(self) -> None:
        if self.kind not in FLOW_KINDS:
            raise ValueError(f"flow kind {self.kind!r} not one of {FLOW_KINDS}")
        if self.kind == "udp":
            if not self.udp_rate_fraction or self.udp_rate_fraction <= 0:
                raise ValueError("udp flow needs udp_rate_fraction > 0")
            if self.udp_ecn not in ("ect1", "notect"):
                raise ValueError(f"udp_ecn {self.udp_ecn!r} invalid")
        if self.rtt_ms <= 0:
            raise ValueError("rtt_ms must be positive")


@dataclass
class WebSpec:
    side: str = "A"
    level: str = "high"            # "low" or "high"
    kind: str = "prague"           # CC used for the short flows
    rtt_ms: float = 10.0

    def validate(self) -> None:
        if self.level not in ("low", "high"):
            raise ValueError(f"web level {self.level!r} invalid")
        if self.kind == "udp" or self.kind not in FLOW_KINDS:
            raise ValueError(f"web kind {self.kind!r} invalid")


@dataclass
class Scenario:
    key: str
    link_mbps: float
    aqm: str = "dualpi2"
    aqm_params: dict = field(default_factory=dict)
    flows: list = field(default_factory=list)
    web: list = field(default_factory=list)
    duration_s: float = 60.0
    seed: int = 1

    def validate(self) -> None:
        if self.link_mbps <= 0:
            raise ValueError("link_mbps must be positive")
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")
        if self.aqm not in AQM_KINDS:
            raise ValueError(f"aqm {self.aqm!r} not one of {AQM_KINDS}")
        if not self.flows and not self.web:
            raise ValueError("scenario has no traffic")
        for f in self.flows:
            f.validate()
        for w in self.web:
            w.validate()

    @property
    def max_rtt_ms(self) -> float:
        rtts = [f.rtt_ms for f in self.flows] + [w.rtt_ms for w in self.web]
        return max(rtts) if rtts else 10.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        d = dict(d)
        try:
            d["flows"] = [FlowSpec(**f) for f in d.get("flows", [])]
            d["web"] = [WebSpec(**w) for w in d.get("web", [])]
            sc = cls(**d)
        except TypeError as exc:
            raise ValueError(f"malformed scenario: {exc}") from None
        sc.validate()
        return sc

    def dump(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "Scenario":
        with open(path) as f:
            return cls.from_dict(json.load(f))


# -- web traffic model -----------------------------------------------------

def web_arrival_rate(level: str, link_mbps: float) -> float:
    """Requests per second: 1 (low) or 10 (high) per 4 Mb/s of capacity."""
    per_4mbps = 1.0 if level == "low" else 10.0
    return per_4mbps * link_mbps / 4.0


def pareto_size(u: float) -> int:
    """Truncated-Pareto item size via inverse CDF, capped at 1 MB.

    ``u`` is a uniform (0, 1] variate; u near 1 gives the minimum size.
    """
    size = PARETO_MIN_B * u ** (-1.0 / PARETO_ALPHA)
    return int(min(size, PARETO_MAX_B))


def gen_web_arrivals(level: str, link_mbps: float, rng: Rng,
                     duration_s: float):
    """Poisson request arrivals with truncated-Pareto sizes:
    list of (start_time_s, size_bytes)."""
    rate = web_arrival_rate(level, link_mbps)
    out = []
    t = rng.expovariate(rate)
    while t < duration_s:
        out.append((t, pareto_size(rng.uniform())))
        t += rng.expovariate(rate)
    return out


# -- experiment grids ------------------------------------------------------

GRID_KINDS = ("basic", "multiflow", "mixed_rtt", "dynamic", "overload")


def _pair_for_aqm(aqm: str, rtt_ms: float, a_kind: str = "prague",
                  b_kind: str = "cubic"):
    if aqm != "dualpi2":
        a_kind = "cubic_ecn"
    return [FlowSpec(kind=a_kind, side="A", rtt_ms=rtt_ms),
            FlowSpec(kind=b_kind, side="B", rtt_ms=rtt_ms)]


def _basic_scenarios(duration_s: float, seed: int):
    out = []
    for aqm in ("dualpi2", "pie", "pi2"):
        for rate in LINK_RATES_MBPS:
            for rtt in BASE_RTTS_MS:
                out.append(Scenario(
                    key=f"basic_{aqm}_r{rate}_rtt{rtt}",
                    link_mbps=rate, aqm=aqm,
                    flows=_pair_for_aqm(aqm, rtt),
                    duration_s=duration_s, seed=seed))
    return out


def _multiflow_scenarios(duration_s: float, seed: int):
    out = []
    for n_a in range(0, 11):
        for n_b in range(0, 11):
            if n_a == 0 and n_b == 0:
                continue
            flows = ([FlowSpec(kind="prague", side="A", rtt_ms=10)] * n_a
                     + [FlowSpec(kind="cubic", side="B", rtt_ms=10)] * n_b)
            out.append(Scenario(
                key=f"multiflow_dualpi2_a{n_a}_b{n_b}",
                link_mbps=40, aqm="dualpi2", flows=flows,
                duration_s=duration_s, seed=seed))
    return out


def _mixed_rtt_scenarios(duration_s: float, seed: int):
    out = []
    for rtt_a in (5, 100):
        for rtt_b in BASE_RTTS_MS:
            for b_kind in ("cubic", "reno", "prague"):
                out.append(Scenario(
                    key=f"mixedrtt_dualpi2_a{rtt_a}_b{rtt_b}_{b_kind}",
                    link_mbps=40, aqm="dualpi2",
                    flows=[FlowSpec(kind="prague", side="A", rtt_ms=rtt_a),
                           FlowSpec(kind=b_kind, side="B", rtt_ms=rtt_b)],
                    duration_s=duration_s, seed=seed))
    return out


def _dynamic_scenarios(duration_s: float, seed: int):
    out = []
    for base in _basic_scenarios(duration_s, seed):
        for level in ("low", "high"):
            sc = Scenario.from_dict(base.to_dict())
            rtt = sc.flows[0].rtt_ms
            sc.web = [WebSpec(side="A", level=level, kind=sc.flows[0].kind,
                              rtt_ms=rtt),
                      WebSpec(side="B", level=level, kind=sc.flows[1].kind,
                              rtt_ms=rtt)]
            sc.key = sc.key.replace("basic_", f"dynamic_{level}_")
            out.append(sc)
    return out


def _overload_scenarios(duration_s: float, seed: int):
    out = []
    for frac in OVERLOAD_UDP_FRACTIONS:
        for ecn in ("ect1", "notect"):
            flows = ([FlowSpec(kind="prague", side="A", rtt_ms=10)] * 5
                     + [FlowSpec(kind="cubic", side="B", rtt_ms=10)] * 5
                     + [FlowSpec(kind="udp", side="B", rtt_ms=10,
                                 udp_rate_fraction=frac, udp_ecn=ecn)])
            out.append(Scenario(
                key=f"overload_dualpi2_udp{int(frac * 100)}_{ecn}",
                link_mbps=100, aqm="dualpi2", flows=flows,
                duration_s=duration_s, seed=seed))
    return out


def build_scenario_grid(kind: str, duration_s: float = 60.0,
                        seed: int = 1):
    if kind == "basic":
        return _basic_scenarios(duration_s, seed)
    if kind == "multiflow":
        return _multiflow_scenarios(duration_s, seed)
    if kind == "mixed_rtt":
        return _mixed_rtt_scenarios(duration_s, seed)
    if kind == "dynamic":
        return _dynamic_scenarios(duration_s, seed)
    if kind == "overload":
        return _overload_scenarios(duration_s, seed)
    raise ValueError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}")
