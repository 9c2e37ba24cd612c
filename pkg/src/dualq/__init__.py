"""Deterministic bottleneck-link simulator around a dual-queue coupled AQM,
with classic and scalable congestion-control models, baseline AQMs, workload
generators, analytic oracles, and a CLI experiment harness.
"""

__version__ = "0.1.0"
