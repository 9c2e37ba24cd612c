"""Command-line harness: subcommands, output tree, error handling."""

import csv
import json
from pathlib import Path

import pytest

from dualq import cli
from dualq.runner import CSV_NAMES
from dualq.workload import FlowSpec, Scenario


@pytest.fixture
def scenario_file(tmp_path):
    sc = Scenario(key="cli_t", link_mbps=12, duration_s=6.0,
                  flows=[FlowSpec(kind="prague", rtt_ms=10),
                         FlowSpec(kind="cubic", side="B", rtt_ms=10)])
    path = tmp_path / "sc.json"
    sc.dump(path)
    return path


class TestRun:
    def test_writes_output_tree(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "out"
        rc = cli.main(["run", "--scenario", str(scenario_file),
                       "--out", str(out)])
        assert rc == 0
        for name in ("manifest.json", "scenario.json", *CSV_NAMES):
            assert (out / name).exists(), name
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["scenario_key"] == "cli_t"
        assert manifest["seed"] == 1
        captured = capsys.readouterr()
        assert "utilization" in captured.out

    def test_summary_csv_schema(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        cli.main(["run", "--scenario", str(scenario_file), "--out", str(out)])
        with open(out / "summary.csv") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["scenario", "metric", "mean", "p1", "p25", "p99"]
        metrics = {r[1] for r in rows[1:]}
        assert {"l_sojourn_ms", "c_sojourn_ms", "utilization",
                "rate_ratio"} <= metrics

    def test_duration_and_seed_overrides(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        rc = cli.main(["run", "--scenario", str(scenario_file),
                       "--duration", "4", "--seed", "9", "--out", str(out)])
        assert rc == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 9
        sc = json.loads((out / "scenario.json").read_text())
        assert sc["duration_s"] == 4

    def test_missing_file_fails_cleanly(self, tmp_path, capsys):
        rc = cli.main(["run", "--scenario", str(tmp_path / "nope.json"),
                       "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_malformed_scenario_fails_cleanly(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"key": "x", "link_mbps": 12,
                                   "flows": [{"kind": "warp"}]}))
        rc = cli.main(["run", "--scenario", str(bad),
                       "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "error" in capsys.readouterr().err


class TestGrid:
    def test_runs_grid_and_merges_summaries(self, tmp_path, monkeypatch):
        small = [
            Scenario(key="g_a", link_mbps=12, duration_s=4.0,
                     flows=[FlowSpec(kind="prague", rtt_ms=10)]),
            Scenario(key="g_b", link_mbps=12, duration_s=4.0,
                     flows=[FlowSpec(kind="cubic", side="B", rtt_ms=10)]),
        ]
        monkeypatch.setattr(cli, "build_scenario_grid",
                            lambda kind, duration, seed: small)
        out = tmp_path / "out"
        rc = cli.main(["grid", "--kind", "basic", "--duration", "4",
                       "--out", str(out)])
        assert rc == 0
        for sc in small:
            assert (out / "basic" / sc.key / "summary.csv").exists()
        with open(out / "basic" / "summary.csv") as f:
            rows = list(csv.reader(f))
        scenarios = {r[0] for r in rows[1:]}
        assert scenarios == {"g_a", "g_b"}


class TestAnalyze:
    def test_coupling_values(self, capsys):
        assert cli.main(["analyze", "coupling", "--beta-c", "0.5"]) == 0
        assert capsys.readouterr().out.strip() == "1.96"
        assert cli.main(["analyze", "coupling", "--beta-c", "0.7"]) == 0
        assert capsys.readouterr().out.strip() == "2.22"

    def test_rate_ratio(self, capsys):
        rc = cli.main(["analyze", "rate-ratio", "--rtt-l", "25",
                       "--rtt-c", "25"])
        assert rc == 0
        assert float(capsys.readouterr().out) == pytest.approx(1.1105,
                                                               abs=1e-3)


class TestListScenarios:
    def test_lists_grid_keys(self, capsys):
        rc = cli.main(["list-scenarios", "--kind", "overload"])
        assert rc == 0
        keys = capsys.readouterr().out.split()
        assert len(keys) == 10
        assert "overload_dualpi2_udp200_ect1" in keys
