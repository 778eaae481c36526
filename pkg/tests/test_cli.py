"""CLI: exit codes, output files, reproducibility, scenario parsing."""
import json
from pathlib import Path

import pytest

from discordlab.cli import main
from discordlab.scenario_io import ScenarioFormatError, parse_scenario
from discordlab.dynamics import DisdScenario, MarkovianScenario

REPO = Path(__file__).resolve().parents[1]
MARKOV_SCENARIO = REPO / "sample_scenarios" / "damped_qubit.json"
DISD_SCENARIO = REPO / "sample_scenarios" / "dominant_coupling.json"


def read_tree(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


class TestExitCodes:
    def test_saturation_demo_passes(self, tmp_path):
        assert main(["run", "--demo", "saturation", "--out", str(tmp_path)]) == 0

    def test_teleportation_demo_passes(self, tmp_path):
        assert main(["run", "--demo", "teleportation", "--out", str(tmp_path)]) == 0

    def test_malformed_json_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  broken\n}")
        code = main(["run", "--scenario", str(bad), "--out", str(tmp_path)])
        assert code == 2
        err = capsys.readouterr().err
        assert "line" in err and "column" in err

    def test_unknown_demo(self, tmp_path):
        assert main(["run", "--demo", "nope", "--out", str(tmp_path)]) == 2

    def test_unknown_flag(self, capsys):
        assert main(["run", "--nope"]) == 2

    def test_missing_target(self, tmp_path):
        assert main(["run", "--out", str(tmp_path)]) == 2

    def test_both_targets(self, tmp_path):
        assert main(["run", "--demo", "saturation",
                     "--scenario", str(MARKOV_SCENARIO),
                     "--out", str(tmp_path)]) == 2

    def test_unknown_tolerance(self, tmp_path):
        assert main(["run", "--demo", "saturation", "--out", str(tmp_path),
                     "--tol", "nope=1"]) == 2

    def test_failing_tolerance_gives_one(self, tmp_path):
        # impossible tolerance forces a verdict failure, not a usage error
        code = main(["run", "--demo", "saturation", "--out", str(tmp_path),
                     "--tol", "discord_match=1e-18"])
        assert code == 1


class TestListDemos:
    def test_lists_all(self, capsys):
        assert main(["list-demos"]) == 0
        out = capsys.readouterr().out
        for name in ("saturation", "teleportation", "lemma2",
                     "markovian-classicality", "disd", "cc-state"):
            assert name in out

    def test_json_listing(self, capsys):
        assert main(["list-demos", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        names = [d["name"] for d in payload["demos"]]
        assert "disd" in names and len(names) == 6


class TestOutputs:
    def test_verdict_and_attachments_written(self, tmp_path):
        main(["run", "--demo", "markovian-classicality", "--grid", "20",
              "--out", str(tmp_path), "--seed", "5"])
        run_dir = tmp_path / "markovian-classicality"
        verdict = json.loads((run_dir / "verdict.json").read_text())
        assert verdict["scenario"] == "markovian-classicality"
        assert verdict["seed"] == 5
        assert verdict["passed"] is True
        csv_text = (run_dir / "timeseries.csv").read_text()
        assert csv_text.startswith("t,S_S,S_Sp,S_E,I,")
        assert len(csv_text.splitlines()) == 21
        dat = (run_dir / "timeseries_D_left.dat").read_text()
        assert len(dat.splitlines()) == 20
        assert len(dat.splitlines()[0].split()) == 2

    def test_structure_table_files_written(self, tmp_path):
        main(["run", "--demo", "teleportation", "--out", str(tmp_path)])
        run_dir = tmp_path / "teleportation"
        table = (run_dir / "structures.csv").read_text()
        assert table.startswith("label,")
        payload = json.loads((run_dir / "structures.json").read_text())
        assert len(payload["rows"]) == 2

    def test_tol_override_recorded(self, tmp_path):
        main(["run", "--demo", "saturation", "--out", str(tmp_path),
              "--tol", "discord_match=1e-3"])
        verdict = json.loads(
            (tmp_path / "saturation" / "verdict.json").read_text())
        assert verdict["tolerance_overrides"] == {"discord_match": 1e-3}

    def test_json_flag_prints_verdict(self, tmp_path, capsys):
        main(["run", "--demo", "lemma2", "--out", str(tmp_path), "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["scenario"] == "lemma2"

    def test_bits_flag_display_only(self, tmp_path, capsys):
        main(["run", "--demo", "lemma2", "--out", str(tmp_path), "--bits"])
        out = capsys.readouterr().out
        assert "bits" in out
        # files stay in nats: verdict value matches the nats number
        verdict = json.loads((tmp_path / "lemma2" / "verdict.json").read_text())
        cap = [c for c in verdict["checks"] if c["name"] == "entropy_below_cap"][0]
        assert cap["value"] == pytest.approx(0.2233959221789686, abs=1e-12)


class TestReproducibility:
    def test_same_seed_byte_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        for out in (out_a, out_b):
            main(["run", "--demo", "markovian-classicality", "--grid", "15",
                  "--out", str(out), "--seed", "123"])
            main(["run", "--demo", "teleportation", "--out", str(out),
                  "--seed", "123"])
        assert read_tree(out_a) == read_tree(out_b)

    def test_env_seed_fallback(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("DISCORDLAB_SEED", "777")
        main(["run", "--demo", "lemma2", "--out", str(tmp_path), "--json"])
        payload = json.loads(capsys.readouterr().out)
        assert payload["seed"] == 777

    def test_bad_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DISCORDLAB_SEED", "not-a-number")
        assert main(["run", "--demo", "lemma2", "--out", str(tmp_path)]) == 2


class TestScenarioFiles:
    def test_markovian_scenario_runs(self, tmp_path):
        code = main(["run", "--scenario", str(MARKOV_SCENARIO),
                     "--out", str(tmp_path), "--grid", "15"])
        assert code == 0
        run_dir = tmp_path / "scenario-damped_qubit"
        assert (run_dir / "verdict.json").exists()
        assert (run_dir / "timeseries.csv").exists()

    def test_disd_scenario_parses(self):
        document = json.loads(DISD_SCENARIO.read_text())
        scenario = parse_scenario(document)
        assert isinstance(scenario, DisdScenario)
        assert scenario.coupling_ratio == pytest.approx(0.02)
        assert len(scenario.t_grid) == 120

    def test_markovian_scenario_parses(self):
        document = json.loads(MARKOV_SCENARIO.read_text())
        scenario = parse_scenario(document)
        assert isinstance(scenario, MarkovianScenario)
        assert scenario.seed == 20240811
        assert scenario.lindblad.max_rate() == pytest.approx(0.35)

    def test_grid_override_from_cli(self):
        document = json.loads(DISD_SCENARIO.read_text())
        scenario = parse_scenario(document, grid_override=37)
        assert len(scenario.t_grid) == 37

    def test_file_grid_respected_without_override(self):
        document = json.loads(MARKOV_SCENARIO.read_text())
        scenario = parse_scenario(document)
        assert len(scenario.t_grid) == 150

    def test_unknown_kind_rejected(self):
        with pytest.raises(ScenarioFormatError):
            parse_scenario({"kind": "nope"})

    def test_unknown_operator_rejected(self):
        document = json.loads(MARKOV_SCENARIO.read_text())
        document["open_system"]["jumps"][0]["operator"] = "sigma_q"
        with pytest.raises(ScenarioFormatError):
            parse_scenario(document)

    def test_dimension_mismatch_rejected(self):
        document = json.loads(MARKOV_SCENARIO.read_text())
        document["system"]["initial"] = {"diag": [0.5, 0.25, 0.25]}
        with pytest.raises(ScenarioFormatError):
            parse_scenario(document)
