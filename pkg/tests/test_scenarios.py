"""Scenario configs, runners, output files and the pslab CLI."""

import json
from pathlib import Path

import pytest
import yaml

from phasespace_lab import cli
from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import PhaseGrid, PhasePoint
from phasespace_lab.models.scenario import GridSpec, MaskSpec, ResultRow, Scenario, ScenarioConfig
from phasespace_lab.services import scenarios
from phasespace_lab.utils import serialization as io
from phasespace_lab.utils.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
SLOW_CONFIGS = {"interference_limit.yaml", "semicontinuity.yaml", "maximize.yaml"}


def _write(tmp_path: Path, payload: dict, name: str = "cfg.yaml") -> Path:
    path = tmp_path / name
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    return path


def _cfg(**kw) -> ScenarioConfig:
    return ScenarioConfig.model_validate(kw)


class TestValidate:
    def test_good_config(self, tmp_path):
        assert scenarios.validate(_write(tmp_path, {"scenario": "interference-limit", "p": 3})) == []

    def test_p_below_one(self, tmp_path):
        assert scenarios.validate(_write(tmp_path, {"scenario": "maximize", "p": 0.5})) == ["p: p must be ≥ 1"]

    def test_tau_sup_at_half(self, tmp_path):
        problems = scenarios.validate(_write(tmp_path, {"scenario": "tau-sup", "tau": 0.5}))
        assert len(problems) == 1
        assert "attained" in problems[0]

    def test_tau_sup_needs_tau(self, tmp_path):
        assert scenarios.validate(_write(tmp_path, {"scenario": "tau-sup"})) == ["tau is required for tau-sup"]

    def test_unknown_key(self, tmp_path):
        problems = scenarios.validate(_write(tmp_path, {"scenario": "linfty", "colour": "red"}))
        assert len(problems) == 1
        assert problems[0].startswith("colour:")

    def test_grid_size(self, tmp_path):
        problems = scenarios.validate(_write(tmp_path, {"scenario": "linfty", "grid": {"n": 100}}))
        assert problems == ["grid.n: n must be a power of two, got 100"]

    def test_every_violation_is_reported(self, tmp_path):
        payload = {"scenario": "maximize", "p": 0.5, "restarts": 0, "tau": 2.0}
        locs = {v.split(":")[0] for v in scenarios.validate(_write(tmp_path, payload))}
        assert locs == {"p", "restarts", "tau"}

    def test_unknown_scenario(self, tmp_path):
        problems = scenarios.validate(_write(tmp_path, {"scenario": "nope"}))
        assert problems and problems[0].startswith("scenario:")

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        assert scenarios.validate(path) == ["config must be a mapping of keys to values"]

    def test_missing_bitmap(self, tmp_path):
        missing = tmp_path / "none.pbm"
        payload = {"scenario": "maximize", "mask": {"shape": "bitmap", "path": str(missing)}}
        assert scenarios.validate(_write(tmp_path, payload)) == [f"mask.path: {missing} does not exist"]

    def test_bitmap_needs_a_path(self):
        with pytest.raises(ValueError, match="need a path"):
            MaskSpec(shape="bitmap")

    def test_json_config(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"scenario": "chain-graph", "trials": 5}))
        assert scenarios.load_config(path).trials == 5

    def test_load_raises_config_error(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            scenarios.load_config(_write(tmp_path, {"scenario": "bj-sup", "p": 0.1}))
        assert info.value.violations == ["p: p must be ≥ 1"]

    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.iterdir()), ids=lambda p: p.name)
    def test_shipped_configs_are_valid(self, path):
        assert scenarios.validate(path) == []


def test_list_scenarios():
    names = [name for name, _ in scenarios.list_scenarios()]
    assert names == [s.value for s in Scenario]
    assert len(names) == 9


class TestRunners:
    def test_linfty(self, tmp_path):
        cfg = _cfg(scenario="linfty", p=float("inf"), mask={"radius": 0.5, "center": (3.0, -2.0)})
        result = scenarios.run(cfg, tmp_path)
        assert result.passed
        assert result.rows[0].measured == pytest.approx(2.0, abs=1e-6)
        assert (tmp_path / "linfty.csv").exists()
        assert json.loads((tmp_path / "linfty.json").read_text())["passed"] is True

    def test_linfty_on_a_bitmap(self, tmp_path):
        pg = PhaseGrid.for_wigner(GridSpec().to_grid())
        bitmap = io.write_mask(DomainMask.disk(pg, 0.5, PhasePoint(x=3.0, xi=-2.0)).cropped(), tmp_path / "omega.pbm")
        cfg = _cfg(scenario="linfty", p=float("inf"), mask={"shape": "bitmap", "path": str(bitmap)})
        result = scenarios.run(cfg, tmp_path)
        assert result.passed
        assert result.rows[0].measured == pytest.approx(2.0, abs=1e-6)
        assert abs(result.extras["center_x"] - 3.0) <= 0.5

    def test_linfty_odd(self, tmp_path):
        result = scenarios.run(_cfg(scenario="linfty", p=float("inf"), odd=True), tmp_path)
        assert result.passed

    def test_tau_sup(self, tmp_path):
        result = scenarios.run(_cfg(scenario="tau-sup", tau=0.25), tmp_path)
        assert result.passed
        assert result.checks["closed_form"]
        assert all(row.measured < row.predicted for row in result.rows)

    def test_bj_sup(self, tmp_path):
        result = scenarios.run(_cfg(scenario="bj-sup", odd=True), tmp_path)
        assert result.passed
        assert all(row.predicted == pytest.approx(3.141592653589793) for row in result.rows)

    def test_chain_graph(self, tmp_path):
        result = scenarios.run(_cfg(scenario="chain-graph", trials=200, seed=3), tmp_path)
        assert result.passed
        assert result.extras["trials"] == 200
        assert result.extras["rejected"] + len(result.rows) == 200

    def test_chain_graph_symmetric(self, tmp_path):
        result = scenarios.run(_cfg(scenario="chain-graph", trials=100, tau=0.5), tmp_path)
        assert result.passed

    def test_covariance(self, tmp_path):
        result = scenarios.run(_cfg(scenario="covariance-check", trials=2, tau=0.3), tmp_path)
        assert result.passed, result.extras
        assert result.extras["tau"] == 0.3
        assert result.checks["tau_distinct_covariance"]

    def test_lieb(self, tmp_path):
        cfg = _cfg(scenario="lieb-check", grid={"n": 128, "dt": 0.125}, p_list=[1, 2, 4], trials=10)
        result = scenarios.run(cfg, tmp_path)
        assert result.passed
        assert [row.param for row in result.sorted_rows()] == [1.0, 2.0, 4.0]

    def test_maximize(self, tmp_path):
        cfg = _cfg(scenario="maximize", grid={"n": 128, "dt": 0.125}, restarts=2, max_iter=20)
        result = scenarios.run(cfg, tmp_path)
        assert result.checks["monotone_trace"]
        assert result.checks["dominates_gaussian"]
        assert result.checks["coarse_bound"]
        assert (tmp_path / "maximize.ascent.json").exists()
        assert (tmp_path / "maximize.ascent.signal.bin").exists()

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    def test_interference_limit(self, tmp_path, p):
        result = scenarios.run(_cfg(scenario="interference-limit", p=p, r_list=[2, 4]), tmp_path)
        assert result.passed, [row.defect for row in result.rows]
        assert result.grid["n_lags"] == 8192

    def test_frequency_direction_matches_time_on_a_centered_disk(self, tmp_path):
        base = {"scenario": "interference-limit", "p": 2, "r_list": [2, 4]}
        scenarios.run(_cfg(**base), tmp_path / "time")
        scenarios.run(_cfg(**base, direction="frequency"), tmp_path / "freq")
        name = "interference-limit.csv"
        assert (tmp_path / "time" / name).read_bytes() == (tmp_path / "freq" / name).read_bytes()

    def test_rotated_mask(self):
        spec = MaskSpec(shape="rectangle", x_range=(0.0, 2.0), xi_range=(-1.0, 3.0), center=(1.0, 0.5))
        rotated = spec.rotated()
        assert rotated.x_range == (-1.0, 3.0)
        assert rotated.xi_range == (-2.0, 0.0)
        assert rotated.center == (0.5, -1.0)


class TestMonotoneTail:
    @staticmethod
    def _rows(defects: dict[float, float]) -> list[ResultRow]:
        return [ResultRow(param=r, measured=0.0, predicted=0.0, defect=d) for r, d in defects.items()]

    def test_growth_under_the_floor_is_allowed(self):
        rows = self._rows({8.0: 1.62e-5, 16.0: 4.84e-5, 32.0: 2.07e-4})
        assert scenarios.monotone_tail(rows, 8.0, 2e-3)
        assert not scenarios.monotone_tail(rows, 8.0, 1e-4)

    def test_rows_below_the_start_are_ignored(self):
        rows = self._rows({2.0: 1e-3, 4.0: 0.5, 8.0: 0.2, 16.0: 0.1})
        assert scenarios.monotone_tail(rows, 8.0, 0.0)
        assert not scenarios.monotone_tail(rows, 2.0, 0.0)

    def test_order_of_rows_does_not_matter(self):
        rows = self._rows({32.0: 0.01, 8.0: 0.3, 16.0: 0.05})
        assert scenarios.monotone_tail(rows, 8.0, 0.0)


class TestDeterminism:
    def test_same_seed_same_bytes(self, tmp_path):
        cfg = _cfg(scenario="chain-graph", trials=100, seed=11)
        scenarios.run(cfg, tmp_path / "a")
        scenarios.run(cfg, tmp_path / "b")
        assert (tmp_path / "a" / "chain-graph.csv").read_bytes() == (tmp_path / "b" / "chain-graph.csv").read_bytes()

    def test_threads_do_not_change_the_output(self, tmp_path):
        cfg = _cfg(scenario="maximize", grid={"n": 128, "dt": 0.125}, restarts=3, max_iter=10)
        scenarios.run(cfg, tmp_path / "one", threads=1)
        scenarios.run(cfg, tmp_path / "two", threads=2)
        assert (tmp_path / "one" / "maximize.csv").read_bytes() == (tmp_path / "two" / "maximize.csv").read_bytes()

    def test_lieb_threads(self, tmp_path):
        cfg = _cfg(scenario="lieb-check", grid={"n": 64, "dt": 0.25}, trials=6)
        scenarios.run(cfg, tmp_path / "one", threads=1)
        scenarios.run(cfg, tmp_path / "two", threads=3)
        assert (tmp_path / "one" / "lieb-check.csv").read_bytes() == (tmp_path / "two" / "lieb-check.csv").read_bytes()


class TestCli:
    def test_run_passes(self, tmp_path, capsys):
        path = _write(tmp_path, {"scenario": "linfty", "p": float("inf")})
        assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == cli.EXIT_PASS
        assert "PASS" in capsys.readouterr().out
        assert (tmp_path / "out" / "linfty.csv").exists()

    def test_seed_override_is_echoed(self, tmp_path):
        path = _write(tmp_path, {"scenario": "chain-graph", "trials": 10})
        assert cli.main(["run", str(path), "--seed", "42", "--out", str(tmp_path)]) == cli.EXIT_PASS
        assert json.loads((tmp_path / "chain-graph.json").read_text())["config"]["seed"] == 42

    def test_tolerance_failure(self, tmp_path):
        path = _write(tmp_path, {"scenario": "tau-sup", "tau": 0.25, "tolerance": 1e-6})
        assert cli.main(["run", str(path), "--out", str(tmp_path)]) == cli.EXIT_TOLERANCE

    def test_invalid_config(self, tmp_path, capsys):
        path = _write(tmp_path, {"scenario": "maximize", "p": 0.5})
        assert cli.main(["run", str(path), "--out", str(tmp_path)]) == cli.EXIT_CONFIG
        assert "p must be ≥ 1" in capsys.readouterr().out
        assert not (tmp_path / "maximize.csv").exists()

    def test_missing_config(self, tmp_path):
        assert cli.main(["run", str(tmp_path / "absent.yaml")]) == cli.EXIT_CONFIG
        assert cli.main(["validate", str(tmp_path / "absent.yaml")]) == cli.EXIT_CONFIG

    def test_validate(self, tmp_path, capsys):
        assert cli.main(["validate", str(_write(tmp_path, {"scenario": "bj-sup"}))]) == cli.EXIT_PASS
        assert "config OK" in capsys.readouterr().out
        bad = _write(tmp_path, {"scenario": "bj-sup", "grid": {"n": 100}}, "bad.yaml")
        assert cli.main(["validate", str(bad)]) == cli.EXIT_CONFIG

    def test_bad_thread_count(self, tmp_path):
        path = _write(tmp_path, {"scenario": "linfty", "p": float("inf")})
        assert cli.main(["run", str(path), "--threads", "0", "--out", str(tmp_path)]) == cli.EXIT_CONFIG

    def test_list_scenarios(self, capsys):
        assert cli.main(["list-scenarios"]) == cli.EXIT_PASS
        out = capsys.readouterr().out
        assert all(s.value in out for s in Scenario)


@pytest.mark.parametrize(
    "name",
    [
        pytest.param(p.name, marks=pytest.mark.slow) if p.name in SLOW_CONFIGS else p.name
        for p in sorted(CONFIG_DIR.iterdir())
    ],
)
def test_shipped_config_passes(tmp_path, name):
    assert cli.main(["run", str(CONFIG_DIR / name), "--out", str(tmp_path)]) == cli.EXIT_PASS
