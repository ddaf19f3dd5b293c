"""Command-line runs against small configs written to a temporary directory."""

import csv
import json

import pytest

from presentation.cli.main import EXIT_CONFIG, EXIT_OK, CLIApplication

pytestmark = pytest.mark.slow


def write_config(tmp_path, extra: str = "") -> str:
    frontmatter = f"""thermal:
  amplitude: 0.0
  dT_total: 0.0
  discard: 0.5
  baseline_window: 0.5
scenario:
  name: cli
  segments:
    - [1.0, 0.0]
    - [1.0, 30.0]
    - [1.0, -30.0]
simulation:
  shot_noise: false
infrastructure:
  output_dir: {tmp_path / "out"}
  logs_dir: {tmp_path / "logs"}
{extra}"""
    path = tmp_path / "config.md"
    path.write_text(f"---\n{frontmatter}\n---\n", encoding="utf-8")
    return str(path)


def read_rows(path):
    with open(path, encoding="utf-8") as handle:
        return list(csv.reader(handle))


async def run_cli(*args) -> int:
    return await CLIApplication().run(list(args))


class TestExitCodes:
    @pytest.mark.asyncio
    async def test_missing_config(self, tmp_path):
        assert await run_cli("odmr", "--config", str(tmp_path / "absent.md")) == EXIT_CONFIG

    @pytest.mark.asyncio
    async def test_unknown_setting(self, tmp_path, capsys):
        config = write_config(tmp_path, "protocol:\n  n_iters: 3")
        assert await run_cli("odmr", "--config", config) == EXIT_CONFIG
        assert "protocol.n_iters" in capsys.readouterr().err

    @pytest.mark.asyncio
    async def test_bad_flag_value(self, tmp_path):
        config = write_config(tmp_path)
        assert await run_cli("ramsey", "--config", config, "--points", "3") == EXIT_CONFIG


class TestCommands:
    """Each command writes its CSV under the output directory."""

    @pytest.mark.asyncio
    async def test_odmr(self, tmp_path):
        config = write_config(tmp_path)
        assert await run_cli("odmr", "--config", config) == EXIT_OK
        rows = read_rows(tmp_path / "out" / "odmr.csv")
        assert rows[0] == ["label", "m_s_pair", "m_i", "freq_hz"]
        labels = [row[0] for row in rows[1:]]
        assert "mw-1:mi+0" in labels
        assert (tmp_path / "logs" / "nv-gyro.log").exists()

    @pytest.mark.asyncio
    async def test_out_flag_overrides_output_dir(self, tmp_path):
        config = write_config(tmp_path)
        assert await run_cli("odmr", "--config", config, "--out", str(tmp_path / "elsewhere")) == EXIT_OK
        assert (tmp_path / "elsewhere" / "odmr.csv").exists()

    @pytest.mark.asyncio
    async def test_polarize(self, tmp_path):
        config = write_config(tmp_path)
        assert await run_cli("polarize", "--config", config) == EXIT_OK
        rows = read_rows(tmp_path / "out" / "polarize.csv")[1:]
        assert len(rows) == 5
        assert float(rows[0][1]) == pytest.approx(1.0 / 3.0)
        assert float(rows[-1][1]) == pytest.approx(0.7699, abs=1e-3)
        assert float(rows[-1][1]) == pytest.approx(float(rows[-1][2]), abs=1e-9)

    @pytest.mark.asyncio
    async def test_ramsey(self, tmp_path):
        config = write_config(tmp_path)
        assert await run_cli("ramsey", "--config", config, "--tau-max", "2e-3", "--points", "200") == EXIT_OK
        rows = read_rows(tmp_path / "out" / "ramsey.csv")
        assert rows[0] == ["tau_s", "signal"]
        assert len(rows) == 201

    @pytest.mark.asyncio
    async def test_run_then_analyze(self, tmp_path):
        """A noise-free scenario calibrates to unit slope and feeds the analysis command."""
        config = write_config(tmp_path)
        assert await run_cli("run", "--config", config) == EXIT_OK

        out = tmp_path / "out"
        rows = read_rows(out / "scenario.csv")
        assert rows[0][:3] == ["t_s", "omega_true_dps", "omega_nv_dps"]
        calibration = json.loads((out / "scenario.calibration.json").read_text(encoding="utf-8"))
        assert calibration["true"]["slope"] == pytest.approx(1.0, rel=0.02)

        assert await run_cli("analyze", "--config", config, "--input", str(out / "scenario.csv")) == EXIT_OK
        assert read_rows(out / "asd.csv")[0] == ["freq_hz", "asd"]
        assert read_rows(out / "allan.csv")[0] == ["tau_s", "adev"]

    @pytest.mark.asyncio
    async def test_analyze_unknown_column(self, tmp_path):
        config = write_config(tmp_path)
        data = tmp_path / "series.csv"
        data.write_text("t_s,x\n" + "".join(f"{k * 0.01},{k % 3}\n" for k in range(300)), encoding="utf-8")
        assert await run_cli("analyze", "--config", config, "--input", str(data), "--column", "y") == EXIT_CONFIG
