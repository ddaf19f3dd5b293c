"""Unit tests for the structured logger."""

import json

import pytest

from infrastructure.logging.structured_logger import LogLevel, StructuredLogger


class TestLogLevel:
    def test_from_name_is_case_insensitive(self):
        assert LogLevel.from_name("warning") is LogLevel.WARNING

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="Unknown log level"):
            LogLevel.from_name("chatty")

    def test_stdlib_level(self):
        assert LogLevel.ERROR.stdlib_level == 40


class TestStructuredLogger:
    """Console rendering and JSON lines in the log file."""

    def test_file_receives_json_lines(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        logger = StructuredLogger(log_file, enable_console=False)
        logger.log_calibration("working_point", {"t_n": 1.9792e-3, "a": 0.25})
        logger.close()

        entry = json.loads(log_file.read_text(encoding="utf-8").strip())
        assert entry["event"] == "calibration"
        assert entry["t_n"] == pytest.approx(1.9792e-3)
        assert entry["level"] == "info"

    def test_level_filters_messages(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = StructuredLogger(log_file, level=LogLevel.WARNING, enable_console=False)
        logger.info("hidden")
        logger.warning("shown")
        logger.close()

        lines = log_file.read_text(encoding="utf-8").splitlines()
        assert [json.loads(line)["event"] for line in lines] == ["shown"]

    def test_warnings_go_to_stderr(self, capsys):
        logger = StructuredLogger(level=LogLevel.DEBUG)
        logger.info("run_started")
        logger.log_error(ValueError("bad column"), context="analyze")
        captured = capsys.readouterr()
        assert "run_started" in captured.out
        assert "bad column" in captured.err

    def test_run_complete_rate(self, tmp_path):
        log_file = tmp_path / "run.log"
        logger = StructuredLogger(log_file, enable_console=False)
        logger.log_run_complete("run", records=100, duration=0.0)
        logger.close()
        assert json.loads(log_file.read_text(encoding="utf-8"))["records_per_second"] == 0
