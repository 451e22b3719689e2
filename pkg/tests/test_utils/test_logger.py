# tests/test_utils/test_logger.py
"""
Test logging setup
"""

import io
import logging
import warnings

import pytest

from hetvar.utils.logger import get_logger, setup_logging


@pytest.fixture
def restore_root():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(False)


class TestSetupLogging:
    """Test setup_logging"""

    def test_explicit_level_and_stream(self, restore_root):
        stream = io.StringIO()
        setup_logging("debug", stream=stream)
        get_logger("hetvar.test").debug("bound 1.5")
        assert logging.getLogger().level == logging.DEBUG
        assert "hetvar.test - DEBUG - bound 1.5" in stream.getvalue()

    def test_records_go_to_stderr(self, restore_root, capsys):
        setup_logging("INFO")
        get_logger("hetvar.test").info("fit finished")
        captured = capsys.readouterr()
        assert "fit finished" in captured.err
        assert "fit finished" not in captured.out

    def test_level_from_environment(self, restore_root, monkeypatch):
        monkeypatch.setenv("LOG_LEVEL", "WARNING")
        stream = io.StringIO()
        # an explicit empty level still forces the setup, reading LOG_LEVEL
        setup_logging("", stream=stream)
        get_logger("hetvar.test").info("hidden")
        get_logger("hetvar.test").warning("shown")
        assert "hidden" not in stream.getvalue()
        assert "shown" in stream.getvalue()

    def test_unknown_level_falls_back_to_info(self, restore_root):
        setup_logging("chatty", stream=io.StringIO())
        assert logging.getLogger().level == logging.INFO

    def test_runtime_warnings_are_logged(self, restore_root):
        stream = io.StringIO()
        setup_logging("WARNING", stream=stream)
        warnings.warn("overflow encountered in exp", RuntimeWarning)
        assert "overflow encountered in exp" in stream.getvalue()
