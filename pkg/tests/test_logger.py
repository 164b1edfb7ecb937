import json
import logging
import sys

from app.logger import JSONFormatter, get_logger, setup_logging


def test_json_formatter():
    record = logging.LogRecord("app.solve", logging.INFO, __file__, 1, "solved %s", ("f^2",), None)
    entry = json.loads(JSONFormatter().format(record))
    assert entry["level"] == "INFO"
    assert entry["logger"] == "app.solve"
    assert entry["message"] == "solved f^2"
    assert "exception" not in entry


def test_json_formatter_exception():
    try:
        raise ValueError("bad node")
    except ValueError:
        record = logging.LogRecord("app.pwl", logging.ERROR, __file__, 1, "failed", (), sys.exc_info())
    entry = json.loads(JSONFormatter().format(record))
    assert "ValueError: bad node" in entry["exception"]


def test_file_handlers(tmp_path):
    try:
        setup_logging(log_level="INFO", json_format=True, log_dir=str(tmp_path))
        get_logger("app.test").error("written to both files")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "written to both files" in (tmp_path / "sharktower.log").read_text(encoding="utf-8")
        assert "written to both files" in (tmp_path / "sharktower_errors.log").read_text(encoding="utf-8")
    finally:
        setup_logging(log_dir="")
