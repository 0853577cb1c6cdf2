"""Tests for the campaign statistics log."""
import json

from logs.logger import CAMPAIGN_LOG_DIR, get_campaign_logs, get_logger, log_campaign_summary


def test_campaign_summary_round_trip():
    path = log_campaign_summary("test_roundtrip", {"campaign_id": "test_roundtrip", "status": "SUCCESS"})
    assert path.startswith(str(CAMPAIGN_LOG_DIR))
    assert json.loads(open(path, encoding="utf-8").read())["status"] == "SUCCESS"
    assert "test_roundtrip" in get_campaign_logs(limit=100)


def test_logger_handlers_are_not_duplicated():
    first = get_logger("annealing.test_logger")
    second = get_logger("annealing.test_logger")
    assert first is second
    assert len(second.handlers) == 2
