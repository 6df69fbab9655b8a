import pytest
import yaml

from kstandard.scripts.cache_manager import CacheManager, compute_sha256
from kstandard.scripts.config_yaml import DEFAULT_CONFIG_PATH, ConfigYAML, RunConfig, load_run_config
from kstandard.scripts.logger import Logger


def write_config(tmp_path, run_settings, constants=None):
    path = tmp_path / "config.yaml"
    data = {
        "constants": constants or {"schema_version": "kstandard/1", "default_prime": 32003, "log_level": "INFO"},
        "run_settings": run_settings,
    }
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


def test_shipped_config_is_valid():
    cfg = ConfigYAML(DEFAULT_CONFIG_PATH).run_config()
    assert (cfg.r, cfg.N, cfg.prime) == (1, 2, 32003)
    assert cfg.window == (-2, 2)
    assert "restriction" in cfg.suites


def test_defaults_without_a_file():
    assert load_run_config(None) == RunConfig()


def test_flags_override_yaml(tmp_path):
    cfg = load_run_config(write_config(tmp_path, {"r": 2, "N": 3, "window": [0, 1]}))
    assert (cfg.r, cfg.N, cfg.window) == (2, 3, (0, 1))
    cfg = cfg.with_overrides(window=[1, 2], seed=None, prime=5)
    assert cfg.window == (1, 2) and cfg.seed == 0 and cfg.prime == 5


@pytest.mark.parametrize("settings,message", [
    ({"N": 2, "window": [0, 1]}, "Missing required parameter 'r'"),
    ({"r": 1, "N": 2, "window": [0, 1], "colour": "red"}, "unknown run_settings keys"),
    ({"r": 1, "N": 2, "window": [0, 1], "suites": ["nope"]}, "unknown suites"),
    ({"r": 1, "N": 2, "window": [0, 1, 2]}, "two integers"),
    ({"r": 3, "N": 2, "window": [0, 1]}, "need 1 ≤ r ≤ N"),
    ({"r": 1, "N": 2, "window": [2, 1]}, "lo ≤ hi"),
    ({"r": 1, "N": 2, "window": [0, 1], "prime": 12}, "must be a prime"),
    ({"r": 1, "N": 2, "window": [0, 1], "samples": "many"}, "must be int"),
])
def test_invalid_run_settings(tmp_path, settings, message):
    with pytest.raises(ValueError, match=message):
        load_run_config(write_config(tmp_path, settings))


def test_missing_constant(tmp_path):
    path = write_config(tmp_path, {"r": 1, "N": 2, "window": [0, 1]}, {"schema_version": "kstandard/1"})
    with pytest.raises(ValueError, match="default_prime"):
        load_run_config(path)


def test_cache_round_trip_and_schema_guard(tmp_path):
    cache = CacheManager(str(tmp_path), "kstandard/1")
    key = cache.key("report", {"r": 1}, "check", {"suite": "end"})
    assert key == compute_sha256({"schema": "kstandard/1", "kind": "report", "params": {"r": 1},
                                  "operation": "check", "input": {"suite": "end"}})
    assert cache.load("report", key) is None
    cache.store("report", key, {"verdict": "pass"})
    assert cache.load("report", key) == {"verdict": "pass"}
    assert CacheManager(str(tmp_path), "kstandard/2").load("report", key) is None
    assert cache.clear() == 1


def test_disabled_cache():
    cache = CacheManager(None, "kstandard/1")
    assert not cache.enabled
    assert cache.store("hom", "k", {}) is None


def test_logger_writes_json_lines(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    logger = Logger(str(log_file), "INFO")
    logger.info("window checked")
    for handler in logger.logger.root.handlers:
        handler.flush()
    assert '"message": "window checked"' in log_file.read_text(encoding="utf-8")


def test_logger_rejects_unknown_level():
    with pytest.raises(ValueError, match="unknown log level"):
        Logger(None, "LOUD")
