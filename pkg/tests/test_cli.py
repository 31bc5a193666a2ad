from __future__ import annotations

import json
import subprocess
import sys

import pytest

from guandan.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, RunConfig, main
from guandan.errors import InvalidInput


def test_simulate_writes_logs(tmp_path, capsys):
    out = tmp_path / "sim"
    rc = main(["simulate", "--agents", "tom-vanilla,random,rule,reco", "--deals", "2", "--seed", "1", "--out", str(out)])
    assert rc == EXIT_OK
    text = capsys.readouterr().out
    assert text.startswith("deal 0: finish") and "total:" in text
    assert (out / "games.jsonl").exists() and (out / "decisions.jsonl").exists()


def test_evaluate_then_analyze(tmp_path, capsys):
    out = tmp_path / "ev"
    assert main(["evaluate", "--protocol", "swap", "--a", "rule", "--b", "random", "--games", "4", "--out", str(out), "--logs"]) == EXIT_OK
    assert "rule (combined)" in capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert len(report["games"]) == 4
    assert main(["analyze", str(out)]) == EXIT_OK
    assert (out / "action_lengths.csv").exists() and (out / "selected_index.csv").exists()


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"team_a": "reco", "team_b": "random", "games": 3, "base_seed": 5, "out": str(tmp_path / "x")}))
    assert main(["evaluate", "--config", str(cfg), "--games", "2"]) == EXIT_OK
    report = json.loads((tmp_path / "x" / "report.json").read_text())
    assert report["team_a"] == "reco" and len(report["games"]) == 2 and report["base_seed"] == 5


@pytest.mark.parametrize(
    "config",
    [
        {"surprise": 1},
        {"agents": ["random"] * 3},
        {"level_schedule": ["RJ"]},
        {"recommender": {"k": 0}},
        {"recommender": {"weights": {"bogus": 1}}},
        {"backend": {"base_urll": "x"}},
        {"locale": "fr"},
        [1, 2],
    ],
)
def test_bad_config_exits_2(tmp_path, config, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(config))
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_live_requires_base_url(tmp_path):
    assert main(["simulate", "--live", "--out", str(tmp_path)]) == EXIT_USAGE


def test_live_with_unreachable_server_falls_back(tmp_path, capsys):
    # backend errors never stop a game: the agent falls back to the recommender
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"backend": {"base_url": "http://127.0.0.1:9", "retries": 0, "timeout": 0.5}}))
    rc = main(["simulate", "--config", str(cfg), "--live", "--agents", "tom-vanilla,random,random,random", "--out", str(tmp_path / "o")])
    assert rc == EXIT_OK
    entry = json.loads((tmp_path / "o" / "decisions.jsonl").read_text().splitlines()[0])
    assert entry["fallback"] and "error" in entry


def test_bad_flag_value_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["evaluate", "--protocol", "roundrobin"])
    assert exc.value.code == EXIT_USAGE


def test_runtime_failure_exits_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    rc = main(["evaluate", "--a", "rule", "--b", "random", "--games", "1", "--out", str(blocker / "sub")])
    assert rc == EXIT_RUNTIME


def test_analyze_missing_path(capsys):
    assert main(["analyze", "/definitely/not/here"]) == EXIT_USAGE


@pytest.mark.parametrize("mode, headers", [("vanilla", 1), ("1st", 2), ("2nd", 3)])
def test_render_prompt(capsys, mode, headers):
    assert main(["render-prompt", "--mode", mode, "--locale", "en"]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.count("##### ") == headers
    assert "Legal action index 1: pass - no cards" in text


def test_render_prompt_bad_mode(capsys):
    assert main(["render-prompt", "--mode", "3rd"]) == EXIT_USAGE
    assert main(["render-prompt", "--fixture", "other"]) == EXIT_USAGE


def test_config_rejects_unknown_keys():
    with pytest.raises(InvalidInput):
        RunConfig.from_mapping({"nope": True})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "guandan", "render-prompt", "--mode", "vanilla"], capture_output=True, text=True)
    assert proc.returncode == 0 and "合法动作索引0" in proc.stdout
