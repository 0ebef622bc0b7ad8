import json

import pytest

from charmoments import calibration


def test_defaults_when_unset(monkeypatch):
    monkeypatch.delenv(calibration.ENV_VAR, raising=False)
    assert calibration.load() == calibration.Calibration()


def test_env_var_override(tmp_path, monkeypatch):
    p = tmp_path / "cal.json"
    p.write_text(json.dumps({"surrogate_slack": 2.5, "chain_slack": 1e-7}))
    monkeypatch.setenv(calibration.ENV_VAR, str(p))
    cal = calibration.load()
    assert cal.surrogate_slack == 2.5
    assert cal.chain_slack == 1e-7
    # untouched fields keep their defaults
    assert cal.series_rel_tol == calibration.Calibration().series_rel_tol


def test_explicit_path_beats_env(tmp_path, monkeypatch):
    env_file = tmp_path / "env.json"
    env_file.write_text(json.dumps({"cosine_slack": 99.0}))
    monkeypatch.setenv(calibration.ENV_VAR, str(env_file))
    direct = tmp_path / "direct.json"
    direct.write_text(json.dumps({"cosine_slack": 5.0}))
    assert calibration.load(str(direct)).cosine_slack == 5.0


def test_unknown_key_rejected(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"not_a_knob": 1.0}))
    with pytest.raises(ValueError, match="not_a_knob"):
        calibration.load(str(p))


def test_json_round_trip(tmp_path):
    cal = calibration.Calibration(lemma_ratio_max=6.0)
    p = tmp_path / "rt.json"
    p.write_text(cal.to_json())
    assert calibration.load(str(p)) == cal
