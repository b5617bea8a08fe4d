from pathlib import Path

import pytest

from gridtrust.config import (
    BehaviorKind,
    BehaviorModel,
    apply_overrides,
    build_config,
    load_bundled,
    load_config,
    read_raw,
)
from gridtrust.engine import DecayMode, Stance
from gridtrust.errors import ConfigError

DATA = Path(__file__).parent / "data"


def violations(path, overrides=()):
    with pytest.raises(ConfigError) as exc:
        load_config(path, overrides)
    return [k for k, _ in exc.value.violations]


def test_bundled_table1_shape():
    config = load_bundled()
    topo = config.topology
    assert (len(topo.grids), len(topo.domains), len(topo)) == (2, 4, 15)
    assert config.malicious == {"E", "J"}
    assert config.runs == 10 and config.seed == 7
    assert config.schedule.evaluations[1] == ("C", "E")


@pytest.mark.parametrize(
    "name,key",
    [
        ("invalid_weight_sum", "weights.w_sum"),
        ("invalid_weight_order", "weights.w_order"),
        ("invalid_eta_xi", "thresholds.eta_xi"),
        ("invalid_unplaced_entity", "entity.unplaced"),
        ("invalid_negative_quarantine", "purge.quarantine_months"),
    ],
)
def test_canned_invalid_configs(name, key):
    assert key in violations(DATA / f"{name}.yaml")


def test_all_violations_reported_together():
    raw = read_raw(DATA / "valid_small.yaml")
    raw["parameters"].update(w1=0.1, eta=0.5, xi=1.0, quarantine_months=0)
    raw["entities"]["Zed"] = {"quality": 1.0}
    with pytest.raises(ConfigError) as exc:
        build_config(raw)
    keys = {k for k, _ in exc.value.violations}
    assert {"weights.w_sum", "weights.w_order", "thresholds.eta_xi", "purge.quarantine_months", "entity.unplaced"} <= keys


def test_unknown_keys_rejected():
    raw = read_raw(DATA / "valid_small.yaml")
    raw["parameters"]["gamma"] = 1
    raw["bogus"] = 1
    with pytest.raises(ConfigError) as exc:
        build_config(raw)
    assert [k for k, _ in exc.value.violations].count("parameters.unknown") == 1
    assert "config.unknown" in [k for k, _ in exc.value.violations]


def test_overrides_are_type_checked():
    raw = read_raw(DATA / "valid_small.yaml")
    config = build_config(apply_overrides(raw, ["eta=2.5", "stance=trusting", "decay_mode=literal", "runs=3", "warmup_rounds=4"]))
    assert config.engine.thresholds.eta == 2.5
    assert config.engine.thresholds.stance is Stance.TRUSTING
    assert config.engine.decay_mode is DecayMode.LITERAL
    assert config.runs == 3 and config.schedule.warmup_rounds == 4
    for bad in (["eta=high"], ["min_overlap=2.5"], ["stance=grumpy"], ["nope=1"], ["eta"]):
        with pytest.raises(ConfigError):
            apply_overrides(raw, bad)


def test_evaluation_referring_to_unplaced_entity():
    raw = read_raw(DATA / "valid_small.yaml")
    raw["schedule"]["evaluations"] = ["A->Q"]
    with pytest.raises(ConfigError) as exc:
        build_config(raw)
    assert any("'Q'" in msg for _, msg in exc.value.violations)


def test_behavior_models():
    import numpy as np

    rng = np.random.default_rng(0)
    assert BehaviorModel(BehaviorKind.INVERTER).rate(0.5, rng, 3.0) == 2.5
    assert BehaviorModel(BehaviorKind.HONEST, noise_sigma=0.0).rate(0.5, rng, 3.0) == 0.5
    for _ in range(200):
        assert 0.0 <= BehaviorModel(BehaviorKind.HONEST, noise_sigma=5.0).rate(2.9, rng, 3.0) <= 3.0
        assert 0.0 <= BehaviorModel(BehaviorKind.RANDOM_LIAR).rate(2.9, rng, 3.0) <= 3.0


def test_bad_provider_switch():
    config = load_bundled()
    assert config.effective_quality()["E"] == config.bad_provider_quality
    plain = load_bundled(overrides={"malicious_bad_providers": "false"})
    assert plain.effective_quality()["E"] == 0.6


def test_all_honest_copy():
    honest = load_bundled().all_honest()
    assert honest.malicious == frozenset()
    assert honest.behaviors["E"].seed == load_bundled().behaviors["E"].seed
