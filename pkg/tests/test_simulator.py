from dataclasses import replace
from pathlib import Path


from gridtrust.config import load_bundled, load_config
from gridtrust.simulator import aggregate, generate_scenario, run_experiment, run_models

DATA = Path(__file__).parent / "data"


def test_same_seed_same_ledger(tmp_path):
    config = load_bundled()
    a, b = generate_scenario(config, 3), generate_scenario(config, 3)
    a.ledger.to_csv(tmp_path / "a.csv")
    b.ledger.to_csv(tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    other = generate_scenario(config, 4)
    assert list(other.ledger) != list(a.ledger)


def test_fifteen_entity_scale():
    scen = generate_scenario(load_bundled(), 1)
    assert (len(scen.topology.grids), len(scen.topology.domains), len(scen.topology)) == (2, 4, 15)
    assert len(scen.ledger) == 50 * 40


def test_zero_warmup_hits_defaults():
    config = load_bundled(overrides={"warmup_rounds": 0, "runs": 1})
    scen = generate_scenario(config, 1)
    assert len(scen.ledger) == 0
    report = run_models(scen, config)
    assert all(r.ts1 == r.ts2 == 1.5 for r in report.rows)
    assert report.flagged == frozenset()


def test_honest_scenario_models_agree():
    config = load_bundled(overrides={"runs": 5}).all_honest()
    reports, _ = run_experiment(config)
    for rep in reports:
        assert rep.flagged == frozenset()
        assert all(r.existing == r.proposed for r in rep.rows)


def test_inverter_scenario_flip_pattern():
    config = load_bundled(overrides={"runs": 3})
    reports, _ = run_experiment(config)
    for rep in reports:
        assert rep.flagged == {"E", "J"}
        row = next(r for r in rep.rows if (r.initiator, r.provider) == ("J", "M"))
        assert row.existing and not row.proposed
        assert rep.precision == rep.recall == 1.0


def test_ten_runs_plus_aggregate():
    reports, scenarios = run_experiment(load_bundled())
    assert [r.run for r in reports] == list(range(1, 11))
    assert len(scenarios) == 10
    agg = aggregate(reports)
    assert agg.runs == 10 and agg.flag_counts == {"E": 10, "J": 10}


def test_models_share_the_ledger_and_leave_it_untouched(tmp_path):
    config = load_bundled()
    scen = generate_scenario(config, 2)
    scen.ledger.to_csv(tmp_path / "before.csv")
    history = list(scen.ledger.reputation_history())
    run_models(scen, config)
    scen.ledger.to_csv(tmp_path / "after.csv")
    assert (tmp_path / "before.csv").read_bytes() == (tmp_path / "after.csv").read_bytes()
    assert list(scen.ledger.reputation_history()) == history


def test_random_schedule_is_seeded():
    config = load_config(DATA / "valid_small.yaml")
    config = replace(config, schedule=replace(config.schedule, evaluations=None, random_evaluations=6))
    a = generate_scenario(config, 1).evaluations
    assert a == generate_scenario(config, 1).evaluations
    assert len(a) == 6 and all(i != p for i, p in a)


def test_precision_recall_conventions():
    from gridtrust.simulator import RunReport

    assert RunReport(1, [], frozenset(), frozenset({"E"})).precision == 1.0
    assert RunReport(1, [], frozenset(), frozenset({"E"})).recall == 0.0
    rep = RunReport(1, [], frozenset({"E", "A"}), frozenset({"E", "J"}))
    assert (rep.precision, rep.recall) == (0.5, 0.5)
    assert RunReport(1, [], frozenset(), frozenset()).recall == 1.0
