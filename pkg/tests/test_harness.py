import csv
import json

import pytest

from dcm_giant.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    derive_trial_seed,
    read_experiment_config,
    run_experiment,
    run_trial,
    write_records_csv,
)


def measurements(records):
    """Record fields minus the wall-time columns, which vary run to run."""
    def denan(x):
        return None if x != x else x

    return [
        (r.n, r.trial, r.seed, r.v_giant, r.e_giant, r.v_ratio, r.e_ratio,
         denan(r.core_ratio), denan(r.core_edge_ratio), r.second_order,
         r.cycles_total)
        for r in records
    ]


def small_config(**kw):
    base = dict(
        family={"family": "poisson", "nu": 2.0},
        n_list=[100, 200],
        trials=3,
        master_seed=42,
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_seed_determinism_and_distinctness():
    assert derive_trial_seed(5, 100, 0) == derive_trial_seed(5, 100, 0)
    assert derive_trial_seed(5, 100, 0) != derive_trial_seed(5, 100, 1)
    assert derive_trial_seed(5, 100, 0) != derive_trial_seed(5, 200, 0)
    assert derive_trial_seed(5, 100, 0) != derive_trial_seed(6, 100, 0)
    assert 0 <= derive_trial_seed(2**64 - 1, 10**9, 10**6) < 2**64


def test_seed_collision_scan():
    # 10^6 grid points, no collisions
    seeds = set()
    for n in (10**3, 10**4, 10**5, 10**6):
        for trial in range(250_000):
            seeds.add(derive_trial_seed(123, n, trial))
    assert len(seeds) == 10**6


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(trials=0)
    with pytest.raises(ValueError):
        small_config(n_list=[200, 100])
    with pytest.raises(ValueError):
        small_config(n_list=[])
    with pytest.raises(ValueError):
        small_config(mode="loopy")
    with pytest.raises(ValueError):
        small_config(master_seed=2**64)


def test_trial_record_fields():
    config = small_config()
    r = run_trial(config, 100, 0)
    assert r.n == 100 and r.trial == 0
    assert r.seed == derive_trial_seed(42, 100, 0)
    assert 0.0 <= r.v_ratio <= 1.0
    assert r.v_giant >= 1 and r.e_giant >= 0
    assert r.cycles_total == -1  # census off by default
    assert r.core_ratio != r.core_ratio  # nan: core off by default


def test_trial_modes():
    simple = run_trial(small_config(mode="simple"), 100, 0)
    assert 0.0 <= simple.v_ratio <= 1.0
    binom = run_trial(small_config(mode="binomial"), 100, 0)
    assert 0.0 <= binom.v_ratio <= 1.0


def test_trial_optional_measurements():
    r = run_trial(small_config(omega="auto", cycles=True), 100, 0)
    assert 0.0 <= r.core_ratio <= 1.0
    assert r.cycles_total >= 0


def test_run_experiment_shape_and_reproducibility():
    config = small_config()
    summary, records = run_experiment(config)
    assert len(records) == len(config.n_list) * config.trials
    assert [(r.n, r.trial) for r in records] == [
        (n, t) for n in config.n_list for t in range(config.trials)
    ]
    # bit-identical rerun
    _, records2 = run_experiment(small_config())
    assert measurements(records) == measurements(records2)
    assert summary["theoretical"]["regime"] == "supercritical"
    assert summary["theoretical"]["eta"] == pytest.approx(0.63490957, abs=1e-6)
    for n in config.n_list:
        stats = summary["per_n"][n]
        assert stats["trials"] == config.trials
        assert 0.0 <= stats["v_ratio_mean"] <= 1.0
        assert stats["v_ratio_second_moment"] >= stats["v_ratio_mean"] ** 2 - 1e-12


def test_workers_match_serial():
    _, serial = run_experiment(small_config())
    _, parallel = run_experiment(small_config(workers=2))
    assert measurements(serial) == measurements(parallel)


def test_csv_and_json_outputs(tmp_path):
    csv_path = tmp_path / "records.csv"
    json_path = tmp_path / "summary.json"
    config = small_config(out_csv=str(csv_path), out_json=str(json_path))
    _, records = run_experiment(config)

    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 1 + len(records)
    assert int(rows[1][0]) == records[0].n

    payload = json.loads(json_path.read_text())
    assert "theoretical" in payload and "per_n" in payload


def test_write_records_csv_roundtrip(tmp_path):
    _, records = run_experiment(small_config(trials=1, n_list=[100]))
    path = tmp_path / "r.csv"
    write_records_csv(records, path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        row = next(reader)
    assert int(row["v_giant"]) == records[0].v_giant
    assert int(row["seed"]) == records[0].seed


def test_config_file_parsing(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        "# sample experiment\n"
        "family = poisson\n"
        "nu = 2.0\n"
        "n_list = 100,200\n"
        "trials = 2\n"
        "seed = 7\n"
        "mode = multigraph\n"
        "omega = auto\n"
        "cycles = 1\n"
        "workers = 1\n"
    )
    config = read_experiment_config(path)
    assert config.family == {"family": "poisson", "nu": 2.0}
    assert config.n_list == [100, 200]
    assert config.trials == 2 and config.master_seed == 7
    assert config.omega == "auto" and config.cycles

    # overrides win
    config = read_experiment_config(path, seed="9", out_csv="x.csv")
    assert config.master_seed == 9 and config.out_csv == "x.csv"


def test_config_file_regular_family(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("family = regular\nd = 3\nn_list = 50\n")
    config = read_experiment_config(path)
    assert config.family == {"family": "regular", "d": 3}
    assert config.omega is None

    path.write_text("family = weird\nn_list = 50\n")
    with pytest.raises(ValueError):
        read_experiment_config(path)
