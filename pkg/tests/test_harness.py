import dataclasses
import json

import numpy as np
import pytest

import winselect.harness as harness
from winselect import (
    DetectorSpec,
    ExperimentConfig,
    Scenario,
    calibrate_threshold,
    emit,
    estimate_pd,
    load_config,
    run_case,
    run_table2,
)
from winselect.cli import main as cli_main
from winselect.harness import decision_trace, load_result_json, read_csv_rows


def small_cfg(**kwargs):
    defaults = dict(preset="case1", jnr_grid_db=(0.0, 20.0), trials=2000, pfa=0.1,
                    seed=7, policies=("fixed:rectangle", "proposed_simple"))
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


# ---------------------------------------------------------------------------
# config


def test_config_validation():
    with pytest.raises(ValueError):
        small_cfg(preset="case9")
    with pytest.raises(ValueError):
        small_cfg(jnr_grid_db=())
    with pytest.raises(ValueError):
        small_cfg(jnr_grid_db=(10.0, 5.0))
    with pytest.raises(ValueError):
        small_cfg(trials=0)
    with pytest.raises(ValueError):
        small_cfg(trials=999)
    with pytest.raises(ValueError):
        small_cfg(workers=0)
    with pytest.raises(ValueError):
        small_cfg(pfa=1.5)
    with pytest.raises(ValueError):
        small_cfg(output_format="parquet")
    with pytest.raises(ValueError):
        ExperimentConfig(preset="custom", trials=2000)  # needs offsets


def test_run_case_requires_enough_trials_for_pfa():
    with pytest.raises(ValueError):
        run_case(small_cfg(trials=2000, pfa=1e-2))


def test_preset_offsets():
    assert small_cfg(preset="case1").offsets == (4.0, 6.0)
    assert small_cfg(preset="case2").offsets == (1.5, 3.0)
    assert small_cfg(preset="case3").offsets == (2.35, 2.45)
    custom = small_cfg(preset="custom", jammer_offset_bins=(2.0, 3.0))
    assert custom.offsets == (2.0, 3.0)


def test_config_json_roundtrip(tmp_path):
    cfg = small_cfg()
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(dataclasses.asdict(cfg)))
    assert load_config(path) == cfg
    path.write_text(json.dumps({**dataclasses.asdict(cfg), "bogus": 1}))
    with pytest.raises(ValueError):
        load_config(path)


def test_dispatch_guards():
    with pytest.raises(ValueError):
        run_table2(small_cfg(preset="case1"))
    with pytest.raises(ValueError):
        run_case(ExperimentConfig(preset="table2", trials=2000))


# ---------------------------------------------------------------------------
# sweep behavior


@pytest.fixture(scope="module")
def sweep():
    return run_case(small_cfg())


def test_sweep_row_schema(sweep):
    cfg = small_cfg()
    assert len(sweep.rows) == len(cfg.jnr_grid_db) * len(cfg.policies)
    for row in sweep.rows:
        assert row["seed"] == cfg.seed
        assert row["trials"] == cfg.trials
        assert row["threshold"] > 0
        assert 0.0 <= row["pd"] <= 1.0
        sel = [v for k, v in row.items() if k.startswith("sel_")]
        assert len(sel) == 3
        assert abs(sum(sel) - 1.0) <= 1e-9


def test_fixed_policy_selection_is_degenerate(sweep):
    for row in sweep.rows:
        if row["policy"] == "fixed:rectangle":
            assert row["sel_rectangle"] == 1.0


def test_deterministic_rerun(sweep):
    again = run_case(small_cfg())
    assert again.rows == sweep.rows


def test_worker_count_invariance(monkeypatch):
    monkeypatch.setattr(harness, "CHUNK_TRIALS", 512)
    serial = run_case(small_cfg())
    parallel = run_case(small_cfg(workers=2))
    assert serial.rows == parallel.rows


def test_chunk_size_invariance(monkeypatch, sweep):
    monkeypatch.setattr(harness, "CHUNK_TRIALS", 700)
    chunked = run_case(small_cfg())
    assert chunked.rows == sweep.rows


def test_harness_matches_detector_level_ops(sweep):
    # same seeds, same streams: the sweep reproduces the library-level path
    cfg = small_cfg()
    ctx = harness._cached_context(cfg)
    point, jnr = 1, cfg.jnr_grid_db[1]
    sc_h0 = Scenario(n=cfg.n, snr_db=cfg.snr_db, jnr_db=jnr, signal_bin=cfg.bin_index,
                     jammer_offset_bins=cfg.offsets, include_signal=False,
                     seed=(cfg.seed, point, 0))
    sc_h1 = dataclasses.replace(sc_h0, include_signal=True, seed=(cfg.seed, point, 1))
    spec = DetectorSpec(policy="fixed:rectangle", bin_index=cfg.bin_index, pfa=cfg.pfa)
    thr = calibrate_threshold(spec, sc_h0, cfg.trials, ctx)
    pd, stderr = estimate_pd(spec.calibrated(thr), sc_h1, cfg.trials, ctx)
    row = next(r for r in sweep.rows
               if r["policy"] == "fixed:rectangle" and r["jnr_db"] == jnr)
    assert row["threshold"] == thr
    assert row["pd"] == pd
    assert row["stderr"] == stderr


def test_metadata_echo(sweep):
    cfg = small_cfg()
    assert sweep.metadata["seed"] == cfg.seed
    assert sweep.metadata["config"]["preset"] == "case1"
    assert [w["name"] for w in sweep.metadata["windows"]] == \
        ["rectangle", "hamming", "chebyshev120"]
    assert len(sweep.metadata["boundaries_linear"]) == 3
    assert "wall_time_s" in sweep.metadata


# ---------------------------------------------------------------------------
# emission


def test_emit_csv_roundtrip_and_determinism(sweep, tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit(sweep, "csv", p1)
    emit(run_case(small_cfg()), "csv", p2)
    assert p1.read_bytes() == p2.read_bytes()
    rows = read_csv_rows(p1)
    assert len(rows) == len(sweep.rows)
    for parsed, original in zip(rows, sweep.rows):
        for key, value in original.items():
            assert parsed[key] == value


def test_emit_json_roundtrip(sweep, tmp_path):
    path = tmp_path / "a.json"
    emit(sweep, "json", path)
    loaded = load_result_json(path)
    assert loaded.kind == "sweep"
    assert loaded.rows == sweep.rows
    assert loaded.metadata["config"]["trials"] == small_cfg().trials


def test_emit_unknown_format(sweep, tmp_path):
    with pytest.raises(ValueError):
        emit(sweep, "xml", tmp_path / "a.xml")


# ---------------------------------------------------------------------------
# two-tone study


def test_table2_rows():
    cfg = ExperimentConfig(preset="table2", trials=1000, seed=3,
                           snr2_cases_db=(5.0, 35.0))
    result = run_table2(cfg)
    assert result.kind == "table2"
    assert len(result.rows) == 2 * cfg.n
    for row in result.rows:
        sel = [v for k, v in row.items() if k.startswith("sel_")]
        assert abs(sum(sel) - 1.0) <= 1e-9
        assert row["seed"] == 3
    bins = [r["bin"] for r in result.rows if r["snr2_db"] == 5.0]
    assert bins == list(range(16))


# ---------------------------------------------------------------------------
# decision trace


def test_decision_trace_records():
    cfg = small_cfg()
    records = decision_trace(cfg, jnr_db=30.0, trials=50)
    assert len(records) == 50
    for rec in records:
        assert rec["seed"] == cfg.seed
        assert 1 <= rec["k_select"] <= rec["k_max"] <= 3
        assert len(rec["d_db"]) == 2


# ---------------------------------------------------------------------------
# CLI


def test_cli_windows_and_boundaries(capsys):
    assert cli_main(["windows"]) == 0
    out = capsys.readouterr().out
    assert "rectangle" in out and "chebyshev120" in out
    assert cli_main(["windows", "--json"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in records] == ["rectangle", "hamming", "chebyshev120"]
    assert cli_main(["boundaries"]) == 0
    out = capsys.readouterr().out
    assert "8.314" in out and "30.491" in out


def test_cli_run_with_config(tmp_path, capsys):
    cfg = small_cfg(jnr_grid_db=(0.0,), trials=1000)
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(dataclasses.asdict(cfg)))
    out_path = tmp_path / "result.csv"
    code = cli_main(["run", "--config", str(cfg_path), "--out", str(out_path),
                     "--format", "csv"])
    assert code == 0
    rows = read_csv_rows(out_path)
    assert len(rows) == len(cfg.policies)
    capsys.readouterr()


def test_cli_error_line(tmp_path, capsys):
    code = cli_main(["run", "--config", str(tmp_path / "missing.json")])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ")


def test_cli_run_requires_source(capsys):
    assert cli_main(["run"]) == 2
    assert capsys.readouterr().err.startswith("error: ")
