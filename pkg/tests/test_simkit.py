import numpy as np
import pytest
from scipy import stats as sstats

from winselect import (
    Scenario,
    TwoToneScenario,
    draw_snapshot,
    draw_snapshots,
    draw_two_tone,
)
from winselect.simkit import dump_snapshots

N = 16


def scenario(**kwargs):
    defaults = dict(n=N, snr_db=0.0, jnr_db=10.0, signal_bin=0.0,
                    jammer_offset_bins=(4.0, 6.0), include_signal=True, seed=0)
    defaults.update(kwargs)
    return Scenario(**defaults)


def test_per_trial_matches_block_rows_bitwise():
    sc = scenario(seed=42)
    rows, truth = draw_snapshots(sc, 0, 50)
    for t in (0, 1, 7, 49):
        snap = draw_snapshot(sc, t)
        assert np.array_equal(snap.r, rows[t])
        for key, arr in truth.items():
            assert snap.truth[key] == arr[t]


def test_block_split_is_seamless():
    sc = scenario(seed=43)
    full, _ = draw_snapshots(sc, 0, 100)
    a, _ = draw_snapshots(sc, 0, 37)
    b, _ = draw_snapshots(sc, 37, 100)
    assert np.array_equal(full, np.vstack([a, b]))


def test_repeatability_and_distinct_trials():
    sc = scenario(seed=44)
    r1, _ = draw_snapshots(sc, 0, 10)
    r2, _ = draw_snapshots(sc, 0, 10)
    assert np.array_equal(r1, r2)
    assert not np.array_equal(r1[0], r1[1])
    other, _ = draw_snapshots(scenario(seed=45), 0, 10)
    assert not np.array_equal(r1, other)


def test_truth_fields_in_support():
    sc = scenario(seed=46, signal_bin=3.0, jammer_offset_bins=(4.0, 6.0))
    rows, truth = draw_snapshots(sc, 0, 5000)
    assert np.all(np.isfinite(rows))
    assert np.all(truth["gamma_s"] >= 0) and np.all(truth["gamma_j"] >= 0)
    for key in ("phi_s", "phi_j"):
        assert np.all((truth[key] >= 0) & (truth[key] < 2 * np.pi))
    assert np.all((truth["jammer_freq_bins"] >= 7.0) & (truth["jammer_freq_bins"] <= 9.0))


def test_noise_only_power_and_whiteness():
    sc = scenario(snr_db=-np.inf, jnr_db=-np.inf, include_signal=False, seed=4)
    rows, truth = draw_snapshots(sc, 0, 100_000)
    assert np.all(truth["gamma_s"] == 0.0) and np.all(truth["gamma_j"] == 0.0)
    assert abs(np.mean(np.abs(rows) ** 2) - 1.0) < 0.02
    cov = np.einsum("ti,tj->ij", rows, rows.conj()) / rows.shape[0]
    assert np.max(np.abs(cov - np.eye(N))) < 0.02


def test_fading_power_means():
    sc = scenario(snr_db=0.0, jnr_db=5.0, seed=0)
    _, truth = draw_snapshots(sc, 0, 100_000)
    assert abs(np.mean(truth["gamma_s"]) - 1.0) < 0.02
    assert abs(np.mean(truth["gamma_j"]) - 10 ** 0.5) < 0.02 * 10 ** 0.5


def test_fading_draws_independent():
    sc = scenario(snr_db=0.0, jnr_db=3.0, seed=0)
    _, truth = draw_snapshots(sc, 0, 100_000)
    corr = np.corrcoef(truth["gamma_s"], truth["gamma_j"])[0, 1]
    assert abs(corr) < 0.01


def test_phase_uniformity_chi_square():
    sc = scenario(seed=0)
    _, truth = draw_snapshots(sc, 0, 100_000)
    counts, _ = np.histogram(truth["phi_s"], bins=16, range=(0.0, 2 * np.pi))
    _, p = sstats.chisquare(counts)
    assert p > 0.001


def test_signal_flag_changes_only_signal_term():
    # H0/H1 share the stream, so their difference is exactly the target tone
    on = scenario(seed=47, include_signal=True)
    off = scenario(seed=47, include_signal=False)
    r_on, truth = draw_snapshots(on, 0, 200)
    r_off, _ = draw_snapshots(off, 0, 200)
    amp = np.sqrt(truth["gamma_s"]) * np.exp(1j * truth["phi_s"])
    tone = np.exp(2j * np.pi * on.signal_bin * np.arange(N) / N)
    assert np.allclose(r_on - r_off, amp[:, None] * tone, atol=1e-12)


def test_scenario_validation():
    with pytest.raises(ValueError):
        scenario(n=3)
    with pytest.raises(ValueError):
        scenario(jammer_offset_bins=(6.0, 4.0))
    with pytest.raises(ValueError):
        scenario(jammer_offset_bins=(-1.0, 4.0))
    with pytest.raises(ValueError):
        scenario(jammer_offset_bins=(4.0, 16.0))
    with pytest.raises(ValueError):
        scenario(snr_db=np.nan)
    with pytest.raises(ValueError):
        scenario(jnr_db=np.inf)
    with pytest.raises(ValueError):
        draw_snapshots(scenario(), 5, 2)


def test_two_tone_draws():
    sc = TwoToneScenario(n=N, snr1_db=0.0, snr2_db=15.0, seed=9)
    r1, truth = draw_two_tone(sc, 0, 100_000)
    r2, _ = draw_two_tone(sc, 0, 100_000)
    assert np.array_equal(r1, r2)
    assert abs(np.mean(truth["gamma2"]) - 10 ** 1.5) < 0.02 * 10 ** 1.5
    assert abs(np.mean(truth["gamma1"]) - 1.0) < 0.02


def test_fixed_offset_interval_pins_jammer_frequency():
    sc = scenario(jammer_offset_bins=(5.0, 5.0), seed=48)
    _, truth = draw_snapshots(sc, 0, 100)
    assert np.all(truth["jammer_freq_bins"] == 5.0)


def test_dump_snapshots_roundtrip(tmp_path):
    sc = scenario(seed=49)
    path = tmp_path / "trace.npz"
    dump_snapshots(path, sc, 10, 20)
    rows, truth = draw_snapshots(sc, 10, 20)
    with np.load(path) as data:
        assert np.array_equal(data["r"], rows)
        assert np.array_equal(data["trial"], np.arange(10, 20))
        assert np.array_equal(data["gamma_s"], truth["gamma_s"])
