"""Experiment orchestration: scenario presets, JNR sweeps, result emission.

Detection sweeps (presets case1/case2/case3) estimate, per JNR grid
point and policy, the calibrated-threshold detection probability and
the per-window selection frequencies.  The two-tone study (preset
table2) reports the reduced-complexity selector's per-bin window
selection probabilities for a grid of second-tone SNRs.

Execution is deterministic and worker-count invariant: trials are split
into fixed-size chunks, each chunk reads its own pre-assigned counter
range of the scenario's random stream, and chunk results are reduced in
chunk order.  All policies at a grid point share the same snapshots, so
policy comparisons use common random numbers.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import selector as _sel
from .detector import DetectionContext, DetectorSpec, make_context, policy_statistics
from .simkit import Scenario, TwoToneScenario, draw_snapshots, draw_two_tone
from .windows import catalog_record

CHUNK_TRIALS = 25_000

DEFAULT_POLICIES = (
    "fixed:rectangle",
    "fixed:hamming",
    "fixed:chebyshev120",
    "multi_apodization",
    "proposed_exact",
    "proposed_simple",
)

DEFAULT_GRID = tuple(np.arange(-10.0, 80.0 + 1e-9, 2.5))

PRESET_OFFSETS = {
    "case1": (4.0, 6.0),
    "case2": (1.5, 3.0),
    "case3": (2.35, 2.45),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; serializes one-to-one to the JSON config file."""

    preset: str
    jnr_grid_db: tuple = DEFAULT_GRID
    policies: tuple = DEFAULT_POLICIES
    trials: int = 100_000
    seed: int = 0
    workers: int = 1
    output_path: str | None = None
    output_format: str = "csv"
    n: int = 16
    snr_db: float = 0.0
    pfa: float = 1e-2
    bin_index: float = 0.0
    jammer_offset_bins: tuple | None = None
    h0_noise_only: bool = False
    snr2_cases_db: tuple = (5.0, 15.0, 25.0, 35.0)
    table2_tone_bins: tuple = (0.1, 6.25)
    chebyshev_atten_db: float = 120.0
    disabling_factor: float = 2.0

    def __post_init__(self):
        if self.preset not in ("case1", "case2", "case3", "table2", "custom"):
            raise ValueError(f"unknown preset {self.preset!r}")
        grid = tuple(float(x) for x in self.jnr_grid_db)
        if not grid or any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("jnr grid must be non-empty and strictly ascending")
        object.__setattr__(self, "jnr_grid_db", grid)
        object.__setattr__(self, "policies", tuple(self.policies))
        if self.trials < 1000:
            raise ValueError("trials must be at least 1000")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0.0 < self.pfa < 1.0:
            raise ValueError("pfa must lie in (0, 1)")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output format must be csv or json")
        if self.preset == "custom" and self.jammer_offset_bins is None:
            raise ValueError("custom preset requires jammer_offset_bins")
        if self.jammer_offset_bins is not None:
            object.__setattr__(self, "jammer_offset_bins",
                               tuple(float(x) for x in self.jammer_offset_bins))
        object.__setattr__(self, "snr2_cases_db", tuple(float(x) for x in self.snr2_cases_db))
        object.__setattr__(self, "table2_tone_bins", tuple(float(x) for x in self.table2_tone_bins))

    @property
    def offsets(self) -> tuple:
        if self.jammer_offset_bins is not None:
            return self.jammer_offset_bins
        return PRESET_OFFSETS[self.preset]


@dataclass
class ExperimentResult:
    """Rows plus a metadata echo; the numeric content is seed-deterministic."""

    kind: str
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def load_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig from a JSON file mirroring the field names."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(**raw)


def _context_for(cfg: ExperimentConfig) -> DetectionContext:
    return make_context(n=cfg.n, chebyshev_atten_db=cfg.chebyshev_atten_db,
                        disabling_factor=cfg.disabling_factor)


_CTX_CACHE: dict = {}


def _cached_context(cfg: ExperimentConfig) -> DetectionContext:
    key = (cfg.n, cfg.chebyshev_atten_db, cfg.disabling_factor)
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = _context_for(cfg)
    return _CTX_CACHE[key]


def _point_scenario(cfg: ExperimentConfig, point: int, jnr_db: float,
                    signal_present: bool) -> Scenario:
    purpose = 1 if signal_present else 0
    jnr = jnr_db
    if not signal_present and cfg.h0_noise_only:
        jnr = -np.inf
    return Scenario(
        n=cfg.n,
        snr_db=cfg.snr_db,
        jnr_db=jnr,
        signal_bin=cfg.bin_index,
        jammer_offset_bins=cfg.offsets,
        include_signal=signal_present,
        seed=(cfg.seed, point, purpose),
    )


def _chunks(trials: int):
    return [(t0, min(t0 + CHUNK_TRIALS, trials)) for t0 in range(0, trials, CHUNK_TRIALS)]


def _sweep_chunk(args):
    """One (point, H0/H1, trial-range) unit: statistics and selections per policy."""
    cfg, point, jnr_db, signal_present, t0, t1 = args
    ctx = _cached_context(cfg)
    sc = _point_scenario(cfg, point, jnr_db, signal_present)
    rows, _ = draw_snapshots(sc, t0, t1)
    stats, sels = {}, {}
    for policy in cfg.policies:
        spec = DetectorSpec(policy=policy, bin_index=cfg.bin_index, pfa=cfg.pfa)
        s, k = policy_statistics(spec, rows, ctx)
        stats[policy] = s
        sels[policy] = np.bincount(k, minlength=len(ctx.windows) + 1)[1:]
    return stats, sels


def _run_units(units, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_chunk, units, chunksize=1))
    return [_sweep_chunk(u) for u in units]


def run_case(cfg: ExperimentConfig) -> ExperimentResult:
    """Detection sweep over the JNR grid for one interference geometry.

    Per point and policy: calibrate the threshold on a signal-absent
    run, estimate Pd on an independent signal-present run, and record
    the selection frequencies observed during estimation.
    """
    if cfg.preset not in ("case1", "case2", "case3", "custom"):
        raise ValueError(f"run_case needs a sweep preset, got {cfg.preset!r}")
    if cfg.trials * cfg.pfa < 100:
        raise ValueError(
            f"calibrating pfa={cfg.pfa} needs at least {int(np.ceil(100 / cfg.pfa))} trials")
    t_start = time.perf_counter()
    ctx = _cached_context(cfg)
    result = ExperimentResult(kind="sweep", metadata=_metadata(cfg, ctx))
    for point, jnr_db in enumerate(cfg.jnr_grid_db):
        units0 = [(cfg, point, jnr_db, False, t0, t1) for t0, t1 in _chunks(cfg.trials)]
        units1 = [(cfg, point, jnr_db, True, t0, t1) for t0, t1 in _chunks(cfg.trials)]
        parts0 = _run_units(units0, cfg.workers)
        parts1 = _run_units(units1, cfg.workers)
        for policy in cfg.policies:
            h0_stats = np.concatenate([p[0][policy] for p in parts0])
            h1_stats = np.concatenate([p[0][policy] for p in parts1])
            sel_counts = np.sum([p[1][policy] for p in parts1], axis=0)
            threshold = float(np.quantile(h0_stats, 1.0 - cfg.pfa))
            pd = float(np.mean(h1_stats > threshold))
            stderr = float(np.sqrt(pd * (1.0 - pd) / cfg.trials))
            row = {
                "seed": cfg.seed,
                "preset": cfg.preset,
                "jnr_db": float(jnr_db),
                "policy": policy,
                "pd": pd,
                "stderr": stderr,
                "trials": cfg.trials,
                "threshold": threshold,
            }
            probs = sel_counts / cfg.trials
            for name, p in zip(ctx.window_names, probs):
                row[f"sel_{name}"] = float(p)
            result.rows.append(row)
    result.metadata["wall_time_s"] = time.perf_counter() - t_start
    return result


def _table2_chunk(args):
    cfg, snr2_db, t0, t1 = args
    ctx = _cached_context(cfg)
    sc = TwoToneScenario(n=cfg.n, snr1_db=cfg.snr_db, snr2_db=snr2_db,
                         f1_bins=cfg.table2_tone_bins[0], f2_bins=cfg.table2_tone_bins[1],
                         seed=(cfg.seed, int(round(snr2_db * 1000))))
    rows, _ = draw_two_tone(sc, t0, t1)
    counts = np.zeros((cfg.n, len(ctx.windows)), dtype=np.int64)
    for alpha in range(cfg.n):
        k, _, _ = _sel.select_simple_batch(rows, ctx.hypotheses, ctx.boundaries,
                                           bin_index=float(alpha))
        counts[alpha] = np.bincount(k, minlength=len(ctx.windows) + 1)[1:]
    return counts


def run_table2(cfg: ExperimentConfig) -> ExperimentResult:
    """Two-tone window-selection study: per-bin selection probabilities."""
    if cfg.preset != "table2":
        raise ValueError(f"run_table2 needs the table2 preset, got {cfg.preset!r}")
    t_start = time.perf_counter()
    ctx = _cached_context(cfg)
    result = ExperimentResult(kind="table2", metadata=_metadata(cfg, ctx))
    for snr2_db in cfg.snr2_cases_db:
        units = [(cfg, snr2_db, t0, t1) for t0, t1 in _chunks(cfg.trials)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                parts = list(pool.map(_table2_chunk, units, chunksize=1))
        else:
            parts = [_table2_chunk(u) for u in units]
        counts = np.sum(parts, axis=0)
        for alpha in range(cfg.n):
            row = {
                "seed": cfg.seed,
                "snr1_db": cfg.snr_db,
                "snr2_db": float(snr2_db),
                "bin": alpha,
                "policy": "proposed_simple",
                "trials": cfg.trials,
            }
            for name, c in zip(ctx.window_names, counts[alpha]):
                row[f"sel_{name}"] = float(c / cfg.trials)
            result.rows.append(row)
    result.metadata["wall_time_s"] = time.perf_counter() - t_start
    return result


def run(cfg: ExperimentConfig) -> ExperimentResult:
    """Dispatch a config to the sweep or the two-tone study."""
    if cfg.preset == "table2":
        return run_table2(cfg)
    return run_case(cfg)


def decision_trace(cfg: ExperimentConfig, jnr_db: float, trials: int,
                   signal_present: bool = True) -> list:
    """Per-trial selector records for debugging: d metrics, cap, selection."""
    ctx = _cached_context(cfg)
    sc = _point_scenario(cfg, point=0, jnr_db=jnr_db, signal_present=signal_present)
    rows, _ = draw_snapshots(sc, 0, trials)
    k_sel, k_max, powers = _sel.select_simple_batch(rows, ctx.hypotheses, ctx.boundaries,
                                                    bin_index=cfg.bin_index)
    with np.errstate(divide="ignore"):
        powers_db = 10 * np.log10(powers)
    records = []
    for t in range(trials):
        records.append({
            "seed": cfg.seed,
            "trial": t,
            "bin": cfg.bin_index,
            "d_db": [float(x) for x in powers_db[t]],
            "k_max": int(k_max[t]),
            "k_select": int(k_sel[t]),
        })
    return records


def _metadata(cfg: ExperimentConfig, ctx: DetectionContext) -> dict:
    return {
        "config": dataclasses.asdict(cfg),
        "seed": cfg.seed,
        "version": __version__,
        "windows": [catalog_record(w) for w in ctx.windows],
        "boundaries_linear": list(ctx.boundaries.bounds_linear),
        "disabling_factor": ctx.boundaries.disabling_factor,
    }


def _csv_columns(result: ExperimentResult) -> list:
    cols, seen = [], set()
    for row in result.rows:
        for key in row:
            if key not in seen:
                seen.add(key)
                cols.append(key)
    return cols


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(result: ExperimentResult, fmt: str, path) -> None:
    """Write a result to disk; CSV holds the rows, JSON adds the metadata echo.

    CSV output is byte-deterministic for a fixed config and seed: stable
    column order, full-precision repr of floats, fixed newline.
    """
    if fmt == "csv":
        cols = _csv_columns(result)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(cols)
            for row in result.rows:
                writer.writerow([_csv_cell(row.get(c, "")) for c in cols])
    elif fmt == "json":
        payload = {"kind": result.kind, "metadata": result.metadata, "rows": result.rows}
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=1, default=_json_default)
            f.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def load_result_json(path) -> ExperimentResult:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    return ExperimentResult(kind=payload["kind"], rows=payload["rows"],
                            metadata=payload["metadata"])


def read_csv_rows(path) -> list:
    """Parse an emitted CSV back into typed row dicts."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        rows = []
        for raw in reader:
            row = {}
            for key, text in raw.items():
                if text == "":
                    continue
                try:
                    value = int(text)
                except ValueError:
                    try:
                        value = float(text)
                    except ValueError:
                        value = text
                row[key] = value
            rows.append(row)
    return rows
