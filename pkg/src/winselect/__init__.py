"""Per-DFT-bin adaptive window selection for tone detection under interference.

A small library around three ideas:

- characterize a catalog of analysis windows (sidelobe level, SNR loss,
  suppression region);
- select, from a single snapshot and for each DFT bin, the window whose
  extra sidelobe suppression is actually needed, so the SNR loss of
  heavy windows is paid only when interference demands it (exact
  Bayesian test, a reduced quantized-power test with window disabling,
  and the minimum-magnitude multi-apodization baseline);
- measure the resulting detection performance with a reproducible
  Monte Carlo harness.
"""

__version__ = "0.1.0"

from .windows import (
    WindowSpec,
    make_window,
    window_catalog,
    magnitude_spectrum,
    frequency_grid,
    stopband_edges,
    peak_sidelobe_db,
    snr_loss,
)
from .bandcov import (
    BandCovariance,
    band_covariance,
    band_power,
    effective_rank,
    hermitian_eigendecomposition,
)
from .selector import (
    DecisionBoundaries,
    HypothesisSet,
    boundary_jnr,
    build_hypothesis_set,
    compute_boundaries,
    exact_llr,
    multi_apodization,
    select_exact,
    select_simple,
)
from .simkit import (
    Scenario,
    Snapshot,
    TwoToneScenario,
    draw_snapshot,
    draw_snapshots,
    draw_two_tone,
)
from .detector import (
    DetectionContext,
    DetectorSpec,
    analytic_pd,
    calibrate_threshold,
    estimate_pd,
    make_context,
    sjnr,
    statistic,
)
from .harness import ExperimentConfig, ExperimentResult, emit, load_config, run, run_case, run_table2

__all__ = [
    "WindowSpec", "make_window", "window_catalog", "magnitude_spectrum",
    "frequency_grid", "stopband_edges", "peak_sidelobe_db", "snr_loss",
    "BandCovariance", "band_covariance", "band_power", "effective_rank",
    "hermitian_eigendecomposition",
    "DecisionBoundaries", "HypothesisSet", "boundary_jnr", "build_hypothesis_set",
    "compute_boundaries", "exact_llr", "multi_apodization", "select_exact",
    "select_simple",
    "Scenario", "Snapshot", "TwoToneScenario", "draw_snapshot", "draw_snapshots",
    "draw_two_tone",
    "DetectionContext", "DetectorSpec", "analytic_pd", "calibrate_threshold",
    "estimate_pd", "make_context", "sjnr", "statistic",
    "ExperimentConfig", "ExperimentResult", "emit", "load_config", "run",
    "run_case", "run_table2",
]
