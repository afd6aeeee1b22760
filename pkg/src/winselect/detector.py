"""Windowed-DFT detection statistics, analytic ROC, empirical calibration.

The detection statistic for a window w at bin alpha is ``|w_alpha^H r|^2``
(the windowed DFT power at that bin).  For jointly Gaussian signal,
band-limited jammer, and noise, the statistic is exponential conditional
on the jammer frequency, and the fixed-window ROC obeys
``Pd = Pfa^(1/(1+SJNR))`` with the output signal-to-jammer-plus-noise
ratio of the window.

The adaptive policies (per-snapshot window selection) have no
closed-form null distribution, so thresholds are calibrated empirically
as the (1 - pfa) quantile of the statistic under a signal-absent run.
By default the null includes the jammer at the scenario JNR, which is
the convention that reproduces the power-law ROC for the fixed windows;
passing a noise-only scenario gives the alternative convention.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import selector as _sel
from .selector import DecisionBoundaries, HypothesisSet
from .simkit import Scenario, draw_snapshots
from .windows import WindowSpec, window_catalog

POLICY_NAMES = ("multi_apodization", "proposed_exact", "proposed_simple")

_CHUNK = 1 << 15


@dataclass(frozen=True)
class DetectorSpec:
    """A detection policy at one bin with a target false-alarm rate.

    ``policy`` is ``"fixed:<window-name>"`` or one of
    ``multi_apodization | proposed_exact | proposed_simple``.
    ``threshold`` is None until calibrated; ``calibrated`` returns an
    immutable copy carrying the threshold.
    """

    policy: str
    bin_index: float = 0.0
    pfa: float = 1e-2
    threshold: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.pfa < 1.0:
            raise ValueError("pfa must lie in (0, 1)")
        if not (self.policy in POLICY_NAMES or self.policy.startswith("fixed:")):
            raise ValueError(f"unknown policy {self.policy!r}")

    def calibrated(self, threshold: float) -> "DetectorSpec":
        if threshold <= 0:
            raise ValueError("threshold must be positive")
        return replace(self, threshold=threshold)


@dataclass(frozen=True, eq=False)
class DetectionContext:
    """Window catalog plus the selector structures shared by all policies."""

    windows: tuple[WindowSpec, ...]
    hypotheses: HypothesisSet
    boundaries: DecisionBoundaries

    @property
    def window_names(self) -> tuple[str, ...]:
        return tuple(w.name for w in self.windows)


def make_context(windows=None, n: int = 16, chebyshev_atten_db: float = 120.0,
                 hyp_jnr_db=None, disabling_factor: float = 2.0) -> DetectionContext:
    """Build the shared context from a catalog (default: N=16 three-window set)."""
    ws = tuple(windows) if windows is not None else tuple(
        window_catalog(n, chebyshev_atten_db))
    return DetectionContext(
        windows=ws,
        hypotheses=_sel.build_hypothesis_set(ws, hyp_jnr_db),
        boundaries=_sel.compute_boundaries(ws, disabling_factor),
    )


def statistic(r: np.ndarray, w: WindowSpec, bin_index: float = 0.0) -> float:
    """Windowed DFT power ``|w_alpha^H r|^2`` at the bin under test."""
    r = np.asarray(r)
    if r.shape != (w.length,):
        raise ValueError(f"expected length-{w.length} snapshot, got {r.shape}")
    if bin_index:
        r = _sel.modulate_to_dc(r, bin_index)
    return float(np.abs(w.coeffs @ r) ** 2)


def sjnr(w: WindowSpec, s: np.ndarray, b, snr: float, jnr: float) -> float:
    """Output signal-to-jammer-plus-noise ratio of a window (linear).

    ``snr * |w^H s|^2 / (jnr * w^H R w + ||w||^2)`` for steering vector s
    and band covariance b.
    """
    c = w.coeffs
    jam = float(np.real(c @ b.matrix @ c)) if jnr else 0.0
    return float(snr * abs(np.vdot(c, s)) ** 2 / (jnr * jam + c @ c))


def analytic_pd(pfa: float, sjnr_linear: float) -> float:
    """Detection probability of the exponential-statistic ROC law."""
    if not 0.0 < pfa < 1.0:
        raise ValueError("pfa must lie in (0, 1)")
    if sjnr_linear < 0:
        raise ValueError("sjnr must be nonnegative")
    return float(pfa ** (1.0 / (1.0 + sjnr_linear)))


def policy_statistics(spec: DetectorSpec, rows: np.ndarray,
                      ctx: DetectionContext) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial statistic and selected window index for a policy.

    Adaptive policies first run their selector on each snapshot, then
    evaluate the selected window's statistic; multi-apodization's
    statistic is its squared minimum magnitude.
    """
    rows = np.asarray(rows)
    if spec.bin_index:
        rows = _sel.modulate_to_dc(rows, spec.bin_index)
    mags = _sel.apodization_magnitudes_batch(rows, ctx.windows)
    if spec.policy.startswith("fixed:"):
        name = spec.policy.split(":", 1)[1]
        try:
            idx = ctx.window_names.index(name)
        except ValueError:
            raise ValueError(f"no window named {name!r} in catalog {ctx.window_names}")
        sel = np.full(rows.shape[0], idx + 1, dtype=np.int64)
        return mags[:, idx] ** 2, sel
    if spec.policy == "multi_apodization":
        sel = _sel.apodization_select_batch(mags)
        return np.min(mags, axis=1) ** 2, sel
    if spec.policy == "proposed_simple":
        sel, _, _ = _sel.select_simple_batch(rows, ctx.hypotheses, ctx.boundaries)
    elif spec.policy == "proposed_exact":
        sel = _sel.select_exact_batch(rows, ctx.hypotheses)
    else:
        raise ValueError(f"unknown policy {spec.policy!r}")
    return mags[np.arange(rows.shape[0]), sel - 1] ** 2, sel


def _statistics_over_trials(spec: DetectorSpec, sc: Scenario, trials: int,
                            ctx: DetectionContext) -> np.ndarray:
    chunks = []
    for t0 in range(0, trials, _CHUNK):
        rows, _ = draw_snapshots(sc, t0, min(t0 + _CHUNK, trials))
        chunks.append(policy_statistics(spec, rows, ctx)[0])
    return np.concatenate(chunks) if chunks else np.empty(0)


def calibrate_threshold(spec: DetectorSpec, sc_h0: Scenario, trials: int,
                        ctx: DetectionContext) -> float:
    """Empirical (1 - pfa) quantile of the policy statistic under the null.

    ``sc_h0`` must have the signal disabled; the jammer term stays in
    unless the caller passes a noise-only scenario.
    """
    if sc_h0.include_signal:
        raise ValueError("calibration scenario must have include_signal=False")
    if trials * spec.pfa < 100:
        raise ValueError(
            f"need at least {int(np.ceil(100 / spec.pfa))} trials to calibrate pfa={spec.pfa}")
    stats = _statistics_over_trials(spec, sc_h0, trials, ctx)
    return float(np.quantile(stats, 1.0 - spec.pfa))


def estimate_pd(spec: DetectorSpec, sc_h1: Scenario, trials: int,
                ctx: DetectionContext) -> tuple[float, float]:
    """Exceedance fraction over the calibrated threshold, with binomial stderr."""
    if spec.threshold is None:
        raise ValueError("detector is not calibrated")
    if not sc_h1.include_signal:
        raise ValueError("detection scenario must have include_signal=True")
    stats = _statistics_over_trials(spec, sc_h1, trials, ctx)
    pd = float(np.mean(stats > spec.threshold))
    return pd, float(np.sqrt(pd * (1.0 - pd) / trials))
