"""Per-bin adaptive window selection policies.

Three policies choose one window out of an ordered set (increasing peak
sidelobe suppression) for each DFT bin of a single snapshot:

- ``select_exact``: M-ary Bayesian test with uniform priors.  Hypothesis
  k models the interferer as a band-limited Gaussian process with mean
  power ``hyp_jnr`` (one per window); after reducing the log-likelihood
  ratios through the eigen-structure of the shared band covariance, the
  test needs only the energies ``|e_i^H r|^2`` in the dominant
  eigenvector directions.

- ``select_simple``: reduced-complexity test.  With the band-covariance
  eigenvalues clustered at 0 and 1, every log-likelihood ratio becomes
  an affine function of the quadratic band-power metric, so the M-ary
  test collapses to quantizing that metric against M-1 precomputed
  JNR boundaries (the intersection points of neighbouring windows' ROC
  curves, which depend on neither SNR nor the false-alarm rate).  A
  disabling step first caps the candidate set: a window is struck out
  when the interferer sits in its transition band, detected by its
  stop-band power dropping far below the previous window's.

- ``multi_apodization``: baseline; picks the windowed-DFT output with
  the smallest magnitude at the bin under test.

All selections are invariant to a global phase on the snapshot, and
selecting at bin alpha equals selecting at bin 0 on the demodulated
snapshot (the policies demodulate internally).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bandcov import BandCovariance, band_covariance
from .windows import WindowSpec


@dataclass(frozen=True, eq=False)
class HypothesisSet:
    """Ordered window set with per-window hypothesis JNRs and band covariances.

    ``common_band`` is the widest band contained in every window's
    suppression region (the intersection; in practice the region of the
    highest-suppression window) and carries the eigen-structure used by
    the exact test.  ``per_window_band`` holds each window's own
    stop-band covariance for windows 2..L, used by the quantized test's
    band-power metrics.
    """

    windows: tuple[WindowSpec, ...]
    hyp_jnr_db: tuple[float, ...]
    common_band: BandCovariance
    per_window_band: tuple[BandCovariance, ...]

    @property
    def size(self) -> int:
        return len(self.windows)


@dataclass(frozen=True)
class DecisionBoundaries:
    """Quantizer cells for the reduced test: 0 = bounds[0] < bounds[1] < ...

    ``bounds_linear[k]`` for k >= 1 is the linear-power switch point
    between windows k and k+1; the top cell is unbounded above.
    ``disabling_factor`` is the stop-band power ratio beyond which the
    next window is considered blind to the interferer.
    """

    bounds_linear: tuple[float, ...]
    disabling_factor: float = 2.0

    def __post_init__(self):
        b = self.bounds_linear
        if b[0] != 0.0 or any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise ValueError("boundaries must be 0 followed by ascending positive values")
        if self.disabling_factor <= 1.0:
            raise ValueError("disabling factor must exceed 1")


def _checked_windows(windows) -> tuple[WindowSpec, ...]:
    ws = tuple(windows)
    if not ws:
        raise ValueError("empty window set")
    psls = [w.psl_db for w in ws]
    if any(a >= b for a, b in zip(psls, psls[1:])):
        raise ValueError("windows must be strictly ordered by increasing PSL")
    return ws


def _band_intersection(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo >= hi:
        raise ValueError(f"suppression regions {a} and {b} do not overlap")
    return lo, hi


def build_hypothesis_set(windows, hyp_jnr_db=None) -> HypothesisSet:
    """Assemble the hypothesis set for a window catalog.

    ``hyp_jnr_db`` defaults to half of each window's peak sidelobe
    suppression in dB, and must be strictly increasing: hypothesis k
    stands for "interference strong enough that window k's suppression
    is worth its SNR loss".
    """
    ws = _checked_windows(windows)
    n = ws[0].length
    if hyp_jnr_db is None:
        hyp_jnr_db = tuple(w.psl_db / 2 for w in ws)
    else:
        hyp_jnr_db = tuple(float(g) for g in hyp_jnr_db)
        if len(hyp_jnr_db) != len(ws):
            raise ValueError("need one hypothesis JNR per window")
    if any(a >= b for a, b in zip(hyp_jnr_db, hyp_jnr_db[1:])):
        raise ValueError("hypothesis JNRs must be strictly increasing")
    common = ws[-1].stopband_bins
    for w in ws[1:]:
        common = _band_intersection(common, w.stopband_bins)
    return HypothesisSet(
        windows=ws,
        hyp_jnr_db=hyp_jnr_db,
        common_band=band_covariance(n, common),
        per_window_band=tuple(band_covariance(n, w.stopband_bins) for w in ws[1:]),
    )


def boundary_jnr(w1: WindowSpec, w2: WindowSpec, b: BandCovariance,
                 s: np.ndarray | None = None) -> float:
    """Linear JNR at which windows w1 and w2 deliver equal output SJNR.

    Equating the two windows' output signal-to-jammer-plus-noise ratios
    for a band-limited jammer with covariance ``b`` and steering vector
    ``s`` and solving for the jammer power gives

        (|w1^H s|^2 ||w2||^2 - |w2^H s|^2 ||w1||^2)
        -------------------------------------------------
        (|w2^H s|^2 w1^H R w1 - |w1^H s|^2 w2^H R w2)

    which contains neither the signal power nor the false-alarm rate.
    Raises if the pair is degenerate (equal or mis-ordered windows).
    """
    if s is None:
        s = np.ones(w1.length)
    c1, c2 = w1.coeffs, w2.coeffs
    g1 = abs(np.vdot(c1, s)) ** 2
    g2 = abs(np.vdot(c2, s)) ** 2
    num = g1 * (c2 @ c2) - g2 * (c1 @ c1)
    den = g2 * float(np.real(c1 @ b.matrix @ c1)) - g1 * float(np.real(c2 @ b.matrix @ c2))
    if den == 0.0:
        raise ValueError("degenerate window pair: equal band leakage")
    value = num / den
    if not np.isfinite(value) or value <= 0:
        raise ValueError(
            f"boundary JNR {value:.3g} not positive: windows mis-ordered or indistinguishable")
    return float(value)


def compute_boundaries(windows, disabling_factor: float = 2.0) -> DecisionBoundaries:
    """Pairwise decision boundaries for an ordered catalog.

    The covariance for each consecutive pair lives on the intersection
    of the two windows' suppression regions; the resulting switch points
    carry no dependence on target SNR or false-alarm rate.
    """
    ws = _checked_windows(windows)
    n = ws[0].length
    bounds = [0.0]
    for k in range(len(ws) - 1):
        band = _band_intersection(ws[k].stopband_bins, ws[k + 1].stopband_bins)
        bounds.append(boundary_jnr(ws[k], ws[k + 1], band_covariance(n, band)))
    return DecisionBoundaries(bounds_linear=tuple(bounds), disabling_factor=disabling_factor)


def modulate_to_dc(r: np.ndarray, bin_index: float) -> np.ndarray:
    """Shift the content of DFT bin ``bin_index`` down to DC."""
    r = np.asarray(r)
    n = r.shape[-1]
    ramp = np.exp(-2j * np.pi * bin_index * np.arange(n) / n)
    return r * ramp


# ---------------------------------------------------------------------------
# exact M-ary test


def _exact_llr_terms(h: HypothesisSet):
    lam = h.common_band.eig_values[: h.common_band.effective_rank]
    gammas = 10 ** (np.asarray(h.hyp_jnr_db) / 10)
    # per-hypothesis constants: log-det penalty and quadratic weights
    log_pen = np.array([np.sum(np.log((gammas[0] * lam + 1) / (g * lam + 1))) for g in gammas])
    quad_w = np.stack([1 / (gammas[0] * lam + 1) - 1 / (g * lam + 1) for g in gammas])
    return lam, log_pen, quad_w


def exact_llr(r: np.ndarray, h: HypothesisSet, k: int) -> float:
    """Log-likelihood ratio of hypothesis k against hypothesis 1 (k is 1-based).

    Exactly 0 for k = 1.
    """
    if not 1 <= k <= h.size:
        raise IndexError(f"hypothesis index {k} out of range 1..{h.size}")
    if k == 1:
        return 0.0
    nj = h.common_band.effective_rank
    _, log_pen, quad_w = _exact_llr_terms(h)
    proj = np.abs(h.common_band.eig_vectors[:, :nj].conj().T @ np.asarray(r)) ** 2
    return float(log_pen[k - 1] + quad_w[k - 1] @ proj)


def select_exact_batch(rows: np.ndarray, h: HypothesisSet) -> np.ndarray:
    """Most-likely hypothesis index (1-based) per row; ties go to the lower index."""
    nj = h.common_band.effective_rank
    _, log_pen, quad_w = _exact_llr_terms(h)
    proj = np.abs(np.asarray(rows) @ h.common_band.eig_vectors[:, :nj].conj()) ** 2
    llrs = log_pen[None, :] + proj @ quad_w.T
    return np.argmax(llrs, axis=1) + 1


def select_exact(r: np.ndarray, h: HypothesisSet) -> int:
    """Window index (1-based) with the highest posterior under uniform priors."""
    return int(select_exact_batch(np.asarray(r)[None, :], h)[0])


# ---------------------------------------------------------------------------
# reduced-complexity quantized test


def stopband_powers_batch(rows: np.ndarray, h: HypothesisSet) -> np.ndarray:
    """(trials, L-1) stop-band power metrics d_k for windows k = 2..L."""
    rows = np.asarray(rows)
    out = np.empty((rows.shape[0], len(h.per_window_band)))
    for j, cov in enumerate(h.per_window_band):
        out[:, j] = np.einsum("ti,ij,tj->t", rows.conj(), cov.matrix, rows).real / cov.n
    return np.maximum(out, 0.0)


def select_simple_batch(rows: np.ndarray, h: HypothesisSet, d: DecisionBoundaries,
                        bin_index: float = 0.0):
    """Quantized band-power selection with window disabling, vectorized.

    Steps per row: demodulate the bin under test to DC; compute each
    window's stop-band power d_k (k >= 2); cap the candidate set at the
    first k with d_k > factor * d_{k+1} (that window pair's power drop
    reveals a transition-band interferer); quantize d_2 against the
    boundaries and clamp to the cap.

    Returns (selected index (1-based), cap k_max, d array (trials, L-1)).
    """
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[1] != h.windows[0].length:
        raise ValueError(f"expected (trials, {h.windows[0].length}) snapshot array")
    if len(d.bounds_linear) != h.size:
        raise ValueError("boundary count does not match window set")
    if h.size == 1:
        ones = np.ones(rows.shape[0], dtype=np.int64)
        return ones, ones, np.empty((rows.shape[0], 0))
    if bin_index:
        rows = modulate_to_dc(rows, bin_index)
    powers = stopband_powers_batch(rows, h)
    trials = rows.shape[0]
    size = h.size
    k_max = np.full(trials, size, dtype=np.int64)
    for k in range(2, size):            # candidate caps, lowest k wins
        cond = powers[:, k - 2] > d.disabling_factor * powers[:, k - 1]
        k_max = np.where((k_max == size) & cond, k, k_max)
    upper = np.asarray(d.bounds_linear[1:])
    k_sel = 1 + np.searchsorted(upper, powers[:, 0], side="left")
    k_sel = np.minimum(k_sel, k_max)
    return k_sel, k_max, powers


def select_simple(r: np.ndarray, h: HypothesisSet, d: DecisionBoundaries,
                  bin_index: float = 0.0) -> int:
    """Window index (1-based) from the reduced-complexity test at one bin."""
    k_sel, _, _ = select_simple_batch(np.asarray(r)[None, :], h, d, bin_index)
    return int(k_sel[0])


# ---------------------------------------------------------------------------
# multi-apodization baseline


def window_bank(windows) -> np.ndarray:
    """(N, L) stack of window coefficient columns."""
    ws = tuple(windows)
    return np.stack([w.coeffs for w in ws], axis=1)


def apodization_magnitudes_batch(rows: np.ndarray, windows, bin_index: float = 0.0) -> np.ndarray:
    """|w_k^H r| at the bin under test for each window, shape (trials, L)."""
    rows = np.asarray(rows)
    if bin_index:
        rows = modulate_to_dc(rows, bin_index)
    return np.abs(rows @ window_bank(windows))


def apodization_select_batch(mags: np.ndarray) -> np.ndarray:
    """Index (1-based) of the smallest magnitude per row, ties to the lower index.

    Ties are resolved with a relative tolerance so that the identical
    on-bin responses guaranteed by DC normalization (equal only up to
    rounding) deterministically pick the lower-SNR-loss window.
    """
    mins = np.min(mags, axis=1)
    near = mags <= (mins * (1 + 1e-12) + 1e-300)[:, None]
    return np.argmax(near, axis=1) + 1


def multi_apodization(r: np.ndarray, windows, bin_index: float = 0.0) -> tuple[float, int]:
    """Smallest windowed-DFT magnitude at the bin and the achieving window index.

    Ties go to the lower index (the lower-SNR-loss window).
    """
    mags = apodization_magnitudes_batch(np.asarray(r)[None, :], windows, bin_index)
    idx = int(apodization_select_batch(mags)[0])
    return float(mags[0, idx - 1]), idx
