"""Window construction and spectral characterization.

Windows are DC-normalized so that the sum of coefficients equals the
length N.  All windows then share the same response to a tone that sits
exactly on the DFT bin under test, which is what makes per-bin minimum
selection across windows meaningful and what makes SNR-loss comparisons
fair: the signal term is identical, only the noise/interference gains
differ.

Cached per-window metrics:

- ``psl_db``: peak sidelobe level below the mainlobe peak (positive dB).
- ``snr_loss_db``: white-noise output-SNR penalty relative to the
  rectangle window, ``10*log10(N*||w||^2 / (sum w)^2)``.
- ``stopband_bins``: the suppression region ``(theta1, theta2)`` in DFT
  bins, with ``theta2 = N - theta1`` by the conjugate symmetry of a real
  window's spectrum.

The suppression-region start used by the selection machinery is a
*pairwise* notion: window k's region begins where its spectrum first
drops below the previous (lower-sidelobe-suppression) window's spectrum,
i.e. where the extra suppression is actually delivered.  That is the
boundary at which a per-bin minimum across windows switches from one
window to the next.  ``window_catalog`` populates the regions that way;
a standalone ``make_window`` falls back to the intrinsic definition
(first descent of the spectrum through the window's own PSL envelope).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.signal import windows as _scipy_windows

DEFAULT_OVERSAMPLE = 64


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """A named, DC-normalized real window with cached spectral metrics."""

    name: str
    length: int
    coeffs: np.ndarray
    psl_db: float
    snr_loss_db: float
    stopband_bins: tuple[float, float]

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def norm_sq(self) -> float:
        """||w||^2, the noise gain of the window."""
        return float(self.coeffs @ self.coeffs)


def _dc_normalize(coeffs: np.ndarray, n: int) -> np.ndarray:
    total = np.sum(coeffs)
    if total <= 0:
        raise ValueError("window has non-positive DC response")
    return coeffs * (n / total)


def dtft_magnitude(coeffs: np.ndarray, bins) -> np.ndarray:
    """|W(u)| at arbitrary fractional-bin frequencies, normalized to 1 at DC."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = len(coeffs)
    u = np.atleast_1d(np.asarray(bins, dtype=float))
    phases = np.exp(-2j * np.pi * np.multiply.outer(u, np.arange(n)) / n)
    return np.abs(phases @ coeffs) / np.sum(coeffs)


def magnitude_spectrum(w: WindowSpec, oversample: int = DEFAULT_OVERSAMPLE) -> np.ndarray:
    """Sampled magnitude of the window's DTFT over [0, N) bins.

    Returns ``oversample * N`` linear-magnitude samples at frequencies
    ``k / oversample`` DFT bins, normalized to 1 (0 dB) at DC.
    """
    if oversample < 8:
        raise ValueError("oversample must be >= 8")
    mag = np.abs(np.fft.fft(w.coeffs, oversample * w.length))
    return mag / mag[0]


def frequency_grid(n: int, oversample: int = DEFAULT_OVERSAMPLE) -> np.ndarray:
    """Fractional-bin frequencies matching ``magnitude_spectrum`` samples."""
    return np.arange(oversample * n) / oversample


def snr_loss(w: WindowSpec) -> float:
    """Output-SNR penalty vs the rectangle window for a tone in white noise, in dB."""
    c = w.coeffs
    return float(10 * np.log10(w.length * (c @ c) / np.sum(c) ** 2))


def _first_null_index(mag: np.ndarray) -> int:
    d = np.diff(mag)
    turn = np.where((d[1:] > 0) & (d[:-1] <= 0))[0]
    if turn.size == 0:
        raise ValueError("spectrum has no sidelobes (degenerate window)")
    return int(turn[0]) + 1


def peak_sidelobe_db(w: WindowSpec, oversample: int = DEFAULT_OVERSAMPLE) -> float:
    """Peak sidelobe level below the mainlobe peak, in positive dB."""
    mag = magnitude_spectrum(w, oversample)
    grid = frequency_grid(w.length, oversample)
    first_null = _first_null_index(mag)
    half = oversample * w.length // 2 + 1
    region = mag[first_null:half]
    peak_idx = first_null + int(np.argmax(region))
    # refine on the continuous DTFT around the best grid sample
    lo = grid[max(peak_idx - 1, 0)]
    hi = grid[min(peak_idx + 1, len(grid) - 1)]
    res = minimize_scalar(lambda u: -dtft_magnitude(w.coeffs, u)[0],
                          bounds=(lo, hi), method="bounded")
    return float(-20 * np.log10(-res.fun))


def stopband_edges(
    w: WindowSpec,
    oversample: int = DEFAULT_OVERSAMPLE,
    reference: WindowSpec | None = None,
) -> tuple[float, float]:
    """Suppression-region edges ``(theta1, theta2)`` in DFT bins.

    With ``reference`` given, ``theta1`` is the first frequency at which
    this window's spectrum drops below the reference window's spectrum:
    the point where the extra sidelobe suppression starts paying off and
    a per-bin minimum across the two windows switches over.  Without a
    reference, ``theta1`` is the first descent of the spectrum through
    the window's own peak-sidelobe envelope.  Either way
    ``theta2 = N - theta1`` exactly.
    """
    if oversample < 8:
        raise ValueError("oversample must be >= 8")
    n = w.length
    grid = frequency_grid(n, oversample)
    mag = magnitude_spectrum(w, oversample)
    if reference is None:
        level = 10 ** (-peak_sidelobe_db(w, oversample) / 20)
        below = np.where(mag[: oversample * n // 2] < level)[0]
        if below.size == 0:
            raise ValueError("spectrum never descends below its PSL envelope")
        i = int(below[0])
        theta1 = brentq(lambda u: dtft_magnitude(w.coeffs, u)[0] - level,
                        grid[i - 1], grid[i], xtol=1e-12)
    else:
        if reference.length != n:
            raise ValueError("reference window length mismatch")
        diff = mag - magnitude_spectrum(reference, oversample)
        half = oversample * n // 2
        sign_change = np.where(np.diff(np.sign(diff[:half])) < 0)[0]
        if sign_change.size == 0:
            raise ValueError("window spectrum never drops below the reference")
        i = int(sign_change[0])
        f = lambda u: (dtft_magnitude(w.coeffs, u)[0]
                       - dtft_magnitude(reference.coeffs, u)[0])
        theta1 = brentq(f, grid[i], grid[i + 1], xtol=1e-12)
    return float(theta1), float(n - theta1)


def make_window(kind: str, n: int, atten_db: float | None = None,
                oversample: int = DEFAULT_OVERSAMPLE) -> WindowSpec:
    """Construct a DC-normalized window with all cached metrics populated.

    Parameters
    ----------
    kind : {'rectangle', 'hamming', 'chebyshev'}
        Window family.  'chebyshev' requires ``atten_db`` (design
        sidelobe attenuation in positive dB).
    n : int
        Window length, at least 4.
    """
    if n < 4:
        raise ValueError("window length must be >= 4")
    kind = kind.lower()
    name = kind
    if kind == "rectangle":
        raw = np.ones(n)
    elif kind == "hamming":
        raw = _scipy_windows.hamming(n, sym=True)
    elif kind == "chebyshev":
        if atten_db is None or atten_db <= 0:
            raise ValueError("chebyshev window requires atten_db > 0")
        raw = _scipy_windows.chebwin(n, atten_db, sym=True)
        if not np.all(np.isfinite(raw)) or np.min(raw) <= 0:
            raise ValueError(
                f"degenerate Chebyshev design: N={n} too small for {atten_db} dB")
        name = f"chebyshev{atten_db:g}"
    else:
        raise ValueError(f"unsupported window kind: {kind!r}")
    coeffs = _dc_normalize(raw, n)
    stub = WindowSpec(name=name, length=n, coeffs=coeffs, psl_db=0.0,
                      snr_loss_db=0.0, stopband_bins=(0.0, 0.0))
    psl = peak_sidelobe_db(stub, oversample)
    if kind == "chebyshev" and abs(psl - atten_db) > 0.5:
        raise ValueError(
            f"degenerate Chebyshev design: achieved PSL {psl:.2f} dB vs requested {atten_db} dB")
    return replace(stub, psl_db=psl, snr_loss_db=snr_loss(stub),
                   stopband_bins=stopband_edges(stub, oversample))


def window_catalog(n: int = 16, chebyshev_atten_db: float = 120.0,
                   oversample: int = DEFAULT_OVERSAMPLE) -> list[WindowSpec]:
    """The rectangle / Hamming / Chebyshev catalog, ordered by increasing PSL.

    Suppression regions are the pairwise switch points: each window's
    region starts where its spectrum first drops below the previous
    window's.  The rectangle has no flat suppression floor of its own
    and inherits the next window's region, so that every consecutive
    pair shares a common band.
    """
    ws = [
        make_window("rectangle", n, oversample=oversample),
        make_window("hamming", n, oversample=oversample),
        make_window("chebyshev", n, atten_db=chebyshev_atten_db, oversample=oversample),
    ]
    ws.sort(key=lambda w: w.psl_db)
    for k in range(1, len(ws)):
        ws[k] = replace(ws[k], stopband_bins=stopband_edges(ws[k], oversample, reference=ws[k - 1]))
    ws[0] = replace(ws[0], stopband_bins=ws[1].stopband_bins)
    return ws


def catalog_record(w: WindowSpec) -> dict:
    """Serializable record of a window (full-precision coefficients and metrics)."""
    return {
        "name": w.name,
        "length": w.length,
        "coeffs": [float(c) for c in w.coeffs],
        "psl_db": w.psl_db,
        "snr_loss_db": w.snr_loss_db,
        "stopband_bins": [w.stopband_bins[0], w.stopband_bins[1]],
    }
