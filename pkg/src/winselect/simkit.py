"""Snapshot simulation: faded tones in circular complex white noise.

One snapshot is ``r[n] = a_s e^{j w_s n} + a_j e^{j w_j n} + v[n]`` for
n = 0..N-1, where the complex amplitudes have exponentially distributed
power (mean set by the SNR/JNR) and uniform phase, the jammer frequency
offset is drawn uniformly from a configured interval, and
``v[n] ~ CN(0, 1)``.

Reproducibility contract: every trial owns a fixed, block-aligned
counter window of a Philox stream keyed by the scenario seed, so
``draw_snapshot(sc, t)`` is bit-identical to row t of any
``draw_snapshots(sc, t0, t1)`` block, regardless of how trials are
chunked across workers.  All variates are derived from raw uniforms
(inverse-CDF for the normals), never from rejection samplers, so the
per-trial uniform consumption is a constant of the scenario shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy.special import ndtri

Seed = Union[int, tuple]

_WORDS_PER_BLOCK = 4      # Philox counter advances in 128-bit blocks


@dataclass(frozen=True)
class Scenario:
    """Single faded target + single faded jammer in unit-variance noise."""

    n: int
    snr_db: float
    jnr_db: float
    signal_bin: float = 0.0
    jammer_offset_bins: tuple[float, float] = (0.0, 0.0)
    include_signal: bool = True
    seed: Seed = 0

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("snapshot length must be >= 4")
        a, b = self.jammer_offset_bins
        if not (0.0 <= a <= b < self.n):
            raise ValueError(f"jammer offset interval {self.jammer_offset_bins} invalid")
        for name in ("snr_db", "jnr_db"):
            v = getattr(self, name)
            if np.isnan(v) or v == np.inf:
                raise ValueError(f"{name} must be finite or -inf")

    @property
    def uniforms_per_trial(self) -> int:
        # gamma_s, gamma_j, phi_s, phi_j, jammer offset, then 2N noise
        return 5 + 2 * self.n


@dataclass(frozen=True)
class TwoToneScenario:
    """Two independent faded tones at fixed frequencies in unit noise."""

    n: int
    snr1_db: float
    snr2_db: float
    f1_bins: float = 0.1
    f2_bins: float = 6.25
    seed: Seed = 0

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("snapshot length must be >= 4")

    @property
    def uniforms_per_trial(self) -> int:
        return 4 + 2 * self.n


@dataclass(frozen=True)
class Snapshot:
    """One observation vector plus the ground-truth draws behind it."""

    r: np.ndarray
    truth: dict = field(default_factory=dict)


def _blocks_per_trial(k_uniforms: int) -> int:
    return -(-k_uniforms // _WORDS_PER_BLOCK)


def _uniform_block(seed: Seed, t0: int, t1: int, k: int) -> np.ndarray:
    """(t1-t0, k) uniforms; row t always reads counter blocks [t*B, (t+1)*B)."""
    blocks = _blocks_per_trial(k)
    entropy = seed if isinstance(seed, (tuple, list)) else (int(seed),)
    bit_gen = Philox(seed=SeedSequence(tuple(int(x) for x in entropy)),
                     counter=t0 * blocks)
    width = blocks * _WORDS_PER_BLOCK
    u = Generator(bit_gen).random((t1 - t0) * width).reshape(t1 - t0, width)
    return u[:, :k]


def _exponential(u: np.ndarray, mean_db: float) -> np.ndarray:
    mean = 10 ** (mean_db / 10)       # 0 when mean_db == -inf
    return -mean * np.log1p(-u)


def _standard_normal(u: np.ndarray) -> np.ndarray:
    return ndtri(np.maximum(u, 2.0 ** -54))


def draw_snapshots(sc: Scenario, t0: int, t1: int):
    """Snapshots for trials [t0, t1): returns (r, truth) with r complex (t1-t0, N).

    truth holds per-trial arrays: gamma_s, gamma_j, phi_s, phi_j, jammer_freq_bins.
    """
    if not 0 <= t0 <= t1:
        raise ValueError("bad trial range")
    n = sc.n
    u = _uniform_block(sc.seed, t0, t1, sc.uniforms_per_trial)
    gamma_s = _exponential(u[:, 0], sc.snr_db)
    gamma_j = _exponential(u[:, 1], sc.jnr_db)
    phi_s = 2 * np.pi * u[:, 2]
    phi_j = 2 * np.pi * u[:, 3]
    a, b = sc.jammer_offset_bins
    freq_j = sc.signal_bin + a + (b - a) * u[:, 4]
    noise = _standard_normal(u[:, 5:]) / np.sqrt(2)
    r = noise[:, :n] + 1j * noise[:, n:]
    t = np.arange(n)
    if sc.include_signal:
        amp_s = np.sqrt(gamma_s) * np.exp(1j * phi_s)
        r = r + amp_s[:, None] * np.exp(2j * np.pi * sc.signal_bin * t / n)
    amp_j = np.sqrt(gamma_j) * np.exp(1j * phi_j)
    r = r + amp_j[:, None] * np.exp(2j * np.pi * np.multiply.outer(freq_j, t) / n)
    truth = {
        "gamma_s": gamma_s,
        "gamma_j": gamma_j,
        "phi_s": phi_s,
        "phi_j": phi_j,
        "jammer_freq_bins": freq_j,
    }
    return r, truth


def draw_snapshot(sc: Scenario, trial: int) -> Snapshot:
    """Snapshot for one trial, bit-identical to the same row of a block draw."""
    r, truth = draw_snapshots(sc, trial, trial + 1)
    return Snapshot(r=r[0], truth={k: v[0] for k, v in truth.items()})


def draw_two_tone(sc: TwoToneScenario, t0: int, t1: int):
    """Two-tone snapshots for trials [t0, t1): (r, truth)."""
    if not 0 <= t0 <= t1:
        raise ValueError("bad trial range")
    n = sc.n
    u = _uniform_block(sc.seed, t0, t1, sc.uniforms_per_trial)
    gamma1 = _exponential(u[:, 0], sc.snr1_db)
    gamma2 = _exponential(u[:, 1], sc.snr2_db)
    phi1 = 2 * np.pi * u[:, 2]
    phi2 = 2 * np.pi * u[:, 3]
    noise = _standard_normal(u[:, 4:]) / np.sqrt(2)
    t = np.arange(n)
    r = (noise[:, :n] + 1j * noise[:, n:]
         + (np.sqrt(gamma1) * np.exp(1j * phi1))[:, None] * np.exp(2j * np.pi * sc.f1_bins * t / n)
         + (np.sqrt(gamma2) * np.exp(1j * phi2))[:, None] * np.exp(2j * np.pi * sc.f2_bins * t / n))
    truth = {"gamma1": gamma1, "gamma2": gamma2, "phi1": phi1, "phi2": phi2}
    return r, truth


def dump_snapshots(path, sc: Scenario, t0: int, t1: int) -> None:
    """Write a trial range to an .npz trace for debugging."""
    r, truth = draw_snapshots(sc, t0, t1)
    np.savez(path, r=r, trial=np.arange(t0, t1), **truth)
