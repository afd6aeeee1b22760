import numpy as np
import pytest

from winselect import make_context, window_catalog

N = 16


@pytest.fixture(scope="session")
def catalog():
    return window_catalog(N)


@pytest.fixture(scope="session")
def ctx():
    return make_context(n=N)


def complex_tone(freq_bins: float, n: int = N, amplitude: complex = 1.0) -> np.ndarray:
    return amplitude * np.exp(2j * np.pi * freq_bins * np.arange(n) / n)


def complex_noise(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
