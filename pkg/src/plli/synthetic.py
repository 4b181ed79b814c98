"""The two-feature benchmark ``f = (x1 + x2)^2`` with standard normal inputs."""
import numpy as np

from .core import Dataset


def synthetic_features(n: int = 1000, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((n, 2))


def black_box(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return (X[:, 0] + X[:, 1]) ** 2


def make_synthetic(n: int = 1000, seed: int = 0) -> Dataset:
    X = synthetic_features(n, seed)
    return Dataset(X, black_box(X), ("x1", "x2"), None)
