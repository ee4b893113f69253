"""Canonical covariance matrices used as targets and test inputs."""

from __future__ import annotations

import numpy as np

from .gaussian import CovarianceMatrix


def vacuum(n_modes: int) -> CovarianceMatrix:
    """N-mode vacuum, covariance ``I/2``."""
    return CovarianceMatrix.vacuum(n_modes)


def two_mode_squeezed(alpha: float) -> CovarianceMatrix:
    """Canonical two-mode squeezed state with squeezing parameter ``alpha``."""
    c, s = np.cosh(2.0 * alpha), np.sinh(2.0 * alpha)
    v = 0.5 * np.array([
        [c, s, 0.0, 0.0],
        [s, c, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, -s, c],
    ])
    return CovarianceMatrix(v)


def cluster_state(adjacency, alpha: float) -> CovarianceMatrix:
    """Gaussian cluster state for a symmetric adjacency matrix.

    The graph-matrix factors are ``X = adjacency`` and
    ``Y = exp(-2 alpha) I``, giving
    ``V = (1/2) [[e^{2a} I, e^{2a} B], [e^{2a} B, e^{-2a} I + e^{2a} B^2]]``.
    """
    b = np.asarray(adjacency, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {b.shape}")
    n = b.shape[0]
    e2, em2 = np.exp(2.0 * alpha), np.exp(-2.0 * alpha)
    v = 0.5 * np.block([
        [e2 * np.eye(n), e2 * b],
        [e2 * b, em2 * np.eye(n) + e2 * (b @ b)],
    ])
    return CovarianceMatrix(v)
