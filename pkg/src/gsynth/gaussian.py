"""Gaussian-state data model and metrics.

Quadratures are ordered ``x = (q_1 .. q_N, p_1 .. p_N)`` with ``hbar = 1``,
so the vacuum covariance is ``I/2`` and an N-mode state is pure exactly
when ``det(V) = 2**(-2N)``. A zero-mean pure state is equivalently labeled
by its complex symmetric graph matrix ``Z = X + iY`` with ``Y`` positive
definite; conversions in both directions are provided, together with
purity, symplectic spectra, mode reduction and the logarithmic negativity
of two-mode states (natural logarithm convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegenerateCovarianceError,
    DimensionError,
    InvalidCovarianceError,
    NotPureStateError,
    UnsupportedBipartitionError,
)
from .numerics import DEFAULT_TOL, max_abs

#: Absolute eigenvalue slack allowed when checking physicality.
PHYSICALITY_TOL = 1e-9

#: Strict positive-definiteness floor for the imaginary part of a graph matrix.
POSDEF_TOL = 1e-12


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """The canonical antisymmetric form ``[[0, I], [-I, 0]]`` for n modes."""
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    zero = np.zeros((n_modes, n_modes))
    eye = np.eye(n_modes)
    return np.block([[zero, eye], [-eye, zero]])


def _check_symmetric(m: np.ndarray, name: str, tol: float = DEFAULT_TOL) -> np.ndarray:
    if max_abs(m - m.T) > tol * max(1.0, max_abs(m)):
        raise ValueError(f"{name} must be symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class CovarianceMatrix:
    """A physical covariance matrix over ``(q_1..q_N, p_1..p_N)``.

    Construction validates shape, finiteness, symmetry and the uncertainty
    relation ``V + (i/2) Sigma >= 0`` (eigenvalues no lower than
    ``-PHYSICALITY_TOL``); the stored matrix is exactly symmetrized.
    """

    V: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.V, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 or v.shape[0] == 0:
            raise DimensionError(f"covariance matrix must be 2N x 2N, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidCovarianceError("covariance matrix has non-finite entries")
        try:
            v = _check_symmetric(v, "covariance matrix")
        except ValueError as exc:
            raise InvalidCovarianceError(str(exc)) from exc
        n = v.shape[0] // 2
        physicality = np.linalg.eigvalsh(v + 0.5j * symplectic_form(n))
        if physicality.min() < -PHYSICALITY_TOL:
            raise InvalidCovarianceError(
                f"uncertainty relation violated (min eigenvalue {physicality.min():.3e})"
            )
        object.__setattr__(self, "V", v)

    @property
    def n_modes(self) -> int:
        return self.V.shape[0] // 2

    def is_pure(self, tol: float = DEFAULT_TOL) -> bool:
        """Whether ``det(V)`` equals ``2**(-2N)`` to relative tolerance ``tol``."""
        return abs(float(np.linalg.det(self.V)) * 4.0 ** self.n_modes - 1.0) <= tol

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceMatrix":
        return cls(0.5 * np.eye(2 * n_modes))


@dataclass(frozen=True)
class GraphMatrix:
    """The complex symmetric label ``Z = X + iY`` of a pure Gaussian state.

    ``X`` and ``Y`` are real symmetric N x N matrices and ``Y`` is positive
    definite (minimum eigenvalue above ``POSDEF_TOL``).
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.X, dtype=float)
        y = np.asarray(self.Y, dtype=float)
        if x.ndim != 2 or x.shape != y.shape or x.shape[0] != x.shape[1] or x.shape[0] == 0:
            raise DimensionError(
                f"graph matrix parts must be equal square matrices, got {x.shape} and {y.shape}"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("graph matrix has non-finite entries")
        x = _check_symmetric(x, "real part of graph matrix")
        y = _check_symmetric(y, "imaginary part of graph matrix")
        if np.linalg.eigvalsh(y).min() <= POSDEF_TOL:
            raise ValueError("imaginary part of graph matrix must be positive definite")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def Z(self) -> NDArray[np.complex128]:
        return self.X + 1j * self.Y

    @property
    def n_modes(self) -> int:
        return self.X.shape[0]

    @classmethod
    def vacuum(cls, n_modes: int) -> "GraphMatrix":
        return cls(np.zeros((n_modes, n_modes)), np.eye(n_modes))


def factor_covariance(cov: CovarianceMatrix, tol: float = DEFAULT_TOL) -> GraphMatrix:
    """Factor a pure covariance matrix into its graph matrix.

    With ``V`` partitioned into N x N quadrature blocks, the factorization
    inverts ``V = (1/2) [[Y^-1, Y^-1 X], [X Y^-1, X Y^-1 X + Y]]``:
    ``Y = (2 V_qq)^-1`` and ``X = Y (2 V_qp)``.

    Raises
    ------
    NotPureStateError
        If the determinant test for purity fails at tolerance ``tol``.
    DegenerateCovarianceError
        If the position block is singular.
    """
    if not cov.is_pure(tol):
        p = purity(cov)
        raise NotPureStateError(f"state is not pure (purity {p:.6f})")
    n = cov.n_modes
    v_qq = cov.V[:n, :n]
    v_qp = cov.V[:n, n:]
    try:
        y = np.linalg.inv(2.0 * v_qq)
    except np.linalg.LinAlgError as exc:
        raise DegenerateCovarianceError("position block of the covariance is singular") from exc
    x = y @ (2.0 * v_qp)
    # Purity guarantees symmetry of both factors; discard rounding skew.
    return GraphMatrix(0.5 * (x + x.T), 0.5 * (y + y.T))


def graph_to_covariance(graph: GraphMatrix) -> CovarianceMatrix:
    """Covariance matrix of the pure state labeled by ``graph``."""
    y_inv = np.linalg.inv(graph.Y)
    x = graph.X
    v = 0.5 * np.block([[y_inv, y_inv @ x], [x @ y_inv, x @ y_inv @ x + graph.Y]])
    return CovarianceMatrix(0.5 * (v + v.T))


def purity(cov: CovarianceMatrix) -> float:
    """Purity ``1 / (2**N sqrt(det V))``, in ``(0, 1]`` for physical states."""
    det = float(np.linalg.det(cov.V))
    if det <= 0.0:
        raise InvalidCovarianceError(f"covariance determinant {det:.3e} is not positive")
    return 1.0 / (2.0 ** cov.n_modes * np.sqrt(det))


def symplectic_eigenvalues(v, pair_tol: float = DEFAULT_TOL) -> NDArray[np.float64]:
    """The N symplectic eigenvalues of a 2N x 2N covariance-like matrix.

    Computed as the absolute eigenvalues of ``i Sigma v``, which occur in
    equal pairs; pairs are merged by sorting and averaging adjacent values.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ v)))
    gaps = moduli[1::2] - moduli[0::2]
    if gaps.size and gaps.max() > pair_tol * max(1.0, float(moduli[-1])):
        raise InvalidCovarianceError(
            "eigenvalues do not pair into a symplectic spectrum; matrix is not covariance-like"
        )
    return 0.5 * (moduli[0::2] + moduli[1::2])


def log_negativity(cov: CovarianceMatrix) -> float:
    """Logarithmic negativity of a two-mode state across the 1|1 split.

    Partially transposes the second mode (sign flip of its momentum row and
    column) and sums ``max(0, -ln(2 nu))`` over the symplectic eigenvalues
    ``nu`` of the result.
    """
    if cov.n_modes != 2:
        raise UnsupportedBipartitionError(
            f"logarithmic negativity is implemented for 2 modes, got {cov.n_modes}"
        )
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    nus = symplectic_eigenvalues(flip @ cov.V @ flip)
    return float(np.sum(np.maximum(0.0, -np.log(2.0 * nus))))


def reduced_state(cov: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Restriction of the state to the given modes, preserving (q.., p..) order."""
    modes = list(modes)
    n = cov.n_modes
    if len(set(modes)) != len(modes):
        raise ValueError(f"modes must be distinct, got {modes}")
    for m in modes:
        if not 0 <= m < n:
            raise IndexError(f"mode index {m} out of range for {n} modes")
    idx = modes + [n + m for m in modes]
    return CovarianceMatrix(cov.V[np.ix_(idx, idx)])
