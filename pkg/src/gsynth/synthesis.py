"""Construction of a preparing system from a feasible block decomposition.

Given the graph matrix of a feasible target state, the synthesis chain
assigns one oscillator frequency per mode (``build_R``), derives the
antisymmetric correction ``Gamma = X R Y`` (``build_Gamma``), picks a
cyclic vector for the coupling (``find_cyclic_vector``) and assembles the
Hamiltonian matrix ``G`` and the coupling row ``C``. The result drives the
target state as the unique steady state of the associated moment dynamics,
using a single dissipative channel and no oscillator-oscillator couplings.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionError,
    InfeasibleStateError,
    InvalidRError,
    SingularMatrixError,
)
from .gaussian import GraphMatrix
from .numerics import DEFAULT_TOL, max_abs
from .structure import (
    LAMBDA,
    PI,
    XI_PHI,
    BlockDecomposition,
    decompose,
    find_cyclic_vector,
    is_controllable,
)


@dataclass(frozen=True)
class Realization:
    """A linear open-system design ``(R, Gamma, P, G, C)`` for a target state.

    ``R`` is the diagonal frequency matrix, ``Gamma`` the antisymmetric free
    parameter, ``P`` the N x K coupling seed, ``G`` the 2N x 2N Hamiltonian
    matrix and ``C`` the K x 2N coupling row(s). The target's graph matrix
    is kept alongside so the design can be re-validated on its own.
    """

    R: np.ndarray
    Gamma: np.ndarray
    P: np.ndarray
    G: np.ndarray
    C: np.ndarray
    graph: GraphMatrix

    def __post_init__(self):
        n = self.graph.n_modes
        r = np.asarray(self.R, dtype=float)
        gamma = np.asarray(self.Gamma, dtype=float)
        p = np.atleast_2d(np.asarray(self.P, dtype=complex).T).T
        g = np.asarray(self.G, dtype=float)
        c = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if r.shape != (n, n) or gamma.shape != (n, n) or g.shape != (2 * n, 2 * n):
            raise DimensionError("R, Gamma and G must be N x N, N x N and 2N x 2N")
        if p.shape[0] != n or c.shape != (p.shape[1], 2 * n):
            raise DimensionError(
                f"P must be N x K and C must be K x 2N, got {p.shape} and {c.shape}"
            )
        scale = max(1.0, max_abs(r))
        if max_abs(r - np.diag(np.diag(r))) > DEFAULT_TOL * scale:
            raise ValueError("R must be diagonal")
        if max_abs(gamma + gamma.T) > DEFAULT_TOL * max(1.0, max_abs(gamma)):
            raise ValueError("Gamma must be antisymmetric")
        if max_abs(g - g.T) > DEFAULT_TOL * max(1.0, max_abs(g)):
            raise ValueError("G must be symmetric")
        object.__setattr__(self, "R", r)
        object.__setattr__(self, "Gamma", gamma)
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "G", 0.5 * (g + g.T))
        object.__setattr__(self, "C", c)

    @property
    def n_modes(self) -> int:
        return self.graph.n_modes

    @property
    def n_channels(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class ConstraintReport:
    """Validation flags for the two structural constraints plus the rank test."""

    passive_diagonal: bool
    single_channel: bool
    rank_condition: bool
    frequencies: np.ndarray | None
    violations: tuple[str, ...]

    @property
    def all_ok(self) -> bool:
        return not self.violations


def build_R(dec: BlockDecomposition) -> NDArray[np.float64]:
    """Diagonal frequency matrix for a feasible decomposition.

    Blockwise assignment in certificate order: a lone scalar gets 0, a
    ``pi`` block gets ``diag(0, 1)``, a leading coupled pair gets
    ``diag(1, -1)`` and the j-th block thereafter gets ``diag(j, -j)``,
    pulled back through the certificate permutation to mode coordinates.
    The result satisfies the consistency identity ``-Z R Z = R``.
    """
    if not dec.feasible:
        raise InfeasibleStateError(dec.certificate)
    diag_entries: list[float] = []
    for index, blk in enumerate(dec.blocks, start=1):
        if blk.tag == LAMBDA:
            diag_entries.append(0.0)
        elif blk.tag == PI:
            diag_entries.extend([0.0, 1.0])
        elif index == 1:
            diag_entries.extend([1.0, -1.0])
        else:
            diag_entries.extend([float(index), -float(index)])
    r_tilde = np.diag(diag_entries)
    z_tilde = np.zeros((dec.n_modes, dec.n_modes), dtype=complex)
    at = 0
    for blk in dec.blocks:
        z_tilde[at:at + blk.size, at:at + blk.size] = blk.block
        at += blk.size
    if max_abs(-z_tilde @ r_tilde @ z_tilde - r_tilde) > DEFAULT_TOL * max(1.0, max_abs(r_tilde)):
        raise InvalidRError("frequency assignment violates the block consistency identity")
    # Pull back through the permutation: mode image[s] carries slot s.
    r = np.zeros(dec.n_modes)
    for slot, mode in enumerate(dec.permutation.image):
        r[mode] = diag_entries[slot]
    return np.diag(r)


def build_Gamma(graph: GraphMatrix, r, tol: float = DEFAULT_TOL) -> NDArray[np.float64]:
    """The antisymmetric parameter ``Gamma = X R Y``.

    Requires the consistency identity ``-Z R Z = R`` to hold at tolerance
    ``tol``; antisymmetry of the result is then automatic and checked.
    """
    r = np.asarray(r, dtype=float)
    z = graph.Z
    scale = max(1.0, max_abs(r), max_abs(z) ** 2 * max_abs(r))
    if max_abs(-z @ r @ z - r) > tol * scale:
        raise InvalidRError("-Z R Z = R fails; R is not consistent with this graph matrix")
    gamma = graph.X @ r @ graph.Y
    if max_abs(gamma + gamma.T) > tol * max(1.0, max_abs(gamma)):
        raise InvalidRError("X R Y is not antisymmetric; R is not consistent")
    return 0.5 * (gamma - gamma.T)


def build_G(x, y, r, gamma) -> NDArray[np.float64]:
    """Hamiltonian matrix of the general covariance-assignment family.

    ``G = [[X R X + Y R Y - Gamma Y^-1 X - X Y^-1 Gamma.T, -X R + Gamma Y^-1],
    [-R X + Y^-1 Gamma.T, R]]``. When ``Gamma = X R Y`` and ``-Z R Z = R``
    this collapses to ``diag(R, R)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.asarray(r, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if not (x.shape == y.shape == r.shape == gamma.shape):
        raise DimensionError("X, Y, R and Gamma must share one square shape")
    try:
        y_inv = np.linalg.inv(y)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("Y must be invertible") from exc
    g11 = x @ r @ x + y @ r @ y - gamma @ y_inv @ x - x @ y_inv @ gamma.T
    g12 = -x @ r + gamma @ y_inv
    g21 = -r @ x + y_inv @ gamma.T
    return np.block([[g11, g12], [g21, r]])


def build_C(graph: GraphMatrix, p) -> NDArray[np.complex128]:
    """Coupling rows ``C = P.T [-Z  I]`` for a coupling seed ``P`` (N x K)."""
    p = np.atleast_2d(np.asarray(p, dtype=complex).T).T
    n = graph.n_modes
    if p.shape[0] != n:
        raise DimensionError(f"P must have {n} rows, got shape {p.shape}")
    return p.T @ np.hstack([-graph.Z, np.eye(n)])


def assemble_realization(graph: GraphMatrix, r, gamma, p) -> Realization:
    """Package explicit parameters ``(R, Gamma, P)`` into a full design."""
    g = build_G(graph.X, graph.Y, r, gamma)
    c = build_C(graph, p)
    return Realization(R=np.asarray(r, float), Gamma=np.asarray(gamma, float),
                       P=p, G=g, C=c, graph=graph)


def synthesize(graph: GraphMatrix, tol: float = DEFAULT_TOL,
               rng: np.random.Generator | None = None) -> Realization:
    """Design a single-channel passive-diagonal system preparing ``graph``.

    Runs the full chain: feasibility decomposition, frequency assignment,
    ``Gamma = X R Y``, a unit-norm cyclic vector for ``Q = -R Z`` (any
    nonzero scaling preserves the rank condition, so the normalization is
    only for reproducible output) and the final ``(G, C)`` pair. The
    returned Hamiltonian matrix is stored in its exact reduced form
    ``diag(R, R)`` after verifying the general construction collapses to it.

    Raises
    ------
    InfeasibleStateError
        If the state fails the block-structure test; carries the certificate.
    """
    dec = decompose(graph, tol)
    if not dec.feasible:
        raise InfeasibleStateError(dec.certificate)
    r = build_R(dec)
    gamma = build_Gamma(graph, r, tol)
    q = -r @ graph.Z
    p = find_cyclic_vector(q, tol, rng).reshape(-1, 1)
    realization = assemble_realization(graph, r, gamma, p)
    g_exact = np.block([[r, np.zeros_like(r)], [np.zeros_like(r), r]])
    if max_abs(realization.G - g_exact) > tol * max(1.0, max_abs(r)):
        raise InvalidRError("constructed Hamiltonian does not reduce to the passive diagonal form")
    return replace(realization, G=g_exact)


def verify_constraints(realization: Realization, tol: float = DEFAULT_TOL) -> ConstraintReport:
    """Check a design against the structural constraints.

    Reports whether ``G`` is the passive diagonal form ``diag(d, d)``,
    whether exactly one designed dissipative channel is present, and
    whether the controllability rank condition holds for
    ``Q = -i R Y + Y^-1 Gamma`` with the stored coupling seed.
    """
    n = realization.n_modes
    g = realization.G
    violations: list[str] = []

    scale = max(1.0, max_abs(g))
    diagonal = max_abs(g - np.diag(np.diag(g))) <= tol * scale
    d = np.diag(g)
    passive = diagonal and max_abs(d[:n] - d[n:]) <= tol * scale
    if not passive:
        violations.append("Hamiltonian matrix is not of the passive diagonal form diag(d, d)")

    single = realization.n_channels == 1
    if not single:
        violations.append(f"{realization.n_channels} designed channels present, expected 1")

    y_inv = np.linalg.inv(realization.graph.Y)
    q = -1j * realization.R @ realization.graph.Y + y_inv @ realization.Gamma
    rank_ok = is_controllable(q, realization.P, tol)
    if not rank_ok:
        violations.append(f"coupling seed does not reach all {n} modes (rank condition fails)")

    return ConstraintReport(
        passive_diagonal=passive,
        single_channel=single,
        rank_condition=rank_ok,
        frequencies=d[:n].copy() if passive else None,
        violations=tuple(violations),
    )
