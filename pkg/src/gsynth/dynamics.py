"""Moment dynamics: drift/diffusion assembly, stability, steady states and
transient covariance evolution.

For a quadratic Hamiltonian matrix ``G`` and coupling rows ``C`` the first
and second moments obey ``d<x>/dt = A <x>`` and
``dV/dt = A V + V A.T + D`` with ``A = Sigma (G + Im(C^dag C))`` and
``D = (1/2) B B^dag``, ``B = i Sigma [-C^dag  C.T]``. A Hurwitz ``A``
makes the steady state the unique solution of ``A V + V A.T + D = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, GsynthError, NotHurwitzError
from .gaussian import CovarianceMatrix, purity, symplectic_form
from .numerics import expm, is_hurwitz, max_abs, solve_lyapunov
from .synthesis import Realization, ConstraintReport, verify_constraints

#: Hard bound on the imaginary residue tolerated when forming the diffusion matrix.
DIFFUSION_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class MomentSystem:
    """Drift ``A``, diffusion ``D`` and the coupling rows that produced them."""

    A: np.ndarray
    D: np.ndarray
    C_all: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.A, dtype=float)
        d = np.asarray(self.D, dtype=float)
        c = np.atleast_2d(np.asarray(self.C_all, dtype=complex))
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
            raise DimensionError(f"drift matrix must be 2N x 2N, got {a.shape}")
        if d.shape != a.shape or c.shape[1] != a.shape[0]:
            raise DimensionError("diffusion and coupling shapes must match the drift")
        if max_abs(d - d.T) > 1e-12 * max(1.0, max_abs(d)):
            raise ValueError("diffusion matrix must be symmetric")
        if np.linalg.eigvalsh(0.5 * (d + d.T)).min() < -1e-10:
            raise ValueError("diffusion matrix must be positive semidefinite")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "D", 0.5 * (d + d.T))
        object.__setattr__(self, "C_all", c)

    @property
    def n_modes(self) -> int:
        return self.A.shape[0] // 2


def build_moment_system(g, c) -> MomentSystem:
    """Assemble drift and diffusion matrices from ``(G, C)``.

    An imaginary residue above ``DIFFUSION_IMAG_TOL`` in the diffusion
    matrix indicates a malformed coupling and raises instead of being
    silently discarded.
    """
    g = np.asarray(g, dtype=float)
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise DimensionError(f"Hamiltonian matrix must be 2N x 2N, got {g.shape}")
    if c.shape[1] != g.shape[0]:
        raise DimensionError(f"coupling rows must have {g.shape[0]} columns, got {c.shape}")
    n = g.shape[0] // 2
    sig = symplectic_form(n)
    a = sig @ (g + (c.conj().T @ c).imag)
    b = 1j * sig @ np.hstack([-c.conj().T, c.T])
    d = 0.5 * (b @ b.conj().T)
    if max_abs(d.imag) > DIFFUSION_IMAG_TOL * max(1.0, max_abs(d.real)):
        raise GsynthError(
            f"diffusion matrix has imaginary residue {max_abs(d.imag):.3e}; coupling is malformed"
        )
    return MomentSystem(A=a, D=d.real, C_all=c)


def steady_state(system: MomentSystem) -> CovarianceMatrix:
    """Unique steady-state covariance of a stable moment system."""
    if not is_hurwitz(system.A):
        raise NotHurwitzError("moment system is unstable; no steady state exists")
    return CovarianceMatrix(solve_lyapunov(system.A, system.D))


@dataclass(frozen=True)
class Trajectory:
    """Sampled first and second moments: ``means[k]``, ``covariances[k]`` at ``times[k]``."""

    times: np.ndarray
    means: np.ndarray
    covariances: np.ndarray


def evolve(system: MomentSystem, v0: CovarianceMatrix, times,
           mean0=None, method: str = "auto") -> Trajectory:
    """Propagate the moment equations from ``v0`` (and ``mean0``, default 0).

    The mean always follows ``exp(A t) mean0``. For the covariance, a
    Hurwitz system uses the exact fixed-point form
    ``V(t) = exp(A t) (V0 - Vinf) exp(A.T t) + Vinf``; otherwise (or when
    ``method="rk4"`` is forced) classical Runge-Kutta integrates
    ``dV/dt = A V + V A.T + D`` with step at most ``1e-3 / ||A||``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-D sequence")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and ascending")
    if method not in ("auto", "closed", "rk4"):
        raise ValueError(f"unknown method {method!r}")
    n2 = system.A.shape[0]
    if v0.V.shape != (n2, n2):
        raise DimensionError("initial covariance size does not match the system")
    mean0 = np.zeros(n2) if mean0 is None else np.asarray(mean0, dtype=float)
    if mean0.shape != (n2,):
        raise DimensionError(f"initial mean must have length {n2}")

    hurwitz = is_hurwitz(system.A)
    if method == "closed" and not hurwitz:
        raise NotHurwitzError("closed-form propagation requires a Hurwitz drift")
    use_closed = method == "closed" or (method == "auto" and hurwitz)

    propagators = [expm(system.A, t) for t in times]
    means = np.stack([e @ mean0 for e in propagators])
    if use_closed:
        v_inf = solve_lyapunov(system.A, system.D)
        covs = []
        for e in propagators:
            v = e @ (v0.V - v_inf) @ e.T + v_inf
            covs.append(0.5 * (v + v.T))
    else:
        covs = _rk4_covariances(system, v0.V, times)
    return Trajectory(times=times, means=means, covariances=np.stack(covs))


def _rk4_covariances(system: MomentSystem, v0: np.ndarray, times: np.ndarray) -> list[np.ndarray]:
    a, d = system.A, system.D
    norm_a = float(np.linalg.norm(a, 2))
    max_step = 1e-3 / norm_a if norm_a > 0 else np.inf

    def rhs(v):
        return a @ v + v @ a.T + d

    covs = []
    v = v0.copy()
    t_now = 0.0
    for t in times:
        span = t - t_now
        steps = max(1, int(np.ceil(span / max_step))) if span > 0 else 0
        h = span / steps if steps else 0.0
        for _ in range(steps):
            k1 = rhs(v)
            k2 = rhs(v + 0.5 * h * k1)
            k3 = rhs(v + 0.5 * h * k2)
            k4 = rhs(v + h * k3)
            v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            v = 0.5 * (v + v.T)
        t_now = t
        covs.append(v.copy())
    return covs


@dataclass(frozen=True)
class GenerationReport:
    """Outcome of checking a design against its target covariance."""

    hurwitz: bool
    lyapunov_residual: float
    max_error: float
    steady_purity: float
    constraints: ConstraintReport
    tolerance: float
    steady_covariance: CovarianceMatrix | None

    @property
    def generates_target(self) -> bool:
        return self.hurwitz and self.max_error <= self.tolerance


def verify_generation(realization: Realization, target: CovarianceMatrix,
                      tol: float = 1e-8, extra_rows=None) -> GenerationReport:
    """Solve the design's steady state and compare it with ``target``.

    Never raises on a failing design: instability or a mismatch is reported
    through the flags and the max-norm error. ``extra_rows`` stacks
    parasitic coupling rows (for example thermal channels) under the
    designed coupling before solving; the constraint flags still refer to
    the designed coupling alone.
    """
    c_all = realization.C
    if extra_rows is not None and len(extra_rows):
        c_all = np.vstack([c_all, np.atleast_2d(np.asarray(extra_rows, dtype=complex))])
    system = build_moment_system(realization.G, c_all)
    constraints = verify_constraints(realization)
    if not is_hurwitz(system.A):
        return GenerationReport(
            hurwitz=False, lyapunov_residual=float("inf"), max_error=float("inf"),
            steady_purity=float("nan"), constraints=constraints, tolerance=tol,
            steady_covariance=None,
        )
    v_inf = steady_state(system)
    residual = float(np.linalg.norm(system.A @ v_inf.V + v_inf.V @ system.A.T + system.D))
    return GenerationReport(
        hurwitz=True,
        lyapunov_residual=residual,
        max_error=max_abs(v_inf.V - target.V),
        steady_purity=purity(v_inf),
        constraints=constraints,
        tolerance=tol,
        steady_covariance=v_inf,
    )
