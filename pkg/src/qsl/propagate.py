"""Time evolution along a uniform grid by two independent routes.

``evolve_superop`` exponentiates the Liouville superoperator; ``evolve_direct``
integrates the master equation in Hilbert space with classic RK4. Agreement
between the two is the package's main numerical self-check.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds as _bounds
from .lindblad import (
    PSD_ATOL,
    TRACE_ATOL,
    InvalidStateError,
    LindbladGenerator,
    apply_generator,
    check_density_matrix,
    purity,
    purity_deviation,
)
from .linalg import HERMITIAN_ATOL, as_matrix, expm, hs_norm
from .liouville import devectorize, superoperator_builder, vectorize

STATIONARY_ATOL = 1e-9

# Two-exponential commutator-free scheme of order 4 (Gauss-Legendre nodes).
_SQ3 = np.sqrt(3.0)
_CF4_NODES = (0.5 - _SQ3 / 6.0, 0.5 + _SQ3 / 6.0)
_CF4_A1 = (3.0 - 2.0 * _SQ3) / 12.0
_CF4_A2 = (3.0 + 2.0 * _SQ3) / 12.0


class PropagationError(RuntimeError):
    """A propagated state left the set of density matrices."""


@dataclass(frozen=True)
class TimeGrid:
    t_start: float = 0.0
    t_end: float = 5.0
    steps: int = 1000

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end={self.t_end} must exceed t_start={self.t_start}")
        if int(self.steps) < 1 or int(self.steps) != self.steps:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps + 1)


@dataclass
class Trajectory:
    grid: TimeGrid
    states: np.ndarray
    method: str
    reference: Optional[np.ndarray] = None
    purity: np.ndarray = field(init=False)
    purity_deviation: Optional[np.ndarray] = field(init=False)
    bounds: dict = field(default_factory=dict)

    def __post_init__(self):
        self.purity = np.array([purity(r) for r in self.states])
        if self.reference is None:
            self.purity_deviation = None
        else:
            self.purity_deviation = np.array(
                [purity_deviation(r, self.reference) for r in self.states]
            )

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def tracked(self) -> np.ndarray:
        """Purity deviation when a reference is set, the purity otherwise."""
        return self.purity if self.purity_deviation is None else self.purity_deviation

    @property
    def bound_floor(self) -> np.ndarray:
        return self.tracked[0] * np.exp(-self.bounds["liouville"])

    @property
    def bound_ceiling(self) -> np.ndarray:
        ceiling = self.tracked[0] * np.exp(self.bounds["liouville"])
        if self.purity_deviation is None:
            ceiling = np.minimum(ceiling, 1.0)
        return ceiling

    def max_discrepancy(self, other: "Trajectory") -> float:
        return float(np.max(np.abs(self.states - other.states)))


def _check_state(rho, step, t, method):
    try:
        return check_density_matrix(rho)
    except InvalidStateError as exc:
        raise PropagationError(f"{method}: state at step {step} (t={t:.6g}) invalid: {exc}") from exc


def _check_trajectory(states, times, method):
    """Batched density-matrix checks; the first offending step is re-checked for the message."""
    herm_defect = np.max(np.abs(states - states.conj().transpose(0, 2, 1)), axis=(1, 2))
    trace_err = np.abs(np.trace(states, axis1=1, axis2=2) - 1.0)
    sym = 0.5 * (states + states.conj().transpose(0, 2, 1))
    lam_min = np.linalg.eigvalsh(sym)[:, 0]
    bad = (herm_defect > HERMITIAN_ATOL) | (trace_err > TRACE_ATOL) | (lam_min < -PSD_ATOL)
    if np.any(bad):
        k = int(np.argmax(bad))
        _check_state(states[k], k, times[k], method)


def _finish(gen, states, grid, method, reference, check):
    if check:
        _check_trajectory(states, grid.times, method)
    traj = Trajectory(grid, states, method, reference)
    traj.bounds = _bounds.cumulative_bounds(gen, grid.times)
    return traj


def step_propagators(gen: LindbladGenerator, grid: TimeGrid, scheme: str = "cf4", superoperator=None):
    """Liouville-space one-step propagators, one per grid interval.

    Returns a single matrix when the generator is time independent (the step
    is then exact). ``superoperator`` replaces :func:`build_superoperator`.
    """
    if superoperator is None:
        cached = superoperator_builder(gen)
        build = lambda _gen, t: cached(t)  # noqa: E731
    else:
        build = superoperator
    dt = grid.dt
    if gen.is_time_independent:
        return expm(-1j * dt * build(gen, grid.t_start).matrix)
    out = []
    for t0 in grid.times[:-1]:
        if scheme == "midpoint":
            out.append(expm(-1j * dt * build(gen, t0 + 0.5 * dt).matrix))
        elif scheme == "cf4":
            s1 = build(gen, t0 + _CF4_NODES[0] * dt).matrix
            s2 = build(gen, t0 + _CF4_NODES[1] * dt).matrix
            first = expm(-1j * dt * (_CF4_A2 * s1 + _CF4_A1 * s2))
            second = expm(-1j * dt * (_CF4_A1 * s1 + _CF4_A2 * s2))
            out.append(second @ first)
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
    return out


def evolve_superop(gen, rho0, grid: TimeGrid, reference=None, check=True, scheme="cf4",
                   superoperator=None, propagators=None) -> Trajectory:
    """Propagate ``|rho>`` with ``exp(-i S dt)`` step by step.

    ``propagators`` may carry the output of :func:`step_propagators` so that
    several initial states share one set of exponentials.
    """
    rho0 = as_matrix(rho0)
    if propagators is None:
        propagators = step_propagators(gen, grid, scheme, superoperator)
    v = vectorize(rho0)
    vecs = [v]
    for k in range(grid.steps):
        u = propagators if isinstance(propagators, np.ndarray) else propagators[k]
        v = u @ v
        vecs.append(v)
    states = np.array([devectorize(x) for x in vecs])
    return _finish(gen, states, grid, "superop-expm", reference, check)


def evolve_direct(gen, rho0, grid: TimeGrid, reference=None, check=True) -> Trajectory:
    """Classic fourth-order Runge-Kutta on the Hilbert-space master equation."""
    rho = as_matrix(rho0).copy()
    dt = grid.dt
    states = [rho]
    for t in grid.times[:-1]:
        k1 = apply_generator(gen, rho, t)
        k2 = apply_generator(gen, rho + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = apply_generator(gen, rho + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = apply_generator(gen, rho + dt * k3, t + dt)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states.append(rho)
    return _finish(gen, np.array(states), grid, "direct-rk4", reference, check)


def evolve(gen, rho0, grid, method="superop", **kwargs) -> Trajectory:
    if method in ("superop", "superop-expm"):
        return evolve_superop(gen, rho0, grid, **kwargs)
    if method in ("direct", "direct-rk4"):
        return evolve_direct(gen, rho0, grid, **kwargs)
    raise ValueError(f"unknown method {method!r}")


def verify_stationary(gen: LindbladGenerator, rho_s, grid: TimeGrid, atol: float = STATIONARY_ATOL) -> bool:
    """True iff ``||L_t(rho_s)||_2 < atol`` at every grid time."""
    times = grid.times[:1] if gen.is_time_independent else grid.times
    return all(hs_norm(apply_generator(gen, rho_s, t)) < atol for t in times)
