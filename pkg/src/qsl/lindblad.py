"""Density matrices and the Lindblad master equation in Hilbert space."""

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .linalg import HERMITIAN_ATOL, as_matrix, hermitian_eigenvalues, is_hermitian

TRACE_ATOL = 1e-10
PSD_ATOL = 1e-9

MatrixOrCallable = Union[np.ndarray, Callable[[float], np.ndarray]]


class InvalidStateError(ValueError):
    """A matrix failed the density-matrix checks (Hermitian, unit trace, PSD)."""


def check_density_matrix(rho, atol_herm=HERMITIAN_ATOL, atol_trace=TRACE_ATOL, atol_psd=PSD_ATOL):
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {rho.shape}")
    if not is_hermitian(rho, atol_herm):
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol_trace:
        raise InvalidStateError(f"trace is {tr:.3e}, expected 1")
    lam_min = hermitian_eigenvalues(rho, atol=atol_herm)[0]
    if lam_min < -atol_psd:
        raise InvalidStateError(f"minimum eigenvalue {lam_min:.3e} is below -{atol_psd:.0e}")
    return rho


class Prefactor:
    """Real non-negative time-dependent scale applied to the dissipator."""

    is_constant = False

    def __call__(self, t: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Prefactor):
    value: float = 1.0
    is_constant = True

    def __call__(self, t):
        return self.value


@dataclass(frozen=True)
class Cosine(Prefactor):
    """``offset + amplitude * cos(omega * t + phase)``."""

    offset: float = 1.0
    amplitude: float = 0.0
    omega: float = 1.0
    phase: float = 0.0

    def __call__(self, t):
        return self.offset + self.amplitude * np.cos(self.omega * t + self.phase)


@dataclass(frozen=True)
class Exponential(Prefactor):
    """``value * exp(-rate * t)``."""

    value: float = 1.0
    rate: float = 0.0

    def __call__(self, t):
        return self.value * np.exp(-self.rate * t)


@dataclass(frozen=True)
class Step(Prefactor):
    """``before`` for ``t < t_switch`` and ``after`` from then on."""

    before: float = 1.0
    after: float = 1.0
    t_switch: float = 0.0

    def __call__(self, t):
        return self.before if t < self.t_switch else self.after


@dataclass
class LindbladGenerator:
    """Hamiltonian, jump operators and dissipator prefactor of a master equation.

    ``hamiltonian`` is either a constant Hermitian matrix or a callable
    ``H(t)``. Jump operators already carry their rates (``sqrt(rate) * A``).
    """

    hamiltonian: MatrixOrCallable
    jump_ops: Sequence[np.ndarray] = ()
    prefactor: Callable[[float], float] = field(default_factory=Constant)

    def __post_init__(self):
        if not callable(self.hamiltonian):
            self.hamiltonian = as_matrix(self.hamiltonian)
            if not is_hermitian(self.hamiltonian):
                raise ValueError("Hamiltonian is not Hermitian")
            dim = self.hamiltonian.shape[0]
        else:
            dim = as_matrix(self.hamiltonian(0.0)).shape[0]
        self.jump_ops = tuple(as_matrix(a) for a in self.jump_ops)
        for a in self.jump_ops:
            if a.shape != (dim, dim):
                raise ValueError(f"jump operator of shape {a.shape} does not match dim {dim}")
        self.dim = dim

    def hamiltonian_at(self, t: float) -> np.ndarray:
        if callable(self.hamiltonian):
            h = as_matrix(self.hamiltonian(t))
            if not is_hermitian(h):
                raise ValueError(f"H({t}) is not Hermitian")
            return h
        return self.hamiltonian

    def gamma(self, t: float) -> float:
        g = float(self.prefactor(t))
        if g < 0:
            raise ValueError(f"prefactor({t}) = {g} is negative")
        return g

    @property
    def is_time_independent(self) -> bool:
        return not callable(self.hamiltonian) and getattr(self.prefactor, "is_constant", False)


def apply_generator(gen: LindbladGenerator, rho, t: float = 0.0) -> np.ndarray:
    """Right-hand side ``d rho / dt = -i[H, rho] + gamma(t) * D(rho)``."""
    rho = as_matrix(rho)
    if rho.shape != (gen.dim, gen.dim):
        raise ValueError(f"state of shape {rho.shape} does not match generator dim {gen.dim}")
    h = gen.hamiltonian_at(t)
    out = -1j * (h @ rho - rho @ h)
    if gen.jump_ops:
        diss = np.zeros_like(rho)
        for a in gen.jump_ops:
            ad = a.conj().T
            ada = ad @ a
            diss += a @ rho @ ad - 0.5 * (ada @ rho + rho @ ada)
        out += gen.gamma(t) * diss
    return out


def purity(rho) -> float:
    rho = as_matrix(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def purity_deviation(rho, rho_s) -> float:
    """Squared Hilbert-Schmidt distance ``tr[(rho - rho_s)^2]``."""
    rho, rho_s = as_matrix(rho), as_matrix(rho_s)
    if rho.shape != rho_s.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {rho_s.shape}")
    return purity(rho - rho_s)


def partial_trace(rho_ab, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    rho_ab = as_matrix(rho_ab)
    if rho_ab.shape != (dim_a * dim_b, dim_a * dim_b):
        raise ValueError(f"shape {rho_ab.shape} does not factor as {dim_a} x {dim_b}")
    t = rho_ab.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def diagonal_projection(rho) -> np.ndarray:
    return np.diag(np.diag(as_matrix(rho)))


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128) / n


def random_pure_state(n: int, seed=None) -> np.ndarray:
    """Haar-random pure state as a projector, from a normalized complex Gaussian."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_density(n: int, seed=None) -> np.ndarray:
    """Mixed state ``G G^dagger / tr(G G^dagger)`` with complex Gaussian ``G``."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
