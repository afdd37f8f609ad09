"""Liouville-space representation of Lindblad dynamics.

Density matrices are flattened row-major, index ``alpha = row * N + col``
(zero-based), so that ``vec(X rho Y) = (X kron Y^T) vec(rho)``. The
superoperator ``S`` is defined through ``i d|rho>/dt = S |rho>``.
"""

from dataclasses import dataclass

import numpy as np

from .lindblad import LindbladGenerator
from .linalg import _kron, adjoint, as_matrix, hermitian_eigenvalues


@dataclass(frozen=True)
class SuperOperator:
    matrix: np.ndarray
    built_at: float = 0.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def vectorize(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got {rho.shape}")
    return rho.reshape(-1).copy()


def devectorize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(n, n).copy()


def hamiltonian_superoperator(h) -> np.ndarray:
    h = as_matrix(h)
    eye = np.eye(h.shape[0])
    return _kron(h, eye) - _kron(eye, h.T)


def dissipator_superoperator(jump_ops, dim: int) -> np.ndarray:
    """Liouville matrix of ``sum_k A rho A^dagger - 1/2 {A^dagger A, rho}``."""
    eye = np.eye(dim)
    out = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for a in jump_ops:
        ada = a.conj().T @ a
        out += _kron(a, a.conj()) - 0.5 * _kron(ada, eye) - 0.5 * _kron(eye, ada.T)
    return out


def superoperator_builder(gen: LindbladGenerator):
    """Return ``t -> build_superoperator(gen, t)`` with the dissipator assembled once.

    Only ``H(t)`` and ``gamma(t)`` vary in time, so repeated builds on a time
    grid need not redo the jump-operator Kronecker products.
    """
    dissipator = dissipator_superoperator(gen.jump_ops, gen.dim) if gen.jump_ops else None

    def build(t: float) -> SuperOperator:
        s = hamiltonian_superoperator(gen.hamiltonian_at(t))
        if dissipator is not None:
            s = s + 1j * gen.gamma(t) * dissipator
        return SuperOperator(s, float(t))

    return build


def build_superoperator(gen: LindbladGenerator, t: float = 0.0) -> SuperOperator:
    """``S = (H kron I - I kron H^T) + i gamma(t) sum_k [...]``."""
    s = hamiltonian_superoperator(gen.hamiltonian_at(t))
    if gen.jump_ops:
        s = s + 1j * gen.gamma(t) * dissipator_superoperator(gen.jump_ops, gen.dim)
    return SuperOperator(s, float(t))


def skew_part(sup) -> np.ndarray:
    """Unhalved skew-Hermitian part ``S - S^dagger``."""
    m = sup.matrix if isinstance(sup, SuperOperator) else as_matrix(sup)
    return m - adjoint(m)


def skew_spectral_norm(gen: LindbladGenerator, t: float = 0.0) -> float:
    """Spectral norm of ``S - S^dagger``: the Liouville purity speed limit rate."""
    herm = 1j * skew_part(build_superoperator(gen, t))
    lam = hermitian_eigenvalues(herm)
    return float(max(abs(lam[0]), abs(lam[-1])))


def unit_skew_norm(gen: LindbladGenerator) -> float:
    """Skew norm with the prefactor set to 1.

    The skew part equals ``i * gamma(t) * (D + D^dagger)`` with ``D`` the
    dissipator, so ``skew_spectral_norm(gen, t) == gamma(t) * unit_skew_norm(gen)``.
    Quadrature uses this to avoid one eigendecomposition per node.
    """
    if not gen.jump_ops:
        return 0.0
    d = dissipator_superoperator(gen.jump_ops, gen.dim)
    lam = hermitian_eigenvalues(-(d + d.conj().T))
    return float(max(abs(lam[0]), abs(lam[-1])))


def steady_state(gen: LindbladGenerator, t: float = 0.0) -> np.ndarray:
    """Unit-trace null vector of the superoperator at time ``t``.

    Picks the right singular vector of the smallest singular value; when the
    kernel is degenerate the result is one element of it, not a canonical one.
    """
    s = build_superoperator(gen, t).matrix
    _, _, vh = np.linalg.svd(s)
    rho = devectorize(vh[-1].conj())
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)
