"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
functions here add the shape and finiteness checks the rest of the package
relies on, plus a Jacobi eigensolver kept as an independent cross-check for
the LAPACK route.
"""

import numpy as np
import scipy.linalg

HERMITIAN_ATOL = 1e-10


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return _kron(a, b)


def _kron(a, b):
    # Broadcasting form of np.kron for 2-d arrays; avoids its per-call overhead,
    # which dominates when small superoperators are rebuilt every time step.
    (m, n), (p, q) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(m * p, n * q)


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(_square(a)))


def matmul(a, b) -> np.ndarray:
    return as_matrix(a) @ as_matrix(b)


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm ``sqrt(tr(a^dagger a))``."""
    m = as_matrix(a)
    return float(np.sqrt(np.sum(m.real**2 + m.imag**2)))


def is_hermitian(a, atol: float = HERMITIAN_ATOL) -> bool:
    m = _square(a)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


def hermitian_eigenvalues(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian to within ``atol`` entrywise.
    atol : float
        Largest tolerated entry of ``|a - a^dagger|``.

    Raises
    ------
    NotHermitianError
        If the entrywise Hermiticity defect exceeds ``atol``.
    """
    m = _square(a)
    defect = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if defect > atol:
        raise NotHermitianError(f"max |a - a^dagger| = {defect:.3e} exceeds {atol:.1e}")
    # LAPACK zheevd reads one triangle only; symmetrize so both halves count.
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def spectral_norm(a) -> float:
    """Largest singular value, as sqrt of the top eigenvalue of ``a^dagger a``."""
    m = _square(a)
    gram = m.conj().T @ m
    top = hermitian_eigenvalues(gram, atol=np.inf)[-1]
    return float(np.sqrt(max(top, 0.0)))


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Pade kernel."""
    return scipy.linalg.expm(_square(a))


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b - b @ a


def jacobi_eigenvalues(a, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Slow (pure Python loops) and meant for small matrices: it exists so that
    the LAPACK eigenvalues can be checked against an unrelated algorithm.
    """
    m = _square(a).copy()
    m = 0.5 * (m + m.conj().T)
    n = m.shape[0]
    scale = max(hs_norm(m), 1.0)
    for _ in range(max_sweeps):
        off = hs_norm(m - np.diag(np.diag(m)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # Unitary J = diag(1, e^{-i phase}) . real rotation zeroes m[p, q].
                phase = apq / abs(apq)
                app, aqq = m[p, p].real, m[q, q].real
                theta = 0.5 * np.arctan2(2.0 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                m = rot.conj().T @ m @ rot
    return np.sort(np.diag(m).real)
