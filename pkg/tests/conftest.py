import numpy as np
import pytest

from qsl.lindblad import Cosine, LindbladGenerator


def cgauss(rng, *shape, scale=1.0):
    return scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape))


def random_hermitian(rng, n, scale=1.0):
    a = cgauss(rng, n, n, scale=scale)
    return 0.5 * (a + a.conj().T)


def random_generator(rng, n, n_jumps=None, scale=0.5, time_dependent=False, hermitian_jumps=False, h_scale=1.0):
    """Random Lindblad generator; optionally with H(t) and a cosine prefactor."""
    if n_jumps is None:
        n_jumps = int(rng.integers(1, 4))
    jumps = []
    for _ in range(n_jumps):
        a = cgauss(rng, n, n, scale=scale)
        jumps.append(0.5 * (a + a.conj().T) if hermitian_jumps else a)
    h0 = random_hermitian(rng, n, h_scale)
    if not time_dependent:
        return LindbladGenerator(h0, jumps)
    h1 = random_hermitian(rng, n, h_scale)
    omega = float(rng.uniform(0.5, 2.0))

    def h(t):
        return h0 + np.cos(omega * t) * h1

    return LindbladGenerator(h, jumps, Cosine(1.0, float(rng.uniform(0, 0.9)), omega))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
