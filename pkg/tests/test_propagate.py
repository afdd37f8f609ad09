import numpy as np
import pytest

from qsl.lindblad import LindbladGenerator, maximally_mixed, purity, random_density, random_pure_state
from qsl.linalg import expm
from qsl.liouville import SuperOperator, dissipator_superoperator, hamiltonian_superoperator
from qsl.propagate import (
    PropagationError,
    TimeGrid,
    evolve_direct,
    evolve_superop,
    step_propagators,
    verify_stationary,
)
from qsl.scenarios import catalog_names, catalog_scenario

from conftest import random_generator, random_hermitian

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
BOTH = [evolve_superop, evolve_direct]


def test_time_grid():
    g = TimeGrid(0.0, 2.0, 4)
    assert g.dt == 0.5
    np.testing.assert_array_equal(g.times, [0, 0.5, 1, 1.5, 2])
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 3)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 0)


def test_unitary_purity_constant(rng):
    gen = LindbladGenerator(random_hermitian(rng, 3))
    traj = evolve_superop(gen, random_density(3, 1), TimeGrid(0, 3, 300))
    assert np.ptp(traj.purity) < 1e-10
    # RK4 is not norm preserving; its drift is a truncation error
    assert np.ptp(evolve_direct(gen, random_density(3, 1), TimeGrid(0, 3, 300)).purity) < 1e-8


@pytest.mark.parametrize("evolve", BOTH)
def test_dephasing_closed_form(evolve):
    gen = LindbladGenerator(SZ, [SZ / 2])
    traj = evolve(gen, PLUS, TimeGrid(0, 5, 1000))
    np.testing.assert_allclose(traj.purity, 0.5 + 0.5 * np.exp(-traj.times), atol=1e-8)
    assert np.max(np.abs(np.trace(traj.states, axis1=1, axis2=2) - 1)) < 1e-9


@pytest.mark.parametrize("evolve", BOTH)
def test_zero_generator(evolve):
    rho = random_density(3, 2)
    traj = evolve(LindbladGenerator(np.zeros((3, 3))), rho, TimeGrid(0, 1, 10))
    for s in traj.states:
        np.testing.assert_allclose(s, rho, atol=1e-15)


def test_direct_matches_unitary_closed_form(rng):
    h = random_hermitian(rng, 4)
    rho0 = random_density(4, 5)
    traj = evolve_direct(LindbladGenerator(h), rho0, TimeGrid(0, 2, 1000))
    for t, s in zip(traj.times[::100], traj.states[::100]):
        u = expm(-1j * h * t)
        np.testing.assert_allclose(s, u @ rho0 @ u.conj().T, atol=1e-8)


def test_dual_path_random_scenarios():
    r = np.random.default_rng(99)
    worst = 0.0
    for k in range(50):
        n = (2, 3, 4)[k % 3]
        # O(1) energies and decay rates
        gen = random_generator(r, n, scale=0.3, time_dependent=bool(k % 2), h_scale=0.5)
        rho0 = random_density(n, r) if k % 4 < 2 else random_pure_state(n, r)
        grid = TimeGrid(0.0, 1.0, 200)
        a = evolve_superop(gen, rho0, grid, check=False)
        b = evolve_direct(gen, rho0, grid, check=False)
        worst = max(worst, a.max_discrepancy(b))
    assert worst < 1e-8


def test_cf4_is_fourth_order_and_midpoint_second():
    gen = LindbladGenerator(lambda t: SZ + 2 * np.cos(3 * t) * SX, [0.5 * SZ, 0.3 * SX])
    rho0 = random_density(2, 0)
    ref = evolve_direct(gen, rho0, TimeGrid(0, 2, 8000)).states[-1]
    err = {}
    for scheme in ("cf4", "midpoint"):
        err[scheme] = [
            np.max(np.abs(evolve_superop(gen, rho0, TimeGrid(0, 2, n), scheme=scheme).states[-1] - ref))
            for n in (50, 100)
        ]
    assert err["cf4"][0] / err["cf4"][1] > 12
    assert 3 < err["midpoint"][0] / err["midpoint"][1] < 5
    with pytest.raises(ValueError):
        step_propagators(gen, TimeGrid(0, 1, 2), scheme="euler")


def test_time_independent_uses_single_propagator():
    gen = LindbladGenerator(SZ, [SZ / 2])
    assert isinstance(step_propagators(gen, TimeGrid(0, 1, 5)), np.ndarray)


def test_trajectory_fields():
    gen = LindbladGenerator(SZ, [SZ / 2])
    ref = np.diag([0.5, 0.5]).astype(complex)
    traj = evolve_superop(gen, PLUS, TimeGrid(0, 2, 100), reference=ref)
    assert len(traj.states) == 101
    np.testing.assert_allclose(traj.purity, [purity(s) for s in traj.states], atol=1e-12)
    np.testing.assert_allclose(traj.purity_deviation, 0.5 * np.exp(-traj.times), atol=1e-12)
    np.testing.assert_allclose(traj.bound_floor, 0.5 * np.exp(-traj.times), atol=1e-12)
    np.testing.assert_allclose(traj.bound_ceiling, 0.5 * np.exp(traj.times), atol=1e-9)
    plain = evolve_superop(gen, PLUS, TimeGrid(0, 2, 100))
    assert plain.purity_deviation is None
    assert np.all(plain.bound_ceiling <= 1.0)


def test_invariant_violation_aborts():
    gen = LindbladGenerator(SZ, [SZ / 2])

    def anti_lindblad(g, t):
        # wrong dissipator sign: coherences grow and positivity is lost
        return SuperOperator(hamiltonian_superoperator(g.hamiltonian_at(t))
                             - 1j * dissipator_superoperator(g.jump_ops, g.dim), t)

    with pytest.raises(PropagationError, match="superop-expm"):
        evolve_superop(gen, PLUS, TimeGrid(0, 2, 50), superoperator=anti_lindblad)
    evolve_superop(gen, PLUS, TimeGrid(0, 2, 50), superoperator=anti_lindblad, check=False)


def test_verify_stationary():
    deph = LindbladGenerator(SZ, [SZ / 2])
    grid = TimeGrid(0, 1, 10)
    assert verify_stationary(deph, maximally_mixed(2), grid)
    assert verify_stationary(deph, np.diag([0.3, 0.7]).astype(complex), grid)
    assert not verify_stationary(deph, PLUS, grid)
    td = LindbladGenerator(lambda t: np.cos(t) * SX, [SZ])
    assert verify_stationary(td, maximally_mixed(2), grid)
    assert not verify_stationary(td, np.diag([0.3, 0.7]).astype(complex), grid)


@pytest.mark.parametrize("name", catalog_names())
def test_step_halving_on_catalog(name):
    spec = catalog_scenario(name)
    gen = spec.generator()
    fine = catalog_scenario(name, steps=2 * spec.grid.steps)
    for evolve in BOTH:
        a = evolve(gen, spec.initial_state, spec.grid).states[-1]
        b = evolve(gen, fine.initial_state, fine.grid).states[-1]
        assert np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_positivity(name):
    spec = catalog_scenario(name)
    traj = evolve_superop(spec.generator(), spec.initial_state, spec.grid)
    assert min(np.linalg.eigvalsh(s)[0] for s in traj.states) >= -1e-9
