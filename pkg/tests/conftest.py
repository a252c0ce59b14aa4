"""Shared scenario builders and the exact-dynamics test corpus."""

import time
from types import SimpleNamespace

import numpy as np
import pytest

from finbath.models import (
    InitialCondition,
    RandomMatrixModel,
    SpinChainModel,
    build_random_matrix,
    build_spin_chain,
    prepare_initial,
    random_matrix_bath_labels,
    spin_chain_bath_labels,
)
from finbath.qdyn import evolve, partial_trace
from finbath.thermo import BathSpectrum, build_trajectory


def chain_scenario(
    n_bath_spins, system_state="maximally_mixed", t0=0.25, t_max=10.0, n_points=201
):
    model = SpinChainModel(n_bath_spins=n_bath_spins)
    h_sys, h_bath, v_int, space = build_spin_chain(model)
    bath_labels = spin_chain_bath_labels(n_bath_spins)
    spec = BathSpectrum.from_embedded(h_bath, bath_labels)
    rho0 = prepare_initial(InitialCondition(system_state, 1.0 / t0), h_sys, spec)
    h_total = h_sys + h_bath + v_int
    times = np.linspace(0.0, t_max, n_points)
    states = evolve(rho0, h_total, times)
    traj = build_trajectory(states, times, spec, keep_system=("S",))
    return SimpleNamespace(
        name=f"chain-N{n_bath_spins}-{system_state}-T{t0}",
        spec=spec,
        traj=traj,
        states=states,
        rho0=rho0,
        h_total=h_total,
        space=space,
        bath_labels=bath_labels,
        times=times,
    )


def random_matrix_scenario(
    v1, system_state="maximally_mixed", t0=0.25, seed=1, t_max=10.0, n_points=201
):
    model = RandomMatrixModel(v1=v1, seed=seed)
    h_sys, h_bath, v_int, space = build_random_matrix(model)
    bath_labels = random_matrix_bath_labels()
    spec = BathSpectrum.from_embedded(h_bath, bath_labels)
    rho0 = prepare_initial(InitialCondition(system_state, 1.0 / t0), h_sys, spec)
    h_total = h_sys + h_bath + v_int
    times = np.linspace(0.0, t_max, n_points)
    states = evolve(rho0, h_total, times)
    traj = build_trajectory(states, times, spec, keep_system=("S",))
    return SimpleNamespace(
        name=f"rm-V{v1}-{system_state}-T{t0}-seed{seed}",
        spec=spec,
        traj=traj,
        states=states,
        rho0=rho0,
        h_total=h_total,
        space=space,
        bath_labels=bath_labels,
        times=times,
    )


@pytest.fixture(scope="session")
def corpus():
    """Every exact-dynamics scenario: both models, both initial states."""
    start = time.perf_counter()
    scenarios = [
        chain_scenario(n, "maximally_mixed", t0=0.25) for n in (1, 3, 5)
    ]
    scenarios += [chain_scenario(n, "excited", t0=2.0) for n in (1, 3, 5)]
    scenarios += [
        random_matrix_scenario(v1, "maximally_mixed", t0=0.25) for v1 in (10, 50, 100)
    ]
    scenarios.append(random_matrix_scenario(10, "excited", t0=2.0))
    build_seconds = time.perf_counter() - start
    return SimpleNamespace(scenarios=scenarios, build_seconds=build_seconds)
