#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import numpy.testing as npt
import pytest

from conftest import random_spec, random_system
from superradiance.initial import InitialStateSpec, initial_state
from superradiance.model import CollectiveRates, SystemParams
from superradiance.oracle import (
    FullDensityMatrix, OracleCapacityError, SymmetryViolationError,
    atom_operator, check_capacity, collective_operator, full_evolve,
    full_hamiltonian, full_liouvillian, full_steady_state, jump_operators,
    lindblad_rhs, product_density_matrix, project_collective)
from superradiance.symindex import CapacityError


def test_capacity():
    assert check_capacity(3, 3) == 27
    with pytest.raises(OracleCapacityError):
        check_capacity(13, 2)
    with pytest.raises(CapacityError):
        FullDensityMatrix(np.zeros((2, 2)), 20, 2)
    with pytest.raises(ValueError):
        FullDensityMatrix(np.zeros((3, 3)), 1, 2)


def test_atom_operators():
    """atom 0 is the most significant digit of the product index"""
    operator = atom_operator(2, 2, 0, 1, 0)
    assert operator[2, 0] == 1 and operator[3, 1] == 1
    assert np.count_nonzero(operator) == 2
    npt.assert_allclose(collective_operator(3, 2, 1, 1)
                        + collective_operator(3, 2, 0, 0), 3 * np.identity(8))


def test_density_matrix_properties():
    rho = product_density_matrix(random_spec(2, seed=1, components=1), 3)
    assert rho.trace() == pytest.approx(1.0)
    assert rho.hermitian_defect() < 1e-15
    assert rho.min_eigenvalue() > -1e-12
    assert rho.purity() == pytest.approx(1.0)
    assert repr(rho) == "FullDensityMatrix(N=3, s=2)"


def test_hamiltonian_and_jumps():
    params = SystemParams(2, omega=[0.0, 1.0], drive={(1, 0): 0.5},
                          gamma={(1, 0): 0.3}, xi={(1, 0): 0.2})
    rates = CollectiveRates([[0, 0], [0.4, 0]], Omega=[[0, 0], [0.1, 0]])
    H, parts = full_hamiltonian(params, rates)
    assert parts == []
    npt.assert_allclose(H, H.conj().T)
    jumps = jump_operators(params, rates)
    # two decays, two dephasings, one collective decay
    assert [rate for rate, _ in jumps] == [0.3, 0.3, 0.2, 0.2, 0.4]

    lab = params.replace(omega_d=1.0, frame='lab')
    H, parts = full_hamiltonian(lab, rates)
    assert [frequency for _, frequency in parts] == [1.0, -1.0]
    npt.assert_allclose(parts[0][0], parts[1][0].conj().T)


def test_projection_of_product_state():
    spec = random_spec(3, seed=6)
    rho = product_density_matrix(spec, 2)
    npt.assert_allclose(project_collective(rho).vector,
                        initial_state(spec, 2).vector, atol=1e-14)


def test_projection_detects_asymmetry():
    rho = np.kron(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    with pytest.raises(SymmetryViolationError):
        project_collective(FullDensityMatrix(rho, 2, 2))
    state = project_collective(FullDensityMatrix(rho, 2, 2), check=False)
    assert state.dim == 10


def test_evolution_preserves_physicality():
    params, rates = random_system(2, 2, seed=3, max_rate=1.0)
    rho0 = product_density_matrix(InitialStateSpec.level(1), 2)
    states = full_evolve(rho0, params, rates, [0.0, 0.5, 1.0])
    assert len(states) == 3
    for rho in states:
        assert rho.trace() == pytest.approx(1.0, abs=1e-8)
        assert rho.hermitian_defect() < 1e-8
        assert rho.min_eigenvalue() > -1e-8
    with pytest.raises(ValueError):
        full_evolve(rho0, params.replace(N=3), rates, [0.0, 1.0])


def test_liouvillian_matches_rhs():
    params, rates = random_system(2, 2, seed=12)
    liouvillian = full_liouvillian(params, rates)
    rho = product_density_matrix(random_spec(2, seed=2), 2).rho
    npt.assert_allclose((liouvillian @ rho.reshape(-1)).reshape(4, 4),
                        lindblad_rhs(params, rates)(0.0, rho), atol=1e-12)


def test_full_steady_state():
    params = SystemParams(2, gamma={(1, 0): 1.0, (0, 1): 1.0})
    rates = CollectiveRates(np.zeros((2, 2)))
    std = full_steady_state(params, rates)
    npt.assert_allclose(std.rho, np.identity(4) / 4.0, atol=1e-12)
    lab = SystemParams(2, drive={(1, 0): 1.0}, omega_d=1.0, frame='lab')
    with pytest.raises(ValueError):
        full_liouvillian(lab, rates)
