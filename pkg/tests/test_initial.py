#!/usr/bin/env python
# -*- coding: utf-8 -*-

import math

import numpy as np
import numpy.testing as npt
import pytest

from conftest import random_spec
from superradiance.initial import (
    CollectiveState, InitialStateError, InitialStateSpec, initial_state,
    regression_initial, right_action_matrix)
from superradiance.oracle import (
    FullDensityMatrix, collective_operator, product_density_matrix,
    project_collective)
from superradiance.symindex import OccupationMatrix, get_basis


def test_spec_validation():
    with pytest.raises(InitialStateError):
        InitialStateSpec([])
    with pytest.raises(InitialStateError):
        InitialStateSpec([(1.0, [1.0, 1.0])])
    with pytest.raises(InitialStateError):
        InitialStateSpec([(0.5, [1.0, 0.0])])
    with pytest.raises(InitialStateError):
        InitialStateSpec([(1.5, [1.0, 0.0]), (-0.5, [0.0, 1.0])])
    with pytest.raises(InitialStateError):
        InitialStateSpec([(0.5, [1.0, 0.0]), (0.5, [0.0, 0.0, 1.0])])


def test_bloch_states():
    spec = InitialStateSpec.bloch(math.pi)
    npt.assert_allclose(spec.single_atom_density(), [[0, 0], [0, 1]],
                        atol=1e-15)
    spec = InitialStateSpec.bloch(math.pi / 2, phi=math.pi / 2)
    npt.assert_allclose(spec.single_atom_density(),
                        [[0.5, -0.5j], [0.5j, 0.5]], atol=1e-15)
    assert repr(spec) == "InitialStateSpec(1 components, s=2)"


def test_level_state():
    spec = InitialStateSpec.level(2, s=3)
    state = initial_state(spec, 4)
    assert state[np.diag([0, 0, 4])] == 1.0
    assert np.count_nonzero(state.vector) == 1
    assert state.trace() == pytest.approx(1.0)


def test_single_atom_state():
    """<n> = <l'|rho1|l> for the single operator |l><l'| of n"""
    spec = InitialStateSpec.pure([0.6, 0.8j])
    state = initial_state(spec, 1)
    rho1 = spec.single_atom_density()
    # index order for N=1, s=2: e11, e10, e01, e00
    npt.assert_allclose(state.vector,
                        [rho1[1, 1], rho1[0, 1], rho1[1, 0], rho1[0, 0]])


def test_product_formula():
    spec = InitialStateSpec.from_bloch([(0.25, 0.3, 0.1), (0.75, 2.0, -1.0)])
    rho1 = spec.single_atom_density()
    n = OccupationMatrix([[1, 2], [0, 2]])
    state = initial_state(spec, 5)
    expected = rho1[0, 0] * rho1[1, 0] ** 2 * rho1[1, 1] ** 2
    npt.assert_allclose(state[n], expected)


@pytest.mark.parametrize('N, s', [(3, 2), (2, 3), (3, 3), (4, 2)])
def test_matches_product_density_matrix(N, s):
    spec = random_spec(s, seed=N + 10 * s)
    state = initial_state(spec, N)
    reference = project_collective(product_density_matrix(spec, N))
    npt.assert_allclose(state.vector, reference.vector, atol=1e-13)
    assert state.trace() == pytest.approx(1.0)
    assert state.hermitian_defect() < 1e-13


def test_level_count_mismatch():
    with pytest.raises(InitialStateError):
        initial_state(InitialStateSpec.level(0), 3, s=3)


def test_collective_state_arithmetic():
    basis = get_basis(2, 2)
    one = initial_state(InitialStateSpec.level(1), 2)
    zero = initial_state(InitialStateSpec.level(0), 2)
    mixed = 0.5 * one + zero * 0.5
    assert isinstance(mixed, CollectiveState)
    assert mixed.trace() == pytest.approx(1.0)
    assert (mixed.N, mixed.s, mixed.dim) == (2, 2, basis.dim)
    assert repr(mixed) == "CollectiveState(N=2, s=2, trace=1)"
    with pytest.raises(ValueError):
        CollectiveState(np.zeros(3), basis)


def test_right_action_matrix():
    """R maps the state of rho to the state of S_ab rho"""
    N, s = 3, 2
    rho = product_density_matrix(random_spec(s, seed=4), N)
    basis = get_basis(N, s)
    for a, b in [(1, 0), (0, 1), (1, 1)]:
        matrix = right_action_matrix(basis, a, b)
        expected = FullDensityMatrix(
            collective_operator(N, s, a, b) @ rho.rho, N, s)
        npt.assert_allclose(matrix @ project_collective(rho).vector,
                            project_collective(expected).vector, atol=1e-13)


def test_regression_initial():
    N, s = 2, 3
    std = initial_state(random_spec(s, seed=8), N)
    seed = regression_initial(std, 2, 1)
    rho = product_density_matrix(random_spec(s, seed=8), N)
    expected = FullDensityMatrix(collective_operator(N, s, 1, 2) @ rho.rho,
                                 N, s)
    npt.assert_allclose(seed.vector, project_collective(expected).vector,
                        atol=1e-13)
    with pytest.raises(IndexError):
        regression_initial(std, 3, 0)
