#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import numpy.testing as npt
import pytest

from conftest import hermitian_vector, random_spec, random_system
from superradiance.generator import (
    TERM_NAMES, Generator, GeneratorError, TermSet, assemble,
    build_generator, contribution_atomic, contribution_collective_decay,
    contribution_dephasing, contribution_drive,
    contribution_individual_dissipation, contribution_lamb_shift,
    operations_for, trace_defect)
from superradiance.model import CollectiveRates, SystemParams
from superradiance.oracle import (
    FullDensityMatrix, lindblad_rhs, product_density_matrix,
    project_collective)
from superradiance.statistics import generator_statistics
from superradiance.symindex import get_basis

NO_RATES = CollectiveRates(np.zeros((2, 2)))


def symmetric_mixture(N, s, seed, count=3):
    """a weighted sum of product states, permutation-symmetric but not a
    single product"""
    rho = sum((k + 1.0) * product_density_matrix(
        random_spec(s, seed + k), N).rho for k in range(count))
    return FullDensityMatrix(rho / np.trace(rho), N, s)


def test_term_set():
    assert TermSet().enabled == list(TERM_NAMES)
    terms = TermSet.only('drive', 'dephasing')
    assert terms.enabled == ['drive', 'dephasing']
    with pytest.raises(GeneratorError):
        TermSet.only('spontaneous')


def test_single_atom_precession():
    """<|1><0|> oscillates at omega_1 - omega_0 in the Heisenberg picture"""
    params = SystemParams(1, omega=[0.0, 1.5])
    L = contribution_atomic(params).toarray()
    # index order for N=1, s=2: e11, e10, e01, e00
    npt.assert_allclose(np.diag(L), [0.0, 1.5j, -1.5j, 0.0])
    assert np.count_nonzero(L) == 2


def test_single_atom_decay():
    gamma = 0.8
    params = SystemParams(1, gamma={(1, 0): gamma})
    L = contribution_individual_dissipation(params).toarray()
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = -gamma
    expected[1, 1] = expected[2, 2] = -gamma / 2.0
    expected[3, 0] = gamma
    npt.assert_allclose(L, expected)


def test_single_atom_pump():
    pump = 0.3
    params = SystemParams(1, gamma={(0, 1): pump})
    L = contribution_individual_dissipation(params).toarray()
    npt.assert_allclose(L[3, 3], -pump)
    npt.assert_allclose(L[0, 3], pump)
    npt.assert_allclose(L[1, 1], -pump / 2.0)


def test_single_atom_dephasing():
    """the coherence decays at 2 xi, populations are untouched"""
    xi = 0.25
    params = SystemParams(1, xi={(1, 0): xi})
    L = contribution_dephasing(params).toarray()
    npt.assert_allclose(np.diag(L), [0.0, -2 * xi, -2 * xi, 0.0])
    assert np.count_nonzero(L) == 2


def test_collective_decay_of_one_atom_is_individual_decay():
    rates = CollectiveRates([[0, 0], [0.6, 0]])
    params = SystemParams(1, Gamma=rates.Gamma)
    collective = contribution_collective_decay(params, rates).toarray()
    individual = contribution_individual_dissipation(
        SystemParams(1, gamma={(1, 0): 0.6})).toarray()
    npt.assert_allclose(collective, individual)


def test_lamb_shift_of_one_atom():
    """for one atom S_10 S_01 = |1><1| shifts the upper level"""
    rates = CollectiveRates([[0, 0], [0, 0]], Omega=[[0, 0], [0.4, 0]])
    L = contribution_lamb_shift(SystemParams(1), rates).toarray()
    npt.assert_allclose(np.diag(L), [0.0, 0.4j, -0.4j, 0.0])


def test_rotating_frame_drive_is_constant():
    params = SystemParams(2, omega=[0.0, 3.0], omega_d=3.0,
                          drive={(1, 0): 0.5})
    generator = build_generator(params, NO_RATES)
    assert not generator.is_time_dependent
    # on resonance only the drive remains
    npt.assert_allclose(generator.matrix.toarray(),
                        contribution_drive(params).toarray())


def test_lab_frame_generator_is_time_dependent():
    params = SystemParams(2, omega=[0.0, 3.0], omega_d=2.0,
                          drive={(1, 0): 0.5}, frame='lab')
    generator = build_generator(params, NO_RATES)
    assert generator.is_time_dependent
    assert [frequency for _, frequency in generator.drive_parts] == [2.0, -2.0]
    with pytest.raises(GeneratorError):
        generator @ np.zeros(generator.dim)
    with pytest.raises(GeneratorError):
        contribution_drive(params)
    x = hermitian_vector(generator.basis, 3)
    npt.assert_allclose(generator.at(0.7) @ x, generator.rhs(0.7, x))


def test_contributions_add_up(system_factory):
    params, rates = system_factory(3, 2, seed=11)
    generator = build_generator(params, rates)
    total = (contribution_atomic(params) + contribution_drive(params)
             + contribution_lamb_shift(params, rates)
             + contribution_individual_dissipation(params)
             + contribution_dephasing(params)
             + contribution_collective_decay(params, rates))
    npt.assert_allclose(generator.matrix.toarray(), total.toarray(),
                        atol=1e-12)


def test_rates_must_match_levels():
    params = SystemParams(2, s=3)
    with pytest.raises(GeneratorError):
        build_generator(params, NO_RATES)


def test_threaded_assembly_matches_serial():
    params, rates = random_system(6, 2, seed=5)
    basis = get_basis(6, 2)
    operations = operations_for(params, rates, TermSet())
    serial = assemble(basis, operations)
    threaded = assemble(basis, operations, jobs=3, chunk_size=17)
    npt.assert_allclose(serial.toarray(), threaded.toarray(), atol=1e-14)
    assert serial.has_sorted_indices


def test_empty_generator():
    params = SystemParams(3)
    generator = build_generator(params, NO_RATES)
    assert generator.nnz == 0
    assert trace_defect(generator) == 0.0
    assert repr(generator) == "Generator(dim=20, nnz=0, frame='rotating')"


@pytest.mark.parametrize('N, s, frame', [
    (4, 2, 'rotating'), (3, 3, 'rotating'), (5, 2, 'lab'), (2, 4, 'lab')])
def test_trace_preservation(N, s, frame):
    omega_d = 0.4 if frame == 'lab' else 0.0
    params, rates = random_system(N, s, seed=N + s, frame=frame,
                                  omega_d=omega_d)
    generator = build_generator(params, rates)
    assert trace_defect(generator) < 1e-12


@pytest.mark.parametrize('N, s', [(4, 2), (3, 3)])
def test_hermiticity_preservation(N, s):
    params, rates = random_system(N, s, seed=7 * N + s)
    generator = build_generator(params, rates)
    basis = generator.basis
    derivative = generator @ hermitian_vector(basis, 1)
    npt.assert_allclose(derivative,
                        np.conj(derivative[basis.transpose_permutation]),
                        atol=1e-12)


@pytest.mark.parametrize('N, s', [(2, 2), (3, 2), (2, 3), (3, 3)])
@pytest.mark.parametrize('term', TERM_NAMES)
def test_each_term_matches_master_equation(N, s, term):
    """L applied to the collective state equals the collective state of
    the master equation's time derivative"""
    params, rates = random_system(N, s, seed=100 + 10 * N + s)
    generator = build_generator(params, rates, terms=TermSet.only(term))
    rho = symmetric_mixture(N, s, seed=N * s)
    enabled = {name: name == term for name in TERM_NAMES}
    full_params = params.replace(
        omega=params.omega if enabled['atomic'] else np.zeros(s),
        drive=params.drive if enabled['drive'] else None,
        gamma=params.gamma if enabled['individual_dissipation'] else None,
        xi=params.xi if enabled['dephasing'] else None, Gamma=None,
        Omega=None)
    full_rates = CollectiveRates(
        rates.Gamma if enabled['collective_decay'] else np.zeros((s, s)),
        rates.Omega if enabled['lamb_shift'] else np.zeros((s, s)))
    expected = FullDensityMatrix(
        lindblad_rhs(full_params, full_rates)(0.0, rho.rho), N, s)
    npt.assert_allclose(generator @ project_collective(rho).vector,
                        project_collective(expected).vector, atol=1e-10)


def test_lab_frame_matches_master_equation():
    params, rates = random_system(3, 2, seed=2, frame='lab', omega_d=1.3)
    generator = build_generator(params, rates)
    rho = symmetric_mixture(3, 2, seed=9)
    for t in (0.0, 0.45, 2.0):
        expected = FullDensityMatrix(lindblad_rhs(params, rates)(t, rho.rho),
                                     3, 2)
        npt.assert_allclose(
            generator.rhs(t, project_collective(rho).vector),
            project_collective(expected).vector, atol=1e-10)


@pytest.mark.parametrize('N, s', [(8, 2), (16, 2), (4, 3), (7, 3)])
def test_sparsity_bound(N, s):
    params, rates = random_system(N, s, seed=N)
    stats = generator_statistics(build_generator(params, rates))
    assert stats.max_column_count <= 1 + 4 * s ** 4
    assert stats.dim == get_basis(N, s).dim


def test_generator_entries():
    params = SystemParams(1, gamma={(1, 0): 1.0})
    generator = build_generator(params, NO_RATES)
    assert isinstance(generator, Generator)
    entries = list(generator.entries())
    assert (0, 0, -1 + 0j) in entries
    assert (3, 0, 1 + 0j) in entries
    assert len(entries) == generator.nnz == 4
