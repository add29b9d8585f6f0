#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Reproduction runs of the standard experiments. Everything marked ``slow``
needs ``--runslow``.
"""

import math

import numpy as np
import numpy.testing as npt
import pytest

from conftest import random_spec, random_system
from superradiance.dynamics import SolverConfig, evolve, steady_state
from superradiance.fitting import fit_pulse_scaling
from superradiance.generator import build_generator
from superradiance.initial import InitialStateSpec, initial_state
from superradiance.observables import (
    angular_uncertainty, get_readout, population)
from superradiance.oracle import (
    full_evolve, product_density_matrix, project_collective)
from superradiance.presets import presets
from superradiance.scenarios import run_scenario
from superradiance.symindex import dimension

TIGHT = SolverConfig(rel_tol=1e-10, abs_tol=1e-12)


def local_maxima(values, prominence=1e-3):
    """indices of maxima that rise above the preceding trough"""
    values = np.asarray(values)
    threshold = prominence * np.abs(values).max()
    peaks = []
    low = values[0]
    for k in range(1, values.size - 1):
        low = min(low, values[k])
        if values[k - 1] < values[k] >= values[k + 1] \
                and values[k] - low > threshold:
            peaks.append(k)
            low = values[k]
    return peaks


@pytest.mark.slow
@pytest.mark.parametrize('N, s', [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3),
                                  (3, 3)])
def test_random_systems_match_full_master_equation(N, s):
    for seed in range(20):
        params, rates = random_system(N, s, seed=100 * N + 10 * s + seed,
                                      max_rate=5.0)
        spec = random_spec(s, seed=seed)
        end = 5.0 / max(params.Gamma[1, 0], 0.5)
        times = np.linspace(0.0, end, 6)
        generator = build_generator(params, rates)
        trajectory = evolve(initial_state(spec, N, s), generator, times,
                            TIGHT)
        states = full_evolve(product_density_matrix(spec, N), params, rates,
                             times, TIGHT)
        for k, rho in enumerate(states):
            npt.assert_allclose(trajectory.states[k],
                                project_collective(rho).vector, atol=1e-8)
        final = trajectory.final
        assert abs(final.trace() - 1.0) < 1e-9
        assert final.hermitian_defect() < 1e-9
        total = sum(population(final, l) for l in range(s))
        assert total == pytest.approx(N, abs=1e-9)


@pytest.mark.parametrize('theta', [0.0, math.pi / 4, math.pi / 2,
                                   3 * math.pi / 4, math.pi])
def test_coherent_spin_states_have_fixed_uncertainty(theta):
    """the variances of a product state add up to N/2 for any orientation"""
    N = 50
    x = initial_state(InitialStateSpec.bloch(theta), N)
    dJ = np.array(angular_uncertainty(x))
    assert np.sum(dJ ** 2) == pytest.approx(N / 2.0, abs=1e-6)
    assert dJ[1] == pytest.approx(math.sqrt(N / 4.0), abs=1e-6)


def test_basis_size_of_the_largest_benchmark():
    assert dimension(250, 2) == 2667126
    assert dimension(60, 2) == 39711


@pytest.mark.slow
def test_pulse_reaches_ground_state_uncertainty():
    table = run_scenario(presets['pulse-n50'])
    final = dict(zip(table.columns, table.rows[-1]))
    target = math.sqrt(50 / 4.0)
    assert final['dJx'] == pytest.approx(target, rel=1e-2)
    assert final['dJy'] == pytest.approx(target, rel=1e-2)
    assert final['dJz'] == pytest.approx(0.0, abs=1e-2 * target)
    assert table.header['pulse']['is_pulse']


@pytest.mark.slow
def test_pulse_scaling_with_atom_number():
    table = run_scenario(presets['sweep-n'], jobs=2)
    N = np.array(table.column('value'), dtype=float)
    I_max = np.array(table.column('I_max'))
    t0 = np.array(table.column('t0'))
    tau = np.array(table.column('tau'))
    scaling = fit_pulse_scaling(N, I_max, t0, tau)
    assert scaling.peak_coefficients[2] == pytest.approx(0.21, rel=0.15)
    npt.assert_allclose(t0, 0.88 / N * np.log(2.12 * N), rtol=0.1)
    npt.assert_allclose(tau, 1.88 / (0.87 + N), rtol=0.1)
    assert 'scaling' in table.header


def driven_steady_intensity(config):
    """steady I_tot reached from the ground state, whose total spin is kept"""
    params, rates = config.system()
    generator = build_generator(params, rates, config.terms.to_terms())
    x0 = initial_state(InitialStateSpec.level(0), params.N,
                       basis=generator.basis)
    std = steady_state(generator, SolverConfig(steady_method='march'),
                       x_guess=x0)
    return get_readout(generator.basis).record(std.vector, rates).I_tot


@pytest.mark.slow
def test_driven_regimes():
    weak_config = presets['driven-weak']
    weak = np.array(run_scenario(weak_config).column('I_tot'))
    peaks = local_maxima(weak)
    assert len(peaks) <= 1
    weak_steady = driven_steady_intensity(weak_config)
    distance = np.abs(weak[peaks[0] if peaks else 0:] - weak_steady)
    assert np.all(np.diff(distance) <= 1e-6 * weak_steady)

    moderate_config = presets['driven-moderate']
    intensity = np.array(run_scenario(moderate_config).column('I_tot'))
    assert len(local_maxima(intensity)) >= 2
    steady = driven_steady_intensity(moderate_config)
    assert intensity[-1] == pytest.approx(steady, rel=1e-2)


@pytest.mark.slow
def test_pumped_steady_states():
    N = 50
    table = run_scenario(presets['sweep-pump'], jobs=2)
    pump = np.array(table.column('value'))
    npt.assert_array_equal(pump, [0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0])
    I_col = np.array(table.column('I_col'))
    assert np.all(I_col[pump < 1.0] < 0)
    assert np.all(I_col[pump > 1.0] > 0)
    npt.assert_allclose(table.column('Jx'), 0.0, atol=1e-8)
    npt.assert_allclose(table.column('Jy'), 0.0, atol=1e-8)

    widths = np.array(table.column('peak_width'), dtype=float)
    assert 0.5 <= np.nanmin(widths) <= 2.0

    product_limit = math.sqrt(N / 4.0)
    dicke_limit = math.sqrt((N / 2.0) * (N / 2.0 + 1) / 3.0)
    assert dicke_limit == pytest.approx(15.3, abs=0.05)
    for column in ('dJx', 'dJy'):
        uncertainty = np.array(table.column(column))
        assert np.all(uncertainty[pump < 1.0] < product_limit)
        assert np.all(uncertainty[pump > 1.0] > product_limit)
        assert np.all(np.diff(uncertainty) > 0)
        assert uncertainty[-1] < 1.1 * dicke_limit


@pytest.mark.slow
def test_generator_nonzeros_grow_linearly_with_the_basis():
    table = run_scenario(presets['bench'])
    assert table.column('N') == [50, 100, 150, 200, 250]
    assert table.column('N_dm')[-1] == dimension(250, 2)
    assert table.header['nnz_r_squared'] > 0.99
