#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``scenarios`` module runs the experiments a ``RunConfig`` describes and
turns their results into ``ResultTable`` objects:

- ``pulse``: the emission of initially excited atoms, one row per time
- ``driven``: the same readouts under a coherent drive
- ``pumped-spectrum``: the steady state of a pumped ensemble, its emission
  spectrum and a two-Lorentzian fit of it
- ``sweep``: one pulse or pumped-spectrum run per value of a parameter
- ``bench``: basis size, sparsity, assembly and step timings versus ``N``

Tables are written in the units of the configuration: rates and frequencies
divided by ``unit_scale``, times multiplied by it.
"""

from concurrent.futures import ProcessPoolExecutor
import logging
import time
import warnings

import numpy as np

from superradiance.config import validate_config
from superradiance.dynamics import (
    SolverConfig, evolve, steady_state, total_spectrum)
from superradiance.fitting import (
    MIN_SPECTRUM_POINTS, fit_pulse_scaling, fit_two_lorentzians, r_squared)
from superradiance.generator import TermSet, build_generator
from superradiance.initial import InitialStateSpec, initial_state
from superradiance.model import SystemParams, derive_collective_rates
from superradiance.observables import get_readout, pulse_metrics
from superradiance.oracle import (
    check_capacity, full_evolve, product_density_matrix, project_collective)
from superradiance.readwrite.table import ResultTable
from superradiance.symindex import dimension
from superradiance.util import peak_memory_mb

logger = logging.getLogger(__name__)

# largest atom number used for the oracle cross-check of a run
ORACLE_MAX_ATOMS = 3

ORACLE_TOLERANCE = 1e-8


class OracleMismatchError(ArithmeticError):
    """
    Raised when the collective evolution of a small copy of the configured
    system disagrees with the projected full master equation.
    """
    pass


def record_columns(s):
    """
    returns the column names of per-time observable rows. Two-level systems
    get ``t, P1, P0, ReC10, ImC10, I_ind, I_col, I_tot, Jx, Jy, Jz, dJx,
    dJy, dJz``; larger systems list all populations and the polarizations
    of every pair ``l > l'`` instead of the angular momentum.
    """
    columns = ['t'] + ['P{}'.format(l) for l in reversed(range(s))]
    for l in reversed(range(s)):
        for l_prime in reversed(range(l)):
            columns += ['ReC{}{}'.format(l, l_prime),
                        'ImC{}{}'.format(l, l_prime)]
    columns += ['I_ind', 'I_col', 'I_tot']
    if s == 2:
        columns += ['Jx', 'Jy', 'Jz', 'dJx', 'dJy', 'dJz']
    return columns


def record_row(t, record, scale=1.0):
    """flattens an ``ObservableRecord`` into the cells of ``record_columns``"""
    s = record.P.size
    row = [t * scale] + [record.P[l] for l in reversed(range(s))]
    for l in reversed(range(s)):
        for l_prime in reversed(range(l)):
            row += [record.C[l, l_prime].real, record.C[l, l_prime].imag]
    row += [record.I_ind / scale, record.I_col / scale, record.I_tot / scale]
    if s == 2:
        row += list(record.J) + list(record.dJ)
    return [float(value) for value in row]


def _header(config, **extra):
    header = {'scenario': config.scenario,
              'unit': "{} (unit_scale={!r}; rates and frequencies in units "
                      "of {}, times in its inverse)".format(
                          config.unit, config.unit_scale, config.unit),
              'config': config.effective_json()}
    header.update(extra)
    return header


def _system(config, jobs=1):
    params, rates = config.system()
    generator = build_generator(params, rates, config.terms.to_terms(),
                                jobs=jobs)
    return params, rates, generator


def _time_series(config, default_level, jobs=1):
    params, rates, generator = _system(config, jobs)
    spec = config.initial_spec(default_level)
    x0 = initial_state(spec, params.N, params.s, basis=generator.basis)
    readout = get_readout(generator.basis)
    trajectory = evolve(x0, generator, config.time_grid(),
                        config.solver_config(),
                        observe=lambda vector: readout.record(vector, rates),
                        keep_states=False)
    logger.info("%s run: N=%d, %d grid points in %d steps", config.scenario,
                params.N, len(trajectory), trajectory.steps)
    table = ResultTable(record_columns(params.s))
    for t, record in zip(trajectory.times, trajectory.observables):
        table.append(record_row(t, record, config.unit_scale))
    return trajectory, table


def _scaled_metrics(metrics, scale):
    return metrics._replace(I_max=metrics.I_max / scale,
                            t0=metrics.t0 * scale, tau=metrics.tau * scale)


def run_pulse(config, jobs=1):
    """
    simulates the emission of atoms prepared in ``config.initial`` (by
    default all in the highest level) and reports the pulse metrics of the
    total intensity in the header.
    """
    trajectory, table = _time_series(config, config.params.s - 1, jobs)
    metrics = _scaled_metrics(pulse_metrics(trajectory), config.unit_scale)
    table.header.update(_header(config, pulse=dict(metrics._asdict())))
    return table


def run_driven(config, jobs=1):
    """
    simulates a driven ensemble starting (by default) in the ground state;
    the header reports the intensity at the last grid time.
    """
    trajectory, table = _time_series(config, 0, jobs)
    final = trajectory.observables[-1]
    table.header.update(_header(
        config, final_I_tot=float(final.I_tot / config.unit_scale)))
    return table


def _lorentzian_dict(params, scale):
    return {'max': float(params.max), 'width': float(params.width / scale),
            'center': float(params.center / scale)}


def _pumped_spectrum(config, jobs=1):
    params, rates, generator = _system(config, jobs)
    cfg = config.solver_config()
    std = steady_state(generator, cfg)
    record = get_readout(generator.basis).record(std.vector, rates)
    omegas = config.frequency_grid()
    spectrum = total_spectrum(std, generator, rates, omegas, cfg,
                              method=config.solver.spectrum_method)
    fit = None
    if omegas.size >= MIN_SPECTRUM_POINTS:
        fit = fit_two_lorentzians(spectrum)
    else:
        warnings.warn("The frequency grid has fewer than {} points; the "
                      "two-Lorentzian fit is skipped".format(
                          MIN_SPECTRUM_POINTS))
    return record, spectrum, fit


def _fit_summary(fit, scale):
    if fit is None:
        return None
    return {'peak': _lorentzian_dict(fit.peak, scale),
            'background': _lorentzian_dict(fit.background, scale),
            'residual': fit.residual, 'converged': fit.converged,
            'degenerate': fit.degenerate}


def run_pumped_spectrum(config, jobs=1):
    """
    computes the steady state, the collective-decay-weighted total spectrum
    on the frequency grid and its two-Lorentzian fit. Rows are
    ``(omega, S)``; the steady-state readouts and the fit go to the header.
    """
    record, spectrum, fit = _pumped_spectrum(config, jobs)
    scale = config.unit_scale
    steady = dict(zip(record_columns(record.P.size)[1:],
                      record_row(0.0, record, scale)[1:]))
    table = ResultTable(['omega', 'S'], header=_header(
        config, steady_state=steady, fit=_fit_summary(fit, scale)))
    for omega, value in zip(spectrum.omegas, spectrum.values):
        table.append([float(omega / scale), float(value)])
    return table


PULSE_SWEEP_COLUMNS = ['value', 'I_max', 't0', 'tau', 'is_pulse']


def _pumped_sweep_columns(s):
    columns = ['value', 'I_ind', 'I_col', 'I_tot']
    if s == 2:
        columns += ['Jx', 'Jy', 'Jz', 'dJx', 'dJy', 'dJz']
    return columns + ['peak_max', 'peak_width', 'peak_center',
                      'background_max', 'background_width',
                      'background_center', 'degenerate']


def sweep_point(data, value):
    """
    runs one point of a sweep. ``data`` is the dumped ``RunConfig`` so that
    points can be shipped to worker processes.
    """
    config = validate_config(data)
    point = config.with_value(config.sweep.parameter, value)
    scale = point.unit_scale
    logger.info("sweep point %s=%r started", config.sweep.parameter, value)
    if config.sweep.base == 'pulse':
        trajectory, _ = _time_series(point, point.params.s - 1)
        metrics = _scaled_metrics(pulse_metrics(trajectory), scale)
        row = [value, metrics.I_max, metrics.t0, metrics.tau,
               metrics.is_pulse]
    else:
        record, _, fit = _pumped_spectrum(point)
        cells = record_row(0.0, record, scale)
        row = [value] + cells[-(9 if record.P.size == 2 else 3):]
        if fit is None:
            row += [float('nan')] * 6 + [False]
        else:
            peak = _lorentzian_dict(fit.peak, scale)
            background = _lorentzian_dict(fit.background, scale)
            row += [peak['max'], peak['width'], peak['center'],
                    background['max'], background['width'],
                    background['center'], fit.degenerate]
    logger.info("sweep point %s=%r finished", config.sweep.parameter, value)
    return row


def run_sweep(config, jobs=1):
    """
    runs the base scenario for every sweep value, in up to ``jobs`` worker
    processes. Sweeps of ``params.N`` over pulses also fit the scaling laws
    of the pulse metrics.
    """
    sweep = config.sweep
    data = config.model_dump()
    if jobs > 1 and len(sweep.values) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            rows = list(executor.map(sweep_point, [data] * len(sweep.values),
                                     sweep.values))
    else:
        rows = [sweep_point(data, value) for value in sweep.values]

    if sweep.base == 'pulse':
        columns = PULSE_SWEEP_COLUMNS
    else:
        columns = _pumped_sweep_columns(config.params.s)
    extra = {'parameter': sweep.parameter, 'base': sweep.base}
    if sweep.base == 'pulse' and sweep.parameter == 'params.N':
        usable = [row for row in rows if row[4] and np.isfinite(row[3])]
        if len(usable) >= 3:
            N, I_max, t0, tau = zip(*[row[:4] for row in usable])
            scaling = fit_pulse_scaling(N, I_max, t0, tau)
            extra['scaling'] = {
                'peak_coefficients': [float(c) for c in
                                      scaling.peak_coefficients],
                'delay': [float(c) for c in scaling.delay],
                'width': [float(c) for c in scaling.width]}
    return ResultTable(columns, rows, header=_header(config, **extra))


BENCH_COLUMNS = ['N', 'N_dm', 'nnz', 'assembly_time', 'step_time', 'steps',
                 'peak_rss_mb']


def _bench_system(config, N):
    if config.params is not None:
        params, rates = config.with_value('params.N', N).system()
        return params, rates
    s = config.bench.s
    Gamma = {(l, l_prime): config.unit_scale
             for l in range(s) for l_prime in range(l)}
    params = SystemParams(N, s=s, Gamma=Gamma)
    return params, derive_collective_rates(params)


def _bench_initial(config, s):
    if config.params is not None:
        return config.initial_spec(s - 1)
    if config.initial is not None:
        return config.initial.to_spec(s)
    return InitialStateSpec.level(s - 1, s)


def run_bench(config, jobs=1):
    """
    measures the basis size, the number of nonzeros, the assembly time and
    the mean time per integrator step of a pulse run for every ``N`` of the
    bench section. The header reports ``R^2`` of a linear fit of ``nnz``
    against the basis size.
    """
    bench = config.bench
    cfg = config.solver_config()
    table = ResultTable(BENCH_COLUMNS)
    for N in bench.N:
        params, rates = _bench_system(config, N)
        logger.info("bench N=%d: %d basis elements", N,
                    dimension(N, params.s))
        started = time.perf_counter()
        generator = build_generator(params, rates, TermSet(), jobs=jobs)
        assembly_time = time.perf_counter() - started

        x0 = initial_state(_bench_initial(config, params.s), N, params.s,
                           basis=generator.basis)
        started = time.perf_counter()
        trajectory = evolve(x0, generator,
                            np.array([0.0, bench.duration / config.unit_scale]),
                            cfg, keep_states=False)
        elapsed = time.perf_counter() - started
        step_time = elapsed / max(trajectory.steps, 1)
        table.append([N, generator.dim, generator.nnz, assembly_time,
                      step_time, trajectory.steps, peak_memory_mb()])
    extra = {}
    if len(table) >= 3:
        extra['nnz_r_squared'] = float(r_squared(table.column('N_dm'),
                                                 table.column('nnz')))
    table.header.update(_header(config, **extra))
    return table


RUNNERS = {
    'pulse': run_pulse,
    'driven': run_driven,
    'pumped-spectrum': run_pumped_spectrum,
    'sweep': run_sweep,
    'bench': run_bench,
}


def run_scenario(config, jobs=1):
    """runs the scenario of a configuration and returns its result table"""
    return RUNNERS[config.scenario](config, jobs=jobs)


def verify_oracle(config, tolerance=ORACLE_TOLERANCE):
    """
    compares the collective evolution of a copy of the configured system
    with at most ``ORACLE_MAX_ATOMS`` atoms against the projected full
    master equation over five inverse rates of the fastest process.

    Returns
    -------
    deviation : float
        the largest absolute difference of any basis entry

    Raises
    ------
    OracleMismatchError
        if the deviation exceeds ``tolerance``
    """
    params, rates = config.system()
    small = params.replace(N=min(params.N, ORACLE_MAX_ATOMS))
    check_capacity(small.N, small.s)
    generator = build_generator(small, rates, config.terms.to_terms())
    default_level = 0 if config.scenario == 'driven' else small.s - 1
    spec = config.initial_spec(default_level)
    x0 = initial_state(spec, small.N, small.s, basis=generator.basis)

    fastest = np.abs(generator.matrix.diagonal()).max()
    end = 5.0 / fastest if fastest > 0 else 1.0
    times = np.linspace(0.0, end, 6)
    cfg = SolverConfig(rel_tol=1e-10, abs_tol=1e-12)
    collective = evolve(x0, generator, times, cfg)
    full = full_evolve(product_density_matrix(spec, small.N), small, rates,
                       times, cfg)
    deviation = max(
        float(np.abs(project_collective(rho).vector -
                     collective.states[k]).max())
        for k, rho in enumerate(full))
    logger.info("oracle check with N=%d, s=%d: largest deviation %.3e",
                small.N, small.s, deviation)
    if deviation > tolerance:
        raise OracleMismatchError(
            "The collective evolution deviates from the full master "
            "equation by {:.3e} > {:.1e} for N={}".format(
                deviation, tolerance, small.N))
    return deviation
