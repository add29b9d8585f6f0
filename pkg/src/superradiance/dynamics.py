#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``dynamics`` module evolves collective states in time, finds steady
states and propagates regression seeds to obtain two-time correlations and
emission spectra.

Time integration uses the embedded Runge-Kutta 5(4) stepper
``scipy.integrate.RK45``, stepped by hand so that the dense output of every
step is evaluated at the requested grid points as soon as it is available.
Only the readouts (and, on request, the states) at grid points are kept.
"""

from collections import namedtuple
import logging
import math
import warnings

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import RK45

from superradiance.initial import CollectiveState, regression_initial
from superradiance.observables import (
    NumericalConsistencyError, Spectrum, get_readout)

logger = logging.getLogger(__name__)

# spectra stop once |g(T)| drops below this fraction of |g(0)|
CORRELATION_DECAY = 1e-6

# steady states up to this many unknowns are solved directly by default
DIRECT_SOLVE_LIMIT = 200000

# largest entrywise gap between marching and direct steady states
CROSS_CHECK_TOL = 1e-7


class StiffnessError(RuntimeError):
    """Raised when the adaptive step size underflows."""
    pass


class NonConvergenceError(RuntimeError):
    """
    Raised when a steady state is not reached before ``t_max``.

    Attributes
    ----------
    residual : float
        the last relative residual ``||L x||_inf / ||x||_inf``
    """
    def __init__(self, message, residual):
        super(NonConvergenceError, self).__init__(message)
        self.residual = residual


class TimeDependentGeneratorError(ValueError):
    """Raised when a constant generator is required but ``L`` depends on t."""
    pass


class SolverConfig(namedtuple('SolverConfig', (
        'rel_tol abs_tol max_step steady_eps t_max steady_method '
        'scale_abs_tol tau_step'))):
    """
    Numerical settings of the time integration and steady-state search.

    Attributes
    ----------
    rel_tol, abs_tol : float
        local error tolerances of the Runge-Kutta stepper
    max_step : float
        largest time step (``inf`` for no limit)
    steady_eps : float
        steady-state threshold for ``||L x||_inf / ||x||_inf`` (1/time)
    t_max : float
        largest simulated time when marching to the steady state or
        extending a correlation window
    steady_method : str
        'march' (time integration), 'direct' (sparse linear solve) or
        'auto' (direct up to ``DIRECT_SOLVE_LIMIT`` unknowns)
    scale_abs_tol : bool
        divide ``abs_tol`` by the multiplicity of each basis element, so
        that multiplicity-weighted readouts get the absolute accuracy
    tau_step : float or None
        sampling step of correlation functions for spectra (default: the
        Nyquist step of the frequency grid)
    """
    __slots__ = ()

    def __new__(cls, rel_tol=1e-8, abs_tol=1e-10, max_step=np.inf,
                steady_eps=1e-8, t_max=1e4, steady_method='auto',
                scale_abs_tol=True, tau_step=None):
        for name, value in (('rel_tol', rel_tol), ('abs_tol', abs_tol),
                            ('max_step', max_step), ('steady_eps', steady_eps),
                            ('t_max', t_max)):
            if not value > 0:
                raise ValueError(
                    "SolverConfig.{} must be positive, got {}".format(
                        name, value))
        if tau_step is not None and not tau_step > 0:
            raise ValueError("SolverConfig.tau_step must be positive")
        if steady_method not in ('march', 'direct', 'auto'):
            raise ValueError(
                "SolverConfig.steady_method must be 'march', 'direct' or "
                "'auto', got '{}'".format(steady_method))
        return super(SolverConfig, cls).__new__(
            cls, rel_tol, abs_tol, max_step, steady_eps, t_max,
            steady_method, scale_abs_tol, tau_step)


class Trajectory(object):
    """
    The result of ``evolve``.

    Attributes
    ----------
    times : numpy.ndarray
        strictly increasing time grid
    states : numpy.ndarray or None
        ``(len(times), dim)`` state vectors, if retained
    observables : list
        per-time results of the ``observe`` callback (empty without one)
    final : CollectiveState
        the state at the last grid time
    steps : int
        number of accepted integrator steps
    """
    def __init__(self, times, states, observables, final, steps):
        self.times = times
        self.states = states
        self.observables = observables
        self.final = final
        self.steps = steps

    def state(self, k):
        """returns the retained state at grid position ``k``"""
        if self.states is None:
            raise ValueError("This trajectory did not retain its states")
        return CollectiveState(self.states[k], self.final.basis)

    def __len__(self):
        return len(self.times)


def absolute_tolerances(generator, cfg):
    """returns the (possibly per-entry) absolute tolerance of the stepper"""
    if not cfg.scale_abs_tol:
        return cfg.abs_tol
    return cfg.abs_tol / generator.basis.multiplicities


def _check_grid(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("The time grid must be a nonempty 1D sequence")
    if np.any(np.diff(times) <= 0):
        raise ValueError("The time grid must be strictly increasing")
    return times


def _integrate(generator, x0, times, cfg, callback):
    """
    integrates ``dx/dt = L(t) x`` from ``times[0]`` and calls
    ``callback(k, x)`` for every grid point. Returns the number of steps.
    """
    callback(0, x0)
    if times.size == 1:
        return 0
    solver = RK45(generator.rhs, times[0], np.array(x0, dtype=np.complex128),
                  times[-1], max_step=cfg.max_step, rtol=cfg.rel_tol,
                  atol=absolute_tolerances(generator, cfg))
    position = 1
    steps = 0
    while position < times.size:
        message = solver.step()
        if solver.status == 'failed':
            raise StiffnessError(
                "The integrator failed at t={} with step size {}: {}. The "
                "generator is probably too stiff for an explicit "
                "method.".format(solver.t, solver.step_size, message))
        steps += 1
        interpolant = None
        while position < times.size and times[position] <= solver.t:
            if times[position] == solver.t:
                value = solver.y
            else:
                if interpolant is None:
                    interpolant = solver.dense_output()
                value = interpolant(times[position])
            callback(position, value)
            position += 1
    logger.debug("integrated to t=%g in %d steps", times[-1], steps)
    return steps


def evolve(x0, generator, times, cfg=None, observe=None, keep_states=True):
    """
    integrates the collective equation of motion on a time grid.

    Parameters
    ----------
    x0 : CollectiveState
        the state at ``times[0]``
    generator : superradiance.generator.Generator
        the generator ``L``
    times : array-like
        strictly increasing output times
    cfg : SolverConfig or None
        tolerances (default: ``SolverConfig()``)
    observe : callable or None
        called as ``observe(vector)`` at every grid time; the results are
        collected in ``Trajectory.observables``
    keep_states : bool
        retain the state vectors at all grid times

    Returns
    -------
    trajectory : Trajectory

    Raises
    ------
    StiffnessError
        if the step size underflows
    """
    cfg = SolverConfig() if cfg is None else cfg
    times = _check_grid(times)
    if x0.dim != generator.dim:
        raise ValueError(
            "The state has dimension {}, the generator {}".format(
                x0.dim, generator.dim))
    states = np.empty((times.size, x0.dim), dtype=np.complex128) \
        if keep_states else None
    observables = []
    final = {}

    def callback(position, vector):
        if keep_states:
            states[position] = vector
        if observe is not None:
            observables.append(observe(vector))
        if position == times.size - 1:
            final['vector'] = np.array(vector, dtype=np.complex128)

    steps = _integrate(generator, x0.vector, times, cfg, callback)
    return Trajectory(times, states, observables,
                      CollectiveState(final['vector'], x0.basis), steps)


def _require_constant(generator):
    if generator.is_time_dependent:
        raise TimeDependentGeneratorError(
            "Steady states and spectra need a time-independent generator; "
            "use the rotating frame")


def residual(generator, x):
    """returns ``||L x||_inf / ||x||_inf``"""
    vector = x.vector if isinstance(x, CollectiveState) else x
    scale = np.abs(vector).max()
    if scale == 0:
        return float('inf')
    return float(np.abs(generator.matrix @ vector).max() / scale)


def maximally_mixed(basis):
    """the product state with every atom in ``1/s * identity``"""
    vector = np.zeros(basis.dim, dtype=np.complex128)
    vector[basis.diagonal] = float(basis.s) ** (-basis.N)
    return CollectiveState(vector, basis)


def _normalized(basis, vector):
    trace = basis.trace_functional @ vector
    return vector / trace


def _march(generator, x, cfg):
    """integrates until the residual drops below ``steady_eps``"""
    basis = generator.basis
    vector = _normalized(basis, x.vector)
    scale = np.abs(generator.matrix.diagonal()).max()
    chunk = 10.0 / scale if scale > 0 else cfg.t_max
    elapsed = 0.0
    current = residual(generator, vector)
    while current >= cfg.steady_eps:
        if elapsed >= cfg.t_max:
            raise NonConvergenceError(
                "No steady state within t_max={}: residual {:.3e} >= "
                "{:.3e}".format(cfg.t_max, current, cfg.steady_eps), current)
        span = min(chunk, cfg.t_max - elapsed)
        last = {}
        _integrate(generator, vector, np.array([0.0, span]), cfg,
                   lambda position, value: last.__setitem__(position, value))
        vector = _normalized(basis, last[1])
        elapsed += span
        chunk *= 2.0
        current = residual(generator, vector)
        logger.info("steady-state march: t=%.4g residual=%.3e", elapsed,
                    current)
    return vector


def _direct(generator):
    """solves ``L x = 0`` with one row replaced by the trace condition"""
    basis = generator.basis
    weights = basis.trace_functional
    anchor = int(basis.diagonal[np.argmax(weights[basis.diagonal])])
    matrix = generator.matrix.tolil(copy=True)
    matrix[anchor, :] = weights / weights.max()
    rhs = np.zeros(basis.dim, dtype=np.complex128)
    rhs[anchor] = 1.0
    vector = spla.spsolve(sp.csc_matrix(matrix), rhs)
    return _normalized(basis, vector)


def steady_state(generator, cfg=None, x_guess=None, cross_check=False):
    """
    returns the steady state of a time-independent generator.

    Parameters
    ----------
    generator : superradiance.generator.Generator
        a constant generator
    cfg : SolverConfig or None
        ``steady_method`` selects time marching or the direct sparse solve
    x_guess : CollectiveState or None
        starting point of the march (default: the maximally mixed state)
    cross_check : bool
        also run the other method and compare the two states entrywise

    Returns
    -------
    state : CollectiveState
        a unit-trace state with ``||L x||_inf / ||x||_inf < steady_eps``

    Raises
    ------
    NonConvergenceError
        if the residual stays above ``steady_eps``
    NumericalConsistencyError
        if ``cross_check`` finds the two states more than
        ``CROSS_CHECK_TOL`` apart
    """
    cfg = SolverConfig() if cfg is None else cfg
    _require_constant(generator)
    basis = generator.basis
    method = cfg.steady_method
    if method == 'auto':
        method = 'direct' if basis.dim <= DIRECT_SOLVE_LIMIT else 'march'
    guess = maximally_mixed(basis) if x_guess is None else x_guess

    if method == 'direct':
        vector = _direct(generator)
    else:
        vector = _march(generator, guess, cfg)
    current = residual(generator, vector)
    if current >= cfg.steady_eps:
        raise NonConvergenceError(
            "The {} steady-state solve left a residual of {:.3e} >= "
            "{:.3e}".format(method, current, cfg.steady_eps), current)

    if cross_check:
        other = _march(generator, guess, cfg) if method == 'direct' \
            else _direct(generator)
        difference = np.abs(other - vector).max()
        if difference > CROSS_CHECK_TOL:
            raise NumericalConsistencyError(
                "Marching and direct steady states differ by {:.3e}".format(
                    difference))
        else:
            logger.info("steady-state cross-check agrees to %.3e", difference)
    return CollectiveState(vector, basis)


def correlation_function(std, generator, l, l_prime, taus, cfg=None):
    """
    returns the two-time correlation ``g(tau) = <S_ll'(tau) S_l'l(0)>`` in
    the state ``std``, obtained by evolving the regression seed of the
    transition under ``L`` and reading out the polarization ``C_ll'``.

    Returns
    -------
    g : numpy.ndarray
        complex values at ``taus`` (``taus[0]`` is the seed time)
    """
    _require_constant(generator)
    seed = regression_initial(std, l, l_prime)
    functional = get_readout(std.basis).row(('C', l, l_prime))
    trajectory = evolve(seed, generator, taus, cfg,
                        observe=lambda vector: (functional @ vector)[0],
                        keep_states=False)
    return np.array(trajectory.observables, dtype=np.complex128)


def _trapezoid_weights(count, step):
    weights = np.full(count, step)
    weights[0] = weights[-1] = step / 2.0
    return weights


def _quadrature_spectrum(seed, functional, generator, omegas, cfg):
    """
    integrates ``Re int_0^T g(tau) exp(-i omega tau) dtau`` with the
    trapezoid rule on a uniform grid, extending ``T`` segment by segment
    until ``|g(T)| < CORRELATION_DECAY * |g(0)|``.
    """
    span = np.abs(omegas).max()
    step = cfg.tau_step if cfg.tau_step is not None else \
        math.pi / (2.0 * span if span > 0 else 1.0)
    samples = 1024
    values = np.zeros(omegas.size, dtype=np.complex128)
    g0 = abs((functional @ seed.vector)[0])
    start, state = 0.0, seed
    last, previous = g0, g0
    while True:
        taus = start + step * np.arange(samples + 1)
        trajectory = evolve(state, generator, taus, cfg,
                            observe=lambda vector: (functional @ vector)[0],
                            keep_states=False)
        g = np.array(trajectory.observables)
        phases = np.exp(-1j * np.outer(omegas, taus))
        values += phases @ (g * _trapezoid_weights(taus.size, step))
        previous, last = abs(g[0]), abs(g[-1])
        start, state = taus[-1], trajectory.final
        if last < CORRELATION_DECAY * g0:
            break
        if start >= cfg.t_max:
            segment = taus[-1] - taus[0]
            decay = math.log(previous / last) / segment \
                if last > 0 and previous > last else 0.0
            bound = last / decay if decay > 0 else float('inf')
            warnings.warn(
                "The correlation has only decayed to |g(T)|/|g(0)| = {:.3e} "
                "at T = {:.4g}; the spectral error is bounded by about "
                "{:.3e}".format(last / g0, start, bound))
            break
    logger.debug("correlation window T=%g with step %g", start, step)
    return values.real


def _resolvent_spectrum(seed, functional, generator, omegas):
    """``Re f^T (i omega - L)^-1 x_seed`` by one sparse LU per frequency"""
    identity = sp.identity(generator.dim, dtype=np.complex128, format='csc')
    matrix = generator.matrix.tocsc()
    values = np.empty(omegas.size)
    for position, omega in enumerate(omegas):
        solution = spla.splu(1j * omega * identity - matrix).solve(seed.vector)
        values[position] = (functional @ solution)[0].real
    return values


def spectrum(std, generator, l, l_prime, omegas, cfg=None, weight=1.0,
             method='quadrature'):
    """
    returns the emission spectrum of the transition ``(l, l')``,
    ``S(omega) = weight * Re int_0^inf g(tau) exp(-i omega tau) dtau``
    with ``g`` from ``correlation_function`` and frequencies relative to the
    rotating frame.

    Parameters
    ----------
    std : CollectiveState
        the steady state
    generator : superradiance.generator.Generator
        the constant generator
    l, l_prime : int
        the transition, ``l > l'`` for emission
    omegas : array-like
        frequency grid
    cfg : SolverConfig or None
        tolerances; ``tau_step`` and ``t_max`` control the quadrature
    weight : float
        prefactor, usually the collective rate ``Gamma_ll'``
    method : str
        'quadrature' (time-domain trapezoid rule) or 'resolvent' (sparse
        solve of ``(i omega - L) y = seed`` per frequency)

    Returns
    -------
    spectrum : superradiance.observables.Spectrum
    """
    cfg = SolverConfig() if cfg is None else cfg
    _require_constant(generator)
    omegas = np.asarray(omegas, dtype=float)
    seed = regression_initial(std, l, l_prime)
    functional = get_readout(std.basis).row(('C', l, l_prime))
    if abs((functional @ seed.vector)[0]) == 0:
        return Spectrum(omegas, np.zeros(omegas.size))
    if method == 'quadrature':
        values = _quadrature_spectrum(seed, functional, generator, omegas,
                                      cfg)
    elif method == 'resolvent':
        values = _resolvent_spectrum(seed, functional, generator, omegas)
    else:
        raise ValueError("Unknown spectrum method '{}'".format(method))
    return Spectrum(omegas, weight * values)


def total_spectrum(std, generator, rates, omegas, cfg=None,
                   method='quadrature'):
    """
    returns ``sum_{l>l'} Gamma_ll' S_ll'(omega)`` over all transitions with a
    nonzero collective decay rate.
    """
    omegas = np.asarray(omegas, dtype=float)
    values = np.zeros(omegas.size)
    for l in range(rates.s):
        for l_prime in range(l):
            rate = rates.Gamma[l, l_prime]
            if rate > 0:
                values += spectrum(std, generator, l, l_prime, omegas, cfg,
                                   weight=rate, method=method).values
    return Spectrum(omegas, values)
