#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``observables`` module computes physical readouts from collective states.

The expectation value of a collective operator ``O`` follows from the
diagonal sub-basis: ``<O> = tr(rho O) = sum_d C_d <O [d]>``, where ``C_d`` is
the multiplicity of the diagonal occupation matrix ``d``. Applying ``O``
from the left to ``[d]`` with the rules of ``superradiance.sandwich`` turns
every readout into a fixed sparse linear functional of the state vector.
``Readout`` precomputes these functionals once per basis.
"""

from collections import namedtuple
import functools
import logging
import warnings

import numpy as np
import scipy.sparse as sp

from superradiance.sandwich import Operation, apply_operations, left, operator_product
from superradiance.symindex import diagonal_mask

logger = logging.getLogger(__name__)

# tolerated negative variance, relative to <j_i^2>
VARIANCE_TOLERANCE = 1e-10


class UnsupportedLevelsError(ValueError):
    """Raised for two-level-only readouts on systems with ``s != 2``."""
    pass


class NumericalConsistencyError(ArithmeticError):
    """Raised when a readout violates a bound or two solvers disagree."""
    pass


class ObservableRecord(namedtuple(
        'ObservableRecord', 'P C I_ind I_col I_tot J dJ')):
    """
    Readouts of one collective state.

    Attributes
    ----------
    P : numpy.ndarray
        level populations (atom counts)
    C : numpy.ndarray
        complex ``s x s`` polarizations ``C[l, l'] = <S_ll'>`` (zero diagonal)
    I_ind, I_col, I_tot : float
        individual, collective and total emission rate
    J : numpy.ndarray or None
        angular momentum ``(J_x, J_y, J_z)``, two-level systems only
    dJ : numpy.ndarray or None
        angular momentum uncertainties, two-level systems only
    """
    __slots__ = ()


class Spectrum(namedtuple('Spectrum', 'omegas values')):
    """
    An emission spectrum.

    Attributes
    ----------
    omegas : numpy.ndarray
        frequency grid (rad/time), relative to the rotating frame
    values : numpy.ndarray
        real spectral intensities
    """
    __slots__ = ()


class PulseMetrics(namedtuple('PulseMetrics', 'I_max t0 tau is_pulse')):
    """
    Peak intensity ``I_max`` at time ``t0`` and full width at half maximum
    ``tau`` of an emitted pulse. ``is_pulse`` is False for a monotone decay,
    where ``t0 = 0`` and ``tau`` is the time to fall to half the initial
    value.
    """
    __slots__ = ()


def _lower_pairs(s):
    for l in range(s):
        for l_prime in range(l):
            yield l, l_prime


class Readout(object):
    """
    Sparse linear functionals for all readouts of a basis.

    Attributes
    ----------
    basis : superradiance.symindex.Basis
        the basis
    labels : list of tuple
        the readout each row of ``matrix`` computes, e.g. ``('P', 1)``,
        ``('C', 1, 0)``, ``('I_ind', 1, 0)``, ``('I_col', 1, 0)``,
        ``('jx2',)``
    matrix : scipy.sparse.csr_matrix
        one row per label
    """
    def __init__(self, basis):
        self.basis = basis
        s = basis.s
        diagonal = basis.diagonal
        self._occupations = np.asarray(basis.occupations[diagonal])
        self._weights = basis.multiplicities[diagonal]

        rows = []
        self.labels = []
        for l in range(s):
            self._add(rows, ('P', l), [Operation(1.0, (left(l, l),))])
        for l in range(s):
            for l_prime in range(s):
                if l != l_prime:
                    self._add(rows, ('C', l, l_prime),
                              [Operation(1.0, (left(l, l_prime),))])
        for l, l_prime in _lower_pairs(s):
            individual, collective = self._intensity_rows(l, l_prime)
            rows.append(individual)
            self.labels.append(('I_ind', l, l_prime))
            rows.append(collective)
            self.labels.append(('I_col', l, l_prime))
        if s == 2:
            self._add_spin_squares(rows)
        self.matrix = sp.vstack(rows, format='csr')
        self._positions = {label: row for row, label in enumerate(self.labels)}
        logger.debug("built %d readout functionals for %s", len(self.labels),
                     basis)

    def _functional(self, operations, keep=None):
        branches = apply_operations(operations, self._occupations,
                                    self.basis.s, row_weights=self._weights)
        values = branches.values
        targets = branches.targets
        if keep is not None:
            mask = keep(targets)
            values, targets = values[mask], targets[mask]
        columns = self.basis.indices_of(targets)
        row = sp.coo_matrix(
            (values, (np.zeros(columns.size, dtype=np.int64), columns)),
            shape=(1, self.basis.dim)).tocsr()
        row.sum_duplicates()
        return row

    def _add(self, rows, label, operations):
        rows.append(self._functional(operations))
        self.labels.append(label)

    def _intensity_rows(self, l, l_prime):
        """``<S_ll' S_l'l>`` split by whether the target is diagonal"""
        operations = operator_product([(1.0, (l, l_prime))],
                                      [(1.0, (l_prime, l))])
        s = self.basis.s
        individual = self._functional(
            operations, keep=lambda targets: diagonal_mask(targets, s))
        collective = self._functional(
            operations, keep=lambda targets: ~diagonal_mask(targets, s))
        return individual, collective

    def _add_spin_squares(self, rows):
        jx = [(0.5, (1, 0)), (0.5, (0, 1))]
        jy = [(-0.5j, (1, 0)), (0.5j, (0, 1))]
        jz = [(0.5, (1, 1)), (-0.5, (0, 0))]
        for name, factor in (('jx2', jx), ('jy2', jy), ('jz2', jz)):
            self._add(rows, (name,), operator_product(factor, factor))

    def row(self, label):
        """returns the functional of one label as a ``(1, dim)`` matrix"""
        return self.matrix[self._positions[label]]

    def evaluate(self, x):
        """returns ``{label: value}`` for a state vector"""
        values = self.matrix @ np.asarray(x)
        return dict(zip(self.labels, values))

    def record(self, x, rates=None):
        """
        returns the ``ObservableRecord`` of a state vector; intensities are
        weighted with ``rates.Gamma`` (zero without rates)
        """
        values = self.evaluate(x)
        s = self.basis.s
        P = np.array([values[('P', l)].real for l in range(s)])
        C = np.zeros((s, s), dtype=np.complex128)
        for l in range(s):
            for l_prime in range(s):
                if l != l_prime:
                    C[l, l_prime] = values[('C', l, l_prime)]
        I_ind = I_col = 0.0
        if rates is not None:
            for l, l_prime in _lower_pairs(s):
                rate = rates.Gamma[l, l_prime]
                I_ind += rate * values[('I_ind', l, l_prime)].real
                I_col += rate * values[('I_col', l, l_prime)].real
        J = dJ = None
        if s == 2:
            J = _angular_momentum(P, C)
            dJ = _uncertainty(J, np.array([values[('jx2',)].real,
                                           values[('jy2',)].real,
                                           values[('jz2',)].real]))
        return ObservableRecord(P, C, I_ind, I_col, I_ind + I_col, J, dJ)


@functools.lru_cache(maxsize=8)
def get_readout(basis):
    """returns a cached ``Readout`` for a basis"""
    return Readout(basis)


def _readout_of(x):
    return get_readout(x.basis)


def _check_level(level, s):
    if not 0 <= level < s:
        raise IndexError("Level {} is out of range for s={}".format(level, s))


def population(x, l):
    """
    returns the population ``P_l = sum_d C_d n_ll <d>`` of level ``l``, i.e.
    the number of atoms in ``|l>``.
    """
    _check_level(l, x.s)
    value = (_readout_of(x).row(('P', l)) @ x.vector)[0]
    return float(value.real)


def polarization(x, l, l_prime):
    """returns the complex polarization ``C_ll' = <S_ll'>``"""
    _check_level(l, x.s)
    _check_level(l_prime, x.s)
    if l == l_prime:
        raise IndexError("A polarization needs two different levels")
    return complex((_readout_of(x).row(('C', l, l_prime)) @ x.vector)[0])


def intensity(x, rates):
    """
    returns ``(I_ind, I_col, I_tot)`` with
    ``I_tot = sum_{l>l'} Gamma_ll' <S_ll' S_l'l>``. ``I_ind`` collects the
    contributions that return to diagonal basis elements (single-atom terms),
    ``I_col`` those from off-diagonal elements (inter-atomic correlations).
    """
    readout = _readout_of(x)
    I_ind = I_col = 0.0
    for l, l_prime in _lower_pairs(x.s):
        rate = rates.Gamma[l, l_prime]
        if rate == 0:
            continue
        I_ind += rate * (readout.row(('I_ind', l, l_prime)) @ x.vector)[0].real
        I_col += rate * (readout.row(('I_col', l, l_prime)) @ x.vector)[0].real
    return float(I_ind), float(I_col), float(I_ind + I_col)


def _require_two_levels(x):
    if x.s != 2:
        raise UnsupportedLevelsError(
            "Angular momentum readouts are defined for two-level atoms only, "
            "got s={}".format(x.s))


def _angular_momentum(P, C):
    return np.array([((C[1, 0] + C[0, 1]) / 2.0).real,
                     (-1j * (C[1, 0] - C[0, 1]) / 2.0).real,
                     (P[1] - P[0]) / 2.0])


def angular_momentum(x):
    """
    returns ``(J_x, J_y, J_z)`` with ``J_x = (C_10 + C_01)/2``,
    ``J_y = -i (C_10 - C_01)/2`` and ``J_z = (P_1 - P_0)/2``.
    """
    _require_two_levels(x)
    P = np.array([population(x, 0), population(x, 1)])
    C = np.zeros((2, 2), dtype=np.complex128)
    C[1, 0] = polarization(x, 1, 0)
    C[0, 1] = polarization(x, 0, 1)
    return _angular_momentum(P, C)


def _uncertainty(J, squares, tolerance=VARIANCE_TOLERANCE):
    radicands = squares - J ** 2
    limits = -tolerance * np.maximum(1.0, np.abs(squares))
    if np.any(radicands < limits):
        raise NumericalConsistencyError(
            "Negative angular momentum variances {} (<j^2> = {}, J = {})".format(
                radicands.tolist(), squares.tolist(), J.tolist()))
    return np.sqrt(np.clip(radicands, 0.0, None))


def angular_uncertainty(x):
    """
    returns ``(dJ_x, dJ_y, dJ_z)`` with ``dJ_i = sqrt(<j_i^2> - J_i^2)``.
    Slightly negative variances from round-off are clamped to zero.

    Raises
    ------
    NumericalConsistencyError
        for variances below ``-1e-10 * max(1, <j_i^2>)``
    """
    _require_two_levels(x)
    readout = _readout_of(x)
    squares = np.array([(readout.row((name,)) @ x.vector)[0].real
                        for name in ('jx2', 'jy2', 'jz2')])
    return _uncertainty(angular_momentum(x), squares)


def _half_crossing(times, values, half, start, step):
    """
    walks from ``start`` in direction ``step`` and returns the linearly
    interpolated time where ``values`` first drops below ``half``, or None
    """
    index = start
    while 0 <= index + step < len(values):
        nxt = index + step
        if values[nxt] <= half:
            fraction = (values[index] - half) / (values[index] - values[nxt])
            return times[index] + fraction * (times[nxt] - times[index])
        index = nxt
    return None


def pulse_metrics(trajectory=None, times=None, values=None):
    """
    extracts peak intensity, peak time and FWHM of an intensity series.

    Either pass a ``Trajectory`` with recorded observables (its ``I_tot``
    series is used) or explicit ``times`` and ``values`` arrays. The peak is
    refined with a parabola through the three samples around the largest one;
    the half-maximum crossings are linearly interpolated.

    Returns
    -------
    metrics : PulseMetrics
    """
    if trajectory is not None:
        times = trajectory.times
        values = np.array([record.I_tot for record in trajectory.observables])
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size < 3 or times.size != values.size:
        raise ValueError("pulse_metrics needs at least three samples")

    peak = int(np.argmax(values))
    if peak == 0:
        half = values[0] / 2.0
        tau = _half_crossing(times, values, half, 0, 1)
        if tau is None:
            warnings.warn("The intensity does not fall to half its initial "
                          "value within the simulated window")
            tau = float('nan')
        else:
            tau -= times[0]
        return PulseMetrics(float(values[0]), float(times[0]), float(tau),
                            False)

    if peak == len(values) - 1:
        warnings.warn("The intensity peaks at the end of the simulated window")
        I_max, t0 = values[peak], times[peak]
    else:
        window = slice(peak - 1, peak + 2)
        a, b, c = np.polyfit(times[window] - times[peak], values[window], 2)
        if a < 0:
            offset = -b / (2.0 * a)
            t0 = times[peak] + offset
            I_max = c - b * b / (4.0 * a)
        else:
            I_max, t0 = values[peak], times[peak]
    half = I_max / 2.0
    rising = _half_crossing(times, values, half, peak, -1)
    falling = _half_crossing(times, values, half, peak, 1)
    if rising is None or falling is None:
        warnings.warn("The pulse is not resolved down to half maximum on "
                      "both sides within the simulated window")
        tau = float('nan')
    else:
        tau = falling - rising
    return PulseMetrics(float(I_max), float(t0), float(tau), True)
