#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``initial`` module builds collective states of uncorrelated atoms.

Every atom starts in the same mixture ``rho1 = sum_i m_i |psi_i><psi_i|`` of
pure states ``|psi_i> = sum_l c_l^i |l>``. The collective density matrix
element of an occupation matrix ``n`` is then the product

    <n> = prod_{l,l'} (<l'| rho1 |l>) ** n_ll'

with the convention ``0 ** 0 = 1``.
"""

import logging
import math
import warnings

import numpy as np
import scipy.sparse as sp

from superradiance.sandwich import Operation, apply_operations, right
from superradiance.symindex import get_basis

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-12


class InitialStateError(ValueError):
    """Raised for invalid mixtures (probabilities or normalization)."""
    pass


class InitialStateSpec(object):
    """
    A mixture of identical single-atom pure states.

    Attributes
    ----------
    components : list of (float, numpy.ndarray)
        pairs of probability ``m_i`` and complex amplitudes ``c_i[l]``
    """
    def __init__(self, components):
        components = [(float(m), np.array(c, dtype=np.complex128))
                      for m, c in components]
        if not components:
            raise InitialStateError("A mixture needs at least one component")
        levels = {c.shape for _, c in components}
        if len(levels) != 1 or len(next(iter(levels))) != 1:
            raise InitialStateError(
                "All components need one amplitude per level")
        total = 0.0
        for position, (m, c) in enumerate(components):
            if not 0.0 <= m <= 1.0:
                raise InitialStateError(
                    "components[{}]: probability {} is not in [0, 1]".format(
                        position, m))
            norm = float(np.sum(np.abs(c) ** 2))
            if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
                raise InitialStateError(
                    "components[{}]: amplitudes have norm {} instead of "
                    "1".format(position, norm))
            total += m
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise InitialStateError(
                "Probabilities sum to {} instead of 1".format(total))
        self.components = components

    @property
    def s(self):
        return self.components[0][1].size

    @classmethod
    def pure(cls, amplitudes):
        return cls([(1.0, amplitudes)])

    @classmethod
    def from_bloch(cls, components):
        """
        creates a two-level mixture from ``(m, theta, phi)`` triples with
        ``c_1 = sin(theta/2) exp(i phi)`` and ``c_0 = cos(theta/2)``.
        """
        return cls([(m, [math.cos(theta / 2.0),
                         math.sin(theta / 2.0) * np.exp(1j * phi)])
                    for m, theta, phi in components])

    @classmethod
    def bloch(cls, theta, phi=0.0):
        """a pure two-level state on the Bloch sphere"""
        return cls.from_bloch([(1.0, theta, phi)])

    @classmethod
    def level(cls, l, s=2):
        """all atoms in level ``l``"""
        amplitudes = np.zeros(s, dtype=np.complex128)
        amplitudes[l] = 1.0
        return cls.pure(amplitudes)

    def single_atom_density(self):
        """returns ``rho1 = sum_i m_i |psi_i><psi_i|``"""
        rho = np.zeros((self.s, self.s), dtype=np.complex128)
        for m, c in self.components:
            rho += m * np.outer(c, np.conj(c))
        return rho

    def __repr__(self):
        return "InitialStateSpec({} components, s={})".format(
            len(self.components), self.s)


class CollectiveState(object):
    """
    A collective density matrix, i.e. one complex number per basis element.

    Attributes
    ----------
    vector : numpy.ndarray
        complex values ``<n>`` in canonical basis order
    basis : superradiance.symindex.Basis
        the basis the vector refers to
    """
    def __init__(self, vector, basis):
        vector = np.asarray(vector, dtype=np.complex128)
        if vector.shape != (basis.dim,):
            raise ValueError(
                "A state over {} needs {} entries, got shape {}".format(
                    basis, basis.dim, vector.shape))
        self.vector = vector
        self.basis = basis

    @property
    def N(self):
        return self.basis.N

    @property
    def s(self):
        return self.basis.s

    @property
    def dim(self):
        return self.basis.dim

    def trace(self):
        """the trace functional ``sum_diag multiplicity * <n>``"""
        return complex(self.basis.trace_functional @ self.vector)

    def hermitian_defect(self):
        """``max |<n> - conj(<n^T>)|``, zero for a hermitian density matrix"""
        mirrored = np.conj(self.vector[self.basis.transpose_permutation])
        return float(np.abs(self.vector - mirrored).max())

    def __getitem__(self, n):
        return self.vector[self.basis.index_of(n)]

    def __add__(self, other):
        return CollectiveState(self.vector + other.vector, self.basis)

    def __mul__(self, factor):
        return CollectiveState(factor * self.vector, self.basis)

    __rmul__ = __mul__

    def __repr__(self):
        return "CollectiveState(N={}, s={}, trace={:.12g})".format(
            self.N, self.s, self.trace().real)


def _clamped_density(spec):
    rho = spec.single_atom_density()
    diagonal = np.real(np.diag(rho)).copy()
    negative = diagonal < 0
    if negative.any():
        warnings.warn(
            "Clamping negative single-atom populations {} to 0".format(
                diagonal[negative].tolist()))
        diagonal[negative] = 0.0
        rho[np.diag_indices_from(rho)] = diagonal
    return rho


def initial_state(spec, N, s=None, basis=None):
    """
    returns the collective state of ``N`` uncorrelated atoms that are all
    prepared in the mixture ``spec``.

    Parameters
    ----------
    spec : InitialStateSpec
        the single-atom mixture
    N : int
        number of atoms
    s : int or None
        number of levels (default: the number of amplitudes)
    basis : superradiance.symindex.Basis or None
        an already enumerated basis

    Returns
    -------
    state : CollectiveState
        a state with unit trace functional
    """
    s = spec.s if s is None else s
    if s != spec.s:
        raise InitialStateError(
            "The mixture has {} levels, the system {}".format(spec.s, s))
    if basis is None:
        basis = get_basis(N, s)
    rho = _clamped_density(spec)
    occupations = basis.occupations
    vector = np.ones(basis.dim, dtype=np.complex128)
    for l in range(s):
        for l_prime in range(s):
            element = rho[l_prime, l]
            counts = occupations[:, l * s + l_prime]
            if element == 0:
                vector[counts > 0] = 0.0
            elif element != 1:
                vector *= np.power(element, counts.astype(np.float64))
    logger.debug("initial state for N=%d, s=%d has trace %s", N, s,
                 basis.trace_functional @ vector)
    return CollectiveState(vector, basis)


def right_action_matrix(basis, a, b):
    """
    returns the sparse matrix ``R`` with ``(R x)[n] = <[n] S_ab>_x``, i.e.
    the collective state of ``S_ab rho`` expressed through that of ``rho``.
    """
    branches = apply_operations([Operation(1.0, (right(a, b),))],
                                basis.occupations, basis.s)
    columns = basis.indices_of(branches.targets)
    matrix = sp.coo_matrix((branches.values, (branches.rows, columns)),
                           shape=(basis.dim, basis.dim)).tocsr()
    matrix.sum_duplicates()
    return matrix


def regression_initial(std, l, l_prime):
    """
    returns the regression seed of the transition ``(l, l')``: the collective
    state of ``sigma_l'l rho_std``, whose evolution under the same generator
    yields the two-time correlation ``<sigma_ll'(tau) sigma_l'l(0)>``.
    The seed is generally not trace-normalized.
    """
    s = std.s
    if not (0 <= l < s and 0 <= l_prime < s):
        raise IndexError(
            "Level pair ({}, {}) is out of range for s={}".format(
                l, l_prime, s))
    matrix = right_action_matrix(std.basis, l_prime, l)
    return CollectiveState(matrix @ std.vector, std.basis)
