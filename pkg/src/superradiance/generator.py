#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``generator`` module assembles the sparse generator ``L`` of the
collective equation of motion ``d<n>/dt = L <n>``.

Each of the six contributions (atomic Hamiltonian, coherent drive, collective
Lamb shift, individual decay/pump, dephasing and collective decay) is written
as a list of ``sandwich.Operation`` objects acting on the basis element
``[n]`` in the Heisenberg picture,

    d<n>/dt = < i[H, [n]] + sum_o rate (o^+ [n] o - 1/2 {o^+ o, [n]}) >,

and every resulting branch ``coefficient * [n']`` becomes the matrix entry
``L[index(n), index(n')]``.
"""

from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import logging
import time

import numpy as np
import scipy.sparse as sp

from superradiance.model import (
    LAB_FRAME, ROTATING_FRAME, effective_level_frequencies)
from superradiance.sandwich import (
    Operation, apply_operations, commutator, left, right, sandwich)
from superradiance.symindex import get_basis

logger = logging.getLogger(__name__)

TERM_NAMES = ('atomic', 'drive', 'lamb_shift', 'individual_dissipation',
              'dephasing', 'collective_decay')

# entries smaller than this fraction of the largest entry are dropped
DROP_TOLERANCE = 1e-15

# number of basis elements processed per assembly task
CHUNK_SIZE = 65536


class GeneratorError(ValueError):
    """Raised when a generator cannot be built or applied as requested."""
    pass


class TermSet(namedtuple('TermSet', TERM_NAMES)):
    """
    Flags enabling each contribution to the generator. All contributions are
    enabled by default.
    """
    __slots__ = ()

    def __new__(cls, atomic=True, drive=True, lamb_shift=True,
                individual_dissipation=True, dephasing=True,
                collective_decay=True):
        return super(TermSet, cls).__new__(
            cls, atomic, drive, lamb_shift, individual_dissipation,
            dephasing, collective_decay)

    @classmethod
    def only(cls, *names):
        """returns a term set with only the given contributions enabled"""
        unknown = set(names) - set(TERM_NAMES)
        if unknown:
            raise GeneratorError("Unknown terms: {}".format(sorted(unknown)))
        return cls(**{name: name in names for name in TERM_NAMES})

    @property
    def enabled(self):
        return [name for name in TERM_NAMES if getattr(self, name)]


def _lower_pairs(s):
    for l in range(s):
        for l_prime in range(l):
            yield l, l_prime


def atomic_operations(params):
    """``H_a = sum_l omega_l S_ll`` with frame-shifted level frequencies"""
    operations = []
    for l, frequency in enumerate(effective_level_frequencies(params)):
        if frequency != 0:
            operations.extend(commutator(frequency, [(l, l)]))
    return operations


def drive_operations(params, part=None):
    """
    ``H_d = sum_{l>l'} (v0 S_ll' + v0* S_l'l)``.

    ``part`` selects the raising half (``'raising'``, time factor
    ``exp(-i omega_d t)`` in the lab frame), the lowering half
    (``'lowering'``, ``exp(+i omega_d t)``) or both (None).
    """
    operations = []
    for l, l_prime in _lower_pairs(params.s):
        amplitude = params.drive[l, l_prime]
        if amplitude == 0:
            continue
        if part in (None, 'raising'):
            operations.extend(commutator(amplitude, [(l, l_prime)]))
        if part in (None, 'lowering'):
            operations.extend(commutator(np.conj(amplitude), [(l_prime, l)]))
    return operations


def lamb_shift_operations(rates):
    """``H_s = sum_{l>l'} Omega_ll' S_ll' S_l'l``"""
    operations = []
    for l, l_prime in _lower_pairs(rates.s):
        shift = rates.Omega[l, l_prime]
        if shift != 0:
            operations.extend(commutator(shift, [(l, l_prime), (l_prime, l)]))
    return operations


def individual_dissipation_operations(params):
    """
    one jump operator ``sigma^j_l'l`` per atom and ordered pair ``l != l'``,
    with rate ``gamma[l, l']`` (decay for ``l > l'``, pump for ``l < l'``).
    """
    operations = []
    s = params.s
    for l in range(s):
        for l_prime in range(s):
            rate = params.gamma[l, l_prime]
            if l == l_prime or rate == 0:
                continue
            operations.extend([
                Operation(-rate / 2.0, (left(l, l),)),
                Operation(-rate / 2.0, (right(l, l),)),
                Operation(rate, (sandwich(l, l_prime, l_prime, l),)),
            ])
    return operations


def dephasing_operations(params):
    """
    one hermitian jump operator ``sigma^j_ll - sigma^j_l'l'`` per atom and
    pair ``l > l'``, with rate ``xi[l, l']``.
    """
    operations = []
    for l, l_prime in _lower_pairs(params.s):
        rate = params.xi[l, l_prime]
        if rate == 0:
            continue
        for level in (l, l_prime):
            operations.append(Operation(-rate / 2.0, (left(level, level),)))
            operations.append(Operation(-rate / 2.0, (right(level, level),)))
        operations.extend([
            Operation(rate, (sandwich(l, l, l, l),)),
            Operation(-rate, (sandwich(l, l, l_prime, l_prime),)),
            Operation(-rate, (sandwich(l_prime, l_prime, l, l),)),
            Operation(rate, (sandwich(l_prime, l_prime, l_prime, l_prime),)),
        ])
    return operations


def collective_decay_operations(rates):
    """one collective jump operator ``S_l'l`` per pair ``l > l'``"""
    operations = []
    for l, l_prime in _lower_pairs(rates.s):
        rate = rates.Gamma[l, l_prime]
        if rate == 0:
            continue
        operations.extend([
            Operation(-rate / 2.0, (left(l_prime, l), left(l, l_prime))),
            Operation(-rate / 2.0, (right(l, l_prime), right(l_prime, l))),
            Operation(rate, (right(l_prime, l), left(l, l_prime))),
        ])
    return operations


def operations_for(params, rates, terms, drive_part=None):
    """collects the operations of all contributions enabled in ``terms``"""
    operations = []
    if terms.atomic:
        operations += atomic_operations(params)
    if terms.drive:
        operations += drive_operations(params, part=drive_part)
    if terms.lamb_shift:
        operations += lamb_shift_operations(rates)
    if terms.individual_dissipation:
        operations += individual_dissipation_operations(params)
    if terms.dephasing:
        operations += dephasing_operations(params)
    if terms.collective_decay:
        operations += collective_decay_operations(rates)
    return operations


def _assemble_chunk(basis, operations, start, stop):
    """assembles the rows ``start .. stop-1`` as a CSR block"""
    occupations = basis.occupations[start:stop]
    branches = apply_operations(operations, occupations, basis.s)
    columns = basis.indices_of(branches.targets)
    block = sp.coo_matrix(
        (branches.values, (branches.rows, columns)),
        shape=(stop - start, basis.dim)).tocsr()
    block.sum_duplicates()
    return block


def assemble(basis, operations, jobs=1, chunk_size=CHUNK_SIZE):
    """
    assembles a list of operations into a sparse matrix over ``basis``.

    Rows are processed in independent chunks, optionally by ``jobs`` worker
    threads. Duplicate entries are summed and entries below
    ``DROP_TOLERANCE`` times the largest magnitude are dropped.

    Returns
    -------
    matrix : scipy.sparse.csr_matrix
        complex ``dim x dim`` matrix with sorted indices
    """
    dim = basis.dim
    if not operations:
        return sp.csr_matrix((dim, dim), dtype=np.complex128)
    bounds = [(start, min(start + chunk_size, dim))
              for start in range(0, dim, chunk_size)]
    if jobs > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            blocks = list(executor.map(
                lambda bound: _assemble_chunk(basis, operations, *bound),
                bounds))
    else:
        blocks = [_assemble_chunk(basis, operations, *bound)
                  for bound in bounds]
    matrix = sp.vstack(blocks, format='csr')
    if matrix.nnz:
        largest = np.abs(matrix.data).max()
        matrix.data[np.abs(matrix.data) < DROP_TOLERANCE * largest] = 0
        matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


class Generator(object):
    """
    The assembled generator ``L`` with ``d<n>/dt = L(t) <n>``.

    In the rotating frame ``L`` is a constant sparse matrix. In the lab frame
    a coherent drive contributes ``exp(-i omega_d t) A + exp(i omega_d t) B``
    on top of the static part.

    Attributes
    ----------
    basis : superradiance.symindex.Basis
        the collective basis the generator acts on
    matrix : scipy.sparse.csr_matrix
        the time-independent part
    drive_parts : list of (scipy.sparse.csr_matrix, float)
        time-dependent parts with the frequency ``w`` of their factor
        ``exp(-i w t)``
    frame : str
        'rotating' or 'lab'
    terms : TermSet
        the enabled contributions
    """
    def __init__(self, basis, matrix, drive_parts=(), frame=ROTATING_FRAME,
                 terms=None):
        self.basis = basis
        self.matrix = matrix
        self.drive_parts = [(part, frequency) for part, frequency in drive_parts
                            if part.nnz]
        self.frame = frame
        self.terms = TermSet() if terms is None else terms

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def nnz(self):
        return self.matrix.nnz + sum(part.nnz for part, _ in self.drive_parts)

    @property
    def is_time_dependent(self):
        return bool(self.drive_parts)

    def at(self, t):
        """returns the generator matrix at time ``t``"""
        matrix = self.matrix
        for part, frequency in self.drive_parts:
            matrix = matrix + np.exp(-1j * frequency * t) * part
        return matrix

    def rhs(self, t, x):
        """the right-hand side ``L(t) x``"""
        result = self.matrix @ x
        for part, frequency in self.drive_parts:
            result += np.exp(-1j * frequency * t) * (part @ x)
        return result

    def __matmul__(self, x):
        if self.is_time_dependent:
            raise GeneratorError(
                "A time-dependent generator has no constant matrix product")
        return self.matrix @ x

    def entries(self):
        """yields ``(row, col, value)`` of the static part in CSR order"""
        coo = self.matrix.tocoo()
        for row, col, value in zip(coo.row, coo.col, coo.data):
            yield int(row), int(col), complex(value)

    def __repr__(self):
        return "Generator(dim={}, nnz={}, frame='{}')".format(
            self.dim, self.nnz, self.frame)


def build_generator(params, rates, terms=None, jobs=1, basis=None):
    """
    assembles the generator of a system.

    Parameters
    ----------
    params : superradiance.model.SystemParams
        the system
    rates : superradiance.model.CollectiveRates
        collective decay rates and Lamb shifts
    terms : TermSet or None
        enabled contributions (default: all)
    jobs : int
        number of assembly threads
    basis : superradiance.symindex.Basis or None
        an already enumerated basis for ``(params.N, params.s)``

    Returns
    -------
    generator : Generator
        constant in the rotating frame; a driven system in the lab frame
        yields a time-dependent generator, which ``steady_state`` and
        ``spectrum`` refuse
    """
    terms = TermSet() if terms is None else terms
    if rates.s != params.s:
        raise GeneratorError(
            "Collective rates for s={} do not fit a system with s={}".format(
                rates.s, params.s))
    if basis is None:
        basis = get_basis(params.N, params.s)
    started = time.time()
    lab_drive = params.frame == LAB_FRAME and terms.drive and params.is_driven
    static_terms = terms._replace(drive=False) if lab_drive else terms
    matrix = assemble(basis, operations_for(params, rates, static_terms),
                      jobs=jobs)
    drive_parts = []
    if lab_drive:
        drive_only = TermSet.only('drive')
        for part, frequency in (('raising', params.omega_d),
                                ('lowering', -params.omega_d)):
            operations = operations_for(params, rates, drive_only,
                                        drive_part=part)
            drive_parts.append((assemble(basis, operations, jobs=jobs),
                                frequency))
        logger.info("lab-frame drive makes the generator time-dependent")
    generator = Generator(basis, matrix, drive_parts, frame=params.frame,
                          terms=terms)
    logger.info("assembled generator for N=%d, s=%d: dim=%d, nnz=%d in %.2fs",
                params.N, params.s, generator.dim, generator.nnz,
                time.time() - started)
    return generator


def _single_contribution(name, params, rates):
    if name == 'drive' and params.frame == LAB_FRAME and params.is_driven:
        raise GeneratorError(
            "The lab-frame drive is time-dependent; use build_generator")
    basis = get_basis(params.N, params.s)
    return assemble(basis, operations_for(params, rates, TermSet.only(name)))


def contribution_atomic(params, rates=None):
    """sparse matrix of the atomic Hamiltonian contribution"""
    return _single_contribution('atomic', params, rates)


def contribution_drive(params, rates=None):
    """sparse matrix of the rotating-frame drive contribution"""
    return _single_contribution('drive', params, rates)


def contribution_lamb_shift(params, rates):
    """sparse matrix of the collective Lamb shift contribution"""
    return _single_contribution('lamb_shift', params, rates)


def contribution_individual_dissipation(params, rates=None):
    """sparse matrix of individual decay and incoherent pumping"""
    return _single_contribution('individual_dissipation', params, rates)


def contribution_dephasing(params, rates=None):
    """sparse matrix of the dephasing contribution"""
    return _single_contribution('dephasing', params, rates)


def contribution_collective_decay(params, rates):
    """sparse matrix of the collective decay contribution"""
    return _single_contribution('collective_decay', params, rates)


def trace_defect(generator):
    """
    returns ``||w^T L||_inf / ||L||_inf`` for the trace functional ``w``,
    which vanishes for a trace-preserving generator.
    """
    w = generator.basis.trace_functional
    worst, scale = 0.0, 0.0
    for matrix in [generator.matrix] + [p for p, _ in generator.drive_parts]:
        if matrix.nnz == 0:
            continue
        worst = max(worst, np.abs(matrix.T @ w).max())
        scale = max(scale, np.abs(matrix).max() * w.max())
    return worst / scale if scale else 0.0
