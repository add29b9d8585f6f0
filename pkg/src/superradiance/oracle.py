#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``oracle`` module is a brute-force reference implementation on the full
``s**N``-dimensional Hilbert space. It builds the Lindblad master equation
with dense matrices, integrates it directly and projects the result onto the
collective basis, so that every collective computation can be checked
against it for a few atoms.

Product states are numbered with atom 0 as the most significant digit, i.e.
``|l_0 l_1 ... l_{N-1}>`` has index ``sum_j l_j s**(N-1-j)``.
"""

import functools
import logging

import numpy as np
from more_itertools import distinct_permutations
from scipy.integrate import solve_ivp
from scipy.linalg import null_space

from superradiance.dynamics import SolverConfig
from superradiance.initial import CollectiveState
from superradiance.model import LAB_FRAME, effective_level_frequencies
from superradiance.symindex import CapacityError, get_basis

logger = logging.getLogger(__name__)

MAX_HILBERT_DIM = 4096
MAX_STEADY_STATE_DIM = 32
SYMMETRY_TOLERANCE = 1e-10


class OracleCapacityError(CapacityError):
    """Raised when the full Hilbert space exceeds the oracle's hard cap."""
    pass


class SymmetryViolationError(ValueError):
    """
    Raised when the members of one permutation group of operators have
    different expectation values, i.e. the density matrix is not
    permutation-symmetric.
    """
    pass


def check_capacity(N, s, limit=MAX_HILBERT_DIM):
    """returns ``s**N`` or raises an ``OracleCapacityError`` above ``limit``"""
    dim = s ** N
    if dim > limit:
        raise OracleCapacityError(
            "The full Hilbert space of N={} atoms with s={} levels has {} "
            "states, more than the cap of {}".format(N, s, dim, limit))
    return dim


class FullDensityMatrix(object):
    """
    A density matrix (or regression operator) on the full Hilbert space.

    Attributes
    ----------
    rho : numpy.ndarray
        complex ``s**N x s**N`` matrix
    N : int
        number of atoms
    s : int
        number of levels
    """
    def __init__(self, rho, N, s):
        dim = check_capacity(N, s)
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (dim, dim):
            raise ValueError(
                "Expected a {0}x{0} matrix, got shape {1}".format(
                    dim, rho.shape))
        self.rho = rho
        self.N = N
        self.s = s

    def trace(self):
        return complex(np.trace(self.rho))

    def hermitian_defect(self):
        return float(np.abs(self.rho - self.rho.conj().T).max())

    def min_eigenvalue(self):
        hermitian = (self.rho + self.rho.conj().T) / 2.0
        return float(np.linalg.eigvalsh(hermitian).min())

    def purity(self):
        return float(np.trace(self.rho @ self.rho).real)

    def __repr__(self):
        return "FullDensityMatrix(N={}, s={})".format(self.N, self.s)


@functools.lru_cache(maxsize=256)
def atom_operator(N, s, j, a, b):
    """returns ``sigma^j_ab = |a><b|`` acting on atom ``j``"""
    single = np.zeros((s, s), dtype=np.complex128)
    single[a, b] = 1.0
    operator = np.kron(np.kron(np.identity(s ** j), single),
                       np.identity(s ** (N - j - 1)))
    operator.setflags(write=False)
    return operator


def collective_operator(N, s, a, b):
    """returns ``S_ab = sum_j sigma^j_ab``"""
    return sum(atom_operator(N, s, j, a, b) for j in range(N))


def full_hamiltonian(params, rates):
    """
    returns the static Hamiltonian and the list of time-dependent drive
    parts ``(H_part, w)`` with factor ``exp(-i w t)`` (lab frame only).
    """
    N, s = params.N, params.s
    dim = check_capacity(N, s)
    H = np.zeros((dim, dim), dtype=np.complex128)
    for l, frequency in enumerate(effective_level_frequencies(params)):
        H += frequency * collective_operator(N, s, l, l)
    raising = np.zeros((dim, dim), dtype=np.complex128)
    for l in range(s):
        for l_prime in range(l):
            amplitude = params.drive[l, l_prime]
            if amplitude != 0:
                raising += amplitude * collective_operator(N, s, l, l_prime)
            shift = rates.Omega[l, l_prime]
            if shift != 0:
                H += shift * (collective_operator(N, s, l, l_prime)
                              @ collective_operator(N, s, l_prime, l))
    if params.frame == LAB_FRAME and params.is_driven:
        return H, [(raising, params.omega_d),
                   (raising.conj().T, -params.omega_d)]
    return H + raising + raising.conj().T, []


def jump_operators(params, rates):
    """returns the list of ``(rate, operator)`` pairs of all dissipators"""
    N, s = params.N, params.s
    jumps = []
    for l in range(s):
        for l_prime in range(s):
            rate = params.gamma[l, l_prime]
            if l != l_prime and rate > 0:
                jumps.extend((rate, atom_operator(N, s, j, l_prime, l))
                             for j in range(N))
    for l in range(s):
        for l_prime in range(l):
            rate = params.xi[l, l_prime]
            if rate > 0:
                jumps.extend((rate, atom_operator(N, s, j, l, l)
                              - atom_operator(N, s, j, l_prime, l_prime))
                             for j in range(N))
            rate = rates.Gamma[l, l_prime]
            if rate > 0:
                jumps.append((rate, collective_operator(N, s, l_prime, l)))
    return jumps


def lindblad_rhs(params, rates):
    """
    returns ``f(t, rho)`` with
    ``f = -i [H(t), rho] + sum rate (o rho o^+ - 1/2 {o^+ o, rho})``
    """
    H, drive_parts = full_hamiltonian(params, rates)
    jumps = jump_operators(params, rates)
    damping = sum((rate / 2.0) * (o.conj().T @ o) for rate, o in jumps) \
        if jumps else np.zeros_like(H)

    def rhs(t, rho):
        hamiltonian = H
        for part, frequency in drive_parts:
            hamiltonian = hamiltonian + np.exp(-1j * frequency * t) * part
        effective = hamiltonian - 1j * damping
        result = -1j * (effective @ rho - rho @ effective.conj().T)
        for rate, o in jumps:
            result += rate * (o @ rho @ o.conj().T)
        return result
    return rhs


def _evolve_matrix(rho0, params, rates, times, cfg):
    cfg = SolverConfig() if cfg is None else cfg
    times = np.asarray(times, dtype=float)
    dim = rho0.shape[0]
    rhs = lindblad_rhs(params, rates)
    if times.size == 1:
        return [np.array(rho0)]
    solution = solve_ivp(
        lambda t, y: rhs(t, y.reshape(dim, dim)).reshape(-1),
        (times[0], times[-1]), np.asarray(rho0, dtype=np.complex128).reshape(-1),
        method='RK45', t_eval=times, rtol=cfg.rel_tol, atol=cfg.abs_tol,
        max_step=cfg.max_step)
    if not solution.success:
        raise RuntimeError("Oracle integration failed: {}".format(
            solution.message))
    return [solution.y[:, k].reshape(dim, dim) for k in range(times.size)]


def full_evolve(rho0, params, rates, times, cfg=None):
    """
    integrates the full master equation.

    Parameters
    ----------
    rho0 : FullDensityMatrix
        the initial density matrix
    params : superradiance.model.SystemParams
        the system, in the same frame as the collective computation
    rates : superradiance.model.CollectiveRates
        collective rates
    times : array-like
        output times
    cfg : superradiance.dynamics.SolverConfig or None
        integrator tolerances

    Returns
    -------
    states : list of FullDensityMatrix
    """
    if (params.N, params.s) != (rho0.N, rho0.s):
        raise ValueError("The density matrix does not match the system")
    matrices = _evolve_matrix(rho0.rho, params, rates, times, cfg)
    return [FullDensityMatrix(matrix, rho0.N, rho0.s) for matrix in matrices]


def product_density_matrix(spec, N):
    """returns ``rho1 (x) rho1 (x) ... (x) rho1`` for a single-atom mixture"""
    check_capacity(N, spec.s)
    single = spec.single_atom_density()
    rho = np.ones((1, 1), dtype=np.complex128)
    for _ in range(N):
        rho = np.kron(rho, single)
    return FullDensityMatrix(rho, N, spec.s)


def _product_index(levels, s):
    index = 0
    for level in levels:
        index = index * s + level
    return index


def _pairs_of(occupation, s):
    """the sorted list of ``(ket, bra)`` level pairs of an occupation row"""
    pairs = []
    for position, count in enumerate(occupation.tolist()):
        pairs.extend([(position // s, position % s)] * count)
    return pairs


def project_collective(rho, check=True, tolerance=SYMMETRY_TOLERANCE):
    """
    projects a full density matrix onto the collective basis.

    For every occupation matrix the representative ``|alpha><beta|`` with the
    lexicographically smallest pair ``(alpha, beta)`` is used and
    ``tr(rho |alpha><beta|) = rho[beta, alpha]`` is returned.

    Parameters
    ----------
    rho : FullDensityMatrix
        the density matrix
    check : bool
        compare all members of every group with the representative
    tolerance : float
        largest accepted disagreement within a group

    Raises
    ------
    SymmetryViolationError
        if ``rho`` is not permutation-symmetric
    """
    N, s = rho.N, rho.s
    basis = get_basis(N, s)
    vector = np.empty(basis.dim, dtype=np.complex128)
    worst = 0.0
    for i, occupation in enumerate(basis.occupations):
        pairs = _pairs_of(occupation, s)
        alpha = _product_index([ket for ket, _ in pairs], s)
        beta = _product_index([bra for _, bra in pairs], s)
        value = rho.rho[beta, alpha]
        vector[i] = value
        if not check:
            continue
        for permuted in distinct_permutations(pairs):
            member = rho.rho[_product_index([bra for _, bra in permuted], s),
                             _product_index([ket for ket, _ in permuted], s)]
            deviation = abs(member - value)
            if deviation > tolerance:
                raise SymmetryViolationError(
                    "Operators of the group {} disagree by {:.3e}; the "
                    "density matrix is not permutation-symmetric".format(
                        occupation.reshape(s, s).tolist(), deviation))
            worst = max(worst, deviation)
    logger.debug("projected %s, largest group deviation %.3e", rho, worst)
    return CollectiveState(vector, basis)


def full_two_time(std_rho, params, rates, l, l_prime, taus, cfg=None):
    """
    returns ``g(tau) = tr(S_ll' rho~(tau))`` where ``rho~`` starts from
    ``S_l'l rho_std`` and evolves under the full master equation.
    """
    N, s = std_rho.N, std_rho.s
    seed = collective_operator(N, s, l_prime, l) @ std_rho.rho
    readout = collective_operator(N, s, l, l_prime)
    matrices = _evolve_matrix(seed, params, rates, taus, cfg)
    return np.array([np.trace(readout @ matrix) for matrix in matrices])


def full_liouvillian(params, rates):
    """
    returns the dense superoperator of the (time-independent) master
    equation acting on row-major flattened density matrices.
    """
    H, drive_parts = full_hamiltonian(params, rates)
    if drive_parts:
        raise ValueError("The lab-frame drive has no constant Liouvillian")
    dim = H.shape[0]
    identity = np.identity(dim)
    liouvillian = -1j * (np.kron(H, identity) - np.kron(identity, H.T))
    for rate, o in jump_operators(params, rates):
        product = o.conj().T @ o
        liouvillian += rate * (
            np.kron(o, o.conj())
            - 0.5 * np.kron(product, identity)
            - 0.5 * np.kron(identity, product.T))
    return liouvillian


def full_steady_state(params, rates):
    """
    returns the steady state from the null space of the dense Liouvillian
    (at most ``MAX_STEADY_STATE_DIM`` product states).
    """
    dim = check_capacity(params.N, params.s, limit=MAX_STEADY_STATE_DIM)
    kernel = null_space(full_liouvillian(params, rates), rcond=1e-10)
    if kernel.shape[1] != 1:
        logger.warning("the Liouvillian has a %d-dimensional null space",
                       kernel.shape[1])
    rho = kernel[:, 0].reshape(dim, dim)
    return FullDensityMatrix(rho / np.trace(rho), params.N, params.s)
