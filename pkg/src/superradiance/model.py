#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``model`` module holds the physical parameters of an ensemble of ``N``
identical ``s``-level atoms coupled to a lossy cavity mode and derives the
collective decay rates and Lamb shifts that remain after the cavity mode has
been eliminated.

All pair-indexed quantities are ``s x s`` arrays indexed ``[l, l']``. Drive
strengths, dephasing rates and collective rates are only defined for
``l > l'``; individual rates ``gamma[l, l']`` describe decay for ``l > l'``
and incoherent pumping for ``l < l'``. Undefined entries are zero.
"""

import logging

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

ROTATING_FRAME = 'rotating'
LAB_FRAME = 'lab'
FRAMES = (ROTATING_FRAME, LAB_FRAME)


class ModelError(ValueError):
    """Raised for physically invalid or inconsistent parameters."""
    pass


class SingularEliminationError(ModelError):
    """
    Raised when collective rates are requested from a cavity without loss,
    where the adiabatic elimination of the cavity mode breaks down.
    """
    pass


class FrameError(ModelError):
    """
    Raised when the driven transitions admit no rotating frame in which the
    drive becomes time-independent.
    """
    pass


def _pair_array(entries, s, dtype, name, lower_only=False, allow_diagonal=False):
    """
    converts ``None``, a dict ``{(l, l'): value}`` or an ``s x s`` array-like
    into a read-only ``s x s`` array and checks which pairs are populated.
    """
    grid = np.zeros((s, s), dtype=dtype)
    if entries is None:
        pass
    elif isinstance(entries, dict):
        for (l, l_prime), value in entries.items():
            if not (0 <= l < s and 0 <= l_prime < s):
                raise ModelError(
                    "{}: level pair ({}, {}) is out of range for s={}".format(
                        name, l, l_prime, s))
            grid[l, l_prime] = value
    else:
        grid[...] = np.asarray(entries, dtype=dtype)
    if not allow_diagonal and np.any(np.diag(grid) != 0):
        raise ModelError("{}: diagonal entries must be zero".format(name))
    if lower_only and np.any(np.triu(grid) != 0):
        raise ModelError(
            "{}: only pairs with l > l' may be set".format(name))
    grid.setflags(write=False)
    return grid


def _check_rates(grid, name):
    if np.any(grid < 0):
        raise ModelError("{}: rates must be non-negative".format(name))
    if not np.all(np.isfinite(grid)):
        raise ModelError("{}: rates must be finite".format(name))


class CavityParams(object):
    """
    An explicitly given cavity mode.

    Attributes
    ----------
    g : numpy.ndarray
        complex ``s x s`` atom-cavity couplings (rad/time), ``l > l'`` only
    kappa : float
        cavity loss rate (1/time)
    omega_c : float
        cavity frequency (rad/time)
    """
    def __init__(self, g, kappa, omega_c, s):
        self.g = _pair_array(g, s, np.complex128, 'g', lower_only=True)
        self.kappa = float(kappa)
        self.omega_c = float(omega_c)
        if self.kappa < 0:
            raise ModelError("kappa: the cavity loss must be non-negative")


class SystemParams(object):
    """
    All physical parameters of the atomic ensemble.

    Attributes
    ----------
    N : int
        number of atoms
    s : int
        number of levels per atom
    omega : numpy.ndarray
        level angular frequencies (rad/time), length ``s``
    drive : numpy.ndarray
        complex drive strengths ``v0[l, l']`` (rad/time), ``l > l'`` only
    omega_d : float
        drive frequency (rad/time)
    gamma : numpy.ndarray
        individual decay (``l > l'``) and pump (``l < l'``) rates (1/time)
    xi : numpy.ndarray
        dephasing rates (1/time), ``l > l'`` only
    cavity : CavityParams or None
        the explicit cavity, if collective rates are to be derived
    Gamma, Omega : numpy.ndarray or None
        directly given collective decay rates and Lamb shifts
    lamb_shift_sign : int
        +1 or -1, multiplies every derived Lamb shift
    frame : str
        'rotating' (drive removed by level offsets) or 'lab'
    """
    def __init__(self, N, s=2, omega=None, drive=None, omega_d=0.0,
                 gamma=None, xi=None, cavity=None, Gamma=None, Omega=None,
                 lamb_shift_sign=1, frame=ROTATING_FRAME):
        if int(N) != N or N < 1:
            raise ModelError("N must be a positive integer, got {}".format(N))
        if int(s) != s or s < 2:
            raise ModelError("s must be an integer >= 2, got {}".format(s))
        self.N = int(N)
        self.s = int(s)

        omega = np.zeros(s) if omega is None else np.array(omega, dtype=float)
        if omega.shape != (s,):
            raise ModelError(
                "omega: expected {} level frequencies, got shape {}".format(
                    s, omega.shape))
        omega.setflags(write=False)
        self.omega = omega
        self.drive = _pair_array(drive, s, np.complex128, 'drive',
                                 lower_only=True)
        self.omega_d = float(omega_d)
        self.gamma = _pair_array(gamma, s, float, 'gamma')
        _check_rates(self.gamma, 'gamma')
        self.xi = _pair_array(xi, s, float, 'xi', lower_only=True)
        _check_rates(self.xi, 'xi')

        if cavity is not None and (Gamma is not None or Omega is not None):
            raise ModelError(
                "Give either an explicit cavity or direct collective rates, "
                "not both")
        if cavity is not None and not isinstance(cavity, CavityParams):
            cavity = CavityParams(s=s, **cavity)
        self.cavity = cavity
        self.Gamma = None if Gamma is None else _pair_array(
            Gamma, s, float, 'Gamma', lower_only=True)
        if self.Gamma is not None:
            _check_rates(self.Gamma, 'Gamma')
        self.Omega = None if Omega is None else _pair_array(
            Omega, s, float, 'Omega', lower_only=True)

        if lamb_shift_sign not in (1, -1):
            raise ModelError("lamb_shift_sign must be +1 or -1")
        self.lamb_shift_sign = int(lamb_shift_sign)
        if frame not in FRAMES:
            raise ModelError(
                "frame must be one of {}, got '{}'".format(FRAMES, frame))
        self.frame = frame

    @property
    def is_driven(self):
        return bool(np.any(self.drive != 0))

    def replace(self, **changes):
        """returns a copy with some attributes replaced"""
        kwargs = dict(N=self.N, s=self.s, omega=self.omega, drive=self.drive,
                      omega_d=self.omega_d, gamma=self.gamma, xi=self.xi,
                      cavity=self.cavity, Gamma=self.Gamma, Omega=self.Omega,
                      lamb_shift_sign=self.lamb_shift_sign, frame=self.frame)
        kwargs.update(changes)
        return SystemParams(**kwargs)

    def __repr__(self):
        return "SystemParams(N={}, s={}, frame='{}')".format(
            self.N, self.s, self.frame)


class CollectiveRates(object):
    """
    Collective rates after elimination of the cavity mode.

    Attributes
    ----------
    Gamma : numpy.ndarray
        collective decay rates (1/time), ``l > l'`` only
    Omega : numpy.ndarray
        collective Lamb shifts (rad/time), ``l > l'`` only
    chi : numpy.ndarray or None
        detunings ``omega_l - omega_l' - omega_c`` (rad/time); None if the
        rates were given directly
    """
    def __init__(self, Gamma, Omega=None, chi=None):
        Gamma = np.array(Gamma, dtype=float)
        s = Gamma.shape[0]
        self.Gamma = _pair_array(Gamma, s, float, 'Gamma', lower_only=True)
        _check_rates(self.Gamma, 'Gamma')
        self.Omega = _pair_array(Omega, s, float, 'Omega', lower_only=True)
        self.chi = None if chi is None else _pair_array(
            chi, s, float, 'chi', lower_only=True)

    @property
    def s(self):
        return self.Gamma.shape[0]

    def transitions(self):
        """yields the ``(l, l')`` pairs with a nonzero collective rate"""
        for l in range(self.s):
            for l_prime in range(l):
                if self.Gamma[l, l_prime] != 0 or self.Omega[l, l_prime] != 0:
                    yield l, l_prime

    def __repr__(self):
        return "CollectiveRates(Gamma={}, Omega={})".format(
            self.Gamma.tolist(), self.Omega.tolist())


def derive_collective_rates(params):
    """
    returns the collective decay rates and Lamb shifts of a system.

    For an explicit cavity, ``chi = omega_l - omega_l' - omega_c`` and

        Gamma = |g|^2 (kappa/2) / (chi^2 + (kappa/2)^2)
        Omega = sign * |g|^2 chi / (chi^2 + (kappa/2)^2)

    Directly given rates are passed through with ``chi`` unset.

    Raises
    ------
    SingularEliminationError
        if the explicit cavity has ``kappa = 0``
    """
    s = params.s
    if params.cavity is None:
        Gamma = np.zeros((s, s)) if params.Gamma is None else params.Gamma
        Omega = np.zeros((s, s)) if params.Omega is None else params.Omega
        return CollectiveRates(Gamma, Omega)

    cavity = params.cavity
    if cavity.kappa == 0:
        raise SingularEliminationError(
            "The cavity mode can only be eliminated for kappa > 0")
    lower = np.tril(np.ones((s, s), dtype=bool), k=-1)
    chi = np.where(
        lower,
        params.omega[:, np.newaxis] - params.omega[np.newaxis, :] - cavity.omega_c,
        0.0)
    half_kappa = cavity.kappa / 2.0
    coupling = np.abs(cavity.g) ** 2
    denominator = chi ** 2 + half_kappa ** 2
    Gamma = coupling * half_kappa / denominator
    Omega = params.lamb_shift_sign * coupling * chi / denominator
    return CollectiveRates(Gamma, Omega, chi=chi)


def rates_from_detuning(Gamma0, alpha, s=2, transition=(1, 0),
                        lamb_shift_sign=1):
    """
    returns the collective rates of one transition parameterized by the
    scaled detuning ``alpha = 2 chi / kappa``:
    ``Gamma = Gamma0 / (alpha^2 + 1)`` and
    ``Omega = sign * Gamma0 * alpha / (alpha^2 + 1)``.
    """
    if Gamma0 < 0:
        raise ModelError("Gamma0 must be non-negative")
    Gamma = np.zeros((s, s))
    Omega = np.zeros((s, s))
    Gamma[transition] = Gamma0 / (alpha ** 2 + 1.0)
    Omega[transition] = lamb_shift_sign * Gamma0 * alpha / (alpha ** 2 + 1.0)
    return CollectiveRates(Gamma, Omega)


def drive_graph(params):
    """
    returns the undirected level graph with an edge for every driven pair.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(params.s))
    for l, l_prime in zip(*np.nonzero(params.drive)):
        graph.add_edge(int(l), int(l_prime))
    return graph


def frame_offsets(params):
    """
    returns the level offsets ``theta_l`` of the rotating frame.

    In the rotating frame every driven pair ``l > l'`` satisfies
    ``theta_l - theta_l' = omega_d``. Offsets are assigned by a breadth-first
    traversal of the drive graph starting from the lowest level of every
    connected component, which gets offset 0. In the lab frame all offsets
    are zero.

    Raises
    ------
    FrameError
        if a cycle of driven transitions makes the offsets inconsistent
    """
    theta = np.zeros(params.s)
    if params.frame == LAB_FRAME:
        return theta
    graph = drive_graph(params)
    for component in nx.connected_components(graph):
        root = min(component)
        for source, target in nx.bfs_edges(graph, root):
            if target > source:
                theta[target] = theta[source] + params.omega_d
            else:
                theta[target] = theta[source] - params.omega_d
    for upper, lower in graph.edges():
        upper, lower = max(upper, lower), min(upper, lower)
        if not np.isclose(theta[upper] - theta[lower], params.omega_d,
                          rtol=1e-12, atol=1e-12):
            raise FrameError(
                "The driven transitions ({}, {}) and its cycle admit no "
                "common rotating frame at omega_d={}".format(
                    upper, lower, params.omega_d))
    logger.debug("rotating frame offsets: %s", theta.tolist())
    return theta


def effective_level_frequencies(params):
    """returns ``omega_l - theta_l``, the level frequencies in the frame"""
    return params.omega - frame_offsets(params)
