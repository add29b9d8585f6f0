#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``symindex`` module enumerates, ranks and unranks the collective basis.

A collective basis element is labelled by an occupation matrix ``n``: an
``s x s`` grid of non-negative integers ``n[l, l']`` summing to ``N``, where
``n[l, l']`` counts the atoms whose single-atom operator is ``|l><l'|``.

Occupation matrices are stored flattened in row-major order, i.e. entry
``(l, l')`` lives at position ``l * s + l'``. The canonical order of the basis
is ascending lexicographic order over these flat tuples, so the first element
has ``n[s-1, s-1] = N`` and the last one has ``n[0, 0] = N``. Ranks are
computed with the combinatorial number system for compositions, which needs
O(s^2) table lookups per element and no hash table.
"""

import functools
import logging
import math
import sys

import numpy as np
from scipy.special import gammaln

logger = logging.getLogger(__name__)

# largest basis that ``enumerate_basis`` materializes by default
MAX_BASIS_SIZE = 60000000

# multinomials of up to this many atoms are returned as exact integers
MULTIPLICITY_EXACT_LIMIT = 170


class CapacityError(MemoryError):
    """
    Raised when a basis is too large to be addressed or materialized on this
    platform.
    """
    pass


class OccupationError(ValueError):
    """
    Raised when an occupation matrix has negative entries, a wrong shape or a
    total that does not match the atom count.
    """
    pass


def check_sizes(N, s):
    """raises an ``OccupationError`` unless ``N >= 1`` and ``s >= 2``."""
    if int(N) != N or N < 1:
        raise OccupationError(
            "The atom count N must be a positive integer, got {}".format(N))
    if int(s) != s or s < 2:
        raise OccupationError(
            "The level count s must be an integer >= 2, got {}".format(s))


def dimension(N, s):
    """
    returns the number of collective basis elements, i.e. the number of ways
    to distribute ``N`` atoms over ``s**2`` operator slots.

    Parameters
    ----------
    N : int
        number of atoms
    s : int
        number of levels per atom

    Returns
    -------
    dim : int
        C(N + s^2 - 1, s^2 - 1), computed exactly

    Raises
    ------
    CapacityError
        if the dimension exceeds the largest addressable index
    """
    check_sizes(N, s)
    dim = math.comb(N + s * s - 1, s * s - 1)
    if dim > sys.maxsize:
        raise CapacityError(
            "The collective basis for N={} atoms with s={} levels has {} "
            "elements, which exceeds the addressable size {}".format(
                N, s, dim, sys.maxsize))
    return dim


def occupation_dtype(N):
    """returns the smallest signed integer type that holds counts up to N."""
    if N < 2 ** 15:
        return np.int16
    elif N < 2 ** 31:
        return np.int32
    return np.int64


class OccupationMatrix(object):
    """
    An occupation matrix labelling one collective basis element.

    Attributes
    ----------
    n : numpy.ndarray
        read-only ``(s, s)`` integer array of occupation counts
    N : int
        number of atoms (sum of all entries)
    s : int
        number of levels
    """
    __slots__ = ('n', 'N', 's')

    def __init__(self, n, N=None):
        grid = np.array(n, dtype=np.int64)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise OccupationError(
                "An occupation matrix must be square, got shape {}".format(
                    grid.shape))
        if (grid < 0).any():
            raise OccupationError(
                "Occupation counts must be non-negative: {}".format(
                    grid.tolist()))
        total = int(grid.sum())
        if N is not None and total != N:
            raise OccupationError(
                "Occupation counts sum to {} instead of N={}".format(total, N))
        check_sizes(total, grid.shape[0])
        grid.setflags(write=False)
        self.n = grid
        self.N = total
        self.s = grid.shape[0]

    @classmethod
    def from_flat(cls, flat, s=None, N=None):
        """creates an occupation matrix from its row-major flat form"""
        flat = np.asarray(flat, dtype=np.int64)
        if s is None:
            s = int(round(math.sqrt(flat.size)))
        if flat.size != s * s:
            raise OccupationError(
                "A flat occupation vector for s={} needs {} entries, "
                "got {}".format(s, s * s, flat.size))
        return cls(flat.reshape(s, s), N=N)

    @property
    def flat(self):
        """the row-major flat form of the occupation counts"""
        return self.n.reshape(-1)

    def is_diagonal(self):
        """returns True, iff all off-diagonal counts are zero"""
        return int(self.n.sum() - np.trace(self.n)) == 0

    def transpose(self):
        """the occupation matrix of the hermitian conjugate operator group"""
        return OccupationMatrix(self.n.T, N=self.N)

    def __eq__(self, other):
        if not isinstance(other, OccupationMatrix):
            return NotImplemented
        return self.s == other.s and np.array_equal(self.n, other.n)

    def __hash__(self):
        return hash((self.s, tuple(self.flat.tolist())))

    def __repr__(self):
        return "OccupationMatrix({})".format(self.n.tolist())


@functools.lru_cache(maxsize=32)
def binomial_table(N, m):
    """
    returns the read-only table ``T[R, k] = C(R + k, k)`` for ``0 <= R <= N``
    and ``0 <= k < m``, filled with Pascal's rule.
    """
    table = np.ones((N + 1, m), dtype=np.int64)
    for k in range(1, m):
        table[:, k] = np.cumsum(table[:, k - 1])
    table.setflags(write=False)
    return table


def _compositions(total, parts, dtype, memo):
    """
    returns all compositions of ``total`` into ``parts`` non-negative parts,
    in ascending lexicographic order, as a ``(count, parts)`` array.
    """
    key = (total, parts)
    if key in memo:
        return memo[key]
    if parts == 1:
        result = np.array([[total]], dtype=dtype)
    else:
        blocks = []
        for first in range(total + 1):
            tail = _compositions(total - first, parts - 1, dtype, memo)
            head = np.full((tail.shape[0], 1), first, dtype=dtype)
            blocks.append(np.hstack((head, tail)))
        result = np.vstack(blocks)
    memo[key] = result
    return result


def enumerate_basis(N, s, max_size=MAX_BASIS_SIZE):
    """
    enumerates the collective basis in canonical order.

    Parameters
    ----------
    N : int
        number of atoms
    s : int
        number of levels
    max_size : int
        memory budget in basis elements

    Returns
    -------
    occupations : numpy.ndarray
        read-only ``(dim, s*s)`` array of flat occupation matrices. Row ``i``
        is the basis element with index ``i``.
    """
    dim = dimension(N, s)
    if dim > max_size:
        raise CapacityError(
            "The collective basis for N={}, s={} has {} elements, more than "
            "the budget of {}".format(N, s, dim, max_size))
    occupations = _compositions(N, s * s, occupation_dtype(N), {})
    occupations = np.ascontiguousarray(occupations)
    occupations.setflags(write=False)
    logger.debug("enumerated %d basis elements for N=%d, s=%d", dim, N, s)
    return occupations


def rank(occupations, N):
    """
    returns the canonical indices of an array of flat occupation matrices.

    Parameters
    ----------
    occupations : numpy.ndarray
        ``(count, s*s)`` array of flat occupation matrices, each summing to N
    N : int
        number of atoms

    Returns
    -------
    indices : numpy.ndarray
        ``(count,)`` int64 array of basis indices
    """
    occ = np.asarray(occupations, dtype=np.int64)
    if occ.ndim == 1:
        occ = occ[np.newaxis, :]
    m = occ.shape[1]
    table = binomial_table(N, m)
    indices = np.zeros(occ.shape[0], dtype=np.int64)
    remaining = np.full(occ.shape[0], N, dtype=np.int64)
    for position in range(m - 1):
        k = m - position - 1
        counts = occ[:, position]
        indices += table[remaining, k] - table[remaining - counts, k]
        remaining -= counts
    return indices


def unrank(indices, N, s):
    """
    returns the flat occupation matrices for an array of canonical indices.
    This is the inverse of ``rank``.
    """
    idx = np.array(indices, dtype=np.int64, ndmin=1)
    dim = dimension(N, s)
    if (idx < 0).any() or (idx >= dim).any():
        raise OccupationError(
            "Basis indices must lie in [0, {}), got {}".format(dim, idx))
    m = s * s
    table = binomial_table(N, m)
    occ = np.zeros((idx.size, m), dtype=occupation_dtype(N))
    remaining = np.full(idx.size, N, dtype=np.int64)
    for position in range(m - 1):
        k = m - position - 1
        column = table[:, k]
        target = column[remaining] - idx
        rest = np.searchsorted(column, target, side='left')
        occ[:, position] = remaining - rest
        idx = idx - (column[remaining] - column[rest])
        remaining = rest
    occ[:, m - 1] = remaining
    return occ


def index_of(n, N=None):
    """
    returns the canonical basis index of an occupation matrix.

    Parameters
    ----------
    n : OccupationMatrix or array-like
        an occupation matrix (or its ``(s, s)`` counts)
    N : int or None
        expected atom count. If given, a mismatching total raises an
        ``OccupationError``.

    Returns
    -------
    i : int
        position of ``n`` in ``enumerate_basis(N, s)``
    """
    if not isinstance(n, OccupationMatrix):
        n = OccupationMatrix(n, N=N)
    elif N is not None and n.N != N:
        raise OccupationError(
            "Occupation counts sum to {} instead of N={}".format(n.N, N))
    return int(rank(n.flat, n.N)[0])


def occupations_of(i, N, s):
    """returns the occupation matrix with the canonical basis index ``i``."""
    return OccupationMatrix.from_flat(unrank([i], N, s)[0], s=s, N=N)


def multiplicity(n, log=None):
    """
    returns the multinomial coefficient N! / prod(n_ll'!), i.e. the number of
    product operators |alpha><beta| that belong to the group of ``n``.

    Parameters
    ----------
    n : OccupationMatrix or array-like
        an occupation matrix
    log : bool or None
        if True, return the natural logarithm as a float. By default, the
        exact integer is returned for up to ``MULTIPLICITY_EXACT_LIMIT``
        atoms and the logarithm beyond.

    Returns
    -------
    count : int or float
    """
    if not isinstance(n, OccupationMatrix):
        n = OccupationMatrix(n)
    if log is None:
        log = n.N > MULTIPLICITY_EXACT_LIMIT
    if log:
        return float(gammaln(n.N + 1) - gammaln(n.flat + 1).sum())
    count = math.factorial(n.N)
    for entry in n.flat.tolist():
        count //= math.factorial(entry)
    return count


def log_multiplicities(occupations, N):
    """returns the natural logarithm of the multiplicity of every row."""
    occ = np.asarray(occupations, dtype=np.float64)
    return gammaln(N + 1) - gammaln(occ + 1).sum(axis=1)


def multiplicities(occupations, N):
    """
    returns the multiplicities of an array of flat occupation matrices as
    floats. Up to ``MULTIPLICITY_EXACT_LIMIT`` atoms the factorials are exact
    before the single rounding division, beyond that the values come from
    log-gamma differences.
    """
    occ = np.asarray(occupations)
    if N <= MULTIPLICITY_EXACT_LIMIT:
        factorials = np.array([float(math.factorial(k)) for k in range(N + 1)])
        return factorials[N] / factorials[occ].prod(axis=1)
    with np.errstate(over='ignore'):
        return np.exp(log_multiplicities(occ, N))


def diagonal_mask(occupations, s):
    """returns a boolean mask of the rows without off-diagonal counts."""
    occ = np.asarray(occupations)
    offdiagonal = [p for p in range(s * s) if p // s != p % s]
    return ~occ[:, offdiagonal].any(axis=1)


def diagonal_subbasis(N, s):
    """
    returns the indices of all diagonal occupation matrices (those with
    ``n[l, l'] = 0`` for ``l != l'``), in canonical order. There are
    C(N + s - 1, s - 1) of them.
    """
    check_sizes(N, s)
    populations = _compositions(N, s, np.int64, {})
    occ = np.zeros((populations.shape[0], s * s), dtype=np.int64)
    occ[:, [l * s + l for l in range(s)]] = populations
    return np.sort(rank(occ, N))


class Basis(object):
    """
    The materialized collective basis of ``N`` atoms with ``s`` levels.

    Attributes
    ----------
    N : int
        number of atoms
    s : int
        number of levels
    occupations : numpy.ndarray
        read-only ``(dim, s*s)`` array of flat occupation matrices
    """
    def __init__(self, N, s, max_size=MAX_BASIS_SIZE):
        self.N = N
        self.s = s
        self.occupations = enumerate_basis(N, s, max_size=max_size)

    def __len__(self):
        return self.occupations.shape[0]

    @property
    def dim(self):
        return self.occupations.shape[0]

    def index_of(self, n):
        """returns the index of an occupation matrix in this basis"""
        return index_of(n, N=self.N)

    def indices_of(self, occupations):
        """vectorized ``index_of`` for an array of flat occupation matrices"""
        return rank(occupations, self.N)

    def occupations_of(self, i):
        """returns the occupation matrix with index ``i``"""
        return OccupationMatrix.from_flat(self.occupations[i], s=self.s,
                                          N=self.N)

    @functools.cached_property
    def multiplicities(self):
        """float multiplicities of all basis elements"""
        weights = multiplicities(self.occupations, self.N)
        weights.setflags(write=False)
        return weights

    @functools.cached_property
    def diagonal(self):
        """sorted indices of the diagonal sub-basis"""
        indices = np.flatnonzero(diagonal_mask(self.occupations, self.s))
        indices.setflags(write=False)
        return indices

    @functools.cached_property
    def trace_functional(self):
        """
        the vector ``w`` with ``w[i] = multiplicity(n_i)`` for diagonal
        ``n_i`` and 0 otherwise, so that ``w @ x`` is the trace of the state
        """
        weights = np.zeros(self.dim)
        weights[self.diagonal] = self.multiplicities[self.diagonal]
        weights.setflags(write=False)
        return weights

    @functools.cached_property
    def transpose_permutation(self):
        """
        the index permutation ``perm`` with ``perm[i] = index_of(n_i^T)``;
        a hermitian state satisfies ``x[perm] == conj(x)``
        """
        s = self.s
        order = [l_prime * s + l for l in range(s) for l_prime in range(s)]
        perm = self.indices_of(self.occupations[:, order])
        perm.setflags(write=False)
        return perm

    def __repr__(self):
        return "Basis(N={}, s={}, dim={})".format(self.N, self.s, self.dim)


@functools.lru_cache(maxsize=8)
def get_basis(N, s):
    """returns a cached, shared ``Basis`` for ``N`` atoms with ``s`` levels"""
    return Basis(N, s)
