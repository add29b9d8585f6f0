#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``sandwich`` module implements the action of collective single-atom
operators on collective basis elements.

Let ``[n]`` denote the average over all product operators
``|alpha><beta|`` whose occupation matrix is ``n`` and let
``S_ab = sum_j sigma^j_ab`` be a collective operator. Then

- ``S_ab [n] = sum_k n_bk [n - e_bk + e_ak]`` (left action),
- ``[n] S_ab = sum_k n_ka [n - e_ka + e_kb]`` (right action),
- ``sum_j sigma^j_ab [n] sigma^j_cd = n_bc [n - e_bc + e_ad]`` (sandwich),

where ``e_xy`` is the unit occupation matrix of slot ``(x, y)``. Products of
collective operators are handled by applying these rules one after the other,
so every contribution of the equation of motion, every observable and the
regression seed are built from the same three verified rules.

An ``Operation`` is a sequence of ``Step`` objects applied in order together
with a complex weight. Applying a list of operations to a block of basis
elements yields ``Branches``: for every source row a list of target
occupation matrices and coefficients.
"""

from collections import namedtuple

import numpy as np


class Step(namedtuple('Step', 'kind levels')):
    """
    One collective rule, i.e. a left action (``kind='left'``, levels
    ``(a, b)``), a right action (``kind='right'``, levels ``(a, b)``) or a
    sandwich (``kind='sandwich'``, levels ``(a, b, c, d)``).
    """
    __slots__ = ()

    def moves(self, s):
        """
        returns the list of ``(source_slot, target_slot)`` pairs of flat
        occupation positions this rule moves one unit between.
        """
        if self.kind == 'left':
            a, b = self.levels
            return [(b * s + k, a * s + k) for k in range(s)]
        elif self.kind == 'right':
            a, b = self.levels
            return [(k * s + a, k * s + b) for k in range(s)]
        elif self.kind == 'sandwich':
            a, b, c, d = self.levels
            return [(b * s + c, a * s + d)]
        raise ValueError("Unknown rule kind '{}'".format(self.kind))


def left(a, b):
    """``S_ab X``"""
    return Step('left', (a, b))


def right(a, b):
    """``X S_ab``"""
    return Step('right', (a, b))


def sandwich(a, b, c, d):
    """``sum_j sigma^j_ab X sigma^j_cd``"""
    return Step('sandwich', (a, b, c, d))


Operation = namedtuple('Operation', 'weight steps')


Branches = namedtuple('Branches', 'rows targets values')
Branches.__doc__ = """
rows : numpy.ndarray
    position of the source basis element (int64)
targets : numpy.ndarray
    flat occupation matrices the source is mapped to
values : numpy.ndarray
    complex coefficients
"""


def _apply_step(step, s, rows, occupations, values):
    """applies one rule to a set of partial results"""
    out_rows, out_occ, out_values = [], [], []
    for source, target in step.moves(s):
        counts = occupations[:, source]
        keep = np.flatnonzero(counts)
        if keep.size == 0:
            continue
        moved = occupations[keep].copy()
        if source != target:
            moved[:, source] -= 1
            moved[:, target] += 1
        out_rows.append(rows[keep])
        out_occ.append(moved)
        out_values.append(values[keep] * counts[keep])
    if not out_rows:
        return (rows[:0], occupations[:0], values[:0])
    return (np.concatenate(out_rows), np.vstack(out_occ),
            np.concatenate(out_values))


def apply_operations(operations, occupations, s, rows=None, row_weights=None):
    """
    applies a list of operations to a block of basis elements.

    Parameters
    ----------
    operations : list of Operation
        weighted rule sequences to apply (and sum)
    occupations : numpy.ndarray
        ``(count, s*s)`` flat occupation matrices of the source elements
    s : int
        number of levels
    rows : numpy.ndarray or None
        labels of the source elements (default: ``0 .. count-1``)
    row_weights : numpy.ndarray or None
        optional per-source factor multiplied into all coefficients

    Returns
    -------
    branches : Branches
        all nonzero branches; the same (row, target) pair can occur more
        than once and has to be summed by the caller
    """
    occupations = np.asarray(occupations)
    if rows is None:
        rows = np.arange(occupations.shape[0], dtype=np.int64)
    base = np.ones(occupations.shape[0], dtype=np.complex128)
    if row_weights is not None:
        base = base * row_weights
    all_rows, all_targets, all_values = [], [], []
    for operation in operations:
        if operation.weight == 0:
            continue
        current = (rows, occupations, base * operation.weight)
        for step in operation.steps:
            current = _apply_step(step, s, *current)
            if current[0].size == 0:
                break
        if current[0].size:
            all_rows.append(current[0])
            all_targets.append(current[1])
            all_values.append(current[2])
    if not all_rows:
        return Branches(np.zeros(0, dtype=np.int64),
                        np.zeros((0, s * s), dtype=occupations.dtype),
                        np.zeros(0, dtype=np.complex128))
    return Branches(np.concatenate(all_rows), np.vstack(all_targets),
                    np.concatenate(all_values))


def commutator(coefficient, ops):
    """
    returns the operations of ``i [H, X]`` for one Hamiltonian term
    ``H = coefficient * S_{ops[0]} S_{ops[1]} ...``, with ``ops`` given as a
    list of ``(a, b)`` level pairs in the written (left-to-right) order.
    """
    left_steps = tuple(left(a, b) for a, b in reversed(ops))
    right_steps = tuple(right(a, b) for a, b in ops)
    return [Operation(1j * coefficient, left_steps),
            Operation(-1j * coefficient, right_steps)]


def operator_product(*factors):
    """
    expands a product of collective operators acting from the left.

    Each factor is a list of ``(coefficient, (a, b))`` pairs standing for
    ``sum coefficient * S_ab``. The rightmost factor acts first.

    >>> operator_product([(1, (1, 0))], [(1, (0, 1))])
    [Operation(weight=1, steps=(Step(kind='left', levels=(0, 1)), Step(kind='left', levels=(1, 0))))]
    """
    operations = [Operation(1, ())]
    for factor in reversed(factors):
        operations = [
            Operation(op.weight * coefficient, op.steps + (left(a, b),))
            for op in operations for coefficient, (a, b) in factor]
    return operations
