#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from superradiance.oracle import (
    FullDensityMatrix, atom_operator, collective_operator, project_collective)
from superradiance.sandwich import (
    Operation, Step, apply_operations, commutator, left, operator_product,
    right, sandwich)
from superradiance.symindex import get_basis, index_of


def _action(operations, N, s):
    """dense matrix M with (M x)[n] = sum over branches of x[target]"""
    basis = get_basis(N, s)
    branches = apply_operations(operations, basis.occupations, s)
    matrix = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    np.add.at(matrix, (branches.rows, basis.indices_of(branches.targets)),
              branches.values)
    return matrix


def test_moves():
    assert left(1, 0).moves(2) == [(0, 2), (1, 3)]
    assert right(1, 0).moves(2) == [(1, 0), (3, 2)]
    assert sandwich(0, 1, 1, 0).moves(2) == [(3, 0)]
    with pytest.raises(ValueError):
        Step('middle', (0, 1)).moves(2)


def test_left_action_on_excited_pair():
    """S_01 applied to two excited atoms yields twice the group n_01 + n_11"""
    source = np.array([[0, 0, 0, 2]])
    branches = apply_operations([Operation(1.0, (left(0, 1),))], source, 2)
    assert branches.rows.tolist() == [0]
    assert branches.targets.tolist() == [[0, 1, 0, 1]]
    assert branches.values.tolist() == [2.0]


def test_empty_branches():
    source = np.array([[2, 0, 0, 0]])
    branches = apply_operations([Operation(1.0, (left(0, 1),))], source, 2)
    assert branches.rows.size == 0
    assert branches.targets.shape == (0, 4)
    assert apply_operations([Operation(0, (left(0, 1),))], source, 2) \
        .rows.size == 0


def test_operator_product_order():
    """the rightmost factor is applied first"""
    operations = operator_product([(1, (1, 0))], [(1, (0, 1))])
    assert operations == [Operation(1, (left(0, 1), left(1, 0)))]
    operations = operator_product([(2, (1, 0)), (3, (0, 1))], [(5, (1, 1))])
    assert [op.weight for op in operations] == [10, 15]


def test_commutator_steps():
    operations = commutator(2.0, [(1, 0), (0, 1)])
    assert operations[0] == Operation(2j, (left(0, 1), left(1, 0)))
    assert operations[1] == Operation(-2j, (right(1, 0), right(0, 1)))


@pytest.mark.parametrize('N, s', [(2, 2), (3, 2), (2, 3)])
def test_rules_match_full_space(N, s):
    """
    tr(rho S_ab [n]), tr(rho [n] S_ab) and tr(rho sum_j s_ab [n] s_cd) agree
    with the full-space computation for a permutation-symmetric rho
    """
    rng = np.random.default_rng(7)
    dim = s ** N
    a, b, c, d = rng.integers(0, s, 4)
    # symmetric test operator: a polynomial in collective operators
    X = sum(rng.normal() * collective_operator(N, s, k, m)
            for k in range(s) for m in range(s))
    rho = FullDensityMatrix(X @ X.conj().T + np.identity(dim), N, s)
    x = project_collective(rho).vector

    S_ab = collective_operator(N, s, a, b)
    for operations, full in (
            ([Operation(1.0, (left(a, b),))], rho.rho @ S_ab),
            ([Operation(1.0, (right(a, b),))], S_ab @ rho.rho)):
        # tr(rho S [n]) is the collective element of rho S
        expected = project_collective(FullDensityMatrix(full, N, s)).vector
        np.testing.assert_allclose(_action(operations, N, s) @ x, expected,
                                   atol=1e-10)

    sandwiched = sum(atom_operator(N, s, j, c, d) @ rho.rho
                     @ atom_operator(N, s, j, a, b) for j in range(N))
    expected = project_collective(FullDensityMatrix(sandwiched, N, s)).vector
    np.testing.assert_allclose(
        _action([Operation(1.0, (sandwich(a, b, c, d),))], N, s) @ x,
        expected, atol=1e-10)


def test_index_of_targets():
    source = np.array([[0, 0, 1, 1]])
    branches = apply_operations([Operation(1.0, (right(0, 1),))], source, 2)
    indices = get_basis(2, 2).indices_of(branches.targets)
    assert indices.tolist() == [index_of([[0, 0], [0, 2]])]
