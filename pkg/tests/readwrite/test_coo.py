#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import numpy.testing as npt
import pytest

from conftest import random_system
from superradiance.generator import build_generator
from superradiance.readwrite import read_generator, write_generator
from superradiance.readwrite.coo import MAGIC


def test_dump_layout(tmpdir):
    params, rates = random_system(1, 2, seed=0)
    generator = build_generator(params, rates)
    path = str(tmpdir.join('L.coo'))
    write_generator(generator, path)
    with open(path) as dump:
        lines = dump.read().splitlines()
    assert lines[0] == MAGIC + ' N=1 s=2 dim=4 frame=rotating'
    assert lines[1] == '# static nnz={}'.format(generator.matrix.nnz)
    assert len(lines) == 2 + generator.matrix.nnz
    cells = [tuple(int(cell) for cell in line.split()[:2])
             for line in lines[2:]]
    assert cells == sorted(cells)


@pytest.mark.parametrize('frame', ['rotating', 'lab'])
def test_dump_and_read(tmpdir, frame):
    params, rates = random_system(3, 2, seed=1, frame=frame, omega_d=0.5)
    generator = build_generator(params, rates)
    path = str(tmpdir.join('dumps', 'L.coo'))
    write_generator(generator, path)
    loaded = read_generator(path)
    assert loaded.frame == frame
    assert loaded.basis is generator.basis
    npt.assert_array_equal(loaded.matrix.toarray(), generator.matrix.toarray())
    assert len(loaded.drive_parts) == len(generator.drive_parts)
    for (part, frequency), (original, expected) in zip(
            loaded.drive_parts, generator.drive_parts):
        assert frequency == expected
        npt.assert_array_equal(part.toarray(), original.toarray())
    x = np.arange(generator.dim, dtype=complex)
    npt.assert_allclose(loaded.rhs(0.3, x), generator.rhs(0.3, x))


def test_not_a_dump(tmpdir):
    path = tmpdir.join('other.txt')
    path.write('0 0 1.0 0.0\n')
    with pytest.raises(ValueError):
        read_generator(str(path))
