#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module dumps assembled generators as coordinate-format text, one
``row col re im`` line per nonzero, for diffing against other
implementations. Drive parts of a lab-frame generator follow in their own
sections.
"""

import numpy as np
import scipy.sparse as sp

from superradiance.generator import Generator, TermSet
from superradiance.symindex import get_basis
from superradiance.util import ensure_parent_dir

MAGIC = '# superradiance generator'


def _write_entries(out, matrix):
    coo = matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for row, col, value in zip(coo.row[order], coo.col[order],
                               coo.data[order]):
        out.write("{} {} {!r} {!r}\n".format(
            int(row), int(col), float(value.real), float(value.imag)))


def write_generator(generator, output_filepath):
    """writes a generator as coordinate-format text"""
    ensure_parent_dir(output_filepath)
    basis = generator.basis
    with open(output_filepath, 'w', encoding='utf-8') as out:
        out.write("{} N={} s={} dim={} frame={}\n".format(
            MAGIC, basis.N, basis.s, generator.dim, generator.frame))
        out.write("# static nnz={}\n".format(generator.matrix.nnz))
        _write_entries(out, generator.matrix)
        for part, frequency in generator.drive_parts:
            out.write("# drive frequency={!r} nnz={}\n".format(
                float(frequency), part.nnz))
            _write_entries(out, part)


def _fields(line):
    return dict(item.split('=', 1) for item in line.split()
                if '=' in item)


def read_generator(input_filepath):
    """
    reads a dump written by ``write_generator``.

    Returns
    -------
    generator : superradiance.generator.Generator
        the term set of the result is unknown and reported as all enabled
    """
    with open(input_filepath, encoding='utf-8') as dump:
        lines = dump.read().splitlines()
    if not lines or not lines[0].startswith(MAGIC):
        raise ValueError(
            "{} is not a generator dump".format(input_filepath))
    meta = _fields(lines[0])
    N, s, dim = int(meta['N']), int(meta['s']), int(meta['dim'])

    sections = []
    for line in lines[1:]:
        if line.startswith('#'):
            fields = _fields(line)
            frequency = float(fields['frequency']) if 'frequency' in fields \
                else None
            sections.append((frequency, [], [], []))
            continue
        row, col, real, imag = line.split()
        _, rows, cols, values = sections[-1]
        rows.append(int(row))
        cols.append(int(col))
        values.append(complex(float(real), float(imag)))

    matrices = [(sp.csr_matrix((np.array(values, dtype=np.complex128),
                                (np.array(rows, dtype=np.int64),
                                 np.array(cols, dtype=np.int64))),
                               shape=(dim, dim)), frequency)
                for frequency, rows, cols, values in sections]
    static = matrices[0][0]
    return Generator(get_basis(N, s), static, drive_parts=matrices[1:],
                     frame=meta['frame'], terms=TermSet())
