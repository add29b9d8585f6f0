#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``statistics`` module contains functions for basic, descriptive statistics
on assembled generators (e.g. nonzeros per contribution and per column).
"""

from collections import Counter, namedtuple
from operator import itemgetter
import sys

import numpy as np

from superradiance.generator import (
    TERM_NAMES, TermSet, assemble, operations_for, trace_defect)


GeneratorStatistics = namedtuple('GeneratorStatistics', (
    'N s dim nnz density term_nnz column_counts max_column_count '
    'trace_defect time_dependent'))
GeneratorStatistics.__doc__ = """
term_nnz : collections.Counter
    nonzeros of each enabled contribution assembled on its own (empty if no
    parameters were given)
column_counts : collections.Counter
    maps the number of nonzeros in a column to the number of such columns
max_column_count : int
    the largest number of nonzeros in any column
"""


def print_sorted_counter(counter, tab=1, output=sys.stdout):
    """print all elements of a counter in descending order"""
    for key, count in sorted(counter.items(), key=itemgetter(1), reverse=True):
        output.write("{0}{1} - {2}\n".format('\t' * tab, key, count))


def print_most_common(counter, number=5, tab=1, output=sys.stdout):
    """print the most common elements of a counter"""
    for key, count in counter.most_common(number):
        output.write("{0}{1} - {2}\n".format('\t' * tab, key, count))


def term_nnz(generator, params, rates):
    """counts the nonzeros of every enabled contribution"""
    counts = Counter()
    for name in TERM_NAMES:
        if getattr(generator.terms, name):
            matrix = assemble(generator.basis, operations_for(
                params, rates, TermSet.only(name)))
            counts[name] = matrix.nnz
    return counts


def generator_statistics(generator, params=None, rates=None):
    """
    collects descriptive statistics of an assembled generator.

    Parameters
    ----------
    generator : superradiance.generator.Generator
    params : superradiance.model.SystemParams or None
    rates : superradiance.model.CollectiveRates or None
        if both are given, the contributions are assembled once more one by
        one to count their nonzeros

    Returns
    -------
    stats : GeneratorStatistics
    """
    matrix = generator.matrix
    for part, _ in generator.drive_parts:
        matrix = matrix + part
    per_column = np.diff(matrix.tocsc().indptr)
    dim = generator.dim
    per_term = Counter()
    if params is not None and rates is not None:
        per_term = term_nnz(generator, params, rates)
    return GeneratorStatistics(
        N=generator.basis.N, s=generator.basis.s, dim=dim,
        nnz=generator.nnz, density=generator.nnz / float(dim) / dim,
        term_nnz=per_term, column_counts=Counter(per_column.tolist()),
        max_column_count=int(per_column.max()) if dim else 0,
        trace_defect=trace_defect(generator),
        time_dependent=generator.is_time_dependent)


def generator_info(generator, params=None, rates=None, output=sys.stdout):
    """print basic statistics about a generator and return them"""
    stats = generator_statistics(generator, params, rates)
    output.write("Generator statistics\n====================\n")
    output.write("N={0}, s={1}, dim={2}, nnz={3}, density={4:.3e}\n".format(
        stats.N, stats.s, stats.dim, stats.nnz, stats.density))
    output.write("trace defect: {0:.3e}\n".format(stats.trace_defect))
    output.write("time-dependent: {0}\n".format(stats.time_dependent))
    if stats.term_nnz:
        output.write("\nnonzeros per contribution\n")
        print_sorted_counter(stats.term_nnz, output=output)
    output.write("\nmost common column populations\n")
    print_most_common(stats.column_counts, output=output)
    output.write("\nlargest column population: {0}\n".format(
        stats.max_column_count))
    return stats
