# superradiance.readwrite: input/output functionality

"""
The ``readwrite`` package contains the writers and readers for result tables
(CSV or JSON lines with a commented header) and for coordinate-format dumps
of assembled generators.
"""

from superradiance.readwrite.coo import read_generator, write_generator
from superradiance.readwrite.table import (
    ResultTable, TableFormatError, read_table, write_table)
