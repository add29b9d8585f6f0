#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module writes and reads result tables.

A CSV table starts with ``#`` comment lines of the form ``# key: value``
(schema version, scenario, unit and the effective configuration), followed
by the column names and one line per row. A JSON-lines table starts with one
object ``{"header": {...}}`` followed by one object per row.
"""

import csv
import json
import math

from superradiance.util import ensure_parent_dir

TABLE_SCHEMA_VERSION = 1

FORMATS = ('csv', 'json-lines')


class TableFormatError(ValueError):
    """Raised when a result table cannot be parsed."""
    pass


class ResultTable(object):
    """
    A table of result rows with a header of metadata.

    Attributes
    ----------
    columns : list of str
        the column names
    rows : list of list
        rows of numbers (or strings for text columns)
    header : dict
        metadata written before the rows, always including the schema
        version
    """
    def __init__(self, columns, rows=None, header=None):
        self.columns = list(columns)
        self.rows = [] if rows is None else [list(row) for row in rows]
        self.header = {'version': TABLE_SCHEMA_VERSION}
        if header:
            self.header.update(header)

    def append(self, row):
        if len(row) != len(self.columns):
            raise ValueError(
                "Expected {} values, got {}".format(len(self.columns),
                                                    len(row)))
        self.rows.append(list(row))

    def column(self, name):
        """returns all values of a column"""
        position = self.columns.index(name)
        return [row[position] for row in self.rows]

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return "ResultTable(columns={}, rows={})".format(self.columns,
                                                         len(self.rows))


def _plain(value):
    """converts numpy scalars into plain python values"""
    if hasattr(value, 'item'):
        value = value.item()
    return value


def _format_cell(value):
    value = _plain(value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text):
    if text in ('true', 'false'):
        return text == 'true'
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _json_cell(value):
    value = _plain(value)
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _header_text(value):
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True)


def write_table(table, output_filepath, fmt='csv'):
    """
    writes a ``ResultTable`` to a file, creating missing directories.

    Parameters
    ----------
    table : ResultTable
    output_filepath : str
    fmt : str
        'csv' or 'json-lines'
    """
    if fmt not in FORMATS:
        raise ValueError("Unknown table format '{}', expected one of "
                         "{}".format(fmt, FORMATS))
    ensure_parent_dir(output_filepath)
    with open(output_filepath, 'w', encoding='utf-8', newline='') as out:
        if fmt == 'csv':
            for key in sorted(table.header):
                out.write("# {}: {}\n".format(
                    key, _header_text(table.header[key])))
            writer = csv.writer(out, lineterminator='\n')
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([_format_cell(value) for value in row])
        else:
            out.write(json.dumps({'header': table.header},
                                 sort_keys=True) + '\n')
            for row in table.rows:
                record = dict(zip(table.columns,
                                  (_json_cell(value) for value in row)))
                out.write(json.dumps(record) + '\n')


def _header_value(text):
    try:
        return json.loads(text)
    except ValueError:
        return text


def read_table(input_filepath):
    """
    reads a table written by ``write_table``; the format is detected from
    the first character of the file.
    """
    with open(input_filepath, encoding='utf-8') as table_file:
        lines = table_file.read().splitlines()
    if not lines:
        raise TableFormatError("{} is empty".format(input_filepath))

    if lines[0].startswith('{'):
        header = json.loads(lines[0]).get('header')
        if header is None:
            raise TableFormatError(
                "{} does not start with a header object".format(
                    input_filepath))
        records = [json.loads(line) for line in lines[1:] if line]
        columns = list(records[0]) if records else []
        table = ResultTable(columns, header=header)
        for record in records:
            table.append([_parse_cell(value) if isinstance(value, str)
                          else value for value in record.values()])
        return table

    header = {}
    position = 0
    while position < len(lines) and lines[position].startswith('#'):
        key, _, value = lines[position][1:].strip().partition(':')
        header[key.strip()] = _header_value(value.strip())
        position += 1
    if position == len(lines):
        raise TableFormatError(
            "{} has no column line".format(input_filepath))
    reader = csv.reader(lines[position:])
    columns = next(reader)
    table = ResultTable(columns, header=header)
    for row in reader:
        table.append([_parse_cell(cell) for cell in row])
    return table
