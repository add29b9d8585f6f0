#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module contains small helpers for files, directories and timings that
are used across the ``superradiance`` package.
"""

import errno
import fnmatch
import os
import resource
import sys


def create_dir(path):
    """
    Creates a directory. Passes, if the directory already exists.

    Parameters
    ----------
    path : str
        path to the directory to be created

    Raises
    ------
    OSError
        if something that is not a directory exists at ``path``
    """
    try:
        os.makedirs(path)
    except OSError as exc:
        if exc.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise


def ensure_parent_dir(filepath):
    """creates the directory a file is going to be written to"""
    parent = os.path.dirname(os.path.abspath(filepath))
    create_dir(parent)
    return filepath


def find_files(directory, pattern='*'):
    """
    finds files recursively, e.g. all ``*.json`` files in a given directory
    (or its subdirectories), in sorted order.
    """
    abspath = os.path.abspath(os.path.expanduser(directory))
    for root, dirs, files in os.walk(abspath):
        dirs.sort()
        for basename in sorted(files):
            if fnmatch.fnmatch(basename, pattern):
                yield os.path.join(root, basename)


def peak_memory_mb():
    """returns the peak resident set size of this process in MiB"""
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # bytes on macOS, KiB elsewhere
    if sys.platform == 'darwin':
        return peak / 2.0 ** 20
    return peak / 2.0 ** 10
