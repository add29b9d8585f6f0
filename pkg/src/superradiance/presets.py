#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module provides convenient access to the bundled run configurations,
which reproduce the standard experiments:

- ``pulse-n50``: the pulse emitted by 50 initially excited atoms
- ``driven-weak`` and ``driven-moderate``: 50 resonantly driven atoms below
  and above the onset of oscillations
- ``pumped-n50``: steady state and emission spectrum of 50 pumped atoms
- ``sweep-n``: pulse metrics for 10 to 60 atoms
- ``sweep-detuning``: pulse metrics versus the cavity detuning
- ``sweep-pump``: steady states and spectra versus the pump rate
- ``sweep-decay`` and ``sweep-dephasing``: steady states and spectra of 50
  strongly pumped atoms versus their individual decay and dephasing rates
- ``bench``: basis size, sparsity and timings for up to 250 atoms
"""

from collections.abc import Sequence
import os

import superradiance as sr
from superradiance.config import load_config
from superradiance.util import find_files

PRESETS_DIRNAME = 'presets'


class Presets(Sequence):
    """
    class representation of the bundled run configurations

    Attributes
    ----------
    path : str
        directory of the preset files
    files : list(str)
        the preset files, sorted by name
    """
    def __init__(self, path=None):
        self.path = path or os.path.join(sr.DATA_ROOT_DIR, PRESETS_DIRNAME)
        self.files = list(find_files(self.path, '*.json'))

    @property
    def names(self):
        """returns the names of all presets"""
        return [os.path.splitext(os.path.basename(fname))[0]
                for fname in self.files]

    def __len__(self):
        """return the number of presets"""
        return len(self.files)

    def get_path(self, name):
        """returns the file of the preset with the given name"""
        try:
            return self.files[self.names.index(name)]
        except ValueError:
            raise KeyError(
                "There is no preset '{}'. Available presets: {}".format(
                    name, ', '.join(self.names)))

    def get_text(self, name):
        """returns the JSON text of a preset"""
        with open(self.get_path(name), encoding='utf-8') as preset_file:
            return preset_file.read()

    def get_config(self, name):
        """returns the validated ``RunConfig`` of a preset"""
        return load_config(self.get_path(name))

    def __getitem__(self, sliced):
        """access presets by their index or by their name"""
        if isinstance(sliced, str):
            return self.get_config(sliced)
        elif isinstance(sliced, int):
            return self.get_config(self.names[sliced])
        else:
            return [self.get_config(name) for name in self.names[sliced]]


presets = Presets()
