#!/usr/bin/env python
# -*- coding: utf-8 -*-

__version__ = '0.3.0'

# flake8: noqa

import os

from superradiance.symindex import (
    Basis, CapacityError, OccupationError, OccupationMatrix, dimension,
    enumerate_basis, get_basis, index_of, multiplicity, occupations_of, rank,
    unrank)
from superradiance.model import (
    CollectiveRates, SystemParams, derive_collective_rates, frame_offsets,
    rates_from_detuning)
from superradiance.generator import Generator, TermSet, build_generator
from superradiance.initial import (
    CollectiveState, InitialStateSpec, initial_state, regression_initial)
from superradiance.observables import (
    ObservableRecord, PulseMetrics, Spectrum, angular_momentum,
    angular_uncertainty, intensity, polarization, population, pulse_metrics)
from superradiance.dynamics import (
    SolverConfig, correlation_function, evolve, spectrum, steady_state,
    total_spectrum)
from superradiance.fitting import fit_pulse_scaling, fit_two_lorentzians
from superradiance.config import RunConfig, load_config
from superradiance.readwrite import (
    read_generator, read_table, write_generator, write_table)
from superradiance.statistics import generator_info


PACKAGE_ROOT_DIR = os.path.abspath(os.path.dirname(__file__))
DATA_ROOT_DIR = os.path.join(PACKAGE_ROOT_DIR, 'data')

# presets can't be imported before the root dirs are known
from superradiance.presets import presets
