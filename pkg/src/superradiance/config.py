#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``config`` module defines the JSON run configuration of the command line
interface as pydantic models.

Rates and frequencies in a configuration file are given in units of
``unit`` (by default the collective decay rate ``Gamma10``) and multiplied
by ``unit_scale`` to obtain the values that are simulated; times are divided
by ``unit_scale``. See ``docs/config.rst`` for the full grammar.
"""

import json
import math
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import (
    BaseModel, ConfigDict, Field, ValidationError, field_validator,
    model_validator)

from superradiance.dynamics import SolverConfig
from superradiance.generator import TermSet
from superradiance.initial import InitialStateSpec
from superradiance.model import (
    SystemParams, derive_collective_rates, rates_from_detuning)

SCHEMA_VERSION = 1

SCENARIOS = ('pulse', 'driven', 'pumped-spectrum', 'sweep', 'bench')


class ConfigError(ValueError):
    """
    Raised for invalid run configurations. The message lists every problem
    with the dotted path of the offending field.
    """
    pass


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class RateEntry(_Strict):
    l: int = Field(ge=0)
    lp: int = Field(ge=0)
    rate: float = Field(ge=0)


class ShiftEntry(_Strict):
    l: int = Field(ge=0)
    lp: int = Field(ge=0)
    value: float


class ComplexEntry(_Strict):
    l: int = Field(ge=0)
    lp: int = Field(ge=0)
    re: float = 0.0
    im: float = 0.0


class CavityConfig(_Strict):
    g: List[ComplexEntry]
    kappa: float = Field(gt=0)
    omega_c: float = 0.0


class CollectiveConfig(_Strict):
    Gamma: List[RateEntry] = []
    Omega: List[ShiftEntry] = []


class DetuningConfig(_Strict):
    Gamma0: float = Field(ge=0)
    alpha: float
    l: int = 1
    lp: int = 0


def _grid(entries, s, field, scale, dtype=float):
    grid = np.zeros((s, s), dtype=dtype)
    for entry in entries:
        if entry.l >= s or entry.lp >= s:
            raise ValueError("{}: level pair ({}, {}) is out of range for "
                             "s={}".format(field, entry.l, entry.lp, s))
        if isinstance(entry, ComplexEntry):
            grid[entry.l, entry.lp] = complex(entry.re, entry.im) * scale
        elif isinstance(entry, RateEntry):
            grid[entry.l, entry.lp] = entry.rate * scale
        else:
            grid[entry.l, entry.lp] = entry.value * scale
    return grid


class ParamsConfig(_Strict):
    N: int = Field(ge=1)
    s: int = Field(default=2, ge=2)
    omega: Optional[List[float]] = None
    omega_d: float = 0.0
    drive: List[ComplexEntry] = []
    gamma: List[RateEntry] = []
    xi: List[RateEntry] = []
    cavity: Optional[CavityConfig] = None
    collective: Optional[CollectiveConfig] = None
    detuning: Optional[DetuningConfig] = None
    lamb_shift_sign: Literal[1, -1] = 1
    frame: Literal['rotating', 'lab'] = 'rotating'

    @model_validator(mode='after')
    def _check_consistency(self):
        routes = [name for name in ('cavity', 'collective', 'detuning')
                  if getattr(self, name) is not None]
        if len(routes) > 1:
            raise ValueError(
                "give only one of cavity, collective and detuning, got "
                "{}".format(routes))
        if self.omega is not None and len(self.omega) != self.s:
            raise ValueError("omega needs {} entries, got {}".format(
                self.s, len(self.omega)))
        entries = [('drive', self.drive), ('gamma', self.gamma),
                   ('xi', self.xi)]
        if self.cavity is not None:
            entries.append(('cavity.g', self.cavity.g))
        if self.collective is not None:
            entries.append(('collective.Gamma', self.collective.Gamma))
            entries.append(('collective.Omega', self.collective.Omega))
        for field, values in entries:
            _grid(values, self.s, field, 1.0, dtype=np.complex128)
        return self

    def to_params(self, scale=1.0):
        """returns the ``SystemParams`` in simulated units"""
        s = self.s
        cavity = None
        if self.cavity is not None:
            cavity = dict(g=_grid(self.cavity.g, s, 'cavity.g', scale,
                                  dtype=np.complex128),
                          kappa=self.cavity.kappa * scale,
                          omega_c=self.cavity.omega_c * scale)
        Gamma = Omega = None
        if self.collective is not None:
            Gamma = _grid(self.collective.Gamma, s, 'collective.Gamma', scale)
            Omega = _grid(self.collective.Omega, s, 'collective.Omega', scale)
        omega = None if self.omega is None else np.array(self.omega) * scale
        return SystemParams(
            N=self.N, s=s, omega=omega,
            drive=_grid(self.drive, s, 'drive', scale, dtype=np.complex128),
            omega_d=self.omega_d * scale,
            gamma=_grid(self.gamma, s, 'gamma', scale),
            xi=_grid(self.xi, s, 'xi', scale), cavity=cavity, Gamma=Gamma,
            Omega=Omega, lamb_shift_sign=self.lamb_shift_sign,
            frame=self.frame)

    def to_rates(self, params, scale=1.0):
        """returns the ``CollectiveRates`` in simulated units"""
        if self.detuning is not None:
            detuning = self.detuning
            return rates_from_detuning(
                detuning.Gamma0 * scale, detuning.alpha, s=self.s,
                transition=(detuning.l, detuning.lp),
                lamb_shift_sign=self.lamb_shift_sign)
        return derive_collective_rates(params)


class TermsConfig(_Strict):
    atomic: bool = True
    drive: bool = True
    lamb_shift: bool = True
    individual_dissipation: bool = True
    dephasing: bool = True
    collective_decay: bool = True

    def to_terms(self):
        return TermSet(**self.model_dump())


class ComponentConfig(_Strict):
    probability: float = Field(default=1.0, ge=0, le=1)
    amplitudes: Optional[List[Tuple[float, float]]] = None
    theta: Optional[float] = None
    phi: float = 0.0

    @model_validator(mode='after')
    def _one_form(self):
        if (self.amplitudes is None) == (self.theta is None):
            raise ValueError("give either amplitudes or theta (and phi)")
        return self

    def amplitude_vector(self):
        if self.amplitudes is not None:
            return [complex(re, im) for re, im in self.amplitudes]
        return [math.cos(self.theta / 2.0),
                math.sin(self.theta / 2.0) * complex(math.cos(self.phi),
                                                     math.sin(self.phi))]


class InitialConfig(_Strict):
    level: Optional[int] = Field(default=None, ge=0)
    components: List[ComponentConfig] = []

    @model_validator(mode='after')
    def _one_form(self):
        if (self.level is None) == (not self.components):
            raise ValueError("give either level or components")
        return self

    def to_spec(self, s):
        if self.level is not None:
            if self.level >= s:
                raise ConfigError(
                    "initial.level: level {} is out of range for s={}".format(
                        self.level, s))
            return InitialStateSpec.level(self.level, s)
        return InitialStateSpec([(c.probability, c.amplitude_vector())
                                 for c in self.components])


class SolverSection(_Strict):
    rel_tol: float = Field(default=1e-8, gt=0)
    abs_tol: float = Field(default=1e-10, gt=0)
    max_step: Optional[float] = Field(default=None, gt=0)
    steady_eps: float = Field(default=1e-8, gt=0)
    t_max: float = Field(default=1e4, gt=0)
    steady_method: Literal['auto', 'march', 'direct'] = 'auto'
    scale_abs_tol: bool = True
    tau_step: Optional[float] = Field(default=None, gt=0)
    spectrum_method: Literal['quadrature', 'resolvent'] = 'quadrature'

    def to_solver_config(self, scale=1.0):
        return SolverConfig(
            rel_tol=self.rel_tol, abs_tol=self.abs_tol,
            max_step=np.inf if self.max_step is None else self.max_step / scale,
            steady_eps=self.steady_eps * scale, t_max=self.t_max / scale,
            steady_method=self.steady_method,
            scale_abs_tol=self.scale_abs_tol,
            tau_step=None if self.tau_step is None else self.tau_step / scale)


class GridConfig(_Strict):
    start: float
    stop: float
    points: int = Field(ge=2)

    @model_validator(mode='after')
    def _monotone(self):
        if not self.stop > self.start:
            raise ValueError("stop must be larger than start")
        return self

    def values(self):
        return np.linspace(self.start, self.stop, self.points)


class GridsConfig(_Strict):
    time: Optional[GridConfig] = None
    frequency: Optional[GridConfig] = None


class SweepConfig(_Strict):
    parameter: str
    values: List[Union[int, float]] = Field(min_length=1)
    base: Literal['pulse', 'pumped-spectrum'] = 'pulse'


class BenchConfig(_Strict):
    N: List[int] = Field(min_length=1)
    s: int = Field(default=2, ge=2)
    duration: float = Field(default=0.01, gt=0)

    @field_validator('N')
    @classmethod
    def _positive(cls, values):
        if any(value < 1 for value in values):
            raise ValueError("all atom counts must be positive")
        return values


class OutputConfig(_Strict):
    path: str = 'results.csv'
    format: Literal['csv', 'json-lines'] = 'csv'


def _lookup(data, path):
    """follows a dotted path through nested dicts and lists"""
    node = data
    for key in path.split('.'):
        if isinstance(node, list):
            node = node[int(key)]
        elif isinstance(node, dict):
            node = node[key]
        else:
            raise KeyError(key)
    return node


def _assign(data, path, value):
    keys = path.split('.')
    node = _lookup(data, '.'.join(keys[:-1])) if len(keys) > 1 else data
    if isinstance(node, list):
        node[int(keys[-1])] = value
    else:
        node[keys[-1]] = value


class RunConfig(_Strict):
    """
    A complete run: scenario, system, initial state, numerics, grids, sweep
    or bench settings and output location.
    """
    version: int = SCHEMA_VERSION
    scenario: Literal['pulse', 'driven', 'pumped-spectrum', 'sweep', 'bench']
    unit: str = 'Gamma10'
    unit_scale: float = Field(default=1.0, gt=0)
    params: Optional[ParamsConfig] = None
    terms: TermsConfig = TermsConfig()
    initial: Optional[InitialConfig] = None
    solver: SolverSection = SolverSection()
    grids: GridsConfig = GridsConfig()
    sweep: Optional[SweepConfig] = None
    bench: Optional[BenchConfig] = None
    output: OutputConfig = OutputConfig()

    @model_validator(mode='after')
    def _check_scenario(self):
        scenario = self.scenario
        base = self.sweep.base if scenario == 'sweep' and self.sweep else None
        if scenario != 'bench' and self.params is None:
            raise ValueError("the {} scenario needs params".format(scenario))
        if scenario == 'bench' and self.bench is None:
            raise ValueError("the bench scenario needs a bench section")
        if scenario == 'sweep':
            if self.sweep is None:
                raise ValueError("the sweep scenario needs a sweep section")
            try:
                _lookup(self.model_dump(), self.sweep.parameter)
            except (KeyError, IndexError, ValueError, TypeError):
                raise ValueError(
                    "sweep.parameter '{}' does not exist in this "
                    "configuration".format(self.sweep.parameter))
        if (scenario in ('pulse', 'driven') or base == 'pulse') \
                and self.grids.time is None:
            raise ValueError("the {} scenario needs grids.time".format(
                base or scenario))
        if (scenario == 'pumped-spectrum' or base == 'pumped-spectrum') \
                and self.grids.frequency is None:
            raise ValueError("the pumped-spectrum scenario needs "
                             "grids.frequency")
        return self

    def system(self):
        """returns ``(SystemParams, CollectiveRates)`` in simulated units"""
        params = self.params.to_params(self.unit_scale)
        return params, self.params.to_rates(params, self.unit_scale)

    def initial_spec(self, default_level):
        s = self.params.s
        if self.initial is None:
            return InitialStateSpec.level(default_level, s)
        return self.initial.to_spec(s)

    def solver_config(self):
        return self.solver.to_solver_config(self.unit_scale)

    def time_grid(self):
        return self.grids.time.values() / self.unit_scale

    def frequency_grid(self):
        return self.grids.frequency.values() * self.unit_scale

    def with_value(self, path, value):
        """returns a copy with the field at a dotted path replaced"""
        data = self.model_dump()
        _assign(data, path, value)
        return validate_config(data)

    def effective_json(self):
        """the configuration with all defaults filled in, as compact JSON"""
        return json.dumps(self.model_dump(mode='json'), sort_keys=True,
                          separators=(',', ':'))


def _format_errors(error):
    lines = []
    for problem in error.errors():
        location = '.'.join(str(part) for part in problem['loc']) or '<root>'
        lines.append("{}: {}".format(location, problem['msg']))
    return "Invalid run configuration:\n  " + "\n  ".join(lines)


def validate_config(data):
    """validates a configuration dict and returns a ``RunConfig``"""
    try:
        return RunConfig.model_validate(data)
    except ValidationError as error:
        raise ConfigError(_format_errors(error))


def parse_config(text):
    """parses and validates a JSON configuration string"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError("The configuration is not valid JSON: {}".format(
            error))
    return validate_config(data)


def load_config(config_filepath):
    """reads and validates a JSON configuration file"""
    try:
        with open(config_filepath, encoding='utf-8') as config_file:
            text = config_file.read()
    except OSError as error:
        raise ConfigError("Cannot read configuration {}: {}".format(
            config_filepath, error))
    return parse_config(text)
