#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json
import os

import pytest

from superradiance.config import RunConfig
from superradiance.presets import Presets, presets

NAMES = ['bench', 'driven-moderate', 'driven-weak', 'pulse-n50',
         'pumped-n50', 'sweep-decay', 'sweep-dephasing', 'sweep-detuning',
         'sweep-n', 'sweep-pump']


def test_bundled_presets():
    assert presets.names == NAMES
    assert len(presets) == 10
    assert os.path.basename(presets.get_path('bench')) == 'bench.json'
    with pytest.raises(KeyError):
        presets.get_path('pulse-n1000')


def test_presets_validate():
    for config in presets[:]:
        assert isinstance(config, RunConfig)
    assert presets['pulse-n50'].params.N == 50
    assert presets[0].scenario == 'bench'
    assert [config.scenario for config in presets[1:3]] == ['driven',
                                                           'driven']


def test_strongly_pumped_sweeps():
    decay, dephasing = presets['sweep-decay'], presets['sweep-dephasing']
    assert decay.sweep.parameter == 'params.gamma.1.rate'
    assert dephasing.sweep.parameter == 'params.xi.0.rate'
    for config in (decay, dephasing):
        assert config.sweep.base == 'pumped-spectrum'
        params, rates = config.system()
        assert params.gamma[0, 1] == pytest.approx(20 * rates.Gamma[1, 0])


def test_preset_text_is_json():
    data = json.loads(presets.get_text('pumped-n50'))
    assert data['scenario'] == 'pumped-spectrum'


def test_custom_preset_directory(tmpdir):
    tmpdir.join('tiny.json').write(json.dumps({
        'scenario': 'bench', 'bench': {'N': [1, 2]}}))
    tmpdir.join('notes.txt').write('not a preset')
    custom = Presets(path=str(tmpdir))
    assert custom.names == ['tiny']
    assert custom['tiny'].bench.N == [1, 2]
