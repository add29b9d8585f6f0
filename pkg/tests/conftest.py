import numpy as np
import pytest

from superradiance.initial import InitialStateSpec
from superradiance.model import CollectiveRates, SystemParams


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run the long reproduction tests')


def pytest_configure(config):
    config.addinivalue_line(
        'markers', 'slow: long-running reproduction runs (enable with --runslow)')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


def random_system(N, s, seed, max_rate=2.0, frame='rotating', omega_d=0.0):
    """
    returns ``(params, rates)`` with every contribution active and all rates
    drawn uniformly from ``[0, max_rate]``
    """
    rng = np.random.default_rng(seed)
    lower = np.tril(np.ones((s, s)), k=-1)
    offdiagonal = 1.0 - np.identity(s)
    drive = lower * (rng.uniform(0, max_rate, (s, s))
                     + 1j * rng.uniform(0, max_rate, (s, s)))
    params = SystemParams(
        N, s=s, omega=np.sort(rng.uniform(0, max_rate, s)), drive=drive,
        omega_d=omega_d, gamma=offdiagonal * rng.uniform(0, max_rate, (s, s)),
        xi=lower * rng.uniform(0, max_rate, (s, s)),
        Gamma=lower * rng.uniform(0, max_rate, (s, s)),
        Omega=lower * rng.uniform(-max_rate, max_rate, (s, s)), frame=frame)
    rates = CollectiveRates(params.Gamma, params.Omega)
    return params, rates


def random_spec(s, seed, components=2):
    """returns a random mixture of ``components`` pure single-atom states"""
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.1, 1.0, components)
    weights /= weights.sum()
    mixture = []
    for weight in weights:
        amplitudes = rng.normal(size=s) + 1j * rng.normal(size=s)
        mixture.append((weight, amplitudes / np.linalg.norm(amplitudes)))
    return InitialStateSpec(mixture)


def hermitian_vector(basis, seed):
    """a random vector with the hermitian index symmetry of a state"""
    rng = np.random.default_rng(seed)
    y = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return y + np.conj(y[basis.transpose_permutation])


@pytest.fixture
def system_factory():
    return random_system


@pytest.fixture
def spec_factory():
    return random_spec
