import os
import sys
from fractions import Fraction

import pytest

# Ensure we can import from the repository root
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.append(ROOT)

from core.measure import FAMeasure, powerset_field  # noqa: E402
from core.soberdrunk import soberdrunk_space  # noqa: E402
from core.typespace import NatureSpace, TypeSpace, singleton_space  # noqa: E402
from documents.store import DocumentStore  # noqa: E402

FIXTURES = os.path.join(ROOT, 'fixtures')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive sweeps at level 4 or wide transfinite windows')
    if not config.option.markexpr:
        config.option.markexpr = 'not slow'


def fixture_file(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def store():
    return DocumentStore(folder='')


@pytest.fixture
def nature():
    return NatureSpace(('h', 't'))


@pytest.fixture
def singleton(nature):
    return singleton_space(nature, 'h', ('a', 'b'))


@pytest.fixture
def two_state(store):
    return store.load_typespace(fixture_file('two_state.json'))


@pytest.fixture
def duplicated(store):
    return store.load_typespace(fixture_file('duplicated.json'))


@pytest.fixture
def coarse(store):
    return store.load_typespace(fixture_file('coarse.json'))


@pytest.fixture
def lopsided(nature):
    """x and y share nature h; player a tells them apart at depth 1"""
    states = ('x', 'y', 'z')
    field = powerset_field(states)
    half = Fraction(1, 2)
    spread = FAMeasure.from_atom_map(field, {'y': half, 'z': half})
    types = {
        'a': {'x': FAMeasure.from_atom_map(field, {'x': 1}), 'y': spread, 'z': spread},
        'b': {m: FAMeasure.from_atom_map(field, {m: 1}) for m in states},
    }
    theta = {'x': 'h', 'y': 'h', 'z': 't'}
    return TypeSpace(nature, states, theta, types, field=field, name='lopsided')


@pytest.fixture(scope='session')
def w1():
    return soberdrunk_space(1)


@pytest.fixture(scope='session')
def w2():
    return soberdrunk_space(2)
