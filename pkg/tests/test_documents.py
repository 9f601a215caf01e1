import json
from fractions import Fraction

import pytest

from conftest import fixture_file
from core.errors import DocumentError, ExpressionError
from core.exprlang import parse
from core.measure import FAMeasure, SetField
from core.utils import Utils
from documents import codec


def _text(name):
    with open(fixture_file(name), encoding='utf-8') as f:
        return f.read()


# --- RATIONALS ---

@pytest.mark.parametrize('text, value', [('1/2', Fraction(1, 2)), ('3', Fraction(3)), (' 2/4 ', Fraction(1, 2)), (1, Fraction(1))])
def test_parse_rational(text, value):
    assert Utils.parse_rational(text) == value


@pytest.mark.parametrize('text', ['1/x', '1/0', '0.5', '1/2/3', '', 0.5, True])
def test_malformed_rationals(text):
    with pytest.raises(DocumentError):
        Utils.parse_rational(text)


def test_format_rational():
    assert Utils.format_rational(Fraction(2, 4)) == '1/2'
    assert Utils.format_rational(Fraction(0)) == '0'
    assert Utils.format_rational(1) == '1'


# --- TYPE SPACES ---

@pytest.mark.parametrize('name', ['singleton.json', 'two_state.json'])
def test_canonical_documents_reproduce_byte_for_byte(name):
    text = _text(name)
    assert codec.dumps(codec.dump_typespace(codec.load(text))) == text


def test_loaded_space_matches_the_document(two_state):
    assert two_state.states == ('m1', 'm2')
    assert two_state.players == ('a', 'b')
    assert two_state.theta == {'m1': 'h', 'm2': 't'}
    assert two_state.T('a', 'm1').weights == (Fraction(1, 2), Fraction(1, 2))
    assert two_state.name == 'two-state'


def test_coarse_fields_survive_a_round_trip(coarse):
    doc = codec.dump_typespace(coarse)
    assert doc['field'] == [['m1', 'm2']]
    again = codec.load_typespace(json.loads(codec.dumps(doc)))
    assert again.field == coarse.field
    assert again.T('b', 'm2') == coarse.T('b', 'm2')


def test_malformed_rational_is_a_document_error(store):
    with pytest.raises(DocumentError):
        store.load_typespace(fixture_file('malformed_rational.json'))


def test_two_weights_in_one_atom():
    doc = json.loads(_text('coarse.json'))
    doc['types']['a']['m1'] = {'m1': '1/2', 'm2': '1/2'}
    with pytest.raises(DocumentError):
        codec.load_typespace(doc)


def test_unknown_names_are_document_errors():
    doc = json.loads(_text('singleton.json'))
    doc['theta'] = {'m': 'rain'}
    with pytest.raises(DocumentError):
        codec.load_typespace(doc)
    doc = json.loads(_text('singleton.json'))
    doc['types']['a']['m'] = {'n': '1'}
    with pytest.raises(DocumentError):
        codec.load_typespace(doc)
    doc = json.loads(_text('singleton.json'))
    doc['states'] = ['m', 'm']
    with pytest.raises(DocumentError):
        codec.load_typespace(doc)


@pytest.mark.parametrize('path, value', [
    (('states',), 3),
    (('states',), [['m1'], 'm2']),
    (('theta',), ['h', 't']),
    (('theta', 'm1'), ['h']),
    (('types',), []),
    (('types', 'a'), []),
    (('types', 'a', 'm1'), '1'),
    (('players',), 'ab'),
    (('field',), {'m1': ['m2']}),
    (('field',), ['m1', 'm2']),
    (('nature',), ['h', 't']),
    (('nature', 'points'), {'h': 1}),
    (('nature', 'events'), [['h']]),
])
def test_misshapen_sections_are_document_errors(path, value):
    doc = json.loads(_text('two_state.json'))
    parent = doc
    for key in path[:-1]:
        parent = parent[key]
    parent[path[-1]] = value
    with pytest.raises(DocumentError):
        codec.load_typespace(doc)


def test_misshapen_measures_and_lists(two_state, duplicated):
    doc = json.loads(_text('four_point.json'))
    doc['field'] = [['x1', 'x2'], ['x3', 'x4']]
    with pytest.raises(DocumentError):
        codec.load_measure(doc)
    with pytest.raises(DocumentError):
        codec.load_expressions({'kind': 'expressions', 'schema_version': 1, 'expressions': [1]})
    with pytest.raises(DocumentError):
        codec.load_map({'kind': 'map', 'schema_version': 1, 'map': []}, two_state, duplicated)
    with pytest.raises(DocumentError):
        codec.load_map({'kind': 'map', 'schema_version': 1, 'map': {'m1': ['p1']}}, two_state, duplicated)


# --- HEADERS ---

def test_headers_are_checked():
    with pytest.raises(DocumentError):
        codec.loads('{"kind": "typespace"')
    with pytest.raises(DocumentError):
        codec.loads('{"kind": "spaceship", "schema_version": 1}')
    with pytest.raises(DocumentError):
        codec.loads('{"kind": "map", "schema_version": 99, "map": {}}')
    with pytest.raises(DocumentError):
        codec.loads('[1, 2]')
    with pytest.raises(DocumentError):
        codec.load_measure(codec.loads(_text('singleton.json')))


# --- OTHER KINDS ---

def test_measure_documents():
    mu = codec.load(_text('four_point.json'))
    assert mu.weights == (Fraction(1, 2), Fraction(1, 2))
    doc = codec.dump_measure(mu)
    assert doc['weights'] == {'x1': '1/2', 'x3': '1/2'}
    assert doc['field']['atoms'] == [['x1', 'x2'], ['x3', 'x4']]


def test_zero_weights_are_left_out():
    field = SetField(('p', 'q', 'r'), [['p'], ['q'], ['r']])
    doc = codec.dump_measure(FAMeasure(field, [0, 1, 0]))
    assert doc['weights'] == {'q': '1'}


def test_field_documents():
    field = codec.load(_text('four_point_powerset.json'))
    assert field.is_powerset
    assert codec.load_field(codec.dump_field(field)) == field
    with pytest.raises(DocumentError):
        codec.load_field({'kind': 'field', 'schema_version': 1, 'universe': ['x'], 'atoms': [['y']]})


def test_expression_documents(nature):
    exprs = codec.load(_text('expressions.json'))
    assert len(exprs) == 4
    assert codec.dump_expressions(exprs)['expressions'][2] == 'not B[b,1/2](nat(t))'
    doc = codec.dump_expressions([parse('nat(rain)')])
    with pytest.raises(ExpressionError):
        codec.load_expressions(doc, nature)


def test_map_documents(two_state, duplicated):
    f = codec.load_map(codec.loads(_text('embed_map.json')), two_state, duplicated)
    assert f == {'m1': 'p1', 'm2': 'p2'}
    with pytest.raises(DocumentError):
        codec.load_map(codec.loads(_text('embed_map.json')), duplicated, two_state)
    assert codec.dump_map(f)['map'] == {'m1': 'p1', 'm2': 'p2'}


def test_reports_stay_dictionaries():
    doc = codec.load(codec.dumps(codec.dump_report('validate', {'valid': True})))
    assert doc['ok'] is True and doc['report'] == 'validate'


def test_nature_documents(nature):
    doc = codec.dump_nature(nature)
    assert doc['points'] == ['h', 't']
    assert codec.load_nature(doc) == nature


# --- STORE ---

def test_store_writes_and_reads(tmp_path, store, two_state):
    target = str(tmp_path / 'out' / 'space.json')
    ok, message = store.save_typespace(two_state, target)
    assert ok, message
    assert store.load_typespace(target).states == two_state.states
    with open(target, encoding='utf-8') as f:
        assert f.read() == _text('two_state.json')


def test_store_writes_measures(tmp_path, store):
    mu = store.load_measure(fixture_file('four_point.json'))
    target = str(tmp_path / 'mu.json')
    assert store.save_measure(mu, target)[0]
    assert store.load_measure(target) == mu


def test_store_resolves_bare_names_into_its_folder(tmp_path):
    from documents.store import DocumentStore
    store = DocumentStore(folder=str(tmp_path / 'exports'))
    ok, _ = store.save_report('check', {'n': 1}, 'report.json')
    assert ok
    assert store.read(str(tmp_path / 'exports' / 'report.json'), 'report')['result'] == {'n': 1}


def test_store_reports_missing_files(store, tmp_path):
    with pytest.raises(DocumentError):
        store.load_typespace(str(tmp_path / 'missing.json'))
    with pytest.raises(DocumentError):
        store.load_measure(fixture_file('two_state.json'))
