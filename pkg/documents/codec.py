"""
JSON documents for natures, fields, measures, type spaces, expression lists,
maps and reports.

Every document carries `kind` and `schema_version`. Rationals are "num/den"
strings, atoms are keyed by their first state in declared order, zero weights
are left out, and text is emitted with sorted keys, two-space indentation and a
trailing newline, so dump(load(text)) == text for canonical input.
"""

import json
import logging

from config.config import DOCUMENT_SCHEMA_VERSION
from core.errors import DocumentError
from core.exprlang import parse, to_text
from core.measure import FAMeasure, SetField, powerset_field
from core.typespace import NatureSpace, TypeSpace
from core.utils import Utils

logger = logging.getLogger(__name__)

KINDS = ('nature', 'field', 'measure', 'typespace', 'expressions', 'map', 'report')
SHAPES = {dict: 'an object', list: 'a list'}


def _header(kind):
    return {'kind': kind, 'schema_version': DOCUMENT_SCHEMA_VERSION}


def _where(kind):
    return f" in {kind} document" if kind else ""


def _shaped(value, key, kind=None, shape=None):
    if shape is not None and not isinstance(value, shape):
        raise DocumentError(f"'{key}'{_where(kind)} must be {SHAPES[shape]}, got {type(value).__name__}")
    return value


def _require(doc, key, kind=None, shape=None):
    if not isinstance(doc, dict):
        raise DocumentError(f"expected a JSON object, got {type(doc).__name__}")
    if key not in doc:
        raise DocumentError(f"missing key '{key}'{_where(kind)}")
    return _shaped(doc[key], key, kind, shape)


def _name_list(value, key, kind):
    """A list of names given as strings"""
    _shaped(value, key, kind, list)
    if not all(isinstance(name, str) for name in value):
        raise DocumentError(f"'{key}'{_where(kind)} must hold names as strings")
    return value


def check_header(doc, kind):
    found = _require(doc, 'kind')
    if found != kind:
        raise DocumentError(f"expected a '{kind}' document, got '{found}'")
    version = _require(doc, 'schema_version', kind)
    if version != DOCUMENT_SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema version {version} (expected {DOCUMENT_SCHEMA_VERSION})")
    return doc


def loads(text):
    """Parse document text and check its header"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e.msg} at line {e.lineno}, column {e.colno}") from e
    kind = _require(doc, 'kind')
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind '{kind}'")
    return check_header(doc, kind)


def dumps(doc):
    return Utils.dump_json(doc)


def _names(items):
    return [str(x) for x in items]


def _lookup(table, name, what):
    if not isinstance(name, str):
        raise DocumentError(f"{what} must be named by a string, got {type(name).__name__}")
    if name not in table:
        raise DocumentError(f"unknown {what} '{name}'")
    return table[name]


# --- NATURE ---

def dump_nature(nature, header=True):
    doc = _header('nature') if header else {}
    doc['points'] = _names(nature.points)
    doc['events'] = {name: [str(s) for s in nature.field.ordered(event)]
                     for name, event in nature.events.items()}
    return doc


def load_nature(doc, header=True):
    if header:
        check_header(doc, 'nature')
    points = _name_list(_require(doc, 'points', 'nature'), 'points', 'nature')
    events = doc.get('events')
    if events is not None:
        for name, members in _shaped(events, 'events', 'nature', dict).items():
            _name_list(members, f"events.{name}", 'nature')
    return NatureSpace(points, events)


# --- FIELDS AND MEASURES ---

def _atom_lists(field):
    return [[str(x) for x in field.ordered(atom)] for atom in field.atoms]


def dump_field(field, header=True):
    doc = _header('field') if header else {}
    doc['universe'] = _names(field.universe)
    doc['atoms'] = _atom_lists(field)
    return doc


def _field_from(universe, atoms, kind='field', key='atoms'):
    """Field over named states; atoms None means the powerset"""
    if atoms is None:
        return powerset_field(universe)
    for atom in _shaped(atoms, key, kind, list):
        _name_list(atom, key, kind)
    index = {str(x): x for x in universe}
    try:
        return SetField(universe, [[_lookup(index, name, 'state') for name in atom] for atom in atoms])
    except ValueError as e:
        raise DocumentError(f"bad field: {e}") from e


def load_field(doc, header=True):
    if header:
        check_header(doc, 'field')
    universe = _name_list(_require(doc, 'universe', 'field'), 'universe', 'field')
    return _field_from(universe, _require(doc, 'atoms', 'field'))


def _weights_doc(mu):
    return {str(mu.field.ordered(atom)[0]): Utils.format_rational(w) for atom, w in mu.atom_weights() if w}


def _weights_from(field, weights, index):
    if not isinstance(weights, dict):
        raise DocumentError("weights must be an object mapping states to rationals")
    mapping = {}
    for name, value in weights.items():
        state = _lookup(index, name, 'state')
        atom = field.atom_of(state)
        if atom in mapping:
            raise DocumentError(f"two weights inside one atom (state '{name}')")
        mapping[atom] = Utils.parse_rational(value)
    return FAMeasure.from_atom_map(field, mapping)


def dump_measure(mu):
    doc = _header('measure')
    doc['field'] = dump_field(mu.field, header=False)
    doc['weights'] = _weights_doc(mu)
    return doc


def load_measure(doc):
    check_header(doc, 'measure')
    field = load_field(_require(doc, 'field', 'measure', dict), header=False)
    index = {str(x): x for x in field.universe}
    return _weights_from(field, _require(doc, 'weights', 'measure'), index)


# --- TYPE SPACES ---

def dump_typespace(space):
    doc = _header('typespace')
    doc['name'] = space.name
    doc['nature'] = dump_nature(space.nature, header=False)
    doc['players'] = list(space.players)
    doc['states'] = _names(space.states)
    if not space.field.is_powerset:
        doc['field'] = _atom_lists(space.field)
    doc['theta'] = {str(m): str(space.theta[m]) for m in space.states}
    doc['types'] = {i: {str(m): _weights_doc(space.T(i, m)) for m in space.states} for i in space.players}
    return doc


def load_typespace(doc):
    check_header(doc, 'typespace')
    nature = load_nature(_require(doc, 'nature', 'typespace', dict), header=False)
    states = _name_list(_require(doc, 'states', 'typespace'), 'states', 'typespace')
    if len(set(states)) != len(states):
        raise DocumentError("state names must be distinct")
    field = _field_from(states, doc.get('field'), 'typespace', 'field')
    index = {name: name for name in states}

    points = {str(s): s for s in nature.points}
    theta = {m: _lookup(points, value, 'nature point')
             for m, value in _require(doc, 'theta', 'typespace', dict).items()}
    types_doc = _require(doc, 'types', 'typespace', dict)
    players = _name_list(doc.get('players', list(types_doc)), 'players', 'typespace')
    types = {}
    for i in players:
        per_state = _shaped(_lookup(types_doc, i, 'player'), f"types.{i}", 'typespace', dict)
        types[i] = {_lookup(index, m, 'state'): _weights_from(field, weights, index)
                    for m, weights in per_state.items()}
    return TypeSpace(nature, states, theta, types, field=field, name=doc.get('name', ''))


# --- EXPRESSIONS, MAPS, REPORTS ---

def dump_expressions(exprs):
    doc = _header('expressions')
    doc['expressions'] = [to_text(e) for e in exprs]
    return doc


def load_expressions(doc, nature=None, players=None):
    check_header(doc, 'expressions')
    texts = _name_list(_require(doc, 'expressions', 'expressions'), 'expressions', 'expressions')
    return [parse(text, nature, players) for text in texts]


def dump_map(f):
    doc = _header('map')
    doc['map'] = {str(m): str(x) for m, x in f.items()}
    return doc


def load_map(doc, source, target):
    """Resolve a name -> name map against the states of two spaces"""
    check_header(doc, 'map')
    ours = {str(m): m for m in source.states}
    theirs = {str(x): x for x in target.states}
    return {_lookup(ours, m, 'source state'): _lookup(theirs, x, 'target state')
            for m, x in _require(doc, 'map', 'map', dict).items()}


def dump_report(title, result, ok=True):
    doc = _header('report')
    doc['report'] = title
    doc['ok'] = bool(ok)
    doc['result'] = result
    return doc


LOADERS = {
    'nature': load_nature,
    'field': load_field,
    'measure': load_measure,
    'typespace': load_typespace,
    'expressions': load_expressions,
}


def load(text):
    """Parse any document text into its object (reports and maps stay dicts)"""
    doc = loads(text)
    loader = LOADERS.get(doc['kind'])
    return loader(doc) if loader else doc
