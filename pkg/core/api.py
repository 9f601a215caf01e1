import logging

from config.config import MAX_MORPHISM_MAPS, MAX_SOBERDRUNK_LEVEL
from core.errors import TypeSpaceError
from core.exprlang import check_names, depth, evaluate, parse, to_text
from core.lemmas import sweep_finite, sweep_transfinite
from core.measure import horn_tarski_extend, los_marczewski_extend
from core.soberdrunk import (
    build_beliefs,
    check_depth_agreement,
    check_induction_hypothesis,
    check_lemma8,
    check_lemma9,
    check_theorem2,
    separation_demo,
    soberdrunk_space,
)
from core.typespace import classify, enumerate_morphisms, is_type_morphism, validate
from core.universal import check_terminality, desc_fingerprint, quotient

logger = logging.getLogger(__name__)


class TypeSpaceAPI:
    """
    Facade over the toolkit modules used by the command line.

    Every method returns (ok, payload): ok is False when a checked property
    fails, and payload is a JSON-ready dict. Malformed input raises the
    toolkit's exceptions.
    """

    def __init__(self, max_maps=MAX_MORPHISM_MAPS, max_level=MAX_SOBERDRUNK_LEVEL):
        self.max_maps = max_maps
        self.max_level = max_level

    @staticmethod
    def state(space, name):
        """Resolve a state by its printed name"""
        for m in space.states:
            if str(m) == name:
                return m
        raise TypeSpaceError(f"unknown state '{name}'")

    @staticmethod
    def names(space, subset):
        return [str(m) for m in space.ordered(subset)]

    # --- TYPE SPACES ---

    def validate_space(self, space):
        report = validate(space)
        return report.ok, report.to_dict()

    def classify_space(self, space):
        return True, {'space': space.name, 'class': classify(space)}

    def evaluate(self, space, expr):
        """expr is expression text or an already parsed expression"""
        if isinstance(expr, str):
            expr = parse(expr, space.nature, space.players)
        else:
            check_names(expr, space.nature, space.players)
        return True, {
            'expression': to_text(expr),
            'depth': depth(expr),
            'states': self.names(space, evaluate(space, expr)),
        }

    def describe(self, space, state_name, d):
        m = self.state(space, state_name)
        return True, {'state': str(m), 'depth': d, 'fingerprint': desc_fingerprint(space, m, d)}

    def minimize(self, space):
        qs = quotient(space)
        payload = {
            'quotient': qs.space,
            'projection': {str(m): str(x) for m, x in qs.projection.items()},
            'tower': qs.tower.to_dict(),
        }
        return True, payload

    # --- MORPHISMS ---

    def check_morphism(self, source, target, f):
        report = is_type_morphism(source, target, f)
        return report.ok, report.to_dict()

    def enumerate_maps(self, source, target):
        maps = enumerate_morphisms(source, target, budget=self.max_maps)
        payload = {
            'count': len(maps),
            'morphisms': [{str(m): str(f[m]) for m in source.states} for f in maps],
        }
        return True, payload

    def terminality(self, space, targets=()):
        report = check_terminality(space, targets, budget=self.max_maps)
        return report.ok, report.to_dict()

    # --- EXTENSIONS ---

    def extend_measure(self, mu, names, p):
        index = {str(x): x for x in mu.field.universe}
        missing = [n for n in names if n not in index]
        if missing:
            raise TypeSpaceError(f"unknown states {missing}")
        return True, los_marczewski_extend(mu, {index[n] for n in names}, p)

    def refine_measure(self, mu, field):
        return True, horn_tarski_extend(mu, field)

    # --- SOBER-DRUNK ---

    def soberdrunk_build(self, n):
        tower = build_beliefs(n, max_level=self.max_level)
        space = soberdrunk_space(n, tower=tower)
        checks = [check_theorem2(tower), check_induction_hypothesis(tower), check_lemma8(space, n)]
        ok = validate(space).ok and all(checks)
        return ok, {'space': space, 'checks': [c.to_dict() for c in checks]}

    def soberdrunk_separate(self, n, alpha=None, player='a'):
        space = soberdrunk_space(n, max_level=self.max_level)
        report = separation_demo(n, alpha, player, space=space)
        return report.ok, report.to_dict()

    def soberdrunk_lemmas(self, n, transfinite=True, positions=None):
        n = int(n)
        space = soberdrunk_space(n, max_level=self.max_level)
        results = {
            'finite': {str(kind): r.to_dict() for kind, r in sweep_finite(n).items()},
            'bit_expressions': check_lemma9(space, n).to_dict(),
            'depth_agreement': check_depth_agreement(space, n).to_dict(),
        }
        ok = all(r['ok'] for r in results['finite'].values())
        ok = ok and results['bit_expressions']['ok'] and results['depth_agreement']['ok']
        if transfinite:
            kwargs = {} if positions is None else {'positions': positions}
            sweep = sweep_transfinite(**kwargs)
            results['transfinite'] = {str(kind): r.to_dict() for kind, r in sweep.items()}
            ok = ok and all(r.ok for r in sweep.values())
        return ok, results
