"""
The sober-drunk spaces W^n: level-by-level belief construction, the
depth-indexed expression family that reads off record bits, and the
separation and complexity demonstrations.
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from config.config import MAX_SOBERDRUNK_LEVEL
from core.errors import BudgetExceededError, RecordError
from core.exprlang import Bel, Evaluator, Nat, Not, Or, depth, to_text
from core.measure import (
    ONE,
    ZERO,
    FAMeasure,
    field_extend_by_set,
    horn_tarski_extend,
    los_marczewski_extend,
    measure_of,
    point_mass,
    powerset_field,
    preimage_field,
    pullback,
)
from core.records import (
    NATURE,
    PLAYERS,
    cylinder_event,
    enumerate_W,
    make_state,
    other_player,
    partition_blocks,
    restrict,
    sort_key,
)
from core.typespace import NatureSpace, TypeSpace, belief_operator
from core.universal import fingerprint_table

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# --- CONSTRUCTION ---

class SoberDrunkTower:
    """Beliefs of both players at every level 1..n and on the powerset of W^n"""

    def __init__(self, n):
        self.n = n
        self.states = {}        # level -> list of states
        self.blocks = {}        # level -> player -> {key: block}
        self.fields = {}        # level -> player -> {state: field F(i, w)}
        self.level_types = {}   # level -> player -> {state: measure on F(i, w)}
        self.types = {}         # player -> {state of W^n: measure on Pow(W^n)}

    def representative(self, level, i, w):
        for block in self.blocks[level][i].values():
            if w in block:
                return min(block, key=sort_key)
        raise RecordError(f"{w} is not a level-{level} state")

    def block_of(self, level, i, w):
        return next(block for block in self.blocks[level][i].values() if w in block)


def _first_level_measure(rep, i, base, states):
    """Mass 1 or 1/2 on [X0 = w0], depending on the player's bit 0"""
    value = ONE if rep.record(i)(0) else HALF
    weights = {}
    for atom in base.atoms:
        w0 = next(iter(atom)).w0
        weights[atom] = value if w0 == rep.w0 else ONE - value
    return FAMeasure.from_atom_map(base, weights)


def build_beliefs(n, max_level=MAX_SOBERDRUNK_LEVEL):
    """
    Run the finite construction up to level n.

    Per information block the lexicographically least state is the
    representative; its measure is pulled back from the level below, extended
    to give the block mass 1, then (when the player's last bit is 0) extended
    to give the opponent's previous bit mass 1/2, and finally split equally
    onto the full level field.
    """
    n = int(n)
    if n < 1:
        raise RecordError("the construction starts at level 1")
    if max_level is not None and n > max_level:
        raise BudgetExceededError("sober-drunk level", n, max_level)

    tower = SoberDrunkTower(n)
    tower.states[0] = enumerate_W(0)
    for alpha in range(1, n + 1):
        states = enumerate_W(alpha)
        tower.states[alpha] = states
        project = {w: restrict(w, alpha - 1) for w in states}
        base = preimage_field(powerset_field(tower.states[alpha - 1]), project, states)
        tower.blocks[alpha] = {}
        tower.fields[alpha] = {}
        tower.level_types[alpha] = {}

        for i in PLAYERS:
            j = other_player(i)
            blocks = partition_blocks(i, states)
            tower.blocks[alpha][i] = blocks
            fields, measures = {}, {}

            for block in blocks.values():
                rep = min(block, key=sort_key)

                # 1. Start from the level below
                if alpha == 1:
                    start = _first_level_measure(rep, i, base, states)
                else:
                    below = tower.level_types[alpha - 1][i][project[rep]]
                    start = pullback(below, project, states)

                # 2. The block gets mass 1
                mu = los_marczewski_extend(start, block, ONE)

                # 3. Undecided opponent bit gets mass 1/2
                if alpha >= 2 and rep.record(i)(alpha - 1) == 0:
                    bit = rep.record(j)(alpha - 2)
                    event = cylinder_event('bit', alpha, bit, player=j, index=alpha - 2).members(states)
                    mu = los_marczewski_extend(mu, event, HALF)

                # 4. Spread onto F(i, w) = [restrict^-1(Pow W^{alpha-1}), P_i(w)]
                target = field_extend_by_set(base, block)
                mu = horn_tarski_extend(mu, target)
                for w in block:
                    fields[w] = target
                    measures[w] = mu

            tower.fields[alpha][i] = fields
            tower.level_types[alpha][i] = measures
            logger.debug("level %d player %s: %d blocks", alpha, i, len(blocks))

    top = powerset_field(tower.states[n])
    for i in PLAYERS:
        tower.types[i] = {}
        for block in tower.blocks[n][i].values():
            rep = min(block, key=sort_key)
            final = horn_tarski_extend(tower.level_types[n][i][rep], top)
            for w in block:
                tower.types[i][w] = final
    return tower


def soberdrunk_space(n, players=PLAYERS, tower=None, max_level=MAX_SOBERDRUNK_LEVEL):
    """W^n with the constructed beliefs; players beyond a and b believe their own state for sure"""
    if tower is None:
        tower = build_beliefs(n, max_level=max_level)
    states = tower.states[tower.n]
    field = powerset_field(states)
    types = {}
    for i in players:
        if i in PLAYERS:
            types[i] = dict(tower.types[i])
        else:
            types[i] = {w: point_mass(w, field) for w in states}
    nature = NatureSpace(NATURE)
    theta = {w: w.w0 for w in states}
    space = TypeSpace(nature, states, theta, types, field=field, name=f"W^{tower.n}")
    space.tower = tower
    return space


def padded_space(n, players):
    """W^n with extra players whose types are point masses"""
    missing = [i for i in PLAYERS if i not in players]
    if missing:
        raise RecordError(f"players {missing} are required")
    return soberdrunk_space(n, players=tuple(players))


def level_measures(n):
    """level -> player -> {state: measure on F(i, w)} for every level up to n"""
    return build_beliefs(n).level_types


def _as_tower(tower):
    return tower if isinstance(tower, SoberDrunkTower) else build_beliefs(tower)


# --- EXPRESSION FAMILY ---

def lemma9_base():
    return {'h': Nat('h'), 't': Nat('t')}


def lemma9_expr(i, beta, bit, n=None):
    """Expression of depth beta+1 whose event is [X_i(beta) = bit]"""
    j = other_player(i)
    beta = int(beta)
    if beta < 0 or (n is not None and beta + 1 > n):
        raise RecordError(f"bit position {beta} out of range for level {n}")
    if bit not in (0, 1):
        raise RecordError("bit must be 0 or 1")
    if beta == 0:
        one = Or((Bel(i, ONE, Nat('h')), Bel(i, ONE, Nat('t'))))
    else:
        one = Or((Bel(i, ONE, lemma9_expr(j, beta - 1, 0)), Bel(i, ONE, lemma9_expr(j, beta - 1, 1))))
    return one if bit == 1 else Not(one)


def lemma9_corpus(max_depth):
    """The base events and every family member of depth at most max_depth"""
    corpus = list(lemma9_base().values())
    for beta in range(max_depth):
        for i in PLAYERS:
            for bit in (1, 0):
                corpus.append(lemma9_expr(i, beta, bit))
    return corpus


# --- PROPERTY CHECKS ---

@dataclass
class PropertyReport:
    title: str
    checks: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return all(self.checks.values()) and not self.failures

    def __bool__(self):
        return self.ok

    def record(self, name, passed, **witness):
        self.checks[name] = self.checks.get(name, True) and passed
        if not passed and len(self.failures) < 20:
            self.failures.append({'check': name, **{k: str(v) for k, v in witness.items()}})

    def to_dict(self):
        return {
            'title': self.title,
            'ok': self.ok,
            'checks': dict(sorted(self.checks.items())),
            'failures': self.failures,
            'notes': self.notes,
        }


def _fiber_profile(mu, projection, memo):
    """Masses mu gives to the fibres of a restriction map, as a sorted tuple"""
    key = ('fibers', mu, id(projection))
    if key not in memo:
        fibers = {}
        for atom, weight in mu.atom_weights():
            if weight:
                for x in atom:
                    target = projection[x]
                    fibers[target] = fibers.get(target, ZERO) + weight / len(atom)
        memo[key] = tuple(sorted((sort_key(k), v) for k, v in fibers.items()))
    return memo[key]


def check_theorem2(tower):
    """Block constancy, block mass, nature and opponent-bit masses, and cylinder-mass locality on W^n"""
    tower = _as_tower(tower)
    n = tower.n
    states = tower.states[n]
    report = PropertyReport(f"belief properties on W^{n}")
    report.notes.append("limit-parity masses: no limit ordinal below a finite level")
    memo = {}

    def mass(mu, event):
        key = (mu, event)
        if key not in memo:
            memo[key] = measure_of(mu, event)
        return memo[key]

    nature_events = {w0: cylinder_event('nature', n, w0).members(states) for w0 in NATURE}
    bit_events = {
        (j, beta, bit): cylinder_event('bit', n, bit, player=j, index=beta).members(states)
        for j in PLAYERS for beta in range(n) for bit in (0, 1)
    }
    lower = {beta: {w: restrict(w, beta) for w in states} for beta in range(n + 1)}

    for i in PLAYERS:
        j = other_player(i)
        T = tower.types[i]
        for block in tower.blocks[n][i].values():
            members = sorted(block, key=sort_key)
            rep = members[0]
            report.record('constant_on_blocks', all(T[w] == T[rep] for w in members), player=i, state=rep)
            report.record('block_mass_one', mass(T[rep], block) == ONE, player=i, state=rep)

        for w in states:
            mu = T[w]
            expected = ONE if w.record(i)(0) else HALF
            report.record('nature_mass', mass(mu, nature_events[w.w0]) == expected, player=i, state=w)
            for beta in range(n - 1):
                expected = ONE if w.record(i)(beta + 1) else HALF
                event = bit_events[(j, beta, w.record(j)(beta))]
                report.record('opponent_bit_mass', mass(mu, event) == expected, player=i, state=w, beta=beta)

        for beta in range(n):
            profiles = {}
            for w in states:
                profile = _fiber_profile(T[w], lower[beta], memo)
                anchor = lower[beta + 1][w]
                if anchor in profiles:
                    report.record('cylinder_locality', profiles[anchor] == profile, player=i, state=w, beta=beta)
                else:
                    profiles[anchor] = profile
    return report


def check_induction_hypothesis(tower):
    """Marginal consistency, block constancy, block mass and pinned values at every level"""
    tower = _as_tower(tower)
    report = PropertyReport(f"level-by-level construction up to W^{tower.n}")
    for alpha in range(1, tower.n + 1):
        states = tower.states[alpha]
        lower = {beta: {w: restrict(w, beta) for w in states} for beta in range(1, alpha)}
        fibers = {}
        for beta, projection in lower.items():
            grouped = {}
            for w, x in projection.items():
                grouped.setdefault(x, set()).add(w)
            fibers[beta] = grouped
        for i in PLAYERS:
            j = other_player(i)
            T = tower.level_types[alpha][i]
            for block in tower.blocks[alpha][i].values():
                rep = min(block, key=sort_key)
                mu = T[rep]
                report.record('constant_on_blocks', all(T[w] is mu for w in block), level=alpha, state=rep)
                report.record('block_mass_one', measure_of(mu, block) == ONE, level=alpha, state=rep)
                nature = frozenset(w for w in states if w.w0 == rep.w0)
                expected = ONE if rep.record(i)(0) else HALF
                report.record('nature_mass', measure_of(mu, nature) == expected, level=alpha, state=rep)
                for beta in range(alpha - 1):
                    event = cylinder_event('bit', alpha, rep.record(j)(beta), player=j, index=beta).members(states)
                    expected = ONE if rep.record(i)(beta + 1) else HALF
                    report.record('opponent_bit_mass', measure_of(mu, event) == expected,
                                  level=alpha, state=rep, beta=beta)

                # marginals on every lower level
                for beta in range(1, alpha):
                    nu = tower.level_types[beta][i][lower[beta][rep]]
                    for atom, w in nu.atom_weights():
                        pre = frozenset().union(*(fibers[beta][x] for x in atom))
                        report.record('marginals', measure_of(mu, pre) == w, level=alpha, state=rep, below=beta)
    return report


def check_lemma8(space, n):
    """Bit 0 of i is 'i is sure of nature'; bit beta+1 is 'i is sure of j's bit beta'"""
    report = PropertyReport(f"bit identities on W^{n}")
    states = list(space.states)
    cache = {}
    for i in PLAYERS:
        j = other_player(i)
        sure = frozenset()
        for w0 in NATURE:
            sure |= belief_operator(space, i, ONE, cylinder_event('nature', n, w0).members(states), cache)
        report.record('first_bit', sure == cylinder_event('bit', n, 1, player=i, index=0).members(states), player=i)
        for beta in range(n - 1):
            sure = frozenset()
            for bit in (0, 1):
                event = cylinder_event('bit', n, bit, player=j, index=beta).members(states)
                sure |= belief_operator(space, i, ONE, event, cache)
            expected = cylinder_event('bit', n, 1, player=i, index=beta + 1).members(states)
            report.record('successor_bit', sure == expected, player=i, beta=beta)
    report.notes.append("limit-parity identity: no limit ordinal below a finite level")
    return report


def check_lemma9(space, n):
    report = PropertyReport(f"bit-reading expressions on W^{n}")
    evaluate = Evaluator(space)
    states = list(space.states)
    for name, expr in lemma9_base().items():
        report.record('nature_events', evaluate(expr) == cylinder_event('nature', n, name).members(states))
    for beta in range(n):
        for i in PLAYERS:
            for bit in (0, 1):
                expr = lemma9_expr(i, beta, bit, n)
                event = cylinder_event('bit', n, bit, player=i, index=beta).members(states)
                report.record('events', evaluate(expr) == event, player=i, beta=beta, bit=bit)
                report.record('depths', depth(expr) == beta + 1, player=i, beta=beta, bit=bit)
    return report


def check_depth_agreement(space, n):
    """States have equal depth-d fingerprints exactly when they agree up to level d"""
    report = PropertyReport(f"restriction agreement on W^{n}")
    for d in range(n + 1):
        tokens = fingerprint_table(space, d)
        seen = {}
        owners = {}
        for w in space.states:
            anchor = restrict(w, d)
            if anchor in seen:
                report.record('agreement', tokens[w] == seen[anchor], state=w, depth=d)
            else:
                seen[anchor] = tokens[w]
            owner = owners.setdefault(tokens[w], anchor)
            report.record('separation', owner == anchor, state=w, depth=d)
    return report


# --- SEPARATION ---

@dataclass
class SeparationReport:
    n: int
    alpha: int
    player: str
    u: object
    w: object
    psi: object
    fingerprints_equal: bool
    corpus_agrees: bool
    psi_depth: int
    u_satisfies: bool
    w_refutes: bool
    fingerprints_split: bool

    @property
    def ok(self):
        return (self.fingerprints_equal and self.corpus_agrees and self.psi_depth == self.alpha + 1
                and self.u_satisfies and self.w_refutes)

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            'ok': self.ok,
            'n': self.n,
            'alpha': self.alpha,
            'player': self.player,
            'u': str(self.u),
            'w': str(self.w),
            'psi': to_text(self.psi),
            'psi_depth': self.psi_depth,
            'equal_fingerprints_at_alpha': self.fingerprints_equal,
            'corpus_agrees_up_to_alpha': self.corpus_agrees,
            'u_in_psi': self.u_satisfies,
            'w_not_in_psi': self.w_refutes,
            'fingerprints_differ_at_alpha_plus_one': self.fingerprints_split,
        }


def separation_demo(n, alpha=None, player='a', space=None):
    """Two states that agree on every expression of depth alpha and are told apart at depth alpha+1"""
    n = int(n)
    alpha = n - 1 if alpha is None else int(alpha)
    if alpha < 0 or alpha + 1 > n:
        raise RecordError(f"alpha must satisfy 0 <= alpha < {n}")
    other_player(player)
    if space is None:
        space = soberdrunk_space(n)

    own = {alpha}
    u = make_state('h', own if player == 'a' else (), own if player == 'b' else (), level=n)
    w = make_state('h', (), (), level=n)
    psi = lemma9_expr(player, alpha, 1, n)

    evaluate = Evaluator(space)
    same_tokens = fingerprint_table(space, alpha)
    next_tokens = fingerprint_table(space, alpha + 1)
    corpus_agrees = all((u in evaluate(e)) == (w in evaluate(e)) for e in lemma9_corpus(alpha))
    event = evaluate(psi)

    report = SeparationReport(
        n=n, alpha=alpha, player=player, u=u, w=w, psi=psi,
        fingerprints_equal=same_tokens[u] == same_tokens[w],
        corpus_agrees=corpus_agrees,
        psi_depth=depth(psi),
        u_satisfies=u in event,
        w_refutes=w not in event,
        fingerprints_split=next_tokens[u] != next_tokens[w],
    )
    logger.debug("separation on W^%d at depth %d: %s", n, alpha, report.ok)
    return report


# --- UNBOUNDED COMPLEXITY ---

def unbounded_complexity_report(max_n, max_level=MAX_SOBERDRUNK_LEVEL):
    """State counts of W^n and injectivity of depth-n fingerprints, level by level"""
    report = PropertyReport(f"growth of W^n up to n = {max_n}")
    rows = []
    for n in range(1, int(max_n) + 1):
        space = soberdrunk_space(n, max_level=max_level)
        tokens = fingerprint_table(space, n)
        count = len(space.states)
        distinct = len(set(tokens.values()))
        report.record('state_count', count == 2 ** (2 * n + 1), n=n, count=count)
        report.record('injective_fingerprints', distinct == count, n=n, distinct=distinct)
        rows.append({'n': n, 'states': count, 'distinct_depth_n_fingerprints': distinct})
    report.notes.append(
        "every W^n embeds injectively by descriptions, so the number of description classes grows "
        "without bound; no fixed finite space receives injective morphisms from all of them")
    report.notes.append({'levels': rows})
    return report
