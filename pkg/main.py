import argparse
import logging
import sys

from config.config import MAX_MORPHISM_MAPS, MAX_W_STATES
from core.api import TypeSpaceAPI
from core.errors import TypeSpaceToolkitError
from core.utils import ColorPrint, Utils
from documents import codec
from documents.store import DocumentStore

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


def level_for_states(max_states):
    """Largest n with |W^n| = 2^(2n+1) within max_states"""
    n = 0
    while 2 ** (2 * (n + 1) + 1) <= max_states:
        n += 1
    return n


class TypeSpaceCLI:
    """Command-line front end: every command is a thin shell over TypeSpaceAPI"""

    def __init__(self, out=None):
        self.out = out or sys.stdout
        self.store = DocumentStore(folder='')
        self.api = None

    def build_parser(self):
        parser = argparse.ArgumentParser(
            prog='typespace',
            description='finite type spaces: validation, descriptions, quotients and the sober-drunk spaces')
        parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
        parser.add_argument('--max-states', type=int, default=MAX_W_STATES,
                            help='largest sober-drunk space to build (state count)')
        parser.add_argument('--max-maps', type=int, default=MAX_MORPHISM_MAPS,
                            help='largest number of candidate maps to enumerate')
        parser.add_argument('--out', default=None, help='write the produced document here instead of stdout')
        commands = parser.add_subparsers(dest='command', required=True)

        p = commands.add_parser('validate', help='check a type-space document')
        p.add_argument('space')

        p = commands.add_parser('classify', help="print '*' or '∞' for a type space")
        p.add_argument('space')

        p = commands.add_parser('eval', help='states where an expression holds, listed in the order the space declares them')
        p.add_argument('space')
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument('expression', nargs='?')
        source.add_argument('--file', dest='expression_file', help='expressions document')

        p = commands.add_parser('describe', help='description fingerprint of a state')
        p.add_argument('space')
        p.add_argument('state')
        p.add_argument('--depth', type=int, required=True)

        p = commands.add_parser('minimize', help='description quotient of a space')
        p.add_argument('space')
        p.add_argument('--terminality', action='store_true',
                       help='also check that the quotient receives exactly one morphism')

        p = commands.add_parser('morphism', help='check or enumerate type morphisms')
        p.add_argument('source')
        p.add_argument('target')
        how = p.add_mutually_exclusive_group(required=True)
        how.add_argument('--map', dest='map_file', help='map document to check')
        how.add_argument('--enumerate', action='store_true', help='list every morphism')

        p = commands.add_parser('extend', help='extend a measure by a set or to a finer field')
        p.add_argument('measure')
        p.add_argument('--set', dest='subset', help='comma-separated states of the new set')
        p.add_argument('--p', dest='value', help="value on the new set, e.g. '1/2'")
        p.add_argument('--field', dest='field_file', help='field document to refine onto')

        p = commands.add_parser('soberdrunk', help='the sober-drunk spaces W^n')
        sub = p.add_subparsers(dest='action', required=True)
        q = sub.add_parser('build', help='construct W^n and check its belief properties')
        q.add_argument('n', type=int)
        q = sub.add_parser('separate', help='states told apart only at depth alpha+1')
        q.add_argument('n', type=int)
        q.add_argument('alpha', type=int, nargs='?')
        q.add_argument('--player', default='a')
        q = sub.add_parser('lemmas', help='run the record witness checks')
        q.add_argument('n', type=int)
        q.add_argument('--no-transfinite', action='store_true')
        q.add_argument('--positions', type=int, default=None, help='finite window size below omega')
        return parser

    # --- OUTPUT ---

    def emit(self, doc, to_file=None):
        if to_file:
            success, message = self.store.write(doc, to_file)
            if not success:
                raise TypeSpaceToolkitError(message)
            ColorPrint.info(message)
        else:
            self.out.write(codec.dumps(doc))

    def report(self, title, ok, payload, args):
        self.emit(codec.dump_report(title, payload, ok), args.out)
        if ok:
            ColorPrint.success(f"{title}: ok")
            return EXIT_OK
        ColorPrint.warning(f"{title}: property violated")
        return EXIT_VIOLATION

    # --- COMMANDS ---

    def cmd_validate(self, args):
        ok, payload = self.api.validate_space(self.store.load_typespace(args.space))
        return self.report('validate', ok, payload, args)

    def cmd_classify(self, args):
        ok, payload = self.api.classify_space(self.store.load_typespace(args.space))
        return self.report('classify', ok, payload, args)

    def cmd_eval(self, args):
        space = self.store.load_typespace(args.space)
        if args.expression_file:
            exprs = self.store.load_expressions(args.expression_file, space.nature, space.players)
            results = [self.api.evaluate(space, e)[1] for e in exprs]
            return self.report('eval', True, {'results': results}, args)
        ok, payload = self.api.evaluate(space, args.expression)
        return self.report('eval', ok, payload, args)

    def cmd_describe(self, args):
        ok, payload = self.api.describe(self.store.load_typespace(args.space), args.state, args.depth)
        return self.report('describe', ok, payload, args)

    def cmd_minimize(self, args):
        space = self.store.load_typespace(args.space)
        ok, payload = self.api.minimize(space)
        if args.terminality:
            ok, payload['terminality'] = self.api.terminality(space)
        reduced = codec.dump_typespace(payload.pop('quotient'))
        if args.out:
            self.emit(reduced, args.out)
            args.out = None
        else:
            payload['quotient'] = reduced
        return self.report('minimize', ok, payload, args)

    def cmd_morphism(self, args):
        source = self.store.load_typespace(args.source)
        target = self.store.load_typespace(args.target)
        if args.enumerate:
            ok, payload = self.api.enumerate_maps(source, target)
            return self.report('morphism', ok, payload, args)
        f = self.store.load_map(args.map_file, source, target)
        ok, payload = self.api.check_morphism(source, target, f)
        return self.report('morphism', ok, payload, args)

    def cmd_extend(self, args):
        mu = self.store.load_measure(args.measure)
        if args.field_file:
            ok, result = self.api.refine_measure(mu, self.store.load_field(args.field_file))
        elif args.subset is not None and args.value is not None:
            names = [s.strip() for s in args.subset.split(',') if s.strip()]
            ok, result = self.api.extend_measure(mu, names, Utils.parse_rational(args.value))
        else:
            raise TypeSpaceToolkitError("extend needs --field, or --set with --p")
        self.emit(codec.dump_measure(result), args.out)
        return EXIT_OK if ok else EXIT_VIOLATION

    def cmd_soberdrunk(self, args):
        if args.action == 'build':
            ok, payload = self.api.soberdrunk_build(args.n)
            space = codec.dump_typespace(payload.pop('space'))
            if args.out:
                self.emit(space, args.out)
                args.out = None
            else:
                payload['space'] = space
            return self.report(f'soberdrunk build {args.n}', ok, payload, args)
        if args.action == 'separate':
            ok, payload = self.api.soberdrunk_separate(args.n, args.alpha, args.player)
            return self.report(f'soberdrunk separate {args.n}', ok, payload, args)
        ok, payload = self.api.soberdrunk_lemmas(args.n, transfinite=not args.no_transfinite,
                                                  positions=args.positions)
        return self.report(f'soberdrunk lemmas {args.n}', ok, payload, args)

    def run(self, argv=None):
        parser = self.build_parser()
        args = parser.parse_args(argv)
        Utils.setup_logging(args.log_level)
        self.api = TypeSpaceAPI(max_maps=args.max_maps, max_level=level_for_states(args.max_states))

        handler = getattr(self, f"cmd_{args.command}")
        try:
            return handler(args)
        except TypeSpaceToolkitError as e:
            ColorPrint.error(str(e))
            logger.debug("command failed", exc_info=True)
            return EXIT_INPUT_ERROR


def main(argv=None):
    return TypeSpaceCLI().run(argv)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        ColorPrint.warning("Interrupted")
        sys.exit(EXIT_INPUT_ERROR)
