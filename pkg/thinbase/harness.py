"""
Command line experiments.  Every subcommand loads its inputs, runs one operation, optionally
cross-checks it against an independent brute force oracle, and writes a JSON report.  The exit
code is 0 when every certification in the report passed, 1 when a result came back uncertified
and 2 for usage or data errors.
"""

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy
import orjson
from loguru import logger

from thinbase import __version__
from thinbase.characters import brute_force_counts, char_sum, char_sum_criterion, class_product_counts, count_criterion, degree_zeta, frobenius_count, validate_table
from thinbase.configuration import ThinBaseConfig
from thinbase.configuration_utils import default_config, verify_configuration
from thinbase.corpus import load_group, load_table, shipped_groups, shipped_tables
from thinbase.decompose import check_trace, group_decompose, largest_root, square_root
from thinbase.errors import ReportSchemaError, TableValidationError, ThinBaseError
from thinbase.groups import SubsetMask, pairwise_uncovered, product_cover_check, spot_check, symmetric_group
from thinbase.minkowski import IntervalSet, cantor_sets, estimate_dimension, product_dim_inequality_check, quaternary_scales, sumset_cover_check, torus_square_root
from thinbase.perm_stats import class_count_ratio, count_min_fixed, count_min_fixed_in, perm_stat, stratified_thin_base, stratum_inequality_check
from thinbase.thin_base import balanced_size, coverage_sweep, disjoint_prob, random_square_root, sample_thin_pair, size_threshold, small_intersection_prob, tail_bound_sweep
from thinbase.words import parse_word, waring_check

REPORT_KEYS = ['command', 'version', 'arguments', 'results', 'certified', 'timings']

# enumerated cross-checks of count_min_fixed stop at this degree
MAX_ENUMERATED_DEGREE = 8

Outcome = Tuple[Dict[str, Any], bool, Optional[List[Dict[str, Any]]]]


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class RunReport:
    command: str
    version: str
    arguments: Dict[str, Any]
    """
    Echo of the parsed command line, with the seed and verify flag resolved against the config.
    """

    results: Dict[str, Any]
    certified: bool
    """
    Every certification in results passed.  Only exhaustive checks set this.
    """

    timings: Dict[str, float]

    def __init__(self, command: str, arguments: Dict[str, Any], results: Dict[str, Any], certified: bool, timings: Dict[str, float]):
        self.command = command
        self.version = __version__
        self.arguments = arguments
        self.results = results
        self.certified = certified
        self.timings = timings

    def to_dict(self) -> Dict[str, Any]:
        return {'command': self.command, 'version': self.version, 'arguments': self.arguments, 'results': self.results, 'certified': self.certified, 'timings': self.timings}

    def __str__(self):
        return dumps(self.to_dict()).decode('UTF-8')


def __default(value: Any) -> Any:
    if isinstance(value, numpy.bool_):
        return bool(value)
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, numpy.floating):
        return float(value)
    if isinstance(value, numpy.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, SubsetMask):
        return value.to_list()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f'cannot serialize {type(value).__name__}')


def dumps(document: Any) -> bytes:
    return orjson.dumps(document, default=__default, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)


def write_csv(rows: List[Dict[str, Any]], path: Path):
    with open(path, 'w', newline='', encoding='UTF-8') as file:
        writer = csv.DictWriter(file, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    logger.info('wrote {} rows to {}', len(rows), path)


def read_report(path: Path) -> Dict[str, Any]:
    try:
        document = orjson.loads(Path(path).read_bytes())
    except orjson.JSONDecodeError as error:
        raise ReportSchemaError(f'{path} is not valid json: {error}') from error
    missing = [key for key in REPORT_KEYS if not isinstance(document, dict) or key not in document]
    if missing:
        raise ReportSchemaError(f'{path} is not a report, missing {", ".join(missing)}')
    return document


def __class_ref(value: str):
    return int(value) if value.isdigit() else value


def __workers(args: argparse.Namespace, config: ThinBaseConfig) -> int:
    return args.workers if args.workers is not None else config.workers


def _decompose(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    group = load_group(args.group, config)
    x = args.x if args.x is not None else largest_root(2 * group.order)
    certificate = group_decompose(group, x, config.pair_budget, config.class_union_limit, args.seed, args.prefer_quotient)
    results = certificate.to_dict()
    certified = certificate.verified
    if args.verify:
        results['trace_checked'] = check_trace(certificate)
        results['pairwise_uncovered'] = pairwise_uncovered(group, certificate.x, certificate.y, group.full()).to_list()
        certified = certified and results['trace_checked'] and not results['pairwise_uncovered']
    return results, certified, None


def _square_root(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    group = load_group(args.group, config)
    everything = group.full()
    if args.random:
        found = random_square_root(group, args.seed, args.c, config.max_attempts, __workers(args, config))
        root, results = found.root, found.to_dict()
    else:
        root = square_root(group, config.pair_budget, config.class_union_limit, args.seed)
        results = {'root': root.to_list(), 'size': len(root), 'bound': math.sqrt(8 * group.order)}
    results['group'] = group.name
    results['order'] = group.order
    results['verified'] = product_cover_check(group, root, root, everything, __workers(args, config)).is_empty()
    certified = results['verified']
    if args.verify:
        results['pairwise_uncovered'] = pairwise_uncovered(group, root, root, everything).to_list()
        certified = certified and not results['pairwise_uncovered']
    return results, certified, None


def _thin_base(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    group = load_group(args.group, config)
    everything = group.full()
    side = min(group.order, balanced_size(group.order, args.c))
    x0 = min(group.order, args.x0 or side)
    y0 = min(group.order, args.y0 or x0)
    attempts = args.attempts or config.max_attempts
    recheck = config.recheck_fraction if args.verify else 0.0
    sample = sample_thin_pair(group, everything, everything, everything, x0, y0, args.seed, attempts, __workers(args, config), recheck)
    results = {
        'group': group.name,
        'order': group.order,
        'threshold': size_threshold(group.order, args.c),
        'balanced_size': side,
        'x0': x0,
        'y0': y0,
        'sample': sample.to_dict(),
    }
    certified = sample.certified and not sample.recheck_failures
    rows = None
    if args.sweep:
        rows = coverage_sweep(group, args.sweep, seed=args.seed, attempts=args.sweep_attempts)
        fractions = [row['mean_fraction'] for row in rows]
        results['sweep'] = rows
        results['sweep_nondecreasing'] = all(a <= b for a, b in zip(fractions, fractions[1:]))
    return results, certified, rows


def _waring_check(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    group = load_group(args.group, config)
    first = parse_word(args.word)
    second = parse_word(args.word2) if args.word2 else first
    waring = waring_check(group, first, second, __workers(args, config), config.exhaustive_budget)
    results = waring.to_dict()
    certified = waring.holds
    if args.verify:
        oracle = pairwise_uncovered(group, waring.first.image, waring.second.image, group.full())
        results['oracle_agrees'] = oracle == waring.uncovered
        certified = certified and results['oracle_agrees']
    return results, certified, None


def _frobenius(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    table = load_table(args.table)
    group = load_group(args.group, config) if args.group else None
    validation = validate_table(table, group)
    if not validation.valid:
        raise TableValidationError(f'{table.group_name}: ' + '; '.join(validation.errors))

    if args.classes:
        triples = [tuple(table.class_index(__class_ref(c)) for c in args.classes)]
    else:
        size = len(table.classes)
        triples = [(i, j, k) for i in range(size) for j in range(size) for k in range(size)]

    formula = class_product_counts(table)
    brute = None
    if args.verify and group is not None:
        order = validation.class_map
        brute = brute_force_counts(group)[numpy.ix_(order, order, order)]

    rows = []
    certified = True
    for i, j, k in triples:
        count = frobenius_count(table, i, j, k)
        row = {
            'c1': table.classes[i].label,
            'c2': table.classes[j].label,
            'c3': table.classes[k].label,
            'count': round(count),
            'residual': abs(complex(formula[i, j, k]) - round(count)),
        }
        if brute is not None:
            row['brute_force'] = int(brute[i, j, k])
            certified = certified and row['brute_force'] == row['count']
        rows.append(row)
    results = {'group': table.group_name, 'order': table.group_order, 'oracle': brute is not None, 'counts': rows}
    return results, certified, rows


def _char_sum(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    table = load_table(args.table)
    validation = validate_table(table)
    if not validation.valid:
        raise TableValidationError(f'{table.group_name}: ' + '; '.join(validation.errors))
    c1, c2, c3 = [table.class_index(__class_ref(c)) for c in args.classes]
    value, modulus = char_sum(table, c1, c2, c3)
    count = frobenius_count(table, c1, c2, c3)
    results = {
        'group': table.group_name,
        'classes': [table.classes[c].label for c in [c1, c2, c3]],
        'value': value,
        'modulus': modulus,
        'count': round(count),
        'count_criterion': count_criterion(table, c1, c2, c3),
        'char_sum_criterion': char_sum_criterion(table, c1, c2, c3),
        'degree_zeta': degree_zeta(table, args.s),
    }
    certified = True
    if args.verify:
        rearranged = count * table.group_order / (table.classes[c1].size * table.classes[c2].size) - 1
        results['rearrangement_residual'] = abs(value - rearranged)
        certified = results['rearrangement_residual'] < 1e-9
    return results, certified, None


def _perm_stats(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    if args.perm is None and args.min_fixed is None and args.inequality is None and args.ratio is None:
        raise ReportSchemaError('perm-stats needs --perm, --min-fixed, --inequality or --ratio')
    results: Dict[str, Any] = {}
    certified = True
    if args.perm is not None:
        results['stat'] = perm_stat(args.perm).to_dict()
    if args.min_fixed is not None:
        n, m = args.min_fixed
        exact, bound = count_min_fixed(n, m)
        results['min_fixed'] = {'n': n, 'm': m, 'exact': exact, 'bound': bound, 'holds': exact <= bound}
        certified = certified and exact <= bound
        if args.verify and n <= MAX_ENUMERATED_DEGREE:
            enumerated = count_min_fixed_in(symmetric_group(n), m)
            results['min_fixed']['enumerated'] = enumerated
            certified = certified and enumerated == exact
    if args.inequality is not None:
        report = stratum_inequality_check(args.inequality)
        results['inequality'] = report.to_dict()
        certified = certified and report.holds
    if args.ratio is not None:
        if args.c1 is None or args.c2 is None:
            raise ReportSchemaError('--ratio needs --c1 and --c2 cycle types')
        results['ratio'] = {'c1': args.c1, 'c2': args.c2, 'g': args.ratio, 'value': class_count_ratio(len(args.ratio), args.c1, args.c2, args.ratio)}
    return results, certified, None


def _stratified(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    first = parse_word(args.word)
    second = parse_word(args.word2) if args.word2 else first
    size_factor = args.size_factor if args.size_factor is not None else config.size_factor
    result = stratified_thin_base(args.n, first, second, args.seed, size_factor, args.attempts or config.max_attempts, __workers(args, config), config.exhaustive_budget, config.sample_factor)
    results = result.to_dict()
    certified = result.certified
    if args.verify:
        group = result.x.group
        results['recheck_failures'] = spot_check(group, result.x, result.y, group.full(), config.recheck_fraction, args.seed)
        certified = certified and not results['recheck_failures']
    return results, certified, None


def _mink_dim(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    scales = quaternary_scales(args.first, args.last)
    first, second = cantor_sets(args.depth, config.max_depth)
    shapes = {'interval': IntervalSet.from_fractions([(-1, 1)]), 'cantor-a': first, 'cantor-b': second}
    names = list(shapes) if args.set == 'all' else [args.set]

    results: Dict[str, Any] = {'depth': args.depth, 'estimates': {}}
    rows = []
    for name in names:
        estimate = estimate_dimension(shapes[name], scales)
        results['estimates'][name] = estimate.to_dict()
        rows.extend({'set': name, 'delta': delta, 'count': count} for delta, count in zip(estimate.scales, estimate.packing_counts))

    cover = sumset_cover_check(first, second, (-1, 1), 0)
    results['cantor_cover'] = cover.to_dict()
    certified = cover.covered
    if args.product:
        product_rows = product_dim_inequality_check(first, second, scales)
        results['product'] = [row.to_dict() for row in product_rows]
        certified = certified and all(row.lower_holds and row.upper_holds for row in product_rows)
    if args.torus is not None:
        torus = torus_square_root(args.torus, args.torus_depth, config.max_grid_points, config.max_depth, grid_base=args.torus_grid_base)
        results['torus'] = torus.to_dict()
        certified = certified and torus.certified
    return results, certified, rows


def _tail_bounds(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    if args.query is not None:
        n, a, b = args.query
        empty, small = disjoint_prob(n, a, b), small_intersection_prob(n, a, b, args.k)
        results = {'n': n, 'a': a, 'b': b, 'disjoint': empty.to_dict(), 'tail': small.to_dict()}
        return results, empty.holds and small.holds, None

    rows = tail_bound_sweep(args.n_max)
    failures = [row for row in rows if not (row['disjoint_holds'] and row['tail_holds'])]
    results = {'n_max': args.n_max, 'checked': len(rows), 'failure_count': len(failures), 'failures': failures}
    return results, not failures, rows


def _report_merge(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    reports = [read_report(path) for path in args.inputs]
    results = {'reports': reports}
    return results, all(report['certified'] for report in reports), None


def _corpus(args: argparse.Namespace, config: ThinBaseConfig) -> Outcome:
    return {'groups': shipped_groups(), 'tables': shipped_tables()}, True, None


def __add_decompose(parser: argparse.ArgumentParser):
    parser.add_argument('--group', required=True, help='group file, or the name of a shipped group.')
    parser.add_argument('--x', type=float, help='target size of X, defaults to sqrt(2|G|).')
    parser.add_argument('--prefer-quotient', action='store_true', help='try the quotient case before the subgroup case.')


def __add_square_root(parser: argparse.ArgumentParser):
    parser.add_argument('--group', required=True, help='group file, or the name of a shipped group.')
    parser.add_argument('--random', action='store_true', help='build R from a random thin pair instead of the deterministic recursion.')
    parser.add_argument('--c', type=float, default=1.0, help='density constant of the random construction.')
    parser.add_argument('--workers', type=int, help='threads for the covering kernel.')


def __add_thin_base(parser: argparse.ArgumentParser):
    parser.add_argument('--group', required=True, help='group file, or the name of a shipped group.')
    parser.add_argument('--x0', type=int, help='size of X0, defaults to the balanced size.')
    parser.add_argument('--y0', type=int, help='size of Y0, defaults to x0.')
    parser.add_argument('--c', type=float, default=1.0, help='density constant.')
    parser.add_argument('--attempts', type=int, help='maximum number of attempts.')
    parser.add_argument('--workers', type=int, help='attempts run at once.')
    parser.add_argument('--sweep', type=int, nargs='*', help='sizes x0 = y0 for a coverage sweep.')
    parser.add_argument('--sweep-attempts', type=int, default=5, help='draws per sweep size.')


def __add_waring_check(parser: argparse.ArgumentParser):
    parser.add_argument('--group', required=True, help='group file, or the name of a shipped group.')
    parser.add_argument('--word', required=True, help='first word, like "a^2" or "a^-1b^-1ab".')
    parser.add_argument('--word2', help='second word, defaults to the first.')
    parser.add_argument('--workers', type=int, help='threads for word images and the covering kernel.')


def __add_frobenius(parser: argparse.ArgumentParser):
    parser.add_argument('--table', required=True, help='character table file, or the name of a shipped table.')
    parser.add_argument('--group', help='group the table belongs to, enables the brute force oracle.')
    parser.add_argument('--classes', nargs=3, help='class labels or indices c1 c2 c3, defaults to every triple.')


def __add_char_sum(parser: argparse.ArgumentParser):
    parser.add_argument('--table', required=True, help='character table file, or the name of a shipped table.')
    parser.add_argument('--classes', nargs=3, required=True, help='class labels or indices c1 c2 c3.')
    parser.add_argument('--s', type=float, default=2.0, help='exponent of the degree zeta sum.')


def __add_perm_stats(parser: argparse.ArgumentParser):
    parser.add_argument('--perm', type=int, nargs='+', help='a permutation of 0..n-1 as its list of images.')
    parser.add_argument('--min-fixed', type=int, nargs=2, metavar=('N', 'M'), help='count permutations of N points with at least M fixed points.')
    parser.add_argument('--inequality', type=int, metavar='N_MAX', help='check the stratum inequality for every n up to N_MAX.')
    parser.add_argument('--ratio', type=int, nargs='+', metavar='G', help='class count ratio at the permutation G of A_n.')
    parser.add_argument('--c1', type=int, nargs='+', help='cycle type of the first class.')
    parser.add_argument('--c2', type=int, nargs='+', help='cycle type of the second class.')


def __add_stratified(parser: argparse.ArgumentParser):
    parser.add_argument('--n', type=int, required=True, help='degree of the alternating group, 5 to 9.')
    parser.add_argument('--word', default='a^-1b^-1ab', help='first word, defaults to the commutator.')
    parser.add_argument('--word2', help='second word, defaults to the first.')
    parser.add_argument('--size-factor', type=float, help='thin set size multiplier.')
    parser.add_argument('--attempts', type=int, help='sampler attempts per part.')
    parser.add_argument('--workers', type=int, help='threads for word images and the sampler.')


def __add_mink_dim(parser: argparse.ArgumentParser):
    parser.add_argument('--set', choices=['all', 'interval', 'cantor-a', 'cantor-b'], default='all', help='which set to estimate.')
    parser.add_argument('--depth', type=int, default=10, help='digit depth of the Cantor sets.')
    parser.add_argument('--first', type=int, default=4, help='coarsest scale 4^-first.')
    parser.add_argument('--last', type=int, default=10, help='finest scale 4^-last.')
    parser.add_argument('--product', action='store_true', help='check the product packing inequalities on the Cantor pair.')
    parser.add_argument('--torus', type=int, help='also build a square root of the torus of this dimension.')
    parser.add_argument('--torus-depth', type=int, default=6, help='digit depth of the torus construction.')
    parser.add_argument('--torus-grid-base', type=int, choices=[2, 4], default=2, help='certify the torus cover on the grid of resolution base^-depth.')


def __add_tail_bounds(parser: argparse.ArgumentParser):
    parser.add_argument('--n-max', type=int, default=60, help='sweep every (n, a, b) with n up to this.')
    parser.add_argument('--query', type=int, nargs=3, metavar=('N', 'A', 'B'), help='a single query instead of the sweep.')
    parser.add_argument('--k', type=int, help='intersection threshold of a single query.')


def __add_report_merge(parser: argparse.ArgumentParser):
    parser.add_argument('inputs', type=Path, nargs='+', help='reports to merge.')


def __add_nothing(parser: argparse.ArgumentParser):
    pass


SUBCOMMANDS: Dict[str, Tuple[str, Callable[[argparse.ArgumentParser], None], Callable[[argparse.Namespace, ThinBaseConfig], Outcome]]] = {
    'decompose': ('deterministic decomposition G = XY with |X| <= x and |Y| <= 2|G|/x.', __add_decompose, _decompose),
    'square-root': ('a subset R with R.R = G.', __add_square_root, _square_root),
    'thin-base': ('random thin pair covering G, with an optional coverage sweep.', __add_thin_base, _thin_base),
    'waring-check': ('whether w1(G) w2(G) = G.', __add_waring_check, _waring_check),
    'frobenius': ('class product counts from a character table.', __add_frobenius, _frobenius),
    'char-sum': ('the character sum over nontrivial characters for a class triple.', __add_char_sum, _char_sum),
    'perm-stats': ('cycle statistics, fixed point counts and class count ratios.', __add_perm_stats, _perm_stats),
    'stratified': ('thin cover of A_n inside word images, stratum by stratum.', __add_stratified, _stratified),
    'mink-dim': ('packing counts, dimension estimates, Cantor and torus square roots.', __add_mink_dim, _mink_dim),
    'tail-bounds': ('exact hypergeometric probabilities against their exponential bounds.', __add_tail_bounds, _tail_bounds),
    'report-merge': ('merge several reports into one.', __add_report_merge, _report_merge),
    'corpus': ('list the shipped groups and character tables.', __add_nothing, _corpus),
}


def build_parser(command: str) -> argparse.ArgumentParser:
    description, add_arguments, _ = SUBCOMMANDS[command]
    parser = argparse.ArgumentParser(prog=f'thinbase {command}', description=description)
    parser.add_argument('-c', '--configfile', type=Path, help='config file, defaults first to env var THINBASE_CONFIG, then ~/.thinbase.cfg, and finally ./.thinbase.cfg.')
    parser.add_argument('-v', '--verbose', action='store_true', help='verbose, print logs')
    parser.add_argument('--out', type=Path, help='write the json report here instead of printing it.')
    parser.add_argument('--csv', type=Path, help='write the table of a sweep here.')
    parser.add_argument('--seed', type=int, help='master seed, defaults to the configured seed.')
    parser.add_argument('--verify', action=argparse.BooleanOptionalAction, default=None, help='run the brute force oracles, defaults to the configured value.')
    add_arguments(parser)
    return parser


def run(command: str, arg_list: List[str]) -> int:
    """
    Run one subcommand and return its exit code.
    """
    args = build_parser(command).parse_args(arg_list)
    if args.configfile is not None and not args.configfile.is_file():
        print(f'Config file not found: {args.configfile}', file=sys.stderr)
        return 2

    config = default_config(args.configfile)
    if args.verbose:
        level = 'DEBUG' if config.debug else 'INFO'
        logger.add(sys.stdout, format=config.console_format, level=level, diagnose=config.diagnose_errors)

    if not verify_configuration(config):
        return 2

    args.seed = args.seed if args.seed is not None else config.seed
    args.verify = args.verify if args.verify is not None else config.verify
    _, _, execute = SUBCOMMANDS[command]
    start = time.perf_counter()
    try:
        results, certified, rows = execute(args, config)
    except (ThinBaseError, FileNotFoundError) as error:
        logger.error('{} failed: {}', command, error)
        print(f'{command}: {error}', file=sys.stderr)
        return 2

    timings = {} if config.normalize_timings else {'seconds': time.perf_counter() - start}
    arguments = {key: value for key, value in vars(args).items() if key not in ['configfile', 'verbose', 'out', 'csv']}
    report = RunReport(command, arguments, results, bool(certified), timings)

    if args.csv is not None and rows:
        write_csv(rows, args.csv)
    if args.out is not None:
        args.out.write_bytes(dumps(report.to_dict()))
        logger.info('wrote report to {}', args.out)
    else:
        print(report)

    if certified:
        logger.success('{} certified', command)
    else:
        logger.warning('{} finished without certification', command)
    return 0 if certified else 1
