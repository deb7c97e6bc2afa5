"""
Random thin bases.

Two uniformly random subsets X0, Y0 of sizes x0, y0 with x0 * y0 above (2e^2/c) n ln n cover a
target set Z with positive probability, when every z in Z has at least c |X||Y|/n representations
in X x Y.  The exact hypergeometric probabilities behind that claim are computed here with big
integers, and compared to their exponential bounds at 60 significant digits.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy
from loguru import logger
from scipy.special import comb

from thinbase.errors import ThinBaseError, UncoverableError
from thinbase.groups import FiniteGroup, SubsetMask, class_cover_check, covered_by, is_class_union, product_cover_check, representations, spot_check
from thinbase.seeds import partial_shuffle, substream

E_SQUARED = math.e**2
DECIMAL_DIGITS = 60


@lru_cache(maxsize=1 << 16)
def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def __decimal_exp(exponent: Fraction) -> Decimal:
    with localcontext() as context:
        context.prec = DECIMAL_DIGITS
        return (Decimal(exponent.numerator) / Decimal(exponent.denominator)).exp()


def __at_most(exact: Fraction, factor: Decimal, exponent: Fraction) -> bool:
    """
    exact <= factor * exp(exponent)
    """
    approximate = float(factor) * math.exp(float(exponent))
    if float(exact) < approximate * (1 - 1e-9):
        return True
    if approximate > 1e-300 and float(exact) > approximate * (1 + 1e-9):
        return False
    with localcontext() as context:
        context.prec = DECIMAL_DIGITS
        return Decimal(exact.numerator) / Decimal(exact.denominator) <= factor * __decimal_exp(exponent)


def __e_squared() -> Fraction:
    with localcontext() as context:
        context.prec = DECIMAL_DIGITS
        return Fraction(Decimal(2).exp())


@dataclass(init=False, repr=False, eq=True, order=False, unsafe_hash=False, frozen=False)
class TailBound:
    exact: Fraction
    """
    The probability, as an exact fraction of big integers.
    """

    bound: float
    holds: bool
    """
    exact <= bound, decided at 60 significant digits.
    """

    degenerate: bool = False
    """
    The threshold reaches the largest possible intersection, so the tail is 1.
    """

    def __init__(self, exact: Fraction, bound: float, holds: bool, degenerate: bool = False):
        self.exact = exact
        self.bound = bound
        self.holds = holds
        self.degenerate = degenerate

    def to_dict(self) -> Dict[str, Any]:
        return {'exact': float(self.exact), 'bound': self.bound, 'holds': self.holds, 'degenerate': self.degenerate}


def __check_query(n: int, a: int, b: int):
    if n < 1 or not 0 <= a <= n or not 0 <= b <= n:
        raise ThinBaseError(f'need 0 <= a, b <= n and n >= 1, found n={n}, a={a}, b={b}')


def default_threshold(n: int, a: int, b: int) -> int:
    """
    floor(ab / (e^2 n))
    """
    return math.floor(Fraction(a * b, n) / __e_squared())


def disjoint_prob(n: int, a: int, b: int) -> TailBound:
    """
    Probability that a uniformly random b-subset of an n-set misses a fixed a-subset, against exp(-ab/n).
    """
    __check_query(n, a, b)
    exact = Fraction(binomial(n - a, b), binomial(n, b))
    exponent = Fraction(-a * b, n)
    return TailBound(exact, math.exp(float(exponent)), __at_most(exact, Decimal(1), exponent))


def small_intersection_prob(n: int, a: int, b: int, k: Optional[int] = None) -> TailBound:
    """
    Probability that a uniformly random b-subset meets a fixed a-subset in at most k points,
    against 2.2 exp(-5ab / (2 e^2 n)).  k defaults to floor(ab / (e^2 n)).
    """
    __check_query(n, a, b)
    if k is None:
        k = default_threshold(n, a, b)
    low, high = max(0, a + b - n), min(a, b)
    exponent = Fraction(-5 * a * b, 2 * n) / __e_squared()
    bound = 2.2 * math.exp(float(exponent))
    if k >= high:
        return TailBound(Fraction(1), bound, __at_most(Fraction(1), Decimal('2.2'), exponent), degenerate=True)

    favourable = sum(binomial(a, i) * binomial(n - a, b - i) for i in range(low, k + 1))
    exact = Fraction(favourable, binomial(n, b))
    return TailBound(exact, bound, __at_most(exact, Decimal('2.2'), exponent))


def tail_bound_sweep(n_max: int = 60) -> List[Dict[str, Any]]:
    """
    Both tail bounds on every (n, a, b) with 2 <= n <= n_max and 1 <= a, b <= n.
    """
    rows = []
    for n in range(2, n_max + 1):
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                empty = disjoint_prob(n, a, b)
                small = small_intersection_prob(n, a, b)
                rows.append(
                    {
                        'n': n,
                        'a': a,
                        'b': b,
                        'disjoint': float(empty.exact),
                        'disjoint_bound': empty.bound,
                        'disjoint_holds': empty.holds,
                        'k': default_threshold(n, a, b),
                        'tail': float(small.exact),
                        'tail_bound': small.bound,
                        'tail_holds': small.holds,
                    }
                )
        logger.debug('tail bounds checked up to n = {}', n)
    return rows


def size_threshold(n: int, c: float = 1.0) -> float:
    """
    (2e^2/c) n ln n, the product x0 * y0 above which a random pair covers with positive probability.
    """
    if n < 2 or c <= 0:
        raise ThinBaseError(f'need n >= 2 and c > 0, found n={n}, c={c}')
    return 2 * E_SQUARED / c * n * math.log(n)


def balanced_size(n: int, c: float = 1.0) -> int:
    return math.ceil(math.sqrt(size_threshold(n, c)))


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class ThinPairResult:
    x0: SubsetMask
    y0: SubsetMask
    attempts: int
    seed: int
    uncovered_history: List[int]
    """
    Number of uncovered target elements after each attempt, up to the returned one.
    """

    certified: bool
    uncovered: SubsetMask
    """
    Target elements missed by the returned pair, empty when certified.
    """

    attempt: int
    """
    Index of the returned attempt.
    """

    recheck_failures: List[int]

    def __init__(self, x0: SubsetMask, y0: SubsetMask, attempts: int, seed: int, uncovered_history: List[int], uncovered: SubsetMask, attempt: int):
        self.x0 = x0
        self.y0 = y0
        self.attempts = attempts
        self.seed = seed
        self.uncovered_history = uncovered_history
        self.uncovered = uncovered
        self.certified = uncovered.is_empty()
        self.attempt = attempt
        self.recheck_failures = []

    def to_dict(self) -> Dict[str, Any]:
        return {
            'x0': self.x0.to_list(),
            'y0': self.y0.to_list(),
            'attempts': self.attempts,
            'attempt': self.attempt,
            'seed': self.seed,
            'uncovered_history': self.uncovered_history,
            'certified': self.certified,
            'uncovered': self.uncovered.to_list(),
            'recheck_failures': self.recheck_failures,
        }


def draw_pair(group: FiniteGroup, x: SubsetMask, y: SubsetMask, x0: int, y0: int, seed: int, attempt: int) -> Tuple[SubsetMask, SubsetMask]:
    """
    The pair drawn by a given attempt.  Each side has its own substream, so the draw of a smaller
    size is a prefix of the draw of a larger one.
    """
    xs = partial_shuffle(substream(seed, attempt, 0), x.indices(), x0)
    ys = partial_shuffle(substream(seed, attempt, 1), y.indices(), y0)
    return group.mask(xs), group.mask(ys)


def sample_thin_pair(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: SubsetMask, x0: int, y0: int, seed: int = 0, max_attempts: int = 20, workers: int = 1, recheck_fraction: float = 0.01) -> ThinPairResult:
    """
    Draw random x0-subsets of X and y0-subsets of Y until one pair covers Z.  Attempts run in
    batches of `workers`, the lowest numbered certified attempt wins.  If none certifies, the
    attempt with the fewest uncovered elements is returned uncertified.
    """
    if not 0 <= x0 <= len(x) or not 0 <= y0 <= len(y):
        raise ThinBaseError(f'sample sizes ({x0}, {y0}) exceed the sets of sizes ({len(x)}, {len(y)})')

    def attempt_uncovered(attempt: int) -> Tuple[SubsetMask, SubsetMask, SubsetMask]:
        first, second = draw_pair(group, x, y, x0, y0, seed, attempt)
        return first, second, z - covered_by(group, first, second)

    # conjugation closed sides are decided class by class
    impossible = class_cover_check(group, x, y, z) if is_class_union(x) and is_class_union(y) else product_cover_check(group, x, y, z, workers)
    if not impossible.is_empty():
        logger.warning('{}: {} target elements are not in X.Y, no thinning can cover them', group.name, len(impossible))
        first, second, uncovered = attempt_uncovered(0)
        return ThinPairResult(first, second, 1, seed, [len(uncovered)], uncovered, 0)

    history: List[int] = []
    best = None
    attempt = 0
    while attempt < max_attempts:
        batch = list(range(attempt, min(max_attempts, attempt + max(1, workers))))
        if workers > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outcomes = list(executor.map(attempt_uncovered, batch))
        else:
            outcomes = [attempt_uncovered(k) for k in batch]

        for k, (first, second, uncovered) in zip(batch, outcomes):
            history.append(len(uncovered))
            logger.debug('{}: attempt {} leaves {} uncovered', group.name, k, len(uncovered))
            if best is None or len(uncovered) < len(best[2]):
                best = (first, second, uncovered, k)
            if uncovered.is_empty():
                result = ThinPairResult(first, second, k + 1, seed, history, uncovered, k)
                result.recheck_failures = spot_check(group, first, second, z, recheck_fraction, seed)
                if result.recheck_failures:
                    logger.error('{}: element recheck disagrees with the cover kernel on {}', group.name, result.recheck_failures)
                logger.success('{}: |X0| = {}, |Y0| = {} certified on attempt {}', group.name, x0, y0, k + 1)
                return result
        attempt = batch[-1] + 1

    logger.warning('{}: no certified pair in {} attempts, best leaves {} uncovered', group.name, max_attempts, len(best[2]))
    return ThinPairResult(best[0], best[1], max_attempts, seed, history, best[2], best[3])


def representation_pairs(group: FiniteGroup, targets: SubsetMask, w1: SubsetMask, w2: SubsetMask) -> Tuple[SubsetMask, SubsetMask]:
    """
    For every target z the pair z = xy with x in W1, y in W2 and x lowest, collected per side.
    """
    first = numpy.zeros(group.order, dtype=bool)
    second = numpy.zeros(group.order, dtype=bool)
    for z in targets:
        found = representations(group, w1, w2, z)
        if len(found) == 0:
            raise UncoverableError(f'{group.name}: element {z} is not a product of the two sets', z)
        a = int(found[0])
        first[a] = True
        second[group.mul(int(group.inv[a]), z)] = True
    return SubsetMask(group, first), SubsetMask(group, second)


def patch_cover(group: FiniteGroup, base: ThinPairResult, s1: SubsetMask, w1: SubsetMask, w2: SubsetMask, target: Optional[SubsetMask] = None) -> Tuple[SubsetMask, SubsetMask]:
    """
    Add to X0 and Y0 one representation z = xy (x in W1, y in W2, lowest x) of every z in S1, then
    certify that the target (default: the whole group) lies in the patched product.
    """
    patch1, patch2 = representation_pairs(group, s1, w1, w2)
    c1, c2 = base.x0 | patch1, base.y0 | patch2
    uncovered = product_cover_check(group, c1, c2, target if target is not None else group.full())
    if not uncovered.is_empty():
        witness = int(uncovered.indices()[0])
        raise UncoverableError(f'{group.name}: {len(uncovered)} elements remain uncovered after patching, first {witness}', witness)
    logger.debug('{}: patched {} elements, |C1| = {}, |C2| = {}', group.name, len(s1), len(c1), len(c2))
    return c1, c2


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class RandomRoot:
    root: SubsetMask
    sample: ThinPairResult
    side: int
    """
    Per side sample size, balanced_size capped at |G|.
    """

    verified: bool

    def __init__(self, root: SubsetMask, sample: ThinPairResult, side: int, verified: bool):
        self.root = root
        self.sample = sample
        self.side = side
        self.verified = verified

    def to_dict(self) -> Dict[str, Any]:
        return {'root': self.root.to_list(), 'size': len(self.root), 'side': self.side, 'bound': 2 * self.side, 'verified': self.verified, 'attempts': self.sample.attempts}


def random_square_root(group: FiniteGroup, seed: int = 0, c: float = 1.0, max_attempts: int = 20, workers: int = 1) -> RandomRoot:
    """
    R = X0 u Y0 from a balanced random pair covering G, patched if the sampler did not certify.
    """
    everything = group.full()
    side = group.order if group.order < 2 else min(group.order, balanced_size(group.order, c))
    sample = sample_thin_pair(group, everything, everything, everything, side, side, seed, max_attempts, workers)
    first, second = sample.x0, sample.y0
    if not sample.certified:
        first, second = patch_cover(group, sample, sample.uncovered, everything, everything)
    root = first | second
    verified = product_cover_check(group, root, root, everything, workers).is_empty()
    return RandomRoot(root, sample, side, verified)


def coverage_sweep(group: FiniteGroup, sizes: Sequence[int], x: Optional[SubsetMask] = None, y: Optional[SubsetMask] = None, z: Optional[SubsetMask] = None, seed: int = 0, attempts: int = 5) -> List[Dict[str, Any]]:
    """
    Mean covered fraction of Z over `attempts` draws at each size x0 = y0.  Draws at a smaller size
    are prefixes of those at a larger one, so the fractions are nondecreasing in size.
    """
    x = x if x is not None else group.full()
    y = y if y is not None else group.full()
    z = z if z is not None else group.full()
    rows = []
    for size in sizes:
        fractions = []
        certified = 0
        for attempt in range(attempts):
            first, second = draw_pair(group, x, y, min(size, len(x)), min(size, len(y)), seed, attempt)
            missed = len(z - covered_by(group, first, second))
            fractions.append(1 - missed / max(1, len(z)))
            certified += missed == 0
        rows.append({'size': int(size), 'mean_fraction': float(numpy.mean(fractions)), 'certified_attempts': certified, 'attempts': attempts})
        logger.info('{}: size {} covers {:.4f} of the target on average', group.name, size, rows[-1]['mean_fraction'])
    return rows
