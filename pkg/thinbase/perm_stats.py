"""
Cycle statistics of permutations, fixed point counts, and the stratified thin base of A_n.

For a permutation g of n points let sigma_i be the number of points on cycles of length at most i.
The exponents e_i are defined by n^(e_1 + ... + e_i) = max(1, sigma_i), and E(g) = sum of e_i / i.
The identity has E = 1 and an n-cycle has E = 1/n.

The stratified cover splits A_n by number of fixed points: elements with few fixed points are
covered by a random thin pair drawn from two large classes, elements with many fixed points are
patched one by one, and every fixed point set T in between gets its own pair drawn inside the
pointwise stabilizer of T.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy
from loguru import logger
from scipy.special import comb, gammaln

from thinbase.characters import CharacterTable, brute_force_count, frobenius_count
from thinbase.errors import GroupConstructionError, ThinBaseError
from thinbase.groups import FiniteGroup, SubsetMask, alternating_group, product_cover_check
from thinbase.seeds import substream
from thinbase.thin_base import ThinPairResult, representation_pairs, sample_thin_pair
from thinbase.words import DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_SAMPLE_FACTOR, FreeWord, word_image

MAX_EXACT_DEGREE = 20
MAX_STRATIFIED_DEGREE = 9

CycleType = Tuple[int, ...]


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class PermStat:
    n: int
    cycle_type: CycleType
    """
    Cycle lengths in decreasing order, fixed points included as 1s.
    """

    fixed_points: int
    sigma: numpy.ndarray
    """
    sigma[i - 1] = number of points on cycles of length at most i.
    """

    e_vec: numpy.ndarray
    E: float

    def __init__(self, n: int, cycle_type: CycleType, sigma: numpy.ndarray, e_vec: numpy.ndarray):
        self.n = n
        self.cycle_type = cycle_type
        self.fixed_points = cycle_type.count(1)
        self.sigma = sigma
        self.e_vec = e_vec
        self.E = float(numpy.sum(e_vec / numpy.arange(1, n + 1)))

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'cycle_type': list(self.cycle_type), 'fixed_points': self.fixed_points, 'sigma': self.sigma.tolist(), 'e': self.e_vec.tolist(), 'E': self.E}


def cycle_lengths(perm: Sequence[int]) -> CycleType:
    images = numpy.asarray(perm, dtype=numpy.int64)
    n = len(images)
    if not numpy.array_equal(numpy.sort(images), numpy.arange(n)):
        raise GroupConstructionError(f'not a permutation of 0..{n - 1}: {list(perm)}')
    seen = numpy.zeros(n, dtype=bool)
    lengths = []
    for start in range(n):
        length = 0
        point = start
        while not seen[point]:
            seen[point] = True
            point = int(images[point])
            length += 1
        if length:
            lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def perm_stat(perm: Sequence[int]) -> PermStat:
    lengths = cycle_lengths(perm)
    n = sum(lengths)
    if n < 2:
        raise ThinBaseError('cycle statistics need at least 2 points')
    points_by_length = numpy.bincount(numpy.asarray(lengths), weights=numpy.asarray(lengths), minlength=n + 1)[1:]
    sigma = numpy.cumsum(points_by_length).astype(numpy.int64)
    partial = numpy.log(numpy.maximum(1, sigma)) / numpy.log(n)
    e_vec = numpy.diff(partial, prepend=0.0)
    return PermStat(n, lengths, sigma, e_vec)


def cycle_length_matrix(perms: numpy.ndarray) -> numpy.ndarray:
    """
    For an (m, n) array of permutations, the length of the cycle through every point.
    """
    m, n = perms.shape
    start = numpy.broadcast_to(numpy.arange(n), (m, n))
    lengths = numpy.zeros((m, n), dtype=numpy.int64)
    current = start.copy()
    for k in range(1, n + 1):
        current = numpy.take_along_axis(perms, current, axis=1)
        lengths[(current == start) & (lengths == 0)] = k
    return lengths


def cycle_type_keys(perms: numpy.ndarray) -> numpy.ndarray:
    """
    One integer per permutation, equal exactly when cycle types are: the number of cycles of
    length l is the digit of weight (n + 1)^(l - 1).
    """
    perms = numpy.atleast_2d(numpy.asarray(perms, dtype=numpy.int64))
    n = perms.shape[1]
    lengths = cycle_length_matrix(perms)
    weights = numpy.power(numpy.int64(n + 1), numpy.arange(n + 1, dtype=numpy.int64))
    keys = numpy.zeros(len(lengths), dtype=numpy.int64)
    for length in range(1, n + 1):
        # a cycle of length l puts l points at that length
        cycles = numpy.count_nonzero(lengths == length, axis=1) // length
        keys += cycles * weights[length - 1]
    return keys


def key_cycle_type(key: int, n: int) -> CycleType:
    lengths = []
    for length in range(1, n + 1):
        lengths.extend([length] * ((key // (n + 1) ** (length - 1)) % (n + 1)))
    return tuple(sorted(lengths, reverse=True))


def sn_classes_in(group: FiniteGroup) -> List[Tuple[CycleType, SubsetMask]]:
    """
    Elements of a permutation group grouped by S_n cycle type, in order of first appearance.
    """
    if group.perm_images is None:
        raise GroupConstructionError(f'{group.name} is not a permutation group')
    keys = cycle_type_keys(group.perm_images)
    unique, first = numpy.unique(keys, return_index=True)
    return [(key_cycle_type(int(unique[i]), group.degree), SubsetMask(group, keys == unique[i])) for i in numpy.argsort(first)]


def fixed_point_counts(group: FiniteGroup) -> numpy.ndarray:
    return numpy.count_nonzero(group.perm_images == numpy.arange(group.degree), axis=1)


@lru_cache(maxsize=None)
def derangements(k: int) -> int:
    if k == 0:
        return 1
    if k == 1:
        return 0
    return (k - 1) * (derangements(k - 1) + derangements(k - 2))


def count_min_fixed(n: int, m: int) -> Tuple[int, int]:
    """
    Permutations of n points with at least m fixed points, and the bound 2 n!/m!.
    """
    if n > MAX_EXACT_DEGREE:
        raise ThinBaseError(f'exact counts are limited to n <= {MAX_EXACT_DEGREE}, found {n}')
    if not 0 <= m <= n:
        raise ThinBaseError(f'need 0 <= m <= n, found m={m}, n={n}')
    exact = sum(int(comb(n, i, exact=True)) * derangements(n - i) for i in range(m, n + 1))
    return exact, 2 * math.factorial(n) // math.factorial(m)


def count_min_fixed_in(group: FiniteGroup, m: int) -> int:
    return int(numpy.count_nonzero(fixed_point_counts(group) >= m))


@lru_cache(maxsize=None)
def cached_alternating_group(n: int) -> FiniteGroup:
    return alternating_group(n)


def __class_mask(group: FiniteGroup, cycle_type: Sequence[int]) -> SubsetMask:
    wanted = tuple(sorted(cycle_type, reverse=True))
    for found, mask in sn_classes_in(group):
        if found == wanted:
            return mask
    raise ThinBaseError(f'no elements of cycle type {wanted} in {group.name}')


def class_count_ratio(n: int, c1: Sequence[int], c2: Sequence[int], g: Sequence[int], table: Optional[CharacterTable] = None) -> float:
    """
    Representations of g as x1 x2 with x_i of cycle type c_i, divided by |C1||C2|/|A_n|.  The
    count is taken by brute force over A_n, or from an S_n character table whose classes carry
    cycle types.
    """
    group = cached_alternating_group(n)
    first, second = __class_mask(group, c1), __class_mask(group, c2)
    target = int(group.lookup(numpy.asarray([g]))[0])
    if table is None:
        count = brute_force_count(group, first, second, target)
    else:
        by_type = {info.cycle_type: i for i, info in enumerate(table.classes)}
        try:
            indices = [by_type[tuple(sorted(c, reverse=True))] for c in [c1, c2, cycle_lengths(g)]]
        except KeyError as error:
            raise ThinBaseError(f'{table.group_name} has no class of cycle type {error}') from error
        count = round(frobenius_count(table, *indices))
    return count * group.order / (len(first) * len(second))


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class InequalityReport:
    checked: int
    failures: List[Tuple[int, int]]
    worst_margin: float
    """
    Smallest rhs - lhs over all checked (n, m), in natural log units.
    """

    def __init__(self, checked: int, failures: List[Tuple[int, int]], worst_margin: float):
        self.checked = checked
        self.failures = failures
        self.worst_margin = worst_margin

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {'checked': self.checked, 'failures': self.failures, 'worst_margin': self.worst_margin, 'holds': self.holds}


def stratum_inequality_check(n_max: int = 200) -> InequalityReport:
    """
    C(n, m) sqrt((n - m)! / n!) < (e^2 n / m^2)^(m/2) for every integer m in [n^(2/3), 2n/3], in logs.
    """
    failures = []
    checked = 0
    worst = math.inf
    for n in range(2, n_max + 1):
        low = math.ceil(n ** (2 / 3) - 1e-12)
        for m in range(max(1, low), 2 * n // 3 + 1):
            lhs = gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1) + (gammaln(n - m + 1) - gammaln(n + 1)) / 2
            rhs = m / 2 * math.log(math.e**2 * n / m**2)
            checked += 1
            worst = min(worst, rhs - lhs)
            if not lhs < rhs:
                failures.append((n, m))
    return InequalityReport(checked, failures, float(worst))


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class StratumReport:
    name: str
    fixed: List[int]
    """
    The fixed point set T, empty for the low fixed point part and the tail.
    """

    target: int
    classes: Optional[Tuple[CycleType, CycleType]]
    size_x: int
    size_y: int
    attempts: int
    certified: bool
    """
    The random pair alone covered the target.
    """

    leftovers: int
    """
    Target elements patched individually.
    """

    def __init__(self, name: str, fixed: List[int], target: int, classes: Optional[Tuple[CycleType, CycleType]], size_x: int, size_y: int, attempts: int, certified: bool, leftovers: int):
        self.name = name
        self.fixed = fixed
        self.target = target
        self.classes = classes
        self.size_x = size_x
        self.size_y = size_y
        self.attempts = attempts
        self.certified = certified
        self.leftovers = leftovers

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'fixed': self.fixed,
            'target': self.target,
            'classes': [list(c) for c in self.classes] if self.classes else None,
            'size_x': self.size_x,
            'size_y': self.size_y,
            'attempts': self.attempts,
            'certified': self.certified,
            'leftovers': self.leftovers,
        }


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class StratifiedResult:
    x: SubsetMask
    y: SubsetMask
    certified: bool
    """
    XY = A_n by the covering kernel, with X in w1(A_n) and Y in w2(A_n).
    """

    parts: List[StratumReport]
    exact_images: bool

    def __init__(self, x: SubsetMask, y: SubsetMask, certified: bool, parts: List[StratumReport], exact_images: bool):
        self.x = x
        self.y = y
        self.certified = certified
        self.parts = parts
        self.exact_images = exact_images

    @property
    def scale(self) -> float:
        """
        sqrt(n! ln n!) for the degree of the group.
        """
        log_factorial = float(gammaln(self.x.group.degree + 1))
        return math.sqrt(math.exp(log_factorial) * log_factorial)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.x.group.name,
            'size_x': len(self.x),
            'size_y': len(self.y),
            'ratio_x': len(self.x) / self.scale,
            'ratio_y': len(self.y) / self.scale,
            'scale': self.scale,
            'certified': self.certified,
            'exact_images': self.exact_images,
            'parts': [part.to_dict() for part in self.parts],
        }


def __choose_class(classes: List[Tuple[CycleType, SubsetMask]], allowed: SubsetMask) -> Optional[Tuple[CycleType, SubsetMask]]:
    """
    Fewest cycles (fixed points counted), ties broken by largest intersection with allowed.
    """
    best = None
    for cycle_type, mask in classes:
        inside = mask & allowed
        if inside.is_empty() or cycle_type.count(1) == len(cycle_type):
            continue
        rank = (len(cycle_type), -len(inside))
        if best is None or rank < best[0]:
            best = (rank, cycle_type, inside)
    return None if best is None else (best[1], best[2])


def __thin_size(order: int, size_factor: float) -> int:
    if order < 2:
        return 1
    return max(1, math.ceil(size_factor * math.sqrt(order * math.log(order))))


def __cover_part(group: FiniteGroup, name: str, fixed: List[int], target: SubsetMask, classes: List[Tuple[CycleType, SubsetMask]], w1: SubsetMask, w2: SubsetMask, allowed: SubsetMask, thin_order: int, size_factor: float, seed: int, max_attempts: int, workers: int) -> Tuple[SubsetMask, SubsetMask, StratumReport]:
    first = __choose_class(classes, w1 & allowed)
    second = __choose_class(classes, w2 & allowed)
    if first is None or second is None:
        c1, c2 = representation_pairs(group, target, w1, w2)
        return c1, c2, StratumReport(name, fixed, len(target), None, len(c1), len(c2), 0, False, len(target))

    size = __thin_size(thin_order, size_factor)
    x0, y0 = min(size, len(first[1])), min(size, len(second[1]))
    result: ThinPairResult = sample_thin_pair(group, first[1], second[1], target, x0, y0, seed, max_attempts, workers)
    leftovers = result.uncovered
    c1, c2 = representation_pairs(group, leftovers, w1, w2)
    report = StratumReport(name, fixed, len(target), (first[0], second[0]), len(result.x0 | c1), len(result.y0 | c2), result.attempts, result.certified, len(leftovers))
    return result.x0 | c1, result.y0 | c2, report


def stratified_thin_base(n: int, w1: FreeWord, w2: FreeWord, seed: int = 0, size_factor: float = 2.0, max_attempts: int = 20, workers: int = 1, exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET, sample_factor: int = DEFAULT_SAMPLE_FACTOR) -> StratifiedResult:
    if not 5 <= n <= MAX_STRATIFIED_DEGREE:
        raise ThinBaseError(f'stratified covers are built for 5 <= n <= {MAX_STRATIFIED_DEGREE}, found {n}')
    group = cached_alternating_group(n)
    images = []
    for word in [w1, w2]:
        mode = 'exhaustive' if group.order**word.rank <= exhaustive_budget else 'sampled'
        images.append(word_image(group, word, mode, seed=seed, workers=workers, exhaustive_budget=exhaustive_budget, sample_factor=sample_factor))
    image1, image2 = images[0].image, images[1].image

    classes = sn_classes_in(group)
    fixed = fixed_point_counts(group)
    fixmask = (group.perm_images == numpy.arange(n)) @ (numpy.int64(1) << numpy.arange(n, dtype=numpy.int64))
    low = n ** (2 / 3)
    tail_start = math.ceil(2 * n / 3)
    parts = []

    x_bits = numpy.zeros(group.order, dtype=bool)
    y_bits = numpy.zeros(group.order, dtype=bool)

    target = SubsetMask(group, fixed <= low)
    c1, c2, report = __cover_part(group, 'low', [], target, classes, image1, image2, group.full(), group.order, size_factor, seed, max_attempts, workers)
    x_bits |= c1.bits
    y_bits |= c2.bits
    parts.append(report)

    tail = SubsetMask(group, fixed >= tail_start)
    c1, c2 = representation_pairs(group, tail, image1, image2)
    x_bits |= c1.bits
    y_bits |= c2.bits
    parts.append(StratumReport('tail', [], len(tail), None, len(c1), len(c2), 0, False, len(tail)))

    for t in range(math.floor(low) + 1, tail_start):
        for points in combinations(range(n), t):
            t_mask = sum(1 << p for p in points)
            stratum = SubsetMask(group, fixmask == t_mask)
            if stratum.is_empty():
                continue
            stabilizer = SubsetMask(group, (fixmask & t_mask) == t_mask)
            stratum_seed = int(substream(seed, 1, t_mask).integers(0, 2**62))
            thin_order = math.factorial(n - t) // 2
            c1, c2, report = __cover_part(group, f'T{list(points)}', list(points), stratum, classes, image1, image2, stabilizer, thin_order, size_factor, stratum_seed, max_attempts, workers)
            x_bits |= c1.bits
            y_bits |= c2.bits
            parts.append(report)

    x, y = SubsetMask(group, x_bits), SubsetMask(group, y_bits)
    certified = product_cover_check(group, x, y, group.full(), workers).is_empty() and x <= image1 and y <= image2
    if certified:
        logger.success('{}: stratified cover with |X| = {}, |Y| = {} over {} parts', group.name, len(x), len(y), len(parts))
    else:
        logger.error('{}: stratified cover failed certification', group.name)
    return StratifiedResult(x, y, certified, parts, images[0].exact and images[1].exact)
