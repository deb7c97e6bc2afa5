"""
Packing numbers, Minkowski dimension estimates, and square roots of the circle and tori.

Sets are finite unions of closed intervals with integer endpoints over a common denominator, so
every packing count and cover check is exact.  The Cantor pair

    A = { -a_0 + sum a_i 4^-i : a_i in {0, 1} },   B = { sum b_i 4^-i : b_i in {0, 2} }

satisfies A + B = [-1, 1], each of dimension 1/2.  Truncated at depth k the digit sums are kept as
points and each point is widened by the largest possible tail (4^-k / 3 for A, 2 4^-k / 3 for B),
which keeps the sumset identity exact at every depth.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy
from loguru import logger
from scipy.stats import linregress

from thinbase.errors import GridBudgetError, ThinBaseError

DEFAULT_MAX_DEPTH = 12
DEFAULT_MAX_GRID_POINTS = 10_000_000

Number = Union[int, float, Fraction]


class IntervalSet:
    """
    Sorted, disjoint closed intervals [starts[i], ends[i]] / denominator.  Touching intervals merge.
    """

    starts: numpy.ndarray
    ends: numpy.ndarray
    denominator: int
    depth: int
    """
    Digit depth the set was truncated at, 0 for sets that are not truncations.
    """

    def __init__(self, starts: Sequence[int], ends: Sequence[int], denominator: int, depth: int = 0):
        starts = numpy.asarray(starts, dtype=numpy.int64).ravel()
        ends = numpy.asarray(ends, dtype=numpy.int64).ravel()
        if len(starts) == 0:
            raise ThinBaseError('interval sets must not be empty')
        if (ends < starts).any():
            raise ThinBaseError('interval ends before it starts')
        order = numpy.argsort(starts, kind='stable')
        starts, ends = starts[order], ends[order]
        reach = numpy.maximum.accumulate(ends)
        fresh = numpy.ones(len(starts), dtype=bool)
        fresh[1:] = starts[1:] > reach[:-1]
        first = numpy.flatnonzero(fresh)
        self.starts = starts[first]
        self.ends = numpy.maximum.reduceat(ends, first)
        self.denominator = int(denominator)
        self.depth = depth

    @classmethod
    def from_fractions(cls, intervals: Sequence[Tuple[Number, Number]], depth: int = 0) -> 'IntervalSet':
        bounds = [(Fraction(lo), Fraction(hi)) for lo, hi in intervals]
        denominator = math.lcm(*[value.denominator for pair in bounds for value in pair])
        starts = [int(lo * denominator) for lo, _ in bounds]
        ends = [int(hi * denominator) for _, hi in bounds]
        return cls(starts, ends, denominator, depth)

    @classmethod
    def points(cls, values: Sequence[Number]) -> 'IntervalSet':
        return cls.from_fractions([(value, value) for value in values])

    def fractions(self) -> List[Tuple[Fraction, Fraction]]:
        return [(Fraction(int(s), self.denominator), Fraction(int(e), self.denominator)) for s, e in zip(self.starts, self.ends)]

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def length(self) -> Fraction:
        return Fraction(int((self.ends - self.starts).sum()), self.denominator)

    @property
    def bounds(self) -> Tuple[Fraction, Fraction]:
        return Fraction(int(self.starts[0]), self.denominator), Fraction(int(self.ends[-1]), self.denominator)

    def rescaled(self, denominator: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """
        Numerators over a multiple of this set's denominator.
        """
        factor = denominator // self.denominator
        if factor * self.denominator != denominator:
            raise ThinBaseError(f'{denominator} is not a multiple of {self.denominator}')
        return self.starts * factor, self.ends * factor

    def halved(self) -> 'IntervalSet':
        return IntervalSet(self.starts, self.ends, 2 * self.denominator, self.depth)

    def mod_one(self) -> 'IntervalSet':
        """
        The image in R/Z, as intervals inside [0, 1].
        """
        den = self.denominator
        if (self.ends - self.starts >= den).any():
            return IntervalSet([0], [den], den, self.depth)
        shift = numpy.floor_divide(self.starts, den) * den
        starts, ends = self.starts - shift, self.ends - shift
        wraps = ends > den
        return IntervalSet(numpy.concatenate([starts, numpy.zeros(wraps.sum(), dtype=numpy.int64)]), numpy.concatenate([numpy.minimum(ends, den), ends[wraps] - den]), den, self.depth)

    def to_dict(self) -> Dict[str, Any]:
        return {'denominator': self.denominator, 'depth': self.depth, 'intervals': [[int(s), int(e)] for s, e in zip(self.starts, self.ends)]}

    def __repr__(self):
        return f'IntervalSet({len(self)} intervals over {self.denominator}, depth {self.depth})'


Shape = Union[IntervalSet, Sequence[Number]]
Run = Tuple[Fraction, int]


def as_interval_set(shape: Shape) -> IntervalSet:
    return shape if isinstance(shape, IntervalSet) else IntervalSet.points(shape)


def cantor_sets(depth: int, max_depth: int = DEFAULT_MAX_DEPTH) -> Tuple[IntervalSet, IntervalSet]:
    """
    Truncations of A (digits {0, 1}, offset -a_0) and B (digits {0, 2}) at the given depth, over the
    denominator 3 4^depth.
    """
    if not 1 <= depth <= max_depth:
        raise ThinBaseError(f'depth must lie in 1..{max_depth}, found {depth}')
    scale = 4**depth
    weights = numpy.array([4 ** (depth - i) for i in range(1, depth + 1)], dtype=numpy.int64)
    digits = numpy.array(list(product([0, 1], repeat=depth)), dtype=numpy.int64).reshape(-1, depth)
    sums = digits @ weights
    a_points = numpy.concatenate([sums - scale, sums])
    b_points = 2 * sums
    first = IntervalSet(3 * a_points, 3 * a_points + 1, 3 * scale, depth)
    second = IntervalSet(3 * b_points, 3 * b_points + 2, 3 * scale, depth)
    logger.debug('cantor sets at depth {}: {} and {} intervals', depth, len(first), len(second))
    return first, second


def sumset(first: IntervalSet, second: IntervalSet) -> IntervalSet:
    denominator = math.lcm(first.denominator, second.denominator)
    a_starts, a_ends = first.rescaled(denominator)
    b_starts, b_ends = second.rescaled(denominator)
    return IntervalSet(numpy.add.outer(a_starts, b_starts).ravel(), numpy.add.outer(a_ends, b_ends).ravel(), denominator, max(first.depth, second.depth))


def __greedy(intervals: List[Tuple[Fraction, Fraction]], delta: Fraction, low: Fraction, high: Fraction, open_high: bool = False) -> List[Run]:
    """
    Leftmost greedy centers in the set, inside [low, high] (or [low, high) with open_high), pairwise
    at least 2 delta apart, as runs (first center, count) spaced 2 delta inside one interval.
    """
    spacing = 2 * delta
    runs: List[Run] = []
    candidate = low
    for start, end in intervals:
        end = min(end, high)
        candidate = max(candidate, start)
        if candidate > end:
            continue
        steps = math.floor((end - candidate) / spacing) + 1
        if open_high and candidate + spacing * (steps - 1) >= high:
            steps -= 1
        if steps <= 0:
            continue
        runs.append((candidate, steps))
        candidate += spacing * steps
    return runs


def __run_last(run: Run, delta: Fraction) -> Fraction:
    return run[0] + 2 * delta * (run[1] - 1)


def __count(runs: List[Run]) -> int:
    return sum(steps for _, steps in runs)


def packing_centers(shape: Shape, delta: Number, within_hull: bool = True) -> List[Run]:
    """
    Centers of the greedy packing counted by packing_number, as runs (first center, count) with
    consecutive centers 2 delta apart.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ThinBaseError(f'delta must be positive, found {delta}')
    intervals = as_interval_set(shape).fractions()
    low, high = intervals[0][0], intervals[-1][1]
    if within_hull:
        low, high = low + delta, high - delta
    return __greedy(intervals, delta, low, high)


def packing_number(shape: Shape, delta: Number, within_hull: bool = True) -> int:
    """
    Greedy left to right packing of disjoint open delta balls with centers in the set, optimal on
    the line.  With within_hull the centers keep delta away from the set's extremes, the
    convention under which [-1, 1] holds floor(1/delta) balls.  The count is at least 1.
    """
    return max(1, __count(packing_centers(shape, delta, within_hull)))


def circle_packing_number(shape: Shape, delta: Number) -> int:
    """
    Packing number of a subset of R/Z given inside [0, 1], with distances taken around the circle.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ThinBaseError(f'delta must be positive, found {delta}')
    intervals = as_interval_set(shape).fractions()
    runs = __greedy(intervals, delta, intervals[0][0], Fraction(1), open_high=True)
    count = __count(runs)
    if count > 1 and runs[0][0] + 1 - __run_last(runs[-1], delta) < 2 * delta:
        count -= 1
    return max(1, count)


def is_packing(shape: Shape, runs: List[Run], delta: Number) -> bool:
    """
    Every center lies in the set and distinct centers are at least 2 delta apart, so the open delta
    balls around them are disjoint.
    """
    delta = Fraction(delta)
    intervals = as_interval_set(shape).fractions()
    starts = [start for start, _ in intervals]
    previous = None
    for run in runs:
        first, last = run[0], __run_last(run, delta)
        if run[1] < 1:
            return False
        at = bisect_right(starts, first) - 1
        if at < 0 or last > intervals[at][1]:
            return False
        if previous is not None and first - previous < 2 * delta:
            return False
        previous = last
    return True


def __distance(point: Fraction, runs: List[Run], firsts: List[Fraction], delta: Fraction) -> Fraction:
    at = bisect_right(firsts, point) - 1
    distances = []
    if at >= 0:
        first, steps = runs[at]
        offset = point - first
        if offset >= 2 * delta * (steps - 1):
            distances.append(offset - 2 * delta * (steps - 1))
        else:
            offset %= 2 * delta
            distances.append(min(offset, 2 * delta - offset))
    if at + 1 < len(runs):
        distances.append(runs[at + 1][0] - point)
    return min(distances)


def cover_radius(shape: Shape, runs: List[Run], delta: Number) -> Fraction:
    """
    Exact largest distance from a point of the set to the nearest center.  The distance to the
    centers peaks only at interval ends and at midpoints between consecutive centers.
    """
    if not runs:
        raise ThinBaseError('no centers to cover the set with')
    delta = Fraction(delta)
    intervals = as_interval_set(shape).fractions()
    firsts = [first for first, _ in runs]
    starts = [start for start, _ in intervals]
    radius = max(__distance(point, runs, firsts, delta) for interval in intervals for point in interval)
    if any(steps > 1 for _, steps in runs):
        radius = max(radius, delta)
    for left, right in zip(runs, runs[1:]):
        middle = (__run_last(left, delta) + right[0]) / 2
        at = bisect_right(starts, middle) - 1
        if at >= 0 and middle <= intervals[at][1]:
            radius = max(radius, middle - __run_last(left, delta))
    return radius


def cover_radius_bound(shape: Shape, delta: Number) -> Fraction:
    """
    Distance from the set to the centers of its unrestricted greedy delta packing.
    """
    return cover_radius(shape, packing_centers(shape, delta, within_hull=False), delta)


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class CoverCheck:
    covered: bool
    worst_gap: Fraction
    """
    Largest distance from a target point to the sumset.
    """

    tolerance: Fraction

    def __init__(self, covered: bool, worst_gap: Fraction, tolerance: Fraction):
        self.covered = covered
        self.worst_gap = worst_gap
        self.tolerance = tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {'covered': self.covered, 'worst_gap': float(self.worst_gap), 'tolerance': float(self.tolerance)}


def __worst_gap(union: IntervalSet, low: Fraction, high: Fraction, circle: bool) -> Fraction:
    intervals = union.fractions()
    gaps: List[Tuple[Optional[Fraction], Optional[Fraction]]] = []
    for (_, end), (start, _) in zip(intervals, intervals[1:]):
        gaps.append((end, start))
    if circle:
        gaps.append((intervals[-1][1], intervals[0][0] + 1))
        low, high = intervals[0][0], intervals[0][0] + 1
    else:
        gaps.append((None, intervals[0][0]))
        gaps.append((intervals[-1][1], None))

    worst = Fraction(0)
    for left, right in gaps:
        a = low if left is None else max(low, left)
        b = high if right is None else min(high, right)
        if a > b:
            continue
        if left is not None and right is not None:
            middle = (left + right) / 2
            points = [a, b] + ([middle] if a <= middle <= b else [])
        else:
            points = [a, b]
        for t in points:
            distances = ([t - left] if left is not None else []) + ([right - t] if right is not None else [])
            worst = max(worst, min(distances))
    return worst


def sumset_cover_check(first: IntervalSet, second: IntervalSet, target: Tuple[Number, Number] = (-1, 1), tolerance: Number = 0, circle: bool = False) -> CoverCheck:
    """
    Whether every point of the target interval (or of R/Z with circle) lies within tolerance of
    first + second.
    """
    union = sumset(first, second)
    if circle:
        union = union.mod_one()
    worst = __worst_gap(union, Fraction(target[0]), Fraction(target[1]), circle)
    tolerance = Fraction(tolerance)
    return CoverCheck(worst <= tolerance, worst, tolerance)


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class DimensionEstimate:
    scales: List[float]
    packing_counts: List[int]
    slope: float
    """
    Least squares slope of log N against -log delta over the scale window.
    """

    intercept: float
    residuals: List[float]
    ratios: List[float]
    """
    -log N / log delta at each scale.
    """

    def __init__(self, scales: List[float], packing_counts: List[int]):
        self.scales = scales
        self.packing_counts = packing_counts
        x = -numpy.log(numpy.asarray(scales, dtype=float))
        y = numpy.log(numpy.asarray(packing_counts, dtype=float))
        fit = linregress(x, y)
        self.slope = float(fit.slope)
        self.intercept = float(fit.intercept)
        self.residuals = (y - (fit.intercept + fit.slope * x)).tolist()
        self.ratios = (y / x).tolist()

    def to_dict(self) -> Dict[str, Any]:
        return {'scales': self.scales, 'counts': self.packing_counts, 'slope': self.slope, 'intercept': self.intercept, 'residuals': self.residuals, 'ratios': self.ratios}


def estimate_dimension(shape: Shape, scales: Sequence[Number], circle: bool = False) -> DimensionEstimate:
    if len(scales) < 2:
        raise ThinBaseError('a dimension estimate needs at least two scales')
    ordered = sorted((Fraction(s) for s in scales), reverse=True)
    count = circle_packing_number if circle else packing_number
    return DimensionEstimate([float(s) for s in ordered], [count(shape, s) for s in ordered])


def quaternary_scales(first: int, last: int, factor: Number = 1) -> List[Fraction]:
    """
    factor * 4^-j for j in first..last.
    """
    return [Fraction(factor) / 4**j for j in range(first, last + 1)]


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class ProductScale:
    delta: float
    n_x: int
    n_y: int
    product_packing: int
    """
    Size of an explicit delta packing of X x Y in the sup metric, 0 when its centers fail the check.
    """

    product_packing_4: int
    """
    Same at 4 delta, a lower bound on N_4delta(X x Y).
    """

    cover_cells: int
    cover_radius: float
    """
    Every point of X x Y lies within this sup distance of one of the cover_cells product centers.
    """

    lower_holds: bool
    upper_holds: bool

    def __init__(self, delta: Fraction, n_x: int, n_y: int, product_packing: int, product_packing_4: int, cover_cells: int, cover_radius: Fraction):
        self.delta = float(delta)
        self.n_x = n_x
        self.n_y = n_y
        self.product_packing = product_packing
        self.product_packing_4 = product_packing_4
        self.cover_cells = cover_cells
        self.cover_radius = float(cover_radius)
        self.lower_holds = product_packing >= n_x * n_y
        # two centers 8 delta apart never share a cell of sup radius below 4 delta
        self.upper_holds = cover_radius < 4 * delta and product_packing_4 <= cover_cells <= n_x * n_y

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta': self.delta,
            'n_x': self.n_x,
            'n_y': self.n_y,
            'product_packing': self.product_packing,
            'product_packing_4': self.product_packing_4,
            'cover_cells': self.cover_cells,
            'cover_radius': self.cover_radius,
            'lower_holds': self.lower_holds,
            'upper_holds': self.upper_holds,
        }


def product_packing(first: Shape, second: Shape, delta: Number) -> Tuple[int, List[Run], List[Run]]:
    """
    The product of the greedy delta packings of both factors.  Distinct product centers differ by
    at least 2 delta in some coordinate, so once both factors check out the product is a sup metric
    packing of X x Y.  Returns its size, 0 if a factor fails, and the factor centers.
    """
    delta = Fraction(delta)
    x_runs = packing_centers(first, delta, within_hull=False)
    y_runs = packing_centers(second, delta, within_hull=False)
    valid = is_packing(first, x_runs, delta) and is_packing(second, y_runs, delta)
    return (__count(x_runs) * __count(y_runs) if valid else 0), x_runs, y_runs


def product_dim_inequality_check(first: Shape, second: Shape, scales: Sequence[Number]) -> List[ProductScale]:
    """
    Both sides of N_delta(X) N_delta(Y) <= N_delta(X x Y) and N_4delta(X x Y) <= N_delta(X) N_delta(Y)
    in the sup metric, with packings taken without the hull restriction.  The lower side builds and
    checks a packing of X x Y.  The upper side covers X x Y with sup balls around the product
    centers and checks their exact radius stays below 4 delta, which bounds N_4delta(X x Y) by the
    number of cells.
    """
    rows = []
    for delta in scales:
        delta = Fraction(delta)
        size, x_runs, y_runs = product_packing(first, second, delta)
        size_4, _, _ = product_packing(first, second, 4 * delta)
        radius = max(cover_radius(first, x_runs, delta), cover_radius(second, y_runs, delta))
        row = ProductScale(
            delta,
            packing_number(first, delta, within_hull=False),
            packing_number(second, delta, within_hull=False),
            size,
            size_4,
            __count(x_runs) * __count(y_runs),
            radius,
        )
        if not (row.lower_holds and row.upper_holds):
            logger.warning('product packing inequality not certified at delta = {}', float(delta))
        rows.append(row)
    return rows


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class LowerBoundCheck:
    dim_x: float
    dim_y: float
    ambient: float
    holds: bool

    def __init__(self, dim_x: float, dim_y: float, ambient: float, tolerance: float):
        self.dim_x = dim_x
        self.dim_y = dim_y
        self.ambient = ambient
        self.holds = dim_x + dim_y >= ambient - tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {'dim_x': self.dim_x, 'dim_y': self.dim_y, 'ambient': self.ambient, 'holds': self.holds}


def dimension_lower_bound(dim_x: Union[float, DimensionEstimate], dim_y: Union[float, DimensionEstimate], ambient: float, tolerance: float = 0.05) -> LowerBoundCheck:
    """
    If X + Y covers a space of dimension D then dim X + dim Y >= D, checked on estimates.
    """
    slopes = [d.slope if isinstance(d, DimensionEstimate) else float(d) for d in [dim_x, dim_y]]
    return LowerBoundCheck(slopes[0], slopes[1], ambient, tolerance)


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class TorusRoot:
    d: int
    depth: int
    coordinates: List[Tuple[str, str]]
    """
    Kind of the X and Y factor in each coordinate: circle, point, cantor-a or cantor-b.
    """

    x_factors: List[IntervalSet]
    y_factors: List[IntervalSet]
    certified: bool
    worst_gap: Fraction
    grid_points: int
    resolution: int
    """
    Grid points per coordinate the cover was certified on.
    """

    dim_x: float
    dim_y: float
    estimates: List[Tuple[DimensionEstimate, DimensionEstimate]]

    def __init__(self, d: int, depth: int, coordinates: List[Tuple[str, str]], x_factors: List[IntervalSet], y_factors: List[IntervalSet]):
        self.d = d
        self.depth = depth
        self.coordinates = coordinates
        self.x_factors = x_factors
        self.y_factors = y_factors
        self.certified = False
        self.worst_gap = Fraction(0)
        self.grid_points = 0
        self.resolution = 0
        self.dim_x = 0.0
        self.dim_y = 0.0
        self.estimates = []

    def to_dict(self) -> Dict[str, Any]:
        return {
            'd': self.d,
            'depth': self.depth,
            'coordinates': [list(kinds) for kinds in self.coordinates],
            'certified': self.certified,
            'worst_gap': float(self.worst_gap),
            'grid_points': self.grid_points,
            'resolution': self.resolution,
            'dim_x': self.dim_x,
            'dim_y': self.dim_y,
            'estimates': [[x.to_dict(), y.to_dict()] for x, y in self.estimates],
        }


def __grid_covered(first: IntervalSet, second: IntervalSet, resolution: int) -> bool:
    """
    Every point j / resolution of R/Z lies in first + second.
    """
    union = sumset(first, second).mod_one()
    denominator = math.lcm(union.denominator, resolution)
    starts, ends = union.rescaled(denominator)
    grid = numpy.arange(resolution, dtype=numpy.int64) * (denominator // resolution)
    position = numpy.searchsorted(starts, grid, side='right') - 1
    inside = (position >= 0) & (grid <= ends[numpy.maximum(position, 0)])
    # a point at 0 is also reached by an interval ending at 1
    inside |= (grid == 0) & (ends[-1] == denominator)
    return bool(inside.all())


def torus_square_root(d: int, depth: int, max_grid_points: int = DEFAULT_MAX_GRID_POINTS, max_depth: int = DEFAULT_MAX_DEPTH, window: Optional[Tuple[int, int]] = None, grid_base: int = 2) -> TorusRoot:
    """
    X, Y in the torus R^d/Z^d with X + Y everything and both of dimension d/2.  Half of the
    coordinates are full circles in X and points in Y, the other half the reverse, and for odd d
    the middle coordinate carries A/2 in X and B/2 in Y.  The cover is certified coordinate by
    coordinate, exactly and on the grid of resolution grid_base^-depth with grid_base 2 or 4, and
    dimensions are estimated at scales 4^-j / 2.
    """
    if d < 1:
        raise ThinBaseError(f'dimension must be at least 1, found {d}')
    if depth < 2:
        raise ThinBaseError(f'depth must be at least 2 to estimate dimensions, found {depth}')
    if grid_base not in (2, 4):
        raise ThinBaseError(f'grid base must be 2 or 4, found {grid_base}')
    grid_points = (grid_base**depth) ** d
    if grid_points > max_grid_points:
        raise GridBudgetError(f'grid of {grid_points} points at depth {depth} in dimension {d} exceeds the budget of {max_grid_points}')

    circle = IntervalSet([0], [1], 1)
    point = IntervalSet([0], [0], 1)
    half = d // 2
    coordinates, x_factors, y_factors = [], [], []
    for i in range(d):
        if d % 2 and i == half:
            a, b = cantor_sets(depth, max_depth)
            coordinates.append(('cantor-a', 'cantor-b'))
            x_factors.append(a.halved().mod_one())
            y_factors.append(b.halved().mod_one())
        elif i < half:
            coordinates.append(('circle', 'point'))
            x_factors.append(circle)
            y_factors.append(point)
        else:
            coordinates.append(('point', 'circle'))
            x_factors.append(point)
            y_factors.append(circle)

    root = TorusRoot(d, depth, coordinates, x_factors, y_factors)
    root.grid_points = grid_points
    root.resolution = grid_base**depth
    certified = True
    for first, second in zip(x_factors, y_factors):
        check = sumset_cover_check(first, second, (0, 1), 0, circle=True)
        root.worst_gap = max(root.worst_gap, check.worst_gap)
        certified = certified and check.covered and __grid_covered(first, second, root.resolution)
    root.certified = certified

    low, high = window or (max(1, depth - 6), depth)
    scales = quaternary_scales(low, high, Fraction(1, 2))
    root.estimates = [(estimate_dimension(first, scales, circle=True), estimate_dimension(second, scales, circle=True)) for first, second in zip(x_factors, y_factors)]
    root.dim_x = sum(x.slope for x, _ in root.estimates)
    root.dim_y = sum(y.slope for _, y in root.estimates)
    if certified:
        logger.success('torus of dimension {}: cover certified at depth {}, dims {:.3f} and {:.3f}', d, depth, root.dim_x, root.dim_y)
    else:
        logger.error('torus of dimension {}: cover failed at depth {}', d, depth)
    return root
