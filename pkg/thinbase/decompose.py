"""
Deterministic factorizations G = XY with |X| <= x and |Y| <= 2|G|/x, and square roots R.R = G with
|R| <= sqrt(8|G|).

The recursion works on whichever of the following applies first: a subgroup H with x/2 <= |H| (use
it directly, or recurse into it when |H| > x), a normal subgroup N with |N| < x/2 (recurse into
G/N), or a group of prime order (explicit residue sets).  Every certificate is verified by the
covering kernel before it is returned.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy
from loguru import logger

from thinbase.errors import DecompositionStuckError, ThinBaseError
from thinbase.groups import FiniteGroup, SubsetMask, find_large_subgroup, normal_subgroups, product_cover_check, quotient, right_coset_representatives, subgroup_as_group
from thinbase.groups.subgroups import DEFAULT_CLASS_UNION_LIMIT, DEFAULT_PAIR_BUDGET


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def largest_root(m: int) -> float:
    """
    Largest float whose square is at most m, exactly.
    """
    root = math.sqrt(m)
    while Fraction(root) ** 2 > m:
        root = math.nextafter(root, 0)
    return root


def within_bounds(order: int, x: float, size_x: int, size_y: int) -> bool:
    """
    |X| <= x and |Y| <= 2 order / x, in exact rational arithmetic on the binary value of x.
    """
    target = Fraction(x)
    return size_x <= target and size_y * target <= 2 * order


def __sizes_fit(p: int, x: float, first: List[int], second: List[int]) -> bool:
    return within_bounds(p, x, len(first), len(second))


def __direct(p: int, x: float) -> Tuple[List[int], List[int]]:
    a = min(p, math.floor(x))
    b = -(-p // a)
    return list(range(a)), [j * a for j in range(b)]


def cyclic_decompose(p: int, x: float) -> Tuple[List[int], List[int]]:
    """
    X + Y = Z/p with |X| <= x and |Y| <= 2p/x, as residue lists.

    x >= p takes all of Z/p against {0}; x >= (p+1)/2 takes the even residues against {0, 1};
    otherwise X = {0..a-1}, Y = multiples of a = floor(x).  If that misses the bounds the same
    construction for 2p/x is built and the sides swapped.
    """
    if not is_prime(p):
        raise ThinBaseError(f'{p} is not prime')
    if not 2 <= x <= p:
        raise ThinBaseError(f'need 2 <= x <= {p}, found {x}')

    candidates = []
    if x >= p:
        candidates.append((list(range(p)), [0]))
    if 2 * Fraction(x) >= p + 1:
        candidates.append((list(range(0, p, 2)), [0, 1]))
    candidates.append(__direct(p, x))
    mirror = 2 * p / x
    if mirror >= 2:
        first, second = __direct(p, mirror)
        candidates.append((second, first))

    for first, second in candidates:
        covered = numpy.zeros(p, dtype=bool)
        covered[numpy.add.outer(first, second).ravel() % p] = True
        if covered.all() and __sizes_fit(p, x, first, second):
            return first, second

    raise ThinBaseError(f'no residue construction for p = {p}, x = {x} meets the bounds')


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class DecompositionStep:
    case: str
    """
    One of trivial, full, a, a', b, abelian, simple-max.
    """

    group: str
    order: int
    x: float
    """
    The target the step worked with, after any mirroring.
    """

    mirrored: bool
    """
    The caller asked for 2 order / x, the step's result was inverted and swapped.
    """

    depth: int
    subgroup_order: Optional[int]
    quotient_order: Optional[int]

    def __init__(self, case: str, group: FiniteGroup, x: float, depth: int, mirrored: bool = False, subgroup_order: Optional[int] = None, quotient_order: Optional[int] = None):
        self.case = case
        self.group = group.name
        self.order = group.order
        self.x = x
        self.depth = depth
        self.mirrored = mirrored
        self.subgroup_order = subgroup_order
        self.quotient_order = quotient_order

    def to_dict(self) -> Dict[str, Any]:
        return {
            'case': self.case,
            'group': self.group,
            'order': self.order,
            'x': self.x,
            'depth': self.depth,
            'mirrored': self.mirrored,
            'subgroup_order': self.subgroup_order,
            'quotient_order': self.quotient_order,
        }


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class DecompositionCertificate:
    x: SubsetMask
    y: SubsetMask
    x_target: float
    trace: List[DecompositionStep]
    verified: bool
    """
    XY = G by the covering kernel and both size bounds hold.
    """

    def __init__(self, x: SubsetMask, y: SubsetMask, x_target: float, trace: List[DecompositionStep], verified: bool):
        self.x = x
        self.y = y
        self.x_target = x_target
        self.trace = trace
        self.verified = verified

    def to_dict(self) -> Dict[str, Any]:
        order = self.x.group.order
        return {
            'group': self.x.group.name,
            'order': order,
            'x_target': self.x_target,
            'y_bound': 2 * order / self.x_target,
            'X': self.x.to_list(),
            'Y': self.y.to_list(),
            'size_x': len(self.x),
            'size_y': len(self.y),
            'trace': [step.to_dict() for step in self.trace],
            'verified': self.verified,
        }


class _Decomposer:
    """
    One recursive run, holding the search budgets and the trace.
    """

    def __init__(self, pair_budget: int, class_union_limit: int, seed: int, prefer_quotient: bool):
        self.pair_budget = pair_budget
        self.class_union_limit = class_union_limit
        self.seed = seed
        self.prefer_quotient = prefer_quotient
        self.trace: List[DecompositionStep] = []

    def solve(self, group: FiniteGroup, x: float, depth: int = 0) -> Tuple[numpy.ndarray, numpy.ndarray]:
        n = group.order
        if n == 1:
            self.trace.append(DecompositionStep('trivial', group, x, depth))
            return numpy.zeros(1, dtype=numpy.int64), numpy.zeros(1, dtype=numpy.int64)
        if x >= n:
            self.trace.append(DecompositionStep('full', group, x, depth))
            return numpy.arange(n), numpy.zeros(1, dtype=numpy.int64)
        if x < 2 or Fraction(x) ** 2 > 2 * n:
            mirror = 2 * n / x if x < 2 else min(2 * n / x, largest_root(2 * n))
            logger.debug('{}: x = {} mirrored to {}', group.name, x, mirror)
            first, second = self.__solve_normalized(group, mirror, depth, mirrored=True)
            return numpy.unique(group.inv[second]), numpy.unique(group.inv[first])

        return self.__solve_normalized(group, x, depth)

    def __solve_normalized(self, group: FiniteGroup, x: float, depth: int, mirrored: bool = False) -> Tuple[numpy.ndarray, numpy.ndarray]:
        n = group.order
        if n == 1 or x >= n:
            # mirroring only lands here for x < 2
            return self.solve(group, x, depth)

        if is_prime(n):
            return self.__abelian(group, x, depth, mirrored)

        lattice = None
        if self.prefer_quotient:
            lattice = normal_subgroups(group, self.class_union_limit)
            result = self.__quotient_case(group, lattice, x, depth, mirrored)
            if result is not None:
                return result

        subgroup = find_large_subgroup(group, x / 2, self.pair_budget, self.seed)
        if subgroup is None:
            lattice = lattice or normal_subgroups(group, self.class_union_limit)
            usable = [normal for normal in lattice.proper_nontrivial() if 2 * len(normal) >= x]
            if usable:
                subgroup = usable[-1]

        if subgroup is not None:
            label = None
            if not group.is_abelian:
                lattice = lattice or normal_subgroups(group, self.class_union_limit)
                if lattice.complete and not lattice.proper_nontrivial():
                    label = 'simple-max'
            return self.__subgroup_case(group, subgroup, x, depth, mirrored, label)

        lattice = lattice or normal_subgroups(group, self.class_union_limit)
        result = self.__quotient_case(group, lattice, x, depth, mirrored)
        if result is not None:
            return result

        raise DecompositionStuckError(f'{group.name}: no subgroup of order >= {x / 2:.3f} and no usable normal subgroup', group.name)

    def __abelian(self, group: FiniteGroup, x: float, depth: int, mirrored: bool) -> Tuple[numpy.ndarray, numpy.ndarray]:
        self.trace.append(DecompositionStep('abelian', group, x, depth, mirrored))
        p = group.order
        # any nonidentity element generates a group of prime order
        residues = numpy.zeros(p, dtype=numpy.int64)
        for r in range(1, p):
            residues[r] = group.mul(int(residues[r - 1]), 1)
        first, second = cyclic_decompose(p, x)
        return numpy.unique(residues[first]), numpy.unique(residues[second])

    def __subgroup_case(self, group: FiniteGroup, subgroup: SubsetMask, x: float, depth: int, mirrored: bool, label: Optional[str]) -> Tuple[numpy.ndarray, numpy.ndarray]:
        representatives = right_coset_representatives(group, subgroup)
        size = len(subgroup)
        if size <= x:
            self.trace.append(DecompositionStep(label or "a'", group, x, depth, mirrored, subgroup_order=size))
            return subgroup.indices(), representatives

        self.trace.append(DecompositionStep(label or 'a', group, x, depth, mirrored, subgroup_order=size))
        inner, embedding = subgroup_as_group(group, subgroup)
        first, second = self.solve(inner, x, depth + 1)
        return embedding[first], numpy.unique(group.products(embedding[second], representatives).ravel())

    def __quotient_case(self, group: FiniteGroup, lattice, x: float, depth: int, mirrored: bool) -> Optional[Tuple[numpy.ndarray, numpy.ndarray]]:
        small = [normal for normal in lattice.proper_nontrivial() if 2 * len(normal) < x]
        if not small:
            return None
        normal = small[-1]
        target, projection = quotient(group, normal)
        self.trace.append(DecompositionStep('b', group, x, depth, mirrored, subgroup_order=len(normal), quotient_order=target.order))
        first, second = self.solve(target, x / len(normal), depth + 1)
        _, lowest = numpy.unique(projection.map, return_index=True)
        pulled_back = projection.preimage(target.mask(first))
        return pulled_back.indices(), numpy.sort(lowest[second])


def group_decompose(group: FiniteGroup, x: float, pair_budget: int = DEFAULT_PAIR_BUDGET, class_union_limit: int = DEFAULT_CLASS_UNION_LIMIT, seed: int = 0, prefer_quotient: bool = False) -> DecompositionCertificate:
    if x < 1:
        raise ThinBaseError(f'x must be at least 1, found {x}')
    decomposer = _Decomposer(pair_budget, class_union_limit, seed, prefer_quotient)
    first, second = decomposer.solve(group, x)
    x_mask, y_mask = group.mask(first), group.mask(second)

    covered = product_cover_check(group, x_mask, y_mask, group.full()).is_empty()
    verified = covered and within_bounds(group.order, x, len(x_mask), len(y_mask))
    certificate = DecompositionCertificate(x_mask, y_mask, x, decomposer.trace, verified)
    if verified:
        logger.success('{}: x = {:.3f}, |X| = {}, |Y| = {}, XY = G', group.name, x, len(x_mask), len(y_mask))
    else:
        logger.error('{}: decomposition failed verification (covered {}, |X| = {}, |Y| = {}, x = {})', group.name, covered, len(x_mask), len(y_mask), x)
    return certificate


def check_trace(certificate: DecompositionCertificate) -> bool:
    """
    Recheck from the trace alone that every step's case applied to the group it was taken on.
    """
    for step in certificate.trace:
        x = Fraction(step.x)
        if step.case == 'trivial':
            ok = step.order == 1
        elif step.case == 'full':
            ok = x >= step.order
        elif step.case == 'abelian':
            ok = is_prime(step.order) and 2 <= x <= step.order
        elif step.case in ['a', "a'", 'simple-max']:
            size = step.subgroup_order
            ok = size is not None and step.order % size == 0 and size < step.order and 2 * size >= x
            if step.case == 'a':
                ok = ok and size > x
            elif step.case == "a'":
                ok = ok and size <= x
        elif step.case == 'b':
            ok = step.subgroup_order is not None and 1 < step.subgroup_order and 2 * step.subgroup_order < x and step.subgroup_order * step.quotient_order == step.order
        else:
            ok = False
        if step.case not in ['trivial', 'full'] and x**2 > 2 * step.order:
            ok = False
        if not ok:
            logger.error('trace step {} on {} does not meet its precondition', step.case, step.group)
            return False
    return True


def square_root(group: FiniteGroup, pair_budget: int = DEFAULT_PAIR_BUDGET, class_union_limit: int = DEFAULT_CLASS_UNION_LIMIT, seed: int = 0) -> SubsetMask:
    """
    R = X u Y for x the largest float at most sqrt(2|G|), so R.R contains XY = G and
    |R| <= sqrt(8|G|).
    """
    if group.order == 1:
        return group.mask([0])
    certificate = group_decompose(group, largest_root(2 * group.order), pair_budget, class_union_limit, seed)
    root = certificate.x | certificate.y
    if not certificate.verified or len(root) ** 2 > 8 * group.order or not product_cover_check(group, root, root, group.full()).is_empty():
        raise ThinBaseError(f'{group.name}: square root of size {len(root)} failed verification')
    return root
