"""
The covering kernel: which elements of Z are products xy with x in X and y in Y.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List

import numpy
from loguru import logger

from thinbase.errors import ThinBaseError
from thinbase.groups.finite_group import FiniteGroup, SubsetMask
from thinbase.seeds import substream

# products materialized per chunk of X
_CHUNK = 1 << 21


def __covered_chunk(group: FiniteGroup, xs: numpy.ndarray, ys: numpy.ndarray) -> numpy.ndarray:
    covered = numpy.zeros(group.order, dtype=bool)
    covered[group.products(xs, ys).ravel()] = True
    return covered


def covered_by(group: FiniteGroup, x: SubsetMask, y: SubsetMask, workers: int = 1) -> SubsetMask:
    """
    The product set XY.  Rows of X are translated in chunks and OR-reduced, the reduction is order
    independent so chunks may run on worker threads.
    """
    xs = x.indices()
    ys = y.indices()
    covered = numpy.zeros(group.order, dtype=bool)
    if len(xs) == 0 or len(ys) == 0:
        return SubsetMask(group, covered)

    step = max(1, _CHUNK // (len(ys) * max(1, group.degree)))
    chunks = [xs[start : start + step] for start in range(0, len(xs), step)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for part in executor.map(lambda chunk: __covered_chunk(group, chunk, ys), chunks):
                covered |= part
    else:
        for chunk in chunks:
            covered |= __covered_chunk(group, chunk, ys)

    return SubsetMask(group, covered)


def product_cover_check(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: SubsetMask, workers: int = 1) -> SubsetMask:
    """
    Z minus XY, an empty result certifies Z is contained in XY.
    """
    uncovered = z - covered_by(group, x, y, workers)
    logger.debug('{}: |X| = {}, |Y| = {}, |Z| = {}, uncovered {}', group.name, len(x), len(y), len(z), len(uncovered))
    return uncovered


def pairwise_uncovered(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: SubsetMask) -> SubsetMask:
    """
    The same set as product_cover_check by plain enumeration of all pairs, one product at a time.
    """
    covered = set()
    for a in x:
        for b in y:
            covered.add(group.mul(a, b))
    return group.mask([g for g in z if g not in covered])


def representations(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: int) -> numpy.ndarray:
    """
    Every a in X with a^-1 z in Y, in increasing order.
    """
    xs = x.indices()
    return xs[y.bits[group.multiply(group.inv[xs], z)]]


def spot_check(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: SubsetMask, fraction: float = 0.01, seed: int = 0) -> List[int]:
    """
    Recheck a random fraction of Z element by element, returns the elements found without a
    representation (empty when the cover holds).
    """
    targets = z.indices()
    if len(targets) == 0:
        return []
    count = min(len(targets), max(1, int(numpy.ceil(fraction * len(targets)))))
    sample = substream(seed, 0x5EC).choice(targets, size=count, replace=False)
    return [int(g) for g in sample if len(representations(group, x, y, int(g))) == 0]


def is_class_union(mask: SubsetMask) -> bool:
    """
    Whether the set is closed under conjugation, that is a union of conjugacy classes.
    """
    group = mask.group
    inside = numpy.bincount(group.class_of, weights=mask.bits, minlength=len(group.classes))
    sizes = numpy.array([c.size for c in group.classes])
    return bool(((inside == 0) | (inside == sizes)).all())


def class_cover_check(group: FiniteGroup, x: SubsetMask, y: SubsetMask, z: SubsetMask) -> SubsetMask:
    """
    Z minus XY for X and Y unions of conjugacy classes.  XY is then a union of classes as well, so
    one representative decides each class met by Z, at |X| products per class.
    """
    if not (is_class_union(x) and is_class_union(y)):
        raise ThinBaseError(f'{group.name}: class level cover check needs both sides closed under conjugation')
    labels = group.class_of
    reached = numpy.zeros(len(group.classes), dtype=bool)
    if x.is_empty() or y.is_empty():
        return SubsetMask(group, z.bits.copy())
    for label in numpy.unique(labels[z.indices()]):
        reached[label] = len(representations(group, x, y, group.classes[int(label)].representative)) > 0
    uncovered = SubsetMask(group, z.bits & ~reached[labels])
    logger.debug('{}: class level check of |X| = {}, |Y| = {}, |Z| = {}, uncovered {}', group.name, len(x), len(y), len(z), len(uncovered))
    return uncovered
