"""
Subgroups, normal subgroups, quotients and homomorphisms of a FiniteGroup.
"""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy
from loguru import logger

from thinbase.errors import SubgroupError
from thinbase.groups.finite_group import FiniteGroup, Indices, SubsetMask
from thinbase.seeds import substream

DEFAULT_PAIR_BUDGET = 2000
DEFAULT_CLASS_UNION_LIMIT = 20

# products checked per numpy call when testing closure
_CHUNK = 1 << 20


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class GroupHomomorphism:
    source: FiniteGroup
    target: FiniteGroup
    map: numpy.ndarray
    """
    map[g] is the image in target of element g of source.
    """

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Indices):
        self.source = source
        self.target = target
        self.map = numpy.asarray(images, dtype=numpy.int64)

    def __call__(self, g: int) -> int:
        return int(self.map[g])

    def is_homomorphism(self, random_pairs: int = 100_000, seed: int = 0) -> bool:
        """
        Checked on every pair for small sources, on random pairs otherwise.
        """
        if self.map[0] != 0:
            return False
        n = self.source.order
        if n * n <= random_pairs:
            a, b = numpy.divmod(numpy.arange(n * n), n)
        else:
            a, b = substream(seed, n).integers(0, n, size=(2, random_pairs))
        return bool(numpy.array_equal(self.map[self.source.multiply(a, b)], self.target.multiply(self.map[a], self.map[b])))

    def kernel(self) -> SubsetMask:
        return SubsetMask(self.source, self.map == 0)

    def image(self) -> SubsetMask:
        return self.target.mask(numpy.unique(self.map))

    def preimage(self, mask: SubsetMask) -> SubsetMask:
        return SubsetMask(self.source, mask.bits[self.map])


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class NormalSubgroupLattice:
    subgroups: List[SubsetMask]
    """
    Normal subgroups sorted by order, then by element indices.
    """

    complete: bool
    """
    True when every union of classes was examined, False when only joins of single class closures were.
    """

    def __init__(self, subgroups: List[SubsetMask], complete: bool):
        self.subgroups = sorted(subgroups, key=lambda mask: (len(mask), mask.to_list()))
        self.complete = complete

    def __iter__(self) -> Iterator[SubsetMask]:
        return iter(self.subgroups)

    def __len__(self) -> int:
        return len(self.subgroups)

    def orders(self) -> List[int]:
        return [len(subgroup) for subgroup in self.subgroups]

    def proper_nontrivial(self) -> List[SubsetMask]:
        return [subgroup for subgroup in self.subgroups if 1 < len(subgroup) < subgroup.group.order]


def subgroup_closure(group: FiniteGroup, generators: Indices) -> SubsetMask:
    """
    Smallest subgroup containing the generators, by repeated right multiplication.
    """
    gens = numpy.unique(numpy.asarray(generators, dtype=numpy.int64))
    members = numpy.zeros(group.order, dtype=bool)
    members[0] = True
    members[gens] = True
    frontier = numpy.flatnonzero(members)
    while len(frontier) and len(gens):
        step = max(1, _CHUNK // len(gens))
        fresh = []
        for start in range(0, len(frontier), step):
            products = group.products(frontier[start : start + step], gens).ravel()
            new = numpy.unique(products[~members[products]])
            members[new] = True
            fresh.append(new)
        frontier = numpy.concatenate(fresh)

    return SubsetMask(group, members)


def is_subgroup(mask: SubsetMask) -> bool:
    group = mask.group
    if 0 not in mask:
        return False
    elements = mask.indices()
    step = max(1, _CHUNK // max(1, len(elements)))
    for start in range(0, len(elements), step):
        if not mask.bits[group.products(elements[start : start + step], elements)].all():
            return False
    return True


def is_normal(mask: SubsetMask) -> bool:
    """
    A subgroup is normal when it is a union of conjugacy classes.
    """
    if not is_subgroup(mask):
        return False
    labels = mask.group.class_of
    touched = numpy.isin(labels, numpy.unique(labels[mask.bits]))
    return bool(numpy.count_nonzero(touched) == len(mask))


def normal_subgroups(group: FiniteGroup, class_union_limit: int = DEFAULT_CLASS_UNION_LIMIT) -> NormalSubgroupLattice:
    """
    Normal subgroups as unions of conjugacy classes containing the identity class.  With at most
    class_union_limit classes every union is examined, otherwise the lattice is generated from
    the closures of single classes and their joins.
    """
    classes = group.classes
    if len(classes) <= class_union_limit:
        sizes = numpy.array([c.size for c in classes[1:]], dtype=numpy.int64)
        sums = numpy.zeros(1, dtype=numpy.int64)
        for size in sizes:
            sums = numpy.concatenate([sums, sums + size])
        candidates = numpy.flatnonzero(group.order % (sums + 1) == 0)
        found = []
        for subset in candidates:
            bits = classes[0].members.bits.copy()
            for i in range(len(sizes)):
                if subset >> i & 1:
                    bits |= classes[i + 1].members.bits
            mask = SubsetMask(group, bits)
            if is_subgroup(mask):
                found.append(mask)
        logger.debug('{}: {} normal subgroups from {} class unions', group.name, len(found), len(candidates))
        return NormalSubgroupLattice(found, True)

    logger.warning('{} has {} classes, normal subgroups generated from single class closures only', group.name, len(classes))
    found = {group.mask([0]), group.full()}
    for conjugacy_class in classes[1:]:
        found.add(subgroup_closure(group, conjugacy_class.members.indices()))
    changed = True
    while changed:
        changed = False
        current = list(found)
        for i, left in enumerate(current):
            for right in current[i + 1 :]:
                join = subgroup_closure(group, (left | right).indices())
                if join not in found:
                    found.add(join)
                    changed = True
    return NormalSubgroupLattice(list(found), False)


def __largest_qualifying(candidates: List[SubsetMask], threshold: float) -> Optional[SubsetMask]:
    qualifying = [mask for mask in candidates if threshold <= len(mask) < mask.group.order]
    if not qualifying:
        return None
    return max(qualifying, key=lambda mask: (len(mask), [-i for i in mask.to_list()]))


def find_large_subgroup(group: FiniteGroup, threshold: float, pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> Optional[SubsetMask]:
    """
    A proper subgroup of order at least threshold, or None.  Tries point stabilizers, then cyclic
    subgroups, then subgroups generated by random pairs of elements; the first stage with a
    qualifying subgroup returns its largest one.
    """
    if threshold < 1:
        raise SubgroupError(f'threshold must be at least 1, found {threshold}')
    if group.order == 1:
        return None

    found = None
    if group.perm_images is not None:
        stabilizers = [SubsetMask(group, group.perm_images[:, point] == point) for point in range(group.degree)]
        found = __largest_qualifying(stabilizers, threshold)
        if found is not None:
            logger.debug('{}: point stabilizer of order {}', group.name, len(found))

    if found is None:
        orders = group.element_orders
        proper = numpy.flatnonzero(orders < group.order)
        if len(proper):
            best = int(proper[numpy.argmax(orders[proper])])
            found = __largest_qualifying([subgroup_closure(group, [best])], threshold)
            if found is not None:
                logger.debug('{}: cyclic subgroup of order {}', group.name, len(found))

    if found is None and group.order > 2:
        rng = substream(seed, group.order)
        for a, b in rng.integers(1, group.order, size=(pair_budget, 2)):
            found = __largest_qualifying([subgroup_closure(group, [a, b])], threshold)
            if found is not None:
                logger.debug('{}: two generated subgroup of order {}', group.name, len(found))
                break

    if found is not None and not is_subgroup(found):
        raise SubgroupError(f'{group.name}: subgroup search returned a set that is not closed')

    return found


def subgroup_as_group(group: FiniteGroup, subgroup: SubsetMask, name: Optional[str] = None) -> Tuple[FiniteGroup, numpy.ndarray]:
    """
    The subgroup as a standalone group plus the embedding array (sub index -> parent index).
    Elements keep their relative order, so the identity stays at 0.
    """
    elements = subgroup.indices()
    position = numpy.full(group.order, -1, dtype=numpy.int64)
    position[elements] = numpy.arange(len(elements))
    label = name or f'{group.name}<{len(elements)}>'
    inv = position[group.inv[elements]]
    if group.has_table or group.order <= group.max_table_order:
        table = position[group.products(elements, elements)].astype(numpy.int32)
        return FiniteGroup(label, inv, table=table), elements

    return FiniteGroup(label, inv, perm_images=group.perm_images[elements], max_table_order=group.max_table_order), elements


def right_coset_representatives(group: FiniteGroup, subgroup: SubsetMask) -> numpy.ndarray:
    """
    Lowest index element of every right coset Hg, in increasing order.
    """
    elements = subgroup.indices()
    assigned = numpy.zeros(group.order, dtype=bool)
    representatives = []
    for g in range(group.order):
        if assigned[g]:
            continue
        assigned[group.multiply(elements, g)] = True
        representatives.append(g)
    return numpy.array(representatives, dtype=numpy.int64)


def quotient(group: FiniteGroup, normal: SubsetMask) -> Tuple[FiniteGroup, GroupHomomorphism]:
    """
    G/N on the cosets of N, each labelled by its lowest element, plus the projection.
    """
    if not is_subgroup(normal):
        raise SubgroupError(f'{group.name}: not a subgroup')
    if not is_normal(normal):
        raise SubgroupError(f'{group.name}: subgroup of order {len(normal)} is not normal')

    elements = normal.indices()
    labels = numpy.full(group.order, -1, dtype=numpy.int64)
    representatives = []
    for g in range(group.order):
        if labels[g] >= 0:
            continue
        labels[group.multiply(g, elements)] = len(representatives)
        representatives.append(g)

    reps = numpy.array(representatives, dtype=numpy.int64)
    table = labels[group.products(reps, reps)].astype(numpy.int32)
    target = FiniteGroup(f'{group.name}/{len(elements)}', labels[group.inv[reps]], table=table)
    return target, GroupHomomorphism(group, target, labels)
