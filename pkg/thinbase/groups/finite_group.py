"""
Finite groups over element indices 0..n-1.

Groups are built either from permutation generators, by breadth first closure from the identity,
or from an explicit multiplication table.  Element 0 is always the identity.  Permutations act on
the right: (a * b)[i] = b[a[i]], i.e. apply a first.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import numpy
from loguru import logger

from thinbase.errors import GroupConstructionError
from thinbase.seeds import substream

DEFAULT_SIZE_CAP = 1_000_000
DEFAULT_MAX_TABLE_ORDER = 5000
DEFAULT_ASSOC_EXHAUSTIVE_LIMIT = 512
DEFAULT_ASSOC_RANDOM_TRIPLES = 100_000

# degree**degree has to fit in an int64 permutation code
MAX_DEGREE = 15

Indices = Union[Sequence[int], numpy.ndarray]


class SubsetMask:
    """
    Dense bit vector over the elements of a group, the unit of all covering computations.
    """

    bits: numpy.ndarray
    """
    Boolean array of length |G|.
    """

    group: 'FiniteGroup'

    def __init__(self, group: 'FiniteGroup', bits: Optional[numpy.ndarray] = None):
        self.group = group
        if bits is None:
            bits = numpy.zeros(group.order, dtype=bool)
        bits = numpy.asarray(bits, dtype=bool)
        if bits.shape != (group.order,):
            raise GroupConstructionError(f'mask of length {bits.shape} does not fit a group of order {group.order}')
        self.bits = bits

    @classmethod
    def from_indices(cls, group: 'FiniteGroup', indices: Indices) -> 'SubsetMask':
        bits = numpy.zeros(group.order, dtype=bool)
        bits[numpy.asarray(indices, dtype=numpy.int64)] = True
        return cls(group, bits)

    def indices(self) -> numpy.ndarray:
        return numpy.flatnonzero(self.bits)

    def is_empty(self) -> bool:
        return not self.bits.any()

    def __len__(self) -> int:
        return int(numpy.count_nonzero(self.bits))

    def __contains__(self, element: int) -> bool:
        return bool(self.bits[element])

    def __iter__(self) -> Iterator[int]:
        return iter(int(i) for i in self.indices())

    def __check(self, other: 'SubsetMask'):
        if other.group is not self.group:
            raise GroupConstructionError('masks belong to different groups')

    def __or__(self, other: 'SubsetMask') -> 'SubsetMask':
        self.__check(other)
        return SubsetMask(self.group, self.bits | other.bits)

    def __and__(self, other: 'SubsetMask') -> 'SubsetMask':
        self.__check(other)
        return SubsetMask(self.group, self.bits & other.bits)

    def __sub__(self, other: 'SubsetMask') -> 'SubsetMask':
        self.__check(other)
        return SubsetMask(self.group, self.bits & ~other.bits)

    def __invert__(self) -> 'SubsetMask':
        return SubsetMask(self.group, ~self.bits)

    def __le__(self, other: 'SubsetMask') -> bool:
        self.__check(other)
        return not (self.bits & ~other.bits).any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return other.group is self.group and bool(numpy.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        return f'SubsetMask({self.group.name}, {self.indices().tolist()})'

    def to_list(self) -> List[int]:
        return self.indices().tolist()


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class ConjugacyClass:
    representative: int
    """
    Lowest element index in the class.
    """

    members: SubsetMask
    size: int

    def __init__(self, representative: int, members: SubsetMask):
        self.representative = representative
        self.members = members
        self.size = len(members)

    def to_dict(self) -> Dict[str, Any]:
        return {'representative': self.representative, 'size': self.size}


class FiniteGroup:
    """
    Complete multiplication structure of a finite group.  Immutable after construction, the lazily
    built table, classes and element orders are derived data only.
    """

    name: str
    order: int
    inv: numpy.ndarray
    perm_images: Optional[numpy.ndarray]
    """
    For permutation built groups, row g is the image array of element g.
    """

    degree: int
    max_table_order: int

    def __init__(self, name: str, inv: numpy.ndarray, table: Optional[numpy.ndarray] = None, perm_images: Optional[numpy.ndarray] = None, max_table_order: int = DEFAULT_MAX_TABLE_ORDER):
        self.name = name
        self.inv = numpy.asarray(inv, dtype=numpy.int64)
        self.order = len(self.inv)
        self.perm_images = perm_images
        self.degree = 0 if perm_images is None else perm_images.shape[1]
        self.max_table_order = max_table_order
        self.__table = table

        self.__weights = None
        self.__sorted_codes = None
        self.__code_order = None
        if perm_images is not None:
            self.__weights = numpy.power(numpy.int64(max(self.degree, 2)), numpy.arange(self.degree, dtype=numpy.int64))
            codes = perm_images.astype(numpy.int64) @ self.__weights
            self.__code_order = numpy.argsort(codes, kind='stable')
            self.__sorted_codes = codes[self.__code_order]

    @property
    def identity(self) -> int:
        return 0

    @property
    def has_table(self) -> bool:
        return self.__table is not None

    @property
    def table(self) -> numpy.ndarray:
        if self.__table is None:
            if self.order > self.max_table_order:
                raise GroupConstructionError(f'{self.name}: order {self.order} is above the table limit {self.max_table_order}')
            logger.debug('materializing multiplication table of {} (order {})', self.name, self.order)
            everything = numpy.arange(self.order)
            rows = []
            chunk = max(1, 2_000_000 // max(1, self.order * self.degree))
            for start in range(0, self.order, chunk):
                rows.append(self.__compose_products(everything[start : start + chunk], everything))
            self.__table = numpy.concatenate(rows).astype(numpy.int32)

        return self.__table

    def __use_table(self) -> bool:
        return self.__table is not None or self.order <= self.max_table_order

    def lookup(self, perms: numpy.ndarray) -> numpy.ndarray:
        """
        Element indices of an array of permutation images (last axis is the point axis).
        """
        if self.perm_images is None:
            raise GroupConstructionError(f'{self.name} has no permutation images')
        codes = perms.astype(numpy.int64) @ self.__weights
        positions = numpy.searchsorted(self.__sorted_codes, codes)
        positions = numpy.minimum(positions, self.order - 1)
        if not numpy.array_equal(self.__sorted_codes[positions], codes):
            raise GroupConstructionError(f'permutation is not an element of {self.name}')
        return self.__code_order[positions]

    def __compose_products(self, xs: numpy.ndarray, ys: numpy.ndarray) -> numpy.ndarray:
        images = self.perm_images
        composed = images[ys][:, images[xs]]
        return self.lookup(composed.transpose(1, 0, 2))

    def mul(self, a: int, b: int) -> int:
        if self.__use_table():
            return int(self.table[a, b])
        return int(self.lookup(self.perm_images[b][self.perm_images[a]]))

    def multiply(self, a: Indices, b: Indices) -> numpy.ndarray:
        """
        Elementwise products a[i] * b[i], with numpy broadcasting.
        """
        a, b = numpy.broadcast_arrays(numpy.asarray(a, dtype=numpy.int64), numpy.asarray(b, dtype=numpy.int64))
        if self.__use_table():
            return self.table[a, b].astype(numpy.int64)
        left = self.perm_images[a]
        right = self.perm_images[b]
        return self.lookup(numpy.take_along_axis(right, left, axis=-1))

    def products(self, xs: Indices, ys: Indices) -> numpy.ndarray:
        """
        Matrix of products x * y, rows indexed by xs and columns by ys.
        """
        xs = numpy.asarray(xs, dtype=numpy.int64)
        ys = numpy.asarray(ys, dtype=numpy.int64)
        if self.__use_table():
            return self.table[numpy.ix_(xs, ys)].astype(numpy.int64)
        return self.__compose_products(xs, ys)

    def power(self, g: int, exponent: int) -> int:
        if exponent < 0:
            g, exponent = int(self.inv[g]), -exponent
        result = 0
        while exponent:
            if exponent & 1:
                result = self.mul(result, g)
            g = self.mul(g, g)
            exponent >>= 1
        return result

    def powers(self, elements: Indices, exponent: int) -> numpy.ndarray:
        """
        elements[i] ** exponent for every i, by repeated squaring on index arrays.
        """
        base = numpy.asarray(elements, dtype=numpy.int64)
        if exponent < 0:
            base, exponent = self.inv[base], -exponent
        result = numpy.zeros_like(base)
        while exponent:
            if exponent & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            exponent >>= 1
        return result

    def conjugate(self, g: int, h: int) -> int:
        """
        h^-1 g h
        """
        return self.mul(self.mul(int(self.inv[h]), g), h)

    @cached_property
    def element_orders(self) -> numpy.ndarray:
        everything = numpy.arange(self.order)
        orders = numpy.zeros(self.order, dtype=numpy.int64)
        current = everything.copy()
        k = 1
        while True:
            orders[(current == 0) & (orders == 0)] = k
            if orders.all():
                return orders
            current = self.multiply(current, everything)
            k += 1

    @cached_property
    def class_of(self) -> numpy.ndarray:
        labels = numpy.full(self.order, -1, dtype=numpy.int64)
        everything = numpy.arange(self.order)
        label = 0
        for g in range(self.order):
            if labels[g] >= 0:
                continue
            conjugates = self.multiply(self.multiply(self.inv, g), everything)
            labels[conjugates] = label
            label += 1
        return labels

    @cached_property
    def classes(self) -> List[ConjugacyClass]:
        labels = self.class_of
        result = []
        for label in range(int(labels.max()) + 1):
            members = labels == label
            result.append(ConjugacyClass(int(numpy.argmax(members)), SubsetMask(self, members)))
        return result

    @cached_property
    def is_abelian(self) -> bool:
        return len(self.classes) == self.order

    def centralizer_order(self, g: int) -> int:
        return self.order // self.classes[int(self.class_of[g])].size

    def mask(self, indices: Indices) -> SubsetMask:
        return SubsetMask.from_indices(self, indices)

    def full(self) -> SubsetMask:
        return SubsetMask(self, numpy.ones(self.order, dtype=bool))

    def empty(self) -> SubsetMask:
        return SubsetMask(self)

    def __repr__(self):
        return f'FiniteGroup({self.name}, order={self.order})'


def conjugacy_classes(group: FiniteGroup) -> List[ConjugacyClass]:
    return group.classes


def element_orders(group: FiniteGroup) -> numpy.ndarray:
    return group.element_orders


def centralizer_order(group: FiniteGroup, g: int) -> int:
    return group.centralizer_order(g)


def __check_permutations(generators: Sequence[Sequence[int]], degree: int) -> numpy.ndarray:
    if degree < 0 or degree > MAX_DEGREE:
        raise GroupConstructionError(f'permutation degree {degree} is outside 0..{MAX_DEGREE}')
    gens = numpy.zeros((len(generators), degree), dtype=numpy.int64)
    for i, generator in enumerate(generators):
        image = numpy.asarray(generator, dtype=numpy.int64)
        if image.shape != (degree,) or not numpy.array_equal(numpy.sort(image), numpy.arange(degree)):
            raise GroupConstructionError(f'generator {i} is not a permutation of 0..{degree - 1}: {list(generator)}')
        gens[i] = image
    return gens


def from_permutations(generators: Sequence[Sequence[int]], degree: int, name: str = 'group', size_cap: int = DEFAULT_SIZE_CAP, max_table_order: int = DEFAULT_MAX_TABLE_ORDER) -> FiniteGroup:
    """
    Closure of the generators by breadth first multiplication.  Elements are numbered in discovery
    order from the identity, each element is multiplied by the generators in listed order.
    """
    gens = __check_permutations(generators, degree)
    weights = numpy.power(numpy.int64(max(degree, 2)), numpy.arange(degree, dtype=numpy.int64))
    elements = [numpy.arange(degree, dtype=numpy.int64)[numpy.newaxis, :]]
    seen = numpy.array([elements[0][0] @ weights])
    frontier = elements[0]
    total = 1
    while len(frontier) and len(gens):
        # row g * s for every g in the frontier and every generator s, element major
        candidates = gens[:, frontier].transpose(1, 0, 2).reshape(-1, degree)
        codes = candidates @ weights
        _, first = numpy.unique(codes, return_index=True)
        first = numpy.sort(first)
        fresh = first[~numpy.isin(codes[first], seen)]
        frontier = candidates[fresh]
        total += len(frontier)
        if total > size_cap:
            raise GroupConstructionError(f'closure of {name} exceeds the size cap of {size_cap} elements')
        if len(frontier):
            elements.append(frontier)
            seen = numpy.concatenate([seen, codes[fresh]])

    images = numpy.concatenate(elements)
    inverse_images = numpy.argsort(images, axis=1)
    group = FiniteGroup(name, numpy.zeros(len(images), dtype=numpy.int64), perm_images=images, max_table_order=max_table_order)
    group.inv = group.lookup(inverse_images)
    logger.debug('built {} of order {} on {} points', name, group.order, degree)
    return group


def __check_associative(table: numpy.ndarray, exhaustive_limit: int, random_triples: int) -> bool:
    n = len(table)
    if n <= exhaustive_limit:
        for a in range(n):
            if not numpy.array_equal(table[table[a]], table[a][table]):
                return False
        return True

    rng = substream(0, n)
    a, b, c = rng.integers(0, n, size=(3, random_triples))
    return bool(numpy.array_equal(table[table[a, b], c], table[a, table[b, c]]))


def from_table(table: Sequence[Sequence[int]], name: str = 'group', size_cap: int = DEFAULT_SIZE_CAP, exhaustive_limit: int = DEFAULT_ASSOC_EXHAUSTIVE_LIMIT, random_triples: int = DEFAULT_ASSOC_RANDOM_TRIPLES) -> FiniteGroup:
    """
    Group from an explicit multiplication table, table[a][b] = a * b.  If the identity is not
    element 0 it is swapped into place.
    """
    mul = numpy.asarray(table, dtype=numpy.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise GroupConstructionError(f'{name}: multiplication table must be square, found shape {mul.shape}')
    n = mul.shape[0]
    if n > size_cap:
        raise GroupConstructionError(f'{name}: order {n} exceeds the size cap of {size_cap} elements')
    if mul.min() < 0 or mul.max() >= n:
        raise GroupConstructionError(f'{name}: table entries must lie in 0..{n - 1}')
    everything = numpy.arange(n)
    if not (numpy.sort(mul, axis=1) == everything).all() or not (numpy.sort(mul, axis=0) == everything[:, numpy.newaxis]).all():
        raise GroupConstructionError(f'{name}: table is not a Latin square')

    identities = [e for e in range(n) if numpy.array_equal(mul[e], everything) and numpy.array_equal(mul[:, e], everything)]
    if not identities:
        raise GroupConstructionError(f'{name}: table has no identity element')
    e = identities[0]
    if e != 0:
        swap = everything.copy()
        swap[0], swap[e] = e, 0
        mul = swap[mul[numpy.ix_(swap, swap)]]

    if not __check_associative(mul, exhaustive_limit, random_triples):
        raise GroupConstructionError(f'{name}: table is not associative')

    inv = numpy.argmax(mul == 0, axis=1)
    return FiniteGroup(name, inv, table=mul.astype(numpy.int32), max_table_order=max(n, DEFAULT_MAX_TABLE_ORDER))


def build_group(document: Dict[str, Any], size_cap: int = DEFAULT_SIZE_CAP, max_table_order: int = DEFAULT_MAX_TABLE_ORDER, exhaustive_limit: int = DEFAULT_ASSOC_EXHAUSTIVE_LIMIT, random_triples: int = DEFAULT_ASSOC_RANDOM_TRIPLES) -> FiniteGroup:
    """
    Build a group from a group file document:
    {"name": str, "kind": "permutation"|"table", "degree": int, "generators": [[...]]} or {"table": [[...]]}.
    """
    name = document.get('name', 'group')
    kind = document.get('kind', 'permutation' if 'generators' in document else 'table')
    if kind == 'permutation':
        if 'degree' not in document or 'generators' not in document:
            raise GroupConstructionError(f'{name}: permutation groups need "degree" and "generators"')
        return from_permutations(document['generators'], int(document['degree']), name, size_cap=size_cap, max_table_order=max_table_order)
    if kind == 'table':
        if 'table' not in document:
            raise GroupConstructionError(f'{name}: table groups need "table"')
        return from_table(document['table'], name, size_cap=size_cap, exhaustive_limit=exhaustive_limit, random_triples=random_triples)

    raise GroupConstructionError(f'{name}: unknown group kind {kind}')


def cyclic_group(n: int) -> FiniteGroup:
    """
    Z/n as the rotation i -> i + 1 of n points, element k is the residue k.
    """
    return from_permutations([[(i + 1) % n for i in range(n)]] if n > 1 else [], n, f'z{n}')


def symmetric_group(n: int) -> FiniteGroup:
    generators = []
    if n > 1:
        generators.append([(i + 1) % n for i in range(n)])
        generators.append([1, 0] + list(range(2, n)))
    return from_permutations(generators, n, f's{n}')


def alternating_group(n: int) -> FiniteGroup:
    """
    A_n from (0 1 2) and the long cycle on all points (n odd) or on 1..n-1 (n even).
    """
    generators = []
    if n >= 3:
        generators.append([1, 2, 0] + list(range(3, n)))
    if n >= 4:
        if n % 2:
            generators.append([(i + 1) % n for i in range(n)])
        else:
            generators.append([0] + [1 + i % (n - 1) for i in range(1, n)])
    return from_permutations(generators, n, f'a{n}')
