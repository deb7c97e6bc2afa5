"""
Ingested character tables and the class multiplication counts they determine.

For classes C1, C2 and z in C3 the number of pairs (x, y) in C1 x C2 with xy = z is

    |C1||C2|/|G| * sum over irreducible chi of chi(C1) chi(C2) conj(chi(C3)) / chi(1)

Tables are data: they are read from files (or the closed form for cyclic groups), validated by
the orthogonality relations, and matched against a concrete group by brute force counting.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy
import orjson
from loguru import logger

from thinbase.errors import TableValidationError
from thinbase.groups import FiniteGroup, SubsetMask, conjugacy_classes

ClassRef = Union[int, str]

TABLE_TOLERANCE = 1e-9
COUNT_TOLERANCE = 1e-6


@dataclass(init=False, repr=False, eq=True, order=False, unsafe_hash=True, frozen=False)
class ClassInfo:
    label: str
    size: int
    rep_order: int
    """
    Order of the elements in the class.
    """

    representative: Optional[int] = None
    """
    Element index of a representative in the matching corpus group, when known.
    """

    cycle_type: Optional[Tuple[int, ...]] = None
    """
    For symmetric group tables, the cycle lengths of the class (fixed points included).
    """

    def __init__(self, label: str, size: int, rep_order: int, representative: Optional[int] = None, cycle_type: Optional[Sequence[int]] = None):
        self.label = label
        self.size = size
        self.rep_order = rep_order
        self.representative = representative
        self.cycle_type = tuple(sorted(cycle_type, reverse=True)) if cycle_type else None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'label': self.label, 'size': self.size, 'rep_order': self.rep_order}
        if self.representative is not None:
            data['representative'] = self.representative
        if self.cycle_type is not None:
            data['cycle_type'] = list(self.cycle_type)
        return data


class CharacterTable:
    """
    Rows are irreducible characters, columns are classes.
    """

    group_name: str
    group_order: int
    classes: List[ClassInfo]
    values: numpy.ndarray

    def __init__(self, group_name: str, group_order: int, classes: List[ClassInfo], values: numpy.ndarray):
        self.group_name = group_name
        self.group_order = group_order
        self.classes = classes
        self.values = numpy.asarray(values, dtype=numpy.complex128)

    @property
    def sizes(self) -> numpy.ndarray:
        return numpy.array([c.size for c in self.classes], dtype=numpy.int64)

    @property
    def identity_class(self) -> int:
        for i, c in enumerate(self.classes):
            if c.rep_order == 1:
                return i
        raise TableValidationError(f'{self.group_name}: table has no identity class')

    @property
    def degrees(self) -> numpy.ndarray:
        return self.values[:, self.identity_class].real

    @property
    def trivial_rows(self) -> List[int]:
        return [r for r in range(len(self.values)) if numpy.allclose(self.values[r], 1, atol=TABLE_TOLERANCE)]

    def class_index(self, ref: ClassRef) -> int:
        if isinstance(ref, str):
            for i, c in enumerate(self.classes):
                if c.label == ref:
                    return i
            raise TableValidationError(f'{self.group_name}: no class labelled {ref}')
        if not 0 <= ref < len(self.classes):
            raise TableValidationError(f'{self.group_name}: class index {ref} out of range')
        return int(ref)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.group_name,
            'order': self.group_order,
            'classes': [c.to_dict() for c in self.classes],
            'chars': [[[float(v.real), float(v.imag)] for v in row] for row in self.values],
        }

    def __str__(self):
        return orjson.dumps(self.to_dict(), option=orjson.OPT_INDENT_2).decode('UTF-8')


def table_from_dict(data: Dict[str, Any]) -> CharacterTable:
    """
    Parse a character table document, {"group", "order", "classes": [...], "chars": [[[re, im], ...], ...]}.
    """
    for key in ['group', 'order', 'classes', 'chars']:
        if key not in data:
            raise TableValidationError(f'character table is missing "{key}"')
    classes = []
    for entry in data['classes']:
        try:
            classes.append(ClassInfo(str(entry['label']), int(entry['size']), int(entry['rep_order']), entry.get('representative'), entry.get('cycle_type')))
        except (KeyError, TypeError) as error:
            raise TableValidationError(f'{data["group"]}: bad class entry {entry}') from error

    values = numpy.array([[complex(pair[0], pair[1]) for pair in row] for row in data['chars']], dtype=numpy.complex128)
    if values.ndim != 2 or values.shape != (len(classes), len(classes)):
        raise TableValidationError(f'{data["group"]}: value matrix has shape {values.shape}, expected {len(classes)} x {len(classes)}')
    return CharacterTable(str(data['group']), int(data['order']), classes, values)


def cyclic_table(n: int) -> CharacterTable:
    """
    Characters of Z/n, chi_j(k) = exp(2 pi i jk / n), class k holds the residue k.
    """
    residues = numpy.arange(n)
    values = numpy.exp(2j * numpy.pi * numpy.outer(residues, residues) / n)
    classes = [ClassInfo(str(k), 1, n // numpy.gcd(n, k), representative=k) for k in range(n)]
    return CharacterTable(f'z{n}', n, classes, values)


@dataclass(init=False, repr=False, eq=True, order=False, unsafe_hash=False, frozen=False)
class TableValidation:
    valid: bool
    errors: List[str]
    class_map: Optional[List[int]] = None
    """
    When a group was supplied, class_map[i] is the group class matching table class i.
    """

    def __init__(self, errors: List[str], class_map: Optional[List[int]] = None):
        self.errors = errors
        self.valid = not errors
        self.class_map = class_map

    def to_dict(self) -> Dict[str, Any]:
        return {'valid': self.valid, 'errors': self.errors, 'class_map': self.class_map}


def __orthogonality_errors(table: CharacterTable, tolerance: float) -> List[str]:
    errors = []
    values = table.values
    sizes = table.sizes
    rows = (values * sizes) @ values.conj().T
    expected = table.group_order * numpy.eye(len(values))
    for r, s in zip(*numpy.nonzero(numpy.abs(rows - expected) > tolerance)):
        errors.append(f'row orthogonality fails for characters ({r}, {s}), residual {abs(rows[r, s] - expected[r, s]):.3g}')

    columns = values.T @ values.conj()
    expected = numpy.diag(table.group_order / sizes)
    for j, k in zip(*numpy.nonzero(numpy.abs(columns - expected) > tolerance)):
        errors.append(f'column orthogonality fails for classes ({j}, {k}), residual {abs(columns[j, k] - expected[j, k]):.3g}')
    return errors


def validate_table(table: CharacterTable, group: Optional[FiniteGroup] = None, tolerance: float = TABLE_TOLERANCE) -> TableValidation:
    errors = []
    if int(table.sizes.sum()) != table.group_order:
        errors.append(f'class sizes sum to {int(table.sizes.sum())}, not {table.group_order}')
    trivial = table.trivial_rows
    if len(trivial) != 1:
        errors.append(f'expected exactly one trivial character, found {len(trivial)}')
    try:
        degree_square_sum = float((table.degrees**2).sum())
        if abs(degree_square_sum - table.group_order) > tolerance * table.group_order:
            errors.append(f'squared degrees sum to {degree_square_sum}, not {table.group_order}')
    except TableValidationError as error:
        errors.append(str(error))
    errors.extend(__orthogonality_errors(table, tolerance))

    class_map = None
    if group is not None and not errors:
        if group.order != table.group_order:
            errors.append(f'table order {table.group_order} does not match {group.name} of order {group.order}')
        elif sorted(table.sizes.tolist()) != sorted(c.size for c in conjugacy_classes(group)):
            errors.append(f'class sizes {sorted(table.sizes.tolist())} do not match those of {group.name}')
        else:
            class_map = match_classes(table, group)
            if class_map is None:
                errors.append(f'no class bijection with {group.name} reproduces the brute force counts')

    for error in errors:
        logger.error('{}: {}', table.group_name, error)
    return TableValidation(errors, class_map)


def class_product_counts(table: CharacterTable) -> numpy.ndarray:
    """
    counts[i, j, k] is the character formula for the pairs in C_i x C_j with product a fixed z in C_k.
    """
    values = table.values
    sizes = table.sizes
    weighted = values / table.degrees[:, numpy.newaxis]
    total = numpy.einsum('ri,rj,rk->ijk', weighted, values, values.conj())
    return sizes[:, numpy.newaxis, numpy.newaxis] * sizes[numpy.newaxis, :, numpy.newaxis] * total / table.group_order


def brute_force_count(group: FiniteGroup, first: SubsetMask, second: SubsetMask, z: int) -> int:
    """
    Number of pairs (x, y) in first x second with xy = z.
    """
    xs = first.indices()
    return int(numpy.count_nonzero(second.bits[group.multiply(group.inv[xs], z)]))


def brute_force_counts(group: FiniteGroup) -> numpy.ndarray:
    """
    counts[i, j, k] over the group's own classes, z the representative of class k.
    """
    classes = conjugacy_classes(group)
    counts = numpy.zeros((len(classes),) * 3, dtype=numpy.int64)
    for i, first in enumerate(classes):
        inverses = group.inv[first.members.indices()]
        for k, target in enumerate(classes):
            labels = group.class_of[group.multiply(inverses, target.representative)]
            counts[i, :, k] = numpy.bincount(labels, minlength=len(classes))
    return counts


def match_classes(table: CharacterTable, group: FiniteGroup) -> Optional[List[int]]:
    """
    Bijection from table classes to group classes under which every class triple count agrees with
    brute force.  Classes with representatives are pinned, the rest are matched by
    (size, element order) and ambiguous signatures are resolved by trying every assignment.
    """
    formula = numpy.rint(class_product_counts(table).real).astype(numpy.int64)
    counts = brute_force_counts(group)
    orders = group.element_orders

    buckets: Dict[Tuple[int, int], List[int]] = {}
    pinned: Dict[int, int] = {}
    for i, info in enumerate(table.classes):
        if info.representative is not None:
            pinned[i] = int(group.class_of[info.representative])
        else:
            buckets.setdefault((info.size, info.rep_order), []).append(i)

    targets: Dict[Tuple[int, int], List[int]] = {}
    for j, conjugacy_class in enumerate(conjugacy_classes(group)):
        if j not in pinned.values():
            targets.setdefault((conjugacy_class.size, int(orders[conjugacy_class.representative])), []).append(j)
    for signature, members in buckets.items():
        if len(targets.get(signature, [])) != len(members):
            return None

    keys = list(buckets)
    for choice in itertools.product(*[itertools.permutations(targets[key]) for key in keys]):
        mapping = dict(pinned)
        for key, assigned in zip(keys, choice):
            mapping.update(zip(buckets[key], assigned))
        order = [mapping[i] for i in range(len(table.classes))]
        if len(set(order)) == len(order) and numpy.array_equal(counts[numpy.ix_(order, order, order)], formula):
            return order
    return None


def frobenius_count(table: CharacterTable, c1: ClassRef, c2: ClassRef, c3: ClassRef) -> float:
    """
    Number of ways to write a fixed element of c3 as xy with x in c1, y in c2, from the table.
    """
    i, j, k = table.class_index(c1), table.class_index(c2), table.class_index(c3)
    weighted = table.values[:, i] * table.values[:, j] * table.values[:, k].conj() / table.degrees
    value = table.classes[i].size * table.classes[j].size * weighted.sum() / table.group_order
    nearest = round(value.real)
    if abs(value.imag) >= COUNT_TOLERANCE or abs(value.real - nearest) >= COUNT_TOLERANCE or nearest < 0:
        raise TableValidationError(f'{table.group_name}: count for classes ({i}, {j}, {k}) is {value}, not a nonnegative integer')
    return float(value.real)


def char_sum(table: CharacterTable, c1: ClassRef, c2: ClassRef, c3: ClassRef) -> Tuple[complex, float]:
    """
    Sum over the nontrivial characters of chi(c1) chi(c2) conj(chi(c3)) / chi(1), and its modulus.
    """
    i, j, k = table.class_index(c1), table.class_index(c2), table.class_index(c3)
    trivial = set(table.trivial_rows)
    nontrivial = [r for r in range(len(table.values)) if r not in trivial]
    rows = table.values[nontrivial]
    value = complex((rows[:, i] * rows[:, j] * rows[:, k].conj() / table.degrees[nontrivial]).sum())
    return value, abs(value)


def count_criterion(table: CharacterTable, c1: ClassRef, c2: ClassRef, c3: ClassRef) -> bool:
    """
    The count is at least half of |C1||C2|/|G|, its value for a uniformly spread product.
    """
    i, j = table.class_index(c1), table.class_index(c2)
    return frobenius_count(table, c1, c2, c3) >= table.classes[i].size * table.classes[j].size / (2 * table.group_order)


def char_sum_criterion(table: CharacterTable, c1: ClassRef, c2: ClassRef, c3: ClassRef) -> bool:
    value, _ = char_sum(table, c1, c2, c3)
    return (1 + value).real >= 0.5


def degree_zeta(degrees: Union[CharacterTable, Sequence[float]], s: float) -> float:
    """
    Sum of chi(1)^-s over the irreducible characters.
    """
    if isinstance(degrees, CharacterTable):
        degrees = degrees.degrees
    return float(numpy.sum(numpy.asarray(degrees, dtype=float) ** -s))
