"""
Tests group construction, conjugacy classes, subgroups and quotients.
"""

import unittest

import numpy
from loguru import logger

from thinbase.corpus import load_group
from thinbase.errors import GroupConstructionError, SubgroupError
from thinbase.groups import GroupHomomorphism, alternating_group, build_group, conjugacy_classes, cyclic_group, find_large_subgroup, from_permutations, from_table, is_normal, is_subgroup, normal_subgroups, quotient, right_coset_representatives, subgroup_as_group, subgroup_closure, symmetric_group
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_a5_classes(self):
        group = load_group('a5')
        self.assertEqual(group.order, 60)
        self.assertEqual(sorted(c.size for c in group.classes), [1, 12, 12, 15, 20])
        self.assertEqual(group.classes[0].representative, 0)
        self.assertEqual(sorted(numpy.unique(group.element_orders).tolist()), [1, 2, 3, 5])
        self.assertEqual(int(numpy.count_nonzero(group.element_orders == 5)), 24)
        self.assertFalse(group.is_abelian)

    def test_s4_classes(self):
        group = symmetric_group(4)
        self.assertEqual(group.order, 24)
        self.assertEqual(sorted(c.size for c in group.classes), [1, 3, 6, 6, 8])
        for g in range(group.order):
            self.assertEqual(group.centralizer_order(g) * group.classes[int(group.class_of[g])].size, 24)

    def test_inverses_and_identity(self):
        group = load_group('psl2_7')
        self.assertEqual(group.order, 168)
        everything = numpy.arange(group.order)
        self.assertTrue((group.multiply(everything, group.inv) == 0).all())
        self.assertTrue((group.multiply(0, everything) == everything).all())
        a, b, c = 5, 17, 101
        self.assertEqual(group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)))

    def test_cyclic_residues(self):
        group = cyclic_group(7)
        self.assertEqual(group.mul(3, 5), 1)
        self.assertEqual(group.power(3, 3), 2)
        self.assertEqual(int(group.inv[2]), 5)
        self.assertTrue(group.is_abelian)

    def test_large_group_without_table(self):
        group = alternating_group(8)
        self.assertEqual(group.order, 20160)
        self.assertFalse(group.has_table)
        elements = numpy.array([1, 2, 3, 1000, 20159])
        self.assertTrue((group.multiply(elements, group.inv[elements]) == 0).all())
        self.assertEqual(group.mul(group.mul(1, 2), 3), group.mul(1, group.mul(2, 3)))

    def test_table_with_identity_elsewhere(self):
        # Z/3 with the identity stored at index 2
        table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
        group = from_table(table, 'z3')
        self.assertEqual(group.order, 3)
        self.assertEqual(group.mul(0, 1), 1)
        self.assertEqual(group.mul(1, 1), 2)
        self.assertEqual(group.mul(1, 2), 0)

    def test_bad_inputs(self):
        with self.assertRaises(GroupConstructionError):
            from_table([[0, 1], [0, 1]])
        with self.assertRaises(GroupConstructionError):
            from_permutations([[0, 0, 1]], 3)
        with self.assertRaises(GroupConstructionError):
            from_permutations([[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], 6, size_cap=100)
        with self.assertRaises(GroupConstructionError):
            build_group({'name': 'broken', 'kind': 'permutation', 'degree': 3})

    def test_conjugacy_classes(self):
        for group, sizes in [(symmetric_group(4), [1, 3, 6, 6, 8]), (load_group('a5'), [1, 12, 12, 15, 20]), (cyclic_group(6), [1] * 6)]:
            classes = conjugacy_classes(group)
            self.assertEqual(sorted(c.size for c in classes), sizes, group.name)
            self.assertEqual(sum(len(c.members) for c in classes), group.order)
            for label, conjugacy_class in enumerate(classes):
                self.assertTrue((group.class_of[conjugacy_class.members.indices()] == label).all())

    def test_non_associative_tables(self):
        # the loop of order 5 with every square the identity
        loop = numpy.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
        with self.assertRaises(GroupConstructionError):
            from_table(loop, 'loop5')
        with self.assertRaises(GroupConstructionError):
            from_table(loop, 'loop5', exhaustive_limit=0)

        # past the exhaustive limit only sampled triples are checked
        m = 103
        first, second = numpy.divmod(numpy.arange(5 * m), m)
        shifts = (second[:, numpy.newaxis] + second[numpy.newaxis, :]) % m
        cyclic = (first[:, numpy.newaxis] + first[numpy.newaxis, :]) % 5
        group = from_table(cyclic * m + shifts, 'z5xz103')
        self.assertEqual(group.order, 5 * m)
        self.assertTrue(group.is_abelian)
        with self.assertRaises(GroupConstructionError):
            from_table(loop[first[:, numpy.newaxis], first[numpy.newaxis, :]] * m + shifts, 'loop5xz103')

    def test_normal_subgroups(self):
        lattice = normal_subgroups(symmetric_group(4))
        self.assertTrue(lattice.complete)
        self.assertEqual(lattice.orders(), [1, 4, 12, 24])

        lattice = normal_subgroups(load_group('z6'))
        self.assertEqual(lattice.orders(), [1, 2, 3, 6])

        lattice = normal_subgroups(load_group('a5'))
        self.assertEqual(lattice.orders(), [1, 60])
        self.assertEqual(lattice.proper_nontrivial(), [])

    def test_subgroup_predicates(self):
        group = symmetric_group(4)
        transposition = int(numpy.flatnonzero(group.element_orders == 2)[0])
        pair = subgroup_closure(group, [transposition])
        self.assertEqual(len(pair), 2)
        self.assertTrue(is_subgroup(pair))
        self.assertFalse(is_normal(pair))
        three_cycle = int(numpy.flatnonzero(group.element_orders == 3)[0])
        self.assertFalse(is_subgroup(group.mask([0, three_cycle])))

    def test_find_large_subgroup(self):
        self.assertIsNone(find_large_subgroup(cyclic_group(7), 2))

        group = load_group('a5')
        found = find_large_subgroup(group, numpy.sqrt(120))
        self.assertIsNotNone(found)
        self.assertEqual(len(found), 12)
        self.assertTrue(is_subgroup(found))

    def test_quotient(self):
        group = symmetric_group(4)
        klein = normal_subgroups(group).subgroups[1]
        target, projection = quotient(group, klein)
        self.assertEqual(target.order, 6)
        self.assertFalse(target.is_abelian)
        self.assertTrue(projection.is_homomorphism())
        self.assertEqual(projection.kernel(), klein)
        self.assertEqual(len(projection.image()), 6)

        transposition = int(numpy.flatnonzero(group.element_orders == 2)[0])
        with self.assertRaises(SubgroupError):
            quotient(group, subgroup_closure(group, [transposition]))

    def test_find_large_subgroup_examples(self):
        rows = [
            (symmetric_group(4), 4, 6),
            (symmetric_group(4), 7, 8),
            (load_group('a5'), 10, 12),
        ]
        for group, threshold, smallest in rows:
            found = find_large_subgroup(group, threshold)
            self.assertIsNotNone(found, f'{group.name} at {threshold}')
            self.assertGreaterEqual(len(found), smallest)
            self.assertLess(len(found), group.order)
            self.assertTrue(is_subgroup(found))

    def test_quotient_examples(self):
        for group in [symmetric_group(4), load_group('a5'), cyclic_group(6)]:
            target, projection = quotient(group, group.mask([0]))
            self.assertEqual(target.order, group.order)
            self.assertTrue((projection.map == numpy.arange(group.order)).all())
            everything = numpy.arange(group.order)
            self.assertTrue((target.products(everything, everything) == group.products(everything, everything)).all())

        group = cyclic_group(6)
        target, projection = quotient(group, group.mask([0, 3]))
        self.assertEqual(target.order, 3)
        self.assertTrue(target.is_abelian)
        self.assertEqual(sorted(target.element_orders.tolist()), [1, 3, 3])
        self.assertTrue(projection.is_homomorphism())
        self.assertEqual(projection.kernel(), group.mask([0, 3]))
        self.assertEqual(projection(1), projection(4))

    def test_subgroup_as_group(self):
        group = load_group('a5')
        stabilizer = find_large_subgroup(group, 10)
        sub, embedding = subgroup_as_group(group, stabilizer)
        self.assertEqual(sub.order, 12)
        self.assertEqual(int(embedding[0]), 0)
        self.assertTrue(GroupHomomorphism(sub, group, embedding).is_homomorphism())
        self.assertEqual(len(right_coset_representatives(group, stabilizer)), 5)


if __name__ == '__main__':
    unittest.main()
