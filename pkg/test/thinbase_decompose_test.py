"""
Tests the residue construction for prime cyclic groups and the recursive decomposition.
"""

import math
import unittest
from fractions import Fraction

import numpy
from loguru import logger

from thinbase.corpus import load_group, shipped_groups
from thinbase.decompose import check_trace, cyclic_decompose, group_decompose, is_prime, largest_root, square_root, within_bounds
from thinbase.errors import ThinBaseError
from thinbase.groups import cyclic_group, find_large_subgroup, is_subgroup, product_cover_check
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_cyclic_small_primes(self):
        self.assertEqual(cyclic_decompose(2, 2), ([0, 1], [0]))
        self.assertEqual(cyclic_decompose(5, 2), ([0, 1], [0, 2, 4]))
        self.assertEqual(cyclic_decompose(11, 4.69), ([0, 1, 2, 3], [0, 4, 8]))

    def test_cyclic_bad_input(self):
        with self.assertRaises(ThinBaseError):
            cyclic_decompose(9, 3)
        with self.assertRaises(ThinBaseError):
            cyclic_decompose(7, 1.5)
        with self.assertRaises(ThinBaseError):
            cyclic_decompose(7, 8)

    def test_cyclic_sweep(self):
        for p in [p for p in range(2, 102) if is_prime(p)]:
            for x in numpy.linspace(2, p, 20):
                first, second = cyclic_decompose(p, float(x))
                sums = numpy.add.outer(first, second).ravel() % p
                self.assertEqual(len(numpy.unique(sums)), p, f'p = {p}, x = {x}')
                self.assertTrue(within_bounds(p, float(x), len(first), len(second)), f'p = {p}, x = {x}')

    def test_corpus_decompositions(self):
        for name in shipped_groups():
            group = load_group(name)
            n = group.order
            for x in sorted({2.0, float(math.ceil(math.sqrt(n))), math.sqrt(2 * n), n / 2, float(n)}):
                if x < 1:
                    continue
                certificate = group_decompose(group, x)
                self.assertTrue(certificate.verified, f'{name}, x = {x}')
                self.assertTrue(check_trace(certificate), f'{name}, x = {x}')
                self.assertTrue(product_cover_check(group, certificate.x, certificate.y, group.full()).is_empty())

    def test_a5_goes_through_a_maximal_subgroup(self):
        certificate = group_decompose(load_group('a5'), 11)
        self.assertTrue(certificate.verified)
        self.assertEqual(certificate.trace[0].case, 'simple-max')
        self.assertTrue(certificate.trace[0].mirrored)
        self.assertLessEqual(len(certificate.x), 11)
        self.assertLessEqual(len(certificate.y) * 11, 120)

    def test_prefer_quotient(self):
        group = load_group('sl2_3')
        certificate = group_decompose(group, math.sqrt(48), prefer_quotient=True)
        self.assertTrue(certificate.verified)
        self.assertEqual(certificate.trace[0].case, 'b')
        self.assertEqual(certificate.trace[0].subgroup_order, 2)
        self.assertEqual(certificate.trace[0].quotient_order, 24)
        self.assertTrue(check_trace(certificate))

    def test_broken_trace(self):
        certificate = group_decompose(load_group('s4'), 4)
        certificate.trace[0].subgroup_order = 5
        certificate.trace[0].case = 'a'
        self.assertFalse(check_trace(certificate))

    def test_square_roots(self):
        self.assertEqual(square_root(cyclic_group(7)).to_list(), [0, 1, 2, 3, 6])
        self.assertLessEqual(len(square_root(load_group('a5'))), 21)
        for name in shipped_groups():
            group = load_group(name)
            root = square_root(group)
            self.assertLessEqual(len(root) ** 2, 8 * group.order, name)
            self.assertTrue(product_cover_check(group, root, root, group.full()).is_empty(), name)

    def test_largest_root(self):
        for m in [2, 14, 48, 120, 2 * 5040, 2 * 20160, 10**12 + 1]:
            root = largest_root(m)
            self.assertLessEqual(Fraction(root) ** 2, m)
            self.assertGreater(Fraction(math.nextafter(root, math.inf)) ** 2, m)
        self.assertEqual(largest_root(16), 4.0)

    def test_recursion_depth(self):
        for name in shipped_groups():
            group = load_group(name)
            n = group.order
            for x in sorted({2.0, math.sqrt(n), largest_root(2 * n), n / 3}):
                if x < 1:
                    continue
                certificate = group_decompose(group, x)
                self.assertTrue(certificate.verified, f'{name}, x = {x}')
                self.assertLessEqual(max(step.depth for step in certificate.trace), math.log2(n), f'{name}, x = {x}')
                depths = [step.depth for step in certificate.trace]
                self.assertEqual(depths, sorted(depths))

    def test_large_subgroups_of_simple_groups(self):
        for name in ['a6', 'a7', 'psl2_7', 'psl2_8', 'psl2_11']:
            group = load_group(name)
            found = find_large_subgroup(group, math.sqrt(2 * group.order))
            self.assertIsNotNone(found, name)
            self.assertTrue(is_subgroup(found))
            self.assertGreaterEqual(len(found) ** 2, 2 * group.order)
            self.assertLess(len(found), group.order)


if __name__ == '__main__':
    unittest.main()
