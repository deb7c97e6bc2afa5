"""
Tests interval sets, packing numbers, the Cantor pair and torus square roots.
"""

import unittest
from fractions import Fraction

from loguru import logger

from thinbase.errors import GridBudgetError, ThinBaseError
from thinbase.minkowski import IntervalSet, ProductScale, cantor_sets, circle_packing_number, cover_radius, cover_radius_bound, dimension_lower_bound, estimate_dimension, is_packing, packing_centers, packing_number, product_dim_inequality_check, quaternary_scales, sumset, sumset_cover_check, torus_square_root
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_interval_set(self):
        merged = IntervalSet.from_fractions([(Fraction(1, 2), 1), (0, Fraction(1, 2)), (2, 3)])
        self.assertEqual(merged.fractions(), [(0, 1), (2, 3)])
        self.assertEqual(merged.length, 2)
        self.assertEqual(merged.bounds, (0, 3))
        self.assertEqual(len(IntervalSet.points([0, 1, 1])), 2)

        wrapped = IntervalSet.from_fractions([(Fraction(3, 4), Fraction(5, 4))]).mod_one()
        self.assertEqual(wrapped.fractions(), [(0, Fraction(1, 4)), (Fraction(3, 4), 1)])

        with self.assertRaises(ThinBaseError):
            IntervalSet([], [], 1)
        with self.assertRaises(ThinBaseError):
            IntervalSet([2], [1], 1)

    def test_interval_packing(self):
        interval = IntervalSet.from_fractions([(-1, 1)])
        for k in range(1, 101):
            self.assertEqual(packing_number(interval, Fraction(1, k)), k, f'delta = 1/{k}')
        self.assertEqual(packing_number([0, Fraction(1, 2), 1], Fraction(1, 5), within_hull=False), 3)
        self.assertEqual(packing_number([0], Fraction(1, 5)), 1)
        with self.assertRaises(ThinBaseError):
            packing_number(interval, 0)

    def test_circle_packing(self):
        circle = IntervalSet.from_fractions([(0, 1)])
        for j in range(0, 6):
            self.assertEqual(circle_packing_number(circle, Fraction(1, 2 * 4**j)), 4**j)
        self.assertEqual(circle_packing_number([0, Fraction(9, 10)], Fraction(1, 10)), 1)

    def test_cantor_sets_at_depth_one(self):
        a, b = cantor_sets(1)
        self.assertEqual(a.fractions(), [(-1, Fraction(-11, 12)), (Fraction(-3, 4), Fraction(-2, 3)), (0, Fraction(1, 12)), (Fraction(1, 4), Fraction(1, 3))])
        self.assertEqual(b.fractions(), [(0, Fraction(1, 6)), (Fraction(1, 2), Fraction(2, 3))])
        self.assertEqual(sumset(a, b).fractions(), [(-1, 1)])
        with self.assertRaises(ThinBaseError):
            cantor_sets(13)

    def test_cantor_pair_covers(self):
        for depth in range(1, 11):
            a, b = cantor_sets(depth)
            check = sumset_cover_check(a, b)
            self.assertTrue(check.covered, f'depth {depth}')
            self.assertEqual(check.worst_gap, 0)
        a, _ = cantor_sets(4)
        alone = sumset_cover_check(a, IntervalSet.points([0]))
        self.assertFalse(alone.covered)
        self.assertGreater(alone.worst_gap, 0)
        self.assertTrue(sumset_cover_check(a, IntervalSet.points([0]), tolerance=1).covered)

    def test_cantor_dimensions(self):
        a, b = cantor_sets(10)
        scales = quaternary_scales(4, 10)
        for shape in [a, b]:
            estimate = estimate_dimension(shape, scales)
            self.assertGreaterEqual(estimate.slope, 0.45)
            self.assertLessEqual(estimate.slope, 0.55)
            self.assertEqual(estimate.packing_counts, sorted(estimate.packing_counts))
        self.assertAlmostEqual(estimate_dimension(IntervalSet.from_fractions([(-1, 1)]), scales).slope, 1, places=2)
        with self.assertRaises(ThinBaseError):
            estimate_dimension(a, scales[:1])

    def test_product_inequality(self):
        a, b = cantor_sets(8)
        scales = quaternary_scales(2, 6)
        interval = IntervalSet.from_fractions([(-1, 1)])
        for first, second in [(a, b), (a, a), ([0], interval), (interval, interval)]:
            rows = product_dim_inequality_check(first, second, scales)
            self.assertEqual(len(rows), len(scales))
            for row in rows:
                self.assertTrue(row.lower_holds, row.to_dict())
                self.assertTrue(row.upper_holds, row.to_dict())
                self.assertEqual(row.product_packing, row.n_x * row.n_y)
                self.assertLessEqual(row.product_packing_4, row.cover_cells)
                self.assertLess(row.cover_radius, 2 * row.delta)

        for row in product_dim_inequality_check([0], interval, [Fraction(1, 10), Fraction(1, 100)]):
            self.assertEqual(row.product_packing, row.n_y)

    def test_product_scale_rejects_wrong_counts(self):
        delta = Fraction(1, 16)
        self.assertTrue(ProductScale(delta, 3, 5, 15, 4, 15, delta).lower_holds)
        self.assertTrue(ProductScale(delta, 3, 5, 15, 4, 15, delta).upper_holds)
        rows = [
            (ProductScale(delta, 3, 5, 14, 4, 15, delta), False, True),
            (ProductScale(delta, 3, 5, 0, 4, 15, delta), False, True),
            (ProductScale(delta, 3, 5, 15, 16, 15, delta), True, False),
            (ProductScale(delta, 3, 5, 15, 4, 16, delta), True, False),
            (ProductScale(delta, 3, 5, 15, 4, 15, 4 * delta), True, False),
        ]
        for row, lower, upper in rows:
            self.assertEqual(row.lower_holds, lower, row.to_dict())
            self.assertEqual(row.upper_holds, upper, row.to_dict())

    def test_packing_centers(self):
        interval = IntervalSet.from_fractions([(-1, 1)])
        runs = packing_centers(interval, Fraction(1, 10))
        self.assertEqual(runs, [(Fraction(-9, 10), 10)])
        self.assertTrue(is_packing(interval, runs, Fraction(1, 10)))
        self.assertFalse(is_packing(interval, runs, Fraction(1, 5)))
        self.assertFalse(is_packing(interval, [(Fraction(-9, 10), 11)], Fraction(1, 10)))
        self.assertFalse(is_packing([0, 1], [(Fraction(1, 2), 1)], Fraction(1, 10)))

        a, _ = cantor_sets(6)
        for j in range(1, 7):
            delta = Fraction(1, 4**j)
            runs = packing_centers(a, delta, within_hull=False)
            self.assertTrue(is_packing(a, runs, delta), f'delta = 4^-{j}')
            self.assertEqual(sum(steps for _, steps in runs), packing_number(a, delta, within_hull=False))

    def test_cover_radius(self):
        interval = IntervalSet.from_fractions([(0, 1)])
        self.assertEqual(cover_radius_bound(interval, Fraction(1, 10)), Fraction(1, 10))
        self.assertEqual(cover_radius_bound([0, Fraction(3, 20), 1], Fraction(1, 10)), Fraction(3, 20))
        self.assertEqual(cover_radius(interval, [(0, 1)], Fraction(1, 10)), 1)
        self.assertEqual(cover_radius(interval, [(0, 1), (1, 1)], Fraction(1, 10)), Fraction(1, 2))
        self.assertEqual(cover_radius([0, 1], [(0, 1), (1, 1)], Fraction(1, 10)), 0)
        with self.assertRaises(ThinBaseError):
            cover_radius(interval, [], Fraction(1, 10))

    def test_dimension_lower_bound(self):
        self.assertTrue(dimension_lower_bound(0.5, 0.5, 1).holds)
        self.assertTrue(dimension_lower_bound(0.49, 0.48, 1).holds)
        self.assertFalse(dimension_lower_bound(0.3, 0.4, 1).holds)

    def test_torus_square_roots(self):
        for d, depth, grid_base in [(1, 8, 4), (2, 8, 2), (3, 6, 2)]:
            root = torus_square_root(d, depth, grid_base=grid_base)
            self.assertEqual(root.resolution, grid_base**depth)
            self.assertTrue(root.certified, f'd = {d}')
            self.assertEqual(root.worst_gap, 0)
            self.assertLessEqual(abs(root.dim_x - d / 2), 0.05 * d, f'd = {d}')
            self.assertLessEqual(abs(root.dim_y - d / 2), 0.05 * d, f'd = {d}')
            self.assertTrue(dimension_lower_bound(root.dim_x, root.dim_y, d).holds)
        self.assertEqual(torus_square_root(2, 6).coordinates, [('circle', 'point'), ('point', 'circle')])

    def test_torus_bad_input(self):
        with self.assertRaises(GridBudgetError):
            torus_square_root(3, 10)
        with self.assertRaises(GridBudgetError):
            torus_square_root(2, 8, grid_base=4)
        with self.assertRaises(ThinBaseError):
            torus_square_root(1, 6, grid_base=3)
        with self.assertRaises(ThinBaseError):
            torus_square_root(0, 6)
        with self.assertRaises(ThinBaseError):
            torus_square_root(1, 1)


if __name__ == '__main__':
    unittest.main()
