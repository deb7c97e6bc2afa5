"""
Tests character tables, class product counts and the shipped corpus.
"""

import tempfile
import unittest
from pathlib import Path
from unittest.mock import PropertyMock, patch

import numpy
from loguru import logger

from thinbase.characters import CharacterTable, brute_force_count, brute_force_counts, char_sum, char_sum_criterion, class_product_counts, count_criterion, cyclic_table, degree_zeta, frobenius_count, table_from_dict, validate_table
from thinbase.corpus import load_group, load_table, shipped_groups, shipped_tables
from thinbase.errors import GroupConstructionError, TableValidationError
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_a5_counts(self):
        table = load_table('a5')
        self.assertEqual(frobenius_count(table, '5a', '5a', '1a'), 12)
        value, modulus = char_sum(table, '5a', '5a', '1a')
        self.assertAlmostEqual(value.real, 4, places=9)
        self.assertAlmostEqual(modulus, 4, places=9)
        self.assertEqual(round(frobenius_count(table, '2a', '2a', '1a')), 15)

    def test_char_sum_reads_the_trivial_rows_once(self):
        table = load_table('a5')
        expected = char_sum(table, '5a', '5a', '1a')
        with patch.object(CharacterTable, 'trivial_rows', new_callable=PropertyMock, return_value=table.trivial_rows) as trivial_rows:
            self.assertEqual(char_sum(table, '5a', '5a', '1a'), expected)
            self.assertEqual(trivial_rows.call_count, 1)

    def test_every_shipped_table_matches_brute_force(self):
        groups = set(shipped_groups())
        for name in shipped_tables():
            if name not in groups:
                continue
            table, group = load_table(name), load_group(name)
            validation = validate_table(table, group)
            self.assertTrue(validation.valid, name)
            order = validation.class_map
            formula = class_product_counts(table)
            brute = brute_force_counts(group)[numpy.ix_(order, order, order)]
            self.assertTrue(numpy.all(numpy.abs(formula - brute) < 1e-6), name)

            sizes = table.sizes
            size = len(table.classes)
            for i in range(size):
                for j in range(size):
                    for k in range(size):
                        value, _ = char_sum(table, i, j, k)
                        rearranged = brute[i, j, k] * table.group_order / (sizes[i] * sizes[j]) - 1
                        self.assertLess(abs(value - rearranged), 1e-9, f'{name} {i} {j} {k}')

    def test_single_brute_force_count(self):
        group = load_group('s4')
        classes = group.classes
        transpositions = next(c.members for c in classes if c.size == 6 and group.element_orders[c.representative] == 2)
        self.assertEqual(brute_force_count(group, transpositions, transpositions, 0), 6)

    def test_criteria_agree(self):
        table = load_table('a5')
        size = len(table.classes)
        for i in range(size):
            for j in range(size):
                for k in range(size):
                    self.assertEqual(count_criterion(table, i, j, k), char_sum_criterion(table, i, j, k))

    def test_cyclic_table(self):
        table = cyclic_table(6)
        self.assertTrue(validate_table(table).valid)
        self.assertEqual([c.rep_order for c in table.classes], [1, 6, 3, 2, 3, 6])
        self.assertEqual(round(frobenius_count(table, 2, 3, 5)), 1)
        self.assertEqual(round(frobenius_count(table, 2, 3, 4)), 0)

    def test_validation_failures(self):
        self.assertFalse(validate_table(load_table('a5'), load_group('s4')).valid)

        document = load_table('s4').to_dict()
        document['chars'][1][1] = [5, 0]
        self.assertFalse(validate_table(table_from_dict(document)).valid)

        with self.assertRaises(TableValidationError):
            table_from_dict({'group': 'g', 'order': 1, 'classes': []})
        with self.assertRaises(TableValidationError):
            load_table('a5').class_index('9z')

    def test_degree_zeta(self):
        table = load_table('s5')
        self.assertAlmostEqual(degree_zeta(table, 0), 7)
        self.assertAlmostEqual(degree_zeta(table, 2), 2 + 2 / 16 + 2 / 25 + 1 / 36)
        self.assertAlmostEqual(degree_zeta([1, 1], 1), 2)

    def test_corpus(self):
        self.assertIn('a5', shipped_groups())
        self.assertIn('z7', shipped_groups())
        self.assertIn('z12', shipped_tables())
        self.assertIn('psl2_7', shipped_tables())
        self.assertEqual(load_table('z12').group_order, 12)
        with self.assertRaises(FileNotFoundError):
            load_table('z13')
        with self.assertRaises(FileNotFoundError):
            load_group('no_such_group')

    def test_group_files(self):
        with tempfile.TemporaryDirectory(prefix='test') as tmpdir:
            good = Path(tmpdir) / 'klein.json'
            good.write_text('{"name": "klein", "kind": "table", "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]}', encoding='UTF-8')
            group = load_group(good)
            self.assertEqual(group.name, 'klein')
            self.assertTrue(group.is_abelian)

            bad = Path(tmpdir) / 'bad.json'
            bad.write_text('{"name": ', encoding='UTF-8')
            with self.assertRaises(GroupConstructionError):
                load_group(bad)


if __name__ == '__main__':
    unittest.main()
