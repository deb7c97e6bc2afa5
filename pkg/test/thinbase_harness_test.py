"""
Tests the command line subcommands end to end, through their reports and exit codes.
"""

import csv
import io
import math
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import orjson
from loguru import logger

from thinbase.__main__ import main
from thinbase.errors import ReportSchemaError
from thinbase.harness import read_report, run
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_decompose(self):
        code, report = utils.run_report('decompose', ['--group', 'a5', '--x', '11'])
        self.assertEqual(code, 0)
        self.assertEqual(report['command'], 'decompose')
        self.assertTrue(report['certified'])
        results = report['results']
        self.assertTrue(results['verified'])
        self.assertTrue(results['trace_checked'])
        self.assertEqual(results['pairwise_uncovered'], [])
        self.assertLessEqual(results['size_x'], 11)
        self.assertEqual(results['trace'][0]['case'], 'simple-max')

    def test_square_root(self):
        code, report = utils.run_report('square-root', ['--group', 'z7'])
        self.assertEqual(code, 0)
        self.assertEqual(report['results']['size'], 5)
        self.assertAlmostEqual(report['results']['bound'], math.sqrt(56))

        code, report = utils.run_report('square-root', ['--group', 'a5', '--random', '--no-verify'])
        self.assertEqual(code, 0)
        self.assertTrue(report['results']['verified'])
        self.assertFalse(report['arguments']['verify'])

    def test_thin_base_with_sweep(self):
        with tempfile.TemporaryDirectory(prefix='test') as tmpdir:
            table = Path(tmpdir) / 'sweep.csv'
            code, report = utils.run_report('thin-base', ['--group', 'a5', '--sweep', '5', '10', '20', '60', '--sweep-attempts', '3', '--csv', str(table)])
            self.assertEqual(code, 0)
            self.assertTrue(report['results']['sweep_nondecreasing'])
            self.assertEqual(report['results']['x0'], 60)
            with open(table, newline='', encoding='UTF-8') as file:
                rows = list(csv.DictReader(file))
            self.assertEqual([int(row['size']) for row in rows], [5, 10, 20, 60])

    def test_uncertified_exit_code(self):
        code, report = utils.run_report('thin-base', ['--group', 'a5', '--x0', '2', '--attempts', '2'])
        self.assertEqual(code, 1)
        self.assertFalse(report['certified'])
        self.assertFalse(report['results']['sample']['certified'])

    def test_waring_check(self):
        code, report = utils.run_report('waring-check', ['--group', 'a5', '--word', 'a^-1b^-1ab'])
        self.assertEqual(code, 0)
        self.assertTrue(report['results']['oracle_agrees'])

    def test_frobenius(self):
        code, report = utils.run_report('frobenius', ['--table', 's4', '--group', 's4', '--classes', '2a', '2a', '1a'])
        self.assertEqual(code, 0)
        self.assertEqual(report['results']['counts'][0]['count'], 6)
        self.assertEqual(report['results']['counts'][0]['brute_force'], 6)

        code, report = utils.run_report('frobenius', ['--table', 'a5', '--group', 'a5'])
        self.assertEqual(code, 0)
        self.assertEqual(len(report['results']['counts']), 125)

        code, _ = utils.run_report('frobenius', ['--table', 'a5', '--group', 's4'])
        self.assertEqual(code, 2)

    def test_char_sum(self):
        code, report = utils.run_report('char-sum', ['--table', 'a5', '--classes', '5a', '5a', '1a'])
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report['results']['value'][0], 4)
        self.assertAlmostEqual(report['results']['value'][1], 0)
        self.assertEqual(report['results']['count'], 12)
        self.assertLess(report['results']['rearrangement_residual'], 1e-9)

    def test_perm_stats(self):
        code, report = utils.run_report('perm-stats', ['--min-fixed', '5', '3', '--perm', '1', '2', '3', '4', '5', '0', '7', '6'])
        self.assertEqual(code, 0)
        self.assertEqual(report['results']['min_fixed']['exact'], 11)
        self.assertEqual(report['results']['min_fixed']['bound'], 40)
        self.assertEqual(report['results']['min_fixed']['enumerated'], 11)
        self.assertAlmostEqual(report['results']['stat']['E'], 5 / 18)

        code, report = utils.run_report('perm-stats', ['--ratio', '0', '1', '2', '3', '4', '--c1', '5', '--c2', '5'])
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report['results']['ratio']['value'], 2.5)

        code, _ = utils.run_report('perm-stats', [])
        self.assertEqual(code, 2)

    def test_tail_bounds(self):
        code, report = utils.run_report('tail-bounds', ['--query', '4', '2', '2'])
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report['results']['disjoint']['exact'], 1 / 6)

        code, report = utils.run_report('tail-bounds', ['--n-max', '12'])
        self.assertEqual(code, 0)
        self.assertEqual(report['results']['failure_count'], 0)

    def test_mink_dim(self):
        with tempfile.TemporaryDirectory(prefix='test') as tmpdir:
            table = Path(tmpdir) / 'counts.csv'
            code, report = utils.run_report('mink-dim', ['--depth', '8', '--first', '2', '--last', '8', '--product', '--torus', '2', '--csv', str(table)])
            self.assertEqual(code, 0)
            self.assertTrue(report['results']['cantor_cover']['covered'])
            self.assertTrue(report['results']['torus']['certified'])
            self.assertEqual(sorted(report['results']['estimates']), ['cantor-a', 'cantor-b', 'interval'])
            with open(table, newline='', encoding='UTF-8') as file:
                self.assertEqual(len(list(csv.DictReader(file))), 3 * 7)

    def test_corpus(self):
        code, report = utils.run_report('corpus', [])
        self.assertEqual(code, 0)
        self.assertIn('a7', report['results']['groups'])
        self.assertIn('a5', report['results']['tables'])

    def test_bad_input(self):
        code, report = utils.run_report('decompose', ['--group', 'no_such_group'])
        self.assertEqual(code, 2)
        self.assertEqual(report, {})

        code, _ = utils.run_report('corpus', ['--configfile', '/no/such/thinbase.cfg'])
        self.assertEqual(code, 2)

    def test_report_merge(self):
        with tempfile.TemporaryDirectory(prefix='test') as tmpdir:
            first, second, merged = Path(tmpdir) / 'first.json', Path(tmpdir) / 'second.json', Path(tmpdir) / 'merged.json'
            self.assertEqual(run('square-root', ['--group', 'z7', '--out', str(first)]), 0)
            self.assertEqual(run('tail-bounds', ['--query', '10', '3', '4', '--out', str(second)]), 0)
            self.assertEqual(run('report-merge', [str(first), str(second), '--out', str(merged)]), 0)
            reports = read_report(merged)['results']['reports']
            self.assertEqual([report['command'] for report in reports], ['square-root', 'tail-bounds'])

            broken = Path(tmpdir) / 'broken.json'
            broken.write_bytes(orjson.dumps({'command': 'corpus'}))
            with self.assertRaises(ReportSchemaError):
                read_report(broken)
            self.assertEqual(run('report-merge', [str(first), str(broken), '--out', str(merged)]), 2)

    def test_normalized_timings_are_reproducible(self):
        with tempfile.TemporaryDirectory(prefix='test') as tmpdir:
            config = Path(tmpdir) / 'thinbase.cfg'
            config.write_text('[harness]\nnormalize_timings = True\n', encoding='UTF-8')
            outputs = [Path(tmpdir) / 'first.json', Path(tmpdir) / 'second.json']
            codes = [run('thin-base', ['--group', 'a5', '--x0', '20', '-c', str(config), '--out', str(output)]) for output in outputs]
            self.assertEqual(codes[0], codes[1])
            self.assertEqual(outputs[0].read_bytes(), outputs[1].read_bytes())
            self.assertEqual(read_report(outputs[0])['timings'], {})

    @patch('sys.stdout', new_callable=io.StringIO)
    def test_main_help(self, mock_stdout):
        with patch.object(sys, 'argv', ['thinbase', 'help']):
            main()
        self.assertIn('decompose', mock_stdout.getvalue())
        self.assertIn('mink-dim', mock_stdout.getvalue())

    def test_main_exit_codes(self):
        with patch.object(sys, 'argv', ['thinbase', 'no-such-command']), patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as context:
                main()
        self.assertEqual(context.exception.code, 2)

        with patch.object(sys, 'argv', ['thinbase', 'corpus', '--out', '/dev/null']):
            with self.assertRaises(SystemExit) as context:
                main()
        self.assertEqual(context.exception.code, 0)


if __name__ == '__main__':
    unittest.main()
