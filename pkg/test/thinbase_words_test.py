"""
Tests free words, word images and the Waring check.
"""

import unittest

from loguru import logger

from thinbase.corpus import load_group
from thinbase.errors import TrivialWordError, WordBudgetError
from thinbase.groups import cyclic_group
from thinbase.seeds import substream
from thinbase.words import FreeWord, evaluate_tuples, evaluate_word, parse_word, reduce_word, waring_check, word_image
from test import utils


class UnitTestAsTheDefaultExecution(unittest.TestCase):
    """
    Always test first.
    """

    def __init__(self, method_name='runTest'):
        super().__init__(method_name)

        if not utils.is_debugging():
            logger.remove()

    def test_parse_and_render(self):
        word = parse_word('a^-1b^-1ab')
        self.assertEqual(word.rank, 2)
        self.assertEqual(word.syllables, ((0, -1), (1, -1), (0, 1), (1, 1)))
        self.assertEqual(str(word), 'a^-1b^-1ab')
        self.assertEqual(parse_word('a^2'), FreeWord(1, [(0, 2)]))
        self.assertEqual(str(parse_word('a a')), 'a^2')

    def test_bad_literals(self):
        for literal in ['', 'a^', 'A', 'a^-b', '1a']:
            with self.assertRaises(TrivialWordError):
                parse_word(literal)

    def test_free_reduction(self):
        self.assertEqual(reduce_word([(0, 1), (1, 1), (1, -1), (0, 2)]), FreeWord(2, [(0, 3)]))
        self.assertEqual(reduce_word([(0, 1), (0, 2)], rank=3).rank, 3)
        with self.assertRaises(TrivialWordError):
            reduce_word([(0, 1), (1, 2), (1, -2), (0, -1)])
        with self.assertRaises(TrivialWordError):
            reduce_word([(2, 1)], rank=2)

    def test_evaluate(self):
        group = cyclic_group(6)
        commutator = parse_word('a^-1b^-1ab')
        self.assertEqual(evaluate_word(commutator, group, [2, 5]), 0)
        self.assertEqual(evaluate_word(parse_word('a^2b'), group, [2, 1]), 5)
        with self.assertRaises(TrivialWordError):
            evaluate_word(commutator, group, [1])

    def test_reduction_keeps_values(self):
        rng = substream(5)
        for name in ['s4', 'a5', 'psl2_7']:
            group = load_group(name)
            tuples = rng.integers(0, group.order, size=(1000, 3))
            for _ in range(20):
                length = int(rng.integers(1, 9))
                raw = [(int(g), int(e)) for g, e in zip(rng.integers(0, 3, size=length), rng.integers(-3, 4, size=length))]
                unreduced = FreeWord(3, raw)
                values = evaluate_tuples(unreduced, group, tuples)
                try:
                    reduced = reduce_word(raw, rank=3)
                except TrivialWordError:
                    self.assertTrue((values == 0).all(), f'{name}: {raw}')
                    continue
                self.assertTrue((evaluate_tuples(reduced, group, tuples) == values).all(), f'{name}: {raw}')
                self.assertEqual(evaluate_word(reduced, group, tuples[0].tolist()), int(values[0]))

            self.assertTrue((evaluate_tuples(FreeWord(2, [(0, 1), (1, 2), (1, -2), (0, -1)]), group, tuples[:, :2]) == 0).all())

    def test_a5_images(self):
        group = load_group('a5')
        squares = word_image(group, parse_word('a^2'))
        self.assertTrue(squares.exact)
        self.assertEqual(len(squares.image), 45)
        self.assertEqual(squares.trials, 60)

        commutators = word_image(group, parse_word('a^-1b^-1ab'))
        self.assertEqual(len(commutators.image), 60)

    def test_sampled_image(self):
        group = load_group('a5')
        word = parse_word('a^2')
        exact = word_image(group, word).image
        single = word_image(group, word, mode='sampled', trials=600_000, seed=1, workers=1)
        threaded = word_image(group, word, mode='sampled', trials=600_000, seed=1, workers=3)
        self.assertFalse(single.exact)
        self.assertEqual(single.image, threaded.image)
        self.assertTrue(single.image <= exact)
        self.assertIn(0, word_image(group, word, mode='sampled', trials=1).image)

    def test_budget(self):
        group = load_group('a5')
        with self.assertRaises(WordBudgetError):
            word_image(group, parse_word('a^-1b^-1ab'), exhaustive_budget=1000)

    def test_waring(self):
        squares = parse_word('a^2')
        result = waring_check(cyclic_group(2), squares, squares)
        self.assertFalse(result.holds)
        self.assertEqual(result.uncovered.to_list(), [1])

        for name in ['a5', 'a6', 'psl2_7']:
            result = waring_check(load_group(name), squares, squares)
            self.assertTrue(result.holds, name)
            self.assertTrue(result.uncovered.is_empty())


if __name__ == '__main__':
    unittest.main()
