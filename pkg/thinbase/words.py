"""
Words in a free group and the word maps they induce on a finite group.

A word of rank k substitutes a k-tuple of group elements for its generators, the image w(G) is the
set of all values.  Images are unions of conjugacy classes, both modes close what they found under
conjugation before returning.
"""

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy
from loguru import logger

from thinbase.errors import TrivialWordError, WordBudgetError
from thinbase.groups import FiniteGroup, SubsetMask, product_cover_check
from thinbase.seeds import substream

DEFAULT_EXHAUSTIVE_BUDGET = 100_000_000
DEFAULT_SAMPLE_FACTOR = 200

# tuples evaluated per numpy call
_CHUNK = 1 << 18

_SYLLABLE = re.compile(r'([a-z])(?:\^(-?\d+))?')

Syllable = Tuple[int, int]


@dataclass(init=False, repr=False, eq=True, order=False, unsafe_hash=True, frozen=False)
class FreeWord:
    rank: int
    """
    Number of free generators, the word map is defined on G^rank.
    """

    syllables: Tuple[Syllable, ...]
    """
    (generator, exponent) pairs, freely reduced.
    """

    def __init__(self, rank: int, syllables: Sequence[Syllable]):
        self.rank = rank
        self.syllables = tuple((int(g), int(e)) for g, e in syllables)

    def __str__(self):
        parts = []
        for generator, exponent in self.syllables:
            letter = chr(ord('a') + generator)
            parts.append(letter if exponent == 1 else f'{letter}^{exponent}')
        return ''.join(parts)

    def __repr__(self):
        return f'FreeWord({self}, rank={self.rank})'


def reduce_word(raw: Iterable[Syllable], rank: Optional[int] = None) -> FreeWord:
    """
    Free reduction: adjacent syllables on the same generator merge, zero exponents vanish, and
    the merge repeats against whatever becomes adjacent.
    """
    raw = [(int(g), int(e)) for g, e in raw]
    if rank is None:
        rank = max([g for g, _ in raw], default=0) + 1
    if rank < 1:
        raise TrivialWordError(f'word rank must be at least 1, found {rank}')

    stack: List[Syllable] = []
    for generator, exponent in raw:
        if not 0 <= generator < rank:
            raise TrivialWordError(f'generator {generator} is outside a free group of rank {rank}')
        if stack and stack[-1][0] == generator:
            exponent += stack.pop()[1]
        if exponent != 0:
            stack.append((generator, exponent))

    if not stack:
        raise TrivialWordError('word reduces to the identity')
    return FreeWord(rank, stack)


def parse_word(literal: str) -> FreeWord:
    """
    Letters a..z are generators, a caret gives an exponent: "a^-1b^-1ab" is the commutator.
    """
    text = literal.replace(' ', '')
    syllables = []
    position = 0
    for match in _SYLLABLE.finditer(text):
        if match.start() != position:
            break
        syllables.append((ord(match.group(1)) - ord('a'), int(match.group(2) or 1)))
        position = match.end()
    if position != len(text) or not text:
        raise TrivialWordError(f'cannot parse word literal "{literal}"')

    return reduce_word(syllables)


def evaluate_tuples(word: FreeWord, group: FiniteGroup, tuples: numpy.ndarray) -> numpy.ndarray:
    """
    Values of the word on every row of an (m, rank) array of element indices.
    """
    tuples = numpy.asarray(tuples, dtype=numpy.int64)
    result = numpy.zeros(len(tuples), dtype=numpy.int64)
    for generator, exponent in word.syllables:
        result = group.multiply(result, group.powers(tuples[:, generator], exponent))
    return result


def evaluate_word(word: FreeWord, group: FiniteGroup, elements: Sequence[int]) -> int:
    if len(elements) != word.rank:
        raise TrivialWordError(f'word of rank {word.rank} evaluated on {len(elements)} elements')
    return int(evaluate_tuples(word, group, numpy.asarray([elements]))[0])


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class WordImage:
    word: FreeWord
    group: FiniteGroup
    image: SubsetMask

    exact: bool
    """
    True when every tuple of G^rank was evaluated.  A sampled image is a subset of the true one.
    """

    trials: int
    """
    Tuples evaluated.
    """

    def __init__(self, word: FreeWord, group: FiniteGroup, image: SubsetMask, exact: bool, trials: int):
        self.word = word
        self.group = group
        self.image = image
        self.exact = exact
        self.trials = trials

    def to_dict(self) -> Dict[str, Any]:
        return {'word': str(self.word), 'group': self.group.name, 'size': len(self.image), 'exact': self.exact, 'trials': self.trials}


def conjugation_closure(mask: SubsetMask) -> SubsetMask:
    labels = mask.group.class_of
    return SubsetMask(mask.group, numpy.isin(labels, numpy.unique(labels[mask.bits])))


def __exhaustive_chunk(word: FreeWord, group: FiniteGroup, start: int, stop: int) -> numpy.ndarray:
    columns = numpy.unravel_index(numpy.arange(start, stop, dtype=numpy.int64), (group.order,) * word.rank)
    hit = numpy.zeros(group.order, dtype=bool)
    hit[evaluate_tuples(word, group, numpy.stack(columns, axis=1))] = True
    return hit


def __sampled_chunk(word: FreeWord, group: FiniteGroup, seed: int, index: int, size: int) -> numpy.ndarray:
    tuples = substream(seed, index).integers(0, group.order, size=(size, word.rank))
    hit = numpy.zeros(group.order, dtype=bool)
    hit[evaluate_tuples(word, group, tuples)] = True
    return hit


def word_image(group: FiniteGroup, word: FreeWord, mode: str = 'exhaustive', trials: Optional[int] = None, seed: int = 0, workers: int = 1, exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET, sample_factor: int = DEFAULT_SAMPLE_FACTOR) -> WordImage:
    """
    w(G), by evaluating every tuple (mode 'exhaustive') or uniformly random tuples (mode 'sampled',
    sample_factor * |G| of them unless trials is given).  Sampled chunks are seeded by their chunk
    number, so the image does not depend on the worker count.
    """
    n = group.order
    if mode == 'exhaustive':
        total = n**word.rank
        if total > exhaustive_budget:
            raise WordBudgetError(f'{group.name}: {n}^{word.rank} = {total} tuples exceeds the exhaustive budget of {exhaustive_budget}')
        jobs = [(start, min(start + _CHUNK, total)) for start in range(0, total, _CHUNK)]
        evaluate = lambda job: __exhaustive_chunk(word, group, job[0], job[1])  # noqa: E731
    elif mode == 'sampled':
        total = trials if trials is not None else sample_factor * n
        jobs = [(index, min(_CHUNK, total - index * _CHUNK)) for index in range(-(-total // _CHUNK))]
        evaluate = lambda job: __sampled_chunk(word, group, seed, job[0], job[1])  # noqa: E731
    else:
        raise WordBudgetError(f'unknown word image mode {mode}')

    hit = numpy.zeros(n, dtype=bool)
    hit[0] = True
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for part in executor.map(evaluate, jobs):
                hit |= part
    else:
        for job in jobs:
            hit |= evaluate(job)

    image = conjugation_closure(SubsetMask(group, hit))
    logger.debug('{}: image of {} has {} elements from {} tuples ({})', group.name, word, len(image), total, mode)
    return WordImage(word, group, image, mode == 'exhaustive', total)


@dataclass(init=False, repr=False, eq=False, order=False, unsafe_hash=False, frozen=False)
class WaringResult:
    holds: bool
    """
    w1(G) w2(G) = G.
    """

    uncovered: SubsetMask
    first: WordImage
    second: WordImage

    def __init__(self, holds: bool, uncovered: SubsetMask, first: WordImage, second: WordImage):
        self.holds = holds
        self.uncovered = uncovered
        self.first = first
        self.second = second

    def to_dict(self) -> Dict[str, Any]:
        return {'holds': self.holds, 'uncovered': self.uncovered.to_list(), 'first': self.first.to_dict(), 'second': self.second.to_dict()}


def waring_check(group: FiniteGroup, first: FreeWord, second: FreeWord, workers: int = 1, exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> WaringResult:
    """
    Whether every element is a product of a value of the first word and a value of the second,
    over exhaustively computed images.
    """
    first_image = word_image(group, first, workers=workers, exhaustive_budget=exhaustive_budget)
    second_image = first_image if second == first else word_image(group, second, workers=workers, exhaustive_budget=exhaustive_budget)
    uncovered = product_cover_check(group, first_image.image, second_image.image, group.full(), workers)
    holds = uncovered.is_empty()
    if holds:
        logger.success('{}: {} . {} covers the group', group.name, first, second)
    else:
        logger.warning('{}: {} . {} misses {} elements', group.name, first, second, len(uncovered))
    return WaringResult(holds, uncovered, first_image, second_image)
