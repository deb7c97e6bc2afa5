"""
Thinbase configuration holder
"""

from dataclasses import dataclass
from pathlib import Path

from configupdater import ConfigUpdater


# noinspection PyDataclass
@dataclass(init=False, repr=False, eq=True, order=False, unsafe_hash=False, frozen=False)
class ThinBaseConfig:
    # pylint: disable=too-many-instance-attributes

    config_file: Path
    """
    Location of config file used to generate this config.
    """

    config_updater: ConfigUpdater
    """
    Parsed ini file this config was read from, used to write it back out.
    """

    table_size_cap: int = 1_000_000
    """
    Largest group the breadth first closure of a set of generators may reach.
    Building a group beyond this size is an error.
    """

    max_table_order: int = 5000
    """
    Groups up to this order materialize a full multiplication table.  Larger
    permutation groups multiply by composing permutation images.
    """

    assoc_exhaustive_limit: int = 512
    """
    Ingested multiplication tables up to this order are checked for associativity
    on every triple.
    """

    assoc_random_triples: int = 100_000
    """
    Number of random triples checked for associativity above assoc_exhaustive_limit.
    """

    exhaustive_budget: int = 100_000_000
    """
    Upper bound on |G|^rank for exhaustive word images.
    """

    sample_factor: int = 200
    """
    Sampled word images draw sample_factor * |G| random tuples.
    """

    pair_budget: int = 2000
    """
    Random generator pairs tried by the two-generated stage of the large subgroup search.
    """

    class_union_limit: int = 20
    """
    Groups with at most this many conjugacy classes have their normal subgroups found
    by enumerating every union of classes.
    """

    seed: int = 0
    """
    Master seed, every random draw is made from a substream derived from it.
    """

    max_attempts: int = 20
    """
    Attempts made by the thin pair sampler before returning its best uncertified result.
    """

    workers: int = 1
    """
    Threads used by the covering kernel, sampler attempts and word images.
    """

    recheck_fraction: float = 0.01
    """
    Fraction of a certified target set that is rechecked element by element.
    """

    size_factor: float = 2.0
    """
    Per side size of thin sets in a stratified cover, as a multiple of sqrt(|A| ln |A|).
    """

    max_grid_points: int = 10_000_000
    """
    Largest grid a torus cover certification may sweep.
    """

    max_depth: int = 12
    """
    Deepest digit truncation of the Cantor sets.
    """

    verify: bool = True
    """
    Run the independent brute force oracles where one exists.
    """

    normalize_timings: bool = False
    """
    Leave wall clock timings out of reports, so reports of identical runs are identical.
    """

    console_format: str = '{time:HH:mm:ss} | <level>{level: <8}</level> | {message}'
    """
    loguru format used for console output.
    """

    debug: bool = False
    """
    Verbose logging.
    """

    diagnose_errors: bool = False
    """
    Add variable values to logged stack traces.
    """

    def __init__(self):
        pass

    def __str__(self):
        config = self.to_dict()

        output = []
        for key in config:
            output.append(f'{key}:')
            for value in config[key]:
                output.append(f'  {value}: {config[key][value]}')

        return '\n'.join(output)

    def __hash__(self):
        return hash(self.__str__())

    def to_dict(self) -> dict:
        config = {
            'Group Config': {
                'table_size_cap': self.table_size_cap,
                'max_table_order': self.max_table_order,
                'assoc_exhaustive_limit': self.assoc_exhaustive_limit,
                'assoc_random_triples': self.assoc_random_triples,
            },
            'Word Config': {
                'exhaustive_budget': self.exhaustive_budget,
                'sample_factor': self.sample_factor,
            },
            'Subgroup Config': {
                'pair_budget': self.pair_budget,
                'class_union_limit': self.class_union_limit,
            },
            'Sampler Config': {
                'seed': self.seed,
                'max_attempts': self.max_attempts,
                'workers': self.workers,
                'recheck_fraction': self.recheck_fraction,
                'size_factor': self.size_factor,
            },
            'Minkowski Config': {
                'max_grid_points': self.max_grid_points,
                'max_depth': self.max_depth,
            },
            'Harness Config': {
                'verify': self.verify,
                'normalize_timings': self.normalize_timings,
                'console_format': self.console_format,
                'debug': self.debug,
                'diagnose_errors': self.diagnose_errors,
            },
        }

        return config
