"""
The shipped corpus of groups and character tables, and loading of user supplied group and table files.

A name like "a5" refers to thinbase/data/groups/a5.json (or data/tables/a5.json), anything that
exists on disk is read as a file.  Cyclic character tables z1..z12 come from the closed form.
"""

import re
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import orjson
from loguru import logger

from thinbase.characters import CharacterTable, cyclic_table, table_from_dict
from thinbase.configuration import ThinBaseConfig
from thinbase.errors import GroupConstructionError, TableValidationError
from thinbase.groups import FiniteGroup, build_group

MAX_CYCLIC_TABLE = 12

_CYCLIC = re.compile(r'^z(\d+)$')


def __data_dir(kind: str):
    return resources.files('thinbase').joinpath('data').joinpath(kind)


def __names(kind: str) -> List[str]:
    return sorted(entry.name[: -len('.json')] for entry in __data_dir(kind).iterdir() if entry.name.endswith('.json'))


def shipped_groups() -> List[str]:
    return __names('groups')


def shipped_tables() -> List[str]:
    """
    Names with a character table: the shipped files plus the closed form cyclic tables.
    """
    cyclic = [f'z{n}' for n in range(1, MAX_CYCLIC_TABLE + 1)]
    return sorted(set(__names('tables')) | set(cyclic))


def read_json(source: Union[str, Path], kind: str) -> Dict[str, Any]:
    """
    Document for a file path or a shipped name under data/<kind>.
    """
    path = Path(source)
    if path.is_file():
        logger.debug('reading {}', path)
        return orjson.loads(path.read_bytes())

    name = str(source)
    if name in __names(kind):
        return orjson.loads(__data_dir(kind).joinpath(f'{name}.json').read_bytes())

    raise FileNotFoundError(f'no {kind} file or shipped name "{source}"')


def load_group(source: Union[str, Path], config: Optional[ThinBaseConfig] = None) -> FiniteGroup:
    config = config or ThinBaseConfig()
    try:
        document = read_json(source, 'groups')
    except orjson.JSONDecodeError as error:
        raise GroupConstructionError(f'{source} is not valid json: {error}') from error
    return build_group(document, size_cap=config.table_size_cap, max_table_order=config.max_table_order, exhaustive_limit=config.assoc_exhaustive_limit, random_triples=config.assoc_random_triples)


def load_table(source: Union[str, Path]) -> CharacterTable:
    match = _CYCLIC.match(str(source))
    if match and not Path(source).is_file() and str(source) not in __names('tables'):
        n = int(match.group(1))
        if not 1 <= n <= MAX_CYCLIC_TABLE:
            raise FileNotFoundError(f'no character table for {source}, closed form tables cover z1..z{MAX_CYCLIC_TABLE}')
        return cyclic_table(n)

    try:
        return table_from_dict(read_json(source, 'tables'))
    except orjson.JSONDecodeError as error:
        raise TableValidationError(f'{source} is not valid json: {error}') from error
