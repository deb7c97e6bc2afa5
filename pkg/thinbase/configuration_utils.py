"""
Thinbase configuration readers/verifier
"""

import os
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from configupdater import ConfigUpdater
from loguru import logger

from thinbase.configuration import ThinBaseConfig


def __verify_positive(config: ThinBaseConfig, name: str) -> bool:
    value = getattr(config, name)
    if value is None or value <= 0:
        logger.error('{} must be positive, found: {}', name, value)
        return False

    return True


def verify_configuration(config: ThinBaseConfig) -> bool:
    """
    Verifies the contents of your config file. Returns False if configuration failed.
    """
    success = True
    for name in ['table_size_cap', 'max_table_order', 'assoc_exhaustive_limit', 'assoc_random_triples', 'exhaustive_budget', 'sample_factor', 'pair_budget', 'class_union_limit', 'max_attempts', 'workers', 'size_factor', 'max_grid_points', 'max_depth']:
        success = __verify_positive(config, name) and success

    if config.seed is None or config.seed < 0:
        logger.error('seed must be a non negative integer, found: {}', config.seed)
        success = False

    if config.recheck_fraction is None or not 0 < config.recheck_fraction <= 1:
        logger.error('recheck_fraction must be in (0, 1], found: {}', config.recheck_fraction)
        success = False

    if config.max_depth and config.max_depth > 12:
        logger.error('max_depth above 12 overflows the exact interval grid, found: {}', config.max_depth)
        success = False

    return success


# Read and write .ini files utils below


def get_str(updater: ConfigUpdater, section: str, key: str) -> Optional[str]:
    """
    Read a string from an ini file if the config exists, else return None if the config does not
    exist in file.
    """
    if updater.has_option(section, key):
        output = updater.get(section, key)
        return str(output.value) if output.value else output.value

    return None


# Ini file string converters, to and from ThinBaseConfig type


def to_bool(value: Optional[str]) -> Optional[bool]:
    return value.lower() == 'true' if value else None


def from_bool(value: Optional[bool]) -> str:
    return str(value) if value is not None else ''


def to_int(value: Optional[str]) -> Optional[int]:
    return int(value) if value is not None else None


def from_int(value: Optional[int]) -> str:
    return str(value) if value is not None else ''


def to_float(value: Optional[str]) -> Optional[float]:
    return float(value) if value is not None else None


def from_float(value: Optional[float]) -> str:
    return str(value) if value is not None else ''


field_info: Dict[str, Tuple[str, Optional[Callable[[Optional[str]], Any]], Optional[Callable[[Any], str]]]] = {
    'table_size_cap': ('thinbase', to_int, from_int),
    'max_table_order': ('thinbase', to_int, from_int),
    'assoc_exhaustive_limit': ('thinbase', to_int, from_int),
    'assoc_random_triples': ('thinbase', to_int, from_int),
    'exhaustive_budget': ('words', to_int, from_int),
    'sample_factor': ('words', to_int, from_int),
    'pair_budget': ('subgroups', to_int, from_int),
    'class_union_limit': ('subgroups', to_int, from_int),
    'seed': ('sampler', to_int, from_int),
    'max_attempts': ('sampler', to_int, from_int),
    'workers': ('sampler', to_int, from_int),
    'recheck_fraction': ('sampler', to_float, from_float),
    'size_factor': ('sampler', to_float, from_float),
    'max_grid_points': ('minkowski', to_int, from_int),
    'max_depth': ('minkowski', to_int, from_int),
    'verify': ('harness', to_bool, from_bool),
    'normalize_timings': ('harness', to_bool, from_bool),
    'console_format': ('harness', None, None),
    'debug': ('harness', to_bool, from_bool),
    'diagnose_errors': ('harness', to_bool, from_bool),
}
"""
A mapping from ThinBaseConfig field to ini file section - the ini property name and the field name
must be identical.  The conversions of strings to and from the field types are provided here as well,
if the converters are not set the string is used unaltered.
"""


def to_ini(config: ThinBaseConfig) -> str:
    updater = config.config_updater
    for name in field_info.keys():
        info = field_info.get(name)
        if info:
            section = info[0]
            if section:
                value = getattr(config, name)
                convert: Optional[Callable[[Any], str]] = info[2]
                if convert:
                    updater.get(section, name).value = convert(value)
                else:
                    updater.get(section, name).value = value

    return str(updater)


def from_config(config: ConfigUpdater, thinbase_config: ThinBaseConfig) -> ThinBaseConfig:
    """
    Given a config parser pointed at a thinbase.cfg file, return a ThinBaseConfig with the file's parameters.
    """
    keys = field_info.keys()
    for name in keys:
        info = field_info.get(name)
        if info and info[0]:
            new_value = get_str(config, info[0], name)
            if new_value or not hasattr(thinbase_config, name):
                type_converter_lambda: Optional[Callable[[Optional[str]], Any]] = info[1]
                if type_converter_lambda:
                    setattr(thinbase_config, name, type_converter_lambda(new_value))
                else:
                    setattr(thinbase_config, name, new_value)

    return thinbase_config


def resource_file_to_str(package: str, file_name: str) -> str:
    config_str = ''
    if hasattr(resources, 'files'):
        config_str = resources.files(package).joinpath(file_name).read_text(encoding='UTF-8')
    elif hasattr(resources, 'read_text'):
        config_str = resources.read_text(package, file_name)

    return config_str


def default_config(user_set: Optional[Path] = None) -> ThinBaseConfig:
    """
    Attempts reading various locations to find a thinbase.cfg file.
    """
    config = ConfigUpdater(allow_no_value=True)
    config_str = resource_file_to_str('thinbase', 'thinbase.cfg.default')
    config.read_string(config_str)
    thinbase_config = from_config(config, ThinBaseConfig())
    thinbase_config.config_updater = config

    user_config = ConfigUpdater(allow_no_value=True)
    cfg_paths = [
        user_set,
        os.environ.get('THINBASE_CONFIG'),
        Path.home() / '.thinbase.cfg',
        '.thinbase.cfg',
    ]

    for file in cfg_paths:
        if not file:
            continue

        if isinstance(file, str):
            file = Path(file)

        if file.is_file():
            user_config.read(file, encoding='UTF-8')
            thinbase_config.config_file = file
            break

    return from_config(user_config, thinbase_config)
