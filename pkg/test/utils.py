"""
Testing utils
"""

import io
from contextlib import redirect_stdout
from importlib import resources
from sys import gettrace as sys_gettrace
from typing import Any, Dict, List, Tuple

import orjson
from configupdater import ConfigUpdater

from thinbase.configuration import ThinBaseConfig
from thinbase.configuration_utils import from_config
from thinbase.harness import run


def is_debugging():
    return sys_gettrace() is not None


def sample_config() -> ThinBaseConfig:
    """
    The packaged defaults, without looking at user config files.
    """
    config = ConfigUpdater(allow_no_value=True)
    config_str = resources.files('thinbase').joinpath('thinbase.cfg.default').read_text(encoding='UTF-8')
    config.read_string(config_str)
    thinbase_config = from_config(config, ThinBaseConfig())
    thinbase_config.console_format = '<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <4}</level> | {message}'
    thinbase_config.config_updater = config
    return thinbase_config


def run_report(command: str, arg_list: List[str]) -> Tuple[int, Dict[str, Any]]:
    """
    Exit code and parsed report of a subcommand printing its report to stdout.
    """
    output = io.StringIO()
    with redirect_stdout(output):
        code = run(command, arg_list)
    text = output.getvalue()
    return code, orjson.loads(text) if text.strip() else {}
