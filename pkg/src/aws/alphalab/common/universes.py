#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from pathlib import Path
from typing import Dict, List, Union

import toml

from .errors import ConfigError

DEFAULT_UNIVERSES = Path(__file__).resolve().parent.parent / "data" / "universes.toml"


def load_universes(path: Union[str, Path] = DEFAULT_UNIVERSES) -> Dict[str, List[str]]:
    """
    Load named ticker universes from a TOML file of string lists.

    :param path: TOML file; defaults to the packaged signal/tradable universes.
    :return: name -> tickers in file order.
    """
    try:
        raw = toml.load(path)
    except (OSError, toml.TomlDecodeError) as err:
        raise ConfigError(f"Unable to load universes from {path}: {err}") from err
    universes = {}
    for name, tickers in raw.items():
        if not isinstance(tickers, list) or not all(isinstance(t, str) and t for t in tickers):
            raise ConfigError(f"Universe {name} must be a list of ticker strings")
        if len(set(tickers)) != len(tickers):
            raise ConfigError(f"Universe {name} lists a ticker twice")
        universes[name] = list(tickers)
    return universes


def load_universe(name: str, path: Union[str, Path] = DEFAULT_UNIVERSES) -> List[str]:
    universes = load_universes(path)
    if name not in universes:
        raise ConfigError(f"Unknown universe {name!r}; available: {sorted(universes)}")
    return universes[name]
