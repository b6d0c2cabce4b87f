#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import logging
from pathlib import Path
from typing import List, Union

from ..common.io import write_csv
from ..extract.macro import write_macro_csv
from .types import MarketData

OHLCV_HEADER = ("date", "open", "high", "low", "close", "volume")


def write_ohlcv_csvs(market: MarketData, directory: Union[str, Path]) -> List[Path]:
    """
    Write one OHLCV CSV per ticker (``<ticker>.csv``).

    :param market: Market to export.
    :param directory: Output directory, created if needed.
    :return: Written paths in ticker order.
    """
    directory = Path(directory)
    paths = []
    for ticker in market.tickers:
        rows = []
        for day in market.dates:
            o, h, l, c, v = market.bar(day, ticker)
            rows.append([day.isoformat(), o, h, l, c, int(v)])
        paths.append(write_csv(directory / f"{ticker}.csv", OHLCV_HEADER, rows))
    logging.info(f"Wrote {len(paths)} OHLCV files to {directory}")
    return paths


def export_market(market: MarketData, directory: Union[str, Path]) -> Path:
    """Write the market JSON, per-ticker OHLCV CSVs and the macro CSV under ``directory``."""
    directory = Path(directory)
    market.save(directory / "market.json")
    write_ohlcv_csvs(market, directory / "ohlcv")
    write_macro_csv(directory / "macro.csv", market.macro_series, market.dates)
    return directory
