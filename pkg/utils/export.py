import os
from typing import Iterable, List

import pandas as pd

from utils.logger import info_logger


def ensure_dir(path: str) -> str:
    if not os.path.exists(path):
        os.makedirs(path, exist_ok=True)
    return path


def write_frame(df: pd.DataFrame, path: str) -> pd.DataFrame:
    """UTF-8 CSV with a header row, no index and minimal RFC-4180 quoting."""
    ensure_dir(os.path.dirname(path) or '.')
    df.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    info_logger.info(f'wrote {len(df)} rows to {path}')
    return df


def write_rows(rows: Iterable[dict], path: str, columns: List[str] = None) -> pd.DataFrame:
    return write_frame(pd.DataFrame(list(rows), columns=columns), path)
