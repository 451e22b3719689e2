"""
Handler for CSV files
"""

import csv
from collections import Counter
import os
import tempfile
from typing import List

import pandas as pd

from .base import BaseFileHandler, FileInfo
from ..core.data import ColumnRoles, validate_dataset
from ..core.models import DesignData
from ..exceptions import DataError, FileHandlerError
from ..utils.logger import get_logger

logger = get_logger(__name__)


class CSVFileHandler(BaseFileHandler):
    """Comma-separated, headed, UTF-8 numeric tables"""

    SUPPORTED_EXTENSIONS = ['.csv']

    def read(self, file_info: FileInfo) -> pd.DataFrame:
        """Read the table; duplicate header names are rejected before pandas renames them"""
        header = self.read_header(file_info.path)
        counts = Counter(header)
        duplicates = sorted(name for name, count in counts.items() if count > 1)
        if duplicates:
            raise DataError(f"Duplicate column names in {file_info.name}: {duplicates}")

        try:
            df = pd.read_csv(file_info.path, sep=",", encoding="utf-8", dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, UnicodeDecodeError) as e:
            raise FileHandlerError(f"Could not parse CSV file {file_info.name}: {e}")

        logger.debug(f"Read {len(df)} rows and {len(df.columns)} columns from {file_info.name}")
        return df

    def load_dataset(self, file_info: FileInfo, roles: ColumnRoles) -> DesignData:
        """Read and validate; error rows refer to file lines (header is line 1)"""
        table = self.read(file_info)
        try:
            return validate_dataset(table, roles, row_offset=2)
        except DataError as e:
            raise DataError(f"{file_info.name}: {e}")

    def read_header(self, file_path: str) -> List[str]:
        try:
            with open(file_path, "r", encoding="utf-8", newline="") as f:
                return next(csv.reader(f), [])
        except UnicodeDecodeError as e:
            raise FileHandlerError(f"CSV file {file_path} is not UTF-8: {e}")
        except OSError as e:
            raise FileHandlerError(f"Could not open {file_path}: {e}")


def write_text_atomic(text: str, file_path: str):
    """Write through a temporary file in the target directory, then rename"""
    directory = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(directory, exist_ok=True)
    suffix = os.path.splitext(file_path)[1] or ".tmp"
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", suffix=suffix, dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, file_path)
    except OSError as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise FileHandlerError(f"Could not write {file_path}: {e}")


def write_frame_atomic(frame: pd.DataFrame, file_path: str):
    """CSV with '\\n' line endings, written atomically"""
    write_text_atomic(frame.to_csv(index=False, lineterminator="\n"), file_path)
    logger.debug(f"Wrote {len(frame)} rows to {file_path}")
