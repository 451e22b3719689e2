"""
File handlers for datasets, flag files and result tables
"""

from .base import BaseFileHandler, FileInfo
from .config_handler import ConfigFileHandler
from .csv_handler import CSVFileHandler, write_frame_atomic, write_text_atomic
from .factory import FileHandlerFactory

__all__ = [
    'BaseFileHandler',
    'ConfigFileHandler',
    'CSVFileHandler',
    'FileHandlerFactory',
    'FileInfo',
    'write_frame_atomic',
    'write_text_atomic',
]
