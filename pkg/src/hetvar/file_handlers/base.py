"""
Base file handler interface
"""

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List

from ..exceptions import FileHandlerError
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FileInfo:
    """Location and type of an input file"""
    path: str
    name: str
    extension: str
    size_bytes: int

    @classmethod
    def from_path(cls, file_path: str) -> "FileInfo":
        path = Path(file_path)
        if not path.is_file():
            raise FileHandlerError(f"File does not exist: {file_path}")
        return cls(
            path=str(path),
            name=path.name,
            extension=path.suffix.lower(),
            size_bytes=os.path.getsize(path),
        )


class BaseFileHandler(ABC):
    """Abstract base class for file handlers"""

    SUPPORTED_EXTENSIONS: List[str] = []

    def can_handle(self, file_info: FileInfo) -> bool:
        """Check if this handler can process the file type"""
        return file_info.extension in self.SUPPORTED_EXTENSIONS

    @abstractmethod
    def read(self, file_info: FileInfo) -> Any:
        """Read the file into its in-memory form"""
        pass

    def get_supported_extensions(self) -> List[str]:
        """Get list of supported file extensions"""
        return list(self.SUPPORTED_EXTENSIONS)
