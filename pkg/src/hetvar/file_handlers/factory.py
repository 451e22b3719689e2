"""
File handler lookup by input role
"""

from typing import Dict, List, Optional

from .base import BaseFileHandler, FileInfo
from .config_handler import ConfigFileHandler
from .csv_handler import CSVFileHandler
from ..exceptions import UnsupportedFileTypeError
from ..utils.logger import get_logger

logger = get_logger(__name__)

DATASET = "dataset"
FLAGS = "flags"


class FileHandlerFactory:
    """Picks the reader for dataset tables and flag files"""

    def __init__(self):
        self.handlers: Dict[str, List[BaseFileHandler]] = {
            DATASET: [CSVFileHandler()],
            FLAGS: [ConfigFileHandler()],
        }

    def get_handler(self, file_info: FileInfo, role: Optional[str] = None) -> BaseFileHandler:
        """Handler for the file; with a role, only that role's handlers are tried"""
        roles = [role] if role else list(self.handlers)
        for name in roles:
            for handler in self.handlers.get(name, []):
                if handler.can_handle(file_info):
                    logger.debug(f"Reading {file_info.name} as {name} with {handler.__class__.__name__}")
                    return handler

        kind = f"{role} file" if role else "input file"
        raise UnsupportedFileTypeError(
            f"{file_info.name} is not a supported {kind}; "
            f"expected one of {self.get_supported_extensions(role)}"
        )

    def get_supported_extensions(self, role: Optional[str] = None) -> List[str]:
        """Extensions accepted for a role, or for any role"""
        roles = [role] if role else list(self.handlers)
        extensions = set()
        for name in roles:
            for handler in self.handlers.get(name, []):
                extensions.update(handler.get_supported_extensions())
        return sorted(extensions)

    def register(self, handler: BaseFileHandler, role: str = DATASET):
        """Add a handler for a role; earlier handlers win on shared extensions"""
        self.handlers.setdefault(role, []).append(handler)
        logger.info(f"Registered {handler.__class__.__name__} for {role} files")
