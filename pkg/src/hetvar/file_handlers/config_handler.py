"""
Handler for flag files (key = value lines or YAML mappings)
"""

from typing import Any, Dict

import yaml

from .base import BaseFileHandler, FileInfo
from ..exceptions import ConfigurationError, FileHandlerError
from ..utils.logger import get_logger

logger = get_logger(__name__)


def normalize_key(key: str) -> str:
    return str(key).strip().lstrip("-").replace("-", "_").lower()


class ConfigFileHandler(BaseFileHandler):
    """Flag values for the command line, keyed by flag name"""

    SUPPORTED_EXTENSIONS = ['.yaml', '.yml', '.cfg', '.conf', '.ini', '.txt', '.properties']

    def read(self, file_info: FileInfo) -> Dict[str, Any]:
        try:
            with open(file_info.path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise FileHandlerError(f"Could not read config file {file_info.path}: {e}")

        if file_info.extension in ('.yaml', '.yml'):
            values = self._parse_yaml(text, file_info.name)
        else:
            values = self._parse_key_values(text, file_info.name)
        logger.debug(f"Read {len(values)} settings from {file_info.name}")
        return values

    def _parse_yaml(self, text: str, name: str) -> Dict[str, Any]:
        try:
            loaded = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Could not parse {name}: {e}")
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"{name} must hold a mapping of flag names to values")
        return {normalize_key(k): v for k, v in loaded.items()}

    def _parse_key_values(self, text: str, name: str) -> Dict[str, Any]:
        values = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{name}, line {line_no}: expected 'key = value', got {raw!r}")
            key, value = line.split("=", 1)
            key = normalize_key(key)
            if not key:
                raise ConfigurationError(f"{name}, line {line_no}: empty key")
            values[key] = value.strip()
        return values
