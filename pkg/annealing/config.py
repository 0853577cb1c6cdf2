"""
Campaign configuration loading.

A config file is a plain ``key=value`` file (the dotenv format) whose keys
are the field names of ``CampaignConfig``. Values given as overrides, the
CLI flags, win over the file.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values

from logs.logger import get_logger

from .errors import ConfigurationError
from .models import CampaignConfig

logger = get_logger(__name__)


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Raw key/value pairs of a config file; empty values are dropped."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    values = {key: value for key, value in dotenv_values(path).items() if value not in (None, "")}
    logger.debug(f"Loaded {len(values)} keys from {path}")
    return values


def merge_overrides(base: Mapping[str, Any], overrides: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
    """Overlay the non-None overrides onto ``base``."""
    merged = dict(base)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return merged


def build_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> CampaignConfig:
    """Validated campaign config from an optional file plus overrides.

    Raises:
        ConfigurationError: the file is missing
        pydantic.ValidationError: one or more values violate their ranges
    """
    base = load_config_file(config_path) if config_path else {}
    return CampaignConfig.model_validate(merge_overrides(base, overrides))
