from pathlib import Path
from typing import Any, Dict, Union

import yaml
from pydantic import BaseModel, ValidationError

from fraccond_core.services.cli_io.dataclass.main import RunConfig
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.config_manager import ConfigManager
from fraccond_core.utils.exceptions import ConfigValidationError, HandledNumericsError


class ConfigLoader:
    """
    Reads YAML run configurations into a validated RunConfig.
    """

    @classmethod
    def _parse(cls, text: str, source: str) -> Dict[str, Any]:
        try:
            raw = yaml.safe_load(text)
        except yaml.YAMLError as error:
            mark = getattr(error, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            problem = getattr(error, "problem", None) or str(error)
            raise ConfigValidationError(f"{source}: parse error at line {line}: {problem}", line=line)
        if not isinstance(raw, dict):
            raise ConfigValidationError(f"{source}: expected a mapping of sections at the top level")
        return raw

    @classmethod
    def _echo_defaults(cls, config: RunConfig) -> None:
        for section_name in RunConfig.model_fields:
            section: BaseModel = getattr(config, section_name)
            defaulted = [name for name in type(section).model_fields if name not in section.model_fields_set]
            for name in defaulted:
                value = section.model_dump(mode="json")[name]
                AppLogger.log_info(f"config default {section_name}.{name} = {value}")

    @classmethod
    def from_mapping(cls, raw: Dict[str, Any], source: str = "<memory>") -> RunConfig:
        try:
            config = RunConfig.model_validate(raw)
        except ValidationError as error:
            first = error.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise ConfigValidationError(f"{source}: {location}: {first['msg']}", errors=error.errors(include_url=False))
        except HandledNumericsError as error:
            raise ConfigValidationError(f"{source}: geometry: {error.message}")
        cls._echo_defaults(config)
        return config

    @classmethod
    def load_config(cls, path: Union[str, Path]) -> RunConfig:
        """
        Load and validate a run configuration.

        Raises:
            ConfigValidationError: unreadable file, YAML parse error (with line number) or a
                violated precondition.
        """
        config_path = Path(path)
        try:
            text = config_path.read_text(encoding="utf-8")
        except OSError as error:
            raise ConfigValidationError(f"{config_path}: {error.strerror or error}")
        return cls.from_mapping(cls._parse(text, str(config_path)), str(config_path))

    @classmethod
    def apply_runtime_settings(cls, config: RunConfig) -> None:
        """Feed the discretization knobs into the process-wide ConfigManager."""
        discretization = config.discretization
        ConfigManager.set(
            {
                "ASSEMBLY": {"WORKERS": discretization.workers, "BLOCK_ENTRIES": discretization.block_entries},
                "STUDY": {"WORKERS": discretization.study_workers},
            }
        )
