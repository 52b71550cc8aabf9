import copy
from typing import Any, Dict, Optional

from fraccond_core.utils.singleton import Singleton


class ConfigManager(metaclass=Singleton):
    """
    Process-wide runtime knobs, grouped by section (ASSEMBLY, STUDY). Values live in memory only;
    the run configuration feeds them through ConfigLoader.apply_runtime_settings.
    """

    config: Dict[str, Any] = {}

    @classmethod
    def initialize(cls, values: Optional[Dict[str, Any]] = None) -> None:
        cls.config = copy.deepcopy(values) if values else {}

    @classmethod
    def get(cls, key: str, default: Optional[Any] = None) -> Any:
        return cls.config.get(key, default)

    @classmethod
    def get_value(cls, section: str, key: str, default: Any) -> Any:
        return (cls.config.get(section) or {}).get(key, default)

    @classmethod
    def set(cls, values: Dict[str, Any]) -> None:
        cls.config.update(values)

    @classmethod
    def reset(cls) -> None:
        cls.config = {}

    @classmethod
    def configs(cls) -> Dict[str, Any]:
        return cls.config
