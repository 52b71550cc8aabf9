"""
Setup fixtures for the fraccond core test suite.

Resets the process-wide configuration so tests do not see knobs applied by earlier runs.
"""

import pytest

from fraccond_core.utils.config_manager import ConfigManager
from fraccond_core.utils.context_vars import set_context_values


@pytest.fixture(autouse=True)
def in_memory_config():
    """Fresh in-memory ConfigManager and empty logging context for every test."""
    ConfigManager.initialize()
    set_context_values(command=None, run_id=None)
    yield
    ConfigManager.reset()
