"""
Pytest configuration and shared fixtures for the fraccond core test suite.

Fixtures live in the fixtures package and are imported here so every test module sees them.
"""

# Import setup fixtures first (these reset process-wide state before each test)
from fraccond_core.tests.fixtures.setup.runtime import *

# Import data fixtures
from fraccond_core.tests.fixtures.data.geometry_data import *
from fraccond_core.tests.fixtures.data.run_configs import *
from fraccond_core.tests.fixtures.data.constructions import *

# Import utility fixtures
from fraccond_core.tests.fixtures.utilities.factories import *
from fraccond_core.tests.fixtures.utilities.assertion_helpers import *


# Pytest Configuration
def pytest_configure(config):
    """Configure pytest with custom markers and settings."""
    config.addinivalue_line("markers", "unit: mark test as a unit test")
    config.addinivalue_line("markers", "integration: mark test as an integration test")
    config.addinivalue_line("markers", "slow: mark test as slow running")
