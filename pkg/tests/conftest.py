# conftest.py
import os
import tempfile

import pytest


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Run every test inside a fresh temporary working directory."""
    previous = os.getcwd()
    with tempfile.TemporaryDirectory() as temp_dir:
        os.chdir(temp_dir)
        try:
            yield temp_dir
        finally:
            os.chdir(previous)
