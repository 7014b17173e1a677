#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
conftest.py
Shared fixtures; the repository root is put on sys.path
"""

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from libs.config import pykstab
from libs.instances import InstanceLibrary
from libs.invariants import clear_caches

# fresh_caches is function scoped and autouse; examples share it
settings.register_profile("pykstab", suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("pykstab")

@pytest.fixture(scope="session")
def library():
    return InstanceLibrary()

@pytest.fixture(scope="session")
def pairs(library):
    return {inst.name: inst.pair() for inst in library.all()}

@pytest.fixture
def cfg(tmp_path):
    return pykstab(["check", "--config", str(tmp_path / "settings")], read_file=False)

@pytest.fixture(autouse=True)
def fresh_caches():
    yield
    clear_caches()
