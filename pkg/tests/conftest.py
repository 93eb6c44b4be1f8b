import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from thickloci import catalog


@pytest.fixture(scope="session")
def node():
    return catalog.load("NODE")


@pytest.fixture(scope="session")
def dualnum():
    return catalog.load("DUALNUM")


@pytest.fixture(scope="session")
def regular1():
    return catalog.load("REGULAR1")


@pytest.fixture(scope="session")
def cusp():
    return catalog.load("CUSP")


@pytest.fixture(scope="session")
def ribbon():
    return catalog.load("RIBBON")


@pytest.fixture(scope="session")
def whitney3():
    return catalog.load("WHITNEY3")


@pytest.fixture(scope="session")
def quad2():
    return catalog.load("QUAD2")
