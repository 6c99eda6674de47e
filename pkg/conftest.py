# conftest.py
import numpy as np
import pytest

from src.cayley.atoms import AtomTree
from src.cayley.oracle import FreeAbelianOracle, FreeGroupOracle
from src.cayley.types import address_system, type_graph
from src.data_core.config import RunConfig
from src.transducer import catalog


# -------------------------
# graphs
# -------------------------
@pytest.fixture
def full2():
    return catalog.full_shift(2)


@pytest.fixture
def full3():
    return catalog.full_shift(3)


@pytest.fixture
def two_node():
    return catalog.two_node_graph()


@pytest.fixture
def counterexample():
    return catalog.counterexample_graph()


# -------------------------
# machines
# -------------------------
@pytest.fixture
def ternary_f():
    return catalog.ternary_f()


@pytest.fixture
def binary_f():
    return catalog.binary_f()


@pytest.fixture
def ternary_nucleus():
    return catalog.ternary_nucleus()


@pytest.fixture
def binary_nucleus():
    return catalog.binary_nucleus(closed=True)


# -------------------------
# groups
# -------------------------
@pytest.fixture(scope="session")
def f2():
    return FreeGroupOracle(2)


@pytest.fixture(scope="session")
def z2():
    return FreeAbelianOracle(2)


@pytest.fixture(scope="session")
def f2_tree(f2):
    return AtomTree(f2, horizon=6)


@pytest.fixture(scope="session")
def f2_types(f2, f2_tree):
    return type_graph(f2, max_level=3, depth=2, horizon=6, tree=f2_tree)


@pytest.fixture(scope="session")
def f2_phi(f2_types, f2_tree):
    return address_system(f2_types, f2_tree)


# -------------------------
# run config
# -------------------------
@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def run_config(tmp_path):
    return RunConfig(out=tmp_path / "out")
