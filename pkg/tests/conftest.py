import numpy as np
import pytest

from treelap.treegraph import path_graph, star_graph


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def star4():
    return star_graph(4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
