"""Shared fixtures: tiny graphs whose solutions are known in closed form."""

import numpy as np
import pytest

from graphseg import LabelData
from graphseg.fixtures import cycle_fixture, path_fixture, path_graph


@pytest.fixture
def path4():
    # unit path A-B-C-D, class 0 labeled at A, class 1 at D
    return path_fixture()


@pytest.fixture
def cycle4():
    # unit 4-cycle, class 0 labeled at A, class 1 at C (opposite corners)
    return cycle_fixture()


@pytest.fixture
def path3():
    # unit path A-B-C with both endpoints labeled, single interior vertex
    g = path_graph([1.0, 1.0])
    labels = LabelData(boundary=np.array([0, 2]), labels=np.array([0, 1]))
    return g, labels
