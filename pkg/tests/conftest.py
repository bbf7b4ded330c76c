import json
import os

import pytest

from realcad.cad import CadTree, eliminate_all
from realcad.model import parse_model
from realcad.polycore import parse_poly
from realcad.regmc import RegionSpace, build_region_graph

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def load_fixture(name):
    with open(fixture_path(name)) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def a0():
    return parse_model(load_fixture("two_level.json"))


@pytest.fixture(scope="session")
def a0_space(a0):
    return RegionSpace(a0)


@pytest.fixture(scope="session")
def a0_graph(a0, a0_space):
    return build_region_graph(a0, space=a0_space)


@pytest.fixture(scope="session")
def a0_families():
    return eliminate_all(
        [
            [parse_poly("x1"), parse_poly("x1^2 - x1 - 1")],
            [
                parse_poly("x2"),
                parse_poly("2*x1*x2^2 - x2^2 - 1"),
                parse_poly("x2 + x1^2 - 5"),
            ],
        ]
    )


@pytest.fixture(scope="session")
def a0_tree(a0_families):
    return CadTree(a0_families)


@pytest.fixture(scope="session")
def sphere_tree():
    fams = eliminate_all([[], [], [parse_poly("x1^2 + x2^2 + x3^2 - 1")]])
    return CadTree(fams)
