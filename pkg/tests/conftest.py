import numpy as np
import pytest

from maqaoa import Graph, enumerate_connected


@pytest.fixture
def k2() -> Graph:
    return Graph(2, ((0, 1),))


@pytest.fixture
def triangle() -> Graph:
    return Graph(3, ((0, 1), (0, 2), (1, 2)))


@pytest.fixture
def path4() -> Graph:
    return Graph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def star4() -> Graph:
    return Graph(4, ((0, 1), (0, 2), (0, 3)))


@pytest.fixture
def c4() -> Graph:
    return Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


@pytest.fixture
def k4() -> Graph:
    return Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture(scope="session")
def four_vertex_graphs() -> list[Graph]:
    return enumerate_connected(4)


def random_angles(g: Graph, p: int, seed: int):
    """Uniform random AngleVector on [-pi, pi) for test inputs."""
    from maqaoa import AngleVector

    rng = np.random.default_rng(seed)
    return AngleVector(
        rng.uniform(-np.pi, np.pi, (p, g.edge_count)),
        rng.uniform(-np.pi, np.pi, (p, g.n)),
    )
