from pathlib import Path

import pytest

import faultscope as fs

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def golden() -> fs.Topology:
    """Four-monitor-neighborhood topology behind the worked path sets."""
    return fs.load_topology(read_fixture("golden/net.edges"))


@pytest.fixture(scope="session")
def chain4() -> fs.Topology:
    """Two monitors bridged by a two-node chain."""
    return fs.load_topology(read_fixture("chain4.edges"))


@pytest.fixture(scope="session")
def up_paths(golden: fs.Topology) -> fs.PathSet:
    """The three routing-determined paths of the worked example."""
    return fs.parse_paths(read_fixture("golden/up.paths"), golden)


@pytest.fixture(scope="session")
def csp_paths(golden: fs.Topology) -> fs.PathSet:
    """The six simple monitor-to-monitor paths of the worked example."""
    return fs.parse_paths(read_fixture("golden/csp.paths"), golden)


@pytest.fixture(scope="session")
def cap_paths(golden: fs.Topology) -> fs.PathSet:
    """The four probing walks of the worked example."""
    return fs.parse_paths(read_fixture("golden/cap.paths"), golden)
