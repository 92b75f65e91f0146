from pathlib import Path

import numpy as np
import pytest

from tournaments.graph import Tournament, cyclic_triangle, read_tournament_file, transitive_tournament

APPENDIX = Path(__file__).parent / "data" / "appendix_12_no_tt4.txt"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def c3():
    return cyclic_triangle()


@pytest.fixture
def t4():
    return transitive_tournament(4)


@pytest.fixture(scope="session")
def appendix_path():
    return APPENDIX


@pytest.fixture(scope="session")
def appendix():
    return [tournament for _, tournament in read_tournament_file(APPENDIX)]


@pytest.fixture
def tournament_file(tmp_path):
    def write(*lines):
        path = tmp_path / "tournaments.txt"
        path.write_text("\n".join(lines) + "\n")
        return path
    return write


@pytest.fixture(scope="session")
def paley7():
    # i -> i + r for the quadratic residues r mod 7
    rows = [sum(1 << ((i + r) % 7) for r in (1, 2, 4)) for i in range(7)]
    return Tournament(7, tuple(rows))
