import numpy as np
import pytest

from entrank.states import basis_state, bell_state, mix, random_separable, tiles_fixture

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def bell():
    return bell_state("phi+").density()


@pytest.fixture(scope="session")
def tiles():
    return tiles_fixture()


@pytest.fixture
def bell_mixture():
    """Equal mixture of (|00> + |11>)/sqrt2 and (|00> - |11>)/sqrt2."""
    return mix([(0.5, bell_state("phi+")), (0.5, bell_state("phi-"))])


@pytest.fixture
def half_product_half_bell():
    return mix([(0.5, basis_state(0, 0, 2, 2)), (0.5, bell_state("phi+"))])


@pytest.fixture
def separable_3x3():
    return random_separable(3, 3, 9, 11)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return x + x.conj().T


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
