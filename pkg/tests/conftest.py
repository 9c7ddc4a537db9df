import numpy as np
import pytest

from dipolar_gpe import PhysicsParams, make_grid, minimize
from dipolar_gpe.groundstate import gaussian_state


def reflect(f, axis):
    """Field of x -> f(x with x_axis negated) on the periodic node set."""
    return np.roll(np.flip(f, axis=axis), 1, axis=axis)


def quarter_turn(f):
    """Field of (x1, x2, x3) -> f(x2, -x1, x3); needs n1 == n2 and L1 == L2."""
    return reflect(np.swapaxes(f, 0, 1), 1)


def smooth_random_field(grid, rng, n_bumps=4, complex_valued=True):
    """Sum of randomly placed, randomly phased Gaussians well inside the box."""
    x1, x2, x3 = grid.axes
    L = min(grid.box_half_lengths)
    u = np.zeros(grid.shape, dtype=complex if complex_valued else float)
    for _ in range(n_bumps):
        c = rng.uniform(-0.3 * L, 0.3 * L, size=3)
        w = rng.uniform(0.7, 1.3)
        amp = rng.standard_normal() + (1j * rng.standard_normal() if complex_valued else 0)
        k = rng.uniform(-1, 1, size=3) if complex_valued else np.zeros(3)
        g1 = np.exp(-((x1 - c[0]) / w) ** 2 / 2 + 1j * k[0] * x1)
        g2 = np.exp(-((x2 - c[1]) / w) ** 2 / 2 + 1j * k[1] * x2)
        g3 = np.exp(-((x3 - c[2]) / w) ** 2 / 2 + 1j * k[2] * x3)
        bump = g1[:, None, None] * g2[None, :, None] * g3[None, None, :]
        u = u + amp * (bump if complex_valued else bump.real)
    return u


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64, 8.0)


@pytest.fixture(scope="session")
def grid32():
    return make_grid(32, 8.0)


@pytest.fixture(scope="session")
def stable_params():
    return PhysicsParams(5.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def stable_ground(grid64, stable_params):
    return minimize(stable_params, grid64)


@pytest.fixture(scope="session")
def oscillator_state(grid64):
    return gaussian_state(grid64, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# (number, line) pairs appended by test_acceptance and echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
