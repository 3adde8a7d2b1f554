import pytest

from qwoptomech.params import (
    CLASSICAL_MIRROR,
    MeanFieldState,
    ModelParams,
    Modulation,
    Scenario,
)


def classical(t_end=5.0, **params):
    base = dict(delta_b=2.0, delta_c=4.712, g0=0.005, kappa=1.5, eps_p=5.0, omega_c=1.36)
    base.update(params)
    return Scenario(
        variant=CLASSICAL_MIRROR,
        params=ModelParams(**base),
        modulation=Modulation(epsilon=0.1, Omega=1.36),
        t_end=t_end,
    )


@pytest.fixture
def fig2a_like():
    return classical()


@pytest.fixture
def vacuum():
    return MeanFieldState(a=0j, b=0j)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """List shared across the session; lines are printed in the terminal summary."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=_criterion_order):
            terminalreporter.write_line(line)


def _criterion_order(line):
    tag = line.split()[1]
    num = "".join(ch for ch in tag if ch.isdigit())
    return (int(num), tag)
