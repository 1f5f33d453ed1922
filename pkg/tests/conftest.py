import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from anticross import function_model  # noqa: E402
from anticross.zoo import (  # noqa: E402
    PerturbationParams,
    RabiParams,
    ThreeLevelParams,
    perturbation_model,
    rabi_model,
    three_level_model,
)


def linear_model(domain=(-5.0, 5.0)):
    """delta = 1, gamma = lambda: the simplest anti-crossing, H0 = 1 / (1 + lambda^2)^2."""
    return function_model(
        "linear",
        lambda lam: 0.0,
        lambda lam: 1.0,
        lambda lam: lam,
        domain,
        lambda lam: 0.0,
        lambda lam: 0.0,
        lambda lam: 1.0,
    )


def zoo_models():
    """(model, interior interval) pairs covering every worked model."""
    pert = perturbation_model(PerturbationParams(0.0, 1.0, 1.0, math.pi / 4))
    pert_generic = perturbation_model(PerturbationParams(0.3, 1.0, 2.0, 0.3))
    rabi = rabi_model(RabiParams(1.0, 1.0, "paper"))
    rabi_matrix = rabi_model(RabiParams(1.0, 0.8, "matrix"))
    three = three_level_model(ThreeLevelParams(linear_model(), 0.05, 100.0))
    return [
        (pert, (-4.5, 4.5)),
        (pert_generic, (-4.5, 4.5)),
        (rabi, (0.05, 3.9)),
        (rabi_matrix, (0.05, 3.9)),
        (three, (-4.5, 4.5)),
    ]


@pytest.fixture
def linear():
    return linear_model()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
