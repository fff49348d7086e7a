import pytest

from eitcav import ModelParams


@pytest.fixture
def fig_params():
    """Parameters of the figure presets: 2 epsilon = 0.125, C = 250, gamma = 10 kappa."""
    return ModelParams(epsilon=0.0625, cooperativity=250.0, gamma_over_kappa=10.0)
