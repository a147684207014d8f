import os

import hypothesis
import numpy as np
import pytest

from thermops.core import EnergySpectrum, GibbsContext

hypothesis.settings.register_profile("ci", deadline=None, max_examples=60)
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=400)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def ctx_012():
    """Three levels 0, 1, 2 at beta = 1.2; the worked example used throughout."""
    return GibbsContext(EnergySpectrum([0.0, 1.0, 2.0]), 1.2)


@pytest.fixture
def ctx_halves():
    """Two levels with exp(-beta E) = 1/2, so g = (2/3, 1/3) exactly."""
    return GibbsContext(EnergySpectrum([0.0, np.log(2.0)]), 1.0)


@pytest.fixture
def ctx_eighths():
    """Three levels with g = (1/2, 3/8, 1/8) exactly."""
    return GibbsContext(EnergySpectrum([0.0, np.log(4.0 / 3.0), np.log(4.0)]), 1.0)
