import numpy as np
import pytest

from cycleauth.model import TimeSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def series(t, y) -> TimeSeries:
    return TimeSeries(t=np.asarray(t, dtype=float), y=np.asarray(y, dtype=float))
