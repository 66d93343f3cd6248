import numpy as np
import pytest

from cycleauth.events import EventTerm, eval_events
from cycleauth.exceptions import DataError


def test_empty_windows_zero():
    e = EventTerm()
    assert eval_events(e, 123.0) == 0.0
    assert np.all(eval_events(e, np.arange(10.0)) == 0.0)


def test_inside_window():
    e = EventTerm(windows=((10.0, 20.0, 3.0),))
    assert eval_events(e, 15.0) == 3.0
    assert eval_events(e, 10.0) == 3.0
    assert eval_events(e, 20.0) == 3.0


def test_outside_windows():
    e = EventTerm(windows=((0.0, 5.0, 1.0), (10.0, 20.0, 3.0)))
    assert eval_events(e, 7.0) == 0.0


def test_vectorized_sum():
    e = EventTerm(windows=((0.0, 5.0, 1.0), (10.0, 20.0, 3.0)))
    t = np.array([0.0, 5.0, 7.0, 12.0, 25.0])
    assert eval_events(e, t).tolist() == [1.0, 1.0, 0.0, 3.0, 0.0]


def test_overlapping_windows_rejected():
    with pytest.raises(DataError):
        EventTerm(windows=((0.0, 5.0, 1.0), (5.0, 9.0, 2.0)))


def test_inverted_window_rejected():
    with pytest.raises(DataError):
        EventTerm(windows=((6.0, 5.0, 1.0),))
