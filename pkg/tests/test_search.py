import math

import pytest
from hypothesis import given, strategies as st

from lossyphase.search import golden_section_max


@given(st.floats(-5, 5), st.floats(0.1, 10))
def test_quadratic_peak(c, w):
    x, fx = golden_section_max(lambda x: -w * (x - c) ** 2, -10, 10)
    assert x == pytest.approx(c, abs=1e-6)
    assert fx == pytest.approx(0.0, abs=1e-9)


def test_endpoint_maximum():
    x, fx = golden_section_max(lambda x: x, 0.0, 1.0)
    assert x == 1.0 and fx == 1.0


def test_sin():
    x, _ = golden_section_max(math.sin, 0, 3)
    assert x == pytest.approx(math.pi / 2, abs=1e-6)
