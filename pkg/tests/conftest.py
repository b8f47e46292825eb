import numpy as np
import pytest
from hypothesis import settings, strategies as st

from quatderiv import QMatrix, Quaternion

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

comp = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, comp, comp, comp, comp)
nonzero_quats = quats.filter(lambda q: abs(q) > 1e-2)
pure_units = st.tuples(comp, comp, comp).filter(
    lambda v: np.linalg.norm(v) > 1e-2).map(
    lambda v: Quaternion(0.0, *(np.asarray(v) / np.linalg.norm(v))))


def qmatrices(rows, cols):
    return st.lists(comp, min_size=rows * cols * 4, max_size=rows * cols * 4).map(
        lambda xs: QMatrix(np.reshape(xs, (rows, cols, 4))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
