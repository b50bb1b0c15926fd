import numpy as np
import pytest

from bandselect.info_theory import DiscreteRaster, PixelMask
from bandselect.synthetic import default_spec, make_synthetic_gt, synthesize_bands


def raster(values, alphabet_size=None):
    arr = np.asarray(values, dtype=np.int32)
    k = int(arr.max()) + 1 if alphabet_size is None else alphabet_size
    return DiscreteRaster(values=arr, alphabet_size=k)


def full_mask(shape):
    return PixelMask.full(shape)


@pytest.fixture(scope="session")
def suite():
    """One full-size synthetic scene shared by the slower tests."""
    gt = make_synthetic_gt(145, 145, 16, 0.49, seed=3)
    spec = default_spec(16)
    cube = synthesize_bands(gt, spec, seed=3)
    return cube, gt, spec
