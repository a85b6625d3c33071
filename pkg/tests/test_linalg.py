"""Label-indexed linear algebra and the Gaussian law container."""

import numpy as np
import pytest

from tailgraph.errors import ConfigError, NotSPD
from tailgraph.linalg import (
    GaussianLaw,
    IndexedMatrix,
    IndexedVector,
    cholesky_spd,
    spd_inverse,
)
from tailgraph.rng import derived_rng


def test_vector_labels():
    v = IndexedVector((2, 5, 9), np.array([1.0, 2.0, 3.0]))
    assert v.entry(5) == 2.0
    assert tuple(v.sub((9, 2)).values) == (3.0, 1.0)
    with pytest.raises(ConfigError):
        v.sub((2, 4))
    with pytest.raises(ConfigError):
        IndexedVector((1, 1), np.zeros(2))
    with pytest.raises(ConfigError):
        IndexedVector((1, 2), np.zeros(3))


def test_matrix_labels_and_blocks():
    m = IndexedMatrix.square((1, 3, 7), np.arange(9.0).reshape(3, 3))
    assert m.entry(3, 7) == 5.0
    blk = m.sub((7, 1))
    assert blk.rows == (7, 1)
    assert blk.values.tolist() == [[8.0, 6.0], [2.0, 0.0]]
    rect = m.sub((1,), (3, 7))
    assert rect.values.tolist() == [[1.0, 2.0]]


def test_check_symmetric():
    good = IndexedMatrix.square((1, 2), np.array([[2.0, 0.5], [0.5, 1.0]]))
    good.check_symmetric()
    bad = IndexedMatrix.square((1, 2), np.array([[2.0, 0.5], [0.1, 1.0]]))
    with pytest.raises(NotSPD):
        bad.check_symmetric()


def test_cholesky_matches_numpy_and_rejects():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(5, 5))
    spd = a @ a.T + 5 * np.eye(5)
    low = cholesky_spd(spd)
    assert np.allclose(low @ low.T, spd, atol=1e-12)
    with pytest.raises(NotSPD):
        cholesky_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_spd_inverse_round_trip():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4))
    spd = a @ a.T + 4 * np.eye(4)
    m = IndexedMatrix.square((2, 4, 6, 8), spd)
    inv = spd_inverse(m)
    assert inv.rows == (2, 4, 6, 8)
    assert np.allclose(inv.values @ spd, np.eye(4), atol=1e-10)


def test_gaussian_law_marginal_and_sampling():
    mean = IndexedVector((1, 2, 3), np.array([0.0, 1.0, -1.0]))
    cov = IndexedMatrix.square(
        (1, 2, 3),
        np.array([[2.0, 0.6, 0.2], [0.6, 1.0, 0.3], [0.2, 0.3, 1.5]]),
    )
    law = GaussianLaw(mean, cov)
    sub = law.marginal((3, 1))
    assert sub.index == (3, 1)
    assert sub.cov.entry(3, 1) == 0.2

    draws = law.sample(derived_rng(0, 1), 200_000)
    assert draws.shape == (200_000, 3)
    assert np.max(np.abs(draws.mean(axis=0) - mean.values)) < 0.02
    assert np.max(np.abs(np.cov(draws.T) - cov.values)) < 0.03
    again = law.sample(derived_rng(0, 1), 10)
    assert np.array_equal(draws[:10], again)


def test_gaussian_law_validates_shapes():
    with pytest.raises(ConfigError):
        GaussianLaw(
            IndexedVector((1, 2), np.zeros(2)),
            IndexedMatrix.square((1, 3), np.eye(2)),
        )
