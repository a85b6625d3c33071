"""Vertex-indexed vectors/matrices and Gaussian laws.

Matrices that parametrize clique models are indexed by vertex labels, not
positions; all submatrix extraction goes through these wrappers so that
vertex bookkeeping mistakes fail loudly instead of silently permuting
rows.  Symmetry is checked to 1e-12 and inverse multiply-back to 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigError, EmptySubset, NotSPD

SYMMETRY_TOL = 1e-12
IDENTITY_TOL = 1e-10


def _as_labels(index) -> tuple[int, ...]:
    labels = tuple(int(v) for v in index)
    if not labels:
        raise EmptySubset("empty label index")
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate labels in index {labels}")
    return labels


@dataclass(frozen=True)
class IndexedVector:
    """1-D array with vertex labels."""

    index: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "index", _as_labels(self.index))
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.index),):
            raise ConfigError(
                f"vector shape {vals.shape} does not match index of "
                f"length {len(self.index)}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def positions(self, labels) -> list[int]:
        pos = {v: k for k, v in enumerate(self.index)}
        try:
            return [pos[int(v)] for v in labels]
        except KeyError as exc:
            raise ConfigError(f"label {exc.args[0]} not in index {self.index}") from exc

    def sub(self, labels) -> "IndexedVector":
        labels = tuple(int(v) for v in labels)
        return IndexedVector(labels, self.values[self.positions(labels)])

    def entry(self, label: int) -> float:
        return float(self.values[self.positions([label])[0]])

    def to_dict(self) -> dict:
        return {"index": list(self.index), "values": [float(x) for x in self.values]}


@dataclass(frozen=True)
class IndexedMatrix:
    """2-D array with row and column vertex labels."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_labels(self.rows))
        object.__setattr__(self, "cols", _as_labels(self.cols))
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.rows), len(self.cols)):
            raise ConfigError(
                f"matrix shape {vals.shape} does not match index sizes "
                f"{len(self.rows)}x{len(self.cols)}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @staticmethod
    def square(index, values) -> "IndexedMatrix":
        index = tuple(index)
        return IndexedMatrix(index, index, values)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def _row_positions(self, labels) -> list[int]:
        pos = {v: k for k, v in enumerate(self.rows)}
        try:
            return [pos[int(v)] for v in labels]
        except KeyError as exc:
            raise ConfigError(f"row label {exc.args[0]} not in {self.rows}") from exc

    def _col_positions(self, labels) -> list[int]:
        pos = {v: k for k, v in enumerate(self.cols)}
        try:
            return [pos[int(v)] for v in labels]
        except KeyError as exc:
            raise ConfigError(f"column label {exc.args[0]} not in {self.cols}") from exc

    def sub(self, rows, cols=None) -> "IndexedMatrix":
        rows = tuple(int(v) for v in rows)
        cols = rows if cols is None else tuple(int(v) for v in cols)
        block = self.values[np.ix_(self._row_positions(rows), self._col_positions(cols))]
        return IndexedMatrix(rows, cols, block)

    def entry(self, i: int, j: int) -> float:
        return float(self.values[self._row_positions([i])[0], self._col_positions([j])[0]])

    def check_symmetric(self, tol: float = SYMMETRY_TOL) -> "IndexedMatrix":
        if not self.is_square:
            raise NotSPD(f"matrix indexed by {self.rows} x {self.cols} is not square")
        gap = float(np.max(np.abs(self.values - self.values.T), initial=0.0))
        if gap > tol:
            raise NotSPD(f"symmetry violated by {gap:.3e} (tolerance {tol:.1e})")
        return self

    def to_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "values": [[float(x) for x in row] for row in self.values],
        }


def cholesky_spd(values: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Lower Cholesky factor, raising :class:`NotSPD` with context on failure."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSPD(f"{what} is not square: shape {arr.shape}")
    gap = float(np.max(np.abs(arr - arr.T), initial=0.0))
    if gap > SYMMETRY_TOL:
        raise NotSPD(f"{what} symmetry violated by {gap:.3e}")
    try:
        return np.linalg.cholesky(arr)
    except np.linalg.LinAlgError as exc:
        raise NotSPD(f"{what} is not positive definite: {exc}") from exc


def spd_inverse(m: IndexedMatrix, tol: float = IDENTITY_TOL) -> IndexedMatrix:
    """Inverse of a symmetric positive-definite indexed matrix.

    Uses a Cholesky solve and verifies ``m @ inv`` against the identity
    to ``tol``; raises :class:`NotSPD` if factorization or the
    multiply-back check fails.
    """
    m.check_symmetric()
    low = cholesky_spd(m.values, what=f"matrix on {m.rows}")
    inv = scipy.linalg.cho_solve((low, True), np.eye(len(m.rows)))
    inv = 0.5 * (inv + inv.T)
    gap = float(np.max(np.abs(m.values @ inv - np.eye(len(m.rows)))))
    if gap > tol:
        raise NotSPD(
            f"inverse multiply-back off by {gap:.3e} (tolerance {tol:.1e}); "
            "matrix is too ill-conditioned"
        )
    return IndexedMatrix(m.rows, m.rows, inv)


@dataclass(frozen=True)
class GaussianLaw:
    """Multivariate normal with vertex-labelled mean and covariance."""

    mean: IndexedVector
    cov: IndexedMatrix

    def __post_init__(self):
        if self.cov.rows != self.mean.index or not self.cov.is_square:
            raise ConfigError("covariance index does not match mean index")
        self.cov.check_symmetric()
        # fail early on non-PD covariance and cache the factor for sampling
        low = cholesky_spd(self.cov.values, what=f"covariance on {self.mean.index}")
        object.__setattr__(self, "_chol", low)

    @property
    def index(self) -> tuple[int, ...]:
        return self.mean.index

    @property
    def dim(self) -> int:
        return len(self.mean.index)

    @staticmethod
    def from_arrays(index, mean, cov) -> "GaussianLaw":
        index = tuple(index)
        return GaussianLaw(IndexedVector(index, mean), IndexedMatrix.square(index, cov))

    def marginal(self, labels) -> "GaussianLaw":
        labels = tuple(int(v) for v in labels)
        return GaussianLaw(self.mean.sub(labels), self.cov.sub(labels))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        z = rng.standard_normal((size, self.dim))
        return self.mean.values + z @ self._chol.T

    def to_dict(self) -> dict:
        return {"mean": self.mean.to_dict(), "cov": self.cov.to_dict()}
