"""Hüsler-Reiss clique models on standard exponential margins.

A clique C carries a conditionally negative definite variogram Γ.  The
exponent measure is

    Λ(y) = sum_c (1/y_c) Φ_{|C|-1}( log(y_{C\\c}/y_c) + Γ_{C\\c,c}/2 ; 0, Σ^{(c)} )

with the anchored covariance 2Σ^{(c)}_{ij} = Γ_{ic} + Γ_{jc} - Γ_{ij}.
Conditional transition kernels, their closed-form limits, and the mean /
precision recursion of the graph-wide conditional limit all live here.

Derivatives of Λ are taken by central differences in log-coordinates
(steps are then scale-free, which keeps the stencil well conditioned at
the huge Fréchet states that exponential levels t ~ 20 induce), with a
two-level Richardson extrapolation on top.  Only mixed partials over
distinct coordinates are ever required.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import (
    ConfigError,
    EmptySubset,
    IncompatibleSeparators,
    InvalidVariogram,
    NumericalBreakdown,
    UnsupportedCliqueShape,
)
from .graphs import CliqueOrdering
from .linalg import GaussianLaw, IndexedMatrix, IndexedVector, spd_inverse
from .mvn import CdfEstimate, bvn_cdf, mvn_cdf

FD_STEP = 1e-3
SEPARATOR_TOL = 1e-12


@dataclass(frozen=True)
class VariogramMatrix:
    """Symmetric, zero-diagonal, strictly conditionally negative definite."""

    index: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        mat = IndexedMatrix.square(tuple(self.index), self.values)
        object.__setattr__(self, "index", mat.rows)
        object.__setattr__(self, "values", mat.values)
        vals = self.values
        if not np.all(np.isfinite(vals)):
            raise InvalidVariogram("variogram has non-finite entries")
        if float(np.max(np.abs(vals - vals.T), initial=0.0)) > SEPARATOR_TOL:
            raise InvalidVariogram("variogram is not symmetric")
        if float(np.max(np.abs(np.diag(vals)), initial=0.0)) > 0.0:
            raise InvalidVariogram("variogram diagonal must be exactly zero")
        if len(self.index) >= 2:
            # strict conditional negative definiteness <=> any anchored
            # covariance is positive definite
            sig = _anchored_covariance(self, self.index[0])
            try:
                np.linalg.cholesky(sig.values)
            except np.linalg.LinAlgError as exc:
                raise InvalidVariogram(
                    "variogram is not strictly conditionally negative definite"
                ) from exc

    @property
    def dim(self) -> int:
        return len(self.index)

    def sub(self, labels) -> "VariogramMatrix":
        mat = IndexedMatrix.square(self.index, self.values).sub(tuple(labels))
        return VariogramMatrix(mat.rows, mat.values)

    def entry(self, i: int, j: int) -> float:
        return IndexedMatrix.square(self.index, self.values).entry(i, j)

    def to_dict(self) -> dict:
        return {
            "index": list(self.index),
            "values": [[float(x) for x in row] for row in self.values],
        }


@dataclass(frozen=True)
class HuslerReissModel:
    """A clique model: vertex labels plus their variogram."""

    clique: tuple[int, ...]
    variogram: VariogramMatrix

    family = "husler_reiss"

    def __post_init__(self):
        clique = tuple(sorted(int(v) for v in self.clique))
        object.__setattr__(self, "clique", clique)
        if self.variogram.index != clique:
            object.__setattr__(self, "variogram", self.variogram.sub(clique))

    @property
    def dim(self) -> int:
        return len(self.clique)

    def restrict(self, labels) -> "HuslerReissModel":
        labels = tuple(sorted(int(v) for v in labels))
        return HuslerReissModel(labels, self.variogram.sub(labels))


def _anchored_covariance(vario: VariogramMatrix, anchor: int) -> IndexedMatrix:
    rest = tuple(v for v in vario.index if v != anchor)
    if not rest:
        raise EmptySubset(f"anchor {anchor} leaves no coordinates")
    g = IndexedMatrix.square(vario.index, vario.values)
    col = g.sub(rest, (anchor,)).values[:, 0]
    block = g.sub(rest, rest).values
    sig = 0.5 * (col[:, None] + col[None, :] - block)
    return IndexedMatrix.square(rest, 0.5 * (sig + sig.T))


def sigma_anchor(vario: VariogramMatrix, anchor: int) -> IndexedMatrix:
    """Anchored covariance Σ^{(anchor)} on index \\ {anchor}; positive definite."""
    if anchor not in vario.index:
        raise ConfigError(f"anchor {anchor} not in variogram index {vario.index}")
    sig = _anchored_covariance(vario, anchor)
    np.linalg.cholesky(sig.values)  # VariogramMatrix validated, so this holds
    return sig


# ---------------------------------------------------------------------------
# exponent measure and its derivatives


def exponent_measure_many(vario: VariogramMatrix, y: np.ndarray,
                          accuracy: float = 1e-8, seed: int = 0) -> np.ndarray:
    """Λ(y) for a batch of states, shape (n, dim) -> (n,).

    ``+inf`` coordinates are legal and give the lower-dimensional
    measure of the remaining coordinates.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[None, :]
    d = vario.dim
    if y.shape[1] != d:
        raise ConfigError(f"state width {y.shape[1]} != clique size {d}")
    if np.any(~(y > 0.0)):
        raise NumericalBreakdown("exponent measure needs strictly positive states")
    if d == 1:
        return 1.0 / y[:, 0]
    out = np.zeros(y.shape[0])
    g = vario.values
    for c in range(d):
        rest = [j for j in range(d) if j != c]
        yc = y[:, c]
        finite = np.isfinite(yc)
        if not np.any(finite):
            continue
        z = np.log(y[:, rest] / yc[:, None]) + 0.5 * g[rest, c][None, :]
        sig = _anchored_covariance(vario, vario.index[c])
        term = np.zeros(y.shape[0])
        if d == 2:
            sd = math.sqrt(sig.values[0, 0])
            term[finite] = ndtr(z[finite, 0] / sd)
        elif d == 3:
            s0 = math.sqrt(sig.values[0, 0])
            s1 = math.sqrt(sig.values[1, 1])
            r = sig.values[0, 1] / (s0 * s1)
            term[finite] = [
                bvn_cdf(z0 / s0, z1 / s1, r) for z0, z1 in z[finite]
            ]
        else:
            law = GaussianLaw.from_arrays(
                sig.rows, np.zeros(d - 1), sig.values
            )
            term[finite] = [
                mvn_cdf(zrow, law, accuracy=accuracy, seed=seed).value
                for zrow in z[finite]
            ]
        out[finite] += term[finite] / yc[finite]
    return out


def exponent_measure(model: HuslerReissModel, y, accuracy: float = 1e-8,
                     seed: int = 0) -> float:
    """Exponent measure Λ(y) of a clique model at one state."""
    if isinstance(y, IndexedVector):
        y = y.sub(model.clique).values
    return float(exponent_measure_many(model.variogram, np.asarray(y, dtype=float),
                                       accuracy=accuracy, seed=seed)[0])


def exponent_measure_estimate(model: HuslerReissModel, y,
                              accuracy: float = 1e-8,
                              seed: int = 0) -> CdfEstimate:
    """Λ(y) together with a conservative numerical error bound.

    The measure is a sum of one normal-CDF evaluation per finite
    coordinate, each scaled by 1/y_c: dimensions up to three are
    deterministic at rounding level, larger ones inherit the quadrature
    accuracy target.
    """
    if isinstance(y, IndexedVector):
        y = y.sub(model.clique).values
    y = np.asarray(y, dtype=float)
    value = float(exponent_measure_many(model.variogram, y,
                                        accuracy=accuracy, seed=seed)[0])
    finite = y[np.isfinite(y)]
    if finite.size == 0:
        return CdfEstimate(value, 0.0)
    per_term = 5e-15 if model.dim <= 3 else accuracy
    error = float(finite.size * per_term / np.min(finite))
    return CdfEstimate(value, error)


def _log_partial_many(vario: VariogramMatrix, y: np.ndarray, wrt: list[int],
                      step: float, accuracy: float, seed: int) -> np.ndarray:
    """Mixed partial of Λ over distinct coordinate positions ``wrt``.

    Central differences in log-coordinates with Richardson extrapolation;
    returns ∂^k Λ / ∂y_{wrt} (k = len(wrt)), shape (n,).
    """
    y = np.asarray(y, dtype=float)
    k = len(wrt)

    def log_stencil(h: float) -> np.ndarray:
        total = np.zeros(y.shape[0])
        for signs in itertools.product((-1.0, 1.0), repeat=k):
            yy = y.copy()
            for s, pos in zip(signs, wrt):
                yy[:, pos] = yy[:, pos] * math.exp(s * h)
            total += math.prod(signs) * exponent_measure_many(
                vario, yy, accuracy=accuracy, seed=seed
            )
        return total / (2.0 * h) ** k

    coarse = log_stencil(step)
    fine = log_stencil(step / 2.0)
    d_log = (4.0 * fine - coarse) / 3.0
    scale = np.prod(y[:, wrt], axis=1)
    return d_log / scale


def exponent_measure_density_many(vario: VariogramMatrix, y: np.ndarray,
                                  step: float = FD_STEP,
                                  accuracy: float = 1e-8,
                                  seed: int = 0) -> np.ndarray:
    """λ(y) = -∂^d Λ / ∂y_1..∂y_d by finite differences, shape (n,)."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[None, :]
    if vario.dim == 1:
        return 1.0 / y[:, 0] ** 2
    return -_log_partial_many(vario, y, list(range(vario.dim)), step, accuracy, seed)


def exponent_measure_density(model: HuslerReissModel, y, step: float = FD_STEP) -> float:
    if isinstance(y, IndexedVector):
        y = y.sub(model.clique).values
    return float(exponent_measure_density_many(model.variogram,
                                               np.asarray(y, dtype=float), step)[0])


# ---------------------------------------------------------------------------
# transition kernels


def exp_to_frechet(x):
    """Map standard-exponential states to unit-Fréchet: y = -1/log(1 - e^{-x})."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise NumericalBreakdown("exponential-scale states must be positive")
    return -1.0 / np.log1p(-np.exp(-x))


def _partition_sum(vario: VariogramMatrix, y: np.ndarray, sep_pos: list[int],
                   step: float, accuracy: float, seed: int) -> np.ndarray:
    """Alternating partition sum over the separator coordinates.

    |S| = 1 gives -Λ_s, |S| = 2 gives -Λ_{s1 s2} + Λ_{s1} Λ_{s2}; larger
    separators are not supported (the partition lattice is deliberately
    kept exact).
    """
    if len(sep_pos) == 1:
        return -_log_partial_many(vario, y, sep_pos, step, accuracy, seed)
    if len(sep_pos) == 2:
        both = _log_partial_many(vario, y, sep_pos, step, accuracy, seed)
        first = _log_partial_many(vario, y, sep_pos[:1], step, accuracy, seed)
        second = _log_partial_many(vario, y, sep_pos[1:], step, accuracy, seed)
        return -both + first * second
    raise UnsupportedCliqueShape(
        f"separators of size {len(sep_pos)} are not supported (max 2)"
    )


def transition_kernel(model: HuslerReissModel, sep, x_sep, x_rest,
                      step: float = FD_STEP, accuracy: float = 1e-8,
                      seed: int = 0) -> np.ndarray:
    """Conditional law P(X_{C\\S} <= x_rest | X_S = x_sep) on exponential scale.

    Vectorized over rows of ``x_sep`` / ``x_rest``; scalars are
    broadcast.  Values are clamped to [0, 1]; excursions beyond
    finite-difference noise raise :class:`NumericalBreakdown`.
    """
    sep = tuple(sorted(int(v) for v in sep))
    if not sep:
        raise EmptySubset("empty separator")
    rest = tuple(v for v in model.clique if v not in sep)
    if not rest:
        raise ConfigError("separator covers the whole clique")
    if set(sep) - set(model.clique):
        raise ConfigError(f"separator {sep} not inside clique {model.clique}")

    x_sep = np.atleast_2d(np.asarray(x_sep, dtype=float))
    x_rest = np.atleast_2d(np.asarray(x_rest, dtype=float))
    if x_sep.shape[0] == 1 and x_rest.shape[0] > 1:
        x_sep = np.repeat(x_sep, x_rest.shape[0], axis=0)
    if x_rest.shape[0] == 1 and x_sep.shape[0] > 1:
        x_rest = np.repeat(x_rest, x_sep.shape[0], axis=0)
    if x_sep.shape[1] != len(sep) or x_rest.shape[1] != len(rest):
        raise ConfigError("state widths do not match separator/rest sizes")

    pos = {v: k for k, v in enumerate(model.clique)}
    y = np.empty((x_sep.shape[0], model.dim))
    for j, v in enumerate(sep):
        y[:, pos[v]] = exp_to_frechet(x_sep[:, j])
    for j, v in enumerate(rest):
        y[:, pos[v]] = exp_to_frechet(x_rest[:, j])
    y_sep = y[:, [pos[v] for v in sep]]

    sep_vario = model.variogram.sub(sep)
    num = _partition_sum(model.variogram, y, [pos[v] for v in sep],
                         step, accuracy, seed)
    den = _partition_sum(sep_vario, y_sep, list(range(len(sep))),
                         step, accuracy, seed)
    lam_full = exponent_measure_many(model.variogram, y, accuracy, seed)
    lam_sep = exponent_measure_many(sep_vario, y_sep, accuracy, seed)
    with np.errstate(over="raise"):
        vals = (num / den) * np.exp(lam_sep - lam_full)
    noise = 1e-5
    if np.any(vals < -noise) or np.any(vals > 1.0 + noise):
        worst = float(np.max(np.abs(vals - np.clip(vals, 0.0, 1.0))))
        raise NumericalBreakdown(
            f"transition kernel left [0,1] by {worst:.3e}; the state is too "
            "extreme for the finite-difference step"
        )
    return np.clip(vals, 0.0, 1.0)


def transition_kernel_value(model, sep, x_sep, x_rest, **kw) -> float:
    return float(transition_kernel(model, sep, x_sep, x_rest, **kw)[0])


@dataclass(frozen=True)
class HRLimitParams:
    """Closed-form parameters of the limiting conditional update.

    The separator state enters through the row-stochastic slope matrix
    ``slope``; the Gaussian ``law`` (mean, covariance) is the update
    noise, and ``noise_precision`` is the corresponding precision matrix
    reused by the graph-wide recursion.
    """

    sep: tuple[int, ...]
    rest: tuple[int, ...]
    slope: IndexedMatrix  # rows rest, cols sep
    law: GaussianLaw  # indexed by rest
    noise_precision: IndexedMatrix

    def location(self, z_sep) -> np.ndarray:
        z = np.asarray(z_sep, dtype=float)
        return self.slope.values @ z

    def cdf(self, offset, accuracy: float = 1e-9, seed: int = 0) -> float:
        return mvn_cdf(np.asarray(offset, dtype=float), self.law,
                       accuracy=accuracy, seed=seed).value


def a2_limit_params(model: HuslerReissModel, sep, anchor: int | None = None) -> HRLimitParams:
    """Limiting update parameters for conditioning a clique on its separator.

    The slope rows sum to one exactly (the defect of the linear solve,
    at rounding level, is redistributed); the result does not depend on
    the internal anchor choice, which is exposed only for testing.
    """
    sep = tuple(sorted(int(v) for v in sep))
    rest = tuple(v for v in model.clique if v not in sep)
    if not sep or set(sep) - set(model.clique):
        raise ConfigError(f"separator {sep} invalid for clique {model.clique}")
    if not rest:
        raise ConfigError("separator covers the whole clique")
    s = anchor if anchor is not None else sep[0]
    if s not in sep:
        raise ConfigError(f"anchor {s} must lie in the separator {sep}")

    others = tuple(v for v in model.clique if v != s)  # C \ s
    sig = sigma_anchor(model.variogram, s)  # on others
    q_full = spd_inverse(sig)  # Q^{(s)} on others
    q_rr = q_full.sub(rest, rest)
    sep_rest = tuple(v for v in sep if v != s)

    # column block: separator columns as-is, anchor column closes the rows
    cols = []
    for v in sep:
        if v == s:
            cols.append(-q_full.sub(rest, others).values.sum(axis=1))
        else:
            cols.append(q_full.sub(rest, (v,)).values[:, 0])
    qtilde = np.column_stack(cols)

    q_rr_inv = spd_inverse(q_rr)
    slope = -q_rr_inv.values @ qtilde
    slope += ((1.0 - slope.sum(axis=1)) / len(sep))[:, None]  # exact row sums

    half_gamma = np.array([model.variogram.entry(u, s) for u in others]) / 2.0
    mean = -q_rr_inv.values @ (q_full.sub(rest, others).values @ half_gamma)

    law = GaussianLaw(
        IndexedVector(rest, mean),
        IndexedMatrix.square(rest, q_rr_inv.values),
    )
    return HRLimitParams(
        sep=sep,
        rest=rest,
        slope=IndexedMatrix(rest, sep, slope),
        law=law,
        noise_precision=q_rr,
    )


def kernel_limit(model: HuslerReissModel, sep, offset, z_sep=None,
                 step: float = FD_STEP, accuracy: float = 1e-9,
                 seed: int = 0) -> float:
    """Limiting kernel value by the exponent-measure derivative ratio.

    Because the slope matrix is row-stochastic, the ratio
    Λ^{(C)}_S(u) / Λ^{(S)}_S(u_S) evaluated at u_S = e^{z_S},
    u_{C\\S} = e^{slope·z_S + offset} is independent of z_S and equals
    the limit of the transition kernel along the norming trajectory;
    this is the finite-difference route against which the closed form
    :meth:`HRLimitParams.cdf` is verified.
    """
    sep = tuple(sorted(int(v) for v in sep))
    rest = tuple(v for v in model.clique if v not in sep)
    params = a2_limit_params(model, sep)
    z = np.zeros(len(sep)) if z_sep is None else np.asarray(z_sep, dtype=float)
    off = np.asarray(offset, dtype=float)
    if off.shape != (len(rest),):
        raise ConfigError(f"offset shape {off.shape} != residual size {len(rest)}")

    pos = {v: k for k, v in enumerate(model.clique)}
    u = np.empty((1, model.dim))
    for j, v in enumerate(sep):
        u[0, pos[v]] = math.exp(z[j])
    loc = params.location(z)
    for j, v in enumerate(rest):
        u[0, pos[v]] = math.exp(loc[j] + off[j])

    sep_vario = model.variogram.sub(sep)
    num = _log_partial_many(model.variogram, u, [pos[v] for v in sep],
                            step, accuracy, seed)
    den = _log_partial_many(sep_vario, u[:, [pos[v] for v in sep]],
                            list(range(len(sep))), step, accuracy, seed)
    val = float(num[0] / den[0])
    if not -1e-4 <= val <= 1.0 + 1e-4:
        raise NumericalBreakdown(f"kernel limit {val:.6f} outside [0,1]")
    return min(1.0, max(0.0, val))


# ---------------------------------------------------------------------------
# graph-wide conditional limit (mean and precision over V \ v)


def check_separator_compatibility(ordering: CliqueOrdering, models: dict,
                                  tol: float = SEPARATOR_TOL) -> None:
    """Adjacent cliques must agree on separator variograms to ``tol``."""
    for i in range(1, len(ordering)):
        sep = ordering.separators[i]
        if len(sep) < 2:
            continue
        parent = ordering.parents[i]
        child_v = models[ordering.cliques[i]].variogram.sub(sep).values
        parent_v = models[ordering.cliques[parent]].variogram.sub(sep).values
        gap = float(np.max(np.abs(child_v - parent_v)))
        if gap > tol:
            raise IncompatibleSeparators(
                f"cliques {ordering.cliques[i]} and {ordering.cliques[parent]} "
                f"disagree on separator {sep} by {gap:.3e}"
            )


def _models_by_clique(ordering: CliqueOrdering, models) -> dict:
    table = {}
    for c in ordering.cliques:
        key = tuple(sorted(c))
        if key not in models:
            raise ConfigError(f"no model supplied for clique {key}")
        m = models[key]
        if m.clique != key:
            raise ConfigError(f"model clique {m.clique} does not match {key}")
        table[key] = m
    return table


def tail_model_mean(ordering: CliqueOrdering, models: dict, v: int) -> IndexedVector:
    """Mean of the graph-wide conditional limit, indexed by V \\ {v}."""
    if v not in ordering.cliques[0]:
        raise ConfigError(f"vertex {v} not in the first clique; re-root first")
    table = _models_by_clique(ordering, models)
    check_separator_compatibility(ordering, table)
    mu: dict[int, float] = {}
    for i, clique in enumerate(ordering.cliques):
        model = table[clique]
        if v in clique:
            for u in clique:
                if u == v:
                    continue
                val = -model.variogram.entry(u, v) / 2.0
                if u in mu and abs(mu[u] - val) > 1e-9:
                    raise IncompatibleSeparators(
                        f"vertex {u}: mean {val} from clique {clique} "
                        f"conflicts with {mu[u]}"
                    )
                mu[u] = val
        else:
            sep = ordering.separators[i]
            params = a2_limit_params(model, sep)
            z = np.array([mu[w] for w in sep])
            loc = params.location(z) + params.law.mean.values
            for w, m_w in zip(params.rest, loc):
                mu[w] = float(m_w)
    index = tuple(w for w in ordering.graph.vertices if w != v)
    return IndexedVector(index, np.array([mu[w] for w in index]))


def tail_model_precision(ordering: CliqueOrdering, models: dict, v: int) -> IndexedMatrix:
    """Precision of the graph-wide conditional limit over V \\ {v}.

    Assembled clique by clique in the running-intersection order;
    entries between vertices that share no clique are exact zeros.
    """
    if v not in ordering.cliques[0]:
        raise ConfigError(f"vertex {v} not in the first clique; re-root first")
    table = _models_by_clique(ordering, models)
    check_separator_compatibility(ordering, table)

    index = tuple(w for w in ordering.graph.vertices if w != v)
    pos = {w: k for k, w in enumerate(index)}
    total = np.zeros((len(index), len(index)))
    clique_cov: list[IndexedMatrix] = []

    for i, clique in enumerate(ordering.cliques):
        model = table[clique]
        sep = ordering.separators[i]
        if v in clique:
            live = tuple(w for w in clique if w != v)
            sig = sigma_anchor(model.variogram, v)  # covariance on live
            q = spd_inverse(sig)
            rows = [pos[w] for w in live]
            total[np.ix_(rows, rows)] += q.values
            if i > 0:
                sep_live = tuple(w for w in sep if w != v)
                if sep_live:
                    parent_cov = clique_cov[ordering.parents[i]]
                    p_mat = spd_inverse(parent_cov.sub(sep_live))
                    rows_s = [pos[w] for w in sep_live]
                    total[np.ix_(rows_s, rows_s)] -= p_mat.values
            clique_cov.append(sig)
        else:
            params = a2_limit_params(model, sep)
            rest = params.rest
            q_eps = params.noise_precision.values
            a_mat = params.slope.values
            rows_r = [pos[w] for w in rest]
            rows_s = [pos[w] for w in sep]
            total[np.ix_(rows_r, rows_r)] += q_eps
            total[np.ix_(rows_r, rows_s)] += -q_eps @ a_mat
            total[np.ix_(rows_s, rows_r)] += -(q_eps @ a_mat).T
            total[np.ix_(rows_s, rows_s)] += a_mat.T @ q_eps @ a_mat
            parent_cov = clique_cov[ordering.parents[i]]
            c_s = parent_cov.sub(sep).values
            sig_eps = params.law.cov.values
            top = np.block([
                [sig_eps + a_mat @ c_s @ a_mat.T, a_mat @ c_s],
                [(a_mat @ c_s).T, c_s],
            ])
            clique_cov.append(IndexedMatrix.square(rest + sep, top))
    result = IndexedMatrix.square(index, 0.5 * (total + total.T))
    # zero entries must be exact; re-symmetrization above only averages
    # pairs that were written identically, so this cannot blur sparsity
    np.linalg.cholesky(result.values)
    return result


def hr_root_law(model: HuslerReissModel, v: int) -> GaussianLaw:
    """Limit law of X_{C\\v} - X_v given an extreme at v, for one clique."""
    if v not in model.clique:
        raise ConfigError(f"{v} not in clique {model.clique}")
    sig = sigma_anchor(model.variogram, v)
    mean = -0.5 * np.diag(sig.values)
    return GaussianLaw(IndexedVector(sig.rows, mean), sig)
