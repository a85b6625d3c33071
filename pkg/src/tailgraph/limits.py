"""Engine for graph-wide conditional-extreme limits.

Walks a rooted clique ordering, asks each clique model's family for its
norming/update parameters, and composes them symbolically.  Per-vertex
normings have the form a(t) = coeff · t^power, b(t) = scale · t^bexp
with exact rational exponents, so feasibility comparisons are exact:

* a Hüsler-Reiss clique absorbs separator fluctuations only when every
  incoming separator scale is t^0 (the conditioning vertex itself is
  exempt — its fluctuation is pinned to zero);
* a Gaussian clique accepts scales up to t^{1/2}; separator vertices
  entering at t^0 contribute nothing to the linear part of the update.

When a clique cannot absorb its separator's fluctuations the
single-vertex limit does not exist; classification reports the clique
as a witness and the block-wise (separator-normed) noise limit of
:func:`build_tail_noise` is the right object instead.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import gaussian as gsn
from . import husler_reiss as hr
from .errors import (
    ConfigError,
    IncompatibleSeparators,
    NormingIncompatible,
    NormingUnavailable,
    NotBlockGraph,
    UnsupportedNormingFamily,
)
from .graphs import CliqueOrdering, clique_ordering
from .linalg import GaussianLaw, IndexedMatrix, IndexedVector
from .rng import block_bounds, derived_rng

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class NormingPair:
    """Norming functions a(t) = coeff·t^power, b(t) = scale·t^bexp."""

    coeff: float
    power: Fraction
    scale: float
    bexp: Fraction

    def a(self, t):
        return self.coeff * np.asarray(t, dtype=float) ** float(self.power)

    def b(self, t):
        return self.scale * np.asarray(t, dtype=float) ** float(self.bexp)

    def to_dict(self) -> dict:
        return {
            "a_coeff": self.coeff,
            "a_power": str(self.power),
            "b_scale": self.scale,
            "b_power": str(self.bexp),
        }


@dataclass(frozen=True)
class CliqueUpdate:
    """Limiting update of one clique given its separator.

    ``psi`` is the linear action on the separator fluctuations (None
    means the zero map), ``phi`` the per-vertex noise scales, ``noise``
    the update noise law.  ``a_fun``/``b_fun`` evaluate the clique's
    state-dependent norming pair at finite separator states (vectorized
    over rows), which the remainder checks and block renormalizations
    use.
    """

    position: int
    clique: tuple[int, ...]
    sep: tuple[int, ...]
    rest: tuple[int, ...]
    family: str
    psi: IndexedMatrix | None
    phi: IndexedVector
    noise: GaussianLaw
    a_fun: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    b_fun: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)

    def apply(self, z_sep: np.ndarray, eps: np.ndarray) -> np.ndarray:
        out = self.phi.values[None, :] * eps
        if self.psi is not None:
            out = out + z_sep @ self.psi.values.T
        return out

    def to_dict(self) -> dict:
        return {
            "clique": list(self.clique),
            "separator": list(self.sep),
            "new_vertices": list(self.rest),
            "family": self.family,
            "psi": self.psi.to_dict() if self.psi is not None else None,
            "phi": self.phi.to_dict(),
            "noise": self.noise.to_dict(),
        }


@dataclass(frozen=True)
class NormingVerdict:
    kind: str  # "theorem_1" or "tail_noise_required"
    witness_clique: tuple[int, ...] | None
    reason: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "witness_clique": list(self.witness_clique) if self.witness_clique else None,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class SampleMatrix:
    """Rows of samples with vertex-labelled columns and provenance metadata."""

    columns: tuple[int, ...]
    values: np.ndarray
    meta: dict

    def column(self, v: int) -> np.ndarray:
        return self.values[:, self.columns.index(v)]

    def sub(self, labels) -> np.ndarray:
        return self.values[:, [self.columns.index(int(v)) for v in labels]]

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class TailGraphicalModel:
    """Single-vertex conditional limit assembled along the clique ordering."""

    ordering: CliqueOrdering
    v: int
    normings: dict[int, NormingPair]
    root_noise: GaussianLaw | None  # on C_1 \ v; None when the graph is {v}
    updates: tuple[CliqueUpdate, ...]

    @property
    def z_index(self) -> tuple[int, ...]:
        return tuple(u for u in self.ordering.graph.vertices if u != self.v)

    @property
    def columns(self) -> tuple[int, ...]:
        return self.ordering.graph.vertices

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "ordering": self.ordering.to_dict(),
            "normings": {str(u): p.to_dict() for u, p in sorted(self.normings.items())},
            "root_noise": self.root_noise.to_dict() if self.root_noise else None,
            "updates": [u.to_dict() for u in self.updates],
        }


def _family_of(model) -> str:
    fam = getattr(model, "family", None)
    if fam is None:
        raise NormingUnavailable(f"model {model!r} declares no norming family")
    if fam not in ("husler_reiss", "gaussian"):
        raise UnsupportedNormingFamily(f"unknown family {fam!r}")
    return fam


def _rooted(ordering: CliqueOrdering, v: int) -> CliqueOrdering:
    if v in ordering.cliques[0]:
        return ordering
    return clique_ordering(ordering.graph, v)


def _models_table(ordering: CliqueOrdering, models: dict) -> dict:
    table = {}
    for c in ordering.cliques:
        key = tuple(sorted(c))
        if key not in models:
            raise ConfigError(f"no model supplied for clique {key}")
        table[key] = models[key]
    return table


def _root_pieces(model, v: int):
    """(normings for C_1 incl v, noise law on C_1\\v or None)."""
    fam = _family_of(model)
    rest = tuple(u for u in model.clique if u != v)
    if fam == "husler_reiss":
        normings = {u: NormingPair(1.0, ONE, 1.0, ZERO) for u in model.clique}
        law = hr.hr_root_law(model, v) if rest else None
        return normings, law
    rn = gsn.root_norming(model, v) if rest else None
    normings = {v: NormingPair(1.0, ONE, 1.0, HALF)}
    if rn is not None:
        for u in rest:
            normings[u] = NormingPair(rn.coeff.entry(u), ONE, 1.0, HALF)
    return normings, (rn.law if rn is not None else None)


def _transition_pieces(position: int, model, sep: tuple[int, ...],
                       normings: dict, v: int) -> CliqueUpdate:
    fam = _family_of(model)
    clique = model.clique
    rest = tuple(u for u in clique if u not in sep)
    free_sep = tuple(s for s in sep if s != v)  # v's fluctuation is pinned at 0

    if fam == "husler_reiss":
        bad = [s for s in free_sep if normings[s].bexp != ZERO]
        if bad:
            raise NormingIncompatible(
                f"clique {clique} is Hüsler-Reiss but separator vertices {bad} "
                f"carry t^{normings[bad[0]].bexp} fluctuations; the "
                "single-vertex norming degenerates — use the separator-normed "
                "noise limit (build_tail_noise)",
                witness_clique=clique,
            )
        off = [s for s in sep if abs(normings[s].coeff - 1.0) > 1e-9
               or normings[s].power != ONE]
        if off:
            raise NormingIncompatible(
                f"clique {clique}: separator vertices {off} approach infinity "
                "on a non-unit-slope trajectory unsupported by the "
                "Hüsler-Reiss kernel",
                witness_clique=clique,
            )
        params = hr.a2_limit_params(model, sep)
        slope = params.slope

        def a_fun(x, _s=slope.values):
            return np.atleast_2d(np.asarray(x, dtype=float)) @ _s.T

        def b_fun(x, _m=len(rest)):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            return np.ones((x.shape[0], _m))

        return CliqueUpdate(
            position=position, clique=clique, sep=sep, rest=rest, family=fam,
            psi=slope, phi=IndexedVector(rest, np.ones(len(rest))),
            noise=params.law, a_fun=a_fun, b_fun=b_fun,
        )

    # gaussian clique: accepts t^0 and t^{1/2} separator scales
    bad = [s for s in free_sep if normings[s].bexp not in (ZERO, HALF)]
    if bad:
        raise NormingIncompatible(
            f"clique {clique}: separator scale t^{normings[bad[0]].bexp} "
            "not supported by the Gaussian update",
            witness_clique=clique,
        )
    coeffs = IndexedVector(sep, np.array([normings[s].coeff for s in sep]))
    sn = gsn.separator_norming(model, sep, coeffs)
    moving = [s for s in sep if s != v and normings[s].bexp == HALF]
    psi = None
    if moving:
        cols = np.zeros((len(rest), len(sep)))
        for j, s in enumerate(sep):
            if s in moving:
                cols[:, j] = sn.psi.sub(rest, (s,)).values[:, 0]
        psi = IndexedMatrix(rest, sep, cols)
    return CliqueUpdate(
        position=position, clique=clique, sep=sep, rest=rest, family=fam,
        psi=psi, phi=sn.phi, noise=sn.noise,
        a_fun=sn.a_of, b_fun=sn.b_of,
    )


def check_separator_models(ordering: CliqueOrdering, table: dict,
                           tol: float = hr.SEPARATOR_TOL) -> None:
    """Adjacent cliques must induce the same law on shared separators.

    Singleton separators are always compatible (both families have unit
    exponential margins).  Larger separators require matching families
    and matching variogram/correlation blocks.
    """
    for i in range(1, len(ordering)):
        sep = ordering.separators[i]
        if len(sep) < 2:
            continue
        child = table[ordering.cliques[i]]
        parent = table[ordering.cliques[ordering.parents[i]]]
        cf, pf = _family_of(child), _family_of(parent)
        if cf != pf:
            raise IncompatibleSeparators(
                f"cliques {ordering.cliques[i]} ({cf}) and "
                f"{ordering.cliques[ordering.parents[i]]} ({pf}) share "
                f"separator {sep} but use different families"
            )
        if cf == "husler_reiss":
            gap = float(np.max(np.abs(child.variogram.sub(sep).values
                                      - parent.variogram.sub(sep).values)))
        else:
            gap = float(np.max(np.abs(child.correlation.sub(sep).values
                                      - parent.correlation.sub(sep).values)))
        if gap > tol:
            raise IncompatibleSeparators(
                f"cliques {ordering.cliques[i]} and "
                f"{ordering.cliques[ordering.parents[i]]} disagree on "
                f"separator {sep} by {gap:.3e}"
            )


def _walk(ordering: CliqueOrdering, models: dict, v: int):
    """Root pieces plus transition updates, composing normings in order."""
    ordering = _rooted(ordering, v)
    table = _models_table(ordering, models)
    check_separator_models(ordering, table)
    normings, root_law = _root_pieces(table[ordering.cliques[0]], v)
    updates = []
    for i in range(1, len(ordering)):
        upd = _transition_pieces(i, table[ordering.cliques[i]],
                                 ordering.separators[i], normings, v)
        for j, u in enumerate(upd.rest):
            if upd.family == "husler_reiss":
                normings[u] = NormingPair(1.0, ONE, 1.0, ZERO)
            else:
                coeff = float(np.asarray(upd.a_fun(
                    np.array([[normings[s].coeff for s in upd.sep]])
                ))[0, j])
                normings[u] = NormingPair(coeff, ONE, 1.0, HALF)
        updates.append(upd)
    return ordering, normings, root_law, tuple(updates)


def classify_norming(ordering: CliqueOrdering, models: dict, v: int) -> NormingVerdict:
    """Decide whether the single-vertex limit exists along the ordering."""
    try:
        _walk(ordering, models, v)
    except NormingIncompatible as exc:
        return NormingVerdict(
            kind="tail_noise_required",
            witness_clique=exc.witness_clique,
            reason=str(exc),
        )
    return NormingVerdict(kind="theorem_1", witness_clique=None,
                          reason="all clique updates compose")


def build_tail_model(ordering: CliqueOrdering, models: dict, v: int) -> TailGraphicalModel:
    """Assemble the single-vertex conditional limit; the ordering is
    re-rooted at v if needed.  Raises :class:`NormingIncompatible` (with
    the witness clique) when classification fails."""
    ordering, normings, root_law, updates = _walk(ordering, models, v)
    return TailGraphicalModel(
        ordering=ordering, v=v, normings=normings,
        root_noise=root_law, updates=updates,
    )


def _sample_block(model: TailGraphicalModel, rng, nb: int,
                  zpos: dict[int, int]) -> tuple[np.ndarray, np.ndarray]:
    zmat = np.zeros((nb, len(zpos)))
    if model.root_noise is not None:
        root = model.root_noise.sample(rng, nb)
        for j, u in enumerate(model.root_noise.index):
            zmat[:, zpos[u]] = root[:, j]
    for upd in model.updates:
        eps = upd.noise.sample(rng, nb)
        z_sep = np.zeros((nb, len(upd.sep)))
        for j, s in enumerate(upd.sep):
            if s != model.v:
                z_sep[:, j] = zmat[:, zpos[s]]
        out = upd.apply(z_sep, eps)
        for j, u in enumerate(upd.rest):
            zmat[:, zpos[u]] = out[:, j]
    e_v = rng.standard_exponential(nb)
    return zmat, e_v


def sample_tail_model(model: TailGraphicalModel, n: int, seed: int,
                      workers: int = 1) -> SampleMatrix:
    """n joint draws of (E_v, Z_{V\\v}); column v holds the exponential.

    Output bytes depend only on (model, n, seed): each fixed-size row
    block uses its own counter-derived stream, so worker count cannot
    affect the result.
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    cols = model.columns
    zpos = {u: k for k, u in enumerate(model.z_index)}
    values = np.empty((n, len(cols)))
    vcol = cols.index(model.v)
    zcols = [cols.index(u) for u in model.z_index]

    def run_block(args):
        k, start, stop = args
        zmat, e_v = _sample_block(model, derived_rng(seed, k), stop - start, zpos)
        values[start:stop, vcol] = e_v
        if zcols:
            values[np.ix_(range(start, stop), zcols)] = zmat

    blocks = block_bounds(n)
    if workers == 1 or len(blocks) == 1:
        for blk in blocks:
            run_block(blk)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_block, blocks))
    return SampleMatrix(
        columns=cols, values=values,
        meta={"kind": "tail_model", "v": model.v, "n": n, "seed": seed},
    )


def tail_model_moments(model: TailGraphicalModel) -> tuple[IndexedVector, IndexedMatrix]:
    """Exact mean and covariance of the limit vector Z_{V\\v}.

    The recursion is linear with independent clique noises, so moments
    propagate in closed form: new vertices get ψ·mean_S + φ∘E[ε] and the
    covariance picks up ψΣψᵀ plus the scaled noise covariance.  For an
    all-HR graph this reproduces the dedicated recursion
    (:func:`tailgraph.husler_reiss.tail_model_mean` / precision); for an
    all-Gaussian graph it reproduces the whole-graph closed form
    (:func:`tailgraph.gaussian.limit_law`).
    """
    idx = model.z_index
    pos = {u: k for k, u in enumerate(idx)}
    mean = np.zeros(len(idx))
    cov = np.zeros((len(idx), len(idx)))
    if model.root_noise is not None:
        rows = [pos[u] for u in model.root_noise.index]
        mean[rows] = model.root_noise.mean.values
        cov[np.ix_(rows, rows)] = model.root_noise.cov.values
    for upd in model.updates:
        psi_eff = np.zeros((len(upd.rest), len(idx)))
        if upd.psi is not None:
            for j, s in enumerate(upd.sep):
                if s != model.v:
                    psi_eff[:, pos[s]] = upd.psi.values[:, j]
        phi = upd.phi.values
        m_rest = psi_eff @ mean + phi * upd.noise.mean.values
        cross = psi_eff @ cov
        v_rest = (cross @ psi_eff.T
                  + phi[:, None] * upd.noise.cov.values * phi[None, :])
        rows = [pos[u] for u in upd.rest]
        mean[rows] = m_rest
        cov[rows, :] = cross
        cov[:, rows] = cross.T
        cov[np.ix_(rows, rows)] = v_rest
    return IndexedVector(idx, mean), IndexedMatrix.square(idx, cov)


# ---------------------------------------------------------------------------
# remainder verification


@dataclass(frozen=True)
class RemainderRow:
    clique: tuple[int, ...]
    t: float
    sup_a: float
    sup_b: float

    def to_dict(self) -> dict:
        return {"clique": list(self.clique), "t": self.t,
                "sup_a": self.sup_a, "sup_b": self.sup_b}


@dataclass(frozen=True)
class RemainderReport:
    v: int
    rows: tuple[RemainderRow, ...]

    def for_clique(self, clique) -> list[RemainderRow]:
        key = tuple(sorted(clique))
        return [r for r in self.rows if r.clique == key]

    def max_sup(self) -> float:
        return max((max(r.sup_a, r.sup_b) for r in self.rows), default=0.0)

    def to_dict(self) -> dict:
        return {"v": self.v, "rows": [r.to_dict() for r in self.rows]}


def verify_remainders(ordering: CliqueOrdering, models: dict, v: int,
                      t_grid=(10.0, 100.0, 1000.0),
                      z_grid=None) -> RemainderReport:
    """Finite-level defect of each clique's norming composition.

    For every non-root clique, every level t and every separator
    fluctuation z on the grid, compares the composed single-vertex
    norming against the clique's own separator norming evaluated at the
    perturbed separator state T(z,t) = a(t) + b(t)z:

        A = [a^{(v)}_rest(t) + b^{(v)}_rest(t)·ψ(z) − a^{(S)}(T)] / b^{(S)}(T)
        B = b^{(v)}_rest(t)·φ / b^{(S)}(T) − 1

    and reports per-(clique, t) suprema of |A| and |B| over the grid.
    """
    model = build_tail_model(ordering, models, v)
    if z_grid is None:
        z_grid = np.linspace(-3.0, 3.0, 13)
    z_grid = np.asarray(z_grid, dtype=float)
    rows = []
    for upd in model.updates:
        free = [s for s in upd.sep if s != model.v]
        grids = np.meshgrid(*([z_grid] * len(free)), indexing="ij") if free else []
        zpts = (np.stack([g.ravel() for g in grids], axis=1)
                if free else np.zeros((1, 0)))
        npts = zpts.shape[0]
        z_full = np.zeros((npts, len(upd.sep)))
        for j, s in enumerate(upd.sep):
            if s in free:
                z_full[:, j] = zpts[:, free.index(s)]
        for t in t_grid:
            t = float(t)
            big_t = np.empty((npts, len(upd.sep)))
            for j, s in enumerate(upd.sep):
                pair = model.normings[s]
                big_t[:, j] = pair.a(t) + pair.b(t) * z_full[:, j]
            a_sep = upd.a_fun(big_t)
            b_sep = upd.b_fun(big_t)
            a_v = np.array([model.normings[u].a(t) for u in upd.rest])
            b_v = np.array([model.normings[u].b(t) for u in upd.rest])
            psi_z = (z_full @ upd.psi.values.T if upd.psi is not None
                     else np.zeros((npts, len(upd.rest))))
            a_def = (a_v[None, :] + b_v[None, :] * psi_z - a_sep) / b_sep
            b_def = (b_v[None, :] * upd.phi.values[None, :]) / b_sep - 1.0
            rows.append(RemainderRow(
                clique=upd.clique, t=t,
                sup_a=float(np.max(np.abs(a_def))),
                sup_b=float(np.max(np.abs(b_def))),
            ))
    return RemainderReport(v=model.v, rows=tuple(rows))


# ---------------------------------------------------------------------------
# block-graph tail noise


@dataclass(frozen=True)
class NoiseBlock:
    """One independent block of the separator-normed limit."""

    position: int
    clique: tuple[int, ...]
    sep_vertex: int
    rest: tuple[int, ...]
    family: str
    law: GaussianLaw
    a_fun: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    b_fun: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "clique": list(self.clique),
            "separator_vertex": self.sep_vertex,
            "new_vertices": list(self.rest),
            "family": self.family,
            "law": self.law.to_dict(),
        }


@dataclass(frozen=True)
class TailNoiseModel:
    """Independent per-clique noise blocks of a block graph rooted at v."""

    ordering: CliqueOrdering
    v: int
    blocks: tuple[NoiseBlock, ...]

    @property
    def z_index(self) -> tuple[int, ...]:
        return tuple(u for u in self.ordering.graph.vertices if u != self.v)

    def mean(self) -> IndexedVector:
        vals = {u: 0.0 for u in self.z_index}
        for blk in self.blocks:
            for u in blk.rest:
                vals[u] = blk.law.mean.entry(u)
        return IndexedVector(self.z_index, np.array([vals[u] for u in self.z_index]))

    def covariance(self) -> IndexedMatrix:
        out = np.zeros((len(self.z_index), len(self.z_index)))
        pos = {u: k for k, u in enumerate(self.z_index)}
        for blk in self.blocks:
            rows = [pos[u] for u in blk.rest]
            out[np.ix_(rows, rows)] = blk.law.cov.values
        return IndexedMatrix.square(self.z_index, out)

    def sample(self, n: int, seed: int) -> SampleMatrix:
        cols = self.ordering.graph.vertices
        values = np.empty((n, len(cols)))
        vcol = cols.index(self.v)
        for k, start, stop in block_bounds(n):
            rng = derived_rng(seed, k)
            nb = stop - start
            for blk in self.blocks:
                draw = blk.law.sample(rng, nb)
                for j, u in enumerate(blk.rest):
                    values[start:stop, cols.index(u)] = draw[:, j]
            values[start:stop, vcol] = rng.standard_exponential(nb)
        return SampleMatrix(
            columns=cols, values=values,
            meta={"kind": "tail_noise", "v": self.v, "n": n, "seed": seed},
        )

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "ordering": self.ordering.to_dict(),
            "blocks": [b.to_dict() for b in self.blocks],
        }


def build_tail_noise(ordering: CliqueOrdering, models: dict, v: int) -> TailNoiseModel:
    """Block-wise separator-normed limit for a block graph.

    Every separator must be a single vertex; the first block conditions
    C_1 on v itself (and so coincides with the single-clique limit law),
    later blocks condition each clique on its separator vertex.
    """
    ordering = _rooted(ordering, v)
    bad = [s for s in ordering.separators[1:] if len(s) != 1]
    if bad:
        raise NotBlockGraph(
            f"separators {bad} are not singletons; the block decomposition "
            "needs a block graph"
        )
    table = _models_table(ordering, models)
    blocks = []
    for i, clique in enumerate(ordering.cliques):
        model = table[clique]
        fam = _family_of(model)
        if i == 0:
            s_vertex = v
            rest = tuple(u for u in clique if u != v)
            if not rest:
                continue
            if fam == "husler_reiss":
                law = hr.hr_root_law(model, v)

                def a_fun(x, _m=len(rest)):
                    x = np.atleast_2d(np.asarray(x, dtype=float))
                    return np.repeat(x, _m, axis=1)

                def b_fun(x, _m=len(rest)):
                    x = np.atleast_2d(np.asarray(x, dtype=float))
                    return np.ones((x.shape[0], _m))
            else:
                rn = gsn.root_norming(model, v)
                law = rn.law
                coeff = rn.coeff.values

                def a_fun(x, _c=coeff):
                    x = np.atleast_2d(np.asarray(x, dtype=float))
                    return _c[None, :] * x

                def b_fun(x, _m=len(rest)):
                    x = np.atleast_2d(np.asarray(x, dtype=float))
                    return np.repeat(np.sqrt(np.abs(x)), _m, axis=1)
        else:
            s_vertex = ordering.separators[i][0]
            rest = tuple(u for u in clique if u != s_vertex)
            if fam == "husler_reiss":
                params = hr.a2_limit_params(model, (s_vertex,))
                law = params.law

                def a_fun(x, _s=params.slope.values):
                    return np.atleast_2d(np.asarray(x, dtype=float)) @ _s.T

                def b_fun(x, _m=len(rest)):
                    x = np.atleast_2d(np.asarray(x, dtype=float))
                    return np.ones((x.shape[0], _m))
            else:
                sn = gsn.separator_norming(model, (s_vertex,), np.ones(1))
                law = sn.noise
                a_fun, b_fun = sn.a_of, sn.b_of
        blocks.append(NoiseBlock(
            position=i, clique=clique, sep_vertex=s_vertex, rest=rest,
            family=fam, law=law, a_fun=a_fun, b_fun=b_fun,
        ))
    return TailNoiseModel(ordering=ordering, v=v, blocks=tuple(blocks))
