"""Empirical diagnostics: tail-dependence estimation, weak-convergence
studies against the limit objects, and regular-variation checks of the
factorized exponent-measure density."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import husler_reiss as hr
from .errors import ConfigError, EmptySubset, QuantileOutOfRange
from .graphs import CliqueOrdering
from .limits import (
    SampleMatrix,
    TailGraphicalModel,
    TailNoiseModel,
    _models_table,
    build_tail_model,
    build_tail_noise,
    classify_norming,
    tail_model_moments,
)
from .rng import OFFSET_MISC, derived_rng
from .simulate import conditional_exceedance, renormalize

#: KS acceptance scale: statistic must stay below KS_CONST / sqrt(n).
KS_CONST = 1.95

#: Slack factor absorbing Monte Carlo noise in monotone-trend verdicts.
TREND_SLACK = 1.2


def chi_estimator(samples: SampleMatrix, subset, q: float) -> float:
    """Empirical tail-dependence coefficient of the columns in ``subset``.

    Counts rows whose marginal ranks all exceed the q-th quantile and
    normalizes by the expected count under comonotonicity, so perfectly
    dependent columns give exactly 1 for any q and independent columns
    give roughly (1-q)^{|subset|-1}.
    """
    subset = tuple(int(u) for u in subset)
    if not subset:
        raise EmptySubset("chi needs at least one column")
    missing = set(subset) - set(samples.columns)
    if missing:
        raise ConfigError(f"columns {sorted(missing)} not in sample matrix")
    if not 0.0 < q < 1.0:
        raise QuantileOutOfRange(f"q must be in (0, 1), got {q}")
    n = samples.n
    k = max(1, round((1.0 - q) * n))
    if k >= n:
        raise QuantileOutOfRange(f"q={q} leaves no exceedances at n={n}")
    joint = np.ones(n, dtype=bool)
    for u in subset:
        ranks = stats.rankdata(samples.column(u), method="ordinal")
        joint &= ranks > n - k
    return float(joint.sum() / k)


def ks_unit_exponential(x: np.ndarray) -> float:
    return float(stats.kstest(np.asarray(x, dtype=float), "expon").statistic)


def ks_normal(x: np.ndarray, mean: float, sd: float) -> float:
    return float(stats.kstest(np.asarray(x, dtype=float), "norm",
                              args=(mean, sd)).statistic)


@dataclass(frozen=True)
class MarginRow:
    t: float
    vertex: int
    ks: float
    n: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.ks < self.threshold

    def to_dict(self) -> dict:
        return {"t": self.t, "vertex": self.vertex, "ks": self.ks,
                "n": self.n, "threshold": self.threshold,
                "passed": self.passed}


@dataclass(frozen=True)
class ConvergenceReport:
    v: int
    mode: str
    t_levels: tuple[float, ...]
    n: int
    seed: int
    rows: tuple[MarginRow, ...]
    mean_gap: dict  # t -> max |empirical - limit| over margins
    cov_gap: dict  # t -> max |empirical - limit| over entries
    slack: float = TREND_SLACK

    def margins(self, t: float) -> list[MarginRow]:
        return [r for r in self.rows if r.t == t]

    def trend_ok(self) -> bool:
        """KS distances nonincreasing (up to slack) along the t ladder,
        separately per vertex."""
        by_vertex = {}
        for r in self.rows:
            by_vertex.setdefault(r.vertex, []).append(r)
        for rows in by_vertex.values():
            rows = sorted(rows, key=lambda r: r.t)
            for a, b in zip(rows, rows[1:]):
                if b.ks > a.ks * self.slack:
                    return False
        return True

    def final_pass(self) -> bool:
        t_last = max(self.t_levels)
        return all(r.passed for r in self.margins(t_last))

    def ks_csv(self) -> str:
        lines = ["t,vertex,ks,n,threshold,pass"]
        for r in self.rows:
            lines.append(f"{r.t!r},{r.vertex},{r.ks!r},{r.n},"
                         f"{r.threshold!r},{int(r.passed)}")
        return "\n".join(lines) + "\n"

    def gaps_csv(self) -> str:
        lines = ["t,mean_gap,cov_gap"]
        for t in self.t_levels:
            lines.append(f"{t!r},{self.mean_gap[t]!r},{self.cov_gap[t]!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "v": self.v, "mode": self.mode, "t_levels": list(self.t_levels),
            "n": self.n, "seed": self.seed,
            "rows": [r.to_dict() for r in self.rows],
            "mean_gap": {str(t): g for t, g in self.mean_gap.items()},
            "cov_gap": {str(t): g for t, g in self.cov_gap.items()},
            "trend_ok": self.trend_ok(),
            "final_pass": self.final_pass(),
        }


def convergence_study(ordering: CliqueOrdering, models: dict, v: int,
                      t_levels, n: int, seed: int,
                      mode: str | None = None,
                      ks_const: float = KS_CONST,
                      workers: int = 1) -> ConvergenceReport:
    """Conditional samples, renormalized, against the limit law per level.

    The mode follows the classifier unless forced: theorem_1 graphs are
    renormalized around the conditioning vertex and compared with the
    tail model's exact marginal moments; block graphs needing tail
    noise use separator-based renormalization against the block laws.
    The same seed feeds every level (common random numbers), which makes
    the monotone-trend verdict sharp.
    """
    t_levels = tuple(float(t) for t in t_levels)
    if not t_levels or any(t <= 0 for t in t_levels):
        raise ConfigError(f"t_levels must be positive, got {t_levels}")
    if mode is None:
        verdict = classify_norming(ordering, models, v)
        mode = ("condition_on_root" if verdict.kind == "theorem_1"
                else "separator_based")
    if mode == "condition_on_root":
        model = build_tail_model(ordering, models, v)
        lim_mean, lim_cov = tail_model_moments(model)
    elif mode == "separator_based":
        model = build_tail_noise(ordering, models, v)
        lim_mean, lim_cov = model.mean(), model.covariance()
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    z_index = model.z_index
    threshold = float(ks_const / np.sqrt(n))
    rows = []
    mean_gap, cov_gap = {}, {}
    for t in t_levels:
        cond = conditional_exceedance(ordering, models, v, t, n, seed,
                                      workers=workers)
        z = renormalize(cond, model, mode)
        rows.append(MarginRow(t=t, vertex=v,
                              ks=ks_unit_exponential(z.column(v)),
                              n=n, threshold=threshold))
        for u in z_index:
            sd = float(np.sqrt(lim_cov.entry(u, u)))
            rows.append(MarginRow(
                t=t, vertex=u,
                ks=ks_normal(z.column(u), float(lim_mean.entry(u)), sd),
                n=n, threshold=threshold,
            ))
        zz = z.sub(z_index)
        mean_gap[t] = float(np.max(np.abs(zz.mean(axis=0) - lim_mean.values)))
        emp_cov = np.cov(zz.T).reshape(len(z_index), len(z_index))
        cov_gap[t] = float(np.max(np.abs(emp_cov - lim_cov.values)))
    return ConvergenceReport(
        v=v, mode=mode, t_levels=t_levels, n=n, seed=seed,
        rows=tuple(rows), mean_gap=mean_gap, cov_gap=cov_gap,
    )


# ---------------------------------------------------------------------------
# regular-variation checks (HR cliques)


def factorized_density(ordering: CliqueOrdering, models: dict, y) -> float:
    """Graph-wide exponent-measure density: clique densities divided by
    separator-marginal densities along the ordering."""
    table = _models_table(ordering, models)
    y = np.asarray(y, dtype=float)
    cols = ordering.graph.vertices
    if y.shape != (len(cols),):
        raise ConfigError(f"state must have {len(cols)} entries, got {y.shape}")
    pos = {u: k for k, u in enumerate(cols)}
    out = 1.0
    for i, clique in enumerate(ordering.cliques):
        model = table[clique]
        if getattr(model, "family", None) != "husler_reiss":
            raise ConfigError(
                "factorized density requires Hüsler-Reiss cliques (the "
                "asymptotically dependent case has a nontrivial density)"
            )
        yc = y[[pos[u] for u in clique]]
        out *= hr.exponent_measure_density(model, yc)
        sep = ordering.separators[i]
        if sep:
            ysep = y[[pos[u] for u in sep]]
            sep_model = model.restrict(sep)
            out /= hr.exponent_measure_density(sep_model, ysep)
    return float(out)


@dataclass(frozen=True)
class HomogeneityRow:
    point: tuple
    density: float
    scaled_density: float
    rel_err: float

    def to_dict(self) -> dict:
        return {"point": list(self.point), "density": self.density,
                "scaled_density": self.scaled_density,
                "rel_err": self.rel_err}


@dataclass(frozen=True)
class CompatibilityRow:
    clique_a: tuple
    clique_b: tuple
    sep: tuple
    point: tuple
    lam_a: float
    lam_b: float
    gap: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.gap <= self.tol

    def to_dict(self) -> dict:
        return {"clique_a": list(self.clique_a),
                "clique_b": list(self.clique_b), "sep": list(self.sep),
                "point": list(self.point), "lam_a": self.lam_a,
                "lam_b": self.lam_b, "gap": self.gap, "tol": self.tol,
                "passed": self.passed}


@dataclass(frozen=True)
class MRVReport:
    homogeneity: tuple[HomogeneityRow, ...]
    compatibility: tuple[CompatibilityRow, ...]
    homogeneity_tol: float

    @property
    def homogeneity_ok(self) -> bool:
        return all(r.rel_err < self.homogeneity_tol for r in self.homogeneity)

    @property
    def compatibility_ok(self) -> bool:
        return all(r.passed for r in self.compatibility)

    @property
    def ok(self) -> bool:
        return self.homogeneity_ok and self.compatibility_ok

    def to_dict(self) -> dict:
        return {
            "homogeneity": [r.to_dict() for r in self.homogeneity],
            "compatibility": [r.to_dict() for r in self.compatibility],
            "homogeneity_ok": self.homogeneity_ok,
            "compatibility_ok": self.compatibility_ok,
            "ok": self.ok,
        }


def mrv_checks(ordering: CliqueOrdering, models: dict, seed: int = 0,
               n_points: int = 10, scale: float = 2.0,
               homogeneity_tol: float = 1e-4,
               accuracy: float = 1e-9) -> MRVReport:
    """Regular-variation sanity of the factorized density.

    Homogeneity: the assembled density must scale as t^-(d+1) at t =
    ``scale`` on random points, within ``homogeneity_tol`` relative.
    Compatibility: adjacent cliques must induce the same separator
    exponent measure — evaluated by marginalizing each clique's measure
    (+inf padding) on a small separator grid; mismatched models are
    reported, not raised.
    """
    table = _models_table(ordering, models)
    d = ordering.graph.n
    rng = derived_rng(seed, OFFSET_MISC + 1)
    hom = []
    for _ in range(n_points):
        y = rng.uniform(0.5, 2.0, size=d)
        lam = factorized_density(ordering, models, y)
        lam_scaled = factorized_density(ordering, models, scale * y)
        rel = abs(lam_scaled * scale ** (d + 1) - lam) / abs(lam)
        hom.append(HomogeneityRow(
            point=tuple(y), density=lam,
            scaled_density=lam_scaled, rel_err=float(rel),
        ))
    comp = []
    grid = (0.5, 1.0, 2.0)
    for i in range(1, len(ordering)):
        sep = ordering.separators[i]
        child = table[ordering.cliques[i]]
        parent = table[ordering.cliques[ordering.parents[i]]]
        for g in grid:
            x_s = np.full(len(sep), g)
            lam_a, err_a = _marginal_measure(parent, sep, x_s, accuracy)
            lam_b, err_b = _marginal_measure(child, sep, x_s, accuracy)
            tol = 10.0 * (err_a + err_b) + 1e-12
            comp.append(CompatibilityRow(
                clique_a=parent.clique, clique_b=child.clique, sep=sep,
                point=tuple(x_s), lam_a=lam_a, lam_b=lam_b,
                gap=abs(lam_a - lam_b), tol=tol,
            ))
    return MRVReport(homogeneity=tuple(hom), compatibility=tuple(comp),
                     homogeneity_tol=homogeneity_tol)


def _marginal_measure(model, sep, x_s, accuracy):
    """Clique exponent measure with non-separator coordinates at +inf."""
    y = np.full(len(model.clique), np.inf)
    pos = {u: k for k, u in enumerate(model.clique)}
    for j, s in enumerate(sep):
        y[pos[s]] = x_s[j]
    est = hr.exponent_measure_estimate(model, y, accuracy=accuracy)
    return est.value, est.error


def write_samples(samples: SampleMatrix, path) -> None:
    """CSV dump with a vertex-label header row."""
    with open(path, "w") as fh:
        fh.write(",".join(f"v{u}" for u in samples.columns) + "\n")
        for row in samples.values:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
