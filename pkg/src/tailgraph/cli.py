"""Command-line driver.

Three subcommands: ``graph`` (chordality / junction tree), ``derive``
(classify the norming and emit the limit object), ``verify`` (seeded
Monte Carlo checks against the derived limit).

Exit codes: 0 success, 2 malformed configuration, 3 mathematical
precondition failure (non-chordal graph, incompatible separators, ...),
4 verification checks ran but failed.  Failures print a machine-readable
JSON payload ``{"error": {"type": ..., "message": ...}}``.

Every output embeds the config hash and seed.  Reruns with the same
config and seed produce byte-identical files regardless of ``--workers``,
so worker count never appears in any output document.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import diagnostics as dg
from . import husler_reiss as hr
from . import limits
from .config import RunConfig, load_config
from .errors import ConfigError, TailgraphError
from .graphs import clique_ordering, junction_tree

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY = 4

HR_REMAINDER_CEILING = 1e-10


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(doc: dict, out_dir: Path | None, filename: str) -> None:
    text = _dump(doc)
    if out_dir is not None:
        (out_dir / filename).write_text(text)
    click.echo(text, nl=False)


def _write(out_dir: Path | None, filename: str, text: str) -> None:
    if out_dir is not None:
        (out_dir / filename).write_text(text)


def _fail(exc: Exception, code: int, extra: dict | None = None) -> None:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None) or getattr(exc, "witness_clique", None)
    if witness is not None:
        payload["witness"] = list(witness)
    doc = {"error": payload}
    if extra:
        doc.update(extra)
    click.echo(_dump(doc), nl=False)
    sys.exit(code)


def _load(config_path: str) -> RunConfig:
    try:
        return load_config(config_path)
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)


def _out_dir(flag: str | None, cfg: RunConfig) -> Path | None:
    target = flag if flag is not None else cfg.out
    if target is None:
        return None
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _pick_v(flag: int | None, cfg: RunConfig) -> int:
    v = flag if flag is not None else cfg.v
    if v is None:
        raise ConfigError("no conditioning vertex: set 'v' in the config "
                          "or pass --v")
    if not (1 <= v <= cfg.graph.n):
        raise ConfigError(f"v={v} outside 1..{cfg.graph.n}")
    return v


def _family(model) -> str:
    return "husler_reiss" if isinstance(model, hr.HuslerReissModel) else "gaussian"


CONVENTIONS = {
    "margins": "unit_exponential",
    "pair_conditional_limit": "normal(mean=-gamma/2, variance=gamma)",
    "norming": "a(t) = coeff * t, b(t) = scale * t**bexp, bexp in {0, 1/2}",
}


@click.group()
def main() -> None:
    """Tail limits for decomposable graphical models."""


@main.command("graph")
@click.option("--config", "config_path", required=True,
              type=click.Path(), help="Run configuration (JSON).")
@click.option("--out", "out_flag", default=None, type=click.Path(),
              help="Directory for output documents.")
@click.option("--root", default=None, type=int,
              help="Vertex the first clique must contain.")
def cmd_graph(config_path: str, out_flag: str | None, root: int | None) -> None:
    """Check chordality and connectivity; emit the junction tree."""
    cfg = _load(config_path)
    out = _out_dir(out_flag, cfg)
    if root is None:
        root = cfg.v if cfg.v is not None else 1
    try:
        ordering = clique_ordering(cfg.graph, root)
        tree = junction_tree(ordering)
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except TailgraphError as exc:
        _fail(exc, EXIT_PRECONDITION, extra={"config_hash": cfg.config_hash()})
    doc = {
        "config_hash": cfg.config_hash(),
        "graph": cfg.graph.to_dict(),
        "root": root,
        "connected": True,
        "chordal": True,
        "ordering": ordering.to_dict(),
        "junction_tree": tree.to_dict(),
    }
    _emit(doc, out, "graph.json")


@main.command("derive")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_flag", default=None, type=click.Path())
@click.option("--v", "v_flag", default=None, type=int,
              help="Conditioning vertex (overrides the config).")
def cmd_derive(config_path: str, out_flag: str | None, v_flag: int | None) -> None:
    """Classify the norming recursion and emit the limit object."""
    cfg = _load(config_path)
    out = _out_dir(out_flag, cfg)
    try:
        v = _pick_v(v_flag, cfg)
        ordering = cfg.ordering(root=v)
        models = cfg.models(ordering)
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except TailgraphError as exc:
        _fail(exc, EXIT_PRECONDITION, extra={"config_hash": cfg.config_hash()})

    doc = {"config_hash": cfg.config_hash(), "v": v,
           "conventions": dict(CONVENTIONS)}
    try:
        verdict = limits.classify_norming(ordering, models, v)
        doc["verdict"] = verdict.to_dict()
        if verdict.kind == "theorem_1":
            model = limits.build_tail_model(ordering, models, v)
            mean, cov = limits.tail_model_moments(model)
            doc["tail_model"] = model.to_dict()
            doc["limit_moments"] = {"mean": mean.to_dict(),
                                    "covariance": cov.to_dict()}
        else:
            noise = limits.build_tail_noise(ordering, models, v)
            doc["tail_noise"] = noise.to_dict()
            doc["limit_moments"] = {"mean": noise.mean().to_dict(),
                                    "covariance": noise.covariance().to_dict()}
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except TailgraphError as exc:
        _fail(exc, EXIT_PRECONDITION, extra={"config_hash": cfg.config_hash(),
                                             "partial": doc.get("verdict")})
    _emit(doc, out, "derive.json")


def _remainder_csv(report: limits.RemainderReport) -> str:
    lines = ["clique,t,sup_a,sup_b"]
    for r in report.rows:
        name = " ".join(str(u) for u in r.clique)
        lines.append(f"{name},{r.t!r},{r.sup_a!r},{r.sup_b!r}")
    return "\n".join(lines) + "\n"


def _remainder_checks(report: limits.RemainderReport, models: dict) -> dict:
    """Per-clique verdicts: exact zeros for pure-location cliques, and a
    first-to-last decrease of the defect suprema otherwise."""
    checks = {}
    cliques = sorted({r.clique for r in report.rows})
    for c in cliques:
        rows = report.for_clique(c)
        sups = [max(r.sup_a, r.sup_b) for r in rows]
        if _family(models[c]) == "husler_reiss":
            ok = max(sups) < HR_REMAINDER_CEILING
        else:
            ok = sups[-1] <= sups[0]
        checks[" ".join(str(u) for u in c)] = {
            "family": _family(models[c]),
            "sup_first": sups[0],
            "sup_last": sups[-1],
            "ok": ok,
        }
    return checks


@main.command("verify")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_flag", default=None, type=click.Path())
@click.option("--v", "v_flag", default=None, type=int)
@click.option("--seed", default=None, type=int, help="Overrides the config seed.")
@click.option("--n", "n_flag", default=None, type=int,
              help="Samples per level (overrides the config).")
@click.option("--t-levels", "t_flag", default=None, type=str,
              help="Comma-separated ascending levels, e.g. '2,4,8'.")
@click.option("--workers", default=1, type=int, show_default=True,
              help="Simulation threads; never affects output bytes.")
def cmd_verify(config_path: str, out_flag: str | None, v_flag: int | None,
               seed: int | None, n_flag: int | None, t_flag: str | None,
               workers: int) -> None:
    """Run the seeded Monte Carlo checks and write the verdict tables."""
    cfg = _load(config_path)
    out = _out_dir(out_flag, cfg)
    try:
        v = _pick_v(v_flag, cfg)
        seed = cfg.seed if seed is None else seed
        n = cfg.n if n_flag is None else n_flag
        if n < 1:
            raise ConfigError(f"n must be positive, got {n}")
        if t_flag is None:
            t_levels = cfg.t_levels
        else:
            try:
                t_levels = tuple(float(s) for s in t_flag.split(","))
            except ValueError:
                raise ConfigError(f"cannot parse --t-levels {t_flag!r}")
            if not t_levels or any(t <= 0 for t in t_levels) \
                    or list(t_levels) != sorted(t_levels):
                raise ConfigError("--t-levels must be positive and ascending")
        if workers < 1:
            raise ConfigError(f"workers must be positive, got {workers}")
        ordering = cfg.ordering(root=v)
        models = cfg.models(ordering)
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except TailgraphError as exc:
        _fail(exc, EXIT_PRECONDITION, extra={"config_hash": cfg.config_hash()})

    tol = cfg.tolerances
    summary = {"config_hash": cfg.config_hash(), "v": v, "seed": seed, "n": n,
               "t_levels": list(t_levels), "conventions": dict(CONVENTIONS)}
    checks = {}
    try:
        verdict = limits.classify_norming(ordering, models, v)
        summary["verdict"] = verdict.to_dict()

        report = dg.convergence_study(
            ordering, models, v, t_levels, n, seed,
            ks_const=tol["ks_const"], workers=workers)
        report = dataclasses.replace(report, slack=tol["trend_slack"])
        _write(out, "ks_table.csv", report.ks_csv())
        _write(out, "moment_gaps.csv", report.gaps_csv())
        summary["convergence"] = report.to_dict()
        checks["ks_trend"] = report.trend_ok()

        if verdict.kind == "theorem_1":
            rem = limits.verify_remainders(ordering, models, v,
                                           t_grid=tol["remainder_grid"])
            _write(out, "remainders.csv", _remainder_csv(rem))
            rem_checks = _remainder_checks(rem, models)
            summary["remainders"] = {"grid": list(tol["remainder_grid"]),
                                     "cliques": rem_checks}
            checks["remainders"] = all(c["ok"] for c in rem_checks.values())

        if all(_family(m) == "husler_reiss" for m in models.values()):
            mrv = dg.mrv_checks(ordering, models, seed=seed)
            mrv_doc = mrv.to_dict()
            _write(out, "mrv.json", _dump(mrv_doc))
            summary["mrv"] = mrv_doc
            checks["mrv"] = mrv.ok
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except TailgraphError as exc:
        _fail(exc, EXIT_PRECONDITION, extra={"config_hash": cfg.config_hash()})

    summary["checks"] = checks
    summary["pass"] = all(checks.values())
    _emit(summary, out, "summary.json")
    sys.exit(EXIT_OK if summary["pass"] else EXIT_VERIFY)


if __name__ == "__main__":
    main()
