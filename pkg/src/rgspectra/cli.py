"""Command-line entry point.

Subcommands map one-to-one onto the experiment surfaces:

    sample     write one realized graph as an edge list
    spectrum   dump eigenvalues of A / Abar / L / Lbar for one sample
    walks      CSV census of canonical good closed walks vs. the count bounds
    verify     run the configured Monte Carlo experiment; exit 0 iff all
               selected criteria pass (1 on failure, 2 on config errors)
    decompose  per-trial spectral norms of the four-term decomposition

All randomness flows from the config's master seed (overridable with --seed),
so outputs are byte-identical across reruns and worker counts.  CSV uses '.'
decimals with 17 significant digits; JSON is key-sorted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import concentration, graphmatrices, models, rng, walks
from .concentration import ExperimentSummary, TrialReport, build_model, run_experiment
from .config import ConfigError, ExperimentConfig, load_config, parse_config


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


TRIAL_COLUMNS = [
    "trial",
    "seed",
    "adjacency_ratio",
    "adjacency_weyl",
    "laplacian_gap",
    "m1",
    "m2",
    "m3",
    "m4",
    "degree_dev",
    "scaling_dev",
    "decomposition_maxabs",
    "resamples",
    "aborted",
]


def _trial_row(r: TrialReport) -> list:
    m = r.m_norms or (None, None, None, None)
    return [
        r.trial_index,
        r.seed,
        r.adjacency_ratio,
        r.adjacency_weyl,
        r.laplacian_gap,
        m[0],
        m[1],
        m[2],
        m[3],
        r.degree_dev,
        r.scaling_dev,
        r.decomposition_maxabs,
        r.resamples,
        r.aborted,
    ]


def summary_payload(summary: ExperimentSummary, config_echo) -> dict:
    return {
        "config": config_echo,
        "model": summary.model,
        "n": summary.n,
        "trials": summary.trials,
        "master_seed": summary.master_seed,
        "tau": summary.tau,
        "epsilon": summary.epsilon,
        "delta": summary.delta,
        "Delta": summary.Delta,
        "k_lambda": summary.k_lambda,
        "lambda_sum_sq": summary.lambda_sum_sq,
        "bounds": summary.bounds,
        "hypothesis": summary.hypothesis,
        "quantiles": summary.quantiles,
        "criteria": summary.criteria,
        "pass": summary.passed,
        "aborted_trials": summary.aborted_trials,
        "abort_indices": list(summary.abort_indices),
    }


def _load_effective_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    cfg = load_config(args.config)
    if args.seed is not None:
        raw = dict(cfg.raw)
        raw["master_seed"] = args.seed
        cfg = parse_config(raw)
    return cfg


def _require_graph_model(cfg: ExperimentConfig):
    model = build_model(cfg.model)
    if not isinstance(model, models.ProbabilityMatrix):
        raise ConfigError(f"model kind {cfg.model['kind']!r} has no graph sample")
    return model


def cmd_sample(args) -> int:
    cfg = _load_effective_config(args)
    pm = _require_graph_model(cfg)
    gs = models.sample(pm, cfg.master_seed)
    out = Path(args.out) / cfg.output["edge_list"]
    models.save_edge_list(gs, out)
    print(f"wrote {out}")
    return 0


def cmd_spectrum(args) -> int:
    cfg = _load_effective_config(args)
    pm = _require_graph_model(cfg)
    gs = models.sample(pm, cfg.master_seed)
    pair = graphmatrices.laplacians(gs, pm)
    spectra = {
        "adjacency": np.linalg.eigvalsh(gs.adj.astype(np.float64)),
        "expected_adjacency": np.linalg.eigvalsh(pm.p),
        "laplacian": np.linalg.eigvalsh(pair.L),
        "expected_laplacian": np.linalg.eigvalsh(pair.Lbar),
    }
    base = Path(args.out) / cfg.output["spectrum"]
    if args.format == "json":
        path = base.with_suffix(".json")
        _write_json(path, {k: v.tolist() for k, v in spectra.items()})
    else:
        path = base.with_suffix(".csv")
        header = ["index"] + list(spectra)
        rows = [
            [i] + [spectra[k][i] for k in spectra] for i in range(pm.n)
        ]
        _write_csv(path, header, rows)
    print(f"wrote {path}")
    return 0


def cmd_walks(args) -> int:
    rows = walks.census_table(args.kmax, n=args.n)
    out = Path(args.out) / "walks.csv"
    _write_csv(
        out,
        ["k", "p", "count", "fk_bound", "vu_bound"],
        [[r["k"], r["p"], r["count"], r["fk_bound"], r["vu_bound"]] for r in rows],
    )
    print(f"wrote {out}")
    return 0


def cmd_verify(args) -> int:
    cfg = _load_effective_config(args)
    summary = run_experiment(cfg, workers=args.workers)
    out_dir = Path(args.out)
    csv_path = out_dir / cfg.output["trials_csv"]
    json_path = out_dir / cfg.output["summary_json"]
    _write_csv(csv_path, TRIAL_COLUMNS, [_trial_row(r) for r in summary.reports])
    _write_json(json_path, summary_payload(summary, dict(cfg.raw)))
    for name, crit in summary.criteria.items():
        status = "pass" if crit["pass"] else "FAIL"
        print(f"{name}: {status} (value={_fmt(crit['value'])} bound={_fmt(crit['bound'])})")
    if summary.aborted_trials:
        print(f"aborted trials: {summary.aborted_trials} {list(summary.abort_indices)}")
    print(f"wrote {csv_path} and {json_path}")
    return 0 if summary.passed else 1


def cmd_decompose(args) -> int:
    cfg = _load_effective_config(args)
    pm = _require_graph_model(cfg)
    tau = cfg.tau if cfg.tau is not None else graphmatrices.default_tau(pm.n)
    split = graphmatrices.spectral_split(pm, tau)
    sqrt_delta = models.degrees(pm).t_min ** 0.5
    rows = []
    for index in range(cfg.trials):
        seed = rng.derive_seed(cfg.master_seed, index)
        lt = concentration.laplacian_trial(pm, seed, tau, split=split)
        if lt.aborted:
            rows.append([index, seed, None, None, None, None, None, lt.resamples, True])
            continue
        raw = tuple(v / sqrt_delta for v in lt.m_norms)
        rows.append(
            [index, lt.effective_seed, *raw, lt.decomposition_maxabs, lt.resamples, False]
        )
    out = Path(args.out) / cfg.output["decompose_csv"]
    _write_csv(
        out,
        ["trial", "seed", "m1", "m2", "m3", "m4", "sum_residual_maxabs", "resamples", "aborted"],
        rows,
    )
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgspectra",
        description="Spectral concentration experiments for edge-independent random graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to the JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_sample = sub.add_parser("sample", help="write one realized graph as an edge list")
    common(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_spec = sub.add_parser("spectrum", help="dump eigenvalues of A/Abar/L/Lbar")
    common(p_spec)
    p_spec.set_defaults(func=cmd_spectrum)

    p_walks = sub.add_parser("walks", help="canonical walk census vs. count bounds")
    common(p_walks)
    p_walks.add_argument("--kmax", type=int, default=10, help="largest walk length")
    p_walks.add_argument(
        "--n", type=int, default=None,
        help="vertex-universe size for the classical bound column (omitted: empty)",
    )
    p_walks.set_defaults(func=cmd_walks)

    p_verify = sub.add_parser("verify", help="run the configured experiment")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_dec = sub.add_parser("decompose", help="per-trial decomposition norms")
    common(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except (ConfigError, FileNotFoundError, walks.WalkBudgetError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
