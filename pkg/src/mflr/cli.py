"""Command-line interface.

Subcommands: ``fit``, ``predict``, ``evaluate``, ``benchmark``, ``cv``.
Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
The ``MFLR_THREADS`` environment variable mirrors ``--threads``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import config as config_mod
from . import dataio, pca, plots
from .benchmark import LoadedProblem, SyntheticProblem, fit_method, run_protocol
from .cv import optimize_w_syn
from .errors import (
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    DataError,
    MflrError,
    NumericalError,
)
from .metrics import normalized_l2_accuracy
from .surrogates import DIRECT_AUG, EXPLICIT_AUG, SINGLE_FIDELITY, synth_direct, synth_explicit_map


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="override every seed in the configuration")
    common.add_argument("--out", default="mflr_out", help="output directory (default: %(default)s)")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    common.add_argument("--threads", type=int, help="worker threads (default: MFLR_THREADS or config)")
    common.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    parser = argparse.ArgumentParser(
        prog="mflr",
        description="Projection-based multifidelity linear regression for high-dimensional outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit a surrogate and serialize it")
    p.add_argument("--hf", required=True, help="HF dataset manifest")
    p.add_argument("--lf", help="LF dataset manifest (required for multifidelity methods)")
    p.add_argument("--method", help="override the configured method")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("predict", parents=[common], help="evaluate a serialized surrogate at new inputs")
    p.add_argument("--surrogate", required=True, help="surrogate JSON file")
    p.add_argument("--inputs", required=True, help="matrix file of inputs, one sample per row")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", parents=[common], help="score a surrogate on a test dataset")
    p.add_argument("--surrogate", required=True, help="surrogate JSON file")
    p.add_argument("--test", required=True, help="test dataset manifest")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("benchmark", parents=[common], help="run the bootstrapped repetition protocol")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("cv", parents=[common], help="report the LOOCV-selected synthetic weight")
    p.add_argument("--hf", required=True, help="HF dataset manifest")
    p.add_argument("--lf", required=True, help="LF dataset manifest")
    p.add_argument("--method", help="direct_aug or explicit_aug (default from config)")
    p.set_defaults(func=_cmd_cv)

    return parser


def _resolve_config(args):
    cfg = config_mod.load(args.config) if args.config else config_mod.ExperimentConfig()
    method = getattr(args, "method", None)
    if method:
        cfg = replace(cfg, method=method)
    if args.seed is not None:
        cfg = config_mod.with_seed(cfg, args.seed)
    threads = args.threads
    if threads is None:
        env = os.environ.get("MFLR_THREADS", "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise DataError(f"MFLR_THREADS must be an integer, got {env!r}", code="bad-config") from None
    if threads is not None:
        cfg = replace(cfg, threads=threads)
    return cfg


def _cmd_fit(args):
    cfg = _resolve_config(args)
    out = dataio.ensure_out_dir(args.out)
    hf = dataio.load_dataset(args.hf)
    lf = dataio.load_dataset(args.lf) if args.lf else None
    if cfg.method != SINGLE_FIDELITY and lf is None:
        raise DataError(f"method {cfg.method!r} needs an LF dataset", code="bad-config")
    surrogate, _ = fit_method(cfg.method, hf, lf, cfg)
    path = out / "surrogate.json"
    dataio.save_surrogate(path, surrogate, config_sha256=cfg.sha256())
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_predict(args):
    out = dataio.ensure_out_dir(args.out)
    surrogate = dataio.load_surrogate(args.surrogate)
    inputs = dataio.read_matrix(args.inputs).T
    predictions = surrogate.predict(inputs)
    path = out / "predictions.csv"
    dataio.write_matrix(path, predictions.T)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_evaluate(args):
    out = dataio.ensure_out_dir(args.out)
    surrogate = dataio.load_surrogate(args.surrogate)
    test = dataio.load_dataset(args.test)
    predictions = surrogate.predict(test.inputs)
    accuracy = normalized_l2_accuracy(test.outputs, predictions)
    norms = np.linalg.norm(test.outputs, axis=0)
    relative = (np.linalg.norm(test.outputs - predictions, axis=0) / norms).tolist()

    errors_path = out / "node_errors.csv"
    dataio.write_matrix(errors_path, np.abs(test.outputs - predictions).T)
    payload = {
        "format": "mflr-evaluation",
        "version": 1,
        "accuracy": accuracy,
        "n_test": test.n_samples,
        "per_sample_relative_error": relative,
        "node_errors": errors_path.name,
    }
    if args.format == "csv":
        path = out / "evaluation.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("sample,relative_error\n")
            for i, err in enumerate(relative):
                fh.write(f"{i},{err!r}\n")
            fh.write(f"accuracy,{accuracy!r}\n")
    else:
        path = out / "evaluation.json"
        dataio.write_json(path, payload)
    if not args.no_figures:
        plots.plot_evaluation(relative, out / "evaluation.png")
    print(f"accuracy {accuracy:.6f}")
    print(f"wrote {path}")
    return EXIT_OK


def _problem_from_config(cfg):
    if cfg.datasets is not None:
        hf_pool = dataio.load_dataset(cfg.datasets.hf)
        if cfg.datasets.lf is None:
            raise DataError("benchmark with datasets needs an LF manifest", code="bad-config")
        lf_pool = dataio.load_dataset(cfg.datasets.lf)
        test = dataio.load_dataset(cfg.datasets.test) if cfg.datasets.test else None
        return LoadedProblem(hf_pool=hf_pool, lf_pool=lf_pool, test=test)
    return SyntheticProblem(cfg.generator)


def _cmd_benchmark(args):
    cfg = _resolve_config(args)
    out = dataio.ensure_out_dir(args.out)
    problem = _problem_from_config(cfg)
    report = run_protocol(problem, cfg.plan, cfg.methods, cfg, threads=cfg.threads)
    report_dict = report.to_dict()
    report_dict["config"] = config_mod.to_dict(cfg)
    if args.format == "csv":
        path = out / "benchmark.csv"
        dataio.write_benchmark_csv(path, report_dict)
    else:
        path = out / "benchmark.json"
        dataio.write_json(path, report_dict)
    if not args.no_figures:
        plots.plot_benchmark(report, out / "benchmark.png")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_cv(args):
    cfg = _resolve_config(args)
    out = dataio.ensure_out_dir(args.out)
    method = cfg.method if cfg.method in (DIRECT_AUG, EXPLICIT_AUG) else DIRECT_AUG
    hf = dataio.load_dataset(args.hf)
    lf = dataio.load_dataset(args.lf)
    if method == DIRECT_AUG:
        synth = synth_direct(lf)
    else:
        hf_basis = pca.fit_basis(hf.outputs, cfg.epsilon)
        lf_basis = pca.fit_basis(lf.outputs, cfg.epsilon)
        synth, _ = synth_explicit_map(hf, lf, cfg.map_degree(), hf_basis, lf_basis)
    result = optimize_w_syn(
        hf, synth, cfg.weighting, cfg.method_degree(method), cfg.epsilon, init=cfg.cv.init
    )
    payload = {
        "format": "mflr-cv",
        "version": 1,
        "method": method,
        "w_syn_star": result.w_syn_star,
        "objective_value": result.objective_value,
        "init": result.init,
        "trace": [[w, v] for w, v in result.trace],
    }
    if args.format == "csv":
        path = out / "cv.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("w_syn,objective\n")
            for w, v in result.trace:
                fh.write(f"{w!r},{v!r}\n")
    else:
        path = out / "cv.json"
        dataio.write_json(path, payload)
    if not args.no_figures:
        plots.plot_cv_trace(result, out / "cv.png")
    print(f"w_syn_star {result.w_syn_star:.6g} (objective {result.objective_value:.6g})")
    print(f"wrote {path}")
    return EXIT_OK


def cli(argv=None):
    """Parse arguments and run one subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MflrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(cli())


if __name__ == "__main__":
    main()
