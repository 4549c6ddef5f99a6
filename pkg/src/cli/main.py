"""
Command line front end: ``simulate``, ``tune``, ``fit``, ``select``, ``project`` and ``report``.

Exit codes: 0 on success, 1 on a computation or file failure, 2 on a usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from src.cli.config import (effective_config, fusion_config, read_config_file, sim_spec, tune_grid)
from src.data import (CollectionFile, config_hash, first_derivative, load_collection, load_csv, load_model, load_tune,
                      save_collection, save_csv, save_model, save_table, save_tune)
from src.fusion import run_fusion
from src.simulate import simulate_dataset
from src.sir import edr_scores, fit_dataset
from src.system import InvalidData, SisirError
from src.tuning import joint_tune

logger = logging.getLogger(__name__)

REQUIRED = {
    "simulate": ("out",),
    "tune": ("data", "out"),
    "fit": ("data", "out"),
    "select": ("collection", "out"),
    "project": ("model", "data", "out"),
    "report": ("model",),
}


def _mu2_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with one object of settings per subcommand")
    common.add_argument("--show-config", action="store_true", help="print the effective settings as JSON and exit")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(prog="sisir", description="Interval-sparse ridge sliced inverse regression.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="write a simulated M1/M2 dataset")
    p.add_argument("--model", choices=("m1", "m2", "M1", "M2"))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--length-scale", dest="length_scale", type=float)
    p.add_argument("--signal-var", dest="signal_var", type=float)
    p.add_argument("--noise-sd", dest="noise_sd", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--truth", help="also write the generating directions as CSV")

    p = sub.add_parser("tune", parents=[common], help="choose mu2 and d jointly")
    p.add_argument("--data")
    p.add_argument("--h", dest="H", type=int)
    p.add_argument("--mu2-grid", dest="mu2_values", type=_mu2_list)
    p.add_argument("--d0", type=int)
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--derivative", action="store_const", const=True)
    p.add_argument("--out")

    p = sub.add_parser("fit", parents=[common], help="run interval fusion")
    p.add_argument("--data")
    p.add_argument("--h", dest="H", type=int)
    p.add_argument("--mu2", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--tune", help="take mu2 and d from a tune output file")
    p.add_argument("--p0", dest="P0", type=float)
    p.add_argument("--grid-size", dest="grid_size", type=int)
    p.add_argument("--eps-ratio", dest="eps_ratio", type=float)
    p.add_argument("--cv-folds", dest="cv_folds", type=int)
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--derivative", action="store_const", const=True)
    p.add_argument("--out")

    p = sub.add_parser("select", parents=[common], help="extract one model of a fusion run")
    p.add_argument("--collection")
    p.add_argument("--index", type=int, help="record index; the CV-selected one by default")
    p.add_argument("--out")

    p = sub.add_parser("project", parents=[common], help="EDR scores of a dataset")
    p.add_argument("--model")
    p.add_argument("--data")
    p.add_argument("--out")

    p = sub.add_parser("report", parents=[common], help="print the interval table of a model")
    p.add_argument("--model")
    p.add_argument("--out", help="also write the interval table as CSV")
    return parser


def _stem(path):
    path = Path(path)
    return path.with_name(path.stem)


def _read_dataset(path, derivative):
    data = load_csv(path)
    return first_derivative(data) if derivative else data


def cmd_simulate(args, config):
    spec = sim_spec(config)
    data, truth = simulate_dataset(spec)
    save_csv(data, args.out)
    if args.truth:
        columns = {"t": data.grid}
        columns.update({f"a{j}": truth.directions[:, j - 1] for j in range(1, truth.d + 1)})
        save_table(pd.DataFrame(columns), args.truth)
    print(f"wrote {data.n} curves on {data.p} grid points to {args.out}")


def cmd_tune(args, config):
    data = _read_dataset(args.data, config["derivative"])
    result = joint_tune(data.X, data.y, config["H"], tune_grid(config))
    provenance = {"seed": config["seed"], "config_hash": config_hash(config), "derivative": config["derivative"]}
    save_tune(result, args.out, provenance)
    stem = _stem(args.out)
    save_table(result.cv_err_frame(), f"{stem}_cv_err.csv")
    save_table(result.r_hat_frame(), f"{stem}_r_hat.csv")
    print(result.table())
    print(f"mu2* = {result.mu2_star:g}")
    print(f"d* = {result.d_star}")


def cmd_fit(args, config):
    if args.tune:
        mu2, d = load_tune(args.tune)
        if args.mu2 is None:
            config["mu2"] = mu2
        if args.d is None:
            config["d"] = d
    data = _read_dataset(args.data, config["derivative"])
    fit, slices = fit_dataset(data.X, data.y, config["H"], config["mu2"], config["d"])
    collection = run_fusion(data.X, data.y, fit, fusion_config(config), grid=data.grid, slices=slices)
    provenance = {"seed": config["seed"], "config_hash": config_hash(config), "derivative": config["derivative"]}
    save_collection(CollectionFile.from_collection(collection, data.grid, provenance), args.out)
    save_table(collection.trace_frame(), f"{_stem(args.out)}_trace.csv")
    print(collection.table())


def cmd_select(args, config):
    model = load_collection(args.collection).select(config["index"])
    save_model(model, args.out)
    print(f"selected iteration {model.provenance['iteration']} with {model.partition.D} interval(s), "
          f"{int(np.count_nonzero(model.selected))} selected")


def cmd_project(args, config):
    model = load_model(args.model)
    data = _read_dataset(args.data, model.provenance.get("derivative", False))
    if data.p != model.grid.size or not np.allclose(data.grid, model.grid):
        raise InvalidData(f"project: {args.data} is not on the grid of {args.model}.")
    scores = edr_scores(data.X, model.A_sparse)
    columns = {"y": data.y}
    columns.update({f"e{j}": scores[:, j - 1] for j in range(1, scores.shape[1] + 1)})
    save_table(pd.DataFrame(columns), args.out)
    print(f"wrote {scores.shape[1]} score column(s) for {data.n} curves to {args.out}")


def cmd_report(args, config):
    model = load_model(args.model)
    print(model.table())
    print(f"selected intervals: {int(np.count_nonzero(model.selected))}")
    if args.out:
        save_table(model.interval_frame(), args.out)


COMMANDS = {
    "simulate": cmd_simulate,
    "tune": cmd_tune,
    "fit": cmd_fit,
    "select": cmd_select,
    "project": cmd_project,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        file_config = read_config_file(args.config) if args.config else None
        config = effective_config(args.command, file_config, vars(args))
        if args.show_config:
            print(json.dumps(config, sort_keys=True, indent=2))
            return 0
        missing = [f"--{name}" for name in REQUIRED[args.command] if getattr(args, name) is None]
        if missing:
            try:
                parser.error(f"{args.command}: missing required option(s) {', '.join(missing)}")
            except SystemExit as exc:
                return exc.code
        COMMANDS[args.command](args, config)
    except SisirError as err:
        print(f'error category={err.category} message={json.dumps(str(err))}', file=sys.stderr)
        return 1
    except OSError as err:
        print(f'error category=io-error message={json.dumps(str(err))}', file=sys.stderr)
        return 1
    return 0
