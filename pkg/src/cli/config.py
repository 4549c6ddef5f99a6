import copy
import json
import logging

from src.fusion import FusionConfig
from src.simulate import SimSpec
from src.system import InvalidArgument
from src.tuning import DEFAULT_MU2, TuneGrid

logger = logging.getLogger(__name__)

DEFAULTS = {
    "simulate": {
        "model": "M1",
        "n": 100,
        "p": None,
        "length_scale": 0.1,
        "signal_var": 1.0,
        "noise_sd": 0.1,
        "seed": 0,
    },
    "tune": {
        "H": 10,
        "mu2_values": list(DEFAULT_MU2),
        "d0": None,
        "folds": 10,
        "seed": 0,
        "derivative": False,
    },
    "fit": {
        "H": 10,
        "mu2": 1.0,
        "d": 1,
        "P0": 0.05,
        "grid_size": 100,
        "eps_ratio": 1e-3,
        "cv_folds": 10,
        "max_iterations": None,
        "seed": 0,
        "derivative": False,
    },
    "select": {"index": None},
    "project": {},
    "report": {},
}


def read_config_file(path):
    """
    Read a JSON configuration file with one object per subcommand.

    Example::

        {"fit": {"H": 8, "cv_folds": 5}, "simulate": {"n": 150}}
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            content = json.load(f)
    except json.JSONDecodeError as err:
        raise InvalidArgument(f"config: {path} is not valid JSON ({err.msg} at line {err.lineno}).") from None
    if not isinstance(content, dict):
        raise InvalidArgument(f"config: {path} must hold a JSON object.")
    unknown = set(content) - set(DEFAULTS)
    if unknown:
        raise InvalidArgument(f"config: unknown section(s) {sorted(unknown)} in {path}.")
    return content


def effective_config(command, file_config=None, flags=None):
    """
    Merge built-in defaults, a configuration file and explicit flags, in increasing precedence.

    Flags whose value is None were not given and do not override.
    """
    config = copy.deepcopy(DEFAULTS[command])
    section = (file_config or {}).get(command, {})
    unknown = set(section) - set(config)
    if unknown:
        raise InvalidArgument(f"config: unknown key(s) {sorted(unknown)} for {command}.")
    config.update(section)
    config.update({k: v for k, v in (flags or {}).items() if k in config and v is not None})
    logger.debug("%s config: %s", command, config)
    return config


def sim_spec(config):
    return SimSpec(model=config["model"], n=config["n"], p=config["p"], length_scale=config["length_scale"],
                   signal_var=config["signal_var"], noise_sd=config["noise_sd"], seed=config["seed"])


def tune_grid(config):
    return TuneGrid(mu2_values=tuple(config["mu2_values"]), d0=config["d0"], folds=config["folds"],
                    seed=config["seed"])


def fusion_config(config):
    return FusionConfig(P0=config["P0"], grid_size=config["grid_size"], eps_ratio=config["eps_ratio"],
                        cv_folds=config["cv_folds"], max_iterations=config["max_iterations"], seed=config["seed"])
