from .config import DEFAULTS, read_config_file, effective_config, sim_spec, tune_grid, fusion_config
from .main import build_parser, main
