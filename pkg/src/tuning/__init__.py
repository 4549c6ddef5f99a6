from .criteria import (TuneGrid, DEFAULT_MU2, cv_error_grid, r_hat_curve, criteria_tables, fold_cv_errors,
                       projector_traces, r_hat_value, elbow)
from .joint import TuneResult, stabilize, joint_tune
