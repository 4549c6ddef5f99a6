from .problem import SparseProblem, projection_target, interval_design, build_problem
from .lasso import (LassoSettings, LassoPath, coordinate_descent, lasso_path, solve_at, select_gcv,
                    threshold_solutions, kkt_residual, gcv_score, penalized_objective)
from .directions import SparseDirections, sparse_directions, active_intervals
