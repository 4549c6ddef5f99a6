from .slicing import SliceAssignment, make_slices, slices_for_fold, assign_folds, fold_rows
from .moments import MomentSet, compute_moments
from .linalg import SymEigen, sym_eigen, inv_sqrt, sqrt_pair, ridge_projector, projector_gap, subspace_distance
from .ridge import (RidgeFit, ridge_sir_fit, edr_scores, ridge_objective, classical_sir, default_d_max,
                    fit_dataset)
