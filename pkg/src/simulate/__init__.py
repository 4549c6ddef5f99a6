from .kernels import KernelFactor, matern32, quadratic_mean, covariance_matrix, gp_sample
from .models import (INTERVALS, DEFAULT_P, SimSpec, TrueModel, true_directions, projections, functional_response,
                     response_with_redraw, simulate_dataset)
