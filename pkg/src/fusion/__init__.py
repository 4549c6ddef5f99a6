from .merge import merge_groups, merge_step
from .validation import cv_fold_errors, cv_model_error, fold_fit
from .procedure import FusionConfig, ModelRecord, ModelCollection, run_fusion, standard_sparse
