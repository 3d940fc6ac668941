"""Primal SVM training with smoothed hinge / l1 losses and Nesterov's method."""

from .data import Dataset, GramDataset, augment_bias, build_gram, dataset_from_arrays
from .errors import InputError, SmoothSVMError
from .models import ModelSpec, Objective
from .solver import SolverConfig, TrainedModel, solve, solve_homotopy

__all__ = ["Dataset", "GramDataset", "augment_bias", "build_gram",
           "dataset_from_arrays", "InputError", "SmoothSVMError", "ModelSpec",
           "Objective", "SolverConfig", "TrainedModel", "solve", "solve_homotopy"]
__version__ = "0.1.0"
