"""Exact computations with Lie models of simplicial sets and their
lower-central-series completion towers."""

from .cdgl import (Cdgl, FiniteGradedLie, InvariantViolation, MCElement, NotMaurerCartan,
                   UnsupportedInput, bch, component, differential_check, dgl_homology,
                   exp_ad, gauge_transform, is_degreewise_nilpotent,
                   is_homologically_nilpotent, is_mc, lcs_quotient, lower_central_series,
                   mc_element, perturb, rotation_algebra)
from .freelie import (FreeLieAlgebra, Generator, LieElement, graded_witt_dimension,
                      lyndon_basis, normalize_bracket)
from .lscosimplicial import (cosimplicial_operator, ls_interval, simplex_model,
                             verify_simplex_model)
from .model import (based_component_model, global_model, indecomposables_homology,
                    minimal_model_of_stage)
from .qalgebra import Q, kernel_basis, rref, solve_linear
from .simpset import (SimplicialSetError, load_simplicial_set, normalized_chains,
                      simplicial_homology)
from .tower import (completion_tower, fundamental_group_data, stabilization_report,
                    tower_homotopy)

__version__ = "0.1.0"

__all__ = [
    "Cdgl", "FiniteGradedLie", "FreeLieAlgebra", "Generator", "InvariantViolation",
    "LieElement", "MCElement", "NotMaurerCartan", "Q", "SimplicialSetError",
    "UnsupportedInput", "based_component_model", "bch", "completion_tower", "component",
    "cosimplicial_operator", "dgl_homology", "differential_check", "exp_ad",
    "fundamental_group_data", "gauge_transform", "global_model", "graded_witt_dimension",
    "indecomposables_homology", "is_degreewise_nilpotent", "is_homologically_nilpotent",
    "is_mc", "kernel_basis", "lcs_quotient", "load_simplicial_set", "lower_central_series",
    "ls_interval", "lyndon_basis", "mc_element", "minimal_model_of_stage",
    "normalize_bracket", "normalized_chains", "perturb", "rotation_algebra", "rref",
    "simplex_model", "simplicial_homology", "solve_linear", "stabilization_report",
    "tower_homotopy", "verify_simplex_model",
]
