"""Lie-Poisson mechanics from deformations of Lie algebras."""
from .algebra import (StructureTensor, bracket, coadjoint_matrix, derived_dim, is_fully_antisymmetric,
                      jacobi_residual, killing_form, levi_civita)
from .bianchi import BianchiType, bianchi_algebra, casimir_of, reversal_transforms, singular_set
from .deformation import ClassLabel, DeformationMatrix, classify, deform, recover_M, validate_deformation
from .lie_poisson import (LiePoissonSystem, bracket_eval, energy_casimir, euler_top, integrate, poisson_matrix,
                          prs_system, rank_profile, vector_field)
from .spectral import (SpectrumReport, class_a_singular_hamiltonian_form, classify_equilibrium, linearize_regular,
                       linearize_singular, spectrum, verify_linear_invariants)

__all__ = [
    "StructureTensor", "bracket", "coadjoint_matrix", "derived_dim", "is_fully_antisymmetric",
    "jacobi_residual", "killing_form", "levi_civita",
    "BianchiType", "bianchi_algebra", "casimir_of", "reversal_transforms", "singular_set",
    "ClassLabel", "DeformationMatrix", "classify", "deform", "recover_M", "validate_deformation",
    "LiePoissonSystem", "bracket_eval", "energy_casimir", "euler_top", "integrate", "poisson_matrix",
    "prs_system", "rank_profile", "vector_field",
    "SpectrumReport", "class_a_singular_hamiltonian_form", "classify_equilibrium", "linearize_regular",
    "linearize_singular", "spectrum", "verify_linear_invariants",
]
__version__ = "0.1.0"
