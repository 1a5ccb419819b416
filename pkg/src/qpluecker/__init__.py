"""Quiver Plücker relations with an exhaustive finite-field oracle."""

from .combinatorics import IndexSubset, epsilon, k_subsets, subset_rank, subset_unrank
from .model import (
    Arrow,
    Path,
    Quiver,
    Representation,
    StructuralError,
    enumerate_paths,
    path_matrix,
    validate_representation,
)
from .oracle import (
    CountingPolynomial,
    FitFailure,
    PointSet,
    SubspaceRREF,
    compare_sets,
    enumerate_subspaces,
    euler_characteristic,
    fit_counting_polynomial,
    gaussian_binomial,
    is_subrepresentation,
    pluecker_of_subspace,
    subrep_points,
    variety_points,
)
from .pluecker import PlueckerVector, pluecker_coordinates
from .polynomials import RelationPolynomial, canonical_string, evaluate, parse_polynomial, proportional_eq
from .quiverfile import QuiverFile, QuiverFileError, parse_quiver_file, print_quiver_file
from .relations import (
    ChartError,
    RelationSet,
    all_relations,
    chart_basis,
    classical_relations,
    dual_chart_coefficients,
    higher_order_relation,
    membership_forms,
    quiver_relation,
    schubert_dehomogenize,
)
from .scalars import DomainError, FpElement, Scalar

__version__ = "0.1.0"
