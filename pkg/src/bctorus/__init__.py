"""Centreless Lie tori of type BC_r built from quantum tori with involution."""

from .bitquad import (
    BilForm,
    BitMatrix,
    QuadForm,
    compatible_bilinear,
    find_isometry,
    isometry_classes,
    iso_set,
    orthogonal_group,
    pointed_orbits,
    radical,
)
from .eala import Eala, adapt_basis, export_structure_constants, import_structure_constants
from .hermitian import HermitianData, build_data, check_anisotropic, validate
from .lietorus import (
    Window,
    biisomorphic,
    centre_window_check,
    centroid_window_oracle,
    check_LT_axioms,
    check_support_lemmas,
    identity_suite,
    invariants,
)
from .report import Check, Report
from .torus import TorusElem, TorusSpec
from .unitary import MatElem, U_op, bracket, e_mat, star, trace, trace_form, u_mat

__all__ = [
    "BilForm", "BitMatrix", "QuadForm", "compatible_bilinear", "find_isometry",
    "isometry_classes", "iso_set", "orthogonal_group", "pointed_orbits", "radical",
    "Eala", "adapt_basis", "export_structure_constants", "import_structure_constants",
    "HermitianData", "build_data", "check_anisotropic", "validate",
    "Window", "biisomorphic", "centre_window_check", "centroid_window_oracle",
    "check_LT_axioms", "check_support_lemmas", "identity_suite", "invariants",
    "Check", "Report", "TorusElem", "TorusSpec",
    "MatElem", "U_op", "bracket", "e_mat", "star", "trace", "trace_form", "u_mat",
]
