"""Weighted cochain complexes over finite abelian groups at desk scale.

Exact cosystolic and expansion constants, finite covers with isometric
pushforward checks, central-extension cocycle experiments, and a sofic
approximation lab.  All certified numbers are exact rationals; floating
point is confined to the spectral layer.
"""

__version__ = "0.1.0"

from .abelian import FiniteAbelianGroup
from .boolean import AtomMorphism, MeasuredBoolean
from .cochains import (
    Cochain,
    CohomologyClass,
    PACoefficients,
    coboundary,
    cohomology,
    cosystole,
    cosystolic_norm,
    is_coboundary,
    is_cocycle,
    norm,
)
from .complexes import SimplicialComplex, WeightScheme
from .covers import (
    CoveringComplex,
    EdgeLabeling,
    build_cover,
    labeling_from_values,
    lower_bound_report,
    pullback,
    pushforward_theta,
    shapiro_check,
    spanning_tree,
    trivial_labeling,
    vanishing_test,
)
from .expansion import (
    coboundary_expander_check,
    cosystolic_expander_check,
    expansion_constant,
    km_hypotheses_report,
    skeleton_expansion,
    upper_laplacian_spectrum,
)
from .generators import (
    complete_complex,
    cycle_complex,
    flag_complex_subspaces,
    octahedron,
    random_complex,
    torus_7,
)
from .sofic import (
    AlmostHom,
    CentralExtensionSpec,
    DefectCocycle,
    ExtensionApproximation,
    Presentation,
    afree_vanishing_check,
    compare_delta_beta,
    defect_cocycle,
    defect_report,
    induce_quotient,
    stability_match,
)

__all__ = [name for name in dir() if not name.startswith("_")]
