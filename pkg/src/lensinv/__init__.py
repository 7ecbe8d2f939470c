"""Geometric invariants of lens spaces from Euclidean metric data on a bipyramid."""

from .defect import (
    MetricData,
    PreComplex,
    Tetrahedron,
    defect_angles,
    defect_jacobian_analytic,
    defect_jacobian_fd,
)
from .errors import (
    DegenerateRealization,
    DegenerateTetrahedron,
    FlatConfiguration,
    InvalidLensParams,
    InvalidMetric,
    SingularJacobian,
)
from .invariant import (
    InvariantReport,
    compute_report,
    conjecture_value,
    f_matrix,
    f_submatrix_C,
    homeomorphism_consistency,
    invariant_const,
    numerator_coefficient,
)
from .lens import (
    LensParams,
    RealizationParams,
    build_lens_complex,
    edge_partition,
    realize,
    reference_params,
    sample_params,
    signed_volumes_closed_form,
)
from .tetgeom import (
    TetrahedronLengths,
    dihedral_angle,
    dihedral_gradient,
    oriented_volume,
    skew_length_response,
    unsigned_volume,
)

__version__ = "0.1.0"
