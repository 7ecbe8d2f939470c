"""Exception hierarchy shared by the geometry, complex and lens modules."""


class LensInvariantError(Exception):
    """Base class for every error raised by :mod:`lensinv`."""


class DegenerateTetrahedron(LensInvariantError, ValueError):
    """Six lengths do not span a nondegenerate Euclidean tetrahedron."""


class InvalidMetric(LensInvariantError, ValueError):
    """Metric data does not fit the complex it is attached to."""


class FlatConfiguration(LensInvariantError, ValueError):
    pass


class InvalidLensParams(LensInvariantError, ValueError):
    pass


class DegenerateRealization(LensInvariantError, ValueError):
    """Some tetrahedron of a lens realization has (numerically) zero volume."""


class SingularJacobian(LensInvariantError, ValueError):
    """The length-parameter Jacobian is singular at the requested parameters."""
