"""Exact Lie-Poisson computations and checkable no-go certificates."""

from .certificate import Certificate, Kind
from .chain import (
    bracket_decomposition,
    derived_ideal_certificate,
    gram_positivity_certificate,
    nogo_report,
    trivial_prequantization,
    verify_trivial_preq,
)
from .checker import verify, verify_file
from .liealg import LieAlgebra, builtin, new_lie_algebra
from .orbit import OrbitPoint, isotropy_decomposition, is_regular, minimality_witness, orbit_dimension
from .poisson import (
    Polynomial,
    PolySpace,
    from_text,
    gram,
    laplacian,
    laplacian_analysis,
    lie_poisson_bracket,
    mean,
    poly_space,
    reduce,
    sphere_ideal,
)
from .probe import feasibility_probe

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Kind", "LieAlgebra", "OrbitPoint", "Polynomial", "PolySpace",
    "bracket_decomposition", "builtin", "derived_ideal_certificate", "feasibility_probe", "from_text",
    "gram", "gram_positivity_certificate", "is_regular", "isotropy_decomposition", "laplacian",
    "laplacian_analysis", "lie_poisson_bracket", "mean", "minimality_witness", "new_lie_algebra",
    "nogo_report", "orbit_dimension", "poly_space", "reduce", "sphere_ideal", "trivial_prequantization",
    "verify", "verify_file", "verify_trivial_preq",
]
