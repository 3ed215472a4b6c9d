"""Exact-arithmetic toolkit for the tubular algebra C(4,lambda).

Subpackages cover: the algebra as data with its derived Euler form
(``algebra``), lattice arithmetic on K0 (``lattice``), the exceptional set
and unit-vector decomposition (``exceptional``), certified slope searches
(``search`` with ``quadirr``), explicit matrix representations (``reps``),
and a pp-formula calculus (``pp``).  All arithmetic is exact; there is no
floating point anywhere in the package.
"""

from .algebra import (
    AlgebraSpec,
    EulerData,
    PathBasis,
    build_c4,
    derive_path_basis,
    euler_data,
    validate_spec,
)
from .exceptional import ExceptionalSet, coordinate_bound, enumerate_exceptional, unit_decompose
from .lattice import DimVector, K0Lattice, RadicalBasis, Slope, mu, radical_basis
from .quadirr import QuadIrrational, parse_quad_irrational
from .search import (
    GapCertificate,
    TubeParams,
    delta_for,
    gap_vector,
    p_bound,
    quasisimple_bounds,
    strip_pairs_above,
    strip_pairs_below,
    tube_parameters,
)

__all__ = [
    "AlgebraSpec",
    "DimVector",
    "EulerData",
    "ExceptionalSet",
    "GapCertificate",
    "K0Lattice",
    "PathBasis",
    "QuadIrrational",
    "RadicalBasis",
    "Slope",
    "TubeParams",
    "build_c4",
    "coordinate_bound",
    "delta_for",
    "derive_path_basis",
    "enumerate_exceptional",
    "euler_data",
    "gap_vector",
    "mu",
    "p_bound",
    "parse_quad_irrational",
    "quasisimple_bounds",
    "radical_basis",
    "strip_pairs_above",
    "strip_pairs_below",
    "tube_parameters",
    "unit_decompose",
    "validate_spec",
]

__version__ = "0.1.0"
