"""Causal geometry of the linear symplectic group Sp(2n).

Cone classification, Krein spectral analysis, the positively elliptic
region with its Lorentz-Finsler distance and time function, Maslov
lifting along causal paths, and a seeded Monte-Carlo verification
harness.
"""

from ._version import __version__
from .core import (
    CheckResult,
    ConeStatus,
    block_rotation,
    block_rotation_generator,
    cone_membership_tangent,
    cone_status,
    half_dim,
    is_hamiltonian,
    is_symplectic,
    omega_matrix,
    standard_J,
    symplectic_inverse,
)
from .krein import (
    EigenCluster,
    KreinSpectrum,
    Location,
    krein_gram,
    krein_spectrum,
    nu,
)
from .elliptic import (
    EllipticCheck,
    EllipticSplitting,
    elliptic_angles,
    elliptic_splitting,
    is_positively_elliptic,
    log_elliptic,
    minus_inverse,
    mu_elliptic,
    tau,
)
from .causal import (
    ExitReason,
    ExitTimes,
    GeodesicConnection,
    connect,
    dist_formula,
    exit_times,
    finsler_G,
    geodesic,
    geodesic_flow,
    path_length,
)
from .pathlab import (
    CausalPath,
    PhaseTrack,
    geodesic_path,
    mu_along_path,
    random_causal_path,
    random_cone_element,
    random_elliptic,
    random_elliptic_banded,
    random_symplectic,
    random_torus_pair,
    track_phases,
    verify_suite,
)
from . import exceptions

__all__ = [
    "__version__",
    "CheckResult",
    "ConeStatus",
    "block_rotation",
    "block_rotation_generator",
    "cone_membership_tangent",
    "cone_status",
    "half_dim",
    "is_hamiltonian",
    "is_symplectic",
    "omega_matrix",
    "standard_J",
    "symplectic_inverse",
    "EigenCluster",
    "KreinSpectrum",
    "Location",
    "krein_gram",
    "krein_spectrum",
    "nu",
    "EllipticCheck",
    "EllipticSplitting",
    "elliptic_angles",
    "elliptic_splitting",
    "is_positively_elliptic",
    "log_elliptic",
    "minus_inverse",
    "mu_elliptic",
    "tau",
    "ExitReason",
    "ExitTimes",
    "GeodesicConnection",
    "connect",
    "dist_formula",
    "exit_times",
    "finsler_G",
    "geodesic",
    "geodesic_flow",
    "path_length",
    "CausalPath",
    "PhaseTrack",
    "geodesic_path",
    "mu_along_path",
    "random_causal_path",
    "random_cone_element",
    "random_elliptic",
    "random_elliptic_banded",
    "random_symplectic",
    "random_torus_pair",
    "track_phases",
    "verify_suite",
    "exceptions",
]
