"""Exact theta-series invariants of positive definite quadratic forms."""
from .constructions import construct, construct_Ap, e8, eisenstein, gaussian, root_A, root_D
from .harmonic import TangentBasis, harmonic_dim, killing_pair, tangent_basis
from .invariants import (
    compare_invariants,
    direct_sum,
    dtheta,
    theta11_direct,
    theta11_direct_sum,
    theta11_harmonic,
    theta_series,
    wronskian,
)
from .lattice import (
    GramMatrix,
    LatticeVector,
    SymMatrix,
    cholesky_float,
    enumerate_vectors,
    spectrum,
    transform,
    validate,
)
from .qseries import QSeries
from .rank2 import classify, det_dtheta_rank2, gram_from_spectrum, minimal_vector_test, reduce

__version__ = "0.1.0"
