"""Entanglement analysis of finite-dimensional bipartite quantum states."""

from .errors import EntangleKitError
from .families import (
    bell,
    max_entangled_from_unitary,
    maximally_entangled,
    pseudo_pure,
    rho_m,
    rho_xtheta,
    sigma_b,
    sigma_h,
    tiles_upb_state,
    tiles_upb_vectors,
    werner,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    as_density,
    density_from_matrix,
    partial_trace,
    partial_transpose,
    pure_from_amplitudes,
    reshuffle,
    schmidt,
)

__version__ = "0.1.0"
