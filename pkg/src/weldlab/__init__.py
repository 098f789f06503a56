"""weldlab: numerical conformal welding, Grunsky operators, Cauchy jumps,
and genus-zero sewing of rigged spheres."""

from .errors import (
    AmbiguousRankError,
    InvalidInputError,
    InvalidResultError,
    NonConvergenceError,
    ResolutionError,
    WeldLabError,
)
from .fourier import (
    DiskSeries,
    FourierFunction,
    dirichlet_energy,
    h12_norm,
    project,
    symplectic_pairing,
)
from .circlemaps import (
    CircleHomeo,
    beurling_ahlfors_mu,
    comp_operator_matrix,
    compose,
    invert,
    qs_ratio,
    wp_energy_estimate,
)
from .operators import BlockDecomposition, OperatorMatrix, block_decompose, pairing_matrix
from .welding import (
    CurveSamples,
    PowerSeriesMap,
    WeldingResult,
    exterior_map,
    map_diagnostics,
    quasicircle_samples,
    weld,
    welding_residual,
)
from .cauchy import (
    BoundaryFunction,
    JumpDecomposition,
    cauchy_transform,
    jump_decompose,
    norm_comparison,
)
from .grunsky import (
    DetLineReport,
    fiber_identity_residual,
    graph_subspace_check,
    grunsky_matrix_coeff,
    grunsky_matrix_proj,
    hs_norm,
    multi_grunsky,
    pi_report,
    shale_cocycle_det,
    wp_kahler_potential,
)
from .spheres import (
    ModuliInvariants,
    RiggedSphere,
    SphereEntry,
    apply_mobius,
    cut_caps,
    holomorphy_probe,
    moduli_invariants,
    sew_caps,
    sew_two,
    standard_cap,
)

__version__ = "0.1.0"
