"""Metric multidimensional scaling by SMACOF, its PCA-rotated variant, and
convergence diagnostics built on the Jacobian of the iteration map."""
from .engine import (
    IterationTrace,
    SolverConfig,
    SolverResult,
    StressDecomposition,
    guttman_transform,
    normalize,
    pca_rotate,
    random_init,
    run,
    stress,
    torgerson_init,
)
from .exceptions import (
    ChecksumError,
    DataError,
    DisconnectedWeightsError,
    EigenSolverError,
    FixedPointError,
    MSmacofError,
    NearTiedSingularValuesWarning,
    NotDifferentiableError,
    ParseError,
)
from .io import (
    load_dataset,
    parse_lower_triangle,
    similarity_to_dissimilarity,
    write_lower_triangle,
)
from .jacobian import JacobianMatrix, d_gamma, d_pi, d_pi_gamma, fd_jacobian
from .kernels import BACKEND
from .linalg import (
    DissimilarityData,
    LaplacianPair,
    build_b,
    build_laplacian_pair,
    distance_matrix,
    general_real_eigenvalues,
    svd_thin,
    sym_eigen,
)
from .spectrum import (
    GlobalMinCertificate,
    SpectrumReport,
    analyze_jacobian,
    empirical_rates,
    vplus_b_spectrum,
)

__version__ = "0.1.0"
