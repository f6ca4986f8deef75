"""Workbench for the gl(2) Gaudin Bethe algebra and the scheme of
second-order operators with prescribed exponents and polynomial kernels.

Everything is built twice over: exact rational matrices for the algebraic
identities, and a float lane for joint eigen-decomposition, with the two
sides matched point by point.
"""

from .numcore import (
    DomainError,
    InconsistentSystemError,
    SingularMatrixError,
    Tolerances,
    UniPoly,
    kernel_basis,
    solve_linear,
    wronskian,
)
from .gl2rep import (
    NonSeparatingError,
    ProblemInstance,
    ShQuotient,
    WeightVector,
    generator_matrix,
    sh_quotient,
    shapovalov_gram,
    singular_basis,
    weight_space_basis,
    weight_space_dim,
)
from .gaudin import (
    GaudinSystem,
    annihilator_ideal,
    bethe_algebra_basis,
    build_gaudin,
    induced_map_kernel,
    polynomial_valued_kernel,
)
from .opscheme import (
    DhOperator,
    MalformedPairError,
    NotAdmissibleError,
    SchemePoint,
    SeparatingConditionError,
    a_of_h,
    apply_Dh,
    exponents_at,
    h_of_a,
    operator_from_kernel_pair,
    ptilde_solve,
    q_coefficients,
    residual_system,
    schubert_dimension,
    wronskian_check,
)
from .spectral import (
    ClusterAmbiguityError,
    NonSimplePointError,
    SingularJacobianError,
    SpectrumReport,
    diagonalizability_check,
    grothendieck_weights,
    joint_spectrum,
    match_spectrum_to_scheme,
)
from .sov import (
    BetheVector,
    DegenerateCoordinatesError,
    VerificationError,
    bethe_vector,
    change_of_variables,
    separated_form_value,
    weight_function,
)

__version__ = "0.1.0"
