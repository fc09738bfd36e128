"""Numerical toolkit for the global de Finetti representation of symmetric states."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ArgumentError,
    DefinettiError,
    DimensionLimitError,
    EnumerationLimitError,
    PreconditionError,
    ShapeError,
    SingularScalingError,
    SymmetryError,
    UnitarityError,
)
from .config import RunConfig  # noqa: E402
from .linalg import (  # noqa: E402
    DensityOperator,
    Projector,
    hermitian_eig,
    partial_trace,
    projector_from_span,
    tensor,
    trace_norm,
)
from .permutations import (  # noqa: E402
    Permutation,
    cycle_count,
    enumerate_symmetric_group,
    permutation_unitary,
    sign,
)
from .symmetric import (  # noqa: E402
    enumerate_compositions,
    is_permutation_invariant,
    is_permutation_invariant_factor,
    purification_from_factor,
    sym_basis_vector,
    sym_dim,
    sym_projector,
    symmetric_purification,
)
from .iid import IidProjector, Prototype, iid_projector, is_iid_vector, rotate_iid_projector  # noqa: E402
from .twirl import (  # noqa: E402
    QuadratureScheme,
    build_quadrature,
    gamma_operator,
    haar_average_pure_power,
    twirl,
)
from .theorem import (  # noqa: E402
    DecompositionReport,
    TheoremParams,
    conditional_state,
    decomposition_defect,
    error_bound,
    gamma_bound_check,
    gamma_bruteforce,
    gamma_exact,
    gentle_lemma_check,
    main_text_bound,
    truncated_state,
    verify_theorem,
)
from .optim import SearchResult, multistart_minimize  # noqa: E402
from .catalog import (  # noqa: E402
    CATALOG_IDS,
    CatalogEntry,
    ExampleReport,
    build,
    max_iid_overlap,
    min_iid_mixture_distance,
    reduced_claim_check,
    verify_example,
)
from .entropy import (  # noqa: E402
    ExtensiveQuantitySpec,
    QuantumChannel,
    apply_channel,
    apply_channel_power,
    entropy_spec,
    extensivity_trend,
    min_output_entropy,
    proposition_check,
    von_neumann_entropy,
)
