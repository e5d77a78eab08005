"""Dense coding capacities of multipartite states and checks of their exclusion and monogamy relations."""

from .capacity import (
    CapacityResult,
    Ensemble,
    cyclic_groups,
    dc_capacity,
    dc_quantum_part,
    holevo_chi,
    holevo_oracle,
    weyl_encoding_ensemble,
)
from .correlations import (
    DiscordResult,
    EofResult,
    UnsupportedDimensionError,
    concurrence,
    discord,
    eof_two_qubit,
    koashi_winter_residual,
)
from .entropy import conditional_entropy, entropy, mutual_information, q_functional, ssa_slack
from .linalg import DimensionError, HermiticityError, hermitian_eig, kron, partial_trace, permute_systems
from .states import (
    MultipartiteState,
    RandomSpec,
    StateError,
    depolarize_party,
    load_state,
    named_state,
    sample,
)
from .theorems import CHECKS, THEOREM_IDS, TheoremVerdict

__version__ = "0.1.0"
