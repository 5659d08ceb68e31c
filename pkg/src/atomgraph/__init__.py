"""Finite exclusive partial Boolean algebras, atom graphs and contextuality witnesses."""

from .catalog import b1, b2, b2_prime, boolean_algebra, from_contexts
from .errors import (
    AtomGraphError,
    CapExceeded,
    DimensionMismatch,
    LepRequired,
    MalformedTable,
    NotAtomSpanned,
    NotRankOne,
    SearchBudgetExceeded,
    SolverFailure,
    UnknownElement,
)
from .graph import (
    AtomGraph,
    CliqueCover,
    NotRealizable,
    Realizable,
    atom_graph,
    graphs_isomorphic,
    maximal_cliques,
    reconstruct,
)
from .pba import (
    Context,
    PartialBooleanAlgebra,
    ValidationReport,
    Violation,
    are_isomorphic,
    atoms,
    closure,
    exclusive,
    exclusivity_witness,
    is_transitive,
    leq,
    maximal_contexts,
    satisfies_lep,
    validate_pba,
)
from .quantum import (
    Projector,
    QuantumSystem,
    density_to_state,
    generate_system,
    orthogonality_graph,
    random_density_matrix,
    scenario_chsh,
    scenario_fig2,
    scenario_kcbs,
)
from .states import (
    AlgebraState,
    GraphState,
    Substate,
    extend_state,
    has_ks_property,
    is_state,
    random_graph_state,
    restrict_state,
    state_feasible,
    zero_one_states,
)
from .witnesses import WeightFunction, WitnessReport, alpha, alpha_star, nc_inequality_report, theta

__version__ = "0.1.0"
