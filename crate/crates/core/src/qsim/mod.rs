//! Truncated Fock-space engine for the cross-Kerr interaction and the
//! homodyne-conditioned qubit protocol.

mod entanglement;
mod fock;
mod homodyne;
mod protocol;

pub use entanglement::{
    binary_entropy, concurrence, entropy_of_entanglement, schmidt_probabilities, EntanglementReport,
};
pub use fock::{
    cat_target, coherent_state, cross_kerr, default_dim, ecs_norm_sq, evolve_coherent_pair, fidelity, CatTarget,
    FockVector, TwoModeState, DEFAULT_TAIL_TOL,
};
pub use homodyne::{
    classification_threshold, hermite_functions, homodyne_condition, marginal_density, phase_correction,
    qubit_probe_interact, HomodyneSample, Outcome, QubitPair, QubitState, ThreePartyState,
};
pub use protocol::{run_protocol, sampling_grid, OutcomeSummary, ProtocolRun, ProtocolSummary, GRID_POINTS};
