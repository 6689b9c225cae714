//! Bifurcation and slow-fast analysis of directed FitzHugh-Nagumo neuron
//! networks: closed-form equilibria and Hopf structure for single neurons,
//! driven pairs, and directed trees; the desingularized slow flow with its
//! folded singularities and FSN II boundary; time integration; and
//! trajectory classifiers for spikes, mixed-mode oscillations, canard
//! proximity, and phase locking.

pub mod analysis;
pub mod contour;
pub mod cubic;
pub mod desing;
pub mod model;
pub mod pair;
pub mod sim;
pub mod tree;

pub use analysis::{
    canard_proximity, classify_behavior, detect_spikes, phase_lock_report, prominent_peaks,
    AnalysisError, BehaviorConfig, BehaviorLabel, BehaviorTag, CanardConfig, CanardReport,
    LockConfig, PhaseLockReport, SpikeConfig, SpikeTrain,
};
pub use cubic::{depressed_cubic_roots, CubicRoots};
pub use desing::{
    codim2_gamma, desing_jacobian, desing_rhs, fold_family_inputs, folded_cubic_coeffs,
    folded_singularities, fsn2_istar, on_fold_family, ordinary_singularity, phase_field_sample,
    slaved_z, transcritical_verify, DesingError, DesingPoint, FieldSample, FoldBranch,
    FoldedCubicCoeffs, Fsn2, Singularity, SingularityClass, SingularityKind, TranscriticalReport,
    Window,
};
pub use model::{
    classify_single_regime, cubic_coefficient_single, single_eigenvalues, single_equilibrium,
    single_hopf_points, single_vector_field, ModelError, ModelParams, NeuronState, Regime,
    StabilityClass,
};
pub use pair::{
    alpha_b, boundary_curves, gamma_star, hopf_curves_b, hopf_hopf_points, pair_eigenvalues,
    pair_equilibrium, pair_vector_field, phase_lock_threshold, region_classify, region_code,
    region_map, CurvePoint, CurveSet, DrivePoint, LinSpace, Marker, NamedCurve, PairEquilibrium,
    PairError, Region,
};
pub use sim::{default_initial_state, integrate, vector_field, Method, SimError, Trajectory};
pub use tree::{
    node_hopf_inputs, tree_eigenvalues, tree_equilibrium, tree_jacobian, ChainEquilibrium,
    EdgeSpec, NodeSpec, TreeError, TreeNetwork,
};
