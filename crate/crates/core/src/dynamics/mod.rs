//! Quench dynamics and simulated measurement.

pub mod ensemble;
pub mod observables;
pub mod propagate;
pub mod sampling;

pub use ensemble::{
    ensemble_distribution, exact_window_distribution, representative, run_sector_protocol, FragmentSamples,
    Postselection, ProtocolOutput, TemporalEnsemble,
};
pub use observables::{
    average_projections, microstate_projections, site_populations, weight_on, z_autocorrelator, Averaging,
    TimeWindow,
};
pub use propagate::{
    distance, evolve, norm, probabilities, EvolutionPlan, InitialState, KrylovPropagator, Method, Propagator,
    SpectralPropagator, DEFAULT_AUTO_DENSE_MAX, DEFAULT_DENSE_CAP,
};
pub use sampling::{
    derive_seed, postselect, sample_snapshots, PostselectStats, SamplingConfig, Snapshot, SnapshotRecord,
    SpamModel,
};
