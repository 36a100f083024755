//! Experiment orchestration: seeded instance sweeps over algorithm, mode,
//! pool and penalty variants, per-layer aggregation, and CSV emission.

pub mod config;
pub mod io;
pub mod spectrum;
pub mod stats;
pub mod sweep;

pub use config::ExperimentConfig;
pub use spectrum::{run_spectrum_study, spectrum_study_from_records, LayerSpectrum, SpectrumStudy};
pub use sweep::{
    aggregate_rows, prepare_instance, read_run_dir, run_delta_comparison, run_sweep,
    scatter_correlations, scatter_max_entropy_vs_final_error, scatter_rows, AggregateRow,
    DeltaOutcome, DeltaRow, ScatterRow, SweepOutcome,
};
