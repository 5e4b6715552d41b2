//! Material loading, seeded perturbation experiments, and table output.

pub mod emit;
pub mod experiment;
pub mod format;

pub use emit::{emit_csv, emit_markdown};
pub use experiment::{gen_perturbation, run_experiment, ExperimentConfig, Perturbation, ResultRow};
pub use format::{load_material, load_material_dir, parse_tensor, write_tensor, MaterialRecord};
