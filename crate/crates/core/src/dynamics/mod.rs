//! One-sided best-response dynamics and their relaxations.

pub mod run;
pub mod schedule;
pub mod step;

pub use run::{
    detect_cycle, detect_cycle_quantized, run, CycleDetection, Record, RunMetadata, RunOptions, Trajectory, Verdict,
};
pub use schedule::{validate_schedule_regular, Schedule};
pub use step::{step, validate_update, DynamicSpec, Overshoot, Sign, Stepper, UpdateRule};
