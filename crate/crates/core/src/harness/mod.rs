//! Run configuration, scenario orchestration and report emission.

pub mod config;
pub mod emit;
pub mod scenarios;

pub use config::{parse_config, BumpSpec, RunConfig, Scenario};
pub use emit::{emit_report, report_json, run_and_emit, ScenarioResult};
pub use scenarios::{
    run_estimates, run_liouville_t, run_manufactured, run_remark11, run_scenario, run_uniqueness, ScenarioOutcome,
};
