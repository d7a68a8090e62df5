//! Scenario orchestration: configuration, the slot loop, baseline schemes,
//! metrics and output files.

mod baseline;
mod config;
mod metrics;
mod output;
mod run;
mod scenario;

pub use baseline::{apply_mrc, baseline_policy, mrc_indices};
pub use config::{ChannelConfig, CodebookConfig, MdpConfig, OutputConfig, SimConfig};
pub use metrics::{mean_rate_series, moving_average, BsRecord, SlotRecord, Summary, UeRecord};
pub use output::{
    write_bs_csv, write_outputs, write_ue_csv, BS_CSV, BS_CSV_HEADER, CODEBOOKS_JSON, SUMMARY_JSON, TOPOLOGY_JSON,
    UE_CSV, UE_CSV_HEADER,
};
pub use run::{run_scenario, RunOutput, Simulation};
pub use scenario::Scenario;
