use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

use super::metrics::SlotRecord;
use super::run::RunOutput;

pub const UE_CSV_HEADER: &str = "slot,cell,ue,sinr_db,rate_bps_hz,power_idx,combiner_idx";
pub const BS_CSV_HEADER: &str = "slot,cell,reward,penalty_sum,epsilon,loss,irs_idx";

pub const UE_CSV: &str = "ue_slots.csv";
pub const BS_CSV: &str = "bs_slots.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const TOPOLOGY_JSON: &str = "topology.json";
pub const CODEBOOKS_JSON: &str = "codebooks.json";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_ue_csv<W: Write>(out: &mut W, records: &[SlotRecord]) -> Result<()> {
    writeln!(out, "{UE_CSV_HEADER}")?;
    for r in records {
        for u in &r.ues {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.slot, u.cell, u.ue, u.sinr_db, u.rate, u.power_idx, u.combiner_idx
            )?;
        }
    }
    Ok(())
}

pub fn write_bs_csv<W: Write>(out: &mut W, records: &[SlotRecord]) -> Result<()> {
    writeln!(out, "{BS_CSV_HEADER}")?;
    for r in records {
        for b in &r.bss {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.slot,
                b.cell,
                b.reward,
                b.penalty_sum,
                opt(b.epsilon),
                opt(b.loss),
                opt(b.irs_idx)
            )?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes the CSVs, the summary and any requested dumps into `dir`;
/// returns the paths written.
pub fn write_outputs(dir: &Path, run: &RunOutput, dump_topology: bool, dump_codebooks: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join(UE_CSV);
    write_file(&path, |w| write_ue_csv(w, &run.records))?;
    written.push(path);
    let path = dir.join(BS_CSV);
    write_file(&path, |w| write_bs_csv(w, &run.records))?;
    written.push(path);
    let path = dir.join(SUMMARY_JSON);
    write_file(&path, |w| {
        serde_json::to_writer_pretty(&mut *w, &run.summary)?;
        writeln!(w)?;
        Ok(())
    })?;
    written.push(path);
    if dump_topology {
        let path = dir.join(TOPOLOGY_JSON);
        write_file(&path, |w| Ok(serde_json::to_writer_pretty(w, &run.topology)?))?;
        written.push(path);
    }
    if dump_codebooks {
        let path = dir.join(CODEBOOKS_JSON);
        write_file(&path, |w| Ok(serde_json::to_writer_pretty(w, &run.space)?))?;
        written.push(path);
    }
    Ok(written)
}
