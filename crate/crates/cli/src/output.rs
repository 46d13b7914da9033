use crate::campaigns::Outcome;
use anyhow::{bail, Context, Result};
use nslab::report::CampaignReport;
use std::fs;
use std::path::Path;

/// Writes the report JSON and side files, then re-reads the JSON and checks
/// that it re-serializes to the same bytes.
pub fn write_outcome(o: &Outcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let json = o.report.to_json();
    let path = dir.join(format!("{}.json", o.report.campaign));
    fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
    let back = CampaignReport::from_json(&fs::read_to_string(&path)?)?;
    if back.to_json() != json {
        bail!("report {} does not round-trip", path.display());
    }
    for (name, body) in &o.files {
        fs::write(dir.join(name), body).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}
