//! Three-valued check records and campaign reports.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Identifier of the claim the check traces back to.
    pub anchor: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub reference: Option<f64>,
    pub band: Option<[f64; 2]>,
    pub detail: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl CheckRecord {
    /// Pass iff `measured` lies in `[lo, hi]`.
    pub fn banded(name: &str, anchor: &str, measured: f64, lo: f64, hi: f64) -> Self {
        let ok = measured >= lo && measured <= hi;
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: finite(measured),
            reference: None,
            band: Some([lo, hi]),
            detail: String::new(),
        }
    }

    pub fn boolean(name: &str, anchor: &str, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: None,
            reference: None,
            band: None,
            detail: detail.into(),
        }
    }

    pub fn info(name: &str, anchor: &str, measured: f64, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Info,
            measured: finite(measured),
            reference: None,
            band: None,
            detail: detail.into(),
        }
    }

    pub fn with_reference(mut self, r: f64) -> Self {
        self.reference = finite(r);
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub parameters: BTreeMap<String, String>,
    pub records: Vec<CheckRecord>,
    pub wall_time_s: f64,
}

impl CampaignReport {
    pub fn new(campaign: &str) -> Self {
        CampaignReport { campaign: campaign.into(), parameters: BTreeMap::new(), records: Vec::new(), wall_time_s: 0.0 }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.parameters.insert(k.into(), v.to_string());
        self
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    /// No pass/fail record failed; informational records never count.
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Fixed-column summary, one line per record.
    pub fn summary(&self) -> String {
        let mut out = format!("== {} ({:.2} s)\n", self.campaign, self.wall_time_s);
        for r in &self.records {
            let m = r.measured.map_or("-".to_string(), |v| format!("{v:.6e}"));
            let b = r.band.map_or("-".to_string(), |[lo, hi]| format!("[{lo:.3e}, {hi:.3e}]"));
            out.push_str(&format!("{:<5} {:<44} {:>14} {:>26}  {}\n", r.status.to_string(), r.name, m, b, r.detail));
        }
        out
    }
}
