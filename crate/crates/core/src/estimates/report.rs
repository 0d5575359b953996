use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioMember {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Per-member LHS/RHS ratios of one inequality over a test family.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RatioReport {
    pub inequality: String,
    pub family: String,
    pub members: Vec<RatioMember>,
    pub sup_ratio: f64,
    /// Labels of members dropped because their RHS vanished.
    pub skipped: Vec<String>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl RatioReport {
    pub fn new(inequality: impl Into<String>, family: impl Into<String>) -> Self {
        Self {
            inequality: inequality.into(),
            family: family.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, label: impl Into<String>, lhs: f64, rhs: f64) -> Result<()> {
        let label = label.into();
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::NonFinite(format!(
                "member {label}: lhs = {lhs}, rhs = {rhs}"
            )));
        }
        if rhs == 0.0 {
            self.skipped.push(label);
            return Ok(());
        }
        let ratio = lhs / rhs;
        self.sup_ratio = self.sup_ratio.max(ratio);
        self.members.push(RatioMember {
            label,
            lhs,
            rhs,
            ratio,
        });
        Ok(())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.metadata.insert(key.to_string(), v);
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.ratio).collect()
    }

    pub fn min_ratio(&self) -> f64 {
        self.members
            .iter()
            .map(|m| m.ratio)
            .fold(f64::INFINITY, f64::min)
    }

    /// `(max - min) / mean` of the member ratios.
    pub fn spread(&self) -> f64 {
        if self.members.is_empty() {
            return 0.0;
        }
        let mean = self.members.iter().map(|m| m.ratio).sum::<f64>() / self.members.len() as f64;
        (self.sup_ratio - self.min_ratio()) / mean
    }

    /// Concatenates members; the supremum is the larger of the two.
    pub fn merge(&mut self, other: RatioReport) {
        self.sup_ratio = self.sup_ratio.max(other.sup_ratio);
        self.members.extend(other.members);
        self.skipped.extend(other.skipped);
        for (k, v) in other.metadata {
            self.metadata.entry(k).or_insert(v);
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["inequality", "family", "label", "lhs", "rhs", "ratio"])?;
        for m in &self.members {
            out.write_record([
                self.inequality.as_str(),
                self.family.as_str(),
                m.label.as_str(),
                &format!("{:e}", m.lhs),
                &format!("{:e}", m.rhs),
                &format!("{:e}", m.ratio),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
