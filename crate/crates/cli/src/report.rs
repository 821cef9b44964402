//! JSON documents for learn and verify reports.

use serde::{Deserialize, Serialize};

use qfa_core::learner::{LearnReport, Outcome};
use qfa_core::verify::VerifyReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnReportDoc {
    pub distinct_queries: u64,
    pub raw_queries: u64,
    pub basis_size: usize,
    pub max_constraint_residual: f64,
    pub max_unitarity_defect: f64,
    /// `"Learned"` or `"NotExist"`.
    pub outcome: String,
    pub wall_time: f64,
}

impl From<&LearnReport> for LearnReportDoc {
    fn from(r: &LearnReport) -> Self {
        LearnReportDoc {
            distinct_queries: r.distinct_queries,
            raw_queries: r.raw_queries,
            basis_size: r.basis_size,
            max_constraint_residual: r.max_constraint_residual,
            max_unitarity_defect: r.max_unitarity_defect,
            outcome: match r.outcome {
                Outcome::Learned => "Learned",
                Outcome::NotExist => "NotExist",
            }
            .to_string(),
            wall_time: r.wall_time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReportDoc {
    pub strings_checked: usize,
    pub max_trajectory_deviation: f64,
    pub max_probability_deviation: f64,
    pub worst_string: String,
    pub passed: bool,
}

impl From<&VerifyReport> for VerifyReportDoc {
    fn from(r: &VerifyReport) -> Self {
        VerifyReportDoc {
            strings_checked: r.strings_checked,
            max_trajectory_deviation: r.max_trajectory_deviation,
            max_probability_deviation: r.max_probability_deviation,
            worst_string: r.worst_string.clone(),
            passed: r.passed,
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}
