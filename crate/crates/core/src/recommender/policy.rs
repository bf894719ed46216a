use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How relevance is aggregated over knowledge-base applications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Weakest α-scaled relevance.
    Aggressive,
    /// Strongest α-scaled relevance.
    Conservative,
    /// Mean α-scaled relevance.
    Probable,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Aggressive, Policy::Conservative, Policy::Probable];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Aggressive => "aggressive",
            Policy::Conservative => "conservative",
            Policy::Probable => "probable",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str() == lower)
            .ok_or_else(|| {
                format!("unknown policy {s:?}; expected aggressive, conservative or probable")
            })
    }
}

/// Row `i` of the relevance matrix scaled by `alphas[i]`.
pub fn norsim(alphas: &[f64], pf: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    if alphas.len() != pf.len() {
        return Err(Error::Dimension {
            expected: pf.len(),
            actual: alphas.len(),
        });
    }
    Ok(alphas
        .iter()
        .zip(pf)
        .map(|(a, row)| row.iter().map(|d| a * d).collect())
        .collect())
}

pub fn apply_policy(column: &[f64], policy: Policy) -> Result<f64> {
    if column.is_empty() {
        return Err(Error::EmptyKnowledgeBase);
    }
    Ok(match policy {
        Policy::Aggressive => column.iter().copied().fold(f64::INFINITY, f64::min),
        Policy::Conservative => column.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Policy::Probable => column.iter().sum::<f64>() / column.len() as f64,
    })
}

/// Rows that determined `relevance`: the rows attaining it under min/max,
/// every row with a positive contribution under the mean.
pub fn bind_set(column: &[f64], policy: Policy, relevance: f64) -> Vec<usize> {
    column
        .iter()
        .enumerate()
        .filter(|(_, v)| match policy {
            Policy::Aggressive | Policy::Conservative => **v == relevance,
            Policy::Probable => **v > 0.0,
        })
        .map(|(i, _)| i)
        .collect()
}
