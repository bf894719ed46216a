use serde::{Deserialize, Serialize};

use crate::embeddings::{cosine, FieldEmbedding};
use crate::error::Result;

/// Profile text fields compared between applications, in vector order.
pub const PROFILE_FIELDS: [&str; 3] = ["problem_description", "problem_type", "performance_metric"];

/// Channel similarities of one text field. A channel counts as available
/// only when both sides have terms in it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProximity {
    pub field: String,
    pub en: f64,
    pub act: f64,
    pub r: f64,
    pub en_available: bool,
    pub act_available: bool,
    pub r_available: bool,
}

/// Per-field channel similarities plus the annotation-level match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximityVector {
    pub fields: Vec<FieldProximity>,
    /// 1 when both applications annotate at the same level, else 0.
    pub au: f64,
}

impl ProximityVector {
    /// Number of components for the standard field set.
    pub const LEN: usize = 3 * PROFILE_FIELDS.len() + 1;

    /// Flat predictor vector: `en, act, r` per field, then `au`.
    pub fn components(&self) -> Vec<f64> {
        self.fields
            .iter()
            .flat_map(|f| [f.en, f.act, f.r])
            .chain(std::iter::once(self.au))
            .collect()
    }

    /// Mean of all components, unavailable ones counting as 0.
    pub fn alpha(&self) -> f64 {
        let c = self.components();
        c.iter().sum::<f64>() / c.len() as f64
    }
}

fn channel(a: (&[f64], bool), b: (&[f64], bool)) -> Result<(f64, bool)> {
    if a.1 && b.1 {
        Ok((cosine(a.0, b.0)?.clamp(0.0, 1.0), true))
    } else {
        Ok((0.0, false))
    }
}

/// Clamped channel cosines; 0 where either side lacks the channel.
pub fn field_similarity(
    field: &str,
    a: &FieldEmbedding,
    b: &FieldEmbedding,
) -> Result<FieldProximity> {
    let [ae, aa, ar] = a.channels();
    let [be, ba, br] = b.channels();
    let (en, en_available) = channel(ae, be)?;
    let (act, act_available) = channel(aa, ba)?;
    let (r, r_available) = channel(ar, br)?;
    Ok(FieldProximity {
        field: field.to_string(),
        en,
        act,
        r,
        en_available,
        act_available,
        r_available,
    })
}
