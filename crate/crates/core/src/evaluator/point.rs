use serde::{Deserialize, Serialize};

use crate::spectral::SpectralData;

/// A real point stored as an offset from an anchor node, so that points
/// extremely close to a node keep full relative accuracy in `x − t_anchor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealPoint {
    pub anchor: Option<usize>,
    pub offset: f64,
    pub value: f64,
}

impl RealPoint {
    pub fn plain(x: f64) -> Self {
        Self {
            anchor: None,
            offset: x,
            value: x,
        }
    }

    pub fn near(data: &SpectralData, anchor: usize, offset: f64) -> Self {
        Self {
            anchor: Some(anchor),
            offset,
            value: data.t[anchor] + offset,
        }
    }

    /// Anchors a plain value at its nearest node.
    pub fn anchored(data: &SpectralData, x: f64) -> Self {
        let j = data.nearest_node(x);
        Self::near(data, j, x - data.t[j])
    }

    /// `x − t_k`, exact in the offset when `k` is the anchor.
    pub fn minus_node(&self, data: &SpectralData, k: usize) -> f64 {
        match self.anchor {
            Some(a) if a == k => self.offset,
            Some(a) => (data.t[a] - data.t[k]) + self.offset,
            None => self.offset - data.t[k],
        }
    }

    /// Distance to the nearest node of `data`.
    pub fn dist_to_nodes(&self, data: &SpectralData) -> f64 {
        let j = data.count_below(self.value);
        let mut d = f64::INFINITY;
        for k in [j.wrapping_sub(1), j, j + 1] {
            if k < data.len() {
                d = d.min(self.minus_node(data, k).abs());
            }
        }
        if self.anchor.is_some() {
            d = d.min(self.offset.abs());
        }
        d
    }

    /// Re-expresses the point on sub-data whose node `i` is node `support[i]` here.
    pub fn remap(&self, support: &[usize]) -> Self {
        Self {
            anchor: self.anchor.map(|a| support[a]),
            ..*self
        }
    }
}
