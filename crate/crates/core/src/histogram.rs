use crate::error::{QstError, Result};

/// Values within this distance outside `[0, 1]` are folded into the end bins.
pub const RANGE_TOLERANCE: f64 = 1e-12;

/// Fixed-width counts over `[0, 1]`; the last bin is right-closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn empty(bin_width: f64) -> Result<Self> {
        if !(bin_width.is_finite() && bin_width > 0.0 && bin_width <= 1.0) {
            return Err(QstError::domain(format!(
                "histogram bin width must lie in (0, 1], got {bin_width}"
            )));
        }
        let ratio = 1.0 / bin_width;
        let n_bins = if (ratio - ratio.round()).abs() < 1e-9 {
            ratio.round()
        } else {
            ratio.ceil()
        } as usize;
        Ok(Self {
            bin_width,
            counts: vec![0; n_bins],
        })
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `[low, high)` edges of bin `i` (the last bin ends at 1).
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let low = i as f64 * self.bin_width;
        let high = if i + 1 == self.n_bins() {
            1.0
        } else {
            (i + 1) as f64 * self.bin_width
        };
        (low, high)
    }

    pub fn add(&mut self, v: f64) -> Result<()> {
        if !(-RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(&v) {
            return Err(QstError::domain(format!(
                "histogram value {v} outside [0, 1]"
            )));
        }
        let last = self.n_bins() - 1;
        let mut idx = (v.max(0.0) / self.bin_width).floor() as usize;
        // v / w can land one ulp short of an exact edge.
        if idx < last && (idx + 1) as f64 * self.bin_width <= v {
            idx += 1;
        }
        self.counts[idx.min(last)] += 1;
        Ok(())
    }

    /// Mode as the centre of the fullest bin (first one on ties).
    pub fn mode(&self) -> Option<f64> {
        let (i, &c) = self
            .counts
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, &c)| c)?;
        if c == 0 {
            return None;
        }
        let (lo, hi) = self.bin_edges(i);
        Some(0.5 * (lo + hi))
    }
}

pub fn histogram(values: &[f64], bin_width: f64) -> Result<Histogram> {
    let mut h = Histogram::empty(bin_width)?;
    for &v in values {
        h.add(v)?;
    }
    Ok(h)
}
