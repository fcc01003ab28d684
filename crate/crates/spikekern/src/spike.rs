//! Boolean event vectors.

use crate::error::{Error, Result};

/// One spike event per neuron for a single step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeVector {
    bits: Vec<bool>,
}

impl SpikeVector {
    /// All-false vector of the given length.
    pub fn silent(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Vector of length `len` with the listed indices set.
    pub fn from_active(len: usize, active: &[usize]) -> Result<Self> {
        let mut bits = vec![false; len];
        for &i in active {
            if i >= len {
                return Err(Error::dim("SpikeVector::from_active", len, i));
            }
            bits[i] = true;
        }
        Ok(Self { bits })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    #[inline]
    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of active events, ascending.
    pub fn iter_active(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn count_active(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    /// 0/1 real cast used by the non-event kernel baselines.
    pub fn to_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    pub fn fill(&mut self, v: bool) {
        self.bits.iter_mut().for_each(|b| *b = v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn active_iteration_matches_cast() {
        let s = SpikeVector::from_active(6, &[1, 4]).unwrap();
        assert_eq!(s.iter_active().collect::<Vec<_>>(), vec![1, 4]);
        assert_eq!(s.to_f64(), vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.count_active(), 2);
    }

    #[test]
    fn out_of_range_index_rejected() {
        assert!(SpikeVector::from_active(3, &[3]).is_err());
    }
}
