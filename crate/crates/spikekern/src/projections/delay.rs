use crate::error::{Error, Result};
use crate::spike::SpikeVector;

/// Ring buffer of the last `max_delay_steps + 1` spike vectors of one
/// population. Reading at delay `d` returns the vector written `d` steps
/// ago; slots start out silent, so reads before the first writes see no
/// spikes.
#[derive(Debug, Clone)]
pub struct DelayBuffer {
    ring: Vec<SpikeVector>,
    head: usize,
}

impl DelayBuffer {
    pub fn new(max_delay_steps: usize, population_size: usize) -> Self {
        Self {
            ring: vec![SpikeVector::silent(population_size); max_delay_steps + 1],
            head: 0,
        }
    }

    pub fn max_delay_steps(&self) -> usize {
        self.ring.len() - 1
    }

    pub fn population_size(&self) -> usize {
        self.ring[0].len()
    }

    /// Advances the head and overwrites the oldest slot.
    pub fn write(&mut self, spikes: &SpikeVector) -> Result<()> {
        if spikes.len() != self.population_size() {
            return Err(Error::dim(
                "DelayBuffer::write",
                self.population_size(),
                spikes.len(),
            ));
        }
        self.head = (self.head + 1) % self.ring.len();
        self.ring[self.head] = spikes.clone();
        Ok(())
    }

    /// The spike vector written `delay` steps ago (0 = most recent write).
    pub fn read(&self, delay: usize) -> Result<&SpikeVector> {
        if delay > self.max_delay_steps() {
            return Err(Error::InvalidParameter(format!(
                "delay {delay} exceeds buffer capacity {}",
                self.max_delay_steps()
            )));
        }
        let n = self.ring.len();
        Ok(&self.ring[(self.head + n - delay) % n])
    }

    pub fn state_bytes(&self) -> u64 {
        (self.ring.len() * self.population_size()) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn sv(len: usize, active: &[usize]) -> SpikeVector {
        SpikeVector::from_active(len, active).unwrap()
    }

    #[test]
    fn read_zero_returns_last_write() {
        let mut buf = DelayBuffer::new(3, 4);
        let s = sv(4, &[1, 3]);
        buf.write(&s).unwrap();
        assert_eq!(buf.read(0).unwrap(), &s);
    }

    #[test]
    fn read_d_returns_write_d_steps_ago() {
        let d = 5;
        let mut buf = DelayBuffer::new(d, 3);
        let writes: Vec<SpikeVector> = (0..=d).map(|k| sv(3, &[k % 3])).collect();
        for w in &writes {
            buf.write(w).unwrap();
        }
        assert_eq!(buf.read(d).unwrap(), &writes[0]);
        assert_eq!(buf.read(0).unwrap(), &writes[d]);
    }

    #[test]
    fn reads_before_any_write_are_silent() {
        let buf = DelayBuffer::new(2, 5);
        for d in 0..=2 {
            assert!(!buf.read(d).unwrap().any());
        }
    }

    #[test]
    fn random_schedule_matches_full_history_oracle() {
        let mut rng = SplitMix64::new(17);
        let max_delay = 7;
        let size = 6;
        let mut buf = DelayBuffer::new(max_delay, size);
        // Full-history oracle: keep every write and index from the end.
        let mut history: Vec<SpikeVector> = Vec::new();
        for _ in 0..500 {
            let bits: Vec<bool> = (0..size).map(|_| rng.next_f64() < 0.3).collect();
            let s = SpikeVector::from_bools(bits);
            buf.write(&s).unwrap();
            history.push(s);
            let d = (rng.next_u64() as usize) % (max_delay + 1);
            let expected = if d < history.len() {
                history[history.len() - 1 - d].clone()
            } else {
                SpikeVector::silent(size)
            };
            assert_eq!(buf.read(d).unwrap(), &expected);
        }
    }

    #[test]
    fn rejects_wrong_sizes_and_excess_delay() {
        let mut buf = DelayBuffer::new(1, 3);
        assert!(buf.write(&SpikeVector::silent(2)).is_err());
        assert!(buf.read(2).is_err());
    }
}
