//! Kernel instrumentation hooks.
//!
//! The event kernels promise to *do no work* for inactive inputs. That claim
//! is testable: kernels report weight reads (CSR) and weight draws (JIT
//! connectivity) through a probe. Production call sites use [`NoProbe`],
//! which monomorphizes to nothing.

pub trait Probe {
    /// Called when stored weights are read for accumulation.
    fn weight_reads(&mut self, n: u64);
    /// Called when a weight value is drawn from a procedural stream.
    fn weight_draws(&mut self, n: u64);
}

/// Zero-cost probe for production paths.
pub struct NoProbe;

impl Probe for NoProbe {
    #[inline(always)]
    fn weight_reads(&mut self, _: u64) {}
    #[inline(always)]
    fn weight_draws(&mut self, _: u64) {}
}

/// Counting probe for tests.
#[derive(Debug, Default, Clone)]
pub struct CountingProbe {
    pub weight_reads: u64,
    pub weight_draws: u64,
}

impl Probe for CountingProbe {
    #[inline]
    fn weight_reads(&mut self, n: u64) {
        self.weight_reads += n;
    }
    #[inline]
    fn weight_draws(&mut self, n: u64) {
        self.weight_draws += n;
    }
}
