//! Deterministic sampling used by restart heuristics and probe searches.
//!
//! Hand-rolled on purpose: the library must produce bit-identical runs from
//! a seed on every target, including wasm, so it cannot depend on an OS
//! entropy source. SplitMix64 covers "random" restarts; Halton covers
//! low-discrepancy sweeps over ray directions and parameters.

/// SplitMix64: tiny, statistically solid for non-cryptographic use, and
/// trivially seedable.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

const HALTON_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical-inverse (van der Corput) value of `index` in base `base`.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    result
}

/// Halton sequence in `dim` coordinates, each in (0, 1). The seed offsets the
/// start index so distinct seeds give distinct but equally well-spread runs.
#[derive(Clone, Debug)]
pub struct Halton {
    dim: usize,
    index: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1 && dim <= HALTON_PRIMES.len(), "unsupported dimension");
        // Skip the correlated low-index prefix and spread seeds apart.
        let index = 31 + (seed % 1_000_003) * 64;
        Self { dim, index }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        (0..self.dim)
            .map(|k| radical_inverse(self.index, HALTON_PRIMES[k]))
            .collect()
    }
}
