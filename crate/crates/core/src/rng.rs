//! SplitMix64, the counter-based generator every seeded experiment uses.
//!
//! State advances by the constant `0x9E3779B97F4A7C15`; each output is the
//! new state passed through the `mix64` finalizer (shifts 30/27/31,
//! multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). Seed 0 yields
//! `0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F`.
//!
//! `fork(i)` derives an independent stream for sub-task `i` from the current
//! state without advancing it: the child seed is `mix64(state ^ mix64(i + 1))`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `0..bound` by rejection; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let r = self.next_u64();
            if r < zone {
                return r % bound;
            }
        }
    }

    /// Uniform `bits`-bit value, `bits <= 64`.
    pub fn bits(&mut self, bits: u32) -> u64 {
        match bits {
            0 => 0,
            64 => self.next_u64(),
            b => self.next_u64() >> (64 - b),
        }
    }

    pub fn fork(&self, index: u64) -> SplitMix64 {
        SplitMix64::new(mix64(self.state ^ mix64(index.wrapping_add(1))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_vectors() {
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(r.next_u64(), 0x28EF_E333_B266_F103);
    }

    #[test]
    fn forks_are_deterministic_and_distinct() {
        let root = SplitMix64::new(42);
        let mut a = root.fork(3);
        let mut b = root.fork(3);
        let mut c = root.fork(4);
        let xa = a.next_u64();
        assert_eq!(xa, b.next_u64());
        assert_ne!(xa, c.next_u64());
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = SplitMix64::new(1);
        for bound in [1u64, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(r.below(bound) < bound);
            }
        }
        assert!(r.bits(5) < 32);
    }
}
