/// 64-bit multiplicative congruential generator used for Monte-Carlo draws.
///
/// ```text
/// state₀ = (seed XOR 0x9E3779B97F4A7C15) OR 1
/// state  = state · 0xD1342543DE82EF95  mod 2⁶⁴
/// output = state >> 32
/// index  = (output · len) >> 32
/// ```
///
/// The state is advanced before each output. Fixed here so that runs can be
/// reproduced by any implementation.
#[derive(Clone, Debug)]
pub struct Mcg {
    state: u64,
}

impl Mcg {
    pub const MULTIPLIER: u64 = 0xD134_2543_DE82_EF95;
    pub const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        Self {
            state: (seed ^ Self::SEED_MIX) | 1,
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER);
        (self.state >> 32) as u32
    }

    /// Uniform index in `0..len`.
    pub fn index(&mut self, len: usize) -> usize {
        ((u64::from(self.next_u32()) * len as u64) >> 32) as usize
    }
}
