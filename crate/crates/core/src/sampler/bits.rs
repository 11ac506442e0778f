use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SamplerError;

/// A supply of fair bits; `0` is heads.
pub trait BitSource {
    fn next_bit(&mut self) -> Result<u8, SamplerError>;
}

/// Reproducible pseudo-random bits. Distinct `stream`s under one seed are
/// independent, which is how trial shards get their sources.
#[derive(Debug, Clone)]
pub struct SeededBits {
    rng: ChaCha8Rng,
    buffer: u64,
    remaining: u32,
}

impl SeededBits {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, buffer: 0, remaining: 0 }
    }

    #[inline]
    pub fn bit(&mut self) -> u8 {
        if self.remaining == 0 {
            self.buffer = self.rng.next_u64();
            self.remaining = 64;
        }
        let b = (self.buffer & 1) as u8;
        self.buffer >>= 1;
        self.remaining -= 1;
        b
    }
}

impl BitSource for SeededBits {
    fn next_bit(&mut self) -> Result<u8, SamplerError> {
        Ok(self.bit())
    }
}

/// Replays a fixed bit string and then fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedBits {
    bits: Vec<u8>,
    pos: usize,
}

impl ScriptedBits {
    pub fn new(bits: impl Into<Vec<u8>>) -> Result<Self, SamplerError> {
        let bits = bits.into();
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(SamplerError::BadBit(b));
        }
        Ok(Self { bits, pos: 0 })
    }

    /// Parses a string of `0`/`1` characters, ignoring whitespace and commas.
    pub fn parse(text: &str) -> Result<Self, SamplerError> {
        let bits = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(SamplerError::Format(format!("`{other}` is not a bit"))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(bits)
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl BitSource for ScriptedBits {
    fn next_bit(&mut self) -> Result<u8, SamplerError> {
        let b = *self.bits.get(self.pos).ok_or(SamplerError::BitsExhausted { consumed: self.pos })?;
        self.pos += 1;
        Ok(b)
    }
}
