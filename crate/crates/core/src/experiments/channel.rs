//! Memoryless symbol-substitution channel.

use crate::entropy::{Alphabet, Sequence};
use crate::error::{Error, Result};
use crate::experiments::rng::KeyedStream;

/// Each symbol is independently replaced, with probability `p`, by one of the other
/// `h − 1` symbols chosen uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    p: f64,
}

impl ChannelSpec {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(ChannelSpec { p })
        } else {
            Err(Error::Domain(format!("substitution probability {p} not in [0, 1]")))
        }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Passes `seq` through the channel.
///
/// Position `i` uses draws `2i` (substitute or not) and `2i + 1` (replacement) of the
/// stream keyed by `(seed, trial)`.
pub fn corrupt(
    seq: &Sequence,
    alphabet: Alphabet,
    spec: ChannelSpec,
    seed: u64,
    trial: u64,
) -> Sequence {
    corrupt_with(seq, alphabet, spec, &KeyedStream::new(seed, trial))
}

pub(crate) fn corrupt_with(
    seq: &Sequence,
    alphabet: Alphabet,
    spec: ChannelSpec,
    stream: &KeyedStream,
) -> Sequence {
    let h = alphabet.size() as u64;
    let symbols = seq
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let i = i as u64;
            if stream.unit_at(2 * i) < spec.p {
                let offset = 1 + stream.below_at(2 * i + 1, h - 1);
                ((s as u64 + offset) % h) as u8
            } else {
                s
            }
        })
        .collect();
    Sequence::from_raw(symbols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str, h: usize) -> Sequence {
        Sequence::parse(text, Alphabet::new(h).unwrap()).unwrap()
    }

    #[test]
    fn noiseless_channel_is_identity() {
        let a = Alphabet::new(5).unwrap();
        let s = seq("0123401234", 5);
        let spec = ChannelSpec::new(0.0).unwrap();
        for trial in 0..100 {
            assert_eq!(corrupt(&s, a, spec, 9, trial), s);
        }
    }

    #[test]
    fn binary_channel_with_certain_error_flips_everything() {
        let a = Alphabet::new(2).unwrap();
        let out = corrupt(&seq("0000", 2), a, ChannelSpec::new(1.0).unwrap(), 1, 0);
        assert_eq!(out.to_string(), "1111");
    }

    #[test]
    fn ternary_substitutions_are_uniform() {
        // Each of bb, bc, cb, cc should appear with probability 1/4.
        let a = Alphabet::new(3).unwrap();
        let s = seq("00", 3);
        let spec = ChannelSpec::new(1.0).unwrap();
        let mut hist = std::collections::HashMap::new();
        let seeds = 100_000u64;
        for seed in 0..seeds {
            *hist.entry(corrupt(&s, a, spec, seed, 0).to_string()).or_insert(0u32) += 1;
        }
        assert_eq!(hist.len(), 4);
        for key in ["11", "12", "21", "22"] {
            let freq = hist[key] as f64 / seeds as f64;
            assert!((freq - 0.25).abs() < 0.01, "{key}: {freq}");
        }
    }

    #[test]
    fn substitution_rate_matches_p() {
        let a = Alphabet::new(4).unwrap();
        let s = Sequence::from_raw(vec![0; 1000]);
        let spec = ChannelSpec::new(0.3).unwrap();
        let changed: usize = (0..50)
            .map(|t| {
                corrupt(&s, a, spec, 77, t)
                    .symbols()
                    .iter()
                    .filter(|&&x| x != 0)
                    .count()
            })
            .sum();
        let rate = changed as f64 / 50_000.0;
        assert!((rate - 0.3).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(ChannelSpec::new(-0.1).is_err());
        assert!(ChannelSpec::new(1.5).is_err());
        assert!(ChannelSpec::new(f64::NAN).is_err());
    }
}
