//! Sequences over a small integer alphabet, their compositions, and the
//! zero-order empirical entropy of a composition.

use std::fmt;

use crate::error::{Error, Result};

/// Largest alphabet expressible in the `0-9a-z` text format.
pub const MAX_ALPHABET: usize = 36;

const DIGITS: &[u8; MAX_ALPHABET] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Alphabet of `h` symbols, represented as the integers `0..h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(h: usize) -> Result<Self> {
        if (2..=MAX_ALPHABET).contains(&h) {
            Ok(Alphabet(h))
        } else {
            Err(Error::InvalidAlphabet(h))
        }
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }
}

/// A nonempty string of symbols, each below the alphabet size it was validated against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<u8>);

impl Sequence {
    pub fn new(symbols: Vec<u8>, alphabet: Alphabet) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Empty);
        }
        check_symbols(&symbols, alphabet)?;
        Ok(Sequence(symbols))
    }

    /// Wraps symbols that the caller has already validated.
    pub(crate) fn from_raw(symbols: Vec<u8>) -> Self {
        debug_assert!(!symbols.is_empty());
        Sequence(symbols)
    }

    /// Parses one line of the text format: characters from `0-9a-z`, no separators.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for (column, ch) in text.chars().enumerate() {
            let value = ch
                .to_digit(MAX_ALPHABET as u32)
                .filter(|&d| (d as usize) < alphabet.size() && !ch.is_ascii_uppercase());
            match value {
                Some(d) => symbols.push(d as u8),
                None => {
                    return Err(Error::InvalidCharacter {
                        ch,
                        column: column + 1,
                        h: alphabet.size(),
                    })
                }
            }
        }
        if symbols.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Sequence(symbols))
    }

    #[inline]
    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: empty sequences cannot be constructed.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", DIGITS[s as usize] as char)?;
        }
        Ok(())
    }
}

pub(crate) fn check_symbols(symbols: &[u8], alphabet: Alphabet) -> Result<()> {
    match symbols
        .iter()
        .position(|&s| s as usize >= alphabet.size())
    {
        Some(position) => Err(Error::InvalidSymbol {
            symbol: symbols[position],
            position,
            h: alphabet.size(),
        }),
        None => Ok(()),
    }
}

/// Per-symbol occurrence counts of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    counts: Box<[u32]>,
    length: u32,
}

impl Composition {
    /// Builds a composition from explicit counts. The total may be zero; operations
    /// that need a nonempty string reject it.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        let length = counts
            .iter()
            .try_fold(0u32, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::Domain("composition length overflows u32".into()))?;
        Ok(Composition {
            counts: counts.into_boxed_slice(),
            length,
        })
    }

    pub(crate) fn from_counts_unchecked(counts: Box<[u32]>, length: u32) -> Self {
        Composition { counts, length }
    }

    #[inline]
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Total length `L = Σ counts`.
    #[inline]
    pub fn length(&self) -> usize {
        self.length as usize
    }

    #[inline]
    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Number of symbols with a nonzero count.
    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// The lexicographically smallest member of the class: symbols in ascending order.
    pub fn smallest_member(&self) -> Option<Sequence> {
        if self.length == 0 {
            return None;
        }
        let mut symbols = Vec::with_capacity(self.length());
        for (s, &c) in self.counts.iter().enumerate() {
            symbols.extend(std::iter::repeat(s as u8).take(c as usize));
        }
        Some(Sequence(symbols))
    }
}

pub fn composition_of(seq: &Sequence, alphabet: Alphabet) -> Result<Composition> {
    check_symbols(seq.symbols(), alphabet)?;
    Ok(count_symbols(seq.symbols(), alphabet.size()))
}

pub(crate) fn count_symbols(symbols: &[u8], h: usize) -> Composition {
    let mut counts = vec![0u32; h];
    for &s in symbols {
        counts[s as usize] += 1;
    }
    Composition::from_counts_unchecked(counts.into_boxed_slice(), symbols.len() as u32)
}

/// Zero-order empirical entropy in bits per symbol.
///
/// Terms are summed over the nonzero counts in ascending order, so any permutation
/// of the counts yields a bit-identical result.
pub fn h0(comp: &Composition) -> Result<f64> {
    if comp.length == 0 {
        return Err(Error::Empty);
    }
    let total = comp.length as f64;
    let mut nonzero: Vec<u32> = comp.counts.iter().copied().filter(|&c| c > 0).collect();
    nonzero.sort_unstable();
    let sum = nonzero
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    // A single-symbol class contributes -1·log2(1) = -0.0.
    Ok(sum.max(0.0))
}

/// `L · h0`, the zero-order coding limit of any sequence of this composition, in bits.
pub fn sequence_information(comp: &Composition) -> Result<f64> {
    Ok(comp.length as f64 * h0(comp)?)
}
