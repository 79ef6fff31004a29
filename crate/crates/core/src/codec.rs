//! Enumerative rank/unrank of sequences.
//!
//! Within a class, sequences are ranked lexicographically as multiset permutations.
//! Globally, a sequence's rank is its class offset in the [`ClassTable`] plus its rank
//! within the class. Both directions cost `O(L·h)` big-integer operations and never
//! touch a table of size `h^L`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::entropy::{check_symbols, count_symbols, Composition, Sequence};
use crate::error::{Error, Result};
use crate::typeclass::{multinomial, ClassTable};

/// Lexicographic rank of `seq` among the permutations of its own composition.
pub fn rank_in_class(seq: &Sequence) -> BigUint {
    let symbols = seq.symbols();
    let h = symbols.iter().copied().max().map_or(1, |m| m as usize + 1);
    let comp = count_symbols(symbols, h);
    rank_with(symbols, &comp, multinomial(&comp))
}

/// Same as [`rank_in_class`] with the composition and class size already known.
fn rank_with(symbols: &[u8], comp: &Composition, class_size: BigUint) -> BigUint {
    let mut counts = comp.counts().to_vec();
    // `size` is always the number of distinct completions of the current suffix.
    let mut size = class_size;
    let mut rank = BigUint::zero();
    let mut remaining = symbols.len() as u64;
    for &sym in symbols {
        let sym = sym as usize;
        for &c in &counts[..sym] {
            if c > 0 {
                rank += &size * c / remaining;
            }
        }
        size = size * counts[sym] / remaining;
        counts[sym] -= 1;
        remaining -= 1;
    }
    rank
}

/// The sequence of composition `comp` with lexicographic class rank `rank`.
pub fn unrank_in_class(comp: &Composition, rank: &BigUint) -> Result<Sequence> {
    if comp.length() == 0 {
        return Err(Error::Empty);
    }
    let size = multinomial(comp);
    if rank >= &size {
        return Err(Error::Domain(format!(
            "class rank {rank} out of range for class of size {size}"
        )));
    }
    Ok(unrank_with(comp, rank.clone(), size))
}

fn unrank_with(comp: &Composition, mut rank: BigUint, class_size: BigUint) -> Sequence {
    let mut counts = comp.counts().to_vec();
    let mut size = class_size;
    let mut remaining = comp.length() as u64;
    let mut symbols = Vec::with_capacity(comp.length());
    while remaining > 0 {
        let mut chosen = None;
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let block = &size * c / remaining;
            if rank < block {
                chosen = Some((s, block));
                break;
            }
            rank -= block;
        }
        let (s, block) = chosen.expect("rank below class size always finds a block");
        symbols.push(s as u8);
        counts[s] -= 1;
        remaining -= 1;
        size = block;
    }
    Sequence::from_raw(symbols)
}

/// Rank of `seq` in the canonical order of all `h^L` sequences described by `table`.
pub fn global_rank(seq: &Sequence, table: &ClassTable) -> Result<BigUint> {
    let (class, rank) = class_and_rank(seq, table)?;
    Ok(&table.cumulative()[class] + rank)
}

/// Class index of `seq` in `table` and its rank inside that class.
pub fn class_and_rank(seq: &Sequence, table: &ClassTable) -> Result<(usize, BigUint)> {
    if seq.len() != table.length() {
        return Err(Error::InvalidLength {
            expected: table.length(),
            actual: seq.len(),
        });
    }
    let alphabet = table.alphabet();
    check_symbols(seq.symbols(), alphabet)?;
    let comp = count_symbols(seq.symbols(), alphabet.size());
    let class = table
        .class_index(comp.counts())
        .expect("every composition of the table length is indexed");
    let size = table.records()[class].size().clone();
    Ok((class, rank_with(seq.symbols(), &comp, size)))
}

/// The sequence at canonical rank `rank` in `table`.
pub fn global_unrank(rank: &BigUint, table: &ClassTable) -> Result<Sequence> {
    let class = table.locate(rank).ok_or_else(|| {
        Error::Domain(format!(
            "global rank {rank} out of range for {} sequences",
            table.total()
        ))
    })?;
    let record = &table.records()[class];
    let local = rank - &table.cumulative()[class];
    Ok(unrank_with(record.composition(), local, record.size().clone()))
}
