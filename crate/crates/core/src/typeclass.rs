//! Type classes of `X^L`: every composition of length `L` over `h` symbols, sorted by
//! zero-order entropy, with exact class sizes and cumulative offsets.
//!
//! The table is what makes the `h^L` sequences addressable by rank without ever
//! materializing them: a global rank is a class offset plus a rank inside the class.
//!
//! # Canonical order
//!
//! Classes are ordered by `L·h0` ascending. Because `L·h0 = L·log2 L − Σ n_i·log2 n_i`,
//! this is the same as ordering by `Σ n_i·log2 n_i` descending, which in turn is the
//! same as ordering by the integer `∏ n_i^n_i` descending. The product is compared
//! exactly as a big integer, so the order never depends on floating point rounding.
//! Classes with equal products (in particular, permutations of the same count
//! multiset) are broken by their smallest member, ascending lexicographically.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::entropy::{h0, Alphabet, Composition, Sequence};
use crate::error::{Error, Result};

/// Default upper bound on the number of classes a table may hold.
pub const DEFAULT_CLASS_BUDGET: u64 = 10_000_000;

/// One type class: all sequences sharing a composition.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    comp: Composition,
    size: BigUint,
    h0_value: f64,
    // ∏ n_i^n_i, the exact entropy key.
    power_product: BigUint,
}

impl ClassRecord {
    fn new(comp: Composition, size: BigUint, powers: &[BigUint]) -> Self {
        let power_product = comp
            .counts()
            .iter()
            .fold(BigUint::one(), |acc, &c| acc * &powers[c as usize]);
        let h0_value = h0(&comp).expect("classes are nonempty");
        ClassRecord {
            comp,
            size,
            h0_value,
            power_product,
        }
    }

    #[inline]
    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    /// Number of sequences in the class, `L! / ∏ n_i!`.
    #[inline]
    pub fn size(&self) -> &BigUint {
        &self.size
    }

    /// Entropy in bits per symbol, for display and averaging only.
    #[inline]
    pub fn h0(&self) -> f64 {
        self.h0_value
    }

    pub fn smallest_member(&self) -> Sequence {
        self.comp.smallest_member().expect("classes are nonempty")
    }

    /// Compares two classes of equal length under the canonical order.
    pub fn canonical_cmp(&self, other: &ClassRecord) -> Ordering {
        other
            .power_product
            .cmp(&self.power_product)
            .then_with(|| smallest_member_cmp(&self.comp, &other.comp))
    }
}

/// Lexicographic order of the smallest members of two classes of equal length.
///
/// The smallest member is `0^n_0 1^n_1 …`; the first class whose count of the lowest
/// differing symbol is larger has the smaller member.
fn smallest_member_cmp(a: &Composition, b: &Composition) -> Ordering {
    for (x, y) in a.counts().iter().zip(b.counts()) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            unequal => return unequal,
        }
    }
    Ordering::Equal
}

/// `L! / ∏ n_i!`, exact.
pub fn multinomial(comp: &Composition) -> BigUint {
    let mut result = BigUint::one();
    let mut placed = 0u64;
    for &count in comp.counts() {
        for j in 1..=count as u64 {
            placed += 1;
            result *= placed;
            // Each intermediate value is itself a multinomial coefficient.
            result /= j;
        }
    }
    result
}

/// Binomial coefficient `C(n, k)`, exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for j in 1..=k {
        result *= n - k + j;
        result /= j;
    }
    result
}

/// Number of compositions of `length` into `h` parts, `C(L+h−1, h−1)`.
pub fn class_count(h: usize, length: usize) -> BigUint {
    binomial((length + h - 1) as u64, (h - 1) as u64)
}

/// All compositions of `length` over `h` symbols, in descending lexicographic order of
/// their count vectors.
pub fn enumerate_compositions(h: usize, length: usize) -> Result<Vec<Composition>> {
    enumerate_compositions_with_budget(h, length, DEFAULT_CLASS_BUDGET)
}

pub fn enumerate_compositions_with_budget(
    h: usize,
    length: usize,
    budget: u64,
) -> Result<Vec<Composition>> {
    Alphabet::new(h)?;
    if length == 0 {
        return Err(Error::Empty);
    }
    let length32 = u32::try_from(length)
        .map_err(|_| Error::Domain(format!("length {length} exceeds u32")))?;
    let count = class_count(h, length);
    let within_budget = count.to_u64().filter(|&c| c <= budget);
    let Some(count) = within_budget else {
        return Err(Error::BudgetExceeded {
            what: "class table",
            required: count.to_string(),
            budget,
        });
    };

    let mut out = Vec::with_capacity(count as usize);
    let mut counts = vec![0u32; h];
    fill(&mut counts, 0, length32, length32, &mut out);
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

fn fill(counts: &mut [u32], slot: usize, left: u32, total: u32, out: &mut Vec<Composition>) {
    if slot + 1 == counts.len() {
        counts[slot] = left;
        out.push(Composition::from_counts_unchecked(
            counts.to_vec().into_boxed_slice(),
            total,
        ));
        return;
    }
    for c in (0..=left).rev() {
        counts[slot] = c;
        fill(counts, slot + 1, left - c, total, out);
    }
}

/// Where the shaped set ends inside a class table.
///
/// The shaped set holds every sequence of the classes before `class_index` plus the
/// `remainder` lexicographically smallest sequences of class `class_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cutoff {
    pub class_index: usize,
    pub remainder: BigUint,
}

/// All type classes of `X^L` in canonical order.
#[derive(Debug, Clone)]
pub struct ClassTable {
    alphabet: Alphabet,
    length: usize,
    records: Vec<ClassRecord>,
    cumulative: Vec<BigUint>,
    total: BigUint,
    index: HashMap<Box<[u32]>, usize>,
}

impl ClassTable {
    pub fn build(alphabet: Alphabet, length: usize) -> Result<Self> {
        Self::build_with_budget(alphabet, length, DEFAULT_CLASS_BUDGET)
    }

    pub fn build_with_budget(alphabet: Alphabet, length: usize, budget: u64) -> Result<Self> {
        let comps = enumerate_compositions_with_budget(alphabet.size(), length, budget)?;

        let mut factorials = Vec::with_capacity(length + 1);
        let mut powers = Vec::with_capacity(length + 1);
        factorials.push(BigUint::one());
        powers.push(BigUint::one());
        for n in 1..=length {
            let next = &factorials[n - 1] * n;
            factorials.push(next);
            powers.push(BigUint::from(n).pow(n as u32));
        }

        let mut records: Vec<ClassRecord> = comps
            .into_iter()
            .map(|comp| {
                let denom = comp
                    .counts()
                    .iter()
                    .fold(BigUint::one(), |acc, &c| acc * &factorials[c as usize]);
                let size = &factorials[length] / denom;
                ClassRecord::new(comp, size, &powers)
            })
            .collect();
        records.sort_by(ClassRecord::canonical_cmp);

        let mut cumulative = Vec::with_capacity(records.len());
        let mut running = BigUint::zero();
        for record in &records {
            cumulative.push(running.clone());
            running += &record.size;
        }
        let index = records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.comp.counts().to_vec().into_boxed_slice(), i))
            .collect();

        Ok(ClassTable {
            alphabet,
            length,
            records,
            cumulative,
            total: running,
            index,
        })
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn records(&self) -> &[ClassRecord] {
        &self.records
    }

    /// `cumulative()[i]` is the number of sequences in classes before `i`.
    #[inline]
    pub fn cumulative(&self) -> &[BigUint] {
        &self.cumulative
    }

    /// Total number of sequences, `h^L`.
    #[inline]
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.records.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Position of the class with the given counts.
    pub fn class_index(&self, counts: &[u32]) -> Option<usize> {
        self.index.get(counts).copied()
    }

    /// Index of the class containing global rank `rank`, if `rank < h^L`.
    pub fn locate(&self, rank: &BigUint) -> Option<usize> {
        if rank >= &self.total {
            return None;
        }
        Some(self.cumulative.partition_point(|c| c <= rank) - 1)
    }

    /// Splits the table after the `shaped_size` lowest sequences.
    pub fn cutoff(&self, shaped_size: &BigUint) -> Result<Cutoff> {
        if shaped_size > &self.total {
            return Err(Error::Domain(format!(
                "shaped set size {shaped_size} exceeds {} sequences of length {}",
                self.total, self.length
            )));
        }
        if shaped_size == &self.total {
            return Ok(Cutoff {
                class_index: self.records.len(),
                remainder: BigUint::zero(),
            });
        }
        let class_index = self.cumulative.partition_point(|c| c <= shaped_size) - 1;
        let remainder = shaped_size - &self.cumulative[class_index];
        Ok(Cutoff {
            class_index,
            remainder,
        })
    }

    /// Rough heap footprint in bytes. Grows with the class count, never with `h^L`.
    pub fn heap_bytes(&self) -> usize {
        let big = |b: &BigUint| b.to_u64_digits().len() * 8;
        let h = self.alphabet.size();
        self.records
            .iter()
            .map(|r| std::mem::size_of::<ClassRecord>() + 4 * h + big(&r.size) + big(&r.power_product))
            .sum::<usize>()
            + self.cumulative.iter().map(|c| 24 + big(c)).sum::<usize>()
            + self.index.capacity() * (std::mem::size_of::<(Box<[u32]>, usize)>() + 4 * h + 1)
    }

    /// Audit dump: one JSON object per class, in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<TableRow<'_>> = self
            .records
            .iter()
            .zip(&self.cumulative)
            .map(|(r, cum)| TableRow {
                counts: r.comp.counts(),
                size: r.size.to_string(),
                h0: r.h0_value,
                cumulative: cum.to_string(),
            })
            .collect();
        serde_json::to_value(rows).expect("table rows serialize")
    }
}

#[derive(Serialize)]
struct TableRow<'a> {
    counts: &'a [u32],
    size: String,
    h0: f64,
    cumulative: String,
}
