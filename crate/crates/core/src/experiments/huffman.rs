//! Per-sequence canonical Huffman codes and the plain-versus-shaped comparison.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::global_unrank;
use crate::entropy::{count_symbols, Composition, Sequence};
use crate::error::{Error, Result};
use crate::experiments::rng::KeyedStream;
use crate::shaping::ShapingContext;

/// Canonical prefix code over an alphabet of `h` symbols. Absent symbols have length 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    lengths: Vec<u8>,
    codes: Vec<u64>,
    // Present symbols sorted by (length, symbol).
    order: Vec<u8>,
}

impl PrefixCode {
    /// Assigns canonical codewords to the given lengths.
    pub fn from_lengths(lengths: Vec<u8>) -> Result<Self> {
        if lengths.iter().any(|&l| l > 63) {
            return Err(Error::Domain("codeword length above 63".into()));
        }
        let mut order: Vec<u8> = (0..lengths.len() as u8)
            .filter(|&s| lengths[s as usize] > 0)
            .collect();
        order.sort_by_key(|&s| (lengths[s as usize], s));

        let mut codes = vec![0u64; lengths.len()];
        let mut next = 0u64;
        let mut prev_len = 0u8;
        for &s in &order {
            let len = lengths[s as usize];
            next <<= len - prev_len;
            if next >> len != 0 {
                return Err(Error::Domain("lengths violate the Kraft inequality".into()));
            }
            codes[s as usize] = next;
            next += 1;
            prev_len = len;
        }
        Ok(PrefixCode {
            lengths,
            codes,
            order,
        })
    }

    #[inline]
    pub fn lengths(&self) -> &[u8] {
        &self.lengths
    }

    /// Codeword of `symbol`, right-aligned, or `None` if the symbol is absent.
    pub fn codeword(&self, symbol: u8) -> Option<(u64, u8)> {
        let len = *self.lengths.get(symbol as usize)?;
        (len > 0).then(|| (self.codes[symbol as usize], len))
    }

    /// Kraft sum `Σ 2^−len` over present symbols as an exact fraction `(num, 2^max_len)`.
    pub fn kraft_fraction(&self) -> (u128, u128) {
        let max = self.lengths.iter().copied().max().unwrap_or(0) as u32;
        let num = self
            .lengths
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u128 << (max - l as u32))
            .sum();
        (num, 1u128 << max)
    }

    pub fn is_complete(&self) -> bool {
        let (num, den) = self.kraft_fraction();
        num == den
    }

    /// Payload size of `seq` in bits; `None` if it uses an absent symbol.
    pub fn encoded_bits(&self, seq: &Sequence) -> Option<u64> {
        seq.symbols().iter().try_fold(0u64, |acc, &s| {
            let len = *self.lengths.get(s as usize)?;
            (len > 0).then_some(acc + len as u64)
        })
    }

    /// Packs `seq` MSB-first. Returns the bytes and the number of valid bits.
    pub fn encode(&self, seq: &Sequence) -> Result<(Vec<u8>, usize)> {
        let mut out = Vec::new();
        let mut bits = 0usize;
        for (position, &s) in seq.symbols().iter().enumerate() {
            let (code, len) = self.codeword(s).ok_or(Error::InvalidSymbol {
                symbol: s,
                position,
                h: self.lengths.len(),
            })?;
            for i in (0..len).rev() {
                if bits % 8 == 0 {
                    out.push(0);
                }
                if (code >> i) & 1 == 1 {
                    *out.last_mut().expect("pushed above") |= 0x80 >> (bits % 8);
                }
                bits += 1;
            }
        }
        Ok((out, bits))
    }

    /// Decodes `count` symbols from the first `bits` bits of `bytes`.
    pub fn decode(&self, bytes: &[u8], bits: usize, count: usize) -> Result<Sequence> {
        let max_len = self.lengths.iter().copied().max().unwrap_or(0) as usize;
        let mut per_len = vec![0u64; max_len + 1];
        for &s in &self.order {
            per_len[self.lengths[s as usize] as usize] += 1;
        }

        let mut cursor = 0usize;
        let mut symbols = Vec::with_capacity(count);
        let bit_at = |i: usize| (bytes[i / 8] >> (7 - i % 8)) & 1;
        while symbols.len() < count {
            let (mut code, mut first, mut index) = (0u64, 0u64, 0u64);
            let mut found = None;
            for &n in &per_len[1..] {
                if cursor >= bits {
                    return Err(Error::Domain("bitstream ended inside a codeword".into()));
                }
                code |= bit_at(cursor) as u64;
                cursor += 1;
                if code - first < n {
                    found = Some(self.order[(index + code - first) as usize]);
                    break;
                }
                index += n;
                first = (first + n) << 1;
                code <<= 1;
            }
            symbols.push(found.ok_or_else(|| Error::Domain("invalid codeword".into()))?);
        }
        if symbols.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Sequence::from_raw(symbols))
    }
}

/// Optimal prefix code lengths for the empirical counts of `comp`.
///
/// A class with a single distinct symbol gets a one-bit codeword for that symbol.
/// Ties between equal weights are broken by node creation order, so the result is
/// deterministic.
pub fn huffman_lengths(comp: &Composition) -> PrefixCode {
    let counts = comp.counts();
    let mut lengths = vec![0u8; counts.len()];
    let present: Vec<usize> = (0..counts.len()).filter(|&s| counts[s] > 0).collect();
    match present.len() {
        0 => {}
        1 => lengths[present[0]] = 1,
        _ => {
            // parent[i] for every node; leaves first, then internal nodes.
            let mut parent: Vec<usize> = vec![usize::MAX; present.len()];
            let mut heap: BinaryHeap<Reverse<(u64, usize)>> = present
                .iter()
                .enumerate()
                .map(|(node, &s)| Reverse((counts[s] as u64, node)))
                .collect();
            while heap.len() > 1 {
                let Reverse((wa, a)) = heap.pop().expect("len > 1");
                let Reverse((wb, b)) = heap.pop().expect("len > 1");
                let node = parent.len();
                parent.push(usize::MAX);
                parent[a] = node;
                parent[b] = node;
                heap.push(Reverse((wa + wb, node)));
            }
            for (leaf, &s) in present.iter().enumerate() {
                let mut depth = 0u8;
                let mut node = leaf;
                while parent[node] != usize::MAX {
                    node = parent[node];
                    depth += 1;
                }
                lengths[s] = depth;
            }
        }
    }
    PrefixCode::from_lengths(lengths).expect("Huffman lengths satisfy Kraft")
}

/// Payload bits of `seq` under its own Huffman code.
pub fn self_coded_bits(seq: &Sequence, h: usize) -> u64 {
    let comp = count_symbols(seq.symbols(), h);
    huffman_lengths(&comp)
        .encoded_bits(seq)
        .expect("every symbol of seq is present in its own code")
}

/// Bits to transmit the `h` symbol counts of a length-`len` sequence.
fn header_bits(h: usize, len: usize) -> u64 {
    // ceil(log2(len + 1)) bits per count.
    let per_count = usize::BITS - len.leading_zeros();
    h as u64 * per_count as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Exhaustive,
    Sample(u64),
}

/// Comparison of one source sequence against its shaped codeword.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuffmanRow {
    pub x: String,
    pub y: String,
    pub bits_plain: u64,
    pub bits_shaped: u64,
    pub bits_plain_hdr: u64,
    pub bits_shaped_hdr: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuffmanComparison {
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub mode: String,
    pub mean_bits_plain: f64,
    pub mean_bits_shaped: f64,
    pub mean_bits_plain_hdr: f64,
    pub mean_bits_shaped_hdr: f64,
    pub rows: Vec<HuffmanRow>,
}

impl HuffmanComparison {
    pub const CSV_HEADER: &'static str =
        "h,N,K,mode,mean_bits_plain,mean_bits_shaped,mean_bits_plain_hdr,mean_bits_shaped_hdr";

    /// Per-sequence rows (mode `seq:<x>`) followed by the summary row.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},seq:{},{:.9},{:.9},{:.9},{:.9}",
                    self.h,
                    self.n,
                    self.k,
                    r.x,
                    r.bits_plain as f64,
                    r.bits_shaped as f64,
                    r.bits_plain_hdr as f64,
                    r.bits_shaped_hdr as f64
                )
            })
            .collect();
        out.push(format!(
            "{},{},{},{},{:.9},{:.9},{:.9},{:.9}",
            self.h,
            self.n,
            self.k,
            self.mode,
            self.mean_bits_plain,
            self.mean_bits_shaped,
            self.mean_bits_plain_hdr,
            self.mean_bits_shaped_hdr
        ));
        out
    }
}

/// Huffman-codes every source sequence (or a uniform sample) and its shaped codeword,
/// each under its own empirical code.
///
/// Both sides carry a header of `h · ceil(log2(N+K+1))` bits in the `_hdr` columns.
pub fn huffman_compare(
    ctx: &ShapingContext,
    mode: CompareMode,
    seed: u64,
    budget: u64,
) -> Result<HuffmanComparison> {
    let params = ctx.params();
    let h = params.h;
    let (count, label) = match mode {
        CompareMode::Exhaustive => {
            let total = ctx.shaped_size();
            match total.to_u64().filter(|&t| t <= budget) {
                Some(t) => (t, "exhaustive"),
                None => {
                    return Err(Error::BudgetExceeded {
                        what: "exhaustive Huffman comparison",
                        required: total.to_string(),
                        budget,
                    })
                }
            }
        }
        CompareMode::Sample(0) => {
            return Err(Error::Domain("sample size must be at least 1".into()))
        }
        CompareMode::Sample(n) if n > budget => {
            return Err(Error::BudgetExceeded {
                what: "sampled Huffman comparison",
                required: n.to_string(),
                budget,
            })
        }
        CompareMode::Sample(n) => (n, "sample"),
    };

    let header = header_bits(h, params.extended_len());
    let rows: Vec<HuffmanRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let rank = match mode {
                CompareMode::Exhaustive => BigUint::from(i),
                CompareMode::Sample(_) => {
                    let stream = KeyedStream::new(seed, i);
                    (0..params.n as u64).fold(BigUint::zero(), |acc, d| {
                        acc * h as u64 + stream.below_at(d, h as u64)
                    })
                }
            };
            let x = global_unrank(&rank, ctx.source_table()).expect("rank below h^N");
            let y = ctx.shape(&x).expect("valid source");
            let bits_plain = self_coded_bits(&x, h);
            let bits_shaped = self_coded_bits(&y, h);
            HuffmanRow {
                x: x.to_string(),
                y: y.to_string(),
                bits_plain,
                bits_shaped,
                bits_plain_hdr: bits_plain + header,
                bits_shaped_hdr: bits_shaped + header,
            }
        })
        .collect();

    let mean = |f: fn(&HuffmanRow) -> u64| rows.iter().map(|r| f(r) as f64).sum::<f64>() / count as f64;
    Ok(HuffmanComparison {
        h,
        n: params.n,
        k: params.k,
        mode: label.to_string(),
        mean_bits_plain: mean(|r| r.bits_plain),
        mean_bits_shaped: mean(|r| r.bits_shaped),
        mean_bits_plain_hdr: mean(|r| r.bits_plain_hdr),
        mean_bits_shaped_hdr: mean(|r| r.bits_shaped_hdr),
        rows,
    })
}
