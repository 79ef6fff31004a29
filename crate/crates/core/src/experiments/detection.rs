//! Error-detection studies: Monte Carlo over the substitution channel and exact
//! enumeration over fixed-weight error patterns, with a mod-`h` checksum baseline.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::global_unrank;
use crate::entropy::{Alphabet, Sequence};
use crate::error::{Error, Result};
use crate::experiments::channel::{corrupt_with, ChannelSpec};
use crate::experiments::rng::KeyedStream;
use crate::shaping::ShapingContext;
use crate::typeclass::binomial;

/// Upper bound on `(codeword, pattern)` pairs an exact study may enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

// Keeps source draws independent of channel draws for the same (seed, trial).
const SOURCE_DOMAIN: u64 = 0x5eed_0f50_u64 << 24;

const TRIAL_CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Tally {
    clean: u64,
    detected: u64,
    undetected: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            clean: self.clean + o.clean,
            detected: self.detected + o.detected,
            undetected: self.undetected + o.undetected,
        }
    }
}

/// Outcome counts of a simulated detection run.
///
/// Rates are fractions of the corrupted trials (`detected + undetected`); both are 0
/// when nothing was corrupted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub clean: u64,
    pub detected: u64,
    pub undetected: u64,
    pub detected_rate: f64,
    pub undetected_rate: f64,
}

impl DetectionReport {
    pub const CSV_HEADER: &'static str =
        "h,N,K,p,trials,seed,clean,detected,undetected,detected_rate,undetected_rate";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.9},{:.9}",
            self.h,
            self.n,
            self.k,
            self.p,
            self.trials,
            self.seed,
            self.clean,
            self.detected,
            self.undetected,
            self.detected_rate,
            self.undetected_rate
        )
    }
}

/// Draws a uniform source sequence for `trial`: a uniform rank in `[0, h^N)` built from
/// `N` base-`h` digits, then unranked.
fn draw_source(ctx: &ShapingContext, seed: u64, trial: u64) -> Sequence {
    let params = ctx.params();
    let stream = KeyedStream::new(seed ^ SOURCE_DOMAIN, trial);
    let h = params.h as u64;
    let mut rank = BigUint::zero();
    for i in 0..params.n as u64 {
        rank = rank * h + stream.below_at(i, h);
    }
    global_unrank(&rank, ctx.source_table()).expect("rank below h^N")
}

fn run_trial(ctx: &ShapingContext, spec: ChannelSpec, seed: u64, trial: u64) -> Tally {
    let alphabet = ctx.params().alphabet();
    let x = draw_source(ctx, seed, trial);
    let y = ctx.shape(&x).expect("source draws are valid");
    let received = corrupt_with(&y, alphabet, spec, &KeyedStream::new(seed, trial));
    if received == y {
        Tally { clean: 1, ..Tally::default() }
    } else if !ctx.is_member(&received).expect("length preserved") {
        Tally { detected: 1, ..Tally::default() }
    } else {
        Tally { undetected: 1, ..Tally::default() }
    }
}

/// Monte Carlo detection study over `trials` uniform source sequences.
///
/// Trials run in parallel on the current rayon pool; the report is identical for any
/// pool size.
pub fn simulate_detection(
    ctx: &ShapingContext,
    spec: ChannelSpec,
    trials: u64,
    seed: u64,
) -> DetectionReport {
    let chunks = trials.div_ceil(TRIAL_CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * TRIAL_CHUNK).min(trials);
            (c * TRIAL_CHUNK..end)
                .map(|t| run_trial(ctx, spec, seed, t))
                .fold(Tally::default(), |a, b| a + b)
        })
        .reduce(Tally::default, |a, b| a + b);

    let corrupted = tally.detected + tally.undetected;
    let rate = |x: u64| if corrupted == 0 { 0.0 } else { x as f64 / corrupted as f64 };
    let params = ctx.params();
    DetectionReport {
        h: params.h,
        n: params.n,
        k: params.k,
        p: spec.p(),
        trials,
        seed,
        clean: tally.clean,
        detected: tally.detected,
        undetected: tally.undetected,
        detected_rate: rate(tally.detected),
        undetected_rate: rate(tally.undetected),
    }
}

/// Row of the exact-detection CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRow {
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub weight: usize,
    pub detected_fraction: f64,
    pub baseline_detected_fraction: f64,
}

impl ExactRow {
    pub const CSV_HEADER: &'static str =
        "h,N,K,weight,detected_fraction,baseline_detected_fraction";

    pub fn compute(ctx: &ShapingContext, weight: usize, budget: u64) -> Result<Self> {
        let params = ctx.params();
        Ok(ExactRow {
            h: params.h,
            n: params.n,
            k: params.k,
            weight,
            detected_fraction: exact_detection_with_budget(ctx, weight, budget)?,
            baseline_detected_fraction: parity_baseline_detection_with_budget(
                params.alphabet(),
                params.n,
                weight,
                budget,
            )?,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.9},{:.9}",
            self.h, self.n, self.k, self.weight, self.detected_fraction, self.baseline_detected_fraction
        )
    }
}

/// Checks the pair count `codewords · C(len, weight) · (h−1)^weight` against `budget`.
fn pattern_budget(h: usize, codewords: &BigUint, len: usize, weight: usize, budget: u64) -> Result<u64> {
    if weight > len {
        return Err(Error::Domain(format!(
            "error weight {weight} exceeds codeword length {len}"
        )));
    }
    let pairs = codewords * binomial(len as u64, weight as u64) * BigUint::from(h - 1).pow(weight as u32);
    match pairs.to_u64().filter(|&p| p <= budget) {
        Some(p) => Ok(p),
        None => Err(Error::BudgetExceeded {
            what: "exact detection enumeration",
            required: pairs.to_string(),
            budget,
        }),
    }
}

/// Calls `visit` with every corruption of `word` by exactly `weight` substitutions.
///
/// A substitution at position `i` adds an offset in `1..h` modulo `h`, which reaches
/// each of the other `h − 1` symbols once.
fn for_each_pattern(word: &[u8], h: usize, weight: usize, mut visit: impl FnMut(&[u8])) {
    fn place(
        word: &[u8],
        scratch: &mut [u8],
        h: usize,
        start: usize,
        left: usize,
        visit: &mut dyn FnMut(&[u8]),
    ) {
        if left == 0 {
            visit(scratch);
            return;
        }
        for pos in start..=word.len() - left {
            for offset in 1..h {
                scratch[pos] = ((word[pos] as usize + offset) % h) as u8;
                place(word, scratch, h, pos + 1, left - 1, visit);
            }
            scratch[pos] = word[pos];
        }
    }
    debug_assert!(weight <= word.len());
    let mut scratch = word.to_vec();
    place(word, &mut scratch, h, 0, weight, &mut visit);
}

/// Fraction of `(codeword, weight-w error pattern)` pairs whose corruption is not a
/// codeword, by exhaustive enumeration.
pub fn exact_detection(ctx: &ShapingContext, weight: usize) -> Result<f64> {
    exact_detection_with_budget(ctx, weight, DEFAULT_ENUMERATION_BUDGET)
}

pub fn exact_detection_with_budget(ctx: &ShapingContext, weight: usize, budget: u64) -> Result<f64> {
    let params = ctx.params();
    let len = params.extended_len();
    let pairs = pattern_budget(params.h, ctx.shaped_size(), len, weight, budget)?;
    if weight == 0 {
        return Ok(0.0);
    }
    let codewords = ctx.shaped_size().to_u64().expect("bounded by budget");
    let detected: u64 = (0..codewords)
        .into_par_iter()
        .map(|r| {
            let y = global_unrank(&BigUint::from(r), ctx.codeword_table()).expect("r < h^N");
            let mut detected = 0u64;
            for_each_pattern(y.symbols(), params.h, weight, |z| {
                let z = Sequence::from_raw(z.to_vec());
                if !ctx.is_member(&z).expect("length preserved") {
                    detected += 1;
                }
            });
            detected
        })
        .sum();
    Ok(detected as f64 / pairs as f64)
}

/// Detection fraction of the single mod-`h` checksum symbol code `x ‖ (Σ x_i mod h)`
/// of length `N + 1`, by exhaustive enumeration.
pub fn parity_baseline_detection(alphabet: Alphabet, n: usize, weight: usize) -> Result<f64> {
    parity_baseline_detection_with_budget(alphabet, n, weight, DEFAULT_ENUMERATION_BUDGET)
}

pub fn parity_baseline_detection_with_budget(
    alphabet: Alphabet,
    n: usize,
    weight: usize,
    budget: u64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let h = alphabet.size();
    let codewords = BigUint::from(h).pow(n as u32);
    let pairs = pattern_budget(h, &codewords, n + 1, weight, budget)?;
    if weight == 0 {
        return Ok(0.0);
    }
    let codewords = codewords.to_u64().expect("bounded by budget");
    let checksum = |s: &[u8]| s.iter().map(|&x| x as usize).sum::<usize>() % h;
    let detected: u64 = (0..codewords)
        .into_par_iter()
        .map(|mut index| {
            let mut word = vec![0u8; n + 1];
            for slot in word[..n].iter_mut().rev() {
                *slot = (index % h as u64) as u8;
                index /= h as u64;
            }
            word[n] = checksum(&word[..n]) as u8;
            let mut detected = 0u64;
            for_each_pattern(&word, h, weight, |z| {
                if checksum(&z[..n]) != z[n] as usize {
                    detected += 1;
                }
            });
            detected
        })
        .sum();
    Ok(detected as f64 / pairs as f64)
}
