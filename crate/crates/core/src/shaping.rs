//! The shaping transform: a rank-preserving bijection from `X^N` onto the `h^N`
//! lowest-entropy sequences of length `N+K`, its inverse, and the membership test
//! that turns the shaped set into an error detector.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::codec::{class_and_rank, global_rank, global_unrank};
use crate::entropy::{Alphabet, Sequence};
use crate::error::{Error, Result};
use crate::typeclass::{ClassTable, Cutoff, DEFAULT_CLASS_BUDGET};

/// Alphabet size `h`, source length `N` and shaping order `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ShapingParams {
    pub h: usize,
    pub n: usize,
    pub k: usize,
}

impl ShapingParams {
    pub fn new(h: usize, n: usize, k: usize) -> Result<Self> {
        Alphabet::new(h)?;
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(ShapingParams { h, n, k })
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.h).expect("validated on construction")
    }

    /// Codeword length `N+K`.
    #[inline]
    pub fn extended_len(&self) -> usize {
        self.n + self.k
    }

    /// `h^N`, the number of codewords.
    pub fn shaped_size(&self) -> BigUint {
        BigUint::from(self.h).pow(self.n as u32)
    }
}

/// Class tables at both lengths plus the cutoff that delimits the shaped set.
///
/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone)]
pub struct ShapingContext {
    params: ShapingParams,
    table_n: ClassTable,
    table_n2: ClassTable,
    cut: Cutoff,
    shaped_size: BigUint,
}

impl ShapingContext {
    pub fn new(params: ShapingParams) -> Result<Self> {
        Self::with_budget(params, DEFAULT_CLASS_BUDGET)
    }

    pub fn with_budget(params: ShapingParams, class_budget: u64) -> Result<Self> {
        let alphabet = params.alphabet();
        let table_n = ClassTable::build_with_budget(alphabet, params.n, class_budget)?;
        let table_n2 = if params.k == 0 {
            table_n.clone()
        } else {
            ClassTable::build_with_budget(alphabet, params.extended_len(), class_budget)?
        };
        let shaped_size = params.shaped_size();
        let cut = table_n2.cutoff(&shaped_size)?;
        Ok(ShapingContext {
            params,
            table_n,
            table_n2,
            cut,
            shaped_size,
        })
    }

    #[inline]
    pub fn params(&self) -> ShapingParams {
        self.params
    }

    #[inline]
    pub fn source_table(&self) -> &ClassTable {
        &self.table_n
    }

    #[inline]
    pub fn codeword_table(&self) -> &ClassTable {
        &self.table_n2
    }

    #[inline]
    pub fn cutoff(&self) -> &Cutoff {
        &self.cut
    }

    #[inline]
    pub fn shaped_size(&self) -> &BigUint {
        &self.shaped_size
    }

    /// Maps a length-`N` sequence to its length-`N+K` codeword.
    pub fn shape(&self, x: &Sequence) -> Result<Sequence> {
        let rank = global_rank(x, &self.table_n)?;
        global_unrank(&rank, &self.table_n2)
    }

    /// Inverts [`shape`](Self::shape). A non-member is reported as [`Error::NotACodeword`].
    pub fn unshape(&self, y: &Sequence) -> Result<Sequence> {
        let rank = global_rank(y, &self.table_n2)?;
        if rank >= self.shaped_size {
            return Err(Error::NotACodeword);
        }
        global_unrank(&rank, &self.table_n)
    }

    /// Whether `y` belongs to the shaped set.
    pub fn is_member(&self, y: &Sequence) -> Result<bool> {
        let (class, rank) = class_and_rank(y, &self.table_n2)?;
        Ok(class < self.cut.class_index
            || (class == self.cut.class_index && rank < self.cut.remainder))
    }

    /// Exact averages of `N·h0` over `X^N` and `(N+K)·h0` over the shaped set,
    /// under the uniform distribution, computed class by class.
    pub fn stats(&self) -> DeltaReport {
        let ShapingParams { h, n, k } = self.params;
        let n2 = self.params.extended_len();
        let total = &self.shaped_size;

        let avg_x = self
            .table_n
            .records()
            .iter()
            .map(|r| ratio(r.size(), total) * n as f64 * r.h0())
            .sum::<f64>();

        let records = self.table_n2.records();
        let mut avg_y = records[..self.cut.class_index]
            .iter()
            .map(|r| ratio(r.size(), total) * n2 as f64 * r.h0())
            .sum::<f64>();
        if !self.cut.remainder.is_zero() {
            let split = &records[self.cut.class_index];
            avg_y += ratio(&self.cut.remainder, total) * n2 as f64 * split.h0();
        }

        DeltaReport {
            h,
            n,
            k,
            avg_nh0_x: avg_x,
            avg_n2h0_y: avg_y,
            delta: avg_x - avg_y,
        }
    }
}

/// `num / den` as binary64, for integers far beyond the f64 range.
pub(crate) fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(64);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Builds a context for `params` and returns its shaped-set statistics.
pub fn shaped_set_stats(params: ShapingParams) -> Result<DeltaReport> {
    Ok(ShapingContext::new(params)?.stats())
}

/// Average zero-order information of the source set against the shaped set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaReport {
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "avg_NH0_X")]
    pub avg_nh0_x: f64,
    #[serde(rename = "avg_N2H0_Y")]
    pub avg_n2h0_y: f64,
    pub delta: f64,
}

impl DeltaReport {
    pub const CSV_HEADER: &'static str = "h,N,K,avg_NH0_X,avg_N2H0_Y,delta";

    /// One CSV row, reals printed with 9 decimals.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.9},{:.9},{:.9}",
            self.h, self.n, self.k, self.avg_nh0_x, self.avg_n2h0_y, self.delta
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(h: usize, n: usize, k: usize) -> ShapingContext {
        ShapingContext::new(ShapingParams::new(h, n, k).unwrap()).unwrap()
    }

    fn seq(text: &str, h: usize) -> Sequence {
        Sequence::parse(text, Alphabet::new(h).unwrap()).unwrap()
    }

    #[test]
    fn shape_examples() {
        assert_eq!(ctx(3, 1, 1).shape(&seq("0", 3)).unwrap().to_string(), "00");
        let c = ctx(2, 2, 1);
        assert_eq!(c.shape(&seq("01", 2)).unwrap().to_string(), "001");
        assert_eq!(c.shape(&seq("10", 2)).unwrap().to_string(), "010");
        assert!(matches!(c.shape(&seq("0", 2)), Err(Error::InvalidLength { .. })));
        assert!(matches!(c.shape(&seq("02", 3)), Err(Error::InvalidSymbol { .. })));
    }

    #[test]
    fn unshape_examples() {
        assert_eq!(ctx(3, 1, 1).unshape(&seq("22", 3)).unwrap().to_string(), "2");
        let c = ctx(2, 2, 1);
        assert_eq!(c.unshape(&seq("100", 2)), Err(Error::NotACodeword));
        assert_eq!(c.unshape(&seq("010", 2)).unwrap().to_string(), "10");
    }

    #[test]
    fn membership_examples() {
        let c = ctx(3, 1, 1);
        assert!(!c.is_member(&seq("01", 3)).unwrap());
        assert!(c.is_member(&seq("11", 3)).unwrap());
        let identity = ctx(3, 3, 0);
        for r in 0..27u32 {
            let y = global_unrank(&BigUint::from(r), identity.codeword_table()).unwrap();
            assert!(identity.is_member(&y).unwrap());
            assert_eq!(identity.shape(&y).unwrap(), y);
        }
    }

    #[test]
    fn stats_examples() {
        let r = ctx(3, 1, 1).stats();
        assert_eq!((r.avg_nh0_x, r.avg_n2h0_y, r.delta), (0.0, 0.0, 0.0));
        let r = ctx(3, 2, 1).stats();
        assert!((r.avg_nh0_x - 1.333333).abs() < 1e-6);
        assert!((r.avg_n2h0_y - 1.836592).abs() < 1e-6);
        assert!((r.delta + 0.503259).abs() < 1e-6);
        let r = ctx(2, 2, 1).stats();
        assert!((r.avg_nh0_x - 1.0).abs() < 1e-12);
        assert!((r.avg_n2h0_y - 1.377444).abs() < 1e-6);
        assert!((r.delta + 0.377444).abs() < 1e-6);
        assert_eq!(r.csv_row(), "2,2,1,1.000000000,1.377443751,-0.377443751");
    }

    #[test]
    fn params_validation() {
        assert_eq!(ShapingParams::new(3, 0, 1), Err(Error::Empty));
        assert_eq!(ShapingParams::new(1, 2, 1), Err(Error::InvalidAlphabet(1)));
        assert!(matches!(
            ShapingContext::with_budget(ShapingParams::new(3, 10, 1).unwrap(), 60),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn ratio_handles_huge_integers() {
        let den = BigUint::from(36u32).pow(400);
        let num = &den / 4u32;
        assert!((ratio(&num, &den) - 0.25).abs() < 1e-15);
        assert_eq!(ratio(&BigUint::from(1u32), &BigUint::from(3u32)), 1.0 / 3.0);
    }

    #[test]
    fn bijection_and_order_preservation() {
        for h in 2..=3usize {
            for n in 1..=6usize {
                for k in 1..=2usize {
                    let c = ctx(h, n, k);
                    let mut prev: Option<BigUint> = None;
                    for r in 0..h.pow(n as u32) as u64 {
                        let x = global_unrank(&BigUint::from(r), c.source_table()).unwrap();
                        let y = c.shape(&x).unwrap();
                        assert_eq!(y.len(), n + k);
                        assert!(c.is_member(&y).unwrap());
                        assert_eq!(c.unshape(&y).unwrap(), x);
                        let ry = global_rank(&y, c.codeword_table()).unwrap();
                        if let Some(p) = prev {
                            assert!(ry > p);
                        }
                        prev = Some(ry);
                    }
                }
            }
        }
    }
}
