//! Grid sweep of shaped-set statistics.

use rayon::prelude::*;

use crate::error::Error;
use crate::shaping::{DeltaReport, ShapingContext, ShapingParams};
use crate::typeclass::DEFAULT_CLASS_BUDGET;

/// Magnitudes below this are reported with sign `zero`.
pub const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub h: usize,
    pub n: usize,
    pub k: usize,
    pub result: Result<DeltaReport, Error>,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "h,N,K,avg_NH0_X,avg_N2H0_Y,delta,sign";

    /// `positive`, `negative` or `zero`, or `error:<reason>` for a failed row.
    pub fn sign(&self) -> String {
        match &self.result {
            Ok(r) if r.delta > SIGN_TOLERANCE => "positive".into(),
            Ok(r) if r.delta < -SIGN_TOLERANCE => "negative".into(),
            Ok(_) => "zero".into(),
            Err(Error::BudgetExceeded { .. }) => "error:budget-exceeded".into(),
            Err(_) => "error:invalid-parameters".into(),
        }
    }

    pub fn csv_row(&self) -> String {
        match &self.result {
            Ok(r) => format!("{},{}", r.csv_row(), self.sign()),
            Err(_) => format!("{},{},{},,,,{}", self.h, self.n, self.k, self.sign()),
        }
    }
}

/// Shaped-set statistics for every `(h, N, K)` in the grid, in grid order
/// (`h` outermost, `K` innermost). Failing points become error rows.
pub fn sweep_delta(hs: &[usize], ns: &[usize], ks: &[usize], class_budget: u64) -> Vec<SweepRow> {
    let grid: Vec<(usize, usize, usize)> = hs
        .iter()
        .flat_map(|&h| ns.iter().flat_map(move |&n| ks.iter().map(move |&k| (h, n, k))))
        .collect();
    grid.into_par_iter()
        .map(|(h, n, k)| SweepRow {
            h,
            n,
            k,
            result: ShapingParams::new(h, n, k)
                .and_then(|p| ShapingContext::with_budget(p, class_budget))
                .map(|ctx| ctx.stats()),
        })
        .collect()
}

/// [`sweep_delta`] with the default class budget.
pub fn sweep_delta_default(hs: &[usize], ns: &[usize], ks: &[usize]) -> Vec<SweepRow> {
    sweep_delta(hs, ns, ks, DEFAULT_CLASS_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid() {
        let rows = sweep_delta_default(&[3], &[1, 2], &[1]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].csv_row(), "3,1,1,0.000000000,0.000000000,0.000000000,zero");
        assert_eq!(rows[1].sign(), "negative");
        assert!(rows[1].csv_row().starts_with("3,2,1,1.333333333,1.836591668,-0.503258335"));
        let rows = sweep_delta_default(&[2], &[2], &[1]);
        assert!((rows[0].result.as_ref().unwrap().delta + 0.377444).abs() < 1e-6);
        let rows = sweep_delta_default(&[3], &[3], &[1]);
        assert_eq!(rows[0].sign(), "positive");
    }

    #[test]
    fn empty_grid_and_error_rows() {
        assert!(sweep_delta_default(&[], &[1, 2], &[1]).is_empty());
        let rows = sweep_delta(&[3], &[20], &[1], 100);
        assert_eq!(rows[0].csv_row(), "3,20,1,,,,error:budget-exceeded");
        let rows = sweep_delta_default(&[1], &[2], &[1]);
        assert_eq!(rows[0].sign(), "error:invalid-parameters");
    }

    #[test]
    fn grid_order_is_preserved() {
        let rows = sweep_delta_default(&[2, 3], &[1, 3], &[0, 1]);
        let keys: Vec<_> = rows.iter().map(|r| (r.h, r.n, r.k)).collect();
        assert_eq!(
            keys,
            vec![(2, 1, 0), (2, 1, 1), (2, 3, 0), (2, 3, 1), (3, 1, 0), (3, 1, 1), (3, 3, 0), (3, 3, 1)]
        );
        for r in rows.iter().filter(|r| r.k == 0) {
            assert_eq!(r.sign(), "zero");
        }
    }
}
