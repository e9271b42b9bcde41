use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::weight::Weight;

/// Percentile `q` (in [0, 1]) of `values` by linear interpolation between
/// order statistics, computed exactly. `None` on an empty slice.
pub fn percentile(values: &[Weight], q: &Weight) -> Option<Weight> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    let h = Weight::from(sorted.len() - 1) * q;
    let lo = h.as_big().floor().to_integer();
    let lo = usize::try_from(lo).ok()?.min(sorted.len() - 1);
    let frac = &h - &Weight::from(lo);
    let hi = (lo + 1).min(sorted.len() - 1);
    Some(&sorted[lo] + &(&frac * &(&sorted[hi] - &sorted[lo])))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: Weight,
    pub p_value: f64,
}

/// Pearson chi-square test of independence on a 2×2 table of weighted
/// counts, one degree of freedom, no continuity correction.
pub fn chi_square_2x2(table: &[[Weight; 2]; 2]) -> Result<ChiSquare> {
    if table.iter().flatten().any(Weight::is_negative) {
        return Err(Error::InvalidArgument("negative count".into()));
    }
    let [[a, b], [c, d]] = table;
    let rows = [a + b, c + d];
    let cols = [a + c, b + d];
    if rows.iter().chain(&cols).any(Weight::is_zero) {
        return Err(Error::InvalidArgument("a marginal of the table is zero".into()));
    }
    let n = &rows[0] + &rows[1];
    let diff = &(a * d) - &(b * c);
    let statistic = &n * &(&diff * &diff) / (&(&rows[0] * &rows[1]) * &(&cols[0] * &cols[1]));
    let dist = ChiSquared::new(1.0).expect("one degree of freedom");
    let p_value = dist.sf(statistic.to_f64());
    Ok(ChiSquare { statistic, p_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erfc;

    fn table(v: [[u64; 2]; 2]) -> [[Weight; 2]; 2] {
        v.map(|r| r.map(Weight::from))
    }

    #[test]
    fn proportional_rows() {
        let r = chi_square_2x2(&table([[10, 20], [5, 10]])).unwrap();
        assert!(r.statistic.is_zero());
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn textbook_value() {
        let r = chi_square_2x2(&table([[10, 20], [20, 10]])).unwrap();
        assert_eq!(r.statistic, Weight::from_ratio(20, 3));
        // With one degree of freedom the survival function is erfc(sqrt(x/2)).
        let oracle = erfc((20.0f64 / 3.0 / 2.0).sqrt());
        assert!((r.p_value - oracle).abs() < 1e-12, "{} vs {}", r.p_value, oracle);
        assert!((r.p_value - 0.009823).abs() < 1e-5);
    }

    #[test]
    fn zero_marginal() {
        assert!(chi_square_2x2(&table([[0, 0], [3, 4]])).is_err());
        assert!(chi_square_2x2(&table([[0, 2], [0, 4]])).is_err());
    }

    #[test]
    fn percentiles() {
        let v: Vec<Weight> = [3u64, 1, 4, 1, 5].iter().map(|&x| Weight::from(x)).collect();
        assert_eq!(percentile(&v, &Weight::from_ratio(1, 2)), Some(Weight::from(3u64)));
        // Sorted 1,1,3,4,5: position 0.8 lies between 1 and 1, position 3.2
        // between 4 and 5.
        assert_eq!(percentile(&v, &Weight::from_ratio(1, 5)), Some(Weight::one()));
        assert_eq!(percentile(&v, &Weight::from_ratio(4, 5)), Some(Weight::from_ratio(21, 5)));
        assert_eq!(percentile(&v, &Weight::one()), Some(Weight::from(5u64)));
        assert_eq!(percentile(&[], &Weight::one()), None);
    }
}
