//! The barrier line walk: on points `0..n`, step to `max(0, i-1)` or
//! `min(n-1, i+1)` with probability 1/2 each.
//!
//! Points are 0-based here; point `i` is vertex `i + 1` of `line(n)`.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{check_budget, rational};
use crate::error::{input, Result};

/// Exact `p_ij^(t)` for `0 <= t <= horizon`, stored as path counts over `2^t`.
#[derive(Clone, Debug)]
pub struct LineWalkTable {
    pub n: usize,
    pub horizon: usize,
    /// `counts[t][i * n + j]`.
    counts: Vec<Vec<BigUint>>,
}

fn step_counts(n: usize, prev: &[BigUint]) -> Vec<BigUint> {
    let mut next = vec![BigUint::default(); n * n];
    for i in 0..n {
        for k in 0..n {
            let c = &prev[i * n + k];
            if c.bits() == 0 {
                continue;
            }
            next[i * n + k.saturating_sub(1)] += c;
            next[i * n + (k + 1).min(n - 1)] += c;
        }
    }
    next
}

pub fn line_walk_dp(n: usize, horizon: usize) -> Result<LineWalkTable> {
    if n < 2 || horizon < 1 {
        return input(format!(
            "line walk needs n >= 2 and horizon >= 1, got {n}, {horizon}"
        ));
    }
    check_budget(
        "exact line-walk table",
        (n * n) as u128 * (horizon as u128 + 1),
    )?;
    let mut id = vec![BigUint::default(); n * n];
    for i in 0..n {
        id[i * n + i] = BigUint::from(1u32);
    }
    let mut counts = vec![id];
    for t in 1..=horizon {
        let next = step_counts(n, &counts[t - 1]);
        counts.push(next);
    }
    Ok(LineWalkTable { n, horizon, counts })
}

impl LineWalkTable {
    /// `p_ij^(t)` with 0-based points.
    pub fn p(&self, i: usize, j: usize, t: usize) -> BigRational {
        rational(
            self.counts[t][i * self.n + j].clone(),
            BigUint::from(1u32) << t,
        )
    }

    /// Sum of row `i` at time `t`; always 1.
    pub fn row_sum(&self, i: usize, t: usize) -> BigRational {
        let s: BigUint = self.counts[t][i * self.n..(i + 1) * self.n].iter().sum();
        rational(s, BigUint::from(1u32) << t)
    }

    /// `max_ij p_ij^(t)`.
    pub fn max_p(&self, t: usize) -> BigRational {
        let m = self.counts[t].iter().max().cloned().unwrap_or_default();
        rational(m, BigUint::from(1u32) << t)
    }

    /// Rows `n,t,i,j,numerator,denominator` (0-based points, `t >= 1`).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "t", "i", "j", "numerator", "denominator"])
            .map_err(csv_err)?;
        for t in 1..=self.horizon {
            for i in 0..self.n {
                for j in 0..self.n {
                    let p = self.p(i, j, t);
                    w.write_record([
                        self.n.to_string(),
                        t.to_string(),
                        i.to_string(),
                        j.to_string(),
                        p.numer().to_string(),
                        p.denom().to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(std::io::Error::other(e))
}

/// `max_ij p_ij^(t)` for `t = 1..=horizon` (entry `t - 1`), in `f64`.
///
/// Used for sweeps whose exact denominators `2^t` would be too large; every
/// operation is a halving or an addition of nonnegative terms, so the
/// relative error stays near `t` ulps.
pub fn line_max_profile(n: usize, horizon: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return input("line walk needs n >= 1");
    }
    let mut cur = vec![0.0f64; n * n];
    for i in 0..n {
        cur[i * n + i] = 1.0;
    }
    let mut next = vec![0.0f64; n * n];
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        next.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            let row = &cur[i * n..(i + 1) * n];
            let dst = &mut next[i * n..(i + 1) * n];
            for (k, &c) in row.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let h = 0.5 * c;
                dst[k.saturating_sub(1)] += h;
                dst[(k + 1).min(n - 1)] += h;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        out.push(cur.iter().cloned().fold(0.0, f64::max));
    }
    Ok(out)
}

/// A time at which `max_ij p_ij^(t)` went up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub n: usize,
    pub t: usize,
    pub before: f64,
    pub after: f64,
}

/// All `t` with `max p^(t+1) > max p^(t)` beyond relative tolerance `tol`.
pub fn max_monotonicity_violations(
    n: usize,
    profile: &[f64],
    tol: f64,
) -> Vec<MonotonicityViolation> {
    profile
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] * (1.0 + tol))
        .map(|(k, w)| MonotonicityViolation {
            n,
            t: k + 1,
            before: w[0],
            after: w[1],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::to_f64;
    use num_traits::One;

    #[test]
    fn hand_values() {
        let t2 = line_walk_dp(2, 3).unwrap();
        assert_eq!(t2.p(0, 0, 1), rational(1u32, 2u32));
        let t3 = line_walk_dp(3, 2).unwrap();
        assert_eq!(t3.p(1, 1, 2), rational(1u32, 2u32));
        assert_eq!(t3.p(0, 0, 2), rational(1u32, 2u32));
        assert_eq!(t3.p(0, 2, 2), rational(1u32, 4u32));
    }

    #[test]
    fn rows_sum_to_one_and_symmetry() {
        for n in 2..8 {
            let tab = line_walk_dp(n, 12).unwrap();
            for t in 0..=12 {
                for i in 0..n {
                    assert!(tab.row_sum(i, t).is_one());
                    for j in 0..n {
                        assert_eq!(tab.p(i, j, t), tab.p(n - 1 - i, n - 1 - j, t));
                    }
                }
            }
        }
    }

    #[test]
    fn float_profile_matches_exact() {
        let n = 9;
        let tab = line_walk_dp(n, 40).unwrap();
        let prof = line_max_profile(n, 40).unwrap();
        for t in 1..=40 {
            let exact = to_f64(&tab.max_p(t));
            assert!(
                (exact - prof[t - 1]).abs() <= 1e-15 * exact.max(1e-300),
                "t = {t}"
            );
        }
    }

    #[test]
    fn monotone_on_small_lines() {
        for n in 2..20 {
            let prof = line_max_profile(n, n * n).unwrap();
            assert!(
                max_monotonicity_violations(n, &prof, 1e-12).is_empty(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn csv_export() {
        let tab = line_walk_dp(2, 1).unwrap();
        let mut buf = Vec::new();
        tab.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(
            s.starts_with("n,t,i,j,numerator,denominator\n2,1,0,0,1,2\n"),
            "{s}"
        );
    }

    #[test]
    fn rejects_degenerate() {
        assert!(line_walk_dp(1, 3).is_err());
        assert!(line_walk_dp(3, 0).is_err());
    }
}
