//! The parity walk on `B^m`: every step flips one uniformly random bit,
//! equivalently drops a ball into one of `m` bins. Only the number `j` of
//! odd bins matters, so the DP runs on `j`: `j -> j-1` with probability
//! `j/m` and `j -> j+1` with probability `(m-j)/m`.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::line::csv_err;
use super::{check_budget, rational};
use crate::error::{input, Result};

/// Distribution of the odd-bin count after `t` flips from all-even,
/// stored as sequence counts over `m^t`.
#[derive(Clone, Debug)]
pub struct ParityWalkTable {
    pub m: usize,
    pub horizon: usize,
    /// `counts[t][j]`.
    counts: Vec<Vec<BigUint>>,
}

pub fn parity_dp(m: usize, horizon: usize) -> Result<ParityWalkTable> {
    if m == 0 {
        return input("parity walk needs m >= 1");
    }
    check_budget(
        "exact parity table",
        (m as u128 + 1) * (horizon as u128 + 1),
    )?;
    let mut first = vec![BigUint::zero(); m + 1];
    first[0] = BigUint::one();
    let mut counts = vec![first];
    for t in 1..=horizon {
        let prev = &counts[t - 1];
        let mut next = vec![BigUint::zero(); m + 1];
        for j in 0..=m {
            if prev[j].is_zero() {
                continue;
            }
            if j > 0 {
                next[j - 1] += &prev[j] * BigUint::from(j);
            }
            if j < m {
                next[j + 1] += &prev[j] * BigUint::from(m - j);
            }
        }
        counts.push(next);
    }
    Ok(ParityWalkTable { m, horizon, counts })
}

impl ParityWalkTable {
    fn den(&self, t: usize) -> BigUint {
        BigUint::from(self.m).pow(t as u32)
    }

    /// Probability that exactly `j` bins are odd after `t` flips.
    pub fn odd_count(&self, t: usize, j: usize) -> BigRational {
        rational(self.counts[t][j].clone(), self.den(t))
    }

    /// `p^(t)[b]` for any parity vector `b` with `j` ones.
    pub fn vector(&self, t: usize, j: usize) -> BigRational {
        let c: BigUint = binomial(BigUint::from(self.m), BigUint::from(j));
        rational(self.counts[t][j].clone(), self.den(t) * c)
    }

    /// `p^(t)[0, ..., 0]`.
    pub fn zero(&self, t: usize) -> BigRational {
        self.odd_count(t, 0)
    }

    /// `max_b p^(t)[b]`.
    pub fn max_vector(&self, t: usize) -> BigRational {
        (0..=self.m)
            .map(|j| self.vector(t, j))
            .max()
            .expect("m >= 1")
    }

    pub fn total(&self, t: usize) -> BigRational {
        let s: BigUint = self.counts[t].iter().sum();
        rational(s, self.den(t))
    }

    /// Rows `m,t,j,numerator,denominator` of the odd-count distribution.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["m", "t", "j", "numerator", "denominator"])
            .map_err(csv_err)?;
        for t in 0..=self.horizon {
            for j in 0..=self.m {
                let p = self.odd_count(t, j);
                w.write_record([
                    self.m.to_string(),
                    t.to_string(),
                    j.to_string(),
                    p.numer().to_string(),
                    p.denom().to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `p^(t)[0^m] = 2^-m Σ_i C(m,i) (1 - 2i/m)^t`, evaluated exactly.
pub fn parity_closed_form(m: usize, t: usize) -> Result<BigRational> {
    if m == 0 {
        return input("parity walk needs m >= 1");
    }
    let mut sum = BigInt::zero();
    for i in 0..=m {
        let c: BigInt = binomial(BigInt::from(m), BigInt::from(i));
        sum += c * BigInt::from(m as i64 - 2 * i as i64).pow(t as u32);
    }
    let den = (BigInt::one() << m) * BigInt::from(m).pow(t as u32);
    Ok(BigRational::new(sum, den))
}

/// Which recursion identities for `p_m^(t)[0...0]` hold exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub m: usize,
    pub t: usize,
    /// `P_m(t)[0] = (1/m) P_m(t-2)[0] + ((m-1)/m) P_m(t-2)[1,1,0..]`.
    pub derivation: bool,
    /// `P_m(t-2)[0] - P_m(t-2)[1,1,0..] = ((m-2)/m)^(t-2) P_{m-2}(t-2)[0]`.
    pub difference: bool,
    /// `P_m(t)[0] = (1/m) P_m(t-2)[0] - ((m-1)/m)((m-2)/m)^(t-2) P_{m-2}(t-2)[0]`.
    pub displayed: bool,
    /// `P_m(t)[0] = P_m(t-2)[0] - ((m-1)/m)((m-2)/m)^(t-2) P_{m-2}(t-2)[0]`,
    /// which is what the first two identities combine to.
    pub corrected: bool,
}

pub fn parity_recursion_check(m: usize, t: usize) -> Result<RecursionCheck> {
    if m < 3 || t < 4 || t % 2 == 1 {
        return input(format!(
            "recursion check needs m >= 3 and even t >= 4, got m = {m}, t = {t}"
        ));
    }
    let big = parity_dp(m, t)?;
    let small = parity_dp(m - 2, t - 2)?;
    let mr = |a: i64, b: i64| rational(BigInt::from(a), BigInt::from(b));
    let m_i = m as i64;
    let lhs = big.zero(t);
    let p0 = big.zero(t - 2);
    let p11 = big.vector(t - 2, 2);
    let q0 = small.zero(t - 2);
    let ratio = mr(m_i - 2, m_i).pow(t as i32 - 2);
    let tail = mr(m_i - 1, m_i) * &ratio * &q0;

    let derivation = lhs == mr(1, m_i) * &p0 + mr(m_i - 1, m_i) * &p11;
    let difference = &p0 - &p11 == &ratio * &q0;
    let displayed = lhs == mr(1, m_i) * &p0 - &tail;
    let corrected = lhs == &p0 - &tail;
    Ok(RecursionCheck {
        m,
        t,
        derivation,
        difference,
        displayed,
        corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        rational(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn base_cases() {
        for m in 1..=16 {
            let tab = parity_dp(m, 2).unwrap();
            assert!(tab.zero(1).is_zero());
            assert_eq!(tab.zero(2), r(1, m as i64));
        }
        assert_eq!(parity_dp(2, 4).unwrap().zero(4), r(1, 2));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(parity_closed_form(2, 2).unwrap(), r(1, 2));
        for m in 1..8 {
            for t in (1..15).step_by(2) {
                assert!(parity_closed_form(m, t).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn distribution_is_stochastic() {
        let tab = parity_dp(7, 20).unwrap();
        for t in 0..=20 {
            assert!(tab.total(t).is_one());
        }
    }

    /// Brute-force oracle: enumerate all `m^t` flip sequences.
    #[test]
    fn dp_matches_enumeration() {
        for m in 1..=4usize {
            for t in 0..=6u32 {
                let tab = parity_dp(m, t as usize).unwrap();
                let mut hits = vec![0u64; 1 << m];
                for seq in 0..(m as u64).pow(t) {
                    let mut s = seq;
                    let mut b = 0usize;
                    for _ in 0..t {
                        b ^= 1 << (s % m as u64);
                        s /= m as u64;
                    }
                    hits[b] += 1;
                }
                let total = (m as u64).pow(t);
                for (b, &h) in hits.iter().enumerate() {
                    let j = b.count_ones() as usize;
                    assert_eq!(tab.vector(t as usize, j), r(h as i64, total as i64));
                }
            }
        }
    }

    #[test]
    fn recursion_forms() {
        let c = parity_recursion_check(5, 6).unwrap();
        assert!(c.derivation && c.difference && c.corrected);
        assert!(!c.displayed);
        assert!(parity_recursion_check(2, 4).is_err());
        assert!(parity_recursion_check(4, 5).is_err());
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        parity_dp(2, 2).unwrap().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("\n2,2,0,1,2\n"), "{s}");
    }
}
