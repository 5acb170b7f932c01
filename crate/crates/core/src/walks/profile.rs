//! `p_t` profiles: the largest probability of being at a given vertex
//! exactly `t` steps after being at another, over all vertex pairs and
//! start times.

use serde::{Deserialize, Serialize};

use super::{check_budget, line_max_profile, parity_dp, to_f64};
use crate::error::{input, Result};

/// Walks with a computable profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WalkKind {
    /// Single-bit flips on `B^m`.
    Hypercube { m: usize },
    /// Coordinate-cycling clamped walk on `[n]^m`.
    GridCycling { n: usize, m: usize },
    /// The barrier line walk on `n` points.
    Line { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PtProfile {
    pub walk: WalkKind,
    #[serde(rename = "T")]
    pub t_len: usize,
    /// `p_1, ..., p_T`.
    pub p: Vec<f64>,
}

/// Computes `p_1..p_T`.
///
/// For the hypercube, `p_t = max_b p^(t)[b]` from the exact parity DP. For
/// the cycling grid, a window of `t` steps starting after step `t1` moves
/// axis `i` a fixed number `s_i` of times, the axes evolve independently,
/// and the maximum factorizes into `Π_i max_jk p_jk^(s_i)` of the line walk;
/// all `m` residues of `t1` are tried.
pub fn pt_profile(walk: WalkKind, t_len: usize) -> Result<PtProfile> {
    let p = match walk {
        WalkKind::Hypercube { m } => {
            let tab = parity_dp(m, t_len)?;
            (1..=t_len).map(|t| to_f64(&tab.max_vector(t))).collect()
        }
        WalkKind::Line { n } => {
            if n < 2 {
                return input("line walk needs n >= 2");
            }
            check_budget("line-walk profile", (n * n) as u128 * t_len as u128)?;
            line_max_profile(n, t_len)?
        }
        WalkKind::GridCycling { n, m } => {
            if n < 2 || m == 0 {
                return input("cycling walk needs n >= 2 and m >= 1");
            }
            let per_axis = t_len.div_ceil(m);
            check_budget("line-walk profile", (n * n) as u128 * per_axis as u128)?;
            let line = line_max_profile(n, per_axis)?;
            let at = |s: usize| if s == 0 { 1.0 } else { line[s - 1] };
            (1..=t_len)
                .map(|t| {
                    (0..m)
                        .map(|offset| {
                            (0..m)
                                .map(|axis| {
                                    // steps tau = offset+1..=offset+t on this axis
                                    let hits =
                                        (1..=t).filter(|k| (offset + k - 1) % m == axis).count();
                                    at(hits)
                                })
                                .product::<f64>()
                        })
                        .fold(0.0, f64::max)
                })
                .collect()
        }
    };
    Ok(PtProfile { walk, t_len, p })
}

/// `(T / Σ p_t, T / Σ √p_t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub randomized: f64,
    pub quantum: f64,
}

pub fn bound_estimate(profile: &PtProfile) -> BoundEstimate {
    let t = profile.p.len() as f64;
    BoundEstimate {
        randomized: t / profile.p.iter().sum::<f64>(),
        quantum: t / profile.p.iter().map(|p| p.sqrt()).sum::<f64>(),
    }
}
