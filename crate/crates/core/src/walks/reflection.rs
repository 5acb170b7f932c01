//! Brute-force check of the reflection rule for simple ±1 walks on `Z`:
//! the number of `t`-step paths from `i > 0` to `j > 0` that touch or cross
//! `0` equals the number of `t`-step paths from `-i` to `j`.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Largest `t` enumerated (`2^t` step strings).
pub const MAX_REFLECTION_STEPS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionCheck {
    pub i: i64,
    pub j: i64,
    pub t: u32,
    pub touching: u64,
    pub reflected: u64,
    pub equal: bool,
}

pub fn reflection_check(i: i64, j: i64, t: u32) -> Result<ReflectionCheck> {
    if i <= 0 || j <= 0 {
        return input(format!("reflection check needs i, j > 0, got {i}, {j}"));
    }
    if t > MAX_REFLECTION_STEPS {
        return input(format!("t = {t} exceeds {MAX_REFLECTION_STEPS}"));
    }
    let mut touching = 0u64;
    let mut reflected = 0u64;
    for bits in 0u32..(1u32 << t) {
        let mut a = i;
        let mut b = -i;
        let mut touched = false;
        for k in 0..t {
            let step = if bits >> k & 1 == 1 { 1 } else { -1 };
            a += step;
            b += step;
            touched |= a <= 0;
        }
        if a == j && touched {
            touching += 1;
        }
        if b == j {
            reflected += 1;
        }
    }
    Ok(ReflectionCheck {
        i,
        j,
        t,
        touching,
        reflected,
        equal: touching == reflected,
    })
}
