//! Exact walk probabilities: barrier line walk, parity walk, reflection
//! rule and the recursion identities.

use lsq::walks::{
    line_max_profile, line_walk_dp, parity_closed_form, parity_dp, parity_recursion_check,
    reflection_check,
};

fn main() -> lsq::Result<()> {
    let tab = line_walk_dp(3, 2)?;
    println!("line(3): p_11^(2) = {}", tab.p(1, 1, 2));

    let n = 32;
    let prof = line_max_profile(n, n * n)?;
    let c = prof
        .iter()
        .enumerate()
        .map(|(k, p)| ((k + 1) as f64).sqrt() * p)
        .fold(0.0, f64::max);
    println!("line({n}): max_t sqrt(t) max p(t) = {c:.6}");

    let par = parity_dp(6, 10)?;
    for t in [2, 4, 6, 8, 10] {
        println!(
            "B^6: p^({t})[0] = {} (closed form {})",
            par.zero(t),
            parity_closed_form(6, t)?
        );
    }
    println!("{:?}", parity_recursion_check(5, 6)?);
    println!("{:?}", reflection_check(2, 3, 9)?);
    parity_dp(4, 3)?.write_csv(std::io::stdout())?;
    Ok(())
}
