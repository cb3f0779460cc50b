//! End-to-end initial-state recovery on the 21-bit toy cipher.
//!
//! Run with `cargo run --release --example toy3_attack [seed]`.

use std::time::Instant;

use filter_xl::annihilator::analyze_filter;
use filter_xl::cipher::{CipherSpec, WordState};
use filter_xl::estimator::{estimate, EstimateParams};
use filter_xl::xl::{build_attack_system, solve_and_recover, xl_multiply_linearize, RecoveryOptions, XlOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> filter_xl::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let spec = CipherSpec::toy3();
    let analysis = analyze_filter(&spec.filter)?;
    let est = estimate(&spec, &analysis, 5, EstimateParams::default())?;
    let t: usize = est.t.to_string().parse().expect("small");
    println!("k' = {}, t = {t}, t*k' = {}", est.k0, est.covered_equations());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let secret = WordState::random_nonzero(spec.a, &mut rng);
    let keystream = spec.keystream(&secret, t, false)?;

    let start = Instant::now();
    let sys = build_attack_system(&spec, &analysis.bases, &keystream)?;
    let lin = xl_multiply_linearize(&sys, 5, &XlOptions::default())?;
    println!(
        "{} equations, {} rows generated, {} kept, {} columns ({:.1?})",
        sys.len(),
        lin.stats.generated_rows,
        lin.stats.kept_rows,
        lin.columns(),
        start.elapsed()
    );
    assert!(lin.is_satisfied_by(&secret.to_bits()));
    let result = solve_and_recover(lin, &spec, &keystream, &RecoveryOptions::default())?;
    println!(
        "rank = {}, status = {:?} ({:.1?})",
        result.rank,
        result.status,
        start.elapsed()
    );
    match &result.state {
        Some(s) => println!("recovered {} (secret {})", s.to_hex(), secret.to_hex()),
        None => println!("{}", result.message),
    }
    Ok(())
}
