//! Keystream and time estimates for WG-PRNG under both matrix
//! multiplication exponents and both cost bases.
//!
//! Run with `cargo run --example estimate_table`.

use filter_xl::annihilator::analyze_filter;
use filter_xl::cipher::CipherSpec;
use filter_xl::estimator::{
    baseline_cm_keystream, estimate_table, log2_big, table_pretty, CostBase, EstimateParams, OMEGA_CW,
};

fn main() -> filter_xl::Result<()> {
    let spec = CipherSpec::wg_prng();
    let a = analyze_filter(&spec.filter)?;
    let strassen = estimate_table(&spec, &a, 4..=7, EstimateParams::default())?;
    println!("omega = log2 7, cost over C(n, D):\n{}", table_pretty(&strassen));

    let cw = EstimateParams {
        omega: OMEGA_CW,
        ..Default::default()
    };
    println!(
        "omega = {OMEGA_CW}:\n{}",
        table_pretty(&estimate_table(&spec, &a, 4..=7, cw)?)
    );

    let full = EstimateParams {
        cost_base: CostBase::FullSum,
        ..Default::default()
    };
    println!(
        "cost over all monomials of degree <= D:\n{}",
        table_pretty(&estimate_table(&spec, &a, 4..=7, full)?)
    );

    let base = baseline_cm_keystream(spec.n(), a.algebraic_immunity);
    println!(
        "linearization at degree AI needs {base} bits (2^{:.2})",
        log2_big(&base)
    );
    Ok(())
}
