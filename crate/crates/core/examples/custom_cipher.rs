//! A cipher described in the `key = value` format, analysed and estimated.
//!
//! Run with `cargo run --example custom_cipher`.

use filter_xl::annihilator::analyze_filter;
use filter_xl::cipher::parse_spec;
use filter_xl::estimator::{estimate_table, table_pretty, EstimateParams};

const SPEC: &str = "
name = toy4
a = 4
feedback_taps = 1
omega_tap = 0
filter_word = 3
filter = x1*x2*x3 + x4*x5 + x6 + x7
max_keystream = unlimited
";

fn main() -> filter_xl::Result<()> {
    let spec = parse_spec(SPEC)?;
    println!(
        "{}: n = {}, feedback {:?}",
        spec.name,
        spec.n(),
        spec.feedback_property()
    );
    let a = analyze_filter(&spec.filter)?;
    println!(
        "AI = {}, basis degrees {:?} / {:?}",
        a.algebraic_immunity,
        a.bases[0].degree_histogram(),
        a.bases[1].degree_histogram()
    );
    println!(
        "{}",
        table_pretty(&estimate_table(&spec, &a, 3..=5, EstimateParams::default())?)
    );

    match parse_spec(&SPEC.replace("feedback_taps = 1", "feedback_taps = 9")) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("accepted"),
    }
    Ok(())
}
