//! Groebner bases of both annihilator ideals of a filter and the
//! independent expansion S' used by the estimator.
//!
//! Run with `cargo run --example annihilators [ANF]`; the default filter is WGT.

use filter_xl::anf::BoolPoly;
use filter_xl::annihilator::{analyze_filter, Side};
use filter_xl::cipher::wgt_anf;

fn main() -> filter_xl::Result<()> {
    let f = match std::env::args().nth(1) {
        Some(text) => BoolPoly::parse(&text, 7)?,
        None => wgt_anf(),
    };
    let a = analyze_filter(&f)?;
    println!("AI = {}", a.algebraic_immunity);
    for side in [Side::Zero, Side::One] {
        let b = a.basis(side);
        println!(
            "{side:?}: {} basis members {:?}, {} of degree <= deg F",
            b.gb.len(),
            b.degree_histogram(),
            b.gb_prime.len()
        );
        if let Some(g) = b.gb.first() {
            println!("  lowest member: {g}");
        }
        let s = a.s_prime(side);
        println!("  S': {} independent products {:?}", s.len(), s.degree_histogram);
    }
    Ok(())
}
