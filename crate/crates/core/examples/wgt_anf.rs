//! The WG-PRNG filter: ANF, truth-table weight and algebraic immunity.
//!
//! Run with `cargo run --example wgt_anf`.

use filter_xl::anf::to_truth_table;
use filter_xl::annihilator::algebraic_immunity;
use filter_xl::cipher::{wgp, wgt_anf, Gf128, WG_DECIMATION};

fn main() -> filter_xl::Result<()> {
    let f = wgt_anf();
    println!("F = {f}");
    println!("{} terms, degree {}", f.len(), f.degree());
    println!("weight {} of 128", to_truth_table(&f)?.weight());
    println!(
        "AI(F) = {}, AI(F+1) = {}",
        algebraic_immunity(&f)?,
        algebraic_immunity(&f.complement())?
    );

    let image: std::collections::BTreeSet<u8> = Gf128::all()
        .map(|x| wgp(x, WG_DECIMATION).map(|y| y.bits()))
        .collect::<filter_xl::Result<_>>()?;
    println!("WGP(x^13) takes {} distinct values", image.len());
    Ok(())
}
