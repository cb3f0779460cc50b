//! Dense GF(2) elimination: rank, reduced echelon form and affine solution sets.
//!
//! Run with `cargo run --example gf2_elimination`.

use filter_xl::gf2::{BitMatrix, BitVector, IncrementalBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> filter_xl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (vars, rows) = (12, 9);
    let x: Vec<bool> = (0..vars).map(|_| rng.gen()).collect();
    let xv = BitVector::from_bools(&x);

    // augmented rows [a | a.x]
    let mut m = BitMatrix::zeros(rows, vars + 1);
    for r in 0..rows {
        for c in 0..vars {
            m.set(r, c, rng.gen());
        }
        let lhs = m.row(r);
        let dot = (0..vars).filter(|&c| lhs.get(c) && xv.get(c)).count() % 2 == 1;
        m.set(r, vars, dot);
    }
    let ech = m.rref();
    println!("rank {} of {rows} rows, pivots {:?}", ech.rank, ech.pivot_cols);
    let sols = ech.solution_set(true);
    println!(
        "consistent: {}, solution space dimension {}",
        sols.consistent,
        sols.dimension()
    );
    let hits = (0..1u64 << sols.dimension())
        .filter(|&c| sols.member(c).to_bools()[..vars] == x[..])
        .count();
    println!("planted vector found among the solutions: {}", hits == 1);

    let mut basis = IncrementalBasis::new(vars + 1);
    let inserted = (0..rows).filter(|&r| basis.insert(&m.row(r))).count();
    println!("incremental basis keeps {inserted} rows (rank {})", basis.rank());
    Ok(())
}
