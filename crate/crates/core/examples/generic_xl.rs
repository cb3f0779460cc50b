//! Textbook XL on a random quadratic system with a planted solution.
//!
//! Run with `cargo run --example generic_xl [n] [seed]`.

use filter_xl::anf::{monomials_up_to, BoolPoly, Monomial};
use filter_xl::gf2::MemoryBudget;
use filter_xl::xl::{generic_xl, GenericXlOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> filter_xl::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let secret: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let point = Monomial::from_vars((0..n).filter(|&i| secret[i]));
    let quads = monomials_up_to(n, 2);
    let mut eqs = Vec::new();
    while eqs.len() < 2 * n {
        let p = BoolPoly::from_terms(n, quads.iter().copied().filter(|_| rng.gen_bool(0.5)))?;
        if p.degree().finite() != Some(2) {
            continue;
        }
        eqs.push(if p.evaluate_set(&point) {
            p.add(&BoolPoly::one(n))?
        } else {
            p
        });
    }

    for d in 2..=n + 2 {
        match generic_xl(&eqs, d, n - 1, &MemoryBudget::default())? {
            GenericXlOutcome::Solved(x) => {
                println!("D = {d}: solved, matches planted solution: {}", x == secret);
                return Ok(());
            }
            GenericXlOutcome::Failed { reason, partial } => {
                let fixed = partial.iter().filter(|v| v.is_some()).count();
                println!("D = {d}: {reason} ({fixed} variables fixed)");
            }
        }
    }
    Ok(())
}
