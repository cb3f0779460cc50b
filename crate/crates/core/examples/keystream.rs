//! Keystream generation, the WG-PRNG initialization phase and sealed state files.
//!
//! Run with `cargo run --example keystream [seed]`.

use filter_xl::cipher::{format_keystream, CipherSpec, SealedState, WordState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> filter_xl::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let toy = CipherSpec::toy5();
    let s = WordState::random_nonzero(toy.a, &mut rng);
    let z = toy.keystream(&s, 64, true)?;
    println!("toy5 state {}\n{}", s.to_hex(), format_keystream(&z).trim_end());
    println!("update matrix: {:?}", toy.update_matrix().property());

    let wg = CipherSpec::wg_prng();
    let key = WordState::random_nonzero(wg.a, &mut rng);
    let state = wg.init_phase(&key)?;
    let z = wg.keystream(&state, 128, true)?;
    println!(
        "wg-prng after {} init rounds:\n{}",
        wg.init_rounds,
        format_keystream(&z).trim_end()
    );
    let mut back = state.clone();
    for _ in 0..wg.init_rounds {
        back = wg.init_round_inverse(&back)?;
    }
    println!("initialization inverts: {}", back == key);

    let sealed = SealedState::seal(&wg.name, seed, &state, &z);
    println!("sealed digest verifies: {}", sealed.verify(&z));
    match wg.keystream(&state, (1 << 18) + 1, true) {
        Err(e) => println!("over the limit: {e}"),
        Ok(_) => println!("limit not enforced"),
    }
    Ok(())
}
