//! Welch-Gong permutation and transformation over GF(2^7).

use super::gf128::Gf128;
use crate::anf::{from_truth_table, BoolPoly, TruthTable};
use crate::error::{Error, Result};

/// Decimation used by WG-PRNG.
pub const WG_DECIMATION: u64 = 13;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The undecimated permutation
/// `(x+1) + (x+1)^33 + (x+1)^39 + (x+1)^41 + (x+1)^104 + 1`.
pub fn wgp_raw(x: Gf128) -> Gf128 {
    let y = x + Gf128::ONE;
    y + y.pow(33) + y.pow(39) + y.pow(41) + y.pow(104) + Gf128::ONE
}

/// Decimated WG permutation `WGP(x^d)`; `d` must be coprime to 127.
pub fn wgp(x: Gf128, d: u64) -> Result<Gf128> {
    if gcd(d % 127, 127) != 1 {
        return Err(Error::usage(format!("decimation {d} is not coprime to 127")));
    }
    Ok(wgp_raw(x.pow(d)))
}

/// Trace as defined for this basis: coefficient of `w^0` plus coefficient of `w^5`.
pub fn trace(x: Gf128) -> bool {
    x.coeff(0) ^ x.coeff(5)
}

/// The WG-PRNG filter `Tr(WGP(x^13))`.
pub fn wgt(x: Gf128) -> bool {
    trace(wgp_raw(x.pow(WG_DECIMATION)))
}

/// Truth table of [`wgt`] with input bit `j` read as the coefficient of `w^j`.
pub fn wgt_truth_table() -> TruthTable {
    TruthTable::from_fn(7, |v| wgt(Gf128::from_low_bits(v as u8))).expect("7 variables")
}

/// ANF of the WG-PRNG filter, variable `x{j+1}` being the coefficient of `w^j`.
pub fn wgt_anf() -> BoolPoly {
    from_truth_table(&wgt_truth_table()).expect("7 variables")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(wgp(Gf128::ZERO, 13).unwrap(), Gf128::ZERO);
        assert_eq!(wgp(Gf128::ZERO, 1).unwrap(), wgp(Gf128::ZERO, 13).unwrap());
        assert!(!wgt(Gf128::ZERO));
    }

    #[test]
    fn bad_decimation() {
        assert!(wgp(Gf128::ONE, 127).is_err());
        assert!(wgp(Gf128::ONE, 254).is_err());
    }

    #[test]
    fn decimated_permutation_is_bijective() {
        let mut seen = [false; 128];
        for x in Gf128::all() {
            let y = wgp(x, 13).unwrap();
            assert!(!seen[y.bits() as usize]);
            seen[y.bits() as usize] = true;
        }
    }

    #[test]
    fn filter_is_balanced_and_matches_anf() {
        let tt = wgt_truth_table();
        assert_eq!(tt.weight(), 64);
        let anf = wgt_anf();
        for x in Gf128::all() {
            let point: Vec<bool> = (0..7).map(|j| x.coeff(j)).collect();
            assert_eq!(anf.evaluate(&point).unwrap(), wgt(x));
        }
    }

    #[test]
    fn anf_matches_fixture_and_reversed_mapping_does_not() {
        let fixture = BoolPoly::parse(include_str!("../../tests/fixtures/wgt13.anf"), 7).unwrap();
        assert_eq!(fixture.len(), 56);
        assert_eq!(wgt_anf(), fixture);
        assert!(wgt_anf().add(&fixture).unwrap().is_zero());

        let reversed = TruthTable::from_fn(7, |v| {
            let rev = (0..7).fold(0u8, |acc, j| acc | (((v >> j) & 1) as u8) << (6 - j));
            wgt(Gf128::from_low_bits(rev))
        })
        .unwrap();
        assert_ne!(from_truth_table(&reversed).unwrap(), fixture);
    }
}
