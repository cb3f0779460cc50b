//! Closed-form counts for the attack: per-clock equation counts `k'`, the
//! keystream requirement `t`, XL sizes `N` and `T`, and the time exponent.
//!
//! Integers are exact; floating point is used only for the `log2` columns.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::annihilator::{FilterAnalysis, IndependentSet};
use crate::cipher::CipherSpec;
use crate::error::{Error, Result};

/// Strassen exponent `log2 7`.
pub const OMEGA_STRASSEN: f64 = 2.807_354_922_057_604;
/// Coppersmith-Winograd style exponent.
pub const OMEGA_CW: f64 = 2.372_859_6;
pub const DEFAULT_SECURITY_BITS: f64 = 128.0;

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sum_{i=0}^{d} C(n, i)`.
pub fn binomial_prefix_sum(n: usize, d: usize) -> BigUint {
    (0..=d.min(n)).map(|i| binomial_big(n, i)).sum()
}

/// `log2` of an arbitrary-size integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.to_u64().expect("fits").to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits") as f64;
    top.log2() + shift as f64
}

/// Equations per observed keystream bit guaranteed by `s`: each member of
/// degree `e` multiplied by the monomials of degree at most `D - e` in the
/// `n - m` variables outside the filter.
pub fn k_prime(s: &IndependentSet, n: usize, m: usize, d_bound: usize) -> BigUint {
    let outside = n.saturating_sub(m);
    s.polys
        .iter()
        .filter_map(|f| f.degree().finite())
        .filter(|&e| e <= d_bound)
        .map(|e| binomial_prefix_sum(outside, d_bound - e))
        .sum()
}

/// `ceil(T / min(k0, k1))` with `T = sum_{i<=D} C(n, i)`.
pub fn required_keystream(k0: &BigUint, k1: &BigUint, n: usize, d_bound: usize) -> Result<BigUint> {
    let k = k0.min(k1);
    if k.is_zero() {
        return Err(Error::analysis("no usable annihilators: k' is zero"));
    }
    let total = binomial_prefix_sum(n, d_bound);
    Ok((&total + k - BigUint::one()) / k)
}

/// `(N, T)` for XL at degree `D` on `t` equations of degree `d`.
pub fn xl_size_estimates(t: &BigUint, n: usize, d: usize, d_bound: usize) -> Result<(BigUint, BigUint)> {
    if d > d_bound {
        return Err(Error::usage(format!(
            "degree bound {d_bound} below equation degree {d}"
        )));
    }
    let big_n = t * binomial_prefix_sum(n, d_bound - d);
    Ok((big_n, binomial_prefix_sum(n, d_bound)))
}

/// `omega * log2(T)`.
pub fn complexity_log2(t_monomials: &BigUint, omega: f64) -> f64 {
    if t_monomials.is_one() {
        return 0.0;
    }
    omega * log2_big(t_monomials)
}

/// Keystream needed with a single degree-`e` annihilator: `C(n, e)`.
pub fn baseline_cm_keystream(n: usize, e: usize) -> BigUint {
    binomial_big(n, e)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EstimateParams {
    pub omega: f64,
    pub security_bits: f64,
    /// Which monomial count the time exponent is taken over.
    pub cost_base: CostBase,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CostBase {
    /// `C(n, D)`, the dominant term of `T`.
    #[default]
    LeadingTerm,
    /// The full `T = sum_{i<=D} C(n, i)`.
    FullSum,
}

impl Default for EstimateParams {
    fn default() -> Self {
        EstimateParams {
            omega: OMEGA_STRASSEN,
            security_bits: DEFAULT_SECURITY_BITS,
            cost_base: CostBase::LeadingTerm,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub cipher: String,
    #[serde(rename = "D")]
    pub d_bound: usize,
    pub n: usize,
    pub m: usize,
    /// Largest degree among the equations fed to XL.
    pub d: usize,
    #[serde(serialize_with = "ser_big")]
    pub k0: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub k1: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub t: BigUint,
    pub log2_t: f64,
    #[serde(rename = "T", serialize_with = "ser_big")]
    pub monomials: BigUint,
    #[serde(rename = "N", serialize_with = "ser_big")]
    pub equations: BigUint,
    pub omega: f64,
    pub cost_base: CostBase,
    pub complexity_log2: f64,
    /// `t` within the cipher's keystream limit (always true without one).
    pub feasible: bool,
    pub max_keystream: Option<u64>,
    /// Time exponent at or above the security level.
    pub exceeds_security: bool,
    pub security_bits: f64,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl EstimateReport {
    /// `t * min(k0, k1)`.
    pub fn covered_equations(&self) -> BigUint {
        &self.t * (&self.k0).min(&self.k1)
    }

    pub fn verdict(&self) -> String {
        let mut parts = Vec::new();
        match (self.feasible, self.max_keystream) {
            (true, _) => parts.push("feasible".to_string()),
            (false, Some(lim)) => parts.push(format!("infeasible: t > 2^{}", (lim as f64).log2().round() as u32)),
            (false, None) => parts.push("infeasible".to_string()),
        }
        if self.exceeds_security {
            parts.push(format!("worse than brute force (>= 2^{})", self.security_bits));
        }
        parts.join("; ")
    }
}

/// Estimate for a cipher at degree bound `D`, given its filter analysis.
pub fn estimate(
    spec: &CipherSpec,
    analysis: &FilterAnalysis,
    d_bound: usize,
    params: EstimateParams,
) -> Result<EstimateReport> {
    let n = spec.n();
    let m = spec.m();
    let d = analysis.bases.iter().filter_map(|b| b.max_degree()).max().unwrap_or(0);
    if d_bound < d {
        return Err(Error::usage(format!(
            "D = {d_bound} is below the annihilator degree {d}"
        )));
    }
    let k0 = k_prime(&analysis.s_prime[0], n, m, d_bound);
    let k1 = k_prime(&analysis.s_prime[1], n, m, d_bound);
    let t = required_keystream(&k0, &k1, n, d_bound)?;
    let (equations, monomials) = xl_size_estimates(&t, n, d, d_bound)?;
    let complexity = match params.cost_base {
        CostBase::LeadingTerm => complexity_log2(&binomial_big(n, d_bound), params.omega),
        CostBase::FullSum => complexity_log2(&monomials, params.omega),
    };
    let feasible = match spec.max_keystream {
        Some(lim) => t <= BigUint::from(lim),
        None => true,
    };
    Ok(EstimateReport {
        cipher: spec.name.clone(),
        d_bound,
        n,
        m,
        d,
        log2_t: log2_big(&t),
        k0,
        k1,
        t,
        monomials,
        equations,
        omega: params.omega,
        cost_base: params.cost_base,
        complexity_log2: complexity,
        feasible,
        max_keystream: spec.max_keystream,
        exceeds_security: complexity >= params.security_bits,
        security_bits: params.security_bits,
    })
}

/// Rows for several degree bounds.
pub fn estimate_table(
    spec: &CipherSpec,
    analysis: &FilterAnalysis,
    bounds: impl IntoIterator<Item = usize>,
    params: EstimateParams,
) -> Result<Vec<EstimateReport>> {
    bounds
        .into_iter()
        .map(|d| estimate(spec, analysis, d, params))
        .collect()
}

pub const TABLE_CSV_HEADER: &str = "D,k0,k1,t,log2_t,log2_complexity,feasible";

pub fn table_csv(rows: &[EstimateReport]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.2},{:.2},{}\n",
            r.d_bound, r.k0, r.k1, r.t, r.log2_t, r.complexity_log2, r.feasible
        ));
    }
    out
}

pub fn table_pretty(rows: &[EstimateReport]) -> String {
    let mut out = format!(
        "{:>3}  {:>12}  {:>12}  {:>8}  {:>7}  {:>10}  {}\n",
        "D", "k'0", "k'1", "t", "log2 t", "log2 cost", "verdict"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>3}  {:>12}  {:>12}  {:>8}  {:>7.2}  {:>10.2}  {}\n",
            r.d_bound,
            r.k0,
            r.k1,
            r.t,
            r.log2_t,
            r.complexity_log2,
            r.verdict()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annihilator::analyze_filter;
    use crate::cipher::wgt_anf;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_big(259, 3), big(2_862_209));
        assert_eq!(binomial_big(5, 7), big(0));
        assert_eq!(binomial_prefix_sum(21, 5), big(27_896));
        assert_eq!(binomial_prefix_sum(35, 5), big(384_168));
        assert!((log2_big(&big(2_862_209)) - 21.45).abs() < 0.01);
        assert_eq!(log2_big(&(BigUint::one() << 100u32)), 100.0);
    }

    #[test]
    fn baseline() {
        assert_eq!(baseline_cm_keystream(259, 0), big(1));
        assert_eq!(baseline_cm_keystream(259, 1), big(259));
        assert_eq!(baseline_cm_keystream(259, 3), big(2_862_209));
    }

    #[test]
    fn sizes_and_complexity() {
        let (n_eq, t) = xl_size_estimates(&big(1), 21, 5, 5).unwrap();
        assert_eq!(n_eq, big(1));
        assert_eq!(t, big(27_896));
        assert!(xl_size_estimates(&big(1), 21, 5, 4).is_err());
        assert_eq!(complexity_log2(&big(1), OMEGA_STRASSEN), 0.0);
        assert!(required_keystream(&big(0), &big(3), 5, 2).is_err());
    }

    #[test]
    fn toy_numbers() {
        let a = analyze_filter(&wgt_anf()).unwrap();
        for (spec, k, t) in [(CipherSpec::toy3(), 637u64, 44u64), (CipherSpec::toy5(), 1414, 272)] {
            let r = estimate(&spec, &a, 5, EstimateParams::default()).unwrap();
            assert_eq!((r.k0.clone(), r.k1.clone(), r.t.clone()), (big(k), big(k), big(t)));
        }
    }

    #[test]
    fn wg_table() {
        let a = analyze_filter(&wgt_anf()).unwrap();
        let rows = estimate_table(&CipherSpec::wg_prng(), &a, 4..=7, EstimateParams::default()).unwrap();
        let k: Vec<BigUint> = rows.iter().map(|r| r.k0.clone()).collect();
        assert_eq!(k, [big(287), big(40502), big(3_756_585), big(258_089_371)]);
        let want_t = [19.31, 17.84, 16.72, 15.80];
        let want_c = [77.06, 92.98, 108.15, 122.68];
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.k0, r.k1);
            assert!((r.log2_t - want_t[i]).abs() <= 0.02, "{}", r.log2_t);
            assert!((r.complexity_log2 - want_c[i]).abs() <= 0.02, "{}", r.complexity_log2);
        }
        assert_eq!(
            rows.iter().map(|r| r.feasible).collect::<Vec<_>>(),
            [false, true, true, true]
        );
        assert!(rows[0].verdict().starts_with("infeasible: t > 2^18"));
        assert!(table_csv(&rows).starts_with(TABLE_CSV_HEADER));
    }

    #[test]
    fn full_sum_cost_is_slightly_higher() {
        let a = analyze_filter(&wgt_anf()).unwrap();
        let params = EstimateParams {
            cost_base: CostBase::FullSum,
            ..Default::default()
        };
        let r = estimate(&CipherSpec::wg_prng(), &a, 4, params).unwrap();
        assert!((r.complexity_log2 - 77.12).abs() < 0.01);
        let cw = EstimateParams {
            omega: OMEGA_CW,
            ..Default::default()
        };
        let r = estimate(&CipherSpec::wg_prng(), &a, 4, cw).unwrap();
        assert!(r.complexity_log2 < 77.0);
    }

    #[test]
    fn monotone_in_k() {
        let t1 = required_keystream(&big(10), &big(20), 12, 3).unwrap();
        let t2 = required_keystream(&big(11), &big(20), 12, 3).unwrap();
        let t3 = required_keystream(&big(11), &big(20), 13, 3).unwrap();
        assert!(t2 <= t1);
        assert!(t3 >= t2);
    }
}
