//! Command-line front end: argument parsing, the six subcommands, and their
//! JSON and text reports.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so every command
//! is deterministic given its arguments.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anf::BoolPoly;
use crate::annihilator::{analyze_filter, FilterAnalysis, Side};
use crate::cipher::{
    format_keystream, parse_keystream, parse_spec, wgt_anf, CipherSpec, FeedbackProperty, SealedState, WordState,
};
use crate::error::{Error, Result};
use crate::estimator::{
    baseline_cm_keystream, estimate, estimate_table, log2_big, table_csv, table_pretty, CostBase, EstimateParams,
    EstimateReport, OMEGA_CW, OMEGA_STRASSEN,
};
use crate::gf2::MemoryBudget;
use crate::xl::{
    build_attack_system, precheck_budget, solve_and_recover, xl_multiply_linearize, BuildMode, LinearizeStats,
    RecoveryOptions, RecoveryResult, XlOptions, DEFAULT_ENUM_CAP,
};

pub const TOOL_NAME: &str = "filter-xl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const WGT_FIXTURE: &str = include_str!("../tests/fixtures/wgt13.anf");

/// Algebraic attack workbench for nonlinear filter generators.
///
/// CIPHER is a built-in name (wg-prng, toy3, toy5) or the path of a cipher
/// description file with `key = value` lines.
#[derive(Debug, Parser, Serialize)]
#[command(name = TOOL_NAME, version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; the engine currently runs single-threaded.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Largest matrix allocation, in bytes (suffixes K, M, G, T are powers of 1024).
    #[arg(long, global = true, default_value = "4G", value_parser = parse_size)]
    pub memory_cap: u64,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Filter analysis: ANF, immunity, Groebner basis shape, S' and the estimate at D.
    Analyze {
        cipher: String,
        /// XL degree bound.
        #[arg(long = "D", default_value_t = 5)]
        d: usize,
    },
    /// Keystream requirement and complexity for a list of degree bounds.
    Estimate {
        cipher: String,
        /// Degree bounds, comma separated.
        #[arg(long = "D", value_delimiter = ',', default_values_t = [4usize, 5, 6, 7])]
        d: Vec<usize>,
        /// Matrix multiplication exponent: `strassen` (log2 7), `cw` (2.3728596) or a number.
        #[arg(long, default_value = "strassen", value_parser = parse_omega)]
        omega: f64,
        /// Security level the time exponent is compared against.
        #[arg(long, default_value_t = 128.0)]
        security_bits: f64,
        /// Take the time exponent over the full monomial count instead of C(n, D).
        #[arg(long)]
        full_sum: bool,
        /// Print CSV instead of the aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Generate keystream from a seeded random initial state.
    Keystream {
        cipher: String,
        /// Number of keystream bits.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keystream output file.
        #[arg(long)]
        out: PathBuf,
        /// Sealed state output (default: `<out>.state.json`).
        #[arg(long)]
        state_out: Option<PathBuf>,
        /// Refuse requests beyond the cipher's keystream limit.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        enforce_limit: bool,
    },
    /// Recover the initial state from a keystream file.
    Attack {
        cipher: String,
        /// Keystream file.
        #[arg(long)]
        keystream: PathBuf,
        #[arg(long = "D", default_value_t = 5)]
        d: usize,
        /// Sealed state file to check the result against (default: `<keystream>.state.json` if present).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Largest solution-set dimension resolved by enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        enum_cap: usize,
        /// Eliminate rows as they are generated instead of storing them all.
        #[arg(long)]
        streaming: bool,
    },
    /// WG-PRNG keystream and complexity table for D = 4..7, as CSV.
    Table1,
    /// Quick consistency checks of the built-in models.
    Selftest,
}

fn parse_size(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let (num, shift) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 10),
        Some('M') => (&s[..s.len() - 1], 20),
        Some('G') => (&s[..s.len() - 1], 30),
        Some('T') => (&s[..s.len() - 1], 40),
        _ => (s, 0),
    };
    let v: u64 = num.trim().parse().map_err(|_| format!("`{s}` is not a size"))?;
    v.checked_mul(1u64 << shift)
        .ok_or_else(|| format!("`{s}` is too large"))
}

fn parse_omega(s: &str) -> std::result::Result<f64, String> {
    match s {
        "strassen" => Ok(OMEGA_STRASSEN),
        "cw" => Ok(OMEGA_CW),
        v => match v.parse::<f64>() {
            Ok(x) if (2.0..=3.0).contains(&x) => Ok(x),
            _ => Err(format!("`{v}` is not strassen, cw or a number in [2, 3]")),
        },
    }
}

/// Built-in name or cipher description file.
pub fn resolve_cipher(name: &str) -> Result<CipherSpec> {
    if let Some(spec) = CipherSpec::builtin(name) {
        return Ok(spec);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Error::usage(format!(
            "unknown cipher `{name}`: expected wg-prng, toy3, toy5 or a spec file"
        )));
    }
    parse_spec(&std::fs::read_to_string(path)?)
}

/// The clock-0 state for a seed: random nonzero words, passed through the
/// initialization phase when the cipher has one.
pub fn seeded_state(spec: &CipherSpec, seed: u64) -> Result<WordState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = WordState::random_nonzero(spec.a, &mut rng);
    if spec.init_rounds > 0 {
        spec.init_phase(&s)
    } else {
        Ok(s)
    }
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: serde_json::Value,
    pub wall_time_s: f64,
    pub result: T,
}

#[derive(Debug, Serialize)]
pub struct SideSummary {
    pub basis_size: usize,
    pub basis_degrees: BTreeMap<usize, usize>,
    pub s_prime_size: usize,
    pub s_prime_degrees: BTreeMap<usize, usize>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeResult {
    pub cipher: String,
    pub n: usize,
    pub m: usize,
    pub filter_anf: String,
    pub filter_terms: usize,
    pub algebraic_immunity: usize,
    pub feedback: FeedbackProperty,
    pub side0: SideSummary,
    pub side1: SideSummary,
    pub estimate: EstimateReport,
    pub verdict: String,
}

fn side_summary(a: &FilterAnalysis, side: Side) -> SideSummary {
    let b = a.basis(side);
    let s = a.s_prime(side);
    SideSummary {
        basis_size: b.gb_prime.len(),
        basis_degrees: b.degree_histogram(),
        s_prime_size: s.len(),
        s_prime_degrees: s.degree_histogram.clone(),
    }
}

pub fn cmd_analyze(spec: &CipherSpec, d: usize) -> Result<AnalyzeResult> {
    let a = analyze_filter(&spec.filter)?;
    let estimate = estimate(spec, &a, d, EstimateParams::default())?;
    Ok(AnalyzeResult {
        cipher: spec.name.clone(),
        n: spec.n(),
        m: spec.m(),
        filter_anf: spec.filter.to_string(),
        filter_terms: spec.filter.len(),
        algebraic_immunity: a.algebraic_immunity,
        feedback: spec.feedback_property(),
        side0: side_summary(&a, Side::Zero),
        side1: side_summary(&a, Side::One),
        verdict: estimate.verdict(),
        estimate,
    })
}

fn analyze_text(r: &AnalyzeResult) -> String {
    let e = &r.estimate;
    let hist = |h: &BTreeMap<usize, usize>| h.iter().map(|(d, c)| format!("{d}:{c}")).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "cipher {} (n = {}, m = {}, feedback {:?})\nfilter ({} terms): {}\nalgebraic immunity: {}\n",
        r.cipher, r.n, r.m, r.feedback, r.filter_terms, r.filter_anf, r.algebraic_immunity
    );
    for (i, s) in [&r.side0, &r.side1].into_iter().enumerate() {
        out.push_str(&format!(
            "side {i}: basis {} [{}], S' {} [{}]\n",
            s.basis_size,
            hist(&s.basis_degrees),
            s.s_prime_size,
            hist(&s.s_prime_degrees)
        ));
    }
    out.push_str(&format!(
        "D = {}: k'0 = {}, k'1 = {}, t = {} (2^{:.2}), T = {}, N = {}, cost 2^{:.2}\n{}\n",
        e.d_bound, e.k0, e.k1, e.t, e.log2_t, e.monomials, e.equations, e.complexity_log2, r.verdict
    ));
    out
}

#[derive(Debug, Serialize)]
pub struct KeystreamResult {
    pub cipher: String,
    pub seed: u64,
    pub bits: usize,
    pub keystream_file: PathBuf,
    pub state_file: PathBuf,
    pub state_hex: String,
}

fn default_state_path(keystream: &Path) -> PathBuf {
    let mut s = keystream.as_os_str().to_owned();
    s.push(".state.json");
    PathBuf::from(s)
}

pub fn cmd_keystream(
    spec: &CipherSpec,
    seed: u64,
    t: usize,
    out: &Path,
    state_out: Option<&Path>,
    enforce_limit: bool,
) -> Result<KeystreamResult> {
    let state = seeded_state(spec, seed)?;
    let ks = spec.keystream(&state, t, enforce_limit)?;
    std::fs::write(out, format_keystream(&ks))?;
    let state_file = state_out.map_or_else(|| default_state_path(out), Path::to_path_buf);
    let sealed = SealedState::seal(&spec.name, seed, &state, &ks);
    std::fs::write(&state_file, sealed.to_json())?;
    Ok(KeystreamResult {
        cipher: spec.name.clone(),
        seed,
        bits: t,
        keystream_file: out.to_path_buf(),
        state_file,
        state_hex: sealed.state_hex,
    })
}

#[derive(Debug, Serialize)]
pub struct AttackResult {
    pub cipher: String,
    #[serde(rename = "D")]
    pub d: usize,
    pub keystream_bits: usize,
    /// Keystream length the estimator asks for.
    pub required_t: String,
    pub equations: usize,
    pub linearization: LinearizeStats,
    pub recovery: RecoveryResult,
    /// `t * min(k'0, k'1)` for the keystream actually used.
    pub estimated_tk: String,
    /// Measured rank over the estimate.
    pub rank_ratio: f64,
    /// Whether the recovered state equals the sealed state, when one was given.
    pub matches_sealed: Option<bool>,
    pub warnings: Vec<String>,
}

impl AttackResult {
    /// Exact recovery (and agreement with the sealed state when present).
    pub fn success(&self) -> bool {
        self.recovery.recovered() && self.matches_sealed != Some(false)
    }
}

pub struct AttackConfig {
    pub d: usize,
    pub budget: MemoryBudget,
    pub enum_cap: usize,
    pub mode: BuildMode,
}

fn with_sizing_advice(e: Error) -> Error {
    match e {
        Error::Resource {
            msg,
            required_bytes,
            cap_bytes,
        } => Error::Resource {
            msg: format!(
                "{msg}; raise --memory-cap to at least {:.1} GiB or try --streaming",
                required_bytes as f64 / (1u64 << 30) as f64
            ),
            required_bytes,
            cap_bytes,
        },
        other => other,
    }
}

pub fn cmd_attack(
    spec: &CipherSpec,
    keystream: &[bool],
    sealed: Option<&SealedState>,
    cfg: &AttackConfig,
) -> Result<AttackResult> {
    let mut warnings = Vec::new();
    let a = analyze_filter(&spec.filter)?;
    let est = estimate(spec, &a, cfg.d, EstimateParams::default())?;
    if BigUint::from(keystream.len()) < est.t {
        warnings.push(format!(
            "keystream has {} bits, the estimate asks for {}",
            keystream.len(),
            est.t
        ));
    }
    let opts = XlOptions {
        budget: cfg.budget,
        mode: cfg.mode,
    };
    precheck_budget(&a.bases, keystream, spec.n(), cfg.d, &opts).map_err(with_sizing_advice)?;
    let sys = build_attack_system(spec, &a.bases, keystream)?;
    let lin = xl_multiply_linearize(&sys, cfg.d, &opts).map_err(with_sizing_advice)?;
    let stats = lin.stats.clone();
    let recovery = solve_and_recover(lin, spec, keystream, &RecoveryOptions { enum_cap: cfg.enum_cap })?;
    let k = (&est.k0).min(&est.k1).clone();
    let estimated_tk = BigUint::from(keystream.len()) * k;
    let rank_ratio = recovery.rank as f64 / estimated_tk.to_f64().unwrap_or(f64::INFINITY);
    let matches_sealed = match sealed {
        Some(s) => {
            if !s.verify(keystream) {
                warnings.push("sealed state digest does not match this keystream".into());
            }
            Some(recovery.state.as_ref().map(|r| r.to_hex()) == Some(s.state_hex.clone()))
        }
        None => None,
    };
    Ok(AttackResult {
        cipher: spec.name.clone(),
        d: cfg.d,
        keystream_bits: keystream.len(),
        required_t: est.t.to_string(),
        equations: sys.len(),
        linearization: stats,
        recovery,
        estimated_tk: estimated_tk.to_string(),
        rank_ratio,
        matches_sealed,
        warnings,
    })
}

fn attack_text(r: &AttackResult) -> String {
    let rec = &r.recovery;
    let mut out = String::new();
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out.push_str(&format!(
        "{} at D = {}: {} keystream bits, {} equations\nmatrix {} x {} ({} generated, {} zero, {} repeated)\n",
        r.cipher,
        r.d,
        r.keystream_bits,
        r.equations,
        rec.rows,
        rec.columns,
        r.linearization.generated_rows,
        r.linearization.zero_rows,
        r.linearization.duplicate_rows
    ));
    out.push_str(&format!(
        "rank {} vs t*k' = {} (ratio {:.3}), residual dimension {}\n",
        rec.rank, r.estimated_tk, r.rank_ratio, rec.residual_dimension
    ));
    let state = rec.state.as_ref().map_or_else(|| "-".to_string(), |s| s.to_hex());
    out.push_str(&format!("status {:?}: {} [{}]\n", rec.status, rec.message, state));
    if let Some(m) = r.matches_sealed {
        out.push_str(&format!("sealed state {}\n", if m { "matches" } else { "DIFFERS" }));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Table1Row {
    #[serde(rename = "D")]
    pub d: usize,
    pub k_prime: String,
    pub t: String,
    pub log2_t: f64,
    pub log2_complexity: f64,
    pub feasible: bool,
    pub verdict: String,
}

pub fn cmd_table1() -> Result<Vec<EstimateReport>> {
    let spec = CipherSpec::wg_prng();
    let a = analyze_filter(&spec.filter)?;
    estimate_table(&spec, &a, 4..=7, EstimateParams::default())
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Fast checks of the built-in models against their known values.
pub fn cmd_selftest() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let f = wgt_anf();
    let fixture = BoolPoly::parse(WGT_FIXTURE, 7)?;
    out.push(check("wgt anf", f == fixture, format!("{} terms", f.len())));

    let a = analyze_filter(&f)?;
    out.push(check(
        "algebraic immunity",
        a.algebraic_immunity == 3,
        format!("AI = {}", a.algebraic_immunity),
    ));
    let gb: Vec<_> = a.bases.iter().map(|b| b.degree_histogram()).collect();
    let want_gb = BTreeMap::from([(3, 1), (4, 30)]);
    out.push(check(
        "basis shape",
        gb.iter().all(|h| *h == want_gb),
        format!("{gb:?}"),
    ));
    let sp: Vec<_> = a.s_prime.iter().map(|s| s.degree_histogram.clone()).collect();
    let want_sp = BTreeMap::from([(3, 1), (4, 34), (5, 21), (6, 7), (7, 1)]);
    out.push(check("S' shape", sp.iter().all(|h| *h == want_sp), format!("{sp:?}")));

    let rows = estimate_table(&CipherSpec::wg_prng(), &a, 4..=7, EstimateParams::default())?;
    let k: Vec<String> = rows.iter().map(|r| r.k0.to_string()).collect();
    out.push(check(
        "k' table",
        k == ["287", "40502", "3756585", "258089371"],
        k.join(" "),
    ));
    let exps: Vec<(f64, f64)> = rows.iter().map(|r| (r.log2_t, r.complexity_log2)).collect();
    let want = [(19.31, 77.06), (17.84, 92.98), (16.72, 108.15), (15.80, 122.68)];
    let close = exps
        .iter()
        .zip(want)
        .all(|(g, w)| (g.0 - w.0).abs() <= 0.02 && (g.1 - w.1).abs() <= 0.02);
    out.push(check("estimate table", close, format!("{exps:.2?}")));

    for (spec, k, t) in [(CipherSpec::toy3(), 637u32, 44u32), (CipherSpec::toy5(), 1414, 272)] {
        let e = estimate(&spec, &a, 5, EstimateParams::default())?;
        out.push(check(
            &format!("{} estimate", spec.name),
            e.k0 == BigUint::from(k) && e.t == BigUint::from(t),
            format!("k' = {}, t = {}", e.k0, e.t),
        ));
    }
    let base = baseline_cm_keystream(259, 3);
    out.push(check(
        "baseline",
        base == BigUint::from(2_862_209u32),
        format!("{base} = 2^{:.2}", log2_big(&base)),
    ));
    for (spec, want) in [
        (CipherSpec::toy3(), FeedbackProperty::Primitive),
        (CipherSpec::toy5(), FeedbackProperty::Primitive),
        (CipherSpec::wg_prng(), FeedbackProperty::Irreducible),
    ] {
        let got = spec.feedback_property();
        out.push(check(
            &format!("{} feedback", spec.name),
            got == want,
            format!("{got:?}"),
        ));
    }
    let wg = CipherSpec::wg_prng();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = WordState::random_nonzero(wg.a, &mut rng);
    let mut back = wg.init_phase(&s)?;
    for _ in 0..wg.init_rounds {
        back = wg.init_round_inverse(&back)?;
    }
    out.push(check("init inverse", back == s, "74 rounds undone"));
    Ok(out)
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(
    cli: &Cli,
    start: Instant,
    result: T,
    text: impl FnOnce(&T) -> String,
    stdout: &mut dyn Write,
) -> Result<()> {
    if cli.global.json {
        let report = Report {
            tool: TOOL_NAME,
            version: VERSION,
            config: serde_json::to_value(cli).expect("plain config"),
            wall_time_s: start.elapsed().as_secs_f64(),
            result,
        };
        writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&report).expect("plain report")
        )?;
    } else {
        write!(stdout, "{}", text(&result))?;
        if matches!(cli.command, Command::Estimate { csv: true, .. }) {
            return Ok(());
        }
        writeln!(
            stdout,
            "({TOOL_NAME} {VERSION}, {:.2} s)",
            start.elapsed().as_secs_f64()
        )?;
    }
    Ok(())
}

/// Runs a parsed command; returns the exit code for completed runs.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let budget = MemoryBudget::new(cli.global.memory_cap);
    match &cli.command {
        Command::Analyze { cipher, d } => {
            let spec = resolve_cipher(cipher)?;
            let r = cmd_analyze(&spec, *d)?;
            emit(cli, start, r, analyze_text, stdout)?;
            Ok(0)
        }
        Command::Estimate {
            cipher,
            d,
            omega,
            security_bits,
            full_sum,
            csv,
        } => {
            let spec = resolve_cipher(cipher)?;
            let a = analyze_filter(&spec.filter)?;
            let params = EstimateParams {
                omega: *omega,
                security_bits: *security_bits,
                cost_base: if *full_sum {
                    CostBase::FullSum
                } else {
                    CostBase::LeadingTerm
                },
            };
            let rows = estimate_table(&spec, &a, d.iter().copied(), params)?;
            let csv = *csv;
            emit(
                cli,
                start,
                rows,
                |r| if csv { table_csv(r) } else { table_pretty(r) },
                stdout,
            )?;
            Ok(0)
        }
        Command::Keystream {
            cipher,
            t,
            seed,
            out,
            state_out,
            enforce_limit,
        } => {
            let spec = resolve_cipher(cipher)?;
            let r = cmd_keystream(&spec, *seed, *t, out, state_out.as_deref(), *enforce_limit)?;
            emit(
                cli,
                start,
                r,
                |r| {
                    format!(
                        "wrote {} bits to {} and state {} to {}\n",
                        r.bits,
                        r.keystream_file.display(),
                        r.state_hex,
                        r.state_file.display()
                    )
                },
                stdout,
            )?;
            Ok(0)
        }
        Command::Attack {
            cipher,
            keystream,
            d,
            state,
            enum_cap,
            streaming,
        } => {
            let spec = resolve_cipher(cipher)?;
            let bits = parse_keystream(&std::fs::read_to_string(keystream)?)?;
            let state_path = state.clone().or_else(|| {
                let p = default_state_path(keystream);
                p.exists().then_some(p)
            });
            let sealed = match state_path {
                Some(p) => Some(SealedState::from_json(&std::fs::read_to_string(p)?)?),
                None => None,
            };
            let cfg = AttackConfig {
                d: *d,
                budget,
                enum_cap: *enum_cap,
                mode: if *streaming {
                    BuildMode::Streaming
                } else {
                    BuildMode::Batch
                },
            };
            let r = cmd_attack(&spec, &bits, sealed.as_ref(), &cfg)?;
            let code = if r.success() { 0 } else { 2 };
            emit(cli, start, r, attack_text, stdout)?;
            Ok(code)
        }
        Command::Table1 => {
            let rows = cmd_table1()?;
            if cli.global.json {
                let table: Vec<Table1Row> = rows
                    .iter()
                    .map(|r| Table1Row {
                        d: r.d_bound,
                        k_prime: r.k0.to_string(),
                        t: r.t.to_string(),
                        log2_t: r.log2_t,
                        log2_complexity: r.complexity_log2,
                        feasible: r.feasible,
                        verdict: r.verdict(),
                    })
                    .collect();
                emit(cli, start, table, |_| String::new(), stdout)?;
            } else {
                write!(stdout, "{}", table_csv(&rows))?;
            }
            Ok(0)
        }
        Command::Selftest => {
            let checks = cmd_selftest()?;
            let ok = checks.iter().all(|c| c.pass);
            emit(
                cli,
                start,
                checks,
                |cs| {
                    cs.iter()
                        .map(|c| format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
                        .collect()
                },
                stdout,
            )?;
            Ok(if ok { 0 } else { 2 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("filter-xl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sizes_and_omega() {
        assert_eq!(parse_size("4G").unwrap(), 4 << 30);
        assert_eq!(parse_size("512").unwrap(), 512);
        assert_eq!(parse_size("3k").unwrap(), 3072);
        assert!(parse_size("x").is_err());
        assert_eq!(parse_omega("cw").unwrap(), OMEGA_CW);
        assert!(parse_omega("7").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["analyze", "nope"]).0, 1);
        assert_eq!(run_capture(&["--threads", "0", "table1"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn analyze_reports() {
        let (code, out, _) = run_capture(&["analyze", "toy3", "--D", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("k'0 = 637"), "{out}");
        assert!(out.contains("t = 44"));
        let (_, out, _) = run_capture(&["analyze", "wg-prng", "--D", "4", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["verdict"], "infeasible: t > 2^18");
        assert_eq!(v["result"]["estimate"]["k0"], 287);
        assert_eq!(v["version"], VERSION);
        assert!(v["wall_time_s"].is_number());
        assert_eq!(v["config"]["command"]["Analyze"]["d"], 4);
    }

    #[test]
    fn table_csv_output() {
        let (code, out, _) = run_capture(&["table1"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], crate::estimator::TABLE_CSV_HEADER);
        assert!(lines[3].starts_with("6,3756585,3756585,"));
        assert!(lines[3].contains(",16.72,108.15,true"));
    }

    #[test]
    fn estimate_formats() {
        let (code, out, _) = run_capture(&["estimate", "wg-prng", "--D", "5", "--csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("5,40502,40502,"));
        let (code, out, _) = run_capture(&["estimate", "wg-prng", "--D", "7", "--security-bits", "120"]);
        assert_eq!(code, 0);
        assert!(out.contains("worse than brute force"));
        assert_eq!(run_capture(&["estimate", "wg-prng", "--D", "2"]).0, 1);
    }

    #[test]
    fn keystream_files_and_policy() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ks.txt");
        let ps = p.to_str().unwrap();
        assert_eq!(
            run_capture(&["keystream", "toy3", "--t", "44", "--seed", "5", "--out", ps]).0,
            0
        );
        let first = std::fs::read_to_string(&p).unwrap();
        assert_eq!(parse_keystream(&first).unwrap().len(), 44);
        run_capture(&["keystream", "toy3", "--t", "44", "--seed", "5", "--out", ps]);
        assert_eq!(std::fs::read_to_string(&p).unwrap(), first);
        let sealed = SealedState::from_json(&std::fs::read_to_string(default_state_path(&p)).unwrap()).unwrap();
        assert!(sealed.verify(&parse_keystream(&first).unwrap()));

        assert_eq!(run_capture(&["keystream", "toy3", "--t", "0", "--out", ps]).0, 0);
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "");

        let (code, _, err) = run_capture(&["keystream", "wg-prng", "--t", "262145", "--out", ps]);
        assert_eq!(code, 1);
        assert!(err.contains("262144"), "{err}");
    }

    #[test]
    fn spec_file_errors_carry_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.spec");
        std::fs::write(&p, "a = 3\nfeedback_taps = 1, q\n").unwrap();
        let (code, _, err) = run_capture(&["analyze", p.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn attack_resource_error_exit_three() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ks.txt");
        let ps = p.to_str().unwrap();
        run_capture(&["keystream", "toy5", "--t", "272", "--out", ps]);
        let (code, _, err) = run_capture(&["attack", "toy5", "--keystream", ps, "--memory-cap", "1G"]);
        assert_eq!(code, 3);
        assert!(err.contains("raise --memory-cap"), "{err}");
    }

    #[test]
    fn truncated_toy3_fails_with_large_residual() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ks.txt");
        let ps = p.to_str().unwrap();
        run_capture(&["keystream", "toy3", "--t", "10", "--seed", "3", "--out", ps]);
        let (code, out, _) = run_capture(&["attack", "toy3", "--keystream", ps, "--json"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["recovery"]["status"], "failed");
        assert!(v["result"]["recovery"]["residual_dimension"].as_u64().unwrap() > 20);
        assert!(!v["result"]["warnings"].as_array().unwrap().is_empty());
    }

    #[test]
    fn selftest_passes() {
        let (code, out, _) = run_capture(&["selftest"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("FAIL"));
    }
}
