mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use antr_core::combinatorics::{
    c_bracket, c_const, sym_c, verify_cbracket_generating, verify_remove_n, verify_symc_generating,
};
use antr_core::exactnum::CycScalar;
use antr_core::genus0::{self, level_bound, InputProfile};
use antr_core::recursion::{required_caps, solve_theorem1, solve_theorem1_with_caps, w_residual, DilatonShift};
use antr_core::rootsys::{cbracket_state, elem_sym_state, vandermonde_coeff, weakly_increasing, RootData};
use antr_core::sampling::{remove_n_instances, vandermonde_instances, PRNG};
use antr_core::series::{SparsePoly, VarId};
use antr_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "antr", version, about = "Exact residue recursion for the A_N total descendant potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// C, SymC and the bracket C[...] of one tuple.
    Constants {
        #[arg(long)]
        h: u32,
        /// Comma-separated entries, e.g. 1,2; empty for the empty tuple.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        tuple: String,
        /// Also print double-precision complex values.
        #[arg(long)]
        approx: bool,
    },
    /// Truncated potentials F^(0)..F^(G).
    Potential {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        degree: u32,
        /// Highest descendant level at genus 0; omitted means primary.
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: VerifyOpts,
    },
}

#[derive(Args, Clone, Copy)]
struct VerifyOpts {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long, default_value_t = 1)]
    genus: u32,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    w: WcheckOpts,
}

#[derive(Args, Clone, Copy)]
struct WcheckOpts {
    /// wcheck: constraint index; all of 1..=N when omitted.
    #[arg(long)]
    a: Option<u32>,
    /// wcheck: power of lambda.
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// wcheck: polynomial degree up to which residuals are computed.
    #[arg(long, default_value_t = 4)]
    cap: u32,
    /// wcheck: dilaton shift; `as-printed` puts it at level 0 and is expected to fail.
    #[arg(long, value_enum, default_value = "standard")]
    shift: ShiftKind,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShiftKind {
    Standard,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    RemoveN,
    Symstate,
    Wdvv,
    Euler,
    Vandermonde,
    SymcGen,
    CbracketGen,
    Wcheck,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::IndexOutOfRange(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type CmdResult = Result<Report, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_tuple(s: &str) -> Result<Vec<u32>, Failure> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("malformed tuple entry {p:?}"))))
        .collect()
}

fn root_data_h(h: u32) -> Result<Arc<RootData>, Failure> {
    if h < 2 {
        return usage(format!("h must be at least 2, got {h}"));
    }
    Ok(RootData::new(h - 1)?)
}

fn root_data_n(n: u32) -> Result<Arc<RootData>, Failure> {
    if n < 1 {
        return usage("N must be at least 1");
    }
    Ok(RootData::new(n)?)
}

fn scalar(c: &CycScalar, approx: bool) -> Value {
    let exact = match c.to_rational() {
        Ok(r) => json!(r.to_string()),
        Err(_) => json!(c.to_string()),
    };
    if approx {
        let (re, im) = c.approx();
        json!({ "exact": exact, "approx": [re, im] })
    } else {
        exact
    }
}

fn join(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_constants(h: u32, tuple: &str, approx: bool) -> CmdResult {
    let rd = root_data_h(h)?;
    let t = parse_tuple(tuple)?;
    let mut rep = Report::new("constants", json!({ "h": h, "tuple": t, "approx": approx }));
    let c = c_const(&rd, &t)?;
    rep.insert("C", scalar(&c, approx));
    rep.line(format!("C({}) = {c}", join(&t)));
    let s = sym_c(&rd, &t)?;
    rep.insert("SymC", scalar(&s, approx));
    rep.line(format!("SymC({}) = {s}", join(&t)));
    if !t.is_empty() {
        let mut sorted = t.clone();
        sorted.sort_unstable();
        let b = c_bracket(&rd, &sorted)?;
        rep.insert("C_bracket", scalar(&b, approx));
        rep.line(format!("C[{}] = {b}", join(&sorted)));
    }
    Ok(rep)
}

fn primary_part(f: &SparsePoly<antr_core::exactnum::Rat>) -> SparsePoly<antr_core::exactnum::Rat> {
    f.filter(|m| m.max_level() == 0)
}

fn attach_genus0_checks(rep: &mut Report, f: &SparsePoly<antr_core::exactnum::Rat>, n: u32, degree: u32) -> Value {
    let wdvv = genus0::wdvv_check(&primary_part(f), n, degree);
    let euler = genus0::grading_check(f, n, 0);
    rep.check(wdvv.pass, &wdvv.claim);
    rep.check(euler.pass, &euler.claim);
    json!({ "wdvv": wdvv, "euler": euler })
}

fn cmd_potential(n: u32, genus: u32, degree: u32, max_level: Option<u32>) -> CmdResult {
    let rd = root_data_n(n)?;
    let config = json!({ "N": n, "genus": genus, "degree": degree, "max_level": max_level });
    let mut rep = Report::new("potential", config);
    if genus == 0 {
        let profile = match max_level {
            Some(l) => InputProfile::descendant(n, degree, l),
            None => InputProfile::primary(n, degree),
        };
        let pot = genus0::solve(&rd, &profile)?;
        let checks = attach_genus0_checks(&mut rep, &pot.f, n, degree);
        rep.line(format!("F^(0) = {}", pot.f));
        rep.insert("potential", pot.to_json(&[]));
        rep.insert("checks", checks);
        return Ok(rep);
    }
    if max_level.is_some() {
        return usage("--max-level applies to genus 0 only; higher genera use the level bound of each degree");
    }
    let table = solve_theorem1(&rd, genus, degree)?;
    let checks = attach_genus0_checks(&mut rep, table.potential(0), n, table.cap(0));
    let mut grading = Vec::new();
    for g in 0..=genus {
        let c = genus0::grading_check(table.potential(g), n, g);
        rep.check(c.pass, &c.claim);
        grading.push(c);
        rep.line(format!("F^({g}) = {}", table.potential(g)));
    }
    rep.insert("table", table.to_json());
    rep.insert("checks", json!({ "genus0": checks, "grading": grading }));
    Ok(rep)
}

fn need(v: Option<u32>, flag: &str, suite: Suite) -> Result<u32, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("suite {suite:?} needs --{flag}")))
}

fn cmd_verify(suite: Suite, opts: &VerifyOpts) -> CmdResult {
    let VerifyOpts { n, h, genus, degree, trials, seed, w } = *opts;
    let name = suite.to_possible_value().expect("suite has a name").get_name().to_string();
    match suite {
        Suite::RemoveN => {
            let h = need(h, "h", suite)?;
            let rd = root_data_h(h)?;
            let mut rep = Report::new("verify", json!({ "suite": name, "h": h, "trials": trials, "seed": seed }));
            rep.insert("prng", json!(PRNG));
            let mut failures = Vec::new();
            for (b, mm) in remove_n_instances(h, trials, seed)? {
                let r = verify_remove_n(&rd, &b, mm)?;
                if !r.pass {
                    failures.push(json!({ "b": b, "m": mm, "report": r }));
                }
            }
            rep.check(failures.is_empty(), format!("{trials} remove-N instances at h = {h}"));
            rep.insert("instances", json!(trials));
            rep.insert("failures", json!(failures));
            Ok(rep)
        }
        Suite::Symstate => {
            let h = need(h, "h", suite)?;
            let rd = root_data_h(h)?;
            let mut rep = Report::new("verify", json!({ "suite": name, "h": h }));
            let mut results = Vec::new();
            let e1 = elem_sym_state(&rd, 1)?;
            rep.check(e1.is_zero(), "e_1 state vanishes");
            results.push(json!({ "claim": "e_1 state vanishes", "lhs": e1, "rhs": "0", "pass": e1.is_zero() }));
            for r in 2..=h {
                let lhs = cbracket_state(&rd, r)?;
                let rhs = elem_sym_state(&rd, r)?;
                let pass = lhs == rhs;
                let claim = format!("bracket state = e_{r} state at h = {h}");
                rep.check(pass, &claim);
                results.push(json!({ "claim": claim, "lhs": lhs, "rhs": rhs, "pass": pass }));
            }
            rep.insert("results", json!(results));
            Ok(rep)
        }
        Suite::Wdvv | Suite::Euler => {
            let n = need(n, "n", suite)?;
            let degree = need(degree, "degree", suite)?;
            let rd = root_data_n(n)?;
            let mut rep = Report::new("verify", json!({ "suite": name, "N": n, "degree": degree }));
            let pot = genus0::solve(&rd, &InputProfile::primary(n, degree))?;
            let check = match suite {
                Suite::Wdvv => genus0::wdvv_check(&pot.f, n, degree),
                _ => genus0::euler_check(&pot.f, n),
            };
            rep.check(check.pass, &check.claim);
            rep.insert("F", json!(pot.f));
            rep.insert("check", json!(check));
            Ok(rep)
        }
        Suite::Vandermonde => {
            let h = need(h, "h", suite)?;
            let rd = root_data_h(h)?;
            let mut rep = Report::new("verify", json!({ "suite": name, "h": h, "trials": trials, "seed": seed }));
            rep.insert("prng", json!(PRNG));
            let mut failures = Vec::new();
            for idx in vandermonde_instances(h, trials, seed)? {
                let c = vandermonde_coeff(&rd, &idx)?;
                if !c.is_one() {
                    failures.push(json!({ "indices": idx, "value": scalar(&c, false) }));
                }
            }
            rep.check(failures.is_empty(), format!("{trials} Vandermonde coefficients equal 1 at h = {h}"));
            rep.insert("failures", json!(failures));
            Ok(rep)
        }
        Suite::SymcGen | Suite::CbracketGen => {
            let h = need(h, "h", suite)?;
            if h < 3 {
                return usage("generating-function suites need h >= 3");
            }
            let rd = root_data_h(h)?;
            let max = h - 2;
            let mut rep = Report::new("verify", json!({ "suite": name, "h": h }));
            let mut failures = Vec::new();
            let mut count = 0;
            for len in 1..=3 {
                for t in weakly_increasing(len, max) {
                    let r = match suite {
                        Suite::SymcGen => verify_symc_generating(&rd, &t, None)?,
                        _ => verify_cbracket_generating(&rd, &t)?,
                    };
                    count += 1;
                    if !r.pass {
                        failures.push(json!(r));
                    }
                }
            }
            rep.check(failures.is_empty(), format!("{count} tuples of length <= 3 at h = {h}"));
            rep.insert("tuples", json!(count));
            rep.insert("failures", json!(failures));
            Ok(rep)
        }
        Suite::Wcheck => {
            let n = need(n, "n", suite)?;
            let rd = root_data_n(n)?;
            let h = rd.h();
            let WcheckOpts { a, m, cap, shift } = w;
            let shift = match shift {
                ShiftKind::Standard => DilatonShift::standard(n),
                ShiftKind::AsPrinted => DilatonShift::as_printed(n),
            };
            let config = json!({
                "suite": name, "N": n, "genus": genus, "degree": degree, "a": a, "m": m, "cap": cap,
                "shift_level": shift.level,
            });
            let mut rep = Report::new("verify", config);
            let table = match degree {
                Some(d) => solve_theorem1(&rd, genus, d)?,
                None => solve_theorem1_with_caps(&rd, &required_caps(genus, h, cap))?,
            };
            let labels: Vec<u32> = match a {
                Some(a) => vec![a],
                None => (1..=n).collect(),
            };
            let mut reports = Vec::new();
            for a in labels {
                let r = w_residual(&rd, &table, &shift, a, m, cap)?;
                rep.check(
                    r.pass(),
                    format!("W residual a = {a}, m = {m} vanishes to degree {cap} ({} terms)", r.residual_terms()),
                );
                reports.push(r.to_json());
            }
            rep.insert("max_level", json!(table.max_level()));
            rep.insert("level_bound_genus0", json!(level_bound(h, 0, table.cap(0))));
            rep.insert("shift", json!({ "var": VarId::new(shift.level, n).to_string(), "x_offset": shift.x_offset() }));
            rep.insert("wcheck", json!(reports));
            Ok(rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Constants { h, tuple, approx } => cmd_constants(h, &tuple, approx),
        Command::Potential { n, genus, degree, max_level } => cmd_potential(n, genus, degree, max_level),
        Command::Verify { suite, opts } => cmd_verify(suite, &opts),
    };
    match result {
        Ok(rep) => {
            if let Err(e) = rep.emit(cli.format, cli.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
