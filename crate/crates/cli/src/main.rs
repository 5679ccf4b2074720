use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use birkhoff_core::certify::{
    certify_regular, check_lb1, check_lb2, check_lb3, refute_identity, verify_certificate, BoundInstance,
    BoundVerdict, Certificate, LeadTerm,
};
use birkhoff_core::duality::{
    degree_counts, dependency_witness, independence_condition_failure, independent_via_duality,
    independent_via_oracle, to_dual,
};
use birkhoff_core::matrix::{
    atkinson_sharma, first_tail_violation, odd_supported_sequences, polya, slope_split_indices, tail_counts,
    upper_polya, InterpolationMatrix,
};
use birkhoff_core::pair::{build_system, format_row, rank_and_nullspace, split_pair, verify_block_form, Pair};
use birkhoff_core::poly::{parse_rational, Polynomial, PowerFamily, Term};
use birkhoff_core::represent::{
    greedy_decompose, identity_holds_exactly, max_discrepancy, rhs_size_bound, roots_of_unity_identity,
};
use birkhoff_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "birkhoff", version, about = "Birkhoff interpolation regularity and shifted-power independence")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Combinatorial criteria of an interpolation matrix, e.g. "100;010;100".
    CheckMatrix { matrix: String },
    /// Exact regularity of a pair, given as "E @ X" or as a matrix and a knot list.
    Regular {
        #[arg(allow_hyphen_values = true)]
        pair: String,
        #[arg(allow_hyphen_values = true)]
        knots: Option<String>,
    },
    /// Linear independence of a family of shifted powers (JSON text or a file path).
    Independence { family: String },
    /// Regularity certificate for a pair "E @ X" or for the dual of a family.
    Certify {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Certify that an identity instance is impossible, or check a candidate against a lower bound.
    Refute {
        /// Instance JSON: {"degree", "lhs": [{"coeff","shift"}], "rhs": [{"shift","exp"}]}.
        instance: Option<String>,
        #[arg(long, value_enum, conflicts_with = "instance")]
        bound: Option<Bound>,
        #[arg(long, requires = "bound")]
        degree: Option<usize>,
        /// Hard polynomial for lb1/lb3 as JSON [{"coeff","shift"}].
        #[arg(long)]
        hard: Option<String>,
        /// Candidate representation as JSON [{"coeff","shift","exp"}].
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Greedy decomposition into at most ceil((d+1)/2) shifted powers.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// The roots-of-unity identity sum_j xi^j (x + xi^j mu)^d.
    IdentityComplex {
        k: usize,
        d: usize,
        #[arg(allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Walk through the worked example end to end.
    DemoAppendix,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bound {
    Lb1,
    Lb2,
    Lb3,
}

struct Report {
    code: u8,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: u8, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command);
    match result {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("json")),
            }
            ExitCode::from(report.code)
        }
        Err(msg) => {
            match cli.format {
                Format::Text => eprintln!("error: {msg}"),
                Format::Json => println!("{}", json!({ "error": msg })),
            }
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Report, String> {
    match command {
        Command::CheckMatrix { matrix } => check_matrix(matrix),
        Command::Regular { pair, knots } => regular(pair, knots.as_deref()),
        Command::Independence { family } => independence(family),
        Command::Certify { input } => certify(input),
        Command::Refute {
            instance,
            bound,
            degree,
            hard,
            candidate,
        } => match (instance, bound) {
            (Some(inst), _) => refute(inst),
            (None, Some(b)) => lower_bound(*b, *degree, hard.as_deref(), candidate.as_deref()),
            (None, None) => Err("give an instance or --bound".into()),
        },
        Command::Decompose { poly } => decompose(poly),
        Command::IdentityComplex { k, d, mu, tol } => identity_complex(*k, *d, mu, *tol),
        Command::DemoAppendix => demo_appendix(),
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Inline JSON when the argument starts with `[` or `{`, otherwise a file path.
fn load(arg: &str) -> Result<String, String> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_matrix(text: &str) -> Result<Report, String> {
    let e: InterpolationMatrix = text.parse().map_err(err)?;
    let n = tail_counts(&e);
    let polya_v = polya(&e).ok();
    let odd = odd_supported_sequences(&e);
    let as_v = atkinson_sharma(&e).ok();
    let tail_fail = first_tail_violation(n.as_slice());
    let mut out = String::new();
    writeln!(out, "matrix: {e} ({} x {}, d = {}, |E| = {})", e.rows(), e.cols(), e.degree(), e.ones()).unwrap();
    writeln!(out, "tail counts: {:?}", n.as_slice()).unwrap();
    match polya_v {
        Some(p) => writeln!(out, "polya: {}", yes(p)).unwrap(),
        None => writeln!(out, "polya: n/a (|E| = {}, needs {})", e.ones(), e.degree() + 1).unwrap(),
    }
    writeln!(out, "upper-polya: {}", yes(upper_polya(&e))).unwrap();
    if odd.is_empty() {
        writeln!(out, "odd-supported: no").unwrap();
    } else {
        let rows: Vec<String> = odd.iter().map(|s| s.row.to_string()).collect();
        writeln!(out, "odd-supported: yes (row {})", rows.join(", ")).unwrap();
    }
    match as_v {
        Some(v) => writeln!(out, "atkinson-sharma: {}", yes(v)).unwrap(),
        None => writeln!(out, "atkinson-sharma: n/a").unwrap(),
    }
    match tail_fail {
        None => writeln!(out, "tail-condition: yes").unwrap(),
        Some(r) => writeln!(out, "tail-condition: no (fails at r = {r})").unwrap(),
    }
    let json = json!({
        "matrix": e.to_string(),
        "degree": e.degree(),
        "ones": e.ones(),
        "tail_counts": n.as_slice(),
        "polya": polya_v,
        "upper_polya": upper_polya(&e),
        "odd_supported": odd.iter().map(|s| json!({"row": s.row, "start": s.start_col, "length": s.length})).collect::<Vec<_>>(),
        "atkinson_sharma": as_v,
        "tail_condition": tail_fail.is_none(),
        "tail_violation": tail_fail,
    });
    Ok(Report::new(0, out, json))
}

fn parse_pair(pair: &str, knots: Option<&str>) -> Result<Pair, String> {
    match knots {
        Some(x) => Pair::new(pair.parse().map_err(err)?, x.parse().map_err(err)?).map_err(err),
        None => pair.parse().map_err(err),
    }
}

fn regular(pair: &str, knots: Option<&str>) -> Result<Report, String> {
    let p = parse_pair(pair, knots)?;
    let ones = p.matrix().ones();
    if ones > p.degree() + 1 {
        return Err(err(Error::TooManyConstraints {
            ones,
            dimension: p.degree() + 1,
        }));
    }
    let report = rank_and_nullspace(&build_system(&p));
    let regular = report.rank == ones;
    let mut out = format!("pair: {p}\nrank: {} of {ones}\n", report.rank);
    let witness = report.nullspace_basis.first().filter(|_| !regular);
    if regular {
        out.push_str("regular\n");
    } else {
        out.push_str("irregular\n");
        if let Some(w) = witness {
            writeln!(out, "witness: {w}").unwrap();
        }
    }
    let json = json!({
        "pair": p.to_string(),
        "rank": report.rank,
        "constraints": ones,
        "regular": regular,
        "witness": witness.map(ToString::to_string),
    });
    Ok(Report::new(if regular { 0 } else { 1 }, out, json))
}

fn independence(arg: &str) -> Result<Report, String> {
    let fam = PowerFamily::from_json(&load(arg)?).map_err(err)?;
    let dual = to_dual(&fam).map_err(err)?;
    let via_dual = independent_via_duality(&fam).map_err(err)?;
    let via_oracle = independent_via_oracle(&fam);
    if via_dual != via_oracle {
        return Err(format!("duality ({via_dual}) and expansion ({via_oracle}) disagree"));
    }
    let failure = independence_condition_failure(&fam);
    let mut out = String::new();
    writeln!(out, "family: {fam}").unwrap();
    writeln!(out, "dual pair: {}", dual.pair).unwrap();
    writeln!(out, "degree counts n_j: {:?}", degree_counts(&fam)).unwrap();
    match failure {
        None => writeln!(out, "counting condition: yes").unwrap(),
        Some(j) => writeln!(out, "counting condition: no (fails at j = {j})").unwrap(),
    }
    let mut json = json!({
        "family": fam.to_json(),
        "dual": dual.pair.to_string(),
        "degree_counts": degree_counts(&fam),
        "counting_condition": failure.is_none(),
        "independent": via_dual,
    });
    if via_dual {
        out.push_str("independent\n");
        return Ok(Report::new(0, out, json));
    }
    out.push_str("dependent\n");
    let coeffs = dependency_witness(&fam).expect("dependent family has a relation");
    let relation: Vec<String> = coeffs
        .iter()
        .zip(fam.terms())
        .filter(|(c, _)| !num_is_zero(c))
        .map(|(c, t)| format!("({c})*{t}"))
        .collect();
    writeln!(out, "relation: {} = 0", relation.join(" + ")).unwrap();
    let g = rank_and_nullspace(&build_system(&dual.pair)).nullspace_basis.into_iter().next();
    if let Some(g) = &g {
        writeln!(out, "dual witness: {g}").unwrap();
    }
    json["relation"] = json!(coeffs.iter().map(ToString::to_string).collect::<Vec<_>>());
    json["dual_witness"] = json!(g.map(|g| g.to_string()));
    Ok(Report::new(1, out, json))
}

fn num_is_zero(c: &birkhoff_core::Rational) -> bool {
    *c.numer() == 0.into()
}

fn certificate_report(subject: String, result: Result<Certificate, Error>) -> Result<Report, String> {
    match result {
        Ok(c) => {
            let verified = verify_certificate(&c);
            let text = format!("subject: {subject}\n{c}verified: {}\nregular\n", yes(verified));
            let json = json!({
                "subject": subject,
                "regular": true,
                "verified": verified,
                "certificate": serde_json::to_value(&c).expect("json"),
            });
            Ok(Report::new(if verified { 0 } else { 2 }, text, json))
        }
        Err(Error::Irregular { witness }) => {
            let text = format!("subject: {subject}\nirregular\nwitness: {witness}\n");
            let json = json!({ "subject": subject, "regular": false, "witness": witness.to_string() });
            Ok(Report::new(1, text, json))
        }
        Err(e) => Err(err(e)),
    }
}

fn certify(input: &str) -> Result<Report, String> {
    if input.contains('@') {
        let p: Pair = input.parse().map_err(err)?;
        return certificate_report(p.to_string(), certify_regular(&p));
    }
    let fam = PowerFamily::from_json(&load(input)?).map_err(err)?;
    let dimension = fam.degree() + 1;
    if fam.len() > dimension {
        return Err(err(Error::TooManyTerms {
            terms: fam.len(),
            dimension,
        }));
    }
    let dual = to_dual(&fam).map_err(err)?;
    certificate_report(format!("{} (dual of {fam})", dual.pair), certify_regular(&dual.pair))
}

fn refute(arg: &str) -> Result<Report, String> {
    let inst = BoundInstance::from_json(&load(arg)?).map_err(err)?;
    let fam = inst.family().map_err(err)?;
    certificate_report(format!("{fam}"), refute_identity(&inst))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, String> {
    serde_json::from_str(&load(arg)?).map_err(|e| format!("{what}: {e}"))
}

fn lower_bound(bound: Bound, degree: Option<usize>, hard: Option<&str>, candidate: Option<&str>) -> Result<Report, String> {
    let d = degree.ok_or("--degree is required")?;
    let cand: Option<Vec<Term>> = candidate.map(|c| parse_json(c, "candidate")).transpose()?;
    let lead = || -> Result<Vec<LeadTerm>, String> { parse_json(hard.ok_or("--hard is required for lb1/lb3")?, "hard") };
    let verdict: BoundVerdict = match bound {
        Bound::Lb1 => check_lb1(d, &lead()?, cand.as_deref()),
        Bound::Lb2 => check_lb2(d, cand.as_deref()),
        Bound::Lb3 => check_lb3(d, &lead()?, cand.as_deref()),
    }
    .map_err(err)?;
    let mut out = format!(
        "{:?} bound, d = {}, k = {}: at least {} terms\n",
        verdict.theorem, verdict.degree, verdict.k, verdict.min_terms
    );
    let mut code = 0;
    if let Some(cc) = &verdict.candidate {
        writeln!(out, "candidate: {} terms, represents target: {}", cc.terms, yes(cc.represents_target)).unwrap();
        if let Some(c) = &cc.refutation {
            writeln!(out, "too short; rearranged identity refuted:\n{c}verified: {}", yes(verify_certificate(c))).unwrap();
            code = 1;
        } else {
            out.push_str("meets the bound\n");
        }
    }
    let json = serde_json::to_value(&verdict).expect("json");
    Ok(Report::new(code, out, json))
}

fn decompose(text: &str) -> Result<Report, String> {
    let f: Polynomial = text.parse().map_err(err)?;
    let dec = greedy_decompose(&f);
    let bound = f.degree().map_or(0, |d| d / 2 + 1);
    let ok = dec.reconstruct(f.ambient_degree()).map_err(err)? == f;
    let mut out = format!("f = {f}\n");
    for t in dec.terms() {
        writeln!(out, "  {t}").unwrap();
    }
    writeln!(out, "terms: {} (bound {bound})\nreconstructs: {}", dec.len(), yes(ok)).unwrap();
    let json = json!({
        "polynomial": f.to_string(),
        "terms": serde_json::to_value(&dec).expect("json"),
        "count": dec.len(),
        "bound": bound,
        "reconstructs": ok,
    });
    Ok(Report::new(if ok { 0 } else { 1 }, out, json))
}

fn identity_complex(k: usize, d: usize, mu: &str, tol: f64) -> Result<Report, String> {
    if tol <= 0.0 {
        return Err("tolerance must be positive".into());
    }
    let mu = parse_rational(mu).map_err(err)?;
    let id = roots_of_unity_identity(k, d, mu).map_err(err)?;
    let exact = identity_holds_exactly(&id);
    let gap = max_discrepancy(&id);
    let ok = exact && gap <= tol;
    let out = format!(
        "{id}\nexact coefficient check: {}\nmax discrepancy: {gap:.3e} (tol {tol:e})\nk*|rhs| <= d+1: {}\n{}\n",
        yes(exact),
        yes(rhs_size_bound(&id)),
        if ok { "verified" } else { "not verified" }
    );
    let json = json!({
        "identity": serde_json::to_value(&id).expect("json"),
        "rhs": id.rhs_polynomial().to_string(),
        "exact": exact,
        "max_discrepancy": gap,
        "verified": ok,
    });
    Ok(Report::new(if ok { 0 } else { 1 }, out, json))
}

fn demo_appendix() -> Result<Report, String> {
    let p: Pair = "100100;100010;100100 @ 0,1,3".parse().map_err(err)?;
    let e = p.matrix();
    let n = tail_counts(e);
    let counts: Vec<i64> = n.as_slice().iter().map(|&v| v as i64).collect();
    let slope = slope_split_indices(&counts).map_err(err)?;
    let cert = certify_regular(&p).map_err(err)?;
    let r = cert.r.ok_or("expected a split certificate")?;
    let (left, right) = split_pair(&p, r).map_err(err)?;
    let block_ok = verify_block_form(&p, r).map_err(err)?;
    let verified = verify_certificate(&cert);

    let mut out = String::new();
    writeln!(out, "E =").unwrap();
    for i in 0..e.rows() {
        let row: String = e.row(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(out, "  {row}").unwrap();
    }
    writeln!(out, "X = {{{}}}, d = {}, |E| = {}", p.knots(), p.degree(), e.ones()).unwrap();
    writeln!(out, "tail counts N: {:?}", n.as_slice()).unwrap();
    writeln!(out, "slope split indices: {slope:?}; split at r = {r}").unwrap();
    writeln!(out, "E1 = {} (columns 0..={r}), E2 = {} (columns {}..={})", left.matrix(), right.matrix(), r + 1, p.degree()).unwrap();
    writeln!(out, "A(E1, X):").unwrap();
    write_rows(&mut out, &build_system(&left).entries);
    writeln!(out, "A(E2, X):").unwrap();
    write_rows(&mut out, &build_system(&right).entries);
    writeln!(out, "A(E, X) in the basis x^j/j!:").unwrap();
    write_rows(&mut out, &build_system(&p).entries);
    writeln!(out, "block form [A1 *; 0 A2]: {}", yes(block_ok)).unwrap();
    writeln!(out, "certificate:").unwrap();
    write!(out, "{cert}").unwrap();
    writeln!(out, "verified: {}", yes(verified)).unwrap();
    writeln!(out, "regular").unwrap();

    let q: Pair = "100;010;100 @ -1,0,1".parse().map_err(err)?;
    let witness = match certify_regular(&q) {
        Err(Error::Irregular { witness }) => witness,
        other => return Err(format!("expected an irregular pair, got {other:?}")),
    };
    writeln!(out, "\nE = {}, X = {{{}}}", q.matrix(), q.knots()).unwrap();
    writeln!(out, "irregular, witness g = {witness}").unwrap();

    let ok = block_ok && verified;
    let json = json!({
        "pair": p.to_string(),
        "tail_counts": n.as_slice(),
        "slope_indices": slope,
        "split": r,
        "left_system": rows_json(&build_system(&left).entries),
        "right_system": rows_json(&build_system(&right).entries),
        "system": rows_json(&build_system(&p).entries),
        "block_form": block_ok,
        "certificate": serde_json::to_value(&cert).expect("json"),
        "verified": verified,
        "regular": true,
        "irregular_pair": q.to_string(),
        "witness": witness.to_string(),
    });
    Ok(Report::new(if ok { 0 } else { 1 }, out, json))
}

fn write_rows(out: &mut String, rows: &[Vec<birkhoff_core::Rational>]) {
    for row in rows {
        writeln!(out, "  {}", format_row(row)).unwrap();
    }
}

fn rows_json(rows: &[Vec<birkhoff_core::Rational>]) -> Value {
    json!(rows.iter().map(|r| format_row(r)).collect::<Vec<_>>())
}
