use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use paramodular::fourier_jacobi::{check_cusp_power_vanishing, render_report};
use paramodular::geometry::load_geometry_file;
use paramodular::symplectic::finite::{enumerate_sp4, prime_pattern_index, sp4_f2_exhaustive};
use paramodular::symplectic::siegel::NumericPoint;
use paramodular::symplectic::{
    act, conjugator, in_paramodular, in_prime_pattern, is_in_h2, is_prime, is_symplectic,
    sp4_order_mod, Matrix4, SymplecticMatrix,
};
use paramodular::verifier::{
    degree_by_enumeration, degree_over_a2, dimension_leading_term, revalidate, verify, Certificate,
    CertificateInputs, StepCertificate, StepVerdict,
};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "paramodular",
    version,
    about = "Exact checks for paramodular groups and general-type certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a 4x4 rational matrix for symplecticity and membership in Γ_t.
    CheckMatrix {
        /// Whitespace-separated matrix file; `#` starts a comment.
        file: PathBuf,
        /// Level t of the paramodular group.
        #[arg(long)]
        t: u64,
    },
    /// Apply a symplectic matrix to a point of the Siegel upper half-plane.
    Act {
        /// File holding the 4x4 matrix.
        #[arg(long)]
        gamma: PathBuf,
        /// Entries τ1 τ2 τ3 of Z, e.g. `0+1i 0.1+0.2i 0+2i`.
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Order of Sp(4, F_q).
    OrderSp4 {
        /// Prime modulus.
        #[arg(long)]
        q: u64,
        /// Cross-check by enumeration (q <= 3).
        #[arg(long)]
        brute_force: bool,
    },
    /// Leading coefficient of the cusp form dimension and the covering degree.
    Dim {
        /// Prime p; the level is p².
        #[arg(long)]
        p: u64,
    },
    /// Vanishing order of f_n·f2^n from truncated Fourier-Jacobi expansions.
    FjDemo {
        /// Index of the weight-n form.
        #[arg(long)]
        n: usize,
        /// Number of Fourier-Jacobi coefficients kept.
        #[arg(long)]
        trunc: usize,
    },
    /// Run the five obstruction checks and optionally write a certificate.
    Verify {
        /// Prime p; the level is p².
        #[arg(long, required_unless_present = "check")]
        p: Option<u64>,
        /// Weight used for the exhaustive concrete check (default 24p).
        #[arg(long)]
        n: Option<u64>,
        /// JSON file with one geometry table or an array of tables.
        #[arg(long)]
        geometry: Option<PathBuf>,
        /// Also compare against α_p = 3 − 10/p.
        #[arg(long)]
        alpha_mode: bool,
        /// n ranges over positive multiples of this (default 24p).
        #[arg(long)]
        divisibility: Option<i64>,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute a certificate file and compare it byte for byte.
        #[arg(long, conflicts_with_all = ["p", "n", "geometry", "alpha_mode", "divisibility", "out"])]
        check: Option<PathBuf>,
    },
    /// General-type verdict at p.
    Verdict {
        /// Prime p; the level is p².
        #[arg(long)]
        p: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: FAILED,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::CheckMatrix { file, t } => check_matrix(&file, t),
        Command::Act { gamma, z } => act_cmd(&gamma, &z),
        Command::OrderSp4 { q, brute_force } => order_sp4(q, brute_force),
        Command::Dim { p } => dim(p),
        Command::FjDemo { n, trunc } => fj_demo(n, trunc),
        Command::Verify {
            check: Some(path), ..
        } => check_certificate(&path),
        Command::Verify {
            p,
            n,
            geometry,
            alpha_mode,
            divisibility,
            out,
            check: None,
        } => {
            let p = p.ok_or_else(|| usage("--p is required"))?;
            verify_cmd(p, n, geometry, alpha_mode, divisibility, out)
        }
        Command::Verdict { p } => verdict(p),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn check_matrix(file: &PathBuf, t: u64) -> Outcome {
    if t == 0 {
        return Err(usage("--t must be positive"));
    }
    let m = Matrix4::parse(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let symplectic = is_symplectic(&m);
    let mut out = format!("symplectic: {symplectic}\n");
    let member = match SymplecticMatrix::try_from(m) {
        Ok(s) => {
            let member = in_paramodular(&s, t);
            writeln!(out, "paramodular (t = {t}): {member}").unwrap();
            if let Some(p) = prime_square_root(t) {
                let conj = conjugator(p).expect("p is prime").conjugate(&s);
                writeln!(
                    out,
                    "conjugate R·M·R⁻¹ in Γ'_(p²) (p = {p}): {}",
                    in_prime_pattern(&conj, p)
                )
                .unwrap();
                writeln!(out, "M itself in Γ'_(p²): {}", in_prime_pattern(&s, p)).unwrap();
            }
            member
        }
        Err(_) => {
            writeln!(out, "paramodular (t = {t}): false").unwrap();
            false
        }
    };
    Ok((out, if member { OK } else { FAILED }))
}

fn prime_square_root(t: u64) -> Option<u64> {
    let r = (t as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(t) && is_prime(r)).then_some(r)
}

fn act_cmd(gamma: &PathBuf, z: &[String]) -> Outcome {
    let m =
        Matrix4::parse(&read(gamma)?).map_err(|e| usage(format!("{}: {e}", gamma.display())))?;
    let g = SymplecticMatrix::try_from(m).map_err(|e| failed(e.to_string()))?;
    let parsed = z
        .iter()
        .map(|s| {
            s.parse::<Complex64>()
                .map_err(|_| usage(format!("cannot parse {s:?} as a complex number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let point = NumericPoint::new(parsed[0], parsed[1], parsed[2]);
    let image = act(&g, &point).map_err(|e| failed(e.to_string()))?;
    let in_h2 = is_in_h2(&image);
    let out = format!(
        "tau1 = {}\ntau2 = {}\ntau3 = {}\nin H2: {in_h2}\n",
        image.tau1, image.tau2, image.tau3
    );
    Ok((out, if in_h2 { OK } else { FAILED }))
}

fn order_sp4(q: u64, brute_force: bool) -> Outcome {
    let order = sp4_order_mod(q).map_err(|e| usage(e.to_string()))?;
    let mut out = format!("|Sp(4, F_{q})| = {order}\n");
    if brute_force {
        let counted = match q {
            2 => sp4_f2_exhaustive(),
            3 => enumerate_sp4(3, |_| {}).map_err(|e| usage(e.to_string()))?,
            _ => return Err(usage("--brute-force supports q <= 3")),
        };
        let agrees = u128::from(counted) == order;
        let how = if q == 2 {
            "exhaustive scan of 65536 matrices"
        } else {
            "column enumeration"
        };
        writeln!(
            out,
            "{how}: {counted} ({})",
            if agrees { "agrees" } else { "DISAGREES" }
        )
        .unwrap();
        return Ok((out, if agrees { OK } else { FAILED }));
    }
    Ok((out, OK))
}

fn dim(p: u64) -> Outcome {
    let leading = dimension_leading_term(p).map_err(|e| usage(e.to_string()))?;
    let degree = degree_over_a2(p).map_err(|e| usage(e.to_string()))?;
    let mut out = format!("leading term: {leading}  (dim ~ {leading}·n^3)\ndegree: {degree}\n");
    let index = prime_pattern_index(p).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "index from |Sp(4, F_p)| / |SL(2, F_p)|^2: {index}").unwrap();
    let mut agrees = index == u128::from(degree);
    if p <= 3 {
        let counted = degree_by_enumeration(p).map_err(|e| failed(e.to_string()))?;
        writeln!(out, "index by enumeration: {counted}").unwrap();
        agrees &= counted == degree;
    }
    Ok((out, if agrees { OK } else { FAILED }))
}

fn fj_demo(n: usize, trunc: usize) -> Outcome {
    let report = check_cusp_power_vanishing(n, trunc).map_err(|e| usage(e.to_string()))?;
    let holds = report.holds();
    Ok((render_report(&report), if holds { OK } else { FAILED }))
}

fn verify_cmd(
    p: u64,
    n: Option<u64>,
    geometry: Option<PathBuf>,
    alpha_mode: bool,
    divisibility: Option<i64>,
    out: Option<PathBuf>,
) -> Outcome {
    let mut inputs = CertificateInputs::standard(p);
    if let Some(d) = divisibility {
        inputs.divisibility = d;
        inputs.concrete_n = u64::try_from(d).ok();
    }
    if let Some(n) = n {
        inputs.concrete_n = Some(n);
    }
    inputs.alpha_mode = alpha_mode;
    if let Some(path) = geometry {
        let tables = load_geometry_file(&path).map_err(|e| usage(e.to_string()))?;
        inputs = inputs.with_geometry(&tables);
    }
    let cert = verify(&inputs).map_err(|e| match e {
        paramodular::verifier::VerifyError::Premise { .. } => failed(e.to_string()),
        _ => usage(e.to_string()),
    })?;
    let mut text = render_certificate(&cert);
    if let Some(path) = out {
        std::fs::write(&path, cert.to_json())
            .map_err(|e| failed(format!("cannot write {}: {e}", path.display())))?;
        writeln!(text, "certificate written to {}", path.display()).unwrap();
    }
    let ok = cert.all_steps_vanish() && cert.rearrangement;
    Ok((text, if ok { OK } else { FAILED }))
}

fn check_certificate(path: &PathBuf) -> Outcome {
    let text = read(path)?;
    let r = revalidate(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut out = format!("p = {}: {}\n", r.certificate.p, r.certificate.verdict);
    match r.first_difference {
        None => out.push_str("certificate reproduced byte for byte\n"),
        Some(line) => {
            writeln!(out, "certificate differs from recomputation at line {line}").unwrap()
        }
    }
    Ok((out, if r.matches { OK } else { FAILED }))
}

fn verdict(p: u64) -> Outcome {
    let cert = paramodular::verifier::general_type_verdict(p).map_err(|e| usage(e.to_string()))?;
    let mut out = format!("p = {p}: {}\n", cert.verdict);
    if let Some(bound) = &cert.plurigenus_lower_bound {
        writeln!(out, "plurigenera: {bound}").unwrap();
    }
    for s in cert.failing_steps() {
        writeln!(out, "step {}: {}", s.step, describe_verdict(&s.verdict)).unwrap();
    }
    Ok((out, OK))
}

fn describe_verdict(v: &StepVerdict) -> String {
    match v {
        StepVerdict::Vanishes => "vanishes".into(),
        StepVerdict::Fails {
            witness_n,
            witness_i,
        } => {
            format!("fails, counterexample n={witness_n}, i={witness_i}")
        }
        StepVerdict::Inconclusive { reason } => format!("inconclusive ({reason})"),
    }
}

fn render_step(out: &mut String, s: &StepCertificate) {
    writeln!(
        out,
        "step {}: {} on {}, {}",
        s.step, s.class, s.surface, s.i_range_description
    )
    .unwrap();
    writeln!(out, "  bounding class: {}", s.bounding_class).unwrap();
    writeln!(out, "  Σ-pairing: {}", s.sigma_pairing).unwrap();
    if let (Some(w), Some(e)) = (&s.worst_case, &s.endpoint) {
        writeln!(out, "  worst case over i ({e:?} end): {w}").unwrap();
    }
    writeln!(out, "  verdict: {}", describe_verdict(&s.verdict)).unwrap();
    for d in &s.discarded {
        writeln!(
            out,
            "  dropped {} with coefficient {} ({:?}, {})",
            d.term,
            d.coefficient,
            d.reason,
            d.provenance.tag()
        )
        .unwrap();
    }
    if let Some(a) = &s.alpha_comparison {
        let worst = a
            .worst_case
            .as_ref()
            .map_or("-".to_string(), ToString::to_string);
        writeln!(
            out,
            "  α_p = {}: pairing {}, worst case {worst}, {}{}",
            a.alpha,
            a.sigma_pairing,
            describe_verdict(&a.verdict),
            if a.tightens { ", tighter" } else { "" }
        )
        .unwrap();
    }
    if let Some(c) = &s.concrete_check {
        let max = c
            .max_value
            .as_ref()
            .map_or("-".to_string(), ToString::to_string);
        writeln!(
            out,
            "  concrete n={}: {} values of i, max {max}, {}",
            c.n,
            c.points,
            if c.agrees {
                "agrees with the symbolic worst case"
            } else {
                "DISAGREES with the symbolic worst case"
            }
        )
        .unwrap();
    }
    for (tag, labels) in &s.provenance {
        writeln!(out, "  {tag}: {}", labels.join(", ")).unwrap();
    }
    for note in &s.notes {
        writeln!(out, "  note: {note}").unwrap();
    }
}

fn render_certificate(cert: &Certificate) -> String {
    let mut out = format!(
        "p = {}, n ranges over positive multiples of {}\nrearrangement identity: {}\n",
        cert.p,
        cert.divisibility,
        if cert.rearrangement { "holds" } else { "FAILS" }
    );
    for s in &cert.steps {
        render_step(&mut out, s);
    }
    writeln!(
        out,
        "dimension leading term: {}, degree {}",
        cert.dimension_leading_term, cert.degree
    )
    .unwrap();
    writeln!(out, "verdict: {}", cert.verdict).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_squares() {
        assert_eq!(prime_square_root(121), Some(11));
        assert_eq!(prime_square_root(4), Some(2));
        assert_eq!(prime_square_root(16), None);
        assert_eq!(prime_square_root(7), None);
    }
}
