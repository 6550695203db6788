//! One function per subcommand. Each returns a JSON report, its text form,
//! and whether the analysis came out positive.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use ratreal_core::matrix::{eigenvalues, inertia, Inertia};
use ratreal_core::{
    build_gpe_canonical, build_odd_canonical, build_po, canonical_gpe_certificate,
    certify_minimal_via_d, classify_axis, close_loop, design_pole_moving_gain, extract_factor,
    find_regularizing_gain, hamiltonian_closed_loop, mcmillan_degree, nonminimal_dhat,
    scalar_spectral_factorize, spectral_factorization_feasible, verify_gp_certificate,
    verify_gpe_certificates, verify_hermitian_axis_certificate, verify_odd_certificate,
    verify_product, verify_scalar_product, Certificate, ChainLevel, ComplexMatrix, FactorData,
    GridConfig, HamiltonianLoop, ProductCheck, Realization, Tolerance, WitnessKind,
};
use serde_json::{json, Value};

use crate::doc::{complex_value, matrix_value, CertificateDoc, Document, ParseError, Payload};
use crate::render;

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or mismatched input (exit 2).
    Parse(String),
    /// Input is well-formed but outside what the operation accepts (exit 3).
    Domain(String),
    /// The analysis answered "no" and there is nothing else to report (exit 1).
    Negative(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Domain(m) | CliError::Negative(m) => f.write_str(m),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.0)
    }
}

impl From<ratreal_core::Error> for CliError {
    fn from(e: ratreal_core::Error) -> Self {
        use ratreal_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Dimension { .. } | E::NonFinite { .. } => CliError::Parse(msg),
            E::PseudoSpectral(_) | E::NotMinimal { .. } => CliError::Negative(msg),
            E::Domain(_) | E::Pole { .. } | E::Unsupported(_) | E::Numerical(_) => {
                CliError::Domain(msg)
            }
        }
    }
}

pub type CmdResult = Result<Output, CliError>;

pub struct Output {
    pub report: Value,
    pub human: String,
    /// `false` maps to exit code 1.
    pub positive: bool,
}

/// Settings shared by every command.
pub struct Context {
    pub tol: Tolerance,
    pub grid: GridConfig,
    pub seed: u64,
}

impl Context {
    fn product_check(&self) -> ProductCheck {
        ProductCheck {
            seed: self.seed,
            ..ProductCheck::default()
        }
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn complex_list(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| complex_value(*z)).collect())
}

fn inertia_value(i: Inertia) -> Value {
    json!({ "negative": i.negative, "zero": i.zero, "positive": i.positive })
}

fn chain_name(c: ChainLevel) -> &'static str {
    match c {
        ChainLevel::None => "none",
        ChainLevel::CertificatesOnly => "certificates_only",
        ChainLevel::SameInertia => "same_inertia",
        ChainLevel::UnitarilySimilar => "unitarily_similar",
        ChainLevel::Involutions => "involutions",
        ChainLevel::Canonical => "canonical",
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    Ok(Document::read(path)?)
}

fn expect_realization(doc: Document, path: &Path) -> Result<Realization, CliError> {
    match doc.payload {
        Payload::Realization(r) => Ok(r),
        other => Err(CliError::Parse(format!(
            "{}: expected a realization document, found {}",
            path.display(),
            other.kind().as_str()
        ))),
    }
}

fn expect_factor(doc: Document, path: &Path) -> Result<FactorData, CliError> {
    match doc.payload {
        Payload::Factor(f) => Ok(f),
        other => Err(CliError::Parse(format!(
            "{}: expected a factor document, found {}",
            path.display(),
            other.kind().as_str()
        ))),
    }
}

fn expect_gain(path: &Path) -> Result<ComplexMatrix, CliError> {
    match load(path)?.payload {
        Payload::Gain(k) => Ok(k),
        other => Err(CliError::Parse(format!(
            "{}: expected a gain document, found {}",
            path.display(),
            other.kind().as_str()
        ))),
    }
}

fn write_doc(doc: &Document, out: Option<&PathBuf>) -> Result<(), CliError> {
    if let Some(path) = out {
        std::fs::write(path, doc.to_canonical_string())
            .map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn realization_summary(r: &Realization) -> String {
    format!(
        "states {}, inputs {}, outputs {}\nsystem matrix L = [[A, B], [C, D]]:\n{}",
        r.n(),
        r.m(),
        r.p(),
        render::matrix(&r.system_matrix())
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildClass {
    Gpe,
    Odd,
    Po,
}

pub fn build(
    ctx: &Context,
    class: BuildClass,
    input: &Path,
    out: Option<&PathBuf>,
    nonminimal: bool,
) -> CmdResult {
    let doc = load(input)?;
    let mut replaced: Option<(ComplexMatrix, Complex64)> = None;
    let (r, label) = match class {
        BuildClass::Gpe => {
            let mut f = expect_factor(doc, input)?;
            if nonminimal {
                let (dhat, lambda) = nonminimal_dhat(&f, &ctx.tol)?;
                f.dhat = dhat.clone();
                replaced = Some((dhat, lambda));
            }
            (build_gpe_canonical(&f), "gpe")
        }
        BuildClass::Odd => match doc.payload {
            Payload::OddBlocks(o) => (
                build_odd_canonical(&o.t1, &o.t2, &o.t3, &o.b1, &o.b2, o.coupling.as_ref(), &ctx.tol)?,
                "odd",
            ),
            other => {
                return Err(CliError::Parse(format!(
                    "--odd needs an odd_blocks document, found {}",
                    other.kind().as_str()
                )))
            }
        },
        BuildClass::Po => match doc.payload {
            Payload::PoBlocks(p) => (build_po(&p.tn, &p.tp, &p.b, &ctx.tol)?, "po"),
            other => {
                return Err(CliError::Parse(format!(
                    "--po needs a po_blocks document, found {}",
                    other.kind().as_str()
                )))
            }
        },
    };
    let out_doc = Document::new(Payload::Realization(r.clone())).with_meta("built_as", label);
    write_doc(&out_doc, out)?;
    let mut human = realization_summary(&r);
    let extra = match &replaced {
        Some((dhat, lambda)) => {
            human.push_str(&format!(
                "D̂ replaced using eigenvalue {} of Â:\n{}",
                render::complex(*lambda),
                render::matrix(dhat)
            ));
            json!({ "dhat": matrix_value(dhat), "lambda": complex_value(*lambda) })
        }
        None => Value::Null,
    };
    Ok(Output {
        report: json!({
            "command": "build",
            "class": label,
            "system_matrix": matrix_value(&r.system_matrix()),
            "nonminimal": extra,
            "document": out_doc.to_value(),
        }),
        human,
        positive: true,
    })
}

pub fn classify(ctx: &Context, input: &Path, emit_grid: bool) -> CmdResult {
    let r = expect_realization(load(input)?, input)?;
    let rep = classify_axis(&r, &ctx.grid, &ctx.tol)?;
    let names: Vec<&str> = rep.classes.iter().map(|c| c.name()).collect();
    let lowest = rep.grid.iter().min_by(|a, b| a.min_eig.total_cmp(&b.min_eig));
    let herm = rep.grid.iter().map(|g| g.herm_defect).fold(0.0, f64::max);
    let skew = rep.grid.iter().map(|g| g.skew_defect).fold(0.0, f64::max);
    let intervals: Vec<Value> = rep
        .excluded_intervals
        .iter()
        .map(|(lo, hi)| json!([num(*lo), num(*hi)]))
        .collect();
    let mut report = json!({
        "command": "classify",
        "classes": names,
        "grid_points": rep.grid.len(),
        "min_eig": lowest.map_or(Value::Null, |g| num(g.min_eig)),
        "min_eig_omega": lowest.map_or(Value::Null, |g| num(g.omega)),
        "max_herm_defect": num(herm),
        "max_skew_defect": num(skew),
        "excluded_intervals": intervals,
    });
    if emit_grid {
        report["grid"] = rep
            .grid
            .iter()
            .map(|g| {
                json!({
                    "omega": num(g.omega),
                    "min_eig": num(g.min_eig),
                    "herm_defect": num(g.herm_defect),
                    "skew_defect": num(g.skew_defect),
                })
            })
            .collect();
    }
    let human = render::pairs(&[
        (
            "classes",
            if names.is_empty() { "(none)".into() } else { names.join(", ") },
        ),
        ("grid points", rep.grid.len().to_string()),
        (
            "min eigenvalue of Ψ+Ψ*",
            lowest.map_or("-".into(), |g| format!("{:.3e} at ω = {:.4e}", g.min_eig, g.omega)),
        ),
        ("max Hermitian defect", format!("{herm:.3e}")),
        ("max skew defect", format!("{skew:.3e}")),
        ("excluded intervals", rep.excluded_intervals.len().to_string()),
    ]);
    Ok(Output {
        report,
        human,
        positive: true,
    })
}

fn certificate_value(c: &Certificate, tol: &Tolerance) -> Result<Value, CliError> {
    Ok(json!({
        "valid": c.valid,
        "residual": num(c.residual),
        "min_eig_of_residual": num(c.min_eig_of_residual),
        "hhat_inertia": inertia_value(inertia(&c.hhat, tol)?),
        "hhat_negative_definite": c.hhat_negative_definite,
    }))
}

fn certificate_lines(name: &str, c: &Certificate) -> Vec<(String, String)> {
    vec![(
        name.to_owned(),
        format!(
            "{} (residual {:.3e}, min eigenvalue {:.3e})",
            if c.valid { "valid" } else { "INVALID" },
            c.residual,
            c.min_eig_of_residual
        ),
    )]
}

pub fn certify(
    ctx: &Context,
    input: &Path,
    cert: Option<&PathBuf>,
    canonical: bool,
    out: Option<&PathBuf>,
) -> CmdResult {
    let r = expect_realization(load(input)?, input)?;
    let l = r.system_matrix();
    let (n, p) = (r.n(), r.p());
    if p != r.m() {
        return Err(CliError::Domain("certificates need a square function".into()));
    }
    let claim = match (cert, canonical) {
        (Some(path), false) => match load(path)?.payload {
            Payload::Certificate(c) => c,
            other => {
                return Err(CliError::Parse(format!(
                    "{}: expected a certificate document, found {}",
                    path.display(),
                    other.kind().as_str()
                )))
            }
        },
        (None, true) => {
            if n % 2 != 0 {
                return Err(CliError::Domain(format!(
                    "the canonical pair needs an even state dimension, found {n}"
                )));
            }
            let (h1, h2) = canonical_gpe_certificate(n / 2)?;
            CertificateDoc::Gpe { h1, h2 }
        }
        _ => return Err(CliError::Parse("give exactly one of --cert or --canonical".into())),
    };
    write_doc(&Document::new(Payload::Certificate(claim.clone())), out)?;
    let tol = &ctx.tol;
    let (report, lines, valid) = match &claim {
        CertificateDoc::Gpe { h1, h2 } => {
            let half = h1.nrows() / 2;
            if h1.nrows() != n || h1.nrows() % 2 != 0 {
                return Err(CliError::Parse(format!(
                    "GPE certificates must be {n}x{n} with n even, found {}x{}",
                    h1.nrows(),
                    h1.ncols()
                )));
            }
            let certs = verify_gpe_certificates(&l, h1, h2, half, p, tol)?;
            let mut lines = certificate_lines("GP certificate", &certs.gp);
            lines.extend(certificate_lines("Hermitian-axis certificate", &certs.axis));
            lines.push(("chain level".into(), chain_name(certs.chain).into()));
            (
                json!({
                    "type": "gpe",
                    "gp": certificate_value(&certs.gp, tol)?,
                    "axis": certificate_value(&certs.axis, tol)?,
                    "chain": chain_name(certs.chain),
                    "valid": certs.valid(),
                }),
                lines,
                certs.valid(),
            )
        }
        CertificateDoc::Gp(h) | CertificateDoc::Axis(h) | CertificateDoc::Odd(h) => {
            let (ty, c) = match &claim {
                CertificateDoc::Gp(_) => ("gp", verify_gp_certificate(&l, h, n, p, tol)?),
                CertificateDoc::Axis(_) => ("axis", verify_hermitian_axis_certificate(&l, h, n, p, tol)?),
                _ => ("odd", verify_odd_certificate(&l, h, n, p, tol)?),
            };
            let mut v = certificate_value(&c, tol)?;
            v["type"] = json!(ty);
            let mut lines = certificate_lines(&format!("{ty} certificate"), &c);
            let i = inertia(h, tol)?;
            lines.push((
                "inertia of Ĥ".into(),
                format!("({}, {}, {})", i.negative, i.zero, i.positive),
            ));
            (v, lines, c.valid)
        }
    };
    let mut report = report;
    report["command"] = json!("certify");
    let borrowed: Vec<(&str, String)> = lines.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    Ok(Output {
        report,
        human: render::pairs(&borrowed),
        positive: valid,
    })
}

pub fn minimality(ctx: &Context, input: &Path, via_d: bool) -> CmdResult {
    let r = expect_realization(load(input)?, input)?;
    let rep = mcmillan_degree(&r, &ctx.tol)?;
    let witnesses: Vec<Value> = rep
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "eigenvalue": complex_value(w.eigenvalue),
                "kind": match w.kind {
                    WitnessKind::Uncontrollable => "uncontrollable",
                    WitnessKind::Unobservable => "unobservable",
                },
                "direction": complex_list(w.direction.as_slice()),
            })
        })
        .collect();
    let square = r.p() == r.m();
    let mut report = json!({
        "command": "minimality",
        "mcmillan_degree": rep.mcmillan_degree,
        "state_dim": rep.state_dim,
        "is_minimal": rep.is_minimal,
        "witnesses": witnesses,
        "common_spectrum": if square { complex_list(&rep.common_spectrum) } else { Value::Null },
    });
    let mut lines = vec![
        ("McMillan degree", rep.mcmillan_degree.to_string()),
        ("state dimension", rep.state_dim.to_string()),
        ("minimal", rep.is_minimal.to_string()),
        (
            "common spectrum of A and L",
            if square { render::list(&rep.common_spectrum) } else { "n/a (non-square)".into() },
        ),
    ];
    for w in &rep.witnesses {
        lines.push((
            match w.kind {
                WitnessKind::Uncontrollable => "uncontrollable mode",
                WitnessKind::Unobservable => "unobservable mode",
            },
            render::complex(w.eigenvalue),
        ));
    }
    if via_d && rep.is_minimal && square && r.n() > 0 {
        let d = certify_minimal_via_d(&r, &ctx.tol)?;
        report["separating_d"] = matrix_value(&d);
        lines.push(("separating D", format!("\n{}", render::matrix(&d))));
    }
    Ok(Output {
        report,
        human: render::pairs(&lines),
        positive: rep.is_minimal,
    })
}

fn hamiltonian_value(h: &HamiltonianLoop) -> Value {
    json!({
        "a_cl": matrix_value(&h.a_cl),
        "eigenvalues": complex_list(&h.eigenvalues),
        "imag_axis_free": h.imag_axis_free,
        "min_axis_distance": num(h.min_axis_distance),
        "spectrum_symmetric": h.spectrum_symmetric,
        "gain_is_dissipative": h.gain_is_dissipative,
    })
}

fn hamiltonian_lines(h: &HamiltonianLoop) -> Vec<(&'static str, String)> {
    vec![
        ("closed-loop eigenvalues", render::list(&h.eigenvalues)),
        ("imaginary axis free", h.imag_axis_free.to_string()),
        ("min |Re λ|", format!("{:.3e}", h.min_axis_distance)),
        ("spectrum symmetric", h.spectrum_symmetric.to_string()),
    ]
}

pub fn feedback_design(ctx: &Context, input: &Path, out: Option<&PathBuf>) -> CmdResult {
    let r = expect_realization(load(input)?, input)?;
    let d = design_pole_moving_gain(&r, &ctx.tol)?;
    let a_cl = r.a() + r.b() * &d.k * r.c();
    let spec_a = eigenvalues(r.a())?;
    let spec_cl = eigenvalues(&a_cl)?;
    let doc = Document::new(Payload::Gain(d.k.clone())).with_meta("strategy", d.strategy.name());
    write_doc(&doc, out)?;
    let report = json!({
        "command": "feedback design",
        "k": matrix_value(&d.k),
        "khat": matrix_value(&d.khat),
        "delta": num(d.delta),
        "eta": num(d.eta),
        "rank_b": d.beta,
        "rank_c": d.gamma,
        "jordan_blocks": d.r,
        "strategy": d.strategy.name(),
        "halvings": d.halvings,
        "min_distance": num(d.min_distance),
        "spectrum_a": complex_list(&spec_a),
        "spectrum_closed_loop": complex_list(&spec_cl),
        "document": doc.to_value(),
    });
    let human = render::pairs(&[
        ("strategy", d.strategy.name().into()),
        ("rank B, rank C, Jordan blocks", format!("{}, {}, {}", d.beta, d.gamma, d.r)),
        ("δ (after halvings)", format!("{:.6e} ({})", d.delta, d.halvings)),
        ("η", format!("{:.6e}", d.eta)),
        ("spect(A)", render::list(&spec_a)),
        ("spect(A + BKC)", render::list(&spec_cl)),
        ("min distance", format!("{:.3e}", d.min_distance)),
        ("K", format!("\n{}", render::matrix(&d.k))),
    ]);
    Ok(Output {
        report,
        human,
        positive: true,
    })
}

pub fn feedback_feasible(ctx: &Context, input: &Path) -> CmdResult {
    let f = expect_factor(load(input)?, input)?;
    let rep = spectral_factorization_feasible(&f, &ctx.tol)?;
    let failures: Vec<Value> = rep
        .failures
        .iter()
        .map(|fl| {
            json!({
                "r": num(fl.r),
                "test": match fl.which {
                    ratreal_core::RankTest::ControlRank => "control_rank",
                    ratreal_core::RankTest::ObserveRank => "observe_rank",
                },
                "rank_found": fl.rank_found,
            })
        })
        .collect();
    let points: Vec<Value> = rep.checked_points.iter().map(|&x| num(x)).collect();
    let mut lines = vec![
        ("feasible", rep.feasible.to_string()),
        (
            "axis eigenvalues checked (ir)",
            if points.is_empty() {
                "(none)".into()
            } else {
                rep.checked_points.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
            },
        ),
    ];
    for fl in &rep.failures {
        lines.push(("rank failure", format!("r = {:.6}, {:?}, rank {}", fl.r, fl.which, fl.rank_found)));
    }
    Ok(Output {
        report: json!({
            "command": "feedback feasible",
            "feasible": rep.feasible,
            "checked_points": points,
            "failures": failures,
        }),
        human: render::pairs(&lines),
        positive: rep.feasible,
    })
}

pub fn feedback_regularize(ctx: &Context, input: &Path, out: Option<&PathBuf>) -> CmdResult {
    let f = expect_factor(load(input)?, input)?;
    let g = find_regularizing_gain(&f, &ctx.tol)?;
    let doc = Document::new(Payload::Gain(g.k.clone())).with_meta("alpha", format!("{}", g.alpha));
    write_doc(&doc, out)?;
    let mut lines = vec![
        ("α", format!("{}", g.alpha)),
        ("K", format!("\n{}", render::matrix(&g.k))),
        ("A_cl", format!("\n{}", render::matrix(&g.closed_loop.a_cl))),
    ];
    lines.extend(hamiltonian_lines(&g.closed_loop));
    Ok(Output {
        report: json!({
            "command": "feedback regularize",
            "alpha": num(g.alpha),
            "k": matrix_value(&g.k),
            "closed_loop": hamiltonian_value(&g.closed_loop),
            "document": doc.to_value(),
        }),
        human: render::pairs(&lines),
        positive: true,
    })
}

pub fn feedback_close(ctx: &Context, input: &Path, gain: &Path, out: Option<&PathBuf>) -> CmdResult {
    let k = expect_gain(gain)?;
    let doc = load(input)?;
    let (r, hamiltonian) = match doc.payload {
        Payload::Realization(r) => (r, None),
        Payload::Factor(f) => {
            let h = hamiltonian_closed_loop(&f, &k, &ctx.tol)?;
            (build_gpe_canonical(&f), Some(h))
        }
        other => {
            return Err(CliError::Parse(format!(
                "feedback close needs a realization or factor, found {}",
                other.kind().as_str()
            )))
        }
    };
    let cl = close_loop(&r, &k, &ctx.tol)?;
    let out_doc = Document::new(Payload::Realization(cl.clone())).with_meta("closed_loop", "u = K y + v");
    write_doc(&out_doc, out)?;
    let mut human = realization_summary(&cl);
    let mut report = json!({
        "command": "feedback close",
        "system_matrix": matrix_value(&cl.system_matrix()),
        "document": out_doc.to_value(),
    });
    if let Some(h) = &hamiltonian {
        report["hamiltonian"] = hamiltonian_value(h);
        human.push_str(&render::pairs(&hamiltonian_lines(h)));
    }
    Ok(Output {
        report,
        human,
        positive: true,
    })
}

pub fn factorize(ctx: &Context, input: &Path, out: Option<&PathBuf>, verify: bool) -> CmdResult {
    let doc = load(input)?;
    let check = ctx.product_check();
    let (factor_doc, outcome) = match doc.payload {
        Payload::Realization(r) => {
            if r.n() % 2 != 0 || r.p() != r.m() {
                return Err(CliError::Domain(format!(
                    "a canonical GPE realization has an even state dimension and square D; found {} states, {}x{}",
                    r.n(),
                    r.p(),
                    r.m()
                )));
            }
            let f = extract_factor(&r, r.n() / 2, r.p(), &ctx.tol)?;
            let outcome = if verify {
                Some(verify_product(&r, &f.realization(), &check)?)
            } else {
                None
            };
            (Document::new(Payload::Factor(f)), outcome)
        }
        Payload::ScalarRational(psi) => {
            let g = scalar_spectral_factorize(&psi)?;
            let outcome = if verify {
                Some(verify_scalar_product(&psi, &g, &check)?)
            } else {
                None
            };
            (Document::new(Payload::ScalarRational(g)), outcome)
        }
        other => {
            return Err(CliError::Parse(format!(
                "factorize needs a realization or scalar_rational, found {}",
                other.kind().as_str()
            )))
        }
    };
    write_doc(&factor_doc, out)?;
    let mut human = String::new();
    match &factor_doc.payload {
        Payload::Factor(f) => {
            for (name, m) in [("Â", &f.ahat), ("B̂", &f.bhat), ("Ĉ", &f.chat), ("D̂", &f.dhat)] {
                human.push_str(&format!("{name}:\n{}", render::matrix(m)));
            }
        }
        Payload::ScalarRational(g) => {
            human.push_str(&render::pairs(&[
                ("zeros", render::list(g.numerator_roots())),
                ("poles", render::list(g.denominator_roots())),
                ("gain", render::complex(g.gain())),
            ]));
        }
        _ => unreachable!("factor documents are built above"),
    }
    let mut report = json!({
        "command": "factorize",
        "document": factor_doc.to_value(),
    });
    let mut positive = true;
    if let Some(o) = outcome {
        report["verify"] = json!({
            "passed": o.passed,
            "max_rel_error": num(o.max_rel_error),
            "samples": check.samples,
            "rel_tol": num(check.rel_tol),
            "seed": check.seed,
        });
        human.push_str(&render::pairs(&[(
            "product check",
            format!(
                "{} (max relative error {:.3e} over {} samples)",
                if o.passed { "passed" } else { "FAILED" },
                o.max_rel_error,
                check.samples
            ),
        )]));
        positive = o.passed;
    }
    Ok(Output {
        report,
        human,
        positive,
    })
}

pub fn eval(ctx: &Context, input: &Path, points: &[Complex64]) -> CmdResult {
    let doc = load(input)?;
    let mut values = Vec::new();
    let mut human = String::new();
    for &s in points {
        match &doc.payload {
            Payload::Realization(r) => {
                let v = r.evaluate_tol(s, &ctx.tol)?.value;
                human.push_str(&format!("F({}) =\n{}", render::complex(s), render::matrix(&v)));
                values.push(json!({ "s": complex_value(s), "value": matrix_value(&v) }));
            }
            Payload::ScalarRational(g) => {
                let v = g.evaluate(s)?;
                human.push_str(&format!("Ψ({}) = {}\n", render::complex(s), render::complex(v)));
                values.push(json!({ "s": complex_value(s), "value": complex_value(v) }));
            }
            other => {
                return Err(CliError::Parse(format!(
                    "eval needs a realization or scalar_rational, found {}",
                    other.kind().as_str()
                )))
            }
        }
    }
    Ok(Output {
        report: json!({ "command": "eval", "samples": values }),
        human,
        positive: true,
    })
}
