//! Command implementations behind the `derham` binary.

pub mod report;

use std::path::PathBuf;

use thiserror::Error;

use derham_core::config::{Algebra, AlgebraConfig, ConfigError};
use derham_core::diffcalc::{
    check_braid_compat_modulo, check_complex, derive_d2x_d2x_relations, derive_dx_d2x_relations,
    derive_f_relations, derive_x_d2x_relations, CalculusSpec, RelationKind,
};
use derham_core::expr::{parse_element, ParseError};
use derham_core::freealg::Element;
use derham_core::matrix::StructureMatrix;
use derham_core::plane2d::{
    c_matrix, check_covariance, coordinate_plane, plane_matrix, second_order_plane,
    solve_q_branches, swap_duality_check, CoactionSpec, Factorization, Family, GlKind, PlaneError,
    QBranch, QBranchLabel, Transcription,
};
use derham_core::symring::{q_integer, Coefficient, Ring};
use derham_core::tensorcheck::{
    build_from_hecke, check_bff, check_braid, check_braid_compat, check_f_consistency, check_hecke,
    check_linear_condition, IdentityCheck, TensorError,
};

pub use report::{Report, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Derive,
    NormalForm(String),
    Confluence,
    Complex,
    Case2d,
    HeckeBuild,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Derive => "derive",
            Command::NormalForm(_) => "normal-form",
            Command::Confluence => "confluence",
            Command::Complex => "complex",
            Command::Case2d => "case2d",
            Command::HeckeBuild => "hecke-build",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub branch: Option<String>,
    pub family: Option<u8>,
    pub max_len: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            config: None,
            branch: None,
            family: None,
            max_len: 4,
        }
    }
}

/// Errors that prevent a report from being produced (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("expression {0}")]
    Parse(#[from] ParseError),
}

pub fn run(cmd: &Command, opts: &Options) -> Result<Report, CliError> {
    match cmd {
        Command::Check => check(opts),
        Command::Derive => derive(opts),
        Command::NormalForm(src) => normal_form(opts, src),
        Command::Confluence => confluence(opts),
        Command::Complex => complex(opts),
        Command::Case2d => case2d(opts),
        Command::HeckeBuild => hecke_build(opts),
    }
}

fn load(opts: &Options) -> Result<Algebra, CliError> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --config <path>".into()))?;
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut cfg = AlgebraConfig::from_json(&src)?;
    if let Some(b) = &opts.branch {
        cfg.q = Some(b.clone());
    }
    Ok(cfg.build()?)
}

/// Like `load`, but fills missing B, C, F from a Hecke R-matrix when possible.
fn load_filled(opts: &Options) -> Result<Algebra, CliError> {
    let mut alg = load(opts)?;
    if let (Some(r), Some(mu), Some(lambda), Some(q), None, None) =
        (&alg.r, &alg.mu, &alg.lambda, &alg.q, &alg.b, &alg.c)
    {
        if let Ok(t) = build_from_hecke(r, mu, lambda, q) {
            alg.b = Some(t.b);
            alg.c = Some(t.c);
            alg.f = Some(t.f);
        }
    }
    Ok(alg)
}

fn need<T: Clone>(v: &Option<T>, name: &'static str) -> Result<T, CliError> {
    v.clone()
        .ok_or(CliError::Config(ConfigError::Missing(name)))
}

fn identity_notes(c: &IdentityCheck) -> Vec<String> {
    let mut notes: Vec<String> = c
        .residual
        .iter()
        .take(3)
        .map(|((r, col), v)| format!("residual entry ({r}, {col}) = {v}"))
        .collect();
    if c.residual.len() > 3 {
        notes.push(format!("... {} nonzero entries in total", c.residual.len()));
    }
    notes
}

fn record(report: &mut Report, prefix: &str, c: &IdentityCheck) {
    report.check(format!("{prefix}{}", c.name), c.holds(), identity_notes(c));
}

/// The relation-level form decides; the entrywise identity is only reported.
fn compat(
    report: &mut Report,
    prefix: &str,
    b: &StructureMatrix,
    c: &StructureMatrix,
) -> Result<(), CliError> {
    let strict = check_braid_compat(b, c).map_err(tensor_config)?;
    let modulo = check_braid_compat_modulo(b, c).map_err(|e| CliError::Config(e.into()))?;
    record(report, prefix, &modulo);
    report.section(
        format!("{prefix}entrywise tensor identity"),
        vec![strict.to_string()],
    );
    Ok(())
}

fn matrix_lines(m: &StructureMatrix) -> Vec<String> {
    m.render_rows()
        .into_iter()
        .map(|r| format!("[{}]", r.join(", ")))
        .collect()
}

fn relation_lines(elems: &[Element]) -> Vec<String> {
    elems
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| format!("{e} = 0"))
        .collect()
}

fn cubic_holds(q: &Coefficient) -> bool {
    (&(q * q) * q).is_one()
}

fn check(opts: &Options) -> Result<Report, CliError> {
    let alg = load(opts)?;
    let mut report = Report::new("check");
    let mut triple = (alg.b.clone(), alg.c.clone(), alg.f.clone());
    if let Some(r) = &alg.r {
        let mu = need(&alg.mu, "mu")?;
        let lambda = need(&alg.lambda, "lambda")?;
        record(&mut report, "", &check_braid(r));
        record(
            &mut report,
            "",
            &check_hecke(r, &mu, &lambda).map_err(tensor_config)?,
        );
        if triple.0.is_none() || triple.1.is_none() {
            let q = need(&alg.q, "Q")?;
            match build_from_hecke(r, &mu, &lambda, &q) {
                Ok(t) => triple = (Some(t.b), Some(t.c), Some(t.f)),
                Err(e) => {
                    report.check("construct (B, C, F) from R", false, vec![e.to_string()]);
                    return Ok(report);
                }
            }
        }
    }
    let b = triple
        .0
        .ok_or(CliError::Config(ConfigError::Missing("B")))?;
    let c = triple
        .1
        .ok_or(CliError::Config(ConfigError::Missing("C")))?;
    record(
        &mut report,
        "",
        &check_linear_condition(&b, &c).map_err(tensor_config)?,
    );
    compat(&mut report, "", &b, &c)?;
    match (&triple.2, &alg.q) {
        (Some(f), q) => {
            record(&mut report, "", &check_bff(&b, f).map_err(tensor_config)?);
            match q {
                Some(q) => {
                    let fc = check_f_consistency(&c, f, q).map_err(tensor_config)?;
                    record(&mut report, "", &fc.full);
                    if cubic_holds(q) {
                        record(&mut report, "", &fc.factored);
                    } else {
                        report.skip(fc.factored.name, "applies only when Q^3 = 1");
                    }
                }
                None => report.skip("F consistency", "no Q given"),
            }
        }
        (None, _) => report.skip("F conditions", "no F given"),
    }
    report.section(
        "Q",
        vec![alg
            .q
            .as_ref()
            .map_or("not given".to_string(), |q| q.to_string())],
    );
    Ok(report)
}

fn tensor_config(e: TensorError) -> CliError {
    CliError::Usage(e.to_string())
}

fn derive(opts: &Options) -> Result<Report, CliError> {
    let alg = load_filled(opts)?;
    let c = need(&alg.c, "C")?;
    let q = need(&alg.q, "Q")?;
    let mut report = Report::new("derive");
    let dc = |e: derham_core::diffcalc::DiffCalcError| CliError::Config(e.into());
    report.section(
        "Q",
        vec![q.to_string(), format!("[3]_Q = {}", q_integer(3, &q))],
    );
    report.section(
        "x-d2x relations",
        relation_lines(&derive_x_d2x_relations(&c, &q).map_err(dc)?),
    );
    report.section(
        "dx-d2x relations",
        relation_lines(&derive_dx_d2x_relations(&c, &q).map_err(dc)?),
    );
    let dd = derive_d2x_d2x_relations(&c, &q).map_err(dc)?;
    let lines = match &dd.reduced {
        Some(r) => relation_lines(r),
        None => vec!["[3]_Q = 0: the prefactored relations vanish identically".to_string()],
    };
    report.section("d2x-d2x relations", lines);
    if let Some(f) = &alg.f {
        let fr = derive_f_relations(f, &q).map_err(dc)?;
        report.section("x-d2x relations from F", relation_lines(&fr.coordinate));
        report.section("d2x-d2x relations from F", relation_lines(&fr.second));
    }
    Ok(report)
}

fn spec_for(alg: &Algebra) -> Result<CalculusSpec, CliError> {
    if alg.q.is_some() {
        return Ok(alg.calculus()?);
    }
    let b = need(&alg.b, "B")?;
    let c = need(&alg.c, "C")?;
    let one = Coefficient::one(&alg.ring);
    let kinds = [RelationKind::Plane, RelationKind::FirstOrder];
    CalculusSpec::assemble_with(b, c, None, one, &kinds).map_err(|e| CliError::Config(e.into()))
}

fn normal_form(opts: &Options, src: &str) -> Result<Report, CliError> {
    let alg = load_filled(opts)?;
    let spec = spec_for(&alg)?;
    let e = parse_element(spec.alphabet(), spec.ring(), src)?;
    let mut report = Report::new("normal-form");
    report.section("input", vec![e.to_string()]);
    report.section(
        "normal form",
        vec![spec.relations().normal_form(&e).to_string()],
    );
    Ok(report)
}

fn confluence(opts: &Options) -> Result<Report, CliError> {
    let alg = load_filled(opts)?;
    let spec = spec_for(&alg)?;
    let mut report = Report::new("confluence");
    report.section("relations", spec.relations().render());
    let pairs = spec.relations().critical_pairs();
    let bad: Vec<String> = pairs
        .iter()
        .filter(|p| !p.resolved)
        .take(5)
        .map(|p| {
            format!(
                "{}: {} vs {}",
                p.word.render(spec.alphabet()),
                p.left,
                p.right
            )
        })
        .collect();
    let n_bad = pairs.iter().filter(|p| !p.resolved).count();
    report.check(
        format!(
            "critical pairs resolved ({} of {})",
            pairs.len() - n_bad,
            pairs.len()
        ),
        n_bad == 0,
        bad,
    );
    Ok(report)
}

fn complex(opts: &Options) -> Result<Report, CliError> {
    let alg = load_filled(opts)?;
    let spec = alg.calculus()?;
    let r = check_complex(&spec, opts.max_len);
    let mut report = Report::new("complex");
    report.section("relations", spec.relations().render());
    let notes = |ws: &[derham_core::diffcalc::Witness]| -> Vec<String> {
        ws.iter()
            .take(5)
            .map(|w| format!("{} = {}", w.subject, w.residue))
            .collect()
    };
    report.check(
        format!(
            "d of every defining relation vanishes ({} relations)",
            r.relations_checked
        ),
        r.relation_failures.is_empty(),
        notes(&r.relation_failures),
    );
    report.check(
        format!(
            "d^3 vanishes on coordinate words up to length {} ({} words)",
            opts.max_len, r.words_checked
        ),
        r.d_cubed_failures.is_empty(),
        notes(&r.d_cubed_failures),
    );
    report.check(
        "d raises grade by one",
        r.grade_failures.is_empty(),
        notes(&r.grade_failures),
    );
    Ok(report)
}

fn hecke_build(opts: &Options) -> Result<Report, CliError> {
    let alg = load(opts)?;
    let r = need(&alg.r, "R")?;
    let mu = need(&alg.mu, "mu")?;
    let lambda = need(&alg.lambda, "lambda")?;
    let q = need(&alg.q, "Q")?;
    let mut report = Report::new("hecke-build");
    match build_from_hecke(&r, &mu, &lambda, &q) {
        Ok(t) => {
            report.section("B = R / mu", matrix_lines(&t.b));
            report.section("C = R / lambda", matrix_lines(&t.c));
            report.section("F = Q^2 R / mu", matrix_lines(&t.f));
            for c in &t.checks {
                record(&mut report, "", c);
            }
            match &t.factored {
                Some(c) => record(&mut report, "", c),
                None => report.skip("(E + C)(E - QF) = 0", "applies only when Q^3 = 1"),
            }
        }
        Err(TensorError::Precondition(v)) | Err(TensorError::Postcondition(v)) => {
            for c in &v {
                record(&mut report, "", c);
            }
        }
        Err(e @ TensorError::NotUnit(_)) => {
            report.check("mu and lambda are units", false, vec![e.to_string()])
        }
        Err(e) => return Err(tensor_config(e)),
    }
    Ok(report)
}

fn factorization_line(f: &Factorization) -> String {
    let factors: Vec<String> = f
        .factors
        .iter()
        .map(|l| format!("(Q^2 - {})", l.root))
        .collect();
    format!(
        "{} = ({}) * {}",
        f.condition,
        f.content,
        factors.join(" * ")
    )
}

fn plane_lines(c: &StructureMatrix, b: &QBranch) -> Vec<String> {
    match second_order_plane(c, b) {
        Ok(rs) => rs.render(),
        Err(PlaneError::CubicRootRefused(msg)) => vec![format!("refused: {msg}")],
        Err(e) => vec![format!("error: {e}")],
    }
}

fn covariance_line(
    report: &mut Report,
    raw_notes: &mut Vec<String>,
    plane_name: &str,
    plane: &derham_core::freealg::RelationSet,
    kind: GlKind,
) -> Result<(), CliError> {
    let ring = plane.ring();
    for t in [Transcription::Corrected, Transcription::Raw] {
        let co = CoactionSpec::glq2(ring, kind, t).map_err(|e| CliError::Config(e.into()))?;
        let rep = check_covariance(plane, &co).map_err(|e| CliError::Config(e.into()))?;
        let notes: Vec<String> = rep
            .failures
            .iter()
            .map(|(rel, res)| format!("{rel} transforms to {res}"))
            .collect();
        match t {
            Transcription::Corrected => report.check(
                format!("{plane_name} is covariant under {}", rep.coaction),
                rep.passed(),
                notes,
            ),
            Transcription::Raw => {
                let mut line = format!(
                    "{plane_name} under {}: {}",
                    rep.coaction,
                    if rep.passed() {
                        "covariant"
                    } else {
                        "not covariant"
                    }
                );
                if rep.unresolved_overlaps > 0 {
                    line.push_str(&format!(
                        ", {} unresolved overlaps",
                        rep.unresolved_overlaps
                    ));
                }
                raw_notes.push(line);
                raw_notes.extend(notes.into_iter().map(|n| format!("  {n}")));
            }
        }
    }
    Ok(())
}

fn case2d(opts: &Options) -> Result<Report, CliError> {
    let families: Vec<Family> = match opts.family {
        None => vec![Family::One, Family::Two],
        Some(n) => vec![Family::from_number(n)
            .ok_or_else(|| CliError::Usage(format!("--family must be 1 or 2, got {n}")))?],
    };
    let only = match &opts.branch {
        None => None,
        Some(s) => Some(
            QBranchLabel::parse(s)
                .ok_or_else(|| CliError::Usage(format!("unknown branch `{s}`")))?,
        ),
    };
    let ring = Ring::laurent(&["q", "r"]);
    let plane_err = |e: PlaneError| CliError::Config(e.into());
    let ring_err = |e: derham_core::symring::RingError| CliError::Config(e.into());
    let b = plane_matrix(&ring, "q").map_err(ring_err)?;
    let mut report = Report::new("case2d");
    report.section(
        "coordinate plane",
        coordinate_plane(&b).map_err(plane_err)?.render(),
    );
    let mut raw = Vec::new();
    covariance_line(
        &mut report,
        &mut raw,
        "coordinate plane",
        &coordinate_plane(&b).map_err(plane_err)?,
        GlKind::StandardQ,
    )?;
    for fam in families {
        let k = fam.number();
        let c = c_matrix(&ring, fam, "q", "r").map_err(ring_err)?;
        report.section(format!("C{k}"), matrix_lines(&c));
        record(
            &mut report,
            &format!("C{k}: "),
            &check_linear_condition(&b, &c).map_err(tensor_config)?,
        );
        compat(&mut report, &format!("C{k}: "), &b, &c)?;
        let sol = solve_q_branches(&c).map_err(plane_err)?;
        let mut lines: Vec<String> = sol.branches.iter().map(|b| b.to_string()).collect();
        lines.extend(
            sol.factorizations
                .iter()
                .map(|f| format!("evidence: {}", factorization_line(f))),
        );
        report.section(format!("Q branches for C{k}"), lines);
        let labels: Vec<QBranchLabel> = sol.branches.iter().map(|b| b.label).collect();
        report.check(
            format!("C{k}: branches are cubic_root, inverse_sqrt_r_plus, inverse_sqrt_r_minus, imaginary_unit"),
            labels
                == [
                    QBranchLabel::CubicRoot,
                    QBranchLabel::InverseSqrtPlus,
                    QBranchLabel::InverseSqrtMinus,
                    QBranchLabel::ImaginaryUnit,
                ],
            vec![],
        );
        for br in &sol.branches {
            if only.is_some_and(|l| l != br.label) {
                continue;
            }
            report.section(
                format!("second-order plane for C{k}, {}", br),
                plane_lines(&c, br),
            );
            let plane = match second_order_plane(&c, br) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let name = format!("C{k} {} plane", br.label.as_str());
            match br.label {
                QBranchLabel::ImaginaryUnit => covariance_line(
                    &mut report,
                    &mut raw,
                    &name,
                    &plane,
                    GlKind::for_family(fam),
                )?,
                _ => {
                    let r_free = plane
                        .relation_elements()
                        .iter()
                        .all(|e| !e.mentions_symbol("r"));
                    report.check(format!("{name} does not involve r"), r_free, vec![]);
                    covariance_line(&mut report, &mut raw, &name, &plane, GlKind::StandardQ)?
                }
            }
        }
    }
    let d = swap_duality_check(&ring, "q", "r").map_err(ring_err)?;
    report.section(
        "swap duality (x <-> y, q -> q^-1) from C1 to C2",
        d.tried
            .iter()
            .map(|(s, ok)| format!("{s}: {}", if *ok { "holds" } else { "fails" }))
            .collect(),
    );
    report.check("C1 and C2 are swap duals", d.holds(), vec![]);
    report.section("as-printed quantum group relations", raw);
    Ok(report)
}
