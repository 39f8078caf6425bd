//! The two-dimensional case study: the standard R-matrix, the two families
//! of first-order calculi, the admissible values of Q, the resulting planes of
//! second-order differentials, and their quantum-group covariance.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::diffcalc::{derive_d2x_d2x_relations, plane_relations, DiffCalcError};
use crate::freealg::{Alphabet, Element, FreeAlgError, Generator, RelationSet};
use crate::matrix::{MatrixError, StructureMatrix};
use crate::symring::{
    polynomial_sqrt, q_integer, quadratic_roots, Coefficient, GaussianRational, LinearFactor, Ring,
    RingError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("the case study needs a 4x4 structure matrix (n = 2), got n = {0}")]
    NotTwoDimensional(usize),
    #[error("{0}")]
    CubicRootRefused(String),
    #[error("cannot turn condition `{0}` into a branch: {1}")]
    Unsupported(String, String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    DiffCalc(#[from] DiffCalcError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub const CUBIC_ROOT_REFUSAL: &str =
    "Q^2 + Q + 1 = 0: d2x and d2y can not satisfy any particular binary relations";

fn rows(entries: [[&Coefficient; 4]; 4]) -> StructureMatrix {
    StructureMatrix::from_rows(
        2,
        entries
            .iter()
            .map(|r| r.iter().map(|c| (*c).clone()).collect())
            .collect(),
    )
    .expect("4x4 over one ring")
}

/// The standard 4x4 R-matrix in the symbol `q`.
pub fn standard_rhat(ring: &Arc<Ring>, q: &str) -> Result<StructureMatrix, RingError> {
    let qq = Coefficient::symbol(ring, q)?;
    let qi = qq.inverse()?;
    let z = Coefficient::zero(ring);
    let o = Coefficient::one(ring);
    let mid = &qq - &qi;
    Ok(rows([
        [&qq, &z, &z, &z],
        [&z, &mid, &o, &z],
        [&z, &o, &z, &z],
        [&z, &z, &z, &qq],
    ]))
}

/// `B = R̂ / q`, the coordinate plane `xy = q yx`.
pub fn plane_matrix(ring: &Arc<Ring>, q: &str) -> Result<StructureMatrix, RingError> {
    let rhat = standard_rhat(ring, q)?;
    Ok(rhat.scale(&Coefficient::symbol(ring, q)?.inverse()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    One,
    Two,
}

impl Family {
    pub fn from_number(n: u8) -> Option<Family> {
        match n {
            1 => Some(Family::One),
            2 => Some(Family::Two),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }
}

/// The first-order calculus matrix `C_1` or `C_2` in the symbols `q`, `r`.
pub fn c_matrix(
    ring: &Arc<Ring>,
    family: Family,
    q: &str,
    r: &str,
) -> Result<StructureMatrix, RingError> {
    let qq = Coefficient::symbol(ring, q)?;
    let rr = Coefficient::symbol(ring, r)?;
    let qi = qq.inverse()?;
    let z = Coefficient::zero(ring);
    let o = Coefficient::one(ring);
    let rm1 = &rr - &o;
    Ok(match family {
        Family::One => {
            let r_over_q = &rr * &qi;
            rows([
                [&rr, &z, &z, &z],
                [&z, &rm1, &qq, &z],
                [&z, &r_over_q, &z, &z],
                [&z, &z, &z, &rr],
            ])
        }
        Family::Two => {
            let qr = &qq * &rr;
            rows([
                [&rr, &z, &z, &z],
                [&z, &z, &qr, &z],
                [&z, &qi, &rm1, &z],
                [&z, &z, &z, &rr],
            ])
        }
    })
}

/// Conjugates by the index swap `1 <-> 2` and substitutes `q -> q^-1`.
pub fn swap_conjugate(m: &StructureMatrix, q: &str) -> Result<StructureMatrix, RingError> {
    let qq = Coefficient::symbol(m.ring(), q)?;
    let qi = qq.inverse()?;
    let s = |i: usize| 3 - i;
    let mut out = m.clone();
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                for l in 1..=2 {
                    let v = m.entry(s(i), s(j), s(k), s(l)).substitute(q, &qi)?;
                    out = out.with_entry(i, j, k, l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Which substitutions of `r` turn the swap-conjugate of `C_1` into `C_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapDuality {
    pub tried: Vec<(String, bool)>,
}

impl SwapDuality {
    pub fn holds(&self) -> bool {
        self.tried.iter().any(|(_, ok)| *ok)
    }

    pub fn working(&self) -> Vec<&str> {
        self.tried
            .iter()
            .filter(|(_, ok)| *ok)
            .map(|(s, _)| s.as_str())
            .collect()
    }
}

pub fn swap_duality_check(ring: &Arc<Ring>, q: &str, r: &str) -> Result<SwapDuality, RingError> {
    let c1 = c_matrix(ring, Family::One, q, r)?;
    let c2 = c_matrix(ring, Family::Two, q, r)?;
    let swapped = swap_conjugate(&c1, q)?;
    let rr = Coefficient::symbol(ring, r)?;
    let mut tried = Vec::new();
    for (label, value) in [
        (format!("{r} -> {r}"), rr.clone()),
        (format!("{r} -> {r}^-1"), rr.inverse()?),
    ] {
        let m = swapped.try_map(|c| c.substitute(r, &value))?;
        tried.push((label, m == c2));
    }
    Ok(SwapDuality { tried })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QBranchLabel {
    CubicRoot,
    InverseSqrtPlus,
    InverseSqrtMinus,
    ImaginaryUnit,
}

impl QBranchLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            QBranchLabel::CubicRoot => "cubic_root",
            QBranchLabel::InverseSqrtPlus => "inverse_sqrt_r_plus",
            QBranchLabel::InverseSqrtMinus => "inverse_sqrt_r_minus",
            QBranchLabel::ImaginaryUnit => "imaginary_unit",
        }
    }

    pub fn parse(s: &str) -> Option<QBranchLabel> {
        [
            QBranchLabel::CubicRoot,
            QBranchLabel::InverseSqrtPlus,
            QBranchLabel::InverseSqrtMinus,
            QBranchLabel::ImaginaryUnit,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
    }
}

/// An admissible value of Q. Inverse-square-root branches carry the
/// radicand `v` (Q² = 1/v), expressed in the ring of the structure matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBranch {
    pub label: QBranchLabel,
    pub radicand: Option<Coefficient>,
}

impl QBranch {
    pub fn cubic_root() -> Self {
        QBranch {
            label: QBranchLabel::CubicRoot,
            radicand: None,
        }
    }

    pub fn imaginary_unit() -> Self {
        QBranch {
            label: QBranchLabel::ImaginaryUnit,
            radicand: None,
        }
    }

    pub fn inverse_sqrt(radicand: Coefficient, plus: bool) -> Self {
        let label = if plus {
            QBranchLabel::InverseSqrtPlus
        } else {
            QBranchLabel::InverseSqrtMinus
        };
        QBranch {
            label,
            radicand: Some(radicand),
        }
    }

    /// The defining condition, rendered.
    pub fn constraint(&self) -> String {
        match (self.label, &self.radicand) {
            (QBranchLabel::CubicRoot, _) => "Q^2 + Q + 1 = 0".to_string(),
            (QBranchLabel::ImaginaryUnit, _) => "Q^2 + 1 = 0 (Q = I, equally Q = -I)".to_string(),
            (l, Some(v)) if v.is_one() => {
                format!(
                    "Q = {}",
                    if l == QBranchLabel::InverseSqrtPlus {
                        "1"
                    } else {
                        "-1"
                    }
                )
            }
            (l, Some(v)) => format!(
                "s^2 = {}, Q = {}s^-1",
                v,
                if l == QBranchLabel::InverseSqrtPlus {
                    ""
                } else {
                    "-"
                }
            ),
            (_, None) => "Q^2 = 1/v".to_string(),
        }
    }

    /// A ring containing `base` in which this branch is realised, together
    /// with the value of Q there. The cubic root adjoins `Q` with
    /// `Q^2 + Q + 1 = 0`; inverse square roots adjoin `s` with `s^2 = v`
    /// unless `v` is already a square; the imaginary unit is the Gaussian `I`.
    pub fn instantiate(&self, base: &Arc<Ring>) -> Result<(Arc<Ring>, Coefficient), PlaneError> {
        match self.label {
            QBranchLabel::CubicRoot => {
                let ring = if base.symbol_index("Q").is_some() {
                    base.clone()
                } else {
                    base.with_symbol("Q", true)?
                };
                let q = Coefficient::symbol(&ring, "Q")?;
                let cubic = &(&(&q * &q) + &q) + &Coefficient::one(&ring);
                let ring = ring.constrained(&[cubic])?;
                let q = Coefficient::symbol(&ring, "Q")?;
                Ok((ring, q))
            }
            QBranchLabel::ImaginaryUnit => Ok((base.clone(), Coefficient::imaginary_unit(base))),
            QBranchLabel::InverseSqrtPlus | QBranchLabel::InverseSqrtMinus => {
                let sign = if self.label == QBranchLabel::InverseSqrtPlus {
                    1
                } else {
                    -1
                };
                let v = self
                    .radicand
                    .as_ref()
                    .ok_or_else(|| {
                        PlaneError::Unsupported(self.constraint(), "missing radicand".into())
                    })?
                    .to_ring(base)?;
                if let Some(root) = polynomial_sqrt(&v).filter(|x| x.is_unit()) {
                    let q = root.inverse()?.scale(&GaussianRational::from_int(sign));
                    return Ok((base.clone(), q));
                }
                let name = fresh_name(base, "s");
                let ring = base.with_symbol(&name, true)?;
                let s = Coefficient::symbol(&ring, &name)?;
                let poly = &(&s * &s) - &v.to_ring(&ring)?;
                let ring = ring.constrained(&[poly])?;
                let q = Coefficient::symbol(&ring, &name)?.inverse()?;
                Ok((ring.clone(), q.scale(&GaussianRational::from_int(sign))))
            }
        }
    }
}

fn fresh_name(ring: &Ring, stem: &str) -> String {
    if ring.symbol_index(stem).is_none() {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| ring.symbol_index(n).is_none())
        .unwrap()
}

impl fmt::Display for QBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label.as_str(), self.constraint())
    }
}

/// A condition on Q, normalised to a polynomial in `Q^2` with constant term
/// one when possible, and its splitting `content * Π (Q^2 - root)`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub condition: Coefficient,
    pub content: Coefficient,
    pub factors: Vec<LinearFactor>,
}

impl Factorization {
    /// `content * Π (Q^2 - root)` with `q_symbol` the symbol for Q.
    pub fn expand(&self, q_symbol: &Coefficient) -> Coefficient {
        let p = q_symbol * q_symbol;
        self.factors
            .iter()
            .fold(self.content.clone(), |acc, f| &acc * &(&p - &f.root))
    }
}

#[derive(Clone, Debug)]
pub struct QSolution {
    /// The second-order relations with symbolic Q, oriented.
    pub relations: RelationSet,
    pub factorizations: Vec<Factorization>,
    /// Residuals with several words, not used to determine Q.
    pub unresolved: Vec<Element>,
    pub branches: Vec<QBranch>,
}

fn require_2d(c: &StructureMatrix) -> Result<(), PlaneError> {
    if c.dim() != 2 {
        return Err(PlaneError::NotTwoDimensional(c.dim()));
    }
    Ok(())
}

/// Orients the second-order relations with Q symbolic and reads off the
/// values of Q at which they degenerate. The cubic-root branch, where the
/// `[3]_Q` prefactor vanishes, is always present.
pub fn solve_q_branches(c: &StructureMatrix) -> Result<QSolution, PlaneError> {
    require_2d(c)?;
    let base = c.ring();
    let ring = if base.symbol_index("Q").is_some() {
        base.clone()
    } else {
        base.with_symbol("Q", true)?
    };
    let c = c.to_ring(&ring)?;
    let q = Coefficient::symbol(&ring, "Q")?;
    let reduced = derive_d2x_d2x_relations(&c, &q)?
        .reduced
        .expect("[3]_Q is nonzero for symbolic Q");
    let relations = RelationSet::orient(&Alphabet::calculus(2), &ring, &reduced)?;
    let mut factorizations: Vec<Factorization> = Vec::new();
    let mut unresolved = Vec::new();
    let mut branches = vec![QBranch::cubic_root()];
    for res in relations.residuals() {
        if res.num_terms() != 1 {
            unresolved.push(res.clone());
            continue;
        }
        let cond = res.leading().unwrap().1.clone();
        let f = factor_in_q_squared(&cond, "Q")?;
        for lf in &f.factors {
            let b = branch_for_root(&lf.root, &cond)?;
            for b in b {
                let b = QBranch {
                    radicand: b.radicand.map(|v| v.to_ring(base)).transpose()?,
                    ..b
                };
                if !branches.contains(&b) {
                    branches.push(b);
                }
            }
        }
        if !factorizations.iter().any(|g| g.condition == f.condition) {
            factorizations.push(f);
        }
    }
    branches.sort_by_key(|b| b.label);
    Ok(QSolution {
        relations,
        factorizations,
        unresolved,
        branches,
    })
}

fn factor_in_q_squared(cond: &Coefficient, q: &str) -> Result<Factorization, PlaneError> {
    let ring = cond.ring();
    let powers = cond.collect_powers(q)?;
    let min = powers.first().map(|(e, _)| *e).unwrap_or(0);
    let mut pc: Vec<Coefficient> = Vec::new();
    for (e, v) in &powers {
        let d = e - min;
        if d % 2 != 0 {
            return Err(PlaneError::Unsupported(
                cond.to_string(),
                "odd power of Q".into(),
            ));
        }
        let k = (d / 2) as usize;
        if pc.len() <= k {
            pc.resize(k + 1, Coefficient::zero(ring));
        }
        pc[k] = &pc[k] + v;
    }
    let unit = if pc[0].is_unit() {
        pc[0].inverse()?
    } else {
        Coefficient::one(ring)
    };
    let pc: Vec<Coefficient> = pc.iter().map(|x| x * &unit).collect();
    let qs = Coefficient::symbol(ring, q)?;
    let normalized = pc
        .iter()
        .enumerate()
        .fold(Coefficient::zero(ring), |acc, (k, x)| {
            &acc + &(x * &qs.pow(2 * k as i64).unwrap())
        });
    let roots = quadratic_roots(&pc).ok_or_else(|| {
        PlaneError::Unsupported(
            cond.to_string(),
            "does not split over the coefficient ring".into(),
        )
    })?;
    let content = pc.last().unwrap().clone();
    let mut factors: Vec<LinearFactor> = roots
        .into_iter()
        .map(|root| LinearFactor { root })
        .collect();
    // A double root is listed once by the solver; restore its multiplicity.
    if pc.len() == 3 && factors.len() == 1 {
        factors.push(factors[0].clone());
    }
    Ok(Factorization {
        condition: normalized,
        content,
        factors,
    })
}

fn branch_for_root(root: &Coefficient, cond: &Coefficient) -> Result<Vec<QBranch>, PlaneError> {
    let ring = root.ring();
    if *root == -Coefficient::one(ring) {
        return Ok(vec![QBranch::imaginary_unit()]);
    }
    if root.mentions("Q") {
        return Err(PlaneError::Unsupported(
            cond.to_string(),
            "root depends on Q".into(),
        ));
    }
    match root.inverse() {
        Ok(v) => Ok(vec![
            QBranch::inverse_sqrt(v.clone(), true),
            QBranch::inverse_sqrt(v, false),
        ]),
        Err(_) => Err(PlaneError::Unsupported(
            cond.to_string(),
            format!("Q^2 = {root} is not a unit monomial"),
        )),
    }
}

/// The relations among `d2x, d2y` on a branch, with single-word residuals
/// `c * w` cancelled to `w = 0`.
pub fn second_order_plane(
    c: &StructureMatrix,
    branch: &QBranch,
) -> Result<RelationSet, PlaneError> {
    require_2d(c)?;
    if branch.label == QBranchLabel::CubicRoot {
        return Err(PlaneError::CubicRootRefused(CUBIC_ROOT_REFUSAL.to_string()));
    }
    let (ring, q) = branch.instantiate(c.ring())?;
    let c = c.to_ring(&ring)?;
    let three = q_integer(3, &q);
    if three.is_zero() {
        return Err(PlaneError::CubicRootRefused(CUBIC_ROOT_REFUSAL.to_string()));
    }
    let reduced = derive_d2x_d2x_relations(&c, &q)?
        .reduced
        .expect("[3]_Q is nonzero");
    let mut rs = RelationSet::orient(&Alphabet::calculus(2), &ring, &reduced)?;
    rs.cancel_monomial_residuals();
    Ok(rs)
}

/// The coordinate plane `x^i x^j = B x^k x^l` as a relation set.
pub fn coordinate_plane(b: &StructureMatrix) -> Result<RelationSet, PlaneError> {
    Ok(RelationSet::orient(
        &Alphabet::calculus(b.dim()),
        b.ring(),
        &plane_relations(b),
    )?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlKind {
    StandardQ,
    RqFamily1,
    RqFamily2,
}

impl GlKind {
    pub fn for_family(f: Family) -> GlKind {
        match f {
            Family::One => GlKind::RqFamily1,
            Family::Two => GlKind::RqFamily2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GlKind::StandardQ => "GL_q(2)",
            GlKind::RqFamily1 => "GL_{r,q}(2), first family",
            GlKind::RqFamily2 => "GL_{r,q}(2), second family",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transcription {
    /// As printed.
    Raw,
    /// With the misprinted relations replaced.
    Corrected,
}

impl Transcription {
    pub fn name(self) -> &'static str {
        match self {
            Transcription::Raw => "raw",
            Transcription::Corrected => "corrected",
        }
    }
}

pub const ENTRY_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

/// Generators `alpha < beta < gamma < delta`.
pub fn entry_alphabet() -> Arc<Alphabet> {
    Alphabet::new(
        ENTRY_NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| Generator {
                name: n.to_string(),
                degree: 0,
                index: 101 + i,
            })
            .collect(),
    )
    .expect("distinct names")
}

/// Quantum-group relations over `alpha, beta, gamma, delta` in the symbols
/// `q` and `r` of `ring` (`r` is unused for the standard group).
pub fn glq2_relations(
    ring: &Arc<Ring>,
    kind: GlKind,
    transcription: Transcription,
) -> Result<Vec<Element>, PlaneError> {
    let alpha = entry_alphabet();
    let q = Coefficient::symbol(ring, "q")?;
    let qi = q.inverse()?;
    let w = |s: &str| Element::parse_word(&alpha, ring, s).expect("entry word");
    // a*lhs - b*rhs
    let rel = |a: &Coefficient, l: &str, b: &Coefficient, r: &str| &w(l).scale(a) - &w(r).scale(b);
    let one = Coefficient::one(ring);
    let raw = transcription == Transcription::Raw;
    let mut out = Vec::new();
    match kind {
        GlKind::StandardQ => {
            out.push(rel(&one, "alpha*beta", &q, "beta*alpha"));
            out.push(rel(&one, "alpha*gamma", &q, "gamma*alpha"));
            out.push(rel(&one, "beta*gamma", &one, "gamma*beta"));
            out.push(rel(
                &one,
                "gamma*delta",
                &q,
                if raw { "delta*beta" } else { "delta*gamma" },
            ));
            out.push(rel(&one, "beta*delta", &q, "delta*beta"));
            out.push(
                &rel(&one, "alpha*delta", &one, "delta*alpha")
                    - &w("beta*gamma").scale(&(&q - &qi)),
            );
        }
        GlKind::RqFamily1 => {
            let r = Coefficient::symbol(ring, "r")?;
            let p = &r * &qi;
            out.push(rel(&one, "alpha*beta", &p, "beta*alpha"));
            out.push(rel(&one, "alpha*gamma", &q, "gamma*alpha"));
            out.push(rel(&p, "beta*gamma", &q, "gamma*beta"));
            if raw {
                out.push(rel(&one, "beta*delta", &p, "delta*beta"));
            } else {
                out.push(rel(&one, "gamma*delta", &p, "delta*gamma"));
            }
            out.push(rel(&one, "beta*delta", &q, "delta*beta"));
            let ad = rel(&one, "alpha*delta", &one, "delta*alpha");
            if raw {
                out.push(&ad - &w("gamma*beta").scale(&(&q - &p.inverse()?)));
            }
            out.push(&ad - &w("beta*gamma").scale(&(&p - &qi)));
        }
        GlKind::RqFamily2 => {
            let r = Coefficient::symbol(ring, "r")?;
            let rq = &r * &q;
            let p = rq.inverse()?;
            out.push(rel(&one, "alpha*beta", &p, "beta*alpha"));
            out.push(rel(&one, "alpha*gamma", &q, "gamma*alpha"));
            out.push(rel(&qi, "beta*gamma", &rq, "gamma*beta"));
            out.push(rel(
                &one,
                "gamma*delta",
                &p,
                if raw { "delta*beta" } else { "delta*gamma" },
            ));
            out.push(rel(&one, "beta*delta", &q, "delta*beta"));
            let ad = rel(&one, "alpha*delta", &one, "delta*alpha");
            out.push(&ad - &w("gamma*beta").scale(&(&q - &rq)));
            if raw {
                out.push(&ad - &w("beta*gamma").scale(&(&qi - &p)));
            }
        }
    }
    Ok(out)
}

/// A quantum-group relation set acting by `x -> alpha x + beta y`,
/// `y -> gamma x + delta y`, with entries commuting with coordinates.
#[derive(Clone, Debug)]
pub struct CoactionSpec {
    pub label: String,
    pub relations: Vec<Element>,
}

impl CoactionSpec {
    pub fn new(label: impl Into<String>, relations: Vec<Element>) -> Self {
        CoactionSpec {
            label: label.into(),
            relations,
        }
    }

    pub fn glq2(ring: &Arc<Ring>, kind: GlKind, t: Transcription) -> Result<Self, PlaneError> {
        Ok(CoactionSpec::new(
            format!("{} ({})", kind.name(), t.name()),
            glq2_relations(ring, kind, t)?,
        ))
    }
}

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub coaction: String,
    pub relations_checked: usize,
    /// `(relation, residue)` for every plane relation whose transform does
    /// not vanish.
    pub failures: Vec<(String, Element)>,
    /// Critical pairs of the combined algebra left unresolved.
    pub unresolved_overlaps: usize,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Transforms each relation of a two-generator plane under the coaction and
/// tests whether it vanishes in the combined algebra.
pub fn check_covariance(
    plane: &RelationSet,
    coaction: &CoactionSpec,
) -> Result<CovarianceReport, PlaneError> {
    let pa = plane.alphabet();
    let ring = plane.ring();
    let rels = plane.relation_elements();
    let degree = rels
        .iter()
        .flat_map(|e| e.terms().flat_map(|(w, _)| w.letters().to_vec()))
        .map(|g| pa.generator(g).degree)
        .next()
        .unwrap_or(0);
    let (px, py) = match (pa.find(degree, 1), pa.find(degree, 2)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(PlaneError::NotTwoDimensional(pa.len())),
    };
    let mut gens: Vec<Generator> = entry_alphabet().generators().to_vec();
    for p in [px, py] {
        let g = pa.generator(p);
        gens.push(Generator {
            name: g.name.clone(),
            degree: g.degree,
            index: g.index,
        });
    }
    let combined = Alphabet::new(gens)?;
    let w = |s: &str| Element::parse_word(&combined, ring, s);
    let (xn, yn) = (pa.generator(px).name.clone(), pa.generator(py).name.clone());
    let mut all: Vec<Element> = Vec::new();
    for e in &coaction.relations {
        all.push(e.to_ring(ring)?.to_alphabet(&combined)?);
    }
    for e in &rels {
        all.push(e.to_alphabet(&combined)?);
    }
    for a in ENTRY_NAMES {
        for c in [&xn, &yn] {
            all.push(&w(&format!("{c}*{a}"))? - &w(&format!("{a}*{c}"))?);
        }
    }
    let rs = RelationSet::orient(&combined, ring, &all)?;
    let unresolved_overlaps = rs.critical_pairs().iter().filter(|p| !p.resolved).count();
    let images = [
        &w(&format!("alpha*{xn}"))? + &w(&format!("beta*{yn}"))?,
        &w(&format!("gamma*{xn}"))? + &w(&format!("delta*{yn}"))?,
    ];
    let image_of = |g: u16| -> Element {
        if g == px {
            images[0].clone()
        } else {
            images[1].clone()
        }
    };
    let mut failures = Vec::new();
    for e in &rels {
        let mut t = Element::zero(&combined, ring);
        for (word, c) in e.terms() {
            let mut acc = Element::one(&combined, ring);
            for &g in word.letters() {
                acc = &acc * &image_of(g);
            }
            t = &t + &acc.scale(c);
        }
        if !rs.reduces_to_zero(&t) {
            failures.push((format!("{e} = 0"), rs.normal_form(&t)));
        }
    }
    Ok(CovarianceReport {
        coaction: coaction.label.clone(),
        relations_checked: rels.len(),
        failures,
        unresolved_overlaps,
    })
}

/// Names a word of the calculus alphabet, for building expected relations.
pub fn calculus_word(ring: &Arc<Ring>, src: &str) -> Result<Element, FreeAlgError> {
    Element::parse_word(&Alphabet::calculus(2), ring, src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::laurent(&["q", "r"])
    }

    #[test]
    fn transcribed_entries() {
        let ring = ring();
        let rh = standard_rhat(&ring, "q").unwrap();
        assert_eq!(rh.entry(1, 2, 1, 2).to_string(), "q - q^-1");
        assert!(rh.entry(2, 1, 2, 1).is_zero());
        let c1 = c_matrix(&ring, Family::One, "q", "r").unwrap();
        assert_eq!(c1.entry(1, 2, 2, 1).to_string(), "q");
        assert_eq!(c1.entry(2, 1, 1, 2).to_string(), "q^-1*r");
        let c2 = c_matrix(&ring, Family::Two, "q", "r").unwrap();
        assert_eq!(c2.entry(1, 2, 2, 1).to_string(), "q*r");
    }

    #[test]
    fn swap_duality_keeps_r() {
        let d = swap_duality_check(&ring(), "q", "r").unwrap();
        assert_eq!(d.working(), vec!["r -> r"]);
    }

    #[test]
    fn cubic_root_is_refused() {
        let ring = ring();
        let c1 = c_matrix(&ring, Family::One, "q", "r").unwrap();
        match second_order_plane(&c1, &QBranch::cubic_root()) {
            Err(PlaneError::CubicRootRefused(msg)) => {
                assert!(msg.contains("can not satisfy any particular binary relations"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_matrix_branches() {
        let ring = ring();
        let sol = solve_q_branches(&StructureMatrix::identity(&ring, 2)).unwrap();
        let labels: Vec<_> = sol.branches.iter().map(|b| b.label).collect();
        assert_eq!(
            labels,
            vec![
                QBranchLabel::CubicRoot,
                QBranchLabel::InverseSqrtPlus,
                QBranchLabel::InverseSqrtMinus
            ]
        );
        assert!(sol.branches[1].radicand.as_ref().unwrap().is_one());
    }
}
