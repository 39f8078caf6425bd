//! The Q-Leibniz differential, the relations it forces on second-order
//! differentials, and the d³ = 0 verification battery.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::freealg::{Alphabet, Element, FreeAlgError, RelationSet, Word};
use crate::matrix::{MatrixError, StructureMatrix};
use crate::symring::{q_integer, Coefficient, Ring, RingError};
use crate::tensorcheck::{check_braid_compat, IdentityCheck, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffCalcError {
    #[error("matrices must share dimension and coefficient ring: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Families of defining relations of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// `x^i x^j = B x^k x^l`
    Plane,
    /// `x^i dx^j = C dx^k x^l`
    FirstOrder,
    /// `x^i d2x^j = C d2x^k x^l + (QC - E) dx^k dx^l`
    CoordSecond,
    /// `([2]E - Q²C) dx d2x = ([2]QC - E) d2x dx`
    FirstSecond,
    /// `d2x^i d2x^j = Q²C d2x^k d2x^l` (or the `[3]_Q`-prefactored form)
    SecondSecond,
    /// `x^i d2x^j = F d2x^k x^l`
    CoordSecondF,
    /// `d2x^i d2x^j = Q⁴F d2x^k d2x^l`
    SecondSecondF,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Plane,
        RelationKind::FirstOrder,
        RelationKind::CoordSecond,
        RelationKind::FirstSecond,
        RelationKind::SecondSecond,
        RelationKind::CoordSecondF,
        RelationKind::SecondSecondF,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RelationKind::Plane => "x-x",
            RelationKind::FirstOrder => "x-dx",
            RelationKind::CoordSecond => "x-d2x",
            RelationKind::FirstSecond => "dx-d2x",
            RelationKind::SecondSecond => "d2x-d2x",
            RelationKind::CoordSecondF => "x-d2x (F)",
            RelationKind::SecondSecondF => "d2x-d2x (F)",
        }
    }
}

/// One relation element tagged with its family and component `(i, j)`.
#[derive(Clone, Debug)]
pub struct DefiningRelation {
    pub kind: RelationKind,
    pub component: (usize, usize),
    pub element: Element,
}

/// A de Rham complex instance: structure matrices, the parameter Q and the
/// assembled quotient.
#[derive(Clone, Debug)]
pub struct CalculusSpec {
    n: usize,
    alphabet: Arc<Alphabet>,
    b: StructureMatrix,
    c: StructureMatrix,
    f: Option<StructureMatrix>,
    q: Coefficient,
    defining: Vec<DefiningRelation>,
    relations: RelationSet,
}

fn gen(alpha: &Arc<Alphabet>, ring: &Arc<Ring>, degree: u8, index: usize) -> Element {
    let p = alpha
        .find(degree, index)
        .expect("calculus alphabet covers every degree and index");
    Element::word(alpha, ring, Word(vec![p]))
}

fn pair(alpha: &Arc<Alphabet>, ring: &Arc<Ring>, da: u8, i: usize, db: u8, j: usize) -> Element {
    &gen(alpha, ring, da, i) * &gen(alpha, ring, db, j)
}

/// `Σ_kl M^{ij}_{kl} g_{da,k} g_{db,l}` for a matrix given entrywise.
fn contract<F>(
    alpha: &Arc<Alphabet>,
    ring: &Arc<Ring>,
    n: usize,
    (i, j): (usize, usize),
    (da, db): (u8, u8),
    entry: F,
) -> Element
where
    F: Fn(usize, usize, usize, usize) -> Coefficient,
{
    let mut out = Element::zero(alpha, ring);
    for k in 1..=n {
        for l in 1..=n {
            let c = entry(i, j, k, l);
            if !c.is_zero() {
                out = &out + &pair(alpha, ring, da, k, db, l).scale(&c);
            }
        }
    }
    out
}

fn delta(ring: &Arc<Ring>, i: usize, j: usize, k: usize, l: usize) -> Coefficient {
    if i == k && j == l {
        Coefficient::one(ring)
    } else {
        Coefficient::zero(ring)
    }
}

fn components(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).map(move |j| (i, j)))
}

fn check_q(m: &StructureMatrix, q: &Coefficient) -> Result<(), DiffCalcError> {
    q.check_same_ring(&Coefficient::zero(m.ring()))
        .map_err(|_| DiffCalcError::Incompatible("Q and matrix use different rings".into()))
}

/// `x^i x^j - B^{ij}_{kl} x^k x^l`.
pub fn plane_relations(b: &StructureMatrix) -> Vec<Element> {
    let (n, ring) = (b.dim(), b.ring().clone());
    let alpha = Alphabet::calculus(n);
    components(n)
        .map(|(i, j)| {
            &pair(&alpha, &ring, 0, i, 0, j)
                - &contract(&alpha, &ring, n, (i, j), (0, 0), |i, j, k, l| {
                    b.entry(i, j, k, l).clone()
                })
        })
        .collect()
}

/// `B12 C23 C12 = C23 C12 B23` read on the words `dx^e x^f x^g`: a row of
/// the difference only has to vanish modulo the coordinate relations.
/// Keeps the residual entries of the rows that survive reduction.
pub fn check_braid_compat_modulo(
    b: &StructureMatrix,
    c: &StructureMatrix,
) -> Result<IdentityCheck, DiffCalcError> {
    let strict = check_braid_compat(b, c)?;
    let (n, ring) = (b.dim(), b.ring().clone());
    let alpha = Alphabet::calculus(n);
    let plane = RelationSet::orient(&alpha, &ring, &plane_relations(b))?;
    let mut rows: BTreeMap<usize, Element> = BTreeMap::new();
    for ((row, col), v) in &strict.residual {
        let (e, f, g) = (col / (n * n), (col / n) % n, col % n);
        let w = &(&gen(&alpha, &ring, 1, e + 1) * &gen(&alpha, &ring, 0, f + 1))
            * &gen(&alpha, &ring, 0, g + 1);
        let acc = rows
            .entry(*row)
            .or_insert_with(|| Element::zero(&alpha, &ring));
        *acc = &*acc + &w.scale(v);
    }
    let bad: Vec<usize> = rows
        .into_iter()
        .filter(|(_, e)| !plane.reduces_to_zero(e))
        .map(|(r, _)| r)
        .collect();
    Ok(IdentityCheck {
        name: "B12 C23 C12 = C23 C12 B23 modulo the coordinate relations".to_string(),
        residual: strict
            .residual
            .into_iter()
            .filter(|((r, _), _)| bad.contains(r))
            .collect(),
    })
}

/// `x^i dx^j - C^{ij}_{kl} dx^k x^l`.
pub fn first_order_relations(c: &StructureMatrix) -> Vec<Element> {
    let (n, ring) = (c.dim(), c.ring().clone());
    let alpha = Alphabet::calculus(n);
    components(n)
        .map(|(i, j)| {
            &pair(&alpha, &ring, 0, i, 1, j)
                - &contract(&alpha, &ring, n, (i, j), (1, 0), |i, j, k, l| {
                    c.entry(i, j, k, l).clone()
                })
        })
        .collect()
}

/// `x^i d2x^j - C d2x^k x^l - (QC - δδ) dx^k dx^l`.
pub fn derive_x_d2x_relations(
    c: &StructureMatrix,
    q: &Coefficient,
) -> Result<Vec<Element>, DiffCalcError> {
    check_q(c, q)?;
    let (n, ring) = (c.dim(), c.ring().clone());
    let alpha = Alphabet::calculus(n);
    Ok(components(n)
        .map(|(i, j)| {
            let lhs = pair(&alpha, &ring, 0, i, 2, j);
            let t1 = contract(&alpha, &ring, n, (i, j), (2, 0), |i, j, k, l| {
                c.entry(i, j, k, l).clone()
            });
            let t2 = contract(&alpha, &ring, n, (i, j), (1, 1), |i, j, k, l| {
                &(q * c.entry(i, j, k, l)) - &delta(&ring, i, j, k, l)
            });
            &(&lhs - &t1) - &t2
        })
        .collect())
}

/// `([2]_Q δδ - Q²C) dx^k d2x^l - ([2]_Q QC - δδ) d2x^k dx^l`.
pub fn derive_dx_d2x_relations(
    c: &StructureMatrix,
    q: &Coefficient,
) -> Result<Vec<Element>, DiffCalcError> {
    check_q(c, q)?;
    let (n, ring) = (c.dim(), c.ring().clone());
    let alpha = Alphabet::calculus(n);
    let two = q_integer(2, q);
    let q2 = q * q;
    let two_q = &two * q;
    Ok(components(n)
        .map(|(i, j)| {
            let left = contract(&alpha, &ring, n, (i, j), (1, 2), |i, j, k, l| {
                &(&two * &delta(&ring, i, j, k, l)) - &(&q2 * c.entry(i, j, k, l))
            });
            let right = contract(&alpha, &ring, n, (i, j), (2, 1), |i, j, k, l| {
                &(&two_q * c.entry(i, j, k, l)) - &delta(&ring, i, j, k, l)
            });
            &left - &right
        })
        .collect())
}

/// Relations among second-order differentials.
#[derive(Clone, Debug)]
pub struct SecondOrderRelations {
    /// `[3]_Q (d2x^i d2x^j - Q²C d2x^k d2x^l)`; all zero when `[3]_Q = 0`.
    pub prefactored: Vec<Element>,
    /// `d2x^i d2x^j - Q²C d2x^k d2x^l`, present only when `[3]_Q` is nonzero
    /// in the coefficient ring.
    pub reduced: Option<Vec<Element>>,
}

pub fn derive_d2x_d2x_relations(
    c: &StructureMatrix,
    q: &Coefficient,
) -> Result<SecondOrderRelations, DiffCalcError> {
    check_q(c, q)?;
    let (n, ring) = (c.dim(), c.ring().clone());
    let alpha = Alphabet::calculus(n);
    let q2 = q * q;
    let three = q_integer(3, q);
    let reduced: Vec<Element> = components(n)
        .map(|(i, j)| {
            &pair(&alpha, &ring, 2, i, 2, j)
                - &contract(&alpha, &ring, n, (i, j), (2, 2), |i, j, k, l| {
                    &q2 * c.entry(i, j, k, l)
                })
        })
        .collect();
    let prefactored = reduced.iter().map(|e| e.scale(&three)).collect();
    Ok(SecondOrderRelations {
        prefactored,
        reduced: (!three.is_zero()).then_some(reduced),
    })
}

/// Relations induced by an `F` matrix.
#[derive(Clone, Debug)]
pub struct FRelations {
    /// `x^i d2x^j - F d2x^k x^l`
    pub coordinate: Vec<Element>,
    /// `d2x^i d2x^j - Q⁴F d2x^k d2x^l`
    pub second: Vec<Element>,
}

pub fn derive_f_relations(
    f: &StructureMatrix,
    q: &Coefficient,
) -> Result<FRelations, DiffCalcError> {
    check_q(f, q)?;
    let (n, ring) = (f.dim(), f.ring().clone());
    let alpha = Alphabet::calculus(n);
    let q4 = &(q * q) * &(q * q);
    let coordinate = components(n)
        .map(|(i, j)| {
            &pair(&alpha, &ring, 0, i, 2, j)
                - &contract(&alpha, &ring, n, (i, j), (2, 0), |i, j, k, l| {
                    f.entry(i, j, k, l).clone()
                })
        })
        .collect();
    let second = components(n)
        .map(|(i, j)| {
            &pair(&alpha, &ring, 2, i, 2, j)
                - &contract(&alpha, &ring, n, (i, j), (2, 2), |i, j, k, l| {
                    &q4 * f.entry(i, j, k, l)
                })
        })
        .collect();
    Ok(FRelations { coordinate, second })
}

/// `d` on the free algebra: `d x = dx`, `d dx = d2x`, `d d2x = 0`, extended by
/// `d(g w) = d(g) w + Q^{deg g} g d(w)`.
pub fn apply_d_free(e: &Element, q: &Coefficient) -> Element {
    let alpha = e.alphabet().clone();
    let ring = e.ring().clone();
    let mut out = Element::zero(&alpha, &ring);
    let mut q_pows: Vec<Coefficient> = vec![Coefficient::one(&ring)];
    for (w, c) in e.terms() {
        let letters = w.letters();
        let mut prefix_grade = 0usize;
        for p in 0..letters.len() {
            if let Some(Some(dg)) = alpha.differential(letters[p]) {
                while q_pows.len() <= prefix_grade {
                    let next = q_pows.last().unwrap() * q;
                    q_pows.push(next);
                }
                let mut nw = letters.to_vec();
                nw[p] = dg;
                out.add_term(Word(nw), &(c * &q_pows[prefix_grade]));
            }
            prefix_grade += alpha.generator(letters[p]).degree as usize;
        }
    }
    out
}

impl CalculusSpec {
    /// Assembles every applicable relation family.
    pub fn assemble(
        b: StructureMatrix,
        c: StructureMatrix,
        f: Option<StructureMatrix>,
        q: Coefficient,
    ) -> Result<Self, DiffCalcError> {
        Self::assemble_with(b, c, f, q, &RelationKind::ALL)
    }

    /// Assembles only the listed relation families (F families are skipped
    /// when no `F` is given).
    pub fn assemble_with(
        b: StructureMatrix,
        c: StructureMatrix,
        f: Option<StructureMatrix>,
        q: Coefficient,
        kinds: &[RelationKind],
    ) -> Result<Self, DiffCalcError> {
        b.same_dim(&c)?;
        check_q(&b, &q)?;
        check_q(&c, &q)?;
        if let Some(f) = &f {
            b.same_dim(f)?;
            check_q(f, &q)?;
        }
        let n = b.dim();
        let ring = b.ring().clone();
        let alphabet = Alphabet::calculus(n);
        let mut defining = Vec::new();
        let mut push = |kind: RelationKind, elems: Vec<Element>| {
            if kinds.contains(&kind) {
                for (e, comp) in elems.into_iter().zip(components(n)) {
                    defining.push(DefiningRelation {
                        kind,
                        component: comp,
                        element: e,
                    });
                }
            }
        };
        push(RelationKind::Plane, plane_relations(&b));
        push(RelationKind::FirstOrder, first_order_relations(&c));
        push(RelationKind::CoordSecond, derive_x_d2x_relations(&c, &q)?);
        push(RelationKind::FirstSecond, derive_dx_d2x_relations(&c, &q)?);
        let second = derive_d2x_d2x_relations(&c, &q)?;
        push(
            RelationKind::SecondSecond,
            second.reduced.unwrap_or(second.prefactored),
        );
        if let Some(f) = &f {
            let fr = derive_f_relations(f, &q)?;
            push(RelationKind::CoordSecondF, fr.coordinate);
            push(RelationKind::SecondSecondF, fr.second);
        }
        let elems: Vec<Element> = defining.iter().map(|d| d.element.clone()).collect();
        let relations = RelationSet::orient(&alphabet, &ring, &elems)?;
        Ok(CalculusSpec {
            n,
            alphabet,
            b,
            c,
            f,
            q,
            defining,
            relations,
        })
    }

    /// Adds further quadratic relations (e.g. a simplified second-order
    /// plane) to the quotient. They also join the defining set checked by
    /// `check_complex`.
    pub fn with_extra_relations(mut self, extra: &RelationSet) -> Result<Self, DiffCalcError> {
        for e in extra.relation_elements() {
            let e = e.to_alphabet(&self.alphabet)?;
            self.defining.push(DefiningRelation {
                kind: RelationKind::SecondSecond,
                component: (0, 0),
                element: e,
            });
        }
        self.relations = self.relations.merged(&extra_in(&self.alphabet, extra)?)?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.b.ring()
    }

    pub fn b(&self) -> &StructureMatrix {
        &self.b
    }

    pub fn c(&self) -> &StructureMatrix {
        &self.c
    }

    pub fn f(&self) -> Option<&StructureMatrix> {
        self.f.as_ref()
    }

    pub fn q(&self) -> &Coefficient {
        &self.q
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn defining_relations(&self) -> &[DefiningRelation] {
        &self.defining
    }

    pub fn generator(&self, name: &str) -> Result<Element, FreeAlgError> {
        Element::generator(&self.alphabet, self.ring(), name)
    }

    pub fn word(&self, src: &str) -> Result<Element, FreeAlgError> {
        Element::parse_word(&self.alphabet, self.ring(), src)
    }

    /// `d` followed by reduction to normal form.
    pub fn apply_d(&self, e: &Element) -> Element {
        let e = self.relations.normal_form(e);
        self.relations.normal_form(&apply_d_free(&e, &self.q))
    }
}

fn extra_in(alpha: &Arc<Alphabet>, extra: &RelationSet) -> Result<RelationSet, FreeAlgError> {
    let elems = extra
        .relation_elements()
        .into_iter()
        .map(|e| e.to_alphabet(alpha))
        .collect::<Result<Vec<_>, _>>()?;
    RelationSet::orient(alpha, extra.ring(), &elems)
}

/// A nonzero residue found by `check_complex`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub subject: String,
    pub residue: Element,
}

#[derive(Clone, Debug, Default)]
pub struct ComplexReport {
    pub relations_checked: usize,
    pub words_checked: usize,
    /// Defining relations whose differential does not vanish in the quotient.
    pub relation_failures: Vec<Witness>,
    /// Words `w` with `d³(w) ≠ 0` in the quotient.
    pub d_cubed_failures: Vec<Witness>,
    /// Elements on which `d` did not raise the grade by exactly one.
    pub grade_failures: Vec<Witness>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.relation_failures.is_empty()
            && self.d_cubed_failures.is_empty()
            && self.grade_failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.relation_failures
            .first()
            .or_else(|| self.d_cubed_failures.first())
            .or_else(|| self.grade_failures.first())
    }
}

/// Verifies that `d` is well defined on the quotient, that `d³` kills every
/// word in the coordinates up to `max_len`, and that `d` raises grade by one.
pub fn check_complex(spec: &CalculusSpec, max_len: usize) -> ComplexReport {
    let mut report = ComplexReport::default();
    let rs = spec.relations();
    let check_grade = |e: &Element, de: &Element, subject: &str, report: &mut ComplexReport| {
        if let (Some(g), false) = (e.grade(), de.is_zero()) {
            if de.grade() != Some(g + 1) {
                report.grade_failures.push(Witness {
                    subject: subject.to_string(),
                    residue: de.clone(),
                });
            }
        }
    };
    for d in spec.defining_relations() {
        report.relations_checked += 1;
        let de = apply_d_free(&d.element, spec.q());
        let subject = format!("d({}) [{} {:?}]", d.element, d.kind.label(), d.component);
        check_grade(&d.element, &de, &subject, &mut report);
        if !rs.reduces_to_zero(&de) {
            report.relation_failures.push(Witness {
                subject,
                residue: rs.normal_form(&de),
            });
        }
    }
    let coords: Vec<u16> = (1..=spec.n())
        .map(|i| spec.alphabet().find(0, i).unwrap())
        .collect();
    let mut words: Vec<Word> = vec![Word::unit()];
    for _ in 0..max_len {
        words = words
            .iter()
            .flat_map(|w| {
                coords.iter().map(move |&g| {
                    let mut v = w.0.clone();
                    v.push(g);
                    Word(v)
                })
            })
            .collect();
        for w in &words {
            report.words_checked += 1;
            let e = Element::word(spec.alphabet(), spec.ring(), w.clone());
            let d1 = apply_d_free(&e, spec.q());
            let d2 = apply_d_free(&d1, spec.q());
            let d3 = apply_d_free(&d2, spec.q());
            let subject = format!("d^3({})", w.render(spec.alphabet()));
            check_grade(&e, &d1, &subject, &mut report);
            check_grade(&d1, &d2, &subject, &mut report);
            check_grade(&d2, &d3, &subject, &mut report);
            if !rs.reduces_to_zero(&d3) {
                report.d_cubed_failures.push(Witness {
                    subject,
                    residue: rs.normal_form(&d3),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::laurent(&["Q", "q", "r"])
    }

    fn q_plane(ring: &Arc<Ring>) -> StructureMatrix {
        let qi = Coefficient::sym(ring, "q", -1);
        let o = Coefficient::one(ring);
        let z = Coefficient::zero(ring);
        // (1/q) R̂
        StructureMatrix::from_rows(
            2,
            vec![
                vec![o.clone(), z.clone(), z.clone(), z.clone()],
                vec![z.clone(), &o - &(&qi * &qi), qi.clone(), z.clone()],
                vec![z.clone(), qi.clone(), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), z.clone(), o.clone()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn d_on_generators_and_products() {
        let ring = ring();
        let alpha = Alphabet::calculus(2);
        let big_q = Coefficient::sym(&ring, "Q", 1);
        let el = |s: &str| Element::parse_word(&alpha, &ring, s).unwrap();
        assert_eq!(apply_d_free(&el("x"), &big_q), el("dx"));
        assert_eq!(
            apply_d_free(&el("d2x"), &big_q),
            Element::zero(&alpha, &ring)
        );
        assert_eq!(
            apply_d_free(&Element::one(&alpha, &ring), &big_q),
            Element::zero(&alpha, &ring)
        );
        let got = apply_d_free(&el("x*y"), &big_q);
        assert_eq!(got, &el("dx*y") + &el("x*dy"));
        let got = apply_d_free(&el("dx*y"), &big_q);
        assert_eq!(got, &el("d2x*y") + &el("dx*dy").scale(&big_q));
        // d^3 of a generator chain
        let d3 = apply_d_free(
            &apply_d_free(&apply_d_free(&el("x"), &big_q), &big_q),
            &big_q,
        );
        assert!(d3.is_zero());
    }

    #[test]
    fn right_splitting_agrees_with_left_splitting() {
        let ring = ring();
        let alpha = Alphabet::calculus(2);
        let big_q = Coefficient::sym(&ring, "Q", 1);
        let el = |s: &str| Element::parse_word(&alpha, &ring, s).unwrap();
        for (w, g) in [("x*dy", "d2x"), ("dx*d2y", "y"), ("x*y*dx", "dy")] {
            let we = el(w);
            let ge = el(g);
            let grade = we.grade().unwrap() as i64;
            let lhs = apply_d_free(&(&we * &ge), &big_q);
            let rhs = &(&apply_d_free(&we, &big_q) * &ge)
                + &(&we * &apply_d_free(&ge, &big_q)).scale(&big_q.pow(grade).unwrap());
            assert_eq!(lhs, rhs, "{w} * {g}");
        }
    }

    #[test]
    fn identity_c_gives_classical_relations() {
        let ring = ring();
        let alpha = Alphabet::calculus(2);
        let one = Coefficient::one(&ring);
        let id = StructureMatrix::identity(&ring, 2);
        let el = |s: &str| Element::parse_word(&alpha, &ring, s).unwrap();
        let x_d2x = derive_x_d2x_relations(&id, &one).unwrap();
        assert_eq!(x_d2x[1], &el("x*d2y") - &el("d2x*y"));
        let dx_d2x = derive_dx_d2x_relations(&id, &one).unwrap();
        assert_eq!(dx_d2x[0], &el("dx*d2x") - &el("d2x*dx"));
        let dd = derive_d2x_d2x_relations(&id, &one).unwrap();
        assert!(dd.reduced.unwrap().iter().all(|e| e.is_zero()));
        let fr = derive_f_relations(&id, &one).unwrap();
        assert_eq!(fr.coordinate[2], &el("y*d2x") - &el("d2y*x"));
    }

    #[test]
    fn cubic_root_kills_prefactored_relations() {
        let base = Ring::laurent(&["Q", "q"]);
        let big_q = Coefficient::sym(&base, "Q", 1);
        let cubic = &(&(&big_q * &big_q) + &big_q) + &Coefficient::one(&base);
        let ring = base.constrained(&[cubic]).unwrap();
        let c = q_plane(&ring);
        let dd = derive_d2x_d2x_relations(&c, &Coefficient::sym(&ring, "Q", 1)).unwrap();
        assert!(dd.reduced.is_none());
        assert!(dd.prefactored.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn omitting_x_d2x_relations_breaks_closure() {
        let ring = ring();
        let b = q_plane(&ring);
        let c = b.scale(&Coefficient::sym(&ring, "q", 2));
        let big_q = Coefficient::sym(&ring, "Q", 1);
        let kinds = [RelationKind::Plane, RelationKind::FirstOrder];
        let spec = CalculusSpec::assemble_with(b, c.clone(), None, big_q.clone(), &kinds).unwrap();
        let report = check_complex(&spec, 1);
        let first = report.relation_failures.first().expect("closure must fail");
        let expected = derive_x_d2x_relations(&c, &big_q).unwrap();
        let residue = &first.residue;
        assert!(
            expected
                .iter()
                .any(|e| spec.relations().normal_form(e) == *residue),
            "residue {residue} is not an x-d2x relation"
        );
    }

    fn check_linear_condition_holds(b: &StructureMatrix, c: &StructureMatrix) -> bool {
        crate::tensorcheck::check_linear_condition(b, c)
            .unwrap()
            .holds()
    }

    #[test]
    fn braid_compat_holds_modulo_the_plane_for_both_families() {
        use crate::plane2d::{c_matrix, Family};
        let ring = ring();
        let b = q_plane(&ring);
        for fam in [Family::One, Family::Two] {
            let c = c_matrix(&ring, fam, "q", "r").unwrap();
            assert!(check_braid_compat_modulo(&b, &c).unwrap().holds());
            assert!(!check_braid_compat(&b, &c).unwrap().holds());
            // a diagonal entry that keeps (E - B)(E + C) = 0
            let (i, j) = if fam == Family::One { (2, 2) } else { (1, 1) };
            let bumped = &c.entry(i, j, i, j).clone() + &Coefficient::one(&ring);
            let bad = c.with_entry(i, j, i, j, bumped);
            assert!(check_linear_condition_holds(&b, &bad));
            assert!(!check_braid_compat_modulo(&b, &bad).unwrap().holds());
        }
        let wz = c_matrix(&ring, Family::One, "q", "r")
            .unwrap()
            .try_map(|v| v.substitute("r", &Coefficient::sym(&ring, "q", 2)))
            .unwrap();
        assert!(check_braid_compat(&b, &wz).unwrap().holds());
    }
}
