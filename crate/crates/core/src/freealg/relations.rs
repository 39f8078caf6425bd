use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{Alphabet, Element, FreeAlgError, Word};
use crate::symring::{Coefficient, Ring};

/// `lhs -> rhs` with `lhs` a word of length 2 and every word of `rhs` smaller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Element,
}

/// Oriented rules plus relations whose leading coefficient is not a unit.
///
/// Residuals are kept in echelon form (distinct leading words) and take part
/// only in the zero test `reduces_to_zero`, which decides membership over the
/// fraction field of the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    alphabet: Arc<Alphabet>,
    ring: Arc<Ring>,
    rules: BTreeMap<Word, Element>,
    residuals: Vec<Element>,
}

/// Two reductions of an overlap word `uvw` where `uv` and `vw` are rule heads.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub word: Word,
    pub left: Element,
    pub right: Element,
    pub resolved: bool,
}

impl RelationSet {
    pub fn empty(alphabet: &Arc<Alphabet>, ring: &Arc<Ring>) -> Self {
        RelationSet {
            alphabet: alphabet.clone(),
            ring: ring.clone(),
            rules: BTreeMap::new(),
            residuals: Vec::new(),
        }
    }

    /// Gaussian elimination over the span of quadratic, grade-homogeneous
    /// relations. Each pivot is the largest word of a relation; it becomes a
    /// rule head when its coefficient is a unit monomial.
    pub fn orient(
        alphabet: &Arc<Alphabet>,
        ring: &Arc<Ring>,
        relations: &[Element],
    ) -> Result<Self, FreeAlgError> {
        let mut rs = Self::empty(alphabet, ring);
        rs.extend(relations)?;
        Ok(rs)
    }

    pub fn extend(&mut self, relations: &[Element]) -> Result<(), FreeAlgError> {
        for r in relations {
            self.check_relation(r)?;
        }
        for r in relations {
            self.insert(r.clone());
        }
        Ok(())
    }

    fn check_relation(&self, r: &Element) -> Result<(), FreeAlgError> {
        if !Arc::ptr_eq(&self.alphabet, r.alphabet()) && *self.alphabet != **r.alphabet() {
            return Err(FreeAlgError::Mismatch);
        }
        if !Arc::ptr_eq(&self.ring, r.ring()) && *self.ring != **r.ring() {
            return Err(FreeAlgError::Mismatch);
        }
        if r.terms().any(|(w, _)| w.len() != 2) {
            return Err(FreeAlgError::NonQuadratic(r.to_string()));
        }
        if !r.is_homogeneous() {
            return Err(FreeAlgError::Inhomogeneous(r.to_string()));
        }
        Ok(())
    }

    fn insert(&mut self, rel: Element) {
        let mut queue = vec![rel];
        while let Some(r) = queue.pop() {
            let r = self.normal_form(&r);
            let Some((w, c)) = r.leading() else { continue };
            let (w, c) = (w.clone(), c.clone());
            if let Ok(inv) = c.inverse() {
                let mut rhs = r.scale(&(-&inv));
                rhs.add_term(w.clone(), &Coefficient::one(&self.ring));
                self.rules.insert(w.clone(), rhs);
                let heads: Vec<Word> = self.rules.keys().filter(|k| **k != w).cloned().collect();
                for h in heads {
                    let reduced = self.normal_form(&self.rules[&h]);
                    self.rules.insert(h, reduced);
                }
                queue.append(&mut self.residuals);
            } else if let Some(pos) = self
                .residuals
                .iter()
                .position(|s| s.leading().map(|l| l.0) == Some(&w))
            {
                let s = &self.residuals[pos];
                let p = s.leading().unwrap().1.clone();
                let combo = if let Ok(pinv) = p.inverse() {
                    &r - &s.scale(&(&c * &pinv))
                } else {
                    &r.scale(&p) - &s.scale(&c)
                };
                queue.push(combo);
            } else {
                self.residuals.push(r);
            }
        }
        self.residuals
            .sort_by(|a, b| a.leading().map(|l| l.0).cmp(&b.leading().map(|l| l.0)));
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rules(&self) -> impl Iterator<Item = RewriteRule> + '_ {
        self.rules.iter().map(|(l, r)| RewriteRule {
            lhs: l.clone(),
            rhs: r.clone(),
        })
    }

    pub fn rule(&self, lhs: &Word) -> Option<&Element> {
        self.rules.get(lhs)
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn residuals(&self) -> &[Element] {
        &self.residuals
    }

    /// Every relation as an element `lhs - rhs`, followed by the residuals.
    pub fn relation_elements(&self) -> Vec<Element> {
        let mut out: Vec<Element> = self
            .rules
            .iter()
            .map(|(l, r)| &Element::word(&self.alphabet, &self.ring, l.clone()) - r)
            .collect();
        out.extend(self.residuals.iter().cloned());
        out
    }

    /// Residuals of the form `c * w` become rules `w -> 0`.
    ///
    /// The scalar `c` is assumed nonzero. This is the step that turns, e.g.,
    /// `(1 + r) d2x*d2x = 0` into `d2x*d2x = 0`.
    pub fn cancel_monomial_residuals(&mut self) {
        let (mono, rest): (Vec<_>, Vec<_>) = std::mem::take(&mut self.residuals)
            .into_iter()
            .partition(|e| e.num_terms() == 1);
        self.residuals = rest;
        for m in mono {
            let w = m.leading().unwrap().0.clone();
            self.insert(Element::word(&self.alphabet, &self.ring, w));
        }
    }

    /// Union of two relation sets over the same generators, re-oriented.
    pub fn merged(&self, other: &RelationSet) -> Result<RelationSet, FreeAlgError> {
        let mut out = self.clone();
        out.extend(&other.relation_elements())?;
        Ok(out)
    }

    /// Rewrites until no rule applies. Terminates because every rule replaces
    /// a factor by strictly smaller words of the same length or shorter.
    pub fn normal_form(&self, e: &Element) -> Element {
        let mut cache = HashMap::new();
        self.normal_form_cached(e, &mut cache)
    }

    fn normal_form_cached(&self, e: &Element, cache: &mut HashMap<Word, Element>) -> Element {
        let mut out = Element::zero(&self.alphabet, e.ring());
        for (w, c) in e.terms() {
            let red = self.reduce_word(w, cache);
            for (w2, c2) in red.terms() {
                out.add_term(w2.clone(), &(c * c2));
            }
        }
        out
    }

    fn reduce_word(&self, w: &Word, cache: &mut HashMap<Word, Element>) -> Element {
        if let Some(r) = cache.get(w) {
            return r.clone();
        }
        let letters = w.letters();
        let redex = (0..letters.len().saturating_sub(1)).find_map(|i| {
            self.rules
                .get(&Word(vec![letters[i], letters[i + 1]]))
                .map(|rhs| (i, rhs))
        });
        let out = match redex {
            None => Element::word(&self.alphabet, &self.ring, w.clone()),
            Some((i, rhs)) => {
                let prefix = Word(letters[..i].to_vec());
                let suffix = Word(letters[i + 2..].to_vec());
                let mut acc = Element::zero(&self.alphabet, &self.ring);
                for (rw, rc) in rhs.terms() {
                    let nw = prefix.concat(rw).concat(&suffix);
                    let sub = self.reduce_word(&nw, cache);
                    for (w2, c2) in sub.terms() {
                        acc.add_term(w2.clone(), &(rc * c2));
                    }
                }
                acc
            }
        };
        cache.insert(w.clone(), out.clone());
        out
    }

    /// Free product followed by reduction.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        self.normal_form(&(a * b))
    }

    /// Whether `e` lies in the two-sided ideal generated by the rules and the
    /// residuals, tested degree by degree over the fraction field.
    pub fn reduces_to_zero(&self, e: &Element) -> bool {
        let nf = self.normal_form(e);
        if nf.is_zero() {
            return true;
        }
        if self.residuals.is_empty() {
            return false;
        }
        let mut groups: BTreeMap<(usize, u32), Element> = BTreeMap::new();
        for (w, c) in nf.terms() {
            groups
                .entry((w.len(), w.grade(&self.alphabet)))
                .or_insert_with(|| Element::zero(&self.alphabet, &self.ring))
                .add_term(w.clone(), c);
        }
        let mut cache = HashMap::new();
        groups.into_iter().all(|((len, grade), part)| {
            let mut ech = Echelon::default();
            for m in self.residual_multiples(len, grade, &mut cache) {
                ech.insert(m);
            }
            ech.reduce(part).is_zero()
        })
    }

    /// Normalised `u * rho * v` for every residual `rho` and words `u, v`
    /// with the requested total length and grade.
    fn residual_multiples(
        &self,
        len: usize,
        grade: u32,
        cache: &mut HashMap<Word, Element>,
    ) -> Vec<Element> {
        let mut out = Vec::new();
        if len < 2 {
            return out;
        }
        for rho in &self.residuals {
            let Some(g) = rho.grade() else { continue };
            if g > grade {
                continue;
            }
            let outer = len - 2;
            for left_len in 0..=outer {
                for u in words_of_length(&self.alphabet, left_len) {
                    let gu = u.grade(&self.alphabet);
                    if gu + g > grade {
                        continue;
                    }
                    for v in words_of_length(&self.alphabet, outer - left_len) {
                        if gu + g + v.grade(&self.alphabet) != grade {
                            continue;
                        }
                        let ue = Element::word(&self.alphabet, &self.ring, u.clone());
                        let ve = Element::word(&self.alphabet, &self.ring, v);
                        let m = self.normal_form_cached(&(&(&ue * rho) * &ve), cache);
                        if !m.is_zero() {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// All overlaps `abc` of rule heads `ab` and `bc`, each side reduced to
    /// normal form. A pair is resolved when the two sides agree modulo the
    /// residual relations.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        for (l1, r1) in &self.rules {
            for (l2, r2) in &self.rules {
                if l1.letters()[1] != l2.letters()[0] {
                    continue;
                }
                let a = l1.letters()[0];
                let c = l2.letters()[1];
                let word = Word(vec![a, l1.letters()[1], c]);
                let ce = Element::word(&self.alphabet, &self.ring, Word(vec![c]));
                let ae = Element::word(&self.alphabet, &self.ring, Word(vec![a]));
                let left = self.normal_form(&(r1 * &ce));
                let right = self.normal_form(&(&ae * r2));
                let resolved = left == right || self.reduces_to_zero(&(&left - &right));
                out.push(CriticalPair {
                    word,
                    left,
                    right,
                    resolved,
                });
            }
        }
        out
    }

    pub fn is_confluent(&self) -> bool {
        self.critical_pairs().iter().all(|p| p.resolved)
    }

    /// Rules and residuals rendered one per line, in monomial order.
    pub fn render(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .rules
            .iter()
            .rev()
            .map(|(l, r)| format!("{} -> {}", l.render(&self.alphabet), r))
            .collect();
        out.extend(self.residuals.iter().rev().map(|e| format!("{} = 0", e)));
        out
    }
}

fn words_of_length(alphabet: &Alphabet, len: usize) -> Vec<Word> {
    let mut words = vec![Word::unit()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..alphabet.len() as u16).map(move |g| {
                    let mut v = w.0.clone();
                    v.push(g);
                    Word(v)
                })
            })
            .collect();
    }
    words
}

/// Fraction-free row echelon form keyed by leading word.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Word, Element>,
}

impl Echelon {
    fn step(&self, row: Element) -> Result<Element, Element> {
        let Some((w, c)) = row.leading() else {
            return Err(row);
        };
        match self.rows.get(w) {
            None => Err(row),
            Some(p_row) => {
                let p = p_row.leading().unwrap().1;
                let c = c.clone();
                Ok(match p.inverse() {
                    Ok(pinv) => &row - &p_row.scale(&(&c * &pinv)),
                    Err(_) => &row.scale(p) - &p_row.scale(&c),
                })
            }
        }
    }

    fn reduce(&self, mut row: Element) -> Element {
        loop {
            match self.step(row) {
                Ok(next) => row = next,
                Err(done) => return done,
            }
        }
    }

    fn insert(&mut self, row: Element) {
        let row = self.reduce(row);
        if let Some((w, _)) = row.leading() {
            self.rows.insert(w.clone(), row);
        }
    }
}
