use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Alphabet, FreeAlgError};
use crate::symring::{Coefficient, GaussianRational, Ring, RingError};

/// A word in the generators, stored as generator positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn grade(&self, alphabet: &Alphabet) -> u32 {
        self.0
            .iter()
            .map(|&g| alphabet.generator(g).degree as u32)
            .sum()
    }

    /// Parses `*`-joined generator names; `1` or the empty string is the unit.
    pub fn parse(alphabet: &Alphabet, src: &str) -> Result<Word, FreeAlgError> {
        let s = src.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::unit());
        }
        s.split('*')
            .map(|name| {
                let name = name.trim();
                alphabet
                    .position(name)
                    .ok_or_else(|| FreeAlgError::UnknownGenerator(name.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&g| alphabet.generator(g).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A finite linear combination of words with coefficients in a shared ring.
#[derive(Clone, Debug)]
pub struct Element {
    alphabet: Arc<Alphabet>,
    ring: Arc<Ring>,
    terms: BTreeMap<Word, Coefficient>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(alphabet: &Arc<Alphabet>, ring: &Arc<Ring>) -> Self {
        Element {
            alphabet: alphabet.clone(),
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &Arc<Alphabet>, ring: &Arc<Ring>) -> Self {
        Self::monomial(alphabet, Word::unit(), Coefficient::one(ring))
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, word: Word, c: Coefficient) -> Self {
        let mut e = Self::zero(alphabet, c.ring());
        if !c.is_zero() {
            e.terms.insert(word, c);
        }
        e
    }

    pub fn word(alphabet: &Arc<Alphabet>, ring: &Arc<Ring>, word: Word) -> Self {
        Self::monomial(alphabet, word, Coefficient::one(ring))
    }

    pub fn generator(
        alphabet: &Arc<Alphabet>,
        ring: &Arc<Ring>,
        name: &str,
    ) -> Result<Self, FreeAlgError> {
        let p = alphabet
            .position(name)
            .ok_or_else(|| FreeAlgError::UnknownGenerator(name.to_string()))?;
        Ok(Self::word(alphabet, ring, Word(vec![p])))
    }

    /// Parses a single word such as `d2x*y`.
    pub fn parse_word(
        alphabet: &Arc<Alphabet>,
        ring: &Arc<Ring>,
        src: &str,
    ) -> Result<Self, FreeAlgError> {
        Ok(Self::word(alphabet, ring, Word::parse(alphabet, src)?))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn compatible(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet)
            && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Coefficient {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(&self.ring))
    }

    /// Largest word under the monomial order, with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Coefficient)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, FreeAlgError> {
        if !self.compatible(o) {
            return Err(FreeAlgError::Mismatch);
        }
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, FreeAlgError> {
        if !self.compatible(o) {
            return Err(FreeAlgError::Mismatch);
        }
        let mut out = Self::zero(&self.alphabet, &self.ring);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(&self.alphabet, &self.ring);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), &(v * c));
        }
        out
    }

    /// Grade of a homogeneous element; `None` for zero or mixed grades.
    pub fn grade(&self) -> Option<u32> {
        let mut grades = self.terms.keys().map(|w| w.grade(&self.alphabet));
        let g = grades.next()?;
        grades.all(|h| h == g).then_some(g)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.grade().is_some()
    }

    /// Moves all coefficients into another ring with compatible symbols.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Self, RingError> {
        let mut out = Self::zero(&self.alphabet, target);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.to_ring(target)?);
        }
        Ok(out)
    }

    /// Re-expresses the element over a different alphabet by generator name.
    pub fn to_alphabet(&self, target: &Arc<Alphabet>) -> Result<Self, FreeAlgError> {
        let mut out = Self::zero(target, &self.ring);
        for (w, c) in &self.terms {
            let letters =
                w.0.iter()
                    .map(|&g| {
                        let name = &self.alphabet.generator(g).name;
                        target
                            .position(name)
                            .ok_or_else(|| FreeAlgError::UnknownGenerator(name.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            out.add_term(Word(letters), c);
        }
        Ok(out)
    }

    /// Numeric image of every coefficient.
    pub fn specialize(
        &self,
        at: &std::collections::HashMap<String, GaussianRational>,
    ) -> Result<BTreeMap<Word, GaussianRational>, RingError> {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = c.specialize(at)?;
            if !v.is_zero() {
                out.insert(w.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn mentions_symbol(&self, name: &str) -> bool {
        self.terms.values().any(|c| c.mentions(name))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        self.try_add(o).expect("element mismatch")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        self.try_add(&-o).expect("element mismatch")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.try_mul(o).expect("element mismatch")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, o: Element) -> Element {
        &self + &o
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, o: Element) -> Element {
        &self - &o
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, o: Element) -> Element {
        &self * &o
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

fn coefficient_prefix(c: &Coefficient) -> (bool, String) {
    if let Some((v, _)) = c.as_monomial() {
        let neg = v.renders_negative();
        let shown = if neg { (-c).to_string() } else { c.to_string() };
        (neg, shown)
    } else {
        (false, format!("({c})"))
    }
}

impl fmt::Display for Element {
    /// Terms in descending monomial order, e.g. `q^-1 * x*y - d2x*dx`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let (neg, shown) = coefficient_prefix(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                f.write_str(&shown)?;
            } else if shown == "1" {
                f.write_str(&w.render(&self.alphabet))?;
            } else {
                write!(f, "{} * {}", shown, w.render(&self.alphabet))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_product_and_display() {
        let a = Alphabet::calculus(2);
        let ring = Ring::laurent(&["q"]);
        let x = Element::generator(&a, &ring, "x").unwrap();
        let y = Element::generator(&a, &ring, "y").unwrap();
        let q = Coefficient::sym(&ring, "q", 1);
        let e = &(&x * &y) - &(&y * &x).scale(&q);
        assert_eq!(e.to_string(), "-q * y*x + x*y");
        assert_eq!(e.grade(), Some(0));
        let sum = &x + &y;
        assert_eq!(
            &sum * &sum,
            &(&(&x * &x) + &(&x * &y)) + &(&(&y * &x) + &(&y * &y))
        );
        assert_eq!(Element::zero(&a, &ring).to_string(), "0");
    }

    #[test]
    fn grade_of_mixed_words() {
        let a = Alphabet::calculus(2);
        let ring = Ring::laurent(&["q"]);
        let e = Element::parse_word(&a, &ring, "d2x*dy*x").unwrap();
        assert_eq!(e.grade(), Some(3));
        let mixed = &e + &Element::parse_word(&a, &ring, "x").unwrap();
        assert_eq!(mixed.grade(), None);
    }
}
