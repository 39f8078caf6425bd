//! Free graded associative algebra on named generators, and its quotients by
//! oriented quadratic rewrite rules.

mod element;
mod relations;

pub use element::{Element, Word};
pub use relations::{CriticalPair, RelationSet, RewriteRule};

use std::cmp::Ordering;
use std::sync::Arc;

use thiserror::Error;

use crate::symring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeAlgError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relation `{0}` contains a word that is not of length 2")]
    NonQuadratic(String),
    #[error("relation `{0}` is not grade-homogeneous")]
    Inhomogeneous(String),
    #[error("elements live over different generators or coefficient rings")]
    Mismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A named generator of degree 0 (`x^i`), 1 (`dx^i`) or 2 (`d^2x^i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u8,
    pub index: usize,
}

/// An ordered generator list. Position in the list is the generator order
/// used by the monomial order on words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    aliases: Vec<(String, usize)>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<Self>, FreeAlgError> {
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(FreeAlgError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(Alphabet {
            gens,
            aliases: Vec::new(),
        }))
    }

    /// Generators `d2x^1 < .. < d2x^n < dx^1 < .. < dx^n < x^1 < .. < x^n`.
    ///
    /// For `n = 2` the canonical names are `x, y, dx, dy, d2x, d2y`, with
    /// `x1, x2, dx1, ...` accepted as aliases; otherwise `x1..xn`.
    pub fn calculus(n: usize) -> Arc<Self> {
        let base = |i: usize| -> String {
            if n == 2 {
                ["x", "y"][i - 1].to_string()
            } else {
                format!("x{i}")
            }
        };
        let mut gens = Vec::with_capacity(3 * n);
        let mut aliases = Vec::new();
        for degree in [2u8, 1, 0] {
            let prefix = ["", "d", "d2"][degree as usize];
            for i in 1..=n {
                let name = format!("{prefix}{}", base(i));
                if n == 2 {
                    aliases.push((format!("{prefix}x{i}"), gens.len()));
                }
                gens.push(Generator {
                    name,
                    degree,
                    index: i,
                });
            }
        }
        Arc::new(Alphabet { gens, aliases })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generator(&self, pos: u16) -> &Generator {
        &self.gens[pos as usize]
    }

    pub fn position(&self, name: &str) -> Option<u16> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .or_else(|| {
                self.aliases
                    .iter()
                    .find(|(a, _)| a == name)
                    .map(|(_, p)| *p)
            })
            .map(|p| p as u16)
    }

    pub fn find(&self, degree: u8, index: usize) -> Option<u16> {
        self.gens
            .iter()
            .position(|g| g.degree == degree && g.index == index)
            .map(|p| p as u16)
    }

    /// `d` on a generator: `Some(Some(g'))` for the next degree, `Some(None)`
    /// for a top-degree generator (d of it is zero), `None` if the successor
    /// is missing from the alphabet.
    pub fn differential(&self, pos: u16) -> Option<Option<u16>> {
        let g = self.generator(pos);
        if g.degree >= 2 {
            return Some(None);
        }
        self.find(g.degree + 1, g.index).map(Some)
    }

    /// Words are ordered by length, then lexicographically by generator position.
    pub fn monomial_order(&self, u: &Word, v: &Word) -> Ordering {
        u.cmp(v)
    }
}

/// `monomial_order` as a free function for callers that do not hold an alphabet.
pub fn monomial_order(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_alphabet_order() {
        let a = Alphabet::calculus(2);
        let names: Vec<_> = a.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["d2x", "d2y", "dx", "dy", "x", "y"]);
        assert_eq!(a.position("x2"), a.position("y"));
        assert_eq!(a.position("d2x1"), Some(0));
        let b = Alphabet::calculus(3);
        assert_eq!(b.generator(0).name, "d2x1");
        assert_eq!(b.generator(8).name, "x3");
    }

    #[test]
    fn monomial_order_examples() {
        let a = Alphabet::calculus(2);
        let w = |s: &str| Word::parse(&a, s).unwrap();
        assert_eq!(monomial_order(&w("x*y"), &w("y*x")), Ordering::Less);
        assert_eq!(monomial_order(&w("dx*x"), &w("x*dx")), Ordering::Less);
        assert_eq!(monomial_order(&w("x"), &w("dx*dy")), Ordering::Less);
    }

    #[test]
    fn differential_successors() {
        let a = Alphabet::calculus(2);
        let x = a.position("x").unwrap();
        let dx = a.position("dx").unwrap();
        let d2x = a.position("d2x").unwrap();
        assert_eq!(a.differential(x), Some(Some(dx)));
        assert_eq!(a.differential(dx), Some(Some(d2x)));
        assert_eq!(a.differential(d2x), Some(None));
    }
}
