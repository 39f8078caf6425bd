use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gaussian::GaussianRational;
use super::ring::{accumulate, render_terms, same_ring, Monomial, Ring, Terms};
use super::RingError;

/// Reduced Laurent polynomial with Gaussian rational coefficients.
///
/// The empty term map is zero. Values are immutable; arithmetic returns fresh
/// reduced coefficients.
#[derive(Clone, Debug)]
pub struct Coefficient {
    ring: Arc<Ring>,
    terms: Terms,
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Coefficient {}

impl Coefficient {
    pub(crate) fn from_terms(ring: &Arc<Ring>, terms: Terms) -> Self {
        Coefficient {
            ring: ring.clone(),
            terms: ring.reduce(terms),
        }
    }

    pub(crate) fn from_terms_in(ring: &Ring, terms: &Terms) -> Self {
        Coefficient {
            ring: Arc::new(ring.clone()),
            terms: ring.reduce(terms.clone()),
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Coefficient {
            ring: ring.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, GaussianRational::one())
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Self {
        Self::constant(ring, GaussianRational::from_int(n))
    }

    pub fn imaginary_unit(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, GaussianRational::i())
    }

    pub fn constant(ring: &Arc<Ring>, c: GaussianRational) -> Self {
        let mut t = Terms::new();
        accumulate(&mut t, vec![0; ring.nvars()], &c);
        Self::from_terms(ring, t)
    }

    pub fn symbol(ring: &Arc<Ring>, name: &str) -> Result<Self, RingError> {
        let i = ring
            .symbol_index(name)
            .ok_or_else(|| RingError::UnknownSymbol(name.to_string()))?;
        let mut m = vec![0; ring.nvars()];
        m[i] = 1;
        let mut t = Terms::new();
        t.insert(m, GaussianRational::one());
        Ok(Self::from_terms(ring, t))
    }

    /// Shorthand for `symbol(..).pow(e)`; panics on unknown symbols.
    pub fn sym(ring: &Arc<Ring>, name: &str, e: i64) -> Self {
        Self::symbol(ring, name)
            .and_then(|s| s.pow(e))
            .unwrap_or_else(|err| panic!("sym({name}, {e}): {err}"))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub(crate) fn terms_map(&self) -> &Terms {
        &self.terms
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring)
    }

    pub fn check_same_ring(&self, other: &Self) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::Mismatch)
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, RingError> {
        self.check_same_ring(o)?;
        let mut t = self.terms.clone();
        for (m, c) in &o.terms {
            accumulate(&mut t, m.clone(), c);
        }
        Ok(Coefficient {
            ring: self.ring.clone(),
            terms: t,
        })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, RingError> {
        self.try_add(&o.neg_ref())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, RingError> {
        self.check_same_ring(o)?;
        let mut t = Terms::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                accumulate(&mut t, m, &(c1 * c2));
            }
        }
        Ok(Self::from_terms(&self.ring, t))
    }

    fn neg_ref(&self) -> Self {
        Coefficient {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Coefficient {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Returns `(c, m)` when the value is a single term `c * m`.
    pub fn as_monomial(&self) -> Option<(&GaussianRational, &Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, m))
        } else {
            None
        }
    }

    /// A unit is a nonzero single term whose negative exponents, and the
    /// exponents of its inverse, only touch invertible symbols.
    pub fn is_unit(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Inverse of a unit monomial.
    pub fn inverse(&self) -> Result<Self, RingError> {
        let (c, m) = self
            .as_monomial()
            .ok_or_else(|| RingError::NotUnit(self.to_string()))?;
        let ci = c
            .inv()
            .ok_or_else(|| RingError::NotUnit(self.to_string()))?;
        for (i, &e) in m.iter().enumerate() {
            if e != 0 && !self.ring.symbols()[i].invertible {
                return Err(RingError::NotInvertible(
                    self.ring.symbol_name(i).to_string(),
                ));
            }
        }
        let mut t = Terms::new();
        t.insert(m.iter().map(|e| -e).collect(), ci);
        Ok(Self::from_terms(&self.ring, t))
    }

    pub fn pow(&self, e: i64) -> Result<Self, RingError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.ring);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Exact division by a unit monomial.
    pub fn div_unit(&self, d: &Self) -> Result<Self, RingError> {
        self.try_mul(&d.inverse()?)
    }

    /// Exponent range of a symbol across all terms.
    pub fn degree_range(&self, name: &str) -> Option<(i32, i32)> {
        let i = self.ring.symbol_index(name)?;
        let lo = self.terms.keys().map(|m| m[i]).min()?;
        let hi = self.terms.keys().map(|m| m[i]).max()?;
        Some((lo, hi))
    }

    pub fn symbols_used(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    out.insert(self.ring.symbol_name(i).to_string());
                }
            }
        }
        out
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.symbols_used().contains(name)
    }

    /// Evaluates at exact values. All symbols that occur must be assigned, and
    /// every constraint whose oriented symbol is assigned must hold.
    pub fn specialize(
        &self,
        assignment: &HashMap<String, GaussianRational>,
    ) -> Result<GaussianRational, RingError> {
        check_assignment(&self.ring, assignment)?;
        eval_terms(&self.ring, &self.terms, assignment)
    }

    /// Ring homomorphism sending `name` to `value` and fixing other symbols.
    /// Negative powers of `name` require `value` to be a unit.
    pub fn substitute(&self, name: &str, value: &Self) -> Result<Self, RingError> {
        self.check_same_ring(value)?;
        let i = self
            .ring
            .symbol_index(name)
            .ok_or_else(|| RingError::UnknownSymbol(name.to_string()))?;
        let mut acc = Self::zero(&self.ring);
        let mut cache: HashMap<i32, Self> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m[i];
            let p = match cache.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = value.pow(e as i64)?;
                    cache.insert(e, p.clone());
                    p
                }
            };
            let mut rest = m.clone();
            rest[i] = 0;
            let mut t = Terms::new();
            t.insert(rest, c.clone());
            acc = &acc + &(&Self::from_terms(&self.ring, t) * &p);
        }
        Ok(acc)
    }

    /// Reinterprets the value in another ring by matching symbol names.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Self, RingError> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .ring
            .symbols()
            .iter()
            .map(|s| target.symbol_index(&s.name))
            .collect();
        let mut t = Terms::new();
        for (m, c) in &self.terms {
            let mut nm = vec![0; target.nvars()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    RingError::UnknownSymbol(self.ring.symbol_name(i).to_string())
                })?;
                if e < 0 && !target.symbols()[j].invertible {
                    return Err(RingError::NotInvertible(target.symbol_name(j).to_string()));
                }
                nm[j] = e;
            }
            accumulate(&mut t, nm, c);
        }
        Ok(Self::from_terms(target, t))
    }

    /// Coefficients of the powers of `name`, as a map exponent -> coefficient
    /// free of `name`.
    pub fn collect_powers(&self, name: &str) -> Result<Vec<(i32, Self)>, RingError> {
        let i = self
            .ring
            .symbol_index(name)
            .ok_or_else(|| RingError::UnknownSymbol(name.to_string()))?;
        let mut by_exp: std::collections::BTreeMap<i32, Terms> = Default::default();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            rest[i] = 0;
            accumulate(by_exp.entry(m[i]).or_default(), rest, c);
        }
        Ok(by_exp
            .into_iter()
            .map(|(e, t)| {
                (
                    e,
                    Coefficient {
                        ring: self.ring.clone(),
                        terms: t,
                    },
                )
            })
            .collect())
    }
}

pub(crate) fn check_assignment(
    ring: &Arc<Ring>,
    assignment: &HashMap<String, GaussianRational>,
) -> Result<(), RingError> {
    for c in ring.constraints() {
        let name = ring.symbol_name(c.symbol_index());
        if !assignment.contains_key(name) {
            continue;
        }
        let v = eval_terms(ring, &c.polynomial, assignment)?;
        if !v.is_zero() {
            return Err(RingError::ConstraintViolated(render_terms(
                ring,
                &c.polynomial,
            )));
        }
    }
    Ok(())
}

fn eval_terms(
    ring: &Arc<Ring>,
    terms: &Terms,
    assignment: &HashMap<String, GaussianRational>,
) -> Result<GaussianRational, RingError> {
    let mut acc = GaussianRational::zero();
    for (m, c) in terms {
        let mut v = c.clone();
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = ring.symbol_name(i);
            let x = assignment
                .get(name)
                .ok_or_else(|| RingError::Unassigned(name.to_string()))?;
            let p = x
                .pow(e as i64)
                .ok_or_else(|| RingError::DivisionByZero(name.to_string()))?;
            v = &v * &p;
        }
        acc += &v;
    }
    Ok(acc)
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        self.try_add(o).expect("coefficient ring mismatch")
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        self.try_sub(o).expect("coefficient ring mismatch")
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        self.try_mul(o).expect("coefficient ring mismatch")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coefficient {
            type Output = Coefficient;
            fn $m(self, o: Coefficient) -> Coefficient {
                (&self).$m(&o)
            }
        }
        impl $tr<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $m(self, o: &Coefficient) -> Coefficient {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.ring, &self.terms))
    }
}
