//! Symbol tables and the monomial constraints that define a coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::gaussian::GaussianRational;
use super::RingError;

/// Exponent vector, one slot per ring symbol (symbols sorted by name).
pub type Monomial = Vec<i32>;

pub(crate) type Terms = BTreeMap<Monomial, GaussianRational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub invertible: bool,
}

/// Oriented reduction `sym^degree -> replacement`, plus the derived rule for
/// `sym^-1` when the symbol is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub(crate) symbol: usize,
    pub(crate) degree: i32,
    pub(crate) replacement: Terms,
    pub(crate) inverse: Option<Terms>,
    /// The polynomial `p` with `p = 0`, normalised so that `sym^degree` has coefficient 1.
    pub(crate) polynomial: Terms,
}

impl Constraint {
    pub fn symbol_index(&self) -> usize {
        self.symbol
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }
}

/// A commutative Laurent polynomial ring over Q(i), modulo constraints of the
/// shape `sym^k = (polynomial of lower degree in sym)`.
///
/// Every constraint must mention only its own symbol and unconstrained
/// symbols on the right-hand side, so the reductions for distinct symbols
/// commute and the reduced form is unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    symbols: Vec<Symbol>,
    constraints: Vec<Constraint>,
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Ring {
    /// A ring with the given symbols and no constraints.
    pub fn new<S: AsRef<str>>(symbols: &[(S, bool)]) -> Result<Arc<Ring>, RingError> {
        let mut syms: Vec<Symbol> = symbols
            .iter()
            .map(|(n, inv)| Symbol {
                name: n.as_ref().to_string(),
                invertible: *inv,
            })
            .collect();
        syms.sort_by(|a, b| a.name.cmp(&b.name));
        for w in syms.windows(2) {
            if w[0].name == w[1].name {
                return Err(RingError::DuplicateSymbol(w[0].name.clone()));
            }
        }
        for s in &syms {
            if !valid_symbol_name(&s.name) || s.name == "I" {
                return Err(RingError::BadSymbolName(s.name.clone()));
            }
        }
        Ok(Arc::new(Ring {
            symbols: syms,
            constraints: Vec::new(),
        }))
    }

    /// Laurent ring in which every listed symbol is invertible.
    pub fn laurent(names: &[&str]) -> Arc<Ring> {
        let v: Vec<(&str, bool)> = names.iter().map(|n| (*n, true)).collect();
        Ring::new(&v).expect("valid symbol list")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
    }

    pub fn nvars(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_constrained(&self, idx: usize) -> bool {
        self.constraints.iter().any(|c| c.symbol == idx)
    }

    /// Same symbols and constraints plus one fresh symbol.
    pub fn with_symbol(&self, name: &str, invertible: bool) -> Result<Arc<Ring>, RingError> {
        let mut syms: Vec<(String, bool)> = self
            .symbols
            .iter()
            .map(|s| (s.name.clone(), s.invertible))
            .collect();
        syms.push((name.to_string(), invertible));
        let base = Ring::new(&syms)?;
        let polys = self
            .constraints
            .iter()
            .map(|c| super::Coefficient::from_terms_in(self, &c.polynomial).to_ring(&base))
            .collect::<Result<Vec<_>, _>>()?;
        base.constrained(&polys)
    }

    /// Adds the relations `p = 0` for each polynomial, orienting each on the
    /// lexicographically largest symbol it mentions. The polynomials must live
    /// in a ring with the same symbols as `self`.
    pub fn constrained(
        self: &Arc<Self>,
        polys: &[super::Coefficient],
    ) -> Result<Arc<Ring>, RingError> {
        let mut ring = (**self).clone();
        for p in polys {
            if p.ring().symbols != self.symbols {
                return Err(RingError::Mismatch);
            }
            let c = ring.orient(p.terms_map())?;
            if ring.constraints.iter().any(|o| o.symbol == c.symbol) {
                return Err(RingError::BadConstraint(
                    p.to_string(),
                    format!(
                        "symbol `{}` already constrained",
                        ring.symbols[c.symbol].name
                    ),
                ));
            }
            ring.constraints.push(c);
        }
        // Replacements may not mention another constrained symbol.
        for c in &ring.constraints {
            for other in &ring.constraints {
                if other.symbol == c.symbol {
                    continue;
                }
                let rhs_uses = |t: &Terms| t.keys().any(|m| m[other.symbol] != 0);
                if rhs_uses(&c.replacement) || c.inverse.as_ref().is_some_and(rhs_uses) {
                    return Err(RingError::BadConstraint(
                        render_terms(&ring, &c.polynomial),
                        format!(
                            "mentions constrained symbol `{}`",
                            ring.symbols[other.symbol].name
                        ),
                    ));
                }
            }
        }
        let ring = Arc::new(ring);
        Ok(ring)
    }

    fn orient(&self, terms: &Terms) -> Result<Constraint, RingError> {
        let shown = render_terms(self, terms);
        let bad = |why: &str| RingError::BadConstraint(shown.clone(), why.to_string());
        if terms.is_empty() {
            return Err(bad("zero polynomial"));
        }
        // Lexicographically largest symbol name mentioned; symbols are stored sorted.
        let sym = (0..self.nvars())
            .rev()
            .find(|&i| terms.keys().any(|m| m[i] != 0))
            .ok_or_else(|| bad("no symbol"))?;
        let min_e = terms.keys().map(|m| m[sym]).min().unwrap();
        let shifted: Terms = terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[sym] -= min_e;
                (m, c.clone())
            })
            .collect();
        let degree = shifted.keys().map(|m| m[sym]).max().unwrap();
        if degree <= 0 {
            return Err(bad("symbol does not occur with positive degree"));
        }
        let leading: Vec<_> = shifted.iter().filter(|(m, _)| m[sym] == degree).collect();
        if leading.len() != 1 {
            return Err(bad("leading coefficient is not a unit monomial"));
        }
        let (lead_m, lead_c) = leading[0];
        // Leading coefficient must be invertible: numeric part nonzero, other
        // symbols invertible wherever they occur.
        for (i, &e) in lead_m.iter().enumerate() {
            if i != sym && e != 0 && !self.symbols[i].invertible {
                return Err(bad("leading coefficient involves a non-invertible symbol"));
            }
        }
        let inv_c = lead_c
            .inv()
            .ok_or_else(|| bad("zero leading coefficient"))?;
        let mut inv_m: Monomial = lead_m.iter().map(|e| -e).collect();
        inv_m[sym] = 0;
        let scale = |m: &Monomial, c: &GaussianRational| -> (Monomial, GaussianRational) {
            let m2: Monomial = m.iter().zip(&inv_m).map(|(a, b)| a + b).collect();
            (m2, c * &inv_c)
        };
        let polynomial: Terms = shifted.iter().map(|(m, c)| scale(m, c)).collect();
        let replacement: Terms = polynomial
            .iter()
            .filter(|(m, _)| m[sym] != degree)
            .map(|(m, c)| (m.clone(), -c))
            .collect();
        if replacement.keys().any(|m| m[sym] >= degree) {
            return Err(bad("not reducible"));
        }
        // For an invertible symbol: p = sym^k - repl, with repl = r0 + sym*r1.
        // Then sym * (sym^(k-1) - r1) = r0, so sym^-1 = r0^-1 (sym^(k-1) - r1).
        let inverse = if self.symbols[sym].invertible {
            let r0: Vec<_> = replacement.iter().filter(|(m, _)| m[sym] == 0).collect();
            if r0.len() != 1 {
                return Err(bad(
                    "symbol declared invertible but constant term is not a unit",
                ));
            }
            let (r0_m, r0_c) = r0[0];
            for (i, &e) in r0_m.iter().enumerate() {
                if e != 0 && !self.symbols[i].invertible {
                    return Err(bad("constant term involves a non-invertible symbol"));
                }
            }
            let r0_inv = r0_c.inv().unwrap();
            let mut t = Terms::new();
            let mut top = vec![0; self.nvars()];
            top[sym] = degree - 1;
            t.insert(top, GaussianRational::one());
            for (m, c) in replacement.iter().filter(|(m, _)| m[sym] > 0) {
                let mut m = m.clone();
                m[sym] -= 1;
                let e = t.entry(m).or_insert_with(GaussianRational::zero);
                *e = &*e - c;
            }
            let out: Terms = t
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| {
                    let m2: Monomial = m.iter().zip(r0_m).map(|(a, b)| a - b).collect();
                    (m2, &c * &r0_inv)
                })
                .collect();
            Some(out)
        } else {
            None
        };
        Ok(Constraint {
            symbol: sym,
            degree,
            replacement,
            inverse,
            polynomial,
        })
    }

    /// Brings a term map to the unique reduced form.
    pub(crate) fn reduce(&self, terms: Terms) -> Terms {
        let mut current = terms;
        current.retain(|_, c| !c.is_zero());
        if self.constraints.is_empty() {
            return current;
        }
        loop {
            let mut changed = false;
            let mut next = Terms::new();
            for (m, c) in current {
                match self.reducible(&m) {
                    None => accumulate(&mut next, m, &c),
                    Some((sym, expansion, shift)) => {
                        changed = true;
                        let mut base = m.clone();
                        base[sym] += shift;
                        for (rm, rc) in expansion {
                            let nm: Monomial = base.iter().zip(rm).map(|(a, b)| a + b).collect();
                            accumulate(&mut next, nm, &(&c * rc));
                        }
                    }
                }
            }
            current = next;
            if !changed {
                return current;
            }
        }
    }

    fn reducible(&self, m: &Monomial) -> Option<(usize, &Terms, i32)> {
        for c in &self.constraints {
            let e = m[c.symbol];
            if e >= c.degree {
                return Some((c.symbol, &c.replacement, -c.degree));
            }
            if e < 0 {
                if let Some(inv) = &c.inverse {
                    return Some((c.symbol, inv, 1));
                }
            }
        }
        None
    }

    pub(crate) fn symbol_name(&self, i: usize) -> &str {
        &self.symbols[i].name
    }
}

pub(crate) fn accumulate(t: &mut Terms, m: Monomial, c: &GaussianRational) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c.clone());
        }
    }
}

pub(crate) fn valid_symbol_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn render_monomial(ring: &Ring, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            let name = ring.symbol_name(i);
            if e == 1 {
                name.to_string()
            } else {
                format!("{}^{}", name, e)
            }
        })
        .collect();
    parts.join("*")
}

/// Canonical text for a term map: monomials in descending order under the
/// symbol-name lexicographic exponent order.
pub(crate) fn render_terms(ring: &Ring, t: &Terms) -> String {
    if t.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in t.iter().rev().enumerate() {
        let mono = render_monomial(ring, m);
        let (sign, mag) = if c.renders_negative() {
            ("-", -c)
        } else {
            ("+", c.clone())
        };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", mag, mono));
        }
    }
    out
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.symbols.iter().map(|s| s.name.as_str()).collect();
        write!(f, "Q(i)[{}]", names.join(", "))?;
        for c in &self.constraints {
            write!(f, " / ({} = 0)", render_terms(self, &c.polynomial))?;
        }
        Ok(())
    }
}
