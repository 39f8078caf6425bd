//! Square roots and root finding for low-degree univariate factors.

use super::coefficient::Coefficient;
use super::ring::{accumulate, Terms};

/// Exact square root of a Laurent polynomial, when it is a perfect square.
///
/// Uses the leading-term recursion under the lexicographic exponent order,
/// which is compatible with multiplication of Laurent monomials.
pub fn polynomial_sqrt(d: &Coefficient) -> Option<Coefficient> {
    let ring = d.ring();
    if d.is_zero() {
        return Some(d.clone());
    }
    let (lead_m, lead_c) = d.terms().last()?;
    if lead_m.iter().any(|e| e % 2 != 0) {
        return None;
    }
    let mut t = Terms::new();
    accumulate(
        &mut t,
        lead_m.iter().map(|e| e / 2).collect(),
        &lead_c.sqrt()?,
    );
    let mut s = Coefficient::from_terms(ring, t);
    let limit = 2 * d.num_terms() + 4;
    for _ in 0..limit {
        let rem = d - &(&s * &s);
        if rem.is_zero() {
            return Some(s);
        }
        let (rm, rc) = rem.terms().last()?;
        let (sm, sc) = s.terms().last()?;
        let two_sc = sc + sc;
        let c = rc * &two_sc.inv()?;
        let m: Vec<i32> = rm.iter().zip(sm).map(|(a, b)| a - b).collect();
        if &m >= sm {
            return None;
        }
        let mut t = Terms::new();
        accumulate(&mut t, m, &c);
        s = &s + &Coefficient::from_terms(ring, t);
    }
    None
}

/// A factor `(P - root)` of a polynomial in an auxiliary variable P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub root: Coefficient,
}

/// Roots of `c0 + c1 P + c2 P^2` whose values are Laurent polynomials.
///
/// Returns `None` when the polynomial does not split with the leading
/// coefficient a unit. Repeated roots are listed once.
pub fn quadratic_roots(coeffs: &[Coefficient]) -> Option<Vec<Coefficient>> {
    let ring = coeffs.first()?.ring().clone();
    let zero = Coefficient::zero(&ring);
    let c = |i: usize| coeffs.get(i).cloned().unwrap_or_else(|| zero.clone());
    let (c0, c1, c2) = (c(0), c(1), c(2));
    if coeffs.len() > 3 && coeffs[3..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    if !c2.is_zero() {
        let inv2a = (&c2 + &c2).inverse().ok()?;
        let four = Coefficient::from_int(&ring, 4);
        let disc = &(&c1 * &c1) - &(&(&four * &c2) * &c0);
        let sq = polynomial_sqrt(&disc)?;
        let r1 = &(&(-&c1) + &sq) * &inv2a;
        let r2 = &(&(-&c1) - &sq) * &inv2a;
        if r1 == r2 {
            Some(vec![r1])
        } else {
            Some(vec![r1, r2])
        }
    } else if !c1.is_zero() {
        Some(vec![&(-&c0) * &c1.inverse().ok()?])
    } else if c0.is_zero() {
        None
    } else {
        Some(Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symring::Ring;

    #[test]
    fn sqrt_of_square() {
        let ring = Ring::laurent(&["r", "q"]);
        let r = Coefficient::sym(&ring, "r", 1);
        let q = Coefficient::sym(&ring, "q", -1);
        let base = &(&r + &Coefficient::one(&ring)) - &q;
        let sq = polynomial_sqrt(&(&base * &base)).unwrap();
        assert!(sq == base || sq == -&base);
        assert!(polynomial_sqrt(&(&r + &Coefficient::one(&ring))).is_none());
    }

    #[test]
    fn splits_the_branch_scalar() {
        // 1 - P (r - 1) - P^2 r = (1 + P)(1 - P r)
        let ring = Ring::laurent(&["r"]);
        let one = Coefficient::one(&ring);
        let r = Coefficient::sym(&ring, "r", 1);
        let roots = quadratic_roots(&[one.clone(), -(&r - &one), -r.clone()]).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&-one.clone()));
        assert!(roots.contains(&Coefficient::sym(&ring, "r", -1)));
    }
}
