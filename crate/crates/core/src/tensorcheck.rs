//! Matrix-level consistency conditions: lifts to V⊗V⊗V, braid and Hecke
//! identities, and the constructions of (B, C, F) from an R-matrix.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError, StructureMatrix};
use crate::symring::{Coefficient, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("`{0}` must be a unit monomial")]
    NotUnit(String),
    #[error("precondition failed: {}", names(.0))]
    Precondition(Vec<IdentityCheck>),
    #[error("postcondition failed: {}", names(.0))]
    Postcondition(Vec<IdentityCheck>),
}

fn names(checks: &[IdentityCheck]) -> String {
    checks
        .iter()
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slots {
    S12,
    S23,
}

/// A linear operator on V^{⊗slots}, basis ordered lexicographically by the
/// 1-based index tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorOperator {
    n: usize,
    slot_count: u32,
    m: Matrix,
}

impl TensorOperator {
    pub fn identity(ring: &Arc<Ring>, n: usize, slot_count: u32) -> Self {
        TensorOperator {
            n,
            slot_count,
            m: Matrix::identity(ring, n.pow(slot_count)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot_count(&self) -> u32 {
        self.slot_count
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    fn flat(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.slot_count as usize, "index tuple length");
        idx.iter().fold(0, |acc, &i| acc * self.n + (i - 1))
    }

    /// Entry at row tuple `a`, column tuple `b` (1-based indices).
    pub fn entry(&self, a: &[usize], b: &[usize]) -> &Coefficient {
        self.m.get(self.flat(a), self.flat(b))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, MatrixError> {
        Ok(TensorOperator {
            n: self.n,
            slot_count: self.slot_count,
            m: self.m.try_mul(&o.m)?,
        })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, MatrixError> {
        Ok(TensorOperator {
            n: self.n,
            slot_count: self.slot_count,
            m: self.m.try_sub(&o.m)?,
        })
    }
}

/// `M ⊗ I` for slots 12, `I ⊗ M` for slots 23.
pub fn lift(m: &StructureMatrix, slots: Slots) -> TensorOperator {
    let id = Matrix::identity(m.ring(), m.dim());
    let big = match slots {
        Slots::S12 => m.matrix().kron(&id),
        Slots::S23 => id.kron(m.matrix()),
    };
    TensorOperator {
        n: m.dim(),
        slot_count: 3,
        m: big,
    }
}

/// Outcome of testing `lhs = rhs` entrywise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    /// Nonzero entries of `lhs - rhs` as `((row, col), value)`, 0-based.
    pub residual: Vec<((usize, usize), Coefficient)>,
}

impl IdentityCheck {
    fn from_difference(name: &str, diff: &Matrix) -> Self {
        IdentityCheck {
            name: name.to_string(),
            residual: diff.nonzero_entries(),
        }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_empty()
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residual.first() {
            None => write!(f, "{}: holds", self.name),
            Some(((r, c), v)) => write!(
                f,
                "{}: fails ({} nonzero entries, first at ({}, {}) = {})",
                self.name,
                self.residual.len(),
                r,
                c,
                v
            ),
        }
    }
}

fn same_ring(a: &StructureMatrix, b: &StructureMatrix) -> Result<(), TensorError> {
    a.same_dim(b)?;
    Coefficient::zero(a.ring()).check_same_ring(&Coefficient::zero(b.ring()))?;
    Ok(())
}

fn scalar_ring(m: &StructureMatrix, c: &Coefficient) -> Result<(), TensorError> {
    Coefficient::zero(m.ring()).check_same_ring(c)?;
    Ok(())
}

/// `(E - B)(E + C) = 0`.
pub fn check_linear_condition(
    b: &StructureMatrix,
    c: &StructureMatrix,
) -> Result<IdentityCheck, TensorError> {
    same_ring(b, c)?;
    let e = StructureMatrix::identity(b.ring(), b.dim());
    let prod = e.try_sub(b)?.try_mul(&e.try_add(c)?)?;
    Ok(IdentityCheck::from_difference(
        "(E - B)(E + C) = 0",
        prod.matrix(),
    ))
}

fn triple(
    name: &str,
    l: [(&StructureMatrix, Slots); 3],
    r: [(&StructureMatrix, Slots); 3],
) -> Result<IdentityCheck, TensorError> {
    let prod = |ops: [(&StructureMatrix, Slots); 3]| -> Result<TensorOperator, MatrixError> {
        lift(ops[0].0, ops[0].1)
            .try_mul(&lift(ops[1].0, ops[1].1))?
            .try_mul(&lift(ops[2].0, ops[2].1))
    };
    let diff = prod(l)?.try_sub(&prod(r)?)?;
    Ok(IdentityCheck::from_difference(name, diff.matrix()))
}

/// `B12 C23 C12 = C23 C12 B23`.
pub fn check_braid_compat(
    b: &StructureMatrix,
    c: &StructureMatrix,
) -> Result<IdentityCheck, TensorError> {
    same_ring(b, c)?;
    use Slots::*;
    triple(
        "B12 C23 C12 = C23 C12 B23",
        [(b, S12), (c, S23), (c, S12)],
        [(c, S23), (c, S12), (b, S23)],
    )
}

/// `B12 F23 F12 = F23 F12 B23`.
pub fn check_bff(b: &StructureMatrix, f: &StructureMatrix) -> Result<IdentityCheck, TensorError> {
    same_ring(b, f)?;
    use Slots::*;
    triple(
        "B12 F23 F12 = F23 F12 B23",
        [(b, S12), (f, S23), (f, S12)],
        [(f, S23), (f, S12), (b, S23)],
    )
}

/// `R12 R23 R12 = R23 R12 R23`.
pub fn check_braid(r: &StructureMatrix) -> IdentityCheck {
    use Slots::*;
    triple(
        "R12 R23 R12 = R23 R12 R23",
        [(r, S12), (r, S23), (r, S12)],
        [(r, S23), (r, S12), (r, S23)],
    )
    .expect("a matrix is compatible with itself")
}

/// `(R - μE)(R + λE) = 0`.
pub fn check_hecke(
    r: &StructureMatrix,
    mu: &Coefficient,
    lambda: &Coefficient,
) -> Result<IdentityCheck, TensorError> {
    scalar_ring(r, mu)?;
    scalar_ring(r, lambda)?;
    let e = StructureMatrix::identity(r.ring(), r.dim());
    let prod = r
        .try_sub(&e.scale(mu))?
        .try_mul(&r.try_add(&e.scale(lambda))?)?;
    Ok(IdentityCheck::from_difference(
        "(R - mu E)(R + lambda E) = 0",
        prod.matrix(),
    ))
}

/// Both forms of the `F` consistency condition.
#[derive(Clone, Debug)]
pub struct FConsistency {
    /// `E - (Q²+Q)C + ((Q²+Q)E - Q³C) Q F = 0`
    pub full: IdentityCheck,
    /// `(E + C)(E - QF) = 0`
    pub factored: IdentityCheck,
}

fn f_full_expr(
    c: &StructureMatrix,
    f: &StructureMatrix,
    q: &Coefficient,
) -> Result<StructureMatrix, TensorError> {
    let e = StructureMatrix::identity(c.ring(), c.dim());
    let q2q = &(q * q) + q;
    let q3 = &(q * q) * q;
    let inner = e.scale(&q2q).try_sub(&c.scale(&q3))?;
    Ok(e.try_sub(&c.scale(&q2q))?
        .try_add(&inner.try_mul(&f.scale(q))?)?)
}

fn f_factored_expr(
    c: &StructureMatrix,
    f: &StructureMatrix,
    q: &Coefficient,
) -> Result<StructureMatrix, TensorError> {
    let e = StructureMatrix::identity(c.ring(), c.dim());
    Ok(e.try_add(c)?.try_mul(&e.try_sub(&f.scale(q))?)?)
}

pub fn check_f_consistency(
    c: &StructureMatrix,
    f: &StructureMatrix,
    q: &Coefficient,
) -> Result<FConsistency, TensorError> {
    same_ring(c, f)?;
    scalar_ring(c, q)?;
    Ok(FConsistency {
        full: IdentityCheck::from_difference(
            "E - (Q^2 + Q)C + ((Q^2 + Q)E - Q^3 C)QF = 0",
            f_full_expr(c, f, q)?.matrix(),
        ),
        factored: IdentityCheck::from_difference(
            "(E + C)(E - QF) = 0",
            f_factored_expr(c, f, q)?.matrix(),
        ),
    })
}

/// Imposes `Q² + Q + 1 = 0` on the symbol `q_name` (unless the ring already
/// constrains it) and checks that the full `F` condition coincides with the
/// factored one there.
pub fn check_cubic_reduction(
    c: &StructureMatrix,
    f: &StructureMatrix,
    q_name: &str,
) -> Result<IdentityCheck, TensorError> {
    same_ring(c, f)?;
    let ring = c.ring();
    let idx = ring
        .symbol_index(q_name)
        .ok_or_else(|| RingError::UnknownSymbol(q_name.to_string()))?;
    let target = if ring.is_constrained(idx) {
        ring.clone()
    } else {
        let q = Coefficient::symbol(ring, q_name)?;
        let cubic = &(&(&q * &q) + &q) + &Coefficient::one(ring);
        ring.constrained(&[cubic])?
    };
    let (c, f) = (c.to_ring(&target)?, f.to_ring(&target)?);
    let q = Coefficient::symbol(&target, q_name)?;
    let diff = f_full_expr(&c, &f, &q)?.try_sub(&f_factored_expr(&c, &f, &q)?)?;
    Ok(IdentityCheck::from_difference(
        "full F condition = (E + C)(E - QF) under Q^2 + Q + 1 = 0",
        diff.matrix(),
    ))
}

/// `(B, C, F)` produced from a Hecke R-matrix, with the checks it passed.
#[derive(Clone, Debug)]
pub struct HeckeTriple {
    pub b: StructureMatrix,
    pub c: StructureMatrix,
    pub f: StructureMatrix,
    pub checks: Vec<IdentityCheck>,
    /// `(E + C)(E - QF) = 0`, checked only when `Q³ = 1` in the ring.
    pub factored: Option<IdentityCheck>,
}

/// `B = R/μ`, `C = R/λ`, `F = Q²R/μ`.
pub fn build_from_hecke(
    r: &StructureMatrix,
    mu: &Coefficient,
    lambda: &Coefficient,
    q: &Coefficient,
) -> Result<HeckeTriple, TensorError> {
    scalar_ring(r, mu)?;
    scalar_ring(r, lambda)?;
    scalar_ring(r, q)?;
    for (name, v) in [("mu", mu), ("lambda", lambda)] {
        if !v.is_unit() {
            return Err(TensorError::NotUnit(format!("{name} = {v}")));
        }
    }
    let pre: Vec<IdentityCheck> = [check_braid(r), check_hecke(r, mu, lambda)?]
        .into_iter()
        .filter(|c| !c.holds())
        .collect();
    if !pre.is_empty() {
        return Err(TensorError::Precondition(pre));
    }
    let inv_mu = mu.inverse()?;
    let b = r.scale(&inv_mu);
    let c = r.scale(&lambda.inverse()?);
    let f = r.scale(&(&(q * q) * &inv_mu));
    let checks = vec![
        check_linear_condition(&b, &c)?,
        check_braid_compat(&b, &c)?,
        check_bff(&b, &f)?,
    ];
    let q3 = &(q * q) * q;
    let factored = if q3.is_one() {
        Some(check_f_consistency(&c, &f, q)?.factored)
    } else {
        None
    };
    let failed: Vec<IdentityCheck> = checks
        .iter()
        .chain(factored.iter())
        .filter(|c| !c.holds())
        .cloned()
        .collect();
    if !failed.is_empty() {
        return Err(TensorError::Postcondition(failed));
    }
    Ok(HeckeTriple {
        b,
        c,
        f,
        checks,
        factored,
    })
}

/// `F = Q²B`, valid when `BC = CB` and `B12 F23 F12 = F23 F12 B23`.
pub fn build_f_from_b(
    b: &StructureMatrix,
    c: &StructureMatrix,
    q: &Coefficient,
) -> Result<StructureMatrix, TensorError> {
    same_ring(b, c)?;
    scalar_ring(b, q)?;
    let f = b.scale(&(q * q));
    let comm = b.try_mul(c)?.try_sub(&c.try_mul(b)?)?;
    let failed: Vec<IdentityCheck> = [
        IdentityCheck::from_difference("BC = CB", comm.matrix()),
        check_bff(b, &f)?,
    ]
    .into_iter()
    .filter(|c| !c.holds())
    .collect();
    if !failed.is_empty() {
        return Err(TensorError::Precondition(failed));
    }
    Ok(f)
}
