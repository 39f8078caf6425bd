//! Exact complex numbers with rational real and imaginary parts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the canonical rendering starts with a minus sign.
    pub fn renders_negative(&self) -> bool {
        (self.im.is_zero() && self.re.is_negative()) || (self.re.is_zero() && self.im.is_negative())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// Square root inside Q(i), when one exists. The returned root has a
    /// positive real part, or a non-negative imaginary part when purely imaginary.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x2 = (&modulus + &self.re) / &two;
        let x = rational_sqrt(&x2)?;
        if x.is_zero() {
            let y = rational_sqrt(&(-self.re.clone()))?;
            return Some(Self {
                re: BigRational::zero(),
                im: y,
            });
        }
        let y = &self.im / (&two * &x);
        Some(Self { re: x, im: y })
    }
}

/// Exact square root of a non-negative rational.
pub fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        &self * &o
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Renders in the expression grammar: `3/2`, `-I`, `2*I`, `(1 - 1/2*I)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |im: &BigRational| -> String {
            if im.abs().is_one() {
                "I".to_string()
            } else {
                format!("{}*I", fmt_rational(&im.abs()))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{}{}", sign, imag(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "({} {} {})",
                    fmt_rational(&self.re),
                    sign,
                    imag(&self.im)
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussianRational::new(
            BigRational::new(3.into(), 4.into()),
            BigRational::new((-2).into(), 5.into()),
        );
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn square_roots() {
        let four = GaussianRational::from_ratio(9, 4);
        assert_eq!(four.sqrt(), Some(GaussianRational::from_ratio(3, 2)));
        assert_eq!(
            GaussianRational::from_int(-1).sqrt(),
            Some(GaussianRational::i())
        );
        // (1 + i)^2 = 2i
        let two_i = GaussianRational::new(BigRational::zero(), BigRational::from_integer(2.into()));
        let r = two_i.sqrt().unwrap();
        assert_eq!(&r * &r, two_i);
        assert!(GaussianRational::from_int(2).sqrt().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!((-GaussianRational::i()).to_string(), "-I");
        let z = GaussianRational::new(BigRational::one(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(z.to_string(), "(1 - 1/2*I)");
    }
}
