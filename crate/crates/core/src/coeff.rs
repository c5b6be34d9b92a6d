//! Exact coefficients: Gaussian-rational Laurent polynomials in the formal
//! unit phase `mu`, with `mu^* = mu^-1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn zero() -> Self {
        GaussRat::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GaussRat::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
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
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        // most coefficients are purely real or purely imaginary; skipping
        // the vanishing cross terms avoids their rational normalizations
        let prod = |a: &BigRational, b: &BigRational| {
            if a.is_zero() || b.is_zero() {
                BigRational::zero()
            } else {
                a * b
            }
        };
        let (rr, ii) = (prod(&self.re, &o.re), prod(&self.im, &o.im));
        let (ri, ir) = (prod(&self.re, &o.im), prod(&self.im, &o.re));
        let re = if ii.is_zero() { rr } else { rr - ii };
        let im = if ir.is_zero() { ri } else { ri + ir };
        GaussRat::new(re, im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", fmt_rat(&self.im))
                }
            }
            (false, false) => {
                let im = if self.im.is_one() {
                    "+i".to_string()
                } else if (-self.im.clone()).is_one() {
                    "-i".to_string()
                } else if self.im.is_negative() {
                    format!("{}*i", fmt_rat(&self.im))
                } else {
                    format!("+{}*i", fmt_rat(&self.im))
                };
                write!(f, "({}{})", fmt_rat(&self.re), im)
            }
        }
    }
}

/// The deformation parameter; `mu = exp(i*pi*theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Option<Self> {
        value.is_finite().then_some(Theta(value))
    }

    pub fn classical() -> Self {
        Theta(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `mu` evaluated at this parameter.
    pub fn mu(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI * self.0)
    }
}

/// `sum_k c_k mu^k` in canonical sparse form: no zero value is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    terms: BTreeMap<i32, GaussRat>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Coefficient::monomial(GaussRat::one(), 0)
    }

    /// `value * mu^exp`.
    pub fn monomial(value: GaussRat, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(exp, value);
        }
        Coefficient { terms }
    }

    pub fn mu_pow(exp: i32) -> Self {
        Coefficient::monomial(GaussRat::one(), exp)
    }

    /// `lambda = mu^2`.
    pub fn lambda() -> Self {
        Coefficient::mu_pow(2)
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::monomial(GaussRat::from_ints(n, 0), 0)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coefficient::monomial(GaussRat::ratio(num, den), 0)
    }

    pub fn i() -> Self {
        Coefficient::monomial(GaussRat::i(), 0)
    }

    pub fn constant(value: GaussRat) -> Self {
        Coefficient::monomial(value, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(GaussRat::is_one)
    }

    /// Iterate `(exponent, value)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when no positive or negative power of `mu` appears.
    pub fn is_mu_free(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The value when `mu`-free.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The rational value when `mu`-free and real.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_constant().filter(|c| c.im.is_zero()).map(|c| c.re)
    }

    /// Units of the Laurent ring are single terms `c*mu^k` with `c != 0`.
    pub fn inverse_unit(&self) -> Option<Coefficient> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, v) = self.terms.iter().next()?;
        Some(Coefficient::monomial(v.inv()?, -k))
    }

    /// Conjugates every value and negates every exponent.
    pub fn involution(&self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(k, v)| (-k, v.conj())).collect(),
        }
    }

    pub fn scale_mu(&self, exp: i32) -> Coefficient {
        if exp == 0 {
            return self.clone();
        }
        Coefficient {
            terms: self.terms.iter().map(|(k, v)| (k + exp, v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn evaluate(&self, theta: Theta) -> Complex64 {
        let mu = theta.mu();
        self.terms
            .iter()
            .map(|(k, v)| v.to_complex() * mu.powi(*k))
            .sum()
    }

    /// Exact value at `theta = 0` (`mu = 1`).
    pub fn classical_value(&self) -> GaussRat {
        self.terms.values().fold(GaussRat::zero(), |acc, v| &acc + v)
    }

    fn add_term(&mut self, exp: i32, value: &GaussRat) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + value;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl From<GaussRat> for Coefficient {
    fn from(v: GaussRat) -> Self {
        Coefficient::constant(v)
    }
}

impl From<BigRational> for Coefficient {
    fn from(v: BigRational) -> Self {
        Coefficient::constant(GaussRat::real(v))
    }
}

impl From<BigInt> for Coefficient {
    fn from(v: BigInt) -> Self {
        Coefficient::constant(GaussRat::real(BigRational::from_integer(v)))
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, o: &Coefficient) {
        for (k, v) in &o.terms {
            self.add_term(*k, v);
        }
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, o: &Coefficient) {
        for (k, v) in &o.terms {
            self.add_term(*k, &-v);
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        let mut r = Coefficient::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                r.add_term(a + b, &(x * y));
            }
        }
        r
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
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
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl fmt::Display for Coefficient {
    /// Canonical rendering, e.g. `1/2 + (1-i)*mu^-1 + mu^2`; zero is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, v)) in self.terms.iter().enumerate() {
            let (neg, mag) = match (v.re.is_zero(), v.im.is_zero()) {
                (_, true) if v.re.is_negative() => (true, -v),
                (true, false) if v.im.is_negative() => (true, -v),
                _ => (false, v.clone()),
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mu = match k {
                0 => String::new(),
                1 => "mu".to_string(),
                k => format!("mu^{k}"),
            };
            if mu.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mu}")?;
            } else {
                write!(f, "{mag}*{mu}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu() -> Coefficient {
        Coefficient::mu_pow(1)
    }

    #[test]
    fn inverse_phases_cancel() {
        assert!((&mu() * &Coefficient::mu_pow(-1)).is_one());
        assert_eq!(&mu() * &mu(), Coefficient::lambda());
    }

    #[test]
    fn imaginary_parts_cancel() {
        let a = &Coefficient::one() + &(&Coefficient::i() * &mu());
        let b = &Coefficient::one() - &(&Coefficient::i() * &mu());
        assert_eq!(&a + &b, Coefficient::from_int(2));
    }

    #[test]
    fn involution_examples() {
        assert_eq!(mu().involution(), Coefficient::mu_pow(-1));
        let a = Coefficient::monomial(GaussRat::i(), 2);
        assert_eq!(a.involution(), Coefficient::monomial(GaussRat::from_ints(0, -1), -2));
    }

    #[test]
    fn evaluation_examples() {
        let half = Theta::new(0.5).unwrap();
        assert!((mu().evaluate(Theta::classical()) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((mu().evaluate(half) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((Coefficient::lambda().evaluate(half) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_is_empty() {
        let a = &mu() - &mu();
        assert!(a.is_zero());
        assert_eq!(a.num_terms(), 0);
        assert_eq!(a, Coefficient::zero());
    }

    #[test]
    fn units() {
        let u = Coefficient::monomial(GaussRat::from_ints(3, 4), -2);
        assert!((&u * &u.inverse_unit().unwrap()).is_one());
        assert!((&Coefficient::one() + &mu()).inverse_unit().is_none());
    }

    #[test]
    fn rendering() {
        let c = &(&Coefficient::ratio(1, 2) + &Coefficient::monomial(GaussRat::from_ints(1, -1), -1))
            - &Coefficient::lambda();
        assert_eq!(c.to_string(), "(1-i)*mu^-1 + 1/2 - mu^2");
        assert_eq!(Coefficient::zero().to_string(), "0");
        assert_eq!(Coefficient::monomial(GaussRat::from_ints(0, -3), 1).to_string(), "-3*i*mu");
    }
}
