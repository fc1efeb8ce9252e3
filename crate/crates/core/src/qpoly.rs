//! Exact arithmetic in the coefficient ring.
//!
//! [`QPoly`] is a Laurent polynomial in `q` with arbitrary-precision integer
//! coefficients, stored densely from its lowest exponent. [`QRat`] is a formal
//! quotient of two such polynomials; it is never reduced, and equality is
//! decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Laurent polynomial in `q` over the integers.
///
/// `coeffs[k]` is the coefficient of `q^(min_exp + k)`. The sequence is trimmed
/// so that its first and last entries are nonzero; the zero polynomial is the
/// empty sequence with `min_exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly {
            min_exp: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        Self::from_coeffs(e, vec![c.into()])
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// `1 - q^e`. For `e == 0` this is the zero polynomial.
    pub fn one_minus_q_pow(e: i64) -> Self {
        Self::one() - Self::q_pow(e)
    }

    /// Builds a polynomial from a dense coefficient run starting at `q^min_exp`,
    /// trimming zeros on both ends.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = QPoly { min_exp, coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64s(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(min_exp, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = 0;
            }
            Some(first) => {
                let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                self.coeffs.truncate(last + 1);
                if first > 0 {
                    self.coeffs.drain(..first);
                    self.min_exp += first as i64;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent carrying a nonzero coefficient; `None` for zero.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_exp)
    }

    /// Highest exponent carrying a nonzero coefficient; `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_exp + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        let k = e - self.min_exp;
        if k < 0 || k >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.min_exp + k as i64, c))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        QPoly {
            min_exp: self.min_exp + e,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Value at `q = 1`, i.e. the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact division. Fails if `divisor` is zero or leaves a nonzero remainder.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly, AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Err(AlgebraError::InexactDivision);
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(AlgebraError::InexactDivision);
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::InexactDivision);
        }
        Ok(QPoly::from_coeffs(self.min_exp - divisor.min_exp, quot))
    }

    /// Raises to a nonnegative power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Default for QPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for QPoly {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (src, off) in [(self, self.min_exp - lo), (rhs, rhs.min_exp - lo)] {
            for (k, c) in src.coeffs.iter().enumerate() {
                out[off as usize + k] += c;
            }
        }
        QPoly::from_coeffs(lo, out)
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(self.min_exp + rhs.min_exp, out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, QPoly);
forward_owned!(Sub, sub, QPoly);
forward_owned!(Mul, mul, QPoly);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

/// Canonical rendering: ascending exponents, `c*q^e`, `c*q` for `e = 1`,
/// bare `c` for `e = 0`, joined by ` + ` and ` − ` (U+2212).
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("−")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" − ")?,
            }
            match e {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*q")?,
                _ => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// `(q)_m = (1 - q)(1 - q^2)...(1 - q^m)`.
pub fn q_pochhammer(m: u32) -> QPoly {
    (1..=m as i64).fold(QPoly::one(), |acc, k| &acc * &QPoly::one_minus_q_pow(k))
}

/// `(q)_{a_0 + ... + a_n} / ((q)_{a_0} ... (q)_{a_n})` as an unreduced quotient.
pub fn q_multinomial(a: &[u32]) -> QRat {
    let total: u32 = a.iter().sum();
    let den = a
        .iter()
        .fold(QPoly::one(), |acc, &ai| &acc * &q_pochhammer(ai));
    QRat::new(q_pochhammer(total), den).expect("pochhammer products are nonzero")
}

/// `(a_0 + ... + a_n)! / (a_0! ... a_n!)`.
pub fn multinomial(a: &[u32]) -> BigInt {
    // product of binomials C(a_0+..+a_k, a_k) keeps intermediates small
    let mut acc = BigInt::one();
    let mut running: u64 = 0;
    for &ai in a {
        for k in 1..=ai as u64 {
            running += 1;
            acc = acc * BigInt::from(running) / BigInt::from(k);
        }
    }
    acc
}

/// Formal quotient `num / den` of two Laurent polynomials in `q`.
#[derive(Clone, Debug)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(QRat { num, den })
    }

    pub fn zero() -> Self {
        QRat::from(QPoly::zero())
    }

    pub fn one() -> Self {
        QRat::from(QPoly::one())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// The polynomial this quotient equals, if the denominator divides the numerator.
    pub fn to_poly(&self) -> Result<QPoly, AlgebraError> {
        self.num.div_exact(&self.den)
    }

    pub fn scale(&self, p: &QPoly) -> QRat {
        QRat {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    /// Canonical text: the polynomial form when the quotient is exact, else
    /// `(num)/(den)`.
    pub fn render(&self) -> String {
        match self.to_poly() {
            Ok(p) => p.to_string(),
            Err(_) => format!("({})/({})", self.num, self.den),
        }
    }
}

impl From<QPoly> for QRat {
    fn from(p: QPoly) -> Self {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }
}

impl PartialEq for QRat {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for QRat {}

impl<'a> Add<&'a QRat> for &'a QRat {
    type Output = QRat;

    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        QRat {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl<'a> Mul<&'a QRat> for &'a QRat {
    type Output = QRat;

    fn mul(self, rhs: &QRat) -> QRat {
        QRat {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &QRat {
    type Output = QRat;

    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(Add, add, QRat);
forward_owned!(Mul, mul, QRat);

pub fn qrat_eq(x: &QRat, y: &QRat) -> bool {
    x == y
}
