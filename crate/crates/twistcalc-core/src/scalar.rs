//! Exact coefficient arithmetic.
//!
//! Coefficients live in the ring `Q(i)[nu, b, c][q, q^-1]`: Gaussian-rational
//! coefficients, a formal deformation parameter `nu`, two nonnegative symbolic
//! family parameters `b` and `c`, and a Laurent unit `q`.  Semantically `q`
//! stands for the phase `e^{i*nu}`, but the two sectors are never mixed
//! symbolically: a computation produces either polynomial `nu`-terms or
//! `q`-monomials, and equality is decided on the exact representation.
//!
//! Conjugation fixes the rationals and the parameters, maps `i -> -i`, leaves
//! `nu` fixed (it is a real parameter) and inverts `q` (a phase).  The
//! classical limit sets `nu = 0` and `q = 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Build a rational from a signed numerator and denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Element of `Q(i)`, kept in reduced canonical form by `BigRational`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(rat(num, den), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Complex conjugate (`i -> -i`).
    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse.  Panics on zero (callers check pivots first).
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "inverse of zero Gaussian rational");
        Self::new(&self.re / &norm, -(&self.im / &norm))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form: `0`, `3/2`, `-1`, `i`, `-2/3*i`, `1+i`, `1-2*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag(im: &Rational) -> String {
            if im.is_one() {
                "i".into()
            } else if (-im).is_one() {
                "-i".into()
            } else {
                format!("{}*i", im)
            }
        }
        if self.is_zero() {
            write!(f, "0")
        } else if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}", imag(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, imag(&self.im))
        } else {
            write!(f, "{}+{}", self.re, imag(&self.im))
        }
    }
}

/// Exponent multi-index of one scalar monomial: `nu^nu * q^q * b^b * c^c`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct ScalarKey {
    pub nu: u32,
    pub q: i64,
    pub b: u32,
    pub c: u32,
}

impl ScalarKey {
    pub const ONE: ScalarKey = ScalarKey { nu: 0, q: 0, b: 0, c: 0 };

    fn mul(self, rhs: ScalarKey) -> ScalarKey {
        ScalarKey {
            nu: self.nu + rhs.nu,
            q: self.q + rhs.q,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
        }
    }
}

/// Sparse element of `Q(i)[nu, b, c][q, q^-1]`.  No zero coefficients are
/// stored; the zero element is the empty map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<ScalarKey, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_gauss(GaussianRational::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussianRational::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(GaussianRational::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_gauss(GaussianRational::from_ratio(num, den))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::from_gauss(GaussianRational::from_rational(r))
    }

    pub fn from_gauss(g: GaussianRational) -> Self {
        Scalar::monomial(ScalarKey::ONE, g)
    }

    /// The deformation parameter `nu`.
    pub fn nu() -> Self {
        Scalar::monomial(ScalarKey { nu: 1, ..ScalarKey::ONE }, GaussianRational::one())
    }

    /// The deformation scale `i*nu`.
    pub fn i_nu() -> Self {
        Scalar::monomial(ScalarKey { nu: 1, ..ScalarKey::ONE }, GaussianRational::i())
    }

    /// A power of the phase unit: `q^k` (k may be negative).
    pub fn q_pow(k: i64) -> Self {
        Scalar::monomial(ScalarKey { q: k, ..ScalarKey::ONE }, GaussianRational::one())
    }

    /// The symbolic parameter `b`.
    pub fn param_b() -> Self {
        Scalar::monomial(ScalarKey { b: 1, ..ScalarKey::ONE }, GaussianRational::one())
    }

    /// The symbolic parameter `c`.
    pub fn param_c() -> Self {
        Scalar::monomial(ScalarKey { c: 1, ..ScalarKey::ONE }, GaussianRational::one())
    }

    pub fn monomial(key: ScalarKey, coeff: GaussianRational) -> Self {
        let mut s = Scalar::zero();
        if !coeff.is_zero() {
            s.terms.insert(key, coeff);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&ScalarKey::ONE).map(GaussianRational::is_one) == Some(true)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ScalarKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The unique term of a one-term scalar, if it is one.
    pub fn single_term(&self) -> Option<(&ScalarKey, &GaussianRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn accumulate(&mut self, key: ScalarKey, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, g: &GaussianRational) -> Self {
        let mut out = Scalar::zero();
        for (k, v) in &self.terms {
            out.accumulate(*k, v * g);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Conjugation: `i -> -i`, `q -> q^-1`; `nu`, `b`, `c` are fixed (real).
    pub fn conj(&self) -> Self {
        let mut out = Scalar::zero();
        for (k, v) in &self.terms {
            out.accumulate(ScalarKey { q: -k.q, ..*k }, v.conj());
        }
        out
    }

    /// Classical limit as a scalar: keep `nu = 0` terms, collapse `q -> 1`.
    /// Symbolic parameters survive.
    pub fn classical_part(&self) -> Self {
        let mut out = Scalar::zero();
        for (k, v) in &self.terms {
            if k.nu == 0 {
                out.accumulate(ScalarKey { q: 0, ..*k }, v.clone());
            }
        }
        out
    }

    /// Classical limit as a number.  Requires the scalar to be free of the
    /// symbolic parameters `b` and `c` (panics otherwise; bind them first).
    pub fn eval_classical(&self) -> GaussianRational {
        let mut out = GaussianRational::zero();
        for (k, v) in &self.terms {
            if k.nu == 0 {
                assert!(
                    k.b == 0 && k.c == 0,
                    "eval_classical on a scalar with unbound parameters: {self}"
                );
                out = &out + v;
            }
        }
        out
    }

    /// Substitute rational values for the symbolic parameters (`None` keeps a
    /// parameter symbolic).
    pub fn bind_params(&self, b: Option<&Rational>, c: Option<&Rational>) -> Self {
        let mut out = Scalar::zero();
        for (k, v) in &self.terms {
            let mut coeff = v.clone();
            let mut key = *k;
            if let Some(bv) = b {
                for _ in 0..k.b {
                    coeff = GaussianRational::new(&coeff.re * bv, &coeff.im * bv);
                }
                key.b = 0;
            }
            if let Some(cv) = c {
                for _ in 0..k.c {
                    coeff = GaussianRational::new(&coeff.re * cv, &coeff.im * cv);
                }
                key.c = 0;
            }
            out.accumulate(key, coeff);
        }
        out
    }

    /// Highest `nu`-exponent present (0 for the zero scalar).
    pub fn nu_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.nu).max().unwrap_or(0)
    }

    /// True if any term carries a `q`-exponent or a `nu`-exponent.
    pub fn is_deformed(&self) -> bool {
        self.terms.keys().any(|k| k.nu != 0 || k.q != 0)
    }

    /// True if any term carries a symbolic parameter exponent.
    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|k| k.b != 0 || k.c != 0)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.accumulate(*k, v.clone());
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.accumulate(*k, -v);
        }
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.accumulate(ka.mul(*kb), va * vb);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = Scalar::zero();
        for (k, v) in &self.terms {
            out.accumulate(*k, -v);
        }
        out
    }
}

impl fmt::Display for Scalar {
    /// Canonical form: terms in exponent order, e.g. `1/2 - i*nu*b^2 + q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (key, coeff)) in self.terms.iter().enumerate() {
            let (sign, body) = format_term(key, coeff);
            if idx == 0 {
                if sign < 0 {
                    write!(f, "-{}", body)?;
                } else {
                    write!(f, "{}", body)?;
                }
            } else if sign < 0 {
                write!(f, " - {}", body)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

/// Format one scalar term as `(sign, body)` where `body` has no leading sign.
/// Mixed-phase coefficients render parenthesized with sign +1.
pub fn format_term(key: &ScalarKey, coeff: &GaussianRational) -> (i32, String) {
    let mut symbols = Vec::new();
    if key.nu > 0 {
        symbols.push(pow_str("nu", key.nu as i64));
    }
    if key.q != 0 {
        symbols.push(pow_str("q", key.q));
    }
    if key.b > 0 {
        symbols.push(pow_str("b", key.b as i64));
    }
    if key.c > 0 {
        symbols.push(pow_str("c", key.c as i64));
    }
    let syms = symbols.join("*");

    // Pure real or pure imaginary coefficients expose their sign; mixed ones
    // stay parenthesized.
    let (sign, coeff_str): (i32, Option<String>) = if coeff.im.is_zero() {
        let neg = coeff.re.is_negative();
        let mag = if neg { -coeff.re.clone() } else { coeff.re.clone() };
        let s = if mag.is_one() && !syms.is_empty() { None } else { Some(format!("{}", mag)) };
        (if neg { -1 } else { 1 }, s)
    } else if coeff.re.is_zero() {
        let neg = coeff.im.is_negative();
        let mag = if neg { -coeff.im.clone() } else { coeff.im.clone() };
        let s = if mag.is_one() { Some("i".into()) } else { Some(format!("{}*i", mag)) };
        (if neg { -1 } else { 1 }, s)
    } else {
        (1, Some(format!("({})", coeff)))
    };

    let body = match (coeff_str, syms.is_empty()) {
        (Some(c), true) => c,
        (Some(c), false) => format!("{}*{}", c, syms),
        (None, true) => "1".into(),
        (None, false) => syms,
    };
    (sign, body)
}

fn pow_str(name: &str, exp: i64) -> String {
    if exp == 1 {
        name.into()
    } else {
        format!("{}^{}", name, exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_ops() {
        let z = &GaussianRational::from_int(3) + &GaussianRational::i();
        let w = z.inv();
        assert!((&z * &w).is_one());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn scalar_cancellation_keeps_map_sparse() {
        let s = &Scalar::i_nu() - &Scalar::i_nu();
        assert!(s.is_zero());
        assert_eq!(s.num_terms(), 0);
    }

    #[test]
    fn conj_inverts_q_and_i() {
        let s = &Scalar::q_pow(2) * &Scalar::i();
        let c = s.conj();
        assert_eq!(c, &Scalar::q_pow(-2) * &(-&Scalar::i()));
        assert_eq!(c.conj(), s);
    }

    #[test]
    fn classical_limit_drops_nu_and_collapses_q() {
        // 1 + 2 q^3 + i nu  ->  3
        let s = &(&Scalar::one() + &(&Scalar::from_int(2) * &Scalar::q_pow(3))) + &Scalar::i_nu();
        assert_eq!(s.eval_classical(), GaussianRational::from_int(3));
    }

    #[test]
    fn bind_params_substitutes() {
        // b^2 c at b=2, c=3 -> 12
        let s = &Scalar::param_b().pow(2) * &Scalar::param_c();
        let bound = s.bind_params(Some(&rat(2, 1)), Some(&rat(3, 1)));
        assert_eq!(bound, Scalar::from_int(12));
        // keeping c symbolic
        let half = s.bind_params(Some(&rat(2, 1)), None);
        assert_eq!(half, &Scalar::from_int(4) * &Scalar::param_c());
    }

    #[test]
    fn display_canonical() {
        // Terms appear in exponent-key order: q^-1 sorts before the constant.
        let s = &(&Scalar::from_ratio(1, 2) - &(&Scalar::i_nu() * &Scalar::param_b().pow(2)))
            + &Scalar::q_pow(-1);
        assert_eq!(format!("{}", s), "q^-1 + 1/2 - i*nu*b^2");
    }
}
