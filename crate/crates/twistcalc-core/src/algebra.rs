//! Normal-ordered differential calculus on `R^n`.
//!
//! The algebra is generated by coordinates `x^i`, one-form differentials
//! `xi^i = dx^i` and derivations `d_i`, subject to the relations: coordinates
//! commute, differentials anticommute, derivations commute, differentials
//! commute with coordinates and derivations, and `d_i x^j = delta_i^j + x^j d_i`.
//! Every element is stored in normal order — differentials first, then
//! coordinates, then derivations, each block with ascending indices — as a
//! sparse map from basis words to scalars.

use crate::error::{CoreError, Result};
use crate::scalar::{GaussianRational, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A normal-ordered basis word `xi^P x^Q d^R`.
///
/// `p` is a bitmask over form indices (bit `i` set when `xi^{i+1}` is a
/// factor); `q` and `r` hold coordinate and derivation exponents.  The vector
/// lengths equal the ambient dimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct BasisWord {
    pub p: u32,
    pub q: Vec<u32>,
    pub r: Vec<u32>,
}

impl BasisWord {
    pub fn unit(n: usize) -> Self {
        BasisWord { p: 0, q: vec![0; n], r: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn form_degree(&self) -> u32 {
        self.p.count_ones()
    }

    pub fn coord_degree(&self) -> u32 {
        self.q.iter().sum()
    }

    pub fn deriv_degree(&self) -> u32 {
        self.r.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.form_degree() + self.coord_degree() + self.deriv_degree()
    }

    /// The word as a sequence of generator codes in normal order:
    /// `xi_i -> i`, `x_i -> n+i`, `d_i -> 2n+i` (0-based `i`).  Used for the
    /// canonical term ordering of the renderer.
    pub fn symbol_sequence(&self) -> Vec<u32> {
        let n = self.dim() as u32;
        let mut seq = Vec::new();
        for i in 0..n {
            if self.p & (1 << i) != 0 {
                seq.push(i);
            }
        }
        for (i, &e) in self.q.iter().enumerate() {
            for _ in 0..e {
                seq.push(n + i as u32);
            }
        }
        for (i, &e) in self.r.iter().enumerate() {
            for _ in 0..e {
                seq.push(2 * n + i as u32);
            }
        }
        seq
    }
}

/// Tri-degree of an element: maximal form, coordinate and derivation degrees
/// over its words.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Degrees {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

/// Sparse element of the calculus; invariant: no zero scalars stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    dim: usize,
    terms: BTreeMap<BasisWord, Scalar>,
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for j in 0..k {
        out = out * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { dim: n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_word(BasisWord::unit(n), Scalar::one())
    }

    pub fn scalar(n: usize, s: Scalar) -> Self {
        Self::from_word(BasisWord::unit(n), s)
    }

    /// Coordinate generator `x^{i+1}` (0-based `i`).
    pub fn x(n: usize, i: usize) -> Self {
        let mut w = BasisWord::unit(n);
        w.q[i] = 1;
        Self::from_word(w, Scalar::one())
    }

    /// Differential generator `xi^{i+1}` (0-based `i`).
    pub fn xi(n: usize, i: usize) -> Self {
        let mut w = BasisWord::unit(n);
        w.p = 1 << i;
        Self::from_word(w, Scalar::one())
    }

    /// Derivation generator `d_{i+1}` (0-based `i`).
    pub fn del(n: usize, i: usize) -> Self {
        let mut w = BasisWord::unit(n);
        w.r[i] = 1;
        Self::from_word(w, Scalar::one())
    }

    pub fn from_word(word: BasisWord, coeff: Scalar) -> Self {
        let mut e = AlgebraElement::zero(word.dim());
        e.accumulate(word, coeff);
        e
    }

    /// Monomial constructor from explicit exponents (`p_indices` 0-based).
    pub fn monomial_word(n: usize, p_indices: &[usize], q: &[u32], r: &[u32]) -> Self {
        let mut w = BasisWord::unit(n);
        for &i in p_indices {
            w.p |= 1 << i;
        }
        w.q.copy_from_slice(q);
        w.r.copy_from_slice(r);
        Self::from_word(w, Scalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &BasisWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    fn accumulate(&mut self, word: BasisWord, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, s) in &rhs.terms {
            out.accumulate(w.clone(), s.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, s) in &rhs.terms {
            out.accumulate(w.clone(), -s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, s) in &self.terms {
            out.accumulate(w.clone(), -s);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v * s);
        }
        out
    }

    pub fn scale_gauss(&self, g: &GaussianRational) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v.scale(g));
        }
        out
    }

    /// Conjugate every coefficient (`i -> -i`, `q -> q^-1`); words untouched.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v.conj());
        }
        out
    }

    /// Classical limit: `nu = 0`, `q = 1` in every coefficient.
    pub fn classical_part(&self) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v.classical_part());
        }
        out
    }

    /// Substitute rational values for symbolic parameters in all coefficients.
    pub fn bind_params(&self, b: Option<&BigRational>, c: Option<&BigRational>) -> Self {
        let mut out = AlgebraElement::zero(self.dim);
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v.bind_params(b, c));
        }
        out
    }

    /// Maximal tri-degree over all words.
    pub fn degrees(&self) -> Degrees {
        let mut d = Degrees { p: 0, q: 0, r: 0 };
        for w in self.terms.keys() {
            d.p = d.p.max(w.form_degree());
            d.q = d.q.max(w.coord_degree());
            d.r = d.r.max(w.deriv_degree());
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(BasisWord::total_degree).max().unwrap_or(0)
    }

    /// True when the element is a pure coordinate polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|w| w.p == 0 && w.deriv_degree() == 0)
    }

    /// Product of two basis words in normal order.
    ///
    /// Differentials merge with an anticommutation sign (zero on repetition);
    /// the derivation block of the left word reorders past the coordinate
    /// block of the right word by the closed-form Leibniz expansion
    /// `d^r x^q = sum_k C(r,k) C(q,k) k! x^(q-k) d^(r-k)` per index.
    fn word_mul(w1: &BasisWord, w2: &BasisWord) -> AlgebraElement {
        let n = w1.dim();
        let mut out = AlgebraElement::zero(n);
        if w1.p & w2.p != 0 {
            return out; // repeated differential
        }
        // Anticommutation sign: move each differential of w2 past the later
        // differentials of w1.
        let mut inversions = 0u32;
        for i in 0..n as u32 {
            if w2.p & (1 << i) != 0 {
                inversions += (w1.p >> (i + 1)).count_ones();
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };

        // Per-index Leibniz expansion of d^{r1} x^{q2}; indices are
        // independent, so fold the cartesian product of the k-choices.
        let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::from(sign))];
        for i in 0..n {
            let kmax = w1.r[i].min(w2.q[i]);
            let mut next = Vec::with_capacity(partial.len() * (kmax as usize + 1));
            for (ks, coeff) in &partial {
                for k in 0..=kmax {
                    let factor = binom(w1.r[i], k) * binom(w2.q[i], k) * factorial(k);
                    let mut ks2 = ks.clone();
                    ks2.push(k);
                    next.push((ks2, coeff * factor));
                }
            }
            partial = next;
        }
        for (ks, coeff) in partial {
            let mut w = BasisWord::unit(n);
            w.p = w1.p | w2.p;
            for i in 0..n {
                w.q[i] = w1.q[i] + w2.q[i] - ks[i];
                w.r[i] = w1.r[i] - ks[i] + w2.r[i];
            }
            out.accumulate(
                w,
                Scalar::from_rational(BigRational::from_integer(coeff)),
            );
        }
        out
    }

    /// Normal-ordered product.  Errors on dimension mismatch.
    pub fn normal_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(CoreError::DimensionMismatch(self.dim, rhs.dim));
        }
        let mut out = AlgebraElement::zero(self.dim);
        for (w1, s1) in &self.terms {
            for (w2, s2) in &rhs.terms {
                let prod = Self::word_mul(w1, w2);
                let coeff = s1 * s2;
                for (w, s) in prod.terms {
                    out.accumulate(w, &s * &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = AlgebraElement::one(self.dim);
        for _ in 0..k {
            out = out.normal_mul(self)?;
        }
        Ok(out)
    }

    /// Apply `self` as a differential operator to the coordinate polynomial
    /// `h`: multiply and keep the words whose derivations were all consumed.
    ///
    /// Preconditions: `self` carries no differentials; `h` is a pure
    /// coordinate polynomial.
    pub fn apply_as_diffop(&self, h: &Self) -> Result<Self> {
        if self.terms.keys().any(|w| w.p != 0) {
            return Err(CoreError::FormFactor(format!("{}", self.render_default())));
        }
        if !h.is_polynomial() {
            return Err(CoreError::NotPolynomial(format!("{}", h.render_default())));
        }
        let product = self.normal_mul(h)?;
        let mut out = AlgebraElement::zero(self.dim);
        for (w, s) in product.terms {
            if w.deriv_degree() == 0 {
                out.accumulate(w, s);
            }
        }
        Ok(out)
    }

    /// Partial derivative of a coordinate polynomial.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(CoreError::NotPolynomial(format!("{}", self.render_default())));
        }
        let mut out = AlgebraElement::zero(self.dim);
        for (w, s) in &self.terms {
            if w.q[i] > 0 {
                let mut w2 = w.clone();
                w2.q[i] -= 1;
                out.accumulate(w2, s * &Scalar::from_int(w.q[i] as i64));
            }
        }
        Ok(out)
    }

    /// Exterior derivative of a coordinate polynomial: `dh = xi^i * d_i(h)`.
    pub fn exterior_derivative(&self) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(CoreError::NotPolynomial(format!("{}", self.render_default())));
        }
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for i in 0..n {
            let di = self.partial_derivative(i)?;
            out = out.add(&AlgebraElement::xi(n, i).normal_mul(&di)?);
        }
        Ok(out)
    }

    /// Classical involution: coordinates and differentials are self-adjoint,
    /// derivations are skew (`d_i^* = -d_i`), products reverse, coefficients
    /// conjugate.  The reversed word is re-normal-ordered.
    pub fn star_involution_classical(&self) -> Self {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for (w, s) in &self.terms {
            let p_count = w.form_degree();
            let sign_exp = w.deriv_degree() + p_count * (p_count.saturating_sub(1)) / 2;
            let mut sign = Scalar::from_int(if sign_exp % 2 == 0 { 1 } else { -1 });
            sign = &sign * &s.conj();
            // (xi^P x^Q d^R)^* = sign * d^R x^Q xi^P, re-normal-ordered.
            let mut left = BasisWord::unit(n);
            left.r.copy_from_slice(&w.r);
            let mut right = BasisWord::unit(n);
            right.p = w.p;
            right.q.copy_from_slice(&w.q);
            let prod = Self::word_mul(&left, &right);
            for (w2, s2) in prod.terms {
                out.accumulate(w2, &s2 * &sign);
            }
        }
        out
    }

    /// Substitute linear images for every generator (used by chart changes).
    /// The image slices hold the replacement for `x^i`, `xi^i`, `d_i`.
    pub fn substitute(
        &self,
        x_img: &[AlgebraElement],
        xi_img: &[AlgebraElement],
        d_img: &[AlgebraElement],
    ) -> Result<Self> {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for (w, s) in &self.terms {
            let mut acc = AlgebraElement::scalar(n, s.clone());
            for i in 0..n {
                if w.p & (1 << i) != 0 {
                    acc = acc.normal_mul(&xi_img[i])?;
                }
            }
            for i in 0..n {
                for _ in 0..w.q[i] {
                    acc = acc.normal_mul(&x_img[i])?;
                }
            }
            for i in 0..n {
                for _ in 0..w.r[i] {
                    acc = acc.normal_mul(&d_img[i])?;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    fn render_default(&self) -> RenderedElement<'_> {
        RenderedElement { elem: self, style: VarStyle::X }
    }

    /// Canonical rendering with the given variable style.
    pub fn render(&self, style: VarStyle) -> String {
        format!("{}", RenderedElement { elem: self, style })
    }
}

/// Dimension of the span of basis words with form degree exactly `p`,
/// coordinate degree at most `q` and derivation degree at most `r`:
/// `C(n,p) * C(q+n,n) * C(r+n,n)`.
pub fn hilbert_dim(n: usize, d: Degrees) -> Result<BigInt> {
    if d.p as usize > n {
        return Err(CoreError::DegreeOutOfRange { p: d.p, n });
    }
    let nn = n as u32;
    Ok(binom(nn, d.p) * binom(d.q + nn, nn) * binom(d.r + nn, nn))
}

/// Variable naming for rendering: ambient coordinates (`x`, `xi`, `d`) or
/// adapted light-cone style coordinates (`y`, `eta`, `dt`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarStyle {
    X,
    Y,
}

impl VarStyle {
    pub fn names(self) -> (&'static str, &'static str, &'static str) {
        match self {
            VarStyle::X => ("x", "xi", "d"),
            VarStyle::Y => ("y", "eta", "dt"),
        }
    }
}

struct RenderedElement<'a> {
    elem: &'a AlgebraElement,
    style: VarStyle,
}

impl fmt::Display for RenderedElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        // Canonical term order: total degree descending, then symbol sequence
        // descending (so e.g. the undeformed product term prints first).
        let mut items: Vec<(&BasisWord, &Scalar)> = self.elem.terms.iter().collect();
        items.sort_by(|(wa, _), (wb, _)| {
            (wb.total_degree(), wb.symbol_sequence()).cmp(&(wa.total_degree(), wa.symbol_sequence()))
        });
        let (xn, xin, dn) = self.style.names();
        for (idx, (w, s)) in items.into_iter().enumerate() {
            let mut factors = Vec::new();
            for i in 0..w.dim() {
                if w.p & (1 << i) != 0 {
                    factors.push(format!("{}{}", xin, i + 1));
                }
            }
            for (i, &e) in w.q.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("{}{}", xn, i + 1));
                } else if e > 1 {
                    factors.push(format!("{}{}^{}", xn, i + 1, e));
                }
            }
            for (i, &e) in w.r.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("{}{}", dn, i + 1));
                } else if e > 1 {
                    factors.push(format!("{}{}^{}", dn, i + 1, e));
                }
            }
            let word_str = factors.join("*");
            // Single-term scalars join with an explicit sign; multi-term
            // scalars stay parenthesized.
            let (sign, body) = match s.single_term() {
                Some((key, coeff)) => {
                    let (sgn, cbody) = crate::scalar::format_term(key, coeff);
                    let body = if word_str.is_empty() {
                        cbody
                    } else if cbody == "1" {
                        word_str
                    } else {
                        format!("{}*{}", cbody, word_str)
                    };
                    (sgn, body)
                }
                None => {
                    let body = if word_str.is_empty() {
                        format!("({})", s)
                    } else {
                        format!("({})*{}", s, word_str)
                    };
                    (1, body)
                }
            };
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

#[cfg(test)]
mod tests {
    use super::*;

    fn n3() -> usize {
        3
    }

    #[test]
    fn derivations_past_coordinates() {
        // d1 d2 * x1 x2 = 1 + x1 d1 + x2 d2 + x1 x2 d1 d2
        let n = n3();
        let d1d2 = AlgebraElement::monomial_word(n, &[], &[0, 0, 0], &[1, 1, 0]);
        let x1x2 = AlgebraElement::monomial_word(n, &[], &[1, 1, 0], &[0, 0, 0]);
        let prod = d1d2.normal_mul(&x1x2).unwrap();
        let expected = AlgebraElement::one(n)
            .add(&AlgebraElement::monomial_word(n, &[], &[1, 0, 0], &[1, 0, 0]))
            .add(&AlgebraElement::monomial_word(n, &[], &[0, 1, 0], &[0, 1, 0]))
            .add(&AlgebraElement::monomial_word(n, &[], &[1, 1, 0], &[1, 1, 0]));
        assert_eq!(prod, expected);
    }

    #[test]
    fn differentials_anticommute() {
        let n = n3();
        let xi1 = AlgebraElement::xi(n, 0);
        let xi2 = AlgebraElement::xi(n, 1);
        let a = xi1.normal_mul(&xi2).unwrap();
        let b = xi2.normal_mul(&xi1).unwrap();
        assert_eq!(a, b.neg());
        assert!(xi1.normal_mul(&xi1).unwrap().is_zero());
    }

    #[test]
    fn canonical_relation_d_x() {
        let n = n3();
        let d1 = AlgebraElement::del(n, 0);
        let x1 = AlgebraElement::x(n, 0);
        let lhs = d1.normal_mul(&x1).unwrap();
        let rhs = AlgebraElement::one(n).add(&x1.normal_mul(&d1).unwrap());
        assert_eq!(lhs, rhs);
        // distinct indices commute
        let x2 = AlgebraElement::x(n, 1);
        assert_eq!(d1.normal_mul(&x2).unwrap(), x2.normal_mul(&d1).unwrap());
    }

    #[test]
    fn diffop_application() {
        // d1 applied to (x1)^2 = 2 x1
        let n = n3();
        let d1 = AlgebraElement::del(n, 0);
        let sq = AlgebraElement::x(n, 0).pow(2).unwrap();
        let out = d1.apply_as_diffop(&sq).unwrap();
        assert_eq!(out, AlgebraElement::x(n, 0).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn diffop_rejects_forms() {
        let n = n3();
        let xi1 = AlgebraElement::xi(n, 0);
        let x1 = AlgebraElement::x(n, 0);
        assert!(xi1.apply_as_diffop(&x1).is_err());
        assert!(AlgebraElement::del(n, 0).apply_as_diffop(&xi1).is_err());
    }

    #[test]
    fn exterior_derivative_squares_to_zero() {
        let n = n3();
        // h = x1^2 x2 + x3
        let h = AlgebraElement::x(n, 0)
            .pow(2)
            .unwrap()
            .normal_mul(&AlgebraElement::x(n, 1))
            .unwrap()
            .add(&AlgebraElement::x(n, 2));
        let dh = h.exterior_derivative().unwrap();
        // d(dh): extend d to one-forms by d(f xi^i) = df xi^i; nilpotency shows
        // as the antisymmetrized second derivative vanishing.
        let n_ = n;
        let mut ddh = AlgebraElement::zero(n_);
        for (w, s) in dh.terms() {
            let mut poly_word = w.clone();
            let p = poly_word.p;
            poly_word.p = 0;
            let poly = AlgebraElement::from_word(poly_word, s.clone());
            let dpoly = poly.exterior_derivative().unwrap();
            let form = AlgebraElement::from_word(
                BasisWord { p, q: vec![0; n_], r: vec![0; n_] },
                Scalar::one(),
            );
            ddh = ddh.add(&dpoly.normal_mul(&form).unwrap());
        }
        assert!(ddh.is_zero());
    }

    #[test]
    fn hilbert_dimension_counts() {
        assert_eq!(hilbert_dim(3, Degrees { p: 3, q: 1, r: 1 }).unwrap(), BigInt::from(16));
        assert_eq!(hilbert_dim(3, Degrees { p: 0, q: 2, r: 0 }).unwrap(), BigInt::from(10));
        assert!(hilbert_dim(3, Degrees { p: 4, q: 0, r: 0 }).is_err());
    }

    #[test]
    fn involution_examples() {
        let n = n3();
        // (x1 d2)^* = -d2 x1 = -x1 d2
        let e = AlgebraElement::x(n, 0)
            .normal_mul(&AlgebraElement::del(n, 1))
            .unwrap();
        assert_eq!(e.star_involution_classical(), e.neg());
        // (x1 d1)^* = -d1 x1 = -1 - x1 d1
        let e2 = AlgebraElement::x(n, 0)
            .normal_mul(&AlgebraElement::del(n, 0))
            .unwrap();
        let expected = AlgebraElement::one(n).neg().sub(&e2);
        assert_eq!(e2.star_involution_classical(), expected);
        // involutive
        assert_eq!(e2.star_involution_classical().star_involution_classical(), e2);
    }

    #[test]
    fn rendering_is_canonical() {
        let n = n3();
        let e = AlgebraElement::x(n, 0)
            .normal_mul(&AlgebraElement::x(n, 1))
            .unwrap()
            .sub(&AlgebraElement::scalar(
                n,
                &Scalar::i_nu() * &Scalar::param_b().pow(2),
            ));
        assert_eq!(e.render(VarStyle::X), "x1*x2 - i*nu*b^2");
        assert_eq!(e.render(VarStyle::Y), "y1*y2 - i*nu*b^2");
    }
}
