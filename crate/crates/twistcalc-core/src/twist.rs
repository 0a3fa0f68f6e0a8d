//! Twist deformations of the differential calculus.
//!
//! A twist is built from one or two symmetry generators and acts through
//! truncating exponential series:
//!
//! * `Abelian { left, right }` — `F = exp(i nu left (x) right)` for two
//!   commuting generators; the inverse flips the sign of `nu`.
//! * `Jordanian { h, e }` — `F = exp[(h/2) (x) log(1 + i nu e)]` with
//!   `[h, e] = 2 e`; the `e` leg is locally nilpotent on polynomials, which
//!   terminates every series.
//! * `DilationAbelian { d, h }` — `F = exp(i nu d (x) h/2)` for two commuting
//!   generators that act diagonally on basis words; the action multiplies a
//!   word pair by an integer power of the phase `q = e^{i nu}`.
//!
//! The deformed product is `a (*) b = mul((Finv_1 |> a) (x) (Finv_2 |> b))`,
//! the braided exchange uses `Rinv = F Finv_21`, and the deformed involution
//! is `a |-> S(beta) |> conj(a)` with `beta = F_1 S(F_2)`.
//!
//! Every series honours a safety cap (default 64, overridable through the
//! `TWISTCALC_SAFETY_CAP` environment variable) and reports an error instead
//! of truncating silently.

use crate::algebra::{AlgebraElement, BasisWord};
use crate::error::{CoreError, Result};
use crate::scalar::{GaussianRational, Rational, Scalar, ScalarKey};
use crate::symmetry::{AffineVectorField, LieAlgebraBasis};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::Mul;

/// Which exponential shape the twist takes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TwistKind {
    Abelian { left: String, right: String },
    Jordanian { h: String, e: String },
    DilationAbelian { d: String, h: String },
}

impl TwistKind {
    pub fn label(&self) -> String {
        match self {
            TwistKind::Abelian { left, right } => format!("exp(i*nu*{}(x){})", left, right),
            TwistKind::Jordanian { h, e } => {
                format!("exp({}/2(x)log(1+i*nu*{}))", h, e)
            }
            TwistKind::DilationAbelian { d, h } => {
                format!("exp(i*nu*{}(x){}/2)", d, h)
            }
        }
    }

    /// Generator names the twist is built from.
    pub fn legs(&self) -> (&str, &str) {
        match self {
            TwistKind::Abelian { left, right } => (left, right),
            TwistKind::Jordanian { h, e } => (h, e),
            TwistKind::DilationAbelian { d, h } => (d, h),
        }
    }
}

/// Default iteration cap for all series, overridable via environment.
pub fn safety_cap() -> u32 {
    std::env::var("TWISTCALC_SAFETY_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64)
}

/// A twist bound to the symmetry basis whose generators it names.
pub struct TwistContext<'a> {
    basis: &'a LieAlgebraBasis,
    kind: TwistKind,
    cap: u32,
}

/// One summand of a two-leg operator applied to a pair of elements.
pub type PairSummands = Vec<(AlgebraElement, AlgebraElement)>;

impl<'a> TwistContext<'a> {
    pub fn new(basis: &'a LieAlgebraBasis, kind: TwistKind) -> Result<Self> {
        let (g1, g2) = kind.legs();
        basis.get(g1)?;
        basis.get(g2)?;
        Ok(TwistContext { basis, kind, cap: safety_cap() })
    }

    pub fn kind(&self) -> &TwistKind {
        &self.kind
    }

    pub fn basis(&self) -> &LieAlgebraBasis {
        self.basis
    }

    fn field(&self, name: &str) -> &AffineVectorField {
        self.basis.get(name).expect("leg checked at construction")
    }

    /// `Finv |> (a (x) b)` expanded to a finite sum of element pairs.
    pub fn pair_inverse(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<PairSummands> {
        self.pair_apply(a, b, false)
    }

    /// `F |> (a (x) b)` expanded to a finite sum of element pairs.
    pub fn pair_forward(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<PairSummands> {
        self.pair_apply(a, b, true)
    }

    fn pair_apply(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        forward: bool,
    ) -> Result<PairSummands> {
        if a.is_zero() || b.is_zero() {
            return Ok(Vec::new());
        }
        match &self.kind {
            TwistKind::Abelian { left, right } => {
                // exp(s * i nu X (x) Y) with s = +1 forward, -1 inverse:
                // sum_k (s i nu)^k / k! (X^k |> a) (x) (Y^k |> b).
                let x = self.field(left);
                let y = self.field(right);
                let step = if forward { Scalar::i_nu() } else { Scalar::i_nu().scale(&GaussianRational::from_int(-1)) };
                let mut out = vec![(a.clone(), b.clone())];
                let mut u = a.clone();
                let mut v = b.clone();
                for k in 1..=self.cap {
                    u = x.act(&u).scale(&step).scale(&Scalar::from_ratio(1, k as i64));
                    v = y.act(&v);
                    if u.is_zero() || v.is_zero() {
                        return Ok(out);
                    }
                    out.push((u.clone(), v.clone()));
                }
                Err(CoreError::SafetyCap { cap: self.cap })
            }
            TwistKind::Jordanian { h, .. } => {
                // exp[s (h/2) (x) log(1 + i nu e)]:
                // sum_n 1/n! (s h/2)^n |> a (x) log^n(1 + i nu e) |> b.
                let hf = self.field(h);
                let sign = if forward { 1 } else { -1 };
                let mut out = vec![(a.clone(), b.clone())];
                let mut u = a.clone();
                let mut v = b.clone();
                for n in 1..=self.cap {
                    u = hf.act(&u).scale(&Scalar::from_ratio(sign, 2 * n as i64));
                    v = self.log_leg(&v)?;
                    if u.is_zero() || v.is_zero() {
                        return Ok(out);
                    }
                    out.push((u.clone(), v.clone()));
                }
                Err(CoreError::SafetyCap { cap: self.cap })
            }
            TwistKind::DilationAbelian { d, h } => {
                // Both legs diagonal: a word pair picks up q^{s * d_eig * h_eig/2}.
                let df = self.field(d);
                let hf = self.field(h);
                let sign = if forward { 1 } else { -1 };
                let mut out = Vec::new();
                for (wa, sa) in a.terms() {
                    let da = diagonal_eigenvalue(df, wa)?;
                    for (wb, sb) in b.terms() {
                        let hb = diagonal_eigenvalue(hf, wb)?;
                        let e = integer_phase(&(&da * &hb), d, h)?;
                        if e % 2 != 0 {
                            return Err(CoreError::FractionalPhase(format!(
                                "q^({}/2) from eigenvalues {} and {}",
                                sign * e,
                                da,
                                hb
                            )));
                        }
                        let phase = Scalar::q_pow(sign * e / 2);
                        out.push((
                            AlgebraElement::from_word(wa.clone(), sa.mul(&phase)),
                            AlgebraElement::from_word(wb.clone(), sb.clone()),
                        ));
                    }
                }
                Ok(out)
            }
        }
    }

    /// `log(1 + i nu e) |> v = -sum_m (-i nu)^m / m e^m |> v`.
    fn log_leg(&self, v: &AlgebraElement) -> Result<AlgebraElement> {
        let e = match &self.kind {
            TwistKind::Jordanian { e, .. } => self.field(e),
            _ => unreachable!("log leg only arises for the Jordanian shape"),
        };
        let minus_i_nu = Scalar::i_nu().scale(&GaussianRational::from_int(-1));
        let mut acc = AlgebraElement::zero(v.dim());
        let mut chain = v.clone();
        let mut weight = Scalar::one();
        for m in 1..=self.cap {
            chain = e.act(&chain);
            if chain.is_zero() {
                return Ok(acc);
            }
            weight = weight.mul(&minus_i_nu);
            let coeff = weight.scale(&GaussianRational::from_ratio(-1, m as i64));
            acc = acc.add(&chain.scale(&coeff));
        }
        Err(CoreError::SafetyCap { cap: self.cap })
    }

    /// `(1 + i nu e)^k |> v` for any integer `k` (binomial series for
    /// `k >= 0`, geometric series for `k < 0`; terminates by nilpotency).
    pub fn nilpotent_power(&self, gen: &str, k: i64, v: &AlgebraElement) -> Result<AlgebraElement> {
        let e = self.basis.get(gen)?;
        let i_nu = Scalar::i_nu();
        let mut acc = v.clone();
        let mut chain = v.clone();
        let mut coeff = GaussianRational::one();
        for m in 1..=self.cap as i64 {
            chain = e.act(&chain);
            if chain.is_zero() {
                return Ok(acc);
            }
            // binomial(k, m) stays exact for negative k
            coeff = &coeff * &GaussianRational::from_ratio(k - m + 1, m);
            if coeff.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&chain.scale(&i_nu.pow(m as u32).scale(&coeff)));
        }
        Err(CoreError::SafetyCap { cap: self.cap })
    }

    /// The deformed product `a (*) b`.
    pub fn star(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        let n = a.dim();
        let mut out = AlgebraElement::zero(n);
        for (u, v) in self.pair_inverse(a, b)? {
            out = out.add(&u.normal_mul(&v)?);
        }
        Ok(out)
    }

    /// Deformed product of several factors, left to right.
    pub fn star_many(&self, factors: &[&AlgebraElement]) -> Result<AlgebraElement> {
        let mut it = factors.iter();
        let first = it.next().expect("star_many needs at least one factor");
        let mut acc = (*first).clone();
        for f in it {
            acc = self.star(&acc, f)?;
        }
        Ok(acc)
    }

    /// `Rinv |> (y (x) x)`: evaluate `Finv` on the flipped pair, swap the
    /// summands back, then push each through the forward twist.
    pub fn r_inverse_pair(&self, y: &AlgebraElement, x: &AlgebraElement) -> Result<PairSummands> {
        let inner = self.pair_inverse(x, y)?;
        let mut out = Vec::new();
        for (fx, fy) in inner {
            out.extend(self.pair_forward(&fy, &fx)?);
        }
        Ok(out)
    }

    /// Braided commutator `[x, y] = x (*) y - mul((Rinv |> (y (x) x)))`.
    pub fn braided_commutator(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        let mut out = self.star(x, y)?;
        for (ry, rx) in self.r_inverse_pair(y, x)? {
            out = out.sub(&self.star(&ry, &rx)?);
        }
        Ok(out)
    }

    /// `Rinv` applied on slots (1,3) and then (2,3) of a triple, as used by
    /// the braided symmetrisation of curvature arguments.
    pub fn r_inverse_triple_13_23(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
        z: &AlgebraElement,
    ) -> Result<Vec<(AlgebraElement, AlgebraElement, AlgebraElement)>> {
        let mut out = Vec::new();
        for (x1, z1) in self.r_inverse_pair(x, z)? {
            for (y2, z2) in self.r_inverse_pair(y, &z1)? {
                out.push((x1.clone(), y2, z2));
            }
        }
        Ok(out)
    }

    /// `S(beta) |> a` where `beta = F_1 S(F_2)`.
    pub fn s_beta(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        match &self.kind {
            TwistKind::Abelian { left, right } => {
                // beta = S(beta) = exp(-i nu X Y) acting by composition.
                let x = self.field(left);
                let y = self.field(right);
                let minus_i_nu = Scalar::i_nu().scale(&GaussianRational::from_int(-1));
                let mut acc = a.clone();
                let mut chain = a.clone();
                for k in 1..=self.cap {
                    chain = x.act(&y.act(&chain))
                        .scale(&minus_i_nu)
                        .scale(&Scalar::from_ratio(1, k as i64));
                    if chain.is_zero() {
                        return Ok(acc);
                    }
                    acc = acc.add(&chain);
                }
                Err(CoreError::SafetyCap { cap: self.cap })
            }
            TwistKind::Jordanian { h, .. } => {
                // S(beta) |> a = sum_n 1/n! log^n(1 + i nu e) |> ((-h/2)^n |> a)
                let hf = self.field(h);
                let mut acc = a.clone();
                let mut hpow = a.clone();
                for n in 1..=self.cap {
                    hpow = hf.act(&hpow).scale(&Scalar::from_ratio(-1, 2 * n as i64));
                    if hpow.is_zero() {
                        return Ok(acc);
                    }
                    let mut term = hpow.clone();
                    for _ in 0..n {
                        term = self.log_leg(&term)?;
                        if term.is_zero() {
                            break;
                        }
                    }
                    if !term.is_zero() {
                        acc = acc.add(&term);
                    } else if self.log_chain_dead(a, n)? {
                        return Ok(acc);
                    }
                }
                Err(CoreError::SafetyCap { cap: self.cap })
            }
            TwistKind::DilationAbelian { d, h } => {
                // S(beta) = exp(-i nu H D / 2), diagonal on words.
                let df = self.field(d);
                let hf = self.field(h);
                let mut out = AlgebraElement::zero(a.dim());
                for (w, s) in a.terms() {
                    let de = diagonal_eigenvalue(df, w)?;
                    let he = diagonal_eigenvalue(hf, w)?;
                    let e = integer_phase(&(&de * &he), d, h)?;
                    if e % 2 != 0 {
                        return Err(CoreError::FractionalPhase(format!(
                            "q^({}/2) from eigenvalues {} and {}",
                            -e, de, he
                        )));
                    }
                    let phase = Scalar::q_pow(-e / 2);
                    out = out.add(&AlgebraElement::from_word(w.clone(), s.mul(&phase)));
                }
                Ok(out)
            }
        }
    }

    /// Whether `log^n(1 + i nu e)` kills every basis word of `a` without
    /// relying on cancellation (termination witness for the Jordanian
    /// `S(beta)` series; the `h` leg only rescales words).
    fn log_chain_dead(&self, a: &AlgebraElement, n: u32) -> Result<bool> {
        for (w, _) in a.terms() {
            let mut term = AlgebraElement::from_word(w.clone(), Scalar::one());
            for _ in 0..n {
                term = self.log_leg(&term)?;
                if term.is_zero() {
                    break;
                }
            }
            if !term.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The deformed involution `a |-> S(beta) |> conj(a)`.
    pub fn twisted_involution(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.s_beta(&a.star_involution_classical())
    }

    /// Apply an envelope operator expression (rightmost factor first).
    pub fn apply_operator(&self, op: &OpExpr, a: &AlgebraElement) -> Result<AlgebraElement> {
        match op {
            OpExpr::Scalar(s) => Ok(a.scale(s)),
            OpExpr::Gen(g) => Ok(self.basis.get(g)?.act(a)),
            OpExpr::Sum(parts) => {
                let mut acc = AlgebraElement::zero(a.dim());
                for p in parts {
                    acc = acc.add(&self.apply_operator(p, a)?);
                }
                Ok(acc)
            }
            OpExpr::Prod(parts) => {
                let mut cur = a.clone();
                for p in parts.iter().rev() {
                    cur = self.apply_operator(p, &cur)?;
                }
                Ok(cur)
            }
            OpExpr::GeoInverse(g) => self.nilpotent_power(g, -1, a),
            OpExpr::PhaseExp(g, sign) => {
                let f = self.basis.get(g)?;
                let mut out = AlgebraElement::zero(a.dim());
                for (w, s) in a.terms() {
                    let eig = diagonal_eigenvalue(f, w)?;
                    let e = integer_phase(&eig, g, g)?;
                    let phase = Scalar::q_pow(*sign as i64 * e);
                    out = out.add(&AlgebraElement::from_word(w.clone(), s.mul(&phase)));
                }
                Ok(out)
            }
        }
    }

    /// Check a deformed coproduct against the deformed Leibniz rule
    /// `g |> (a (*) b) = sum (leg1 |> a) (*) (leg2 |> b)` and return a
    /// description of every failing pair.
    pub fn twisted_leibniz_check(
        &self,
        gen: &str,
        coproduct: &[(OpExpr, OpExpr)],
        pairs: &[(AlgebraElement, AlgebraElement)],
    ) -> Result<Vec<String>> {
        let field = self.basis.get(gen)?;
        let mut failures = Vec::new();
        for (a, b) in pairs {
            let lhs = field.act(&self.star(a, b)?);
            let mut rhs = AlgebraElement::zero(a.dim());
            for (leg1, leg2) in coproduct {
                let la = self.apply_operator(leg1, a)?;
                let lb = self.apply_operator(leg2, b)?;
                rhs = rhs.add(&self.star(&la, &lb)?);
            }
            if lhs != rhs {
                failures.push(format!(
                    "{} on ({}, {}): action gives {}, coproduct gives {}",
                    gen,
                    a.render(crate::algebra::VarStyle::X),
                    b.render(crate::algebra::VarStyle::X),
                    lhs.render(crate::algebra::VarStyle::X),
                    rhs.render(crate::algebra::VarStyle::X),
                ));
            }
        }
        Ok(failures)
    }

    /// Check a deformed antipode candidate against the axiom
    /// `mul . (S (x) id) . coproduct(g) |> a = 0` for every sample element,
    /// extending `S` anti-multiplicatively over the coproduct legs.
    pub fn antipode_check(
        &self,
        coproduct: &[(OpExpr, OpExpr)],
        antipode_table: &BTreeMap<String, OpExpr>,
        samples: &[AlgebraElement],
    ) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        for a in samples {
            let mut acc = AlgebraElement::zero(a.dim());
            for (leg1, leg2) in coproduct {
                let s_leg1 = antipode_transform(leg1, antipode_table)?;
                let inner = self.apply_operator(leg2, a)?;
                acc = acc.add(&self.apply_operator(&s_leg1, &inner)?);
            }
            if !acc.is_zero() {
                failures.push(format!(
                    "on {}: residual {}",
                    a.render(crate::algebra::VarStyle::X),
                    acc.render(crate::algebra::VarStyle::X),
                ));
            }
        }
        Ok(failures)
    }
}

/// Envelope operator expression: sums and compositions of generators with the
/// two closed-form series the deformed coproducts need.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OpExpr {
    Scalar(Scalar),
    Gen(String),
    Sum(Vec<OpExpr>),
    /// Composition; the rightmost factor acts first.
    Prod(Vec<OpExpr>),
    /// `(1 + i nu g)^-1 |>` for a locally nilpotent generator `g`.
    GeoInverse(String),
    /// `exp(sign * i nu g) |>` for a diagonal generator `g`.
    PhaseExp(String, i32),
}

impl OpExpr {
    pub fn one() -> Self {
        OpExpr::Scalar(Scalar::one())
    }

    pub fn neg(self) -> Self {
        OpExpr::Prod(vec![OpExpr::Scalar(Scalar::from_int(-1)), self])
    }
}

/// Extend an antipode generator table anti-multiplicatively over an operator
/// expression.  Phases transform by sign flip, which encodes that the twisted
/// antipode negates the diagonal generator inside `exp(i nu g)`.
pub fn antipode_transform(
    op: &OpExpr,
    table: &BTreeMap<String, OpExpr>,
) -> Result<OpExpr> {
    match op {
        OpExpr::Scalar(s) => Ok(OpExpr::Scalar(s.clone())),
        OpExpr::Gen(g) => table
            .get(g)
            .cloned()
            .ok_or_else(|| CoreError::UnknownGenerator(format!("antipode of {}", g))),
        OpExpr::Sum(parts) => {
            let mapped: Result<Vec<_>> =
                parts.iter().map(|p| antipode_transform(p, table)).collect();
            Ok(OpExpr::Sum(mapped?))
        }
        OpExpr::Prod(parts) => {
            let mapped: Result<Vec<_>> = parts
                .iter()
                .rev()
                .map(|p| antipode_transform(p, table))
                .collect();
            Ok(OpExpr::Prod(mapped?))
        }
        OpExpr::GeoInverse(g) => Err(CoreError::Unsupported(format!(
            "antipode of geo({}) is not representable in the operator grammar",
            g
        ))),
        OpExpr::PhaseExp(g, sign) => Ok(OpExpr::PhaseExp(g.clone(), -sign)),
    }
}

/// Eigenvalue of a diagonal affine field on a basis word: each coordinate or
/// form factor contributes its diagonal entry, each derivative factor the
/// negative.
fn diagonal_eigenvalue(f: &AffineVectorField, w: &BasisWord) -> Result<Rational> {
    let n = f.dim();
    for t in f.translation() {
        if !t.is_zero() {
            return Err(CoreError::NotDiagonal("field has a translation part".into()));
        }
    }
    let mut lambda: Vec<Rational> = Vec::with_capacity(n);
    for (i, row) in f.matrix().iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if i != j && !entry.is_zero() {
                return Err(CoreError::NotDiagonal(format!(
                    "off-diagonal matrix entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        lambda.push(scalar_to_rational(&row[i]).ok_or_else(|| {
            CoreError::NotDiagonal(format!("diagonal entry {} is not a plain rational", i + 1))
        })?);
    }
    let mut eig = Rational::zero();
    for i in 0..n {
        let mut count = Rational::from_integer(w.q[i].into());
        if w.p & (1 << i) != 0 {
            count += Rational::from_integer(1.into());
        }
        count -= Rational::from_integer(w.r[i].into());
        eig += &lambda[i] * count;
    }
    Ok(eig)
}

fn integer_phase(r: &Rational, g1: &str, g2: &str) -> Result<i64> {
    if !r.denom().is_one() {
        return Err(CoreError::FractionalPhase(format!(
            "{} from legs {}, {}",
            r, g1, g2
        )));
    }
    num_traits::ToPrimitive::to_i64(r.numer()).ok_or_else(|| {
        CoreError::FractionalPhase(format!("phase exponent {} overflows", r))
    })
}

fn scalar_to_rational(s: &Scalar) -> Option<Rational> {
    if s.is_zero() {
        return Some(Rational::zero());
    }
    let (key, coeff) = s.single_term()?;
    if *key != ScalarKey::ONE || !coeff.im.is_zero() {
        return None;
    }
    Some(coeff.re.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarStyle;

    /// Parabolic-cylinder style basis: L13 = x1 d3 + b d1, L23 = b d2.
    fn abelian_basis() -> LieAlgebraBasis {
        let n = 3;
        let mut basis = LieAlgebraBasis::new();
        let zero = || vec![vec![Scalar::zero(); n]; n];
        let zt = || vec![Scalar::zero(); n];
        let mut a13 = zero();
        a13[2][0] = Scalar::one();
        let mut t13 = zt();
        t13[0] = Scalar::param_b();
        basis.insert("L13", AffineVectorField::new(a13, t13).unwrap());
        let a23 = zero();
        let mut t23 = zt();
        t23[1] = Scalar::param_b();
        basis.insert("L23", AffineVectorField::new(a23, t23).unwrap());
        basis
    }

    /// Jordanian pair in an adapted chart: H = diag(2, -2, 0),
    /// E = y1 dt3 + 2 b dt2.
    fn jordanian_basis() -> LieAlgebraBasis {
        let n = 3;
        let mut basis = LieAlgebraBasis::new();
        let zero = || vec![vec![Scalar::zero(); n]; n];
        let zt = || vec![Scalar::zero(); n];
        let mut ah = zero();
        ah[0][0] = Scalar::from_int(2);
        ah[1][1] = Scalar::from_int(-2);
        basis.insert("H", AffineVectorField::new(ah, zt()).unwrap());
        let mut ae = zero();
        ae[2][0] = Scalar::one();
        let mut te = zt();
        te[1] = Scalar::param_b().scale(&GaussianRational::from_int(2));
        basis.insert("E", AffineVectorField::new(ae, te).unwrap());
        basis
    }

    /// Dilation pair: D = identity, H = diag(2, 0, -2).
    fn dilation_basis() -> LieAlgebraBasis {
        let n = 3;
        let mut basis = LieAlgebraBasis::new();
        let zt = || vec![Scalar::zero(); n];
        let mut ad = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            ad[i][i] = Scalar::one();
        }
        basis.insert("D", AffineVectorField::new(ad, zt()).unwrap());
        let mut ah = vec![vec![Scalar::zero(); n]; n];
        ah[0][0] = Scalar::from_int(2);
        ah[2][2] = Scalar::from_int(-2);
        basis.insert("H", AffineVectorField::new(ah, zt()).unwrap());
        basis
    }

    #[test]
    fn abelian_star_deforms_coordinate_pairs() {
        let basis = abelian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Abelian { left: "L13".into(), right: "L23".into() },
        )
        .unwrap();
        let n = 3;
        let x1 = AlgebraElement::x(n, 0);
        let x2 = AlgebraElement::x(n, 1);
        let x3 = AlgebraElement::x(n, 2);
        let got = ctx.star(&x1, &x2).unwrap();
        assert_eq!(got.render(VarStyle::X), "x1*x2 - i*nu*b^2");
        let got = ctx.star(&x3, &x2).unwrap();
        assert_eq!(got.render(VarStyle::X), "x2*x3 - i*nu*b*x1");
        // derivative pairing picks up a d3 correction
        let d1 = AlgebraElement::del(n, 0);
        let got = ctx.star(&d1, &x2).unwrap();
        assert_eq!(got.render(VarStyle::X), "x2*d1 + i*nu*b*d3");
        // undeformed direction
        let got = ctx.star(&x2, &x1).unwrap();
        assert_eq!(got.render(VarStyle::X), "x1*x2");
    }

    #[test]
    fn abelian_star_is_associative_on_samples() {
        let basis = abelian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Abelian { left: "L13".into(), right: "L23".into() },
        )
        .unwrap();
        let n = 3;
        let elems = [
            AlgebraElement::x(n, 0),
            AlgebraElement::x(n, 1),
            AlgebraElement::x(n, 2),
            AlgebraElement::xi(n, 2),
            AlgebraElement::del(n, 0),
        ];
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let ab_c = ctx.star(&ctx.star(a, b).unwrap(), c).unwrap();
                    let a_bc = ctx.star(a, &ctx.star(b, c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn jordanian_star_matches_closed_forms() {
        let basis = jordanian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Jordanian { h: "H".into(), e: "E".into() },
        )
        .unwrap();
        let n = 3;
        let y1 = AlgebraElement::x(n, 0);
        let y2 = AlgebraElement::x(n, 1);
        let y3 = AlgebraElement::x(n, 2);
        // y1 (*) y2 = y1 y2 - 2 i nu b y1
        let got = ctx.star(&y1, &y2).unwrap();
        let expect = y1
            .normal_mul(&y2)
            .unwrap()
            .sub(&y1.scale(&Scalar::i_nu().scale(&GaussianRational::from_int(2)).mul(&Scalar::param_b())));
        assert_eq!(got, expect);
        // y1 (*) y3 = y1 y3 - i nu y1 y1
        let got = ctx.star(&y1, &y3).unwrap();
        let expect = y1
            .normal_mul(&y3)
            .unwrap()
            .sub(&y1.normal_mul(&y1).unwrap().scale(&Scalar::i_nu()));
        assert_eq!(got, expect);
        // y3 legs are h-invariant: undeformed
        let got = ctx.star(&y3, &y2).unwrap();
        assert_eq!(got, y3.normal_mul(&y2).unwrap());
    }

    #[test]
    fn jordanian_braided_commutator_reorders() {
        let basis = jordanian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Jordanian { h: "H".into(), e: "E".into() },
        )
        .unwrap();
        let n = 3;
        // coordinates commute classically, so the braided commutator vanishes
        let y1 = AlgebraElement::x(n, 0);
        let y2 = AlgebraElement::x(n, 1);
        assert!(ctx.braided_commutator(&y1, &y2).unwrap().is_zero());
        // and the plain reordering identity y1 (*) y2 = y2 (*) y1 - 2 i nu b y1
        let lhs = ctx.star(&y1, &y2).unwrap();
        let rhs = ctx.star(&y2, &y1).unwrap().sub(&y1.scale(
            &Scalar::i_nu().scale(&GaussianRational::from_int(2)).mul(&Scalar::param_b()),
        ));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dilation_star_is_a_pure_phase() {
        let basis = dilation_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::DilationAbelian { d: "D".into(), h: "H".into() },
        )
        .unwrap();
        let n = 3;
        let y1 = AlgebraElement::x(n, 0);
        let y3 = AlgebraElement::x(n, 2);
        let d2 = AlgebraElement::del(n, 1);
        // y1 (*) y3 = q * y1 y3
        let got = ctx.star(&y1, &y3).unwrap();
        assert_eq!(got, y1.normal_mul(&y3).unwrap().scale(&Scalar::q_pow(1)));
        // middle directions are phase-free
        let got = ctx.star(&y1, &d2).unwrap();
        assert_eq!(got, y1.normal_mul(&d2).unwrap());
        // derivative second leg flips the phase: y1 (*) dt1 = q y1 dt1
        let d1 = AlgebraElement::del(n, 0);
        let got = ctx.star(&y1, &d1).unwrap();
        assert_eq!(got, y1.normal_mul(&d1).unwrap().scale(&Scalar::q_pow(1)));
    }

    #[test]
    fn involution_squares_to_identity() {
        let basis = jordanian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Jordanian { h: "H".into(), e: "E".into() },
        )
        .unwrap();
        let n = 3;
        let samples = [
            AlgebraElement::x(n, 1),
            AlgebraElement::del(n, 0),
            AlgebraElement::x(n, 0).normal_mul(&AlgebraElement::del(n, 2)).unwrap(),
            AlgebraElement::xi(n, 2),
        ];
        for a in &samples {
            let once = ctx.twisted_involution(a).unwrap();
            let twice = ctx.twisted_involution(&once).unwrap();
            assert_eq!(&twice, a, "involution must square to the identity");
        }
        // closed forms: (y2)^inv = y2 + 2 i nu b, (dt1)^inv = -dt1 + i nu dt3
        let y2 = AlgebraElement::x(n, 1);
        let got = ctx.twisted_involution(&y2).unwrap();
        let expect = y2.add(&AlgebraElement::scalar(
            n,
            Scalar::i_nu().scale(&GaussianRational::from_int(2)).mul(&Scalar::param_b()),
        ));
        assert_eq!(got, expect);
        let d1 = AlgebraElement::del(n, 0);
        let got = ctx.twisted_involution(&d1).unwrap();
        let expect = d1.neg().add(&AlgebraElement::del(n, 2).scale(&Scalar::i_nu()));
        assert_eq!(got, expect);
    }

    #[test]
    fn antipode_axiom_accepts_true_table_and_rejects_wrong_one() {
        let basis = jordanian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Jordanian { h: "H".into(), e: "E".into() },
        )
        .unwrap();
        let n = 3;
        // coproduct of E: E (x) 1 + 1 (x) E + i nu E (x) E
        let cop = vec![
            (OpExpr::Gen("E".into()), OpExpr::one()),
            (OpExpr::one(), OpExpr::Gen("E".into())),
            (
                OpExpr::Prod(vec![OpExpr::Scalar(Scalar::i_nu()), OpExpr::Gen("E".into())]),
                OpExpr::Gen("E".into()),
            ),
        ];
        // true antipode: S(E) = -E (1 + i nu E)^-1, S(H) = -H - i nu H E
        let mut table = BTreeMap::new();
        table.insert(
            "E".to_string(),
            OpExpr::Prod(vec![OpExpr::Gen("E".into()), OpExpr::GeoInverse("E".into())]).neg(),
        );
        table.insert(
            "H".to_string(),
            OpExpr::Sum(vec![
                OpExpr::Gen("H".into()).neg(),
                OpExpr::Prod(vec![
                    OpExpr::Scalar(Scalar::i_nu()),
                    OpExpr::Gen("H".into()),
                    OpExpr::Gen("E".into()),
                ])
                .neg(),
            ]),
        );
        let samples = [
            AlgebraElement::x(n, 2),
            AlgebraElement::x(n, 1).normal_mul(&AlgebraElement::x(n, 2)).unwrap(),
            AlgebraElement::del(n, 0),
            AlgebraElement::xi(n, 2),
        ];
        let failures = ctx.antipode_check(&cop, &table, &samples).unwrap();
        assert!(failures.is_empty(), "true antipode must pass: {failures:?}");
        // wrong sign fails
        let mut bad = table.clone();
        bad.insert("E".to_string(), OpExpr::Gen("E".into()));
        let failures = ctx.antipode_check(&cop, &bad, &samples).unwrap();
        assert!(!failures.is_empty());
    }

    #[test]
    fn leibniz_check_validates_deformed_coproduct() {
        let basis = jordanian_basis();
        let ctx = TwistContext::new(
            &basis,
            TwistKind::Jordanian { h: "H".into(), e: "E".into() },
        )
        .unwrap();
        let n = 3;
        let cop_e = vec![
            (OpExpr::Gen("E".into()), OpExpr::one()),
            (OpExpr::one(), OpExpr::Gen("E".into())),
            (
                OpExpr::Prod(vec![OpExpr::Scalar(Scalar::i_nu()), OpExpr::Gen("E".into())]),
                OpExpr::Gen("E".into()),
            ),
        ];
        let mut pairs = Vec::new();
        let gens = [
            AlgebraElement::x(n, 0),
            AlgebraElement::x(n, 1),
            AlgebraElement::x(n, 2),
            AlgebraElement::xi(n, 0),
            AlgebraElement::del(n, 2),
        ];
        for a in &gens {
            for b in &gens {
                pairs.push((a.clone(), b.clone()));
            }
        }
        let failures = ctx.twisted_leibniz_check("E", &cop_e, &pairs).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
        // the undeformed coproduct fails for E
        let cop_plain = vec![
            (OpExpr::Gen("E".into()), OpExpr::one()),
            (OpExpr::one(), OpExpr::Gen("E".into())),
        ];
        let failures = ctx.twisted_leibniz_check("E", &cop_plain, &pairs).unwrap();
        assert!(!failures.is_empty());
    }
}
