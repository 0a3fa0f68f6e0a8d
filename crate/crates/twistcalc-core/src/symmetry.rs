//! Affine symmetry generators and their Hopf-module action on the calculus.
//!
//! A generator is an affine vector field `X = (A^i_j x^j + t^i) d_i`.  It acts
//! as a derivation: `X |> x^i = A^i_j x^j + t^i`, `X |> xi^i = A^i_j xi^j`,
//! `X |> d_i = -A^j_i d_j`, extended by the Leibniz rule to arbitrary words
//! (primitive coproduct) and by linearity over scalars.  Products of
//! generators act by operator composition.

use crate::algebra::{AlgebraElement, BasisWord};
use crate::error::{CoreError, Result};
use crate::scalar::{GaussianRational, Scalar};
use std::collections::BTreeMap;

/// Affine vector field on `R^n`, stored so that `X |> x^i = sum_j a[i][j] x^j + t[i]`.
/// Matrix and translation entries are `nu`- and `q`-free scalars (they may
/// carry the symbolic family parameters).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineVectorField {
    dim: usize,
    a: Vec<Vec<Scalar>>,
    t: Vec<Scalar>,
}

impl AffineVectorField {
    pub fn new(a: Vec<Vec<Scalar>>, t: Vec<Scalar>) -> Result<Self> {
        let n = t.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(CoreError::DimensionMismatch(a.len(), n));
        }
        for s in a.iter().flatten().chain(t.iter()) {
            if s.is_deformed() {
                return Err(CoreError::Unsupported(
                    "affine field entries must be nu- and q-free".into(),
                ));
            }
        }
        Ok(AffineVectorField { dim: n, a, t })
    }

    pub fn zero(n: usize) -> Self {
        AffineVectorField {
            dim: n,
            a: vec![vec![Scalar::zero(); n]; n],
            t: vec![Scalar::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Vec<Vec<Scalar>> {
        &self.a
    }

    pub fn translation(&self) -> &Vec<Scalar> {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(Scalar::is_zero) && self.t.iter().all(Scalar::is_zero)
    }

    /// The field as an element of the calculus, `sum_i (a[i][j] x^j + t[i]) d_i`.
    pub fn as_element(&self) -> AlgebraElement {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for i in 0..n {
            let di = AlgebraElement::del(n, i);
            for j in 0..n {
                let xj = AlgebraElement::x(n, j).scale(&self.a[i][j]);
                out = out.add(&xj.normal_mul(&di).expect("same dim"));
            }
            out = out.add(&di.scale(&self.t[i]));
        }
        out
    }

    /// Recover an affine field from a calculus element of the shape
    /// `sum coeff * x^j d_i + sum coeff * d_i`.
    pub fn try_from_element(e: &AlgebraElement) -> Result<Self> {
        let n = e.dim();
        let mut out = AffineVectorField::zero(n);
        for (w, s) in e.terms() {
            if w.p != 0 || w.deriv_degree() != 1 || w.coord_degree() > 1 {
                return Err(CoreError::Unsupported(format!(
                    "element is not an affine vector field: {}",
                    e.render(crate::algebra::VarStyle::X)
                )));
            }
            let i = w.r.iter().position(|&r| r == 1).expect("deriv degree 1");
            match w.q.iter().position(|&q| q == 1) {
                Some(j) => out.a[i][j] = &out.a[i][j] + s,
                None => out.t[i] = &out.t[i] + s,
            }
        }
        // Entries inherited from a parsed expression must stay undeformed.
        Self::new(out.a, out.t)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.a[i][j] = &out.a[i][j] + &rhs.a[i][j];
            }
            out.t[i] = &out.t[i] + &rhs.t[i];
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.a[i][j] = &out.a[i][j] * s;
            }
            out.t[i] = &out.t[i] * s;
        }
        out
    }

    /// Lie bracket of vector fields, `[X, Y] = X Y - Y X` as derivations.
    pub fn lie_bracket(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = AffineVectorField::zero(n);
        for i in 0..n {
            for k in 0..n {
                let mut sum = Scalar::zero();
                for j in 0..n {
                    sum = &sum + &(&rhs.a[i][j] * &self.a[j][k]);
                    sum = &sum - &(&self.a[i][j] * &rhs.a[j][k]);
                }
                out.a[i][k] = sum;
            }
            let mut tr = Scalar::zero();
            for j in 0..n {
                tr = &tr + &(&rhs.a[i][j] * &self.t[j]);
                tr = &tr - &(&self.a[i][j] * &rhs.t[j]);
            }
            out.t[i] = tr;
        }
        out
    }

    /// Image of the generator `x^i` under the action.
    pub fn image_of_x(&self, i: usize) -> AlgebraElement {
        let n = self.dim;
        let mut out = AlgebraElement::scalar(n, self.t[i].clone());
        for j in 0..n {
            out = out.add(&AlgebraElement::x(n, j).scale(&self.a[i][j]));
        }
        out
    }

    /// Image of the generator `xi^i` under the action.
    pub fn image_of_xi(&self, i: usize) -> AlgebraElement {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for j in 0..n {
            out = out.add(&AlgebraElement::xi(n, j).scale(&self.a[i][j]));
        }
        out
    }

    /// Image of the generator `d_i` under the action (minus-transpose rule).
    pub fn image_of_del(&self, i: usize) -> AlgebraElement {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for j in 0..n {
            out = out.sub(&AlgebraElement::del(n, j).scale(&self.a[j][i]));
        }
        out
    }

    /// Hopf action on an arbitrary element: Leibniz over every factor of every
    /// word, linearity over scalars.  `X |> 1 = 0`.
    pub fn act(&self, e: &AlgebraElement) -> AlgebraElement {
        let n = self.dim;
        let mut out = AlgebraElement::zero(n);
        for (w, s) in e.terms() {
            let seq = w.symbol_sequence();
            for pos in 0..seq.len() {
                let term = self.act_at(&seq, pos, n);
                out = out.add(&term.scale(s));
            }
        }
        out
    }

    /// One Leibniz term: replace the factor at `pos` by its image.
    fn act_at(&self, seq: &[u32], pos: usize, n: usize) -> AlgebraElement {
        let prefix = element_from_sequence(&seq[..pos], n);
        let suffix = element_from_sequence(&seq[pos + 1..], n);
        let code = seq[pos];
        let image = if (code as usize) < n {
            self.image_of_xi(code as usize)
        } else if (code as usize) < 2 * n {
            self.image_of_x(code as usize - n)
        } else {
            self.image_of_del(code as usize - 2 * n)
        };
        prefix
            .normal_mul(&image)
            .and_then(|p| p.normal_mul(&suffix))
            .expect("same dim")
    }
}

/// Build the monomial element for a generator-code sequence.
fn element_from_sequence(seq: &[u32], n: usize) -> AlgebraElement {
    let mut w = BasisWord::unit(n);
    for &code in seq {
        let c = code as usize;
        if c < n {
            w.p |= 1 << c;
        } else if c < 2 * n {
            w.q[c - n] += 1;
        } else {
            w.r[c - 2 * n] += 1;
        }
    }
    AlgebraElement::from_word(w, Scalar::one())
}

/// One declared structure relation `[lhs, rhs] = sum coeff * gen`.
#[derive(Clone, Debug)]
pub struct BracketRule {
    pub lhs: String,
    pub rhs: String,
    pub combo: Vec<(Scalar, String)>,
}

/// A named set of generators with a declared bracket table.
#[derive(Clone, Debug, Default)]
pub struct LieAlgebraBasis {
    names: Vec<String>,
    gens: BTreeMap<String, AffineVectorField>,
    brackets: Vec<BracketRule>,
}

impl LieAlgebraBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, field: AffineVectorField) {
        if !self.gens.contains_key(name) {
            self.names.push(name.to_string());
        }
        self.gens.insert(name.to_string(), field);
    }

    pub fn declare_bracket(&mut self, lhs: &str, rhs: &str, combo: Vec<(Scalar, String)>) {
        self.brackets.push(BracketRule { lhs: lhs.into(), rhs: rhs.into(), combo });
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Result<&AffineVectorField> {
        self.gens.get(name).ok_or_else(|| CoreError::UnknownGenerator(name.into()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.gens.contains_key(name)
    }

    pub fn declared_brackets(&self) -> &[BracketRule] {
        &self.brackets
    }

    /// Evaluate a declared linear combination of generators as a field.
    pub fn combination(&self, combo: &[(Scalar, String)]) -> Result<AffineVectorField> {
        let n = self
            .gens
            .values()
            .next()
            .map(AffineVectorField::dim)
            .unwrap_or(0);
        let mut out = AffineVectorField::zero(n);
        for (coeff, name) in combo {
            out = out.add(&self.get(name)?.scale(coeff));
        }
        Ok(out)
    }

    /// Check every declared bracket against the actual vector-field bracket.
    /// Returns the list of failing rules rendered for diagnostics.
    pub fn bracket_table_check(&self) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        for rule in &self.brackets {
            let lhs = self.get(&rule.lhs)?;
            let rhs = self.get(&rule.rhs)?;
            let actual = lhs.lie_bracket(rhs);
            let declared = self.combination(&rule.combo)?;
            if actual != declared {
                failures.push(format!(
                    "[{}, {}]: computed {} but table says {}",
                    rule.lhs,
                    rule.rhs,
                    actual.as_element().render(crate::algebra::VarStyle::X),
                    declared.as_element().render(crate::algebra::VarStyle::X),
                ));
            }
        }
        Ok(failures)
    }

    /// Jacobi identity over all generator triples (on the vector fields).
    pub fn jacobi_check(&self) -> bool {
        for x in self.names.iter() {
            for y in self.names.iter() {
                for z in self.names.iter() {
                    let gx = &self.gens[x];
                    let gy = &self.gens[y];
                    let gz = &self.gens[z];
                    let cyc = gx
                        .lie_bracket(gy)
                        .lie_bracket(gz)
                        .add(&gy.lie_bracket(gz).lie_bracket(gx))
                        .add(&gz.lie_bracket(gx).lie_bracket(gy));
                    if !cyc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A scaled word in the universal envelope: `coeff * g_1 g_2 ... g_k`.
#[derive(Clone, Debug)]
pub struct UeaWord {
    pub coeff: Scalar,
    pub factors: Vec<String>,
}

impl UeaWord {
    pub fn one() -> Self {
        UeaWord { coeff: Scalar::one(), factors: Vec::new() }
    }

    /// Operator action: factors compose left-to-right, i.e. the rightmost
    /// factor acts first (`(XY) |> a = X |> (Y |> a)`).
    pub fn act(&self, basis: &LieAlgebraBasis, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut cur = e.clone();
        for name in self.factors.iter().rev() {
            cur = basis.get(name)?.act(&cur);
        }
        Ok(cur.scale(&self.coeff))
    }
}

/// A finite sum of envelope words.
#[derive(Clone, Debug, Default)]
pub struct UeaPoly {
    pub words: Vec<UeaWord>,
}

impl UeaPoly {
    pub fn act(&self, basis: &LieAlgebraBasis, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(e.dim());
        for w in &self.words {
            out = out.add(&w.act(basis, e)?);
        }
        Ok(out)
    }
}

/// Strict tangency: `X(f) = 0` identically (false for fields that only
/// preserve the ideal, like the dilation on the cone).
pub fn tangency_check(x: &AffineVectorField, f: &AlgebraElement) -> Result<bool> {
    Ok(x.act(f).is_zero())
}

/// Constant Hessian `f_ij = d_i d_j f` of a quadric polynomial.
pub fn hessian(f: &AlgebraElement) -> Result<Vec<Vec<Scalar>>> {
    let n = f.dim();
    let mut h = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        let fi = f.partial_derivative(i)?;
        for j in 0..n {
            let fij = fi.partial_derivative(j)?;
            if fij.total_degree() > 0 {
                return Err(CoreError::Unsupported(
                    "polynomial is not quadric: non-constant Hessian".into(),
                ));
            }
            h[i][j] = fij.coefficient(&BasisWord::unit(n));
        }
    }
    Ok(h)
}

/// Gradient component `f_i = d_i f` as polynomials.
pub fn gradient(f: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
    (0..f.dim()).map(|i| f.partial_derivative(i)).collect()
}

/// The rotation-type generator `L_ij = f_i d_j - f_j d_i` of a quadric, as a
/// calculus element (first-order operator).
pub fn l_operator(f: &AlgebraElement, i: usize, j: usize) -> Result<AlgebraElement> {
    let n = f.dim();
    let fi = f.partial_derivative(i)?;
    let fj = f.partial_derivative(j)?;
    Ok(fi
        .normal_mul(&AlgebraElement::del(n, j))?
        .sub(&fj.normal_mul(&AlgebraElement::del(n, i))?))
}

/// `epsilon^{ijk} f_i L_jk = 0` as an operator identity (three dimensions).
pub fn dependence_relation_check(f: &AlgebraElement) -> Result<bool> {
    let n = f.dim();
    if n != 3 {
        return Err(CoreError::Unsupported("dependence relation needs dimension 3".into()));
    }
    let grad = gradient(f)?;
    let mut sum = AlgebraElement::zero(n);
    // (i, j, k, sign) over all permutations of (0, 1, 2)
    let perms: [(usize, usize, usize, i64); 6] = [
        (0, 1, 2, 1),
        (1, 2, 0, 1),
        (2, 0, 1, 1),
        (0, 2, 1, -1),
        (2, 1, 0, -1),
        (1, 0, 2, -1),
    ];
    for (i, j, k, sign) in perms {
        let term = grad[i].normal_mul(&l_operator(f, j, k)?)?;
        sum = sum.add(&term.scale(&Scalar::from_int(sign)));
    }
    Ok(sum.is_zero())
}

/// Check the quadric commutation pattern
/// `[L_ij, L_hk] = f_jh L_ik - f_ih L_jk - f_jk L_ih + f_ik L_jh`
/// for the operators built from `f` (all index combinations).
pub fn quadric_bracket_check(f: &AlgebraElement) -> Result<bool> {
    let n = f.dim();
    let hess = hessian(f)?;
    let l = |i: usize, j: usize| l_operator(f, i, j);
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let lij = l(i, j)?;
                    let lhk = l(h, k)?;
                    let comm = lij.normal_mul(&lhk)?.sub(&lhk.normal_mul(&lij)?);
                    let rhs = l(i, k)?
                        .scale(&hess[j][h])
                        .sub(&l(j, k)?.scale(&hess[i][h]))
                        .sub(&l(i, h)?.scale(&hess[j][k]))
                        .add(&l(j, h)?.scale(&hess[i][k]));
                    if comm != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Conjugate a field by an invertible numeric chart matrix `C` (`y = C x`):
/// the same field expressed in the target coordinates.
pub fn conjugate_field(
    x_field: &AffineVectorField,
    c: &[Vec<GaussianRational>],
    c_inv: &[Vec<GaussianRational>],
) -> Result<AffineVectorField> {
    let n = x_field.dim();
    // A_y = C A_x C^-1, t_y = C t_x
    let mut a = vec![vec![Scalar::zero(); n]; n];
    let mut t = vec![Scalar::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = Scalar::zero();
            for u in 0..n {
                for v in 0..n {
                    let factor = &Scalar::from_gauss(c[i][u].clone())
                        * &Scalar::from_gauss(c_inv[v][j].clone());
                    sum = &sum + &(&x_field.matrix()[u][v] * &factor);
                }
            }
            a[i][j] = sum;
        }
        let mut sum = Scalar::zero();
        for u in 0..n {
            sum = &sum
                + &(&Scalar::from_gauss(c[i][u].clone()) * &x_field.translation()[u]);
        }
        t[i] = sum;
    }
    AffineVectorField::new(a, t)
}

/// Exact inverse of a small numeric matrix (adjugate method).
pub fn invert_matrix(c: &[Vec<GaussianRational>]) -> Result<Vec<Vec<GaussianRational>>> {
    let n = c.len();
    match n {
        1 => {
            if c[0][0].is_zero() {
                return Err(CoreError::Unsupported("singular chart matrix".into()));
            }
            Ok(vec![vec![c[0][0].inv()]])
        }
        2 | 3 => {
            let det = det_small(c);
            if det.is_zero() {
                return Err(CoreError::Unsupported("singular chart matrix".into()));
            }
            let dinv = det.inv();
            let mut out = vec![vec![GaussianRational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    // cofactor expansion, transposed
                    let minor = minor_det(c, j, i);
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    out[i][j] = &(&minor * &GaussianRational::from_int(sign)) * &dinv;
                }
            }
            Ok(out)
        }
        _ => Err(CoreError::Unsupported("chart inversion implemented for n <= 3".into())),
    }
}

fn det_small(c: &[Vec<GaussianRational>]) -> GaussianRational {
    match c.len() {
        1 => c[0][0].clone(),
        2 => &(&c[0][0] * &c[1][1]) - &(&c[0][1] * &c[1][0]),
        3 => {
            let mut det = GaussianRational::zero();
            for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
                let m = minor_det(c, 0, j);
                det = &det + &(&(&c[0][j] * &m) * &GaussianRational::from_int(sign));
            }
            det
        }
        _ => unreachable!(),
    }
}

fn minor_det(c: &[Vec<GaussianRational>], row: usize, col: usize) -> GaussianRational {
    let n = c.len();
    let sub: Vec<Vec<GaussianRational>> = (0..n)
        .filter(|&i| i != row)
        .map(|i| {
            (0..n)
                .filter(|&j| j != col)
                .map(|j| c[i][j].clone())
                .collect()
        })
        .collect();
    match sub.len() {
        1 => sub[0][0].clone(),
        2 => det_small(&sub),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarStyle;

    /// Fields of the parabolic-cylinder symmetry with symbolic `b`.
    fn sample_basis() -> LieAlgebraBasis {
        let n = 3;
        let b = Scalar::param_b();
        let mut l12 = AffineVectorField::zero(n);
        l12.a[1][0] = Scalar::one(); // L12 |> x2 = x1
        let mut l13 = AffineVectorField::zero(n);
        l13.a[2][0] = Scalar::one(); // L13 |> x3 = x1
        l13.t[0] = b.clone(); // L13 |> x1 = b
        let mut l23 = AffineVectorField::zero(n);
        l23.t[1] = b; // L23 |> x2 = b
        let mut basis = LieAlgebraBasis::new();
        basis.insert("L12", l12);
        basis.insert("L13", l13);
        basis.insert("L23", l23);
        basis.declare_bracket("L13", "L12", vec![(Scalar::one(), "L23".into())]);
        basis.declare_bracket("L12", "L23", vec![]);
        basis.declare_bracket("L13", "L23", vec![]);
        basis
    }

    #[test]
    fn bracket_and_jacobi() {
        let basis = sample_basis();
        assert!(basis.bracket_table_check().unwrap().is_empty());
        assert!(basis.jacobi_check());
    }

    #[test]
    fn action_is_a_derivation() {
        let basis = sample_basis();
        let n = 3;
        let l13 = basis.get("L13").unwrap();
        // L13 |> (x3)^2 = 2 x1 x3
        let sq = AlgebraElement::x(n, 2).pow(2).unwrap();
        let img = l13.act(&sq);
        let expected = AlgebraElement::x(n, 0)
            .normal_mul(&AlgebraElement::x(n, 2))
            .unwrap()
            .scale(&Scalar::from_int(2));
        assert_eq!(img, expected);
        // action annihilates the unit
        assert!(l13.act(&AlgebraElement::one(n)).is_zero());
    }

    #[test]
    fn action_commutes_with_exterior_derivative() {
        let basis = sample_basis();
        let n = 3;
        for name in ["L12", "L13", "L23"] {
            let g = basis.get(name).unwrap();
            let h = AlgebraElement::x(n, 0)
                .pow(2)
                .unwrap()
                .add(&AlgebraElement::x(n, 2).normal_mul(&AlgebraElement::x(n, 1)).unwrap());
            let lhs = g.act(&h.exterior_derivative().unwrap());
            let rhs = g.act(&h).exterior_derivative().unwrap();
            assert_eq!(lhs, rhs, "generator {name}");
        }
    }

    #[test]
    fn action_is_lie_morphism() {
        let basis = sample_basis();
        let n = 3;
        let x = basis.get("L12").unwrap();
        let y = basis.get("L13").unwrap();
        let probe = AlgebraElement::x(n, 0)
            .normal_mul(&AlgebraElement::del(n, 1))
            .unwrap()
            .add(&AlgebraElement::xi(n, 2).normal_mul(&AlgebraElement::x(n, 2)).unwrap());
        let lhs = x.lie_bracket(y).act(&probe);
        let rhs = x.act(&y.act(&probe)).sub(&y.act(&x.act(&probe)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tangency_and_dependence_for_a_quadric() {
        // f = 1/2 x1^2 - b x3 - c
        let n = 3;
        let f = AlgebraElement::x(n, 0)
            .pow(2)
            .unwrap()
            .scale(&Scalar::from_ratio(1, 2))
            .sub(&AlgebraElement::x(n, 2).scale(&Scalar::param_b()))
            .sub(&AlgebraElement::scalar(n, Scalar::param_c()));
        let basis = sample_basis();
        for name in ["L12", "L13", "L23"] {
            assert!(tangency_check(basis.get(name).unwrap(), &f).unwrap(), "{name}");
        }
        assert!(dependence_relation_check(&f).unwrap());
        assert!(quadric_bracket_check(&f).unwrap());
        // the dilation is not strictly tangent
        let mut d = AffineVectorField::zero(n);
        for i in 0..n {
            d.a[i][i] = Scalar::one();
        }
        assert!(!tangency_check(&d, &f).unwrap());
    }

    #[test]
    fn field_element_round_trip() {
        let basis = sample_basis();
        let l13 = basis.get("L13").unwrap();
        let elem = l13.as_element();
        assert_eq!(elem.render(VarStyle::X), "x1*d3 + b*d1");
        let back = AffineVectorField::try_from_element(&elem).unwrap();
        assert_eq!(&back, l13);
    }

    #[test]
    fn matrix_inverse_small() {
        let c = vec![
            vec![GaussianRational::from_int(1), GaussianRational::from_int(-1), GaussianRational::zero()],
            vec![GaussianRational::from_int(1), GaussianRational::from_int(1), GaussianRational::zero()],
            vec![GaussianRational::zero(), GaussianRational::zero(), GaussianRational::from_int(1)],
        ];
        let inv = invert_matrix(&c).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut sum = GaussianRational::zero();
                for k in 0..3 {
                    sum = &sum + &(&c[i][k] * &inv[k][j]);
                }
                let expect = if i == j { GaussianRational::one() } else { GaussianRational::zero() };
                assert_eq!(sum, expect);
            }
        }
    }
}
