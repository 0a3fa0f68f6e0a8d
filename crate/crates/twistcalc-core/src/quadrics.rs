//! Catalog-driven quadric families, their twists, and table verification.
//!
//! The built-in catalog (`catalog/families.tcat`) declares each quadric family
//! — defining polynomial, tangent symmetry generators, bracket table — and,
//! per twist, the working chart, the twist legs and every reference row the
//! engine is expected to reproduce: deformed products, commutation relations,
//! generator realizations, quotient relations, involutions, coproducts and
//! antipodes.  This module parses that catalog, builds the algebraic objects
//! (validating tangency, bracket tables, Jacobi, the quadric bracket identity
//! and chart transports along the way), and replays every row against the
//! engine, producing a [`Report`].
//!
//! It also carries the quotient-algebra machinery: reduction modulo the
//! defining polynomial (a single-divisor graded-lexicographic division, exact
//! because the ideal is generated by a central element whose deformed
//! multiples coincide with its classical ones) and the dimension counts of
//! the degree-filtered slices of free and quotient algebras.

use crate::algebra::{AlgebraElement, BasisWord, VarStyle};
use crate::error::{CoreError, Result};
use crate::expr::{self, rational_sqrt, EvalEnv, Expr};
use crate::report::Report;
use crate::scalar::{GaussianRational, Rational, Scalar};
use crate::symmetry::{
    conjugate_field, dependence_relation_check, invert_matrix, quadric_bracket_check,
    tangency_check, AffineVectorField, LieAlgebraBasis,
};
use crate::twist::{OpExpr, TwistContext, TwistKind};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::ops::Mul;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// Catalog data model
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParamMode {
    /// Stays symbolic; may be bound to a rational for display/evaluation.
    Free,
    /// Must be a square of a rational; bound numerically at build time so the
    /// catalog can use its square root as a coefficient.
    Square,
}

#[derive(Clone, Debug)]
pub struct FamilyDecl {
    pub name: String,
    pub dim: usize,
    pub style: VarStyle,
    pub params: Vec<(String, ParamMode)>,
    pub fc_src: String,
    pub gens: Vec<(String, String)>,
    pub brackets: Vec<(String, String, String)>,
    pub line: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QTarget {
    Fc,
    Dfc,
    Zero,
}

#[derive(Clone, Debug)]
pub enum Row {
    /// Reference value for a deformed atom pair.
    XRow { left: String, right: String, src: String, line: usize },
    /// Exhaustive check of every atom pair without an `XRow`.
    Sweep { phase: bool, line: usize },
    /// Identity that must hold.
    CRow { lhs: String, rhs: String, line: usize },
    /// Tabulated candidate expected NOT to hold; recorded informationally.
    VRow { id: String, lhs: String, rhs: String, line: usize },
    /// Identity that must hold, reported informationally.
    IRow { id: String, lhs: String, rhs: String, line: usize },
    /// Identity that must hold, reported with discrepancy status.
    DRow { id: String, lhs: String, rhs: String, line: usize },
    /// Star-product realization of a generator.
    RRow { gen: String, src: String, line: usize },
    /// Quotient relation against fc, dfc or zero.
    QRow { lhs: String, target: QTarget, line: usize },
    /// Twisted involution value on an atom.
    Inv { atom: String, src: String, line: usize },
    /// Deformed coproduct (tensor expression).
    Copr { gen: String, src: String, line: usize },
    /// Deformed antipode (operator expression).
    Anti { gen: String, src: String, line: usize },
    /// Tabulated antipode candidate expected to FAIL the axiom.
    AntiVar { gen: String, src: String, line: usize },
}

#[derive(Clone, Debug)]
pub struct TwistDecl {
    pub family: String,
    pub name: String,
    pub kind_tokens: Vec<String>,
    pub chart: VarStyle,
    pub ymaps: Vec<(String, String)>,
    pub ygens: Vec<(String, String)>,
    pub yfields: Vec<(String, String)>,
    pub ychecks: Vec<(String, String)>,
    pub ybrackets: Vec<(String, String, String)>,
    pub yfc_src: Option<String>,
    pub require_czero: bool,
    pub atoms: Vec<String>,
    pub rows: Vec<Row>,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub families: Vec<FamilyDecl>,
    pub twists: Vec<TwistDecl>,
}

fn cerr(line: usize, msg: impl Into<String>) -> CoreError {
    CoreError::Catalog { line, msg: msg.into() }
}

/// Validate that a row expression at least parses, so malformed catalog lines
/// surface at load time with their line number.
fn check_parses(src: &str, line: usize) -> Result<()> {
    expr::parse(src).map_err(|e| cerr(line, format!("bad expression `{}`: {}", src, e)))?;
    Ok(())
}

fn split_once_on(s: &str, pat: &str, line: usize, what: &str) -> Result<(String, String)> {
    match s.split_once(pat) {
        Some((a, b)) => Ok((a.trim().to_string(), b.trim().to_string())),
        None => Err(cerr(line, format!("expected `{}` in {} row", pat, what))),
    }
}

fn parse_style(tok: &str, line: usize) -> Result<VarStyle> {
    match tok {
        "x" => Ok(VarStyle::X),
        "y" => Ok(VarStyle::Y),
        other => Err(cerr(line, format!("unknown chart/style `{}`", other))),
    }
}

/// Parse catalog text into its data model.  Purely syntactic; semantic
/// validation happens when families and twists are built.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    enum Block {
        Top,
        Family(FamilyDecl),
        Twist(TwistDecl),
    }
    let mut cat = Catalog::default();
    let mut block = Block::Top;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (head, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (trimmed, ""),
        };
        match &mut block {
            Block::Top => match head {
                "version" => {
                    if rest != "1" {
                        return Err(cerr(line, format!("unsupported catalog version `{}`", rest)));
                    }
                }
                "family" => {
                    if rest.is_empty() || rest.split_whitespace().count() != 1 {
                        return Err(cerr(line, "family declaration needs exactly one name"));
                    }
                    block = Block::Family(FamilyDecl {
                        name: rest.to_string(),
                        dim: 0,
                        style: VarStyle::X,
                        params: Vec::new(),
                        fc_src: String::new(),
                        gens: Vec::new(),
                        brackets: Vec::new(),
                        line,
                    });
                }
                "twist" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(cerr(line, "twist declaration needs `twist <family> <name>`"));
                    }
                    block = Block::Twist(TwistDecl {
                        family: toks[0].to_string(),
                        name: toks[1].to_string(),
                        kind_tokens: Vec::new(),
                        chart: VarStyle::X,
                        ymaps: Vec::new(),
                        ygens: Vec::new(),
                        yfields: Vec::new(),
                        ychecks: Vec::new(),
                        ybrackets: Vec::new(),
                        yfc_src: None,
                        require_czero: false,
                        atoms: Vec::new(),
                        rows: Vec::new(),
                        line,
                    });
                }
                other => return Err(cerr(line, format!("unexpected top-level keyword `{}`", other))),
            },
            Block::Family(fam) => match head {
                "dim" => {
                    fam.dim = rest
                        .parse()
                        .map_err(|_| cerr(line, format!("bad dimension `{}`", rest)))?;
                }
                "style" => fam.style = parse_style(rest, line)?,
                "param" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    let mode = match toks.as_slice() {
                        [_, "free"] => ParamMode::Free,
                        [_, "square"] => ParamMode::Square,
                        _ => return Err(cerr(line, "param needs `param <name> free|square`")),
                    };
                    fam.params.push((toks[0].to_string(), mode));
                }
                "fc" => {
                    let (_, src) = split_once_on(trimmed, "=", line, "fc")?;
                    check_parses(&src, line)?;
                    fam.fc_src = src;
                }
                "gen" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "gen")?;
                    check_parses(&src, line)?;
                    fam.gens.push((lhs, src));
                }
                "bracket" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "bracket")?;
                    let names: Vec<&str> = lhs.split_whitespace().collect();
                    if names.len() != 2 {
                        return Err(cerr(line, "bracket needs two generator names"));
                    }
                    check_parses(&src, line)?;
                    fam.brackets
                        .push((names[0].to_string(), names[1].to_string(), src));
                }
                "end" => {
                    let fam = std::mem::replace(
                        fam,
                        FamilyDecl {
                            name: String::new(),
                            dim: 0,
                            style: VarStyle::X,
                            params: Vec::new(),
                            fc_src: String::new(),
                            gens: Vec::new(),
                            brackets: Vec::new(),
                            line: 0,
                        },
                    );
                    if fam.dim == 0 {
                        return Err(cerr(line, "family block is missing `dim`"));
                    }
                    if fam.fc_src.is_empty() {
                        return Err(cerr(line, "family block is missing `fc`"));
                    }
                    cat.families.push(fam);
                    block = Block::Top;
                }
                other => return Err(cerr(line, format!("unexpected keyword `{}` in family block", other))),
            },
            Block::Twist(tw) => match head {
                "kind" => {
                    tw.kind_tokens = rest.split_whitespace().map(str::to_string).collect();
                    if tw.kind_tokens.len() != 3 {
                        return Err(cerr(line, "kind needs `kind <shape> <leg> <leg>`"));
                    }
                }
                "chart" => tw.chart = parse_style(rest, line)?,
                "ymap" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "ymap")?;
                    check_parses(&src, line)?;
                    tw.ymaps.push((lhs, src));
                }
                "ygen" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "ygen")?;
                    check_parses(&src, line)?;
                    tw.ygens.push((lhs, src));
                }
                "yfield" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "yfield")?;
                    check_parses(&src, line)?;
                    tw.yfields.push((lhs, src));
                }
                "ycheck" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "ycheck")?;
                    check_parses(&src, line)?;
                    tw.ychecks.push((lhs, src));
                }
                "ybracket" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "ybracket")?;
                    let names: Vec<&str> = lhs.split_whitespace().collect();
                    if names.len() != 2 {
                        return Err(cerr(line, "ybracket needs two generator names"));
                    }
                    check_parses(&src, line)?;
                    tw.ybrackets
                        .push((names[0].to_string(), names[1].to_string(), src));
                }
                "yfc" => {
                    let (_, src) = split_once_on(trimmed, "=", line, "yfc")?;
                    check_parses(&src, line)?;
                    tw.yfc_src = Some(src);
                }
                "require-czero" => tw.require_czero = true,
                "atoms" => {
                    tw.atoms = rest.split_whitespace().map(str::to_string).collect();
                }
                "xrow" => {
                    let (lhs, src) = split_once_on(rest, "=", line, "xrow")?;
                    let names: Vec<&str> = lhs.split_whitespace().collect();
                    if names.len() != 2 {
                        return Err(cerr(line, "xrow needs two atom names"));
                    }
                    check_parses(&src, line)?;
                    tw.rows.push(Row::XRow {
                        left: names[0].to_string(),
                        right: names[1].to_string(),
                        src,
                        line,
                    });
                }
                "sweep" => {
                    let phase = match rest {
                        "plain" => false,
                        "phase" => true,
                        other => return Err(cerr(line, format!("unknown sweep mode `{}`", other))),
                    };
                    tw.rows.push(Row::Sweep { phase, line });
                }
                "crow" => {
                    let (lhs, rhs) = split_once_on(rest, "==", line, "crow")?;
                    check_parses(&lhs, line)?;
                    check_parses(&rhs, line)?;
                    tw.rows.push(Row::CRow { lhs, rhs, line });
                }
                "vrow" | "irow" | "drow" => {
                    let (id, eq) = split_once_on(rest, ":", line, head)?;
                    let (lhs, rhs) = split_once_on(&eq, "==", line, head)?;
                    check_parses(&lhs, line)?;
                    check_parses(&rhs, line)?;
                    let row = match head {
                        "vrow" => Row::VRow { id, lhs, rhs, line },
                        "irow" => Row::IRow { id, lhs, rhs, line },
                        _ => Row::DRow { id, lhs, rhs, line },
                    };
                    tw.rows.push(row);
                }
                "rrow" => {
                    let (gen, src) = split_once_on(rest, "=", line, "rrow")?;
                    check_parses(&src, line)?;
                    tw.rows.push(Row::RRow { gen, src, line });
                }
                "qrow" => {
                    let (lhs, target) = split_once_on(rest, "==", line, "qrow")?;
                    check_parses(&lhs, line)?;
                    let target = match target.as_str() {
                        "fc" => QTarget::Fc,
                        "dfc" => QTarget::Dfc,
                        "zero" => QTarget::Zero,
                        other => {
                            return Err(cerr(line, format!("qrow target must be fc|dfc|zero, got `{}`", other)))
                        }
                    };
                    tw.rows.push(Row::QRow { lhs, target, line });
                }
                "inv" => {
                    let (atom, src) = split_once_on(rest, "=", line, "inv")?;
                    check_parses(&src, line)?;
                    tw.rows.push(Row::Inv { atom, src, line });
                }
                "copr" => {
                    let (gen, src) = split_once_on(rest, "=", line, "copr")?;
                    check_parses(&src, line)?;
                    tw.rows.push(Row::Copr { gen, src, line });
                }
                "anti" => {
                    let (gen, src) = split_once_on(rest, "=", line, "anti")?;
                    check_parses(&src, line)?;
                    tw.rows.push(Row::Anti { gen, src, line });
                }
                "antivar" => {
                    let (gen, src) = split_once_on(rest, "=", line, "antivar")?;
                    check_parses(&src, line)?;
                    tw.rows.push(Row::AntiVar { gen, src, line });
                }
                "end" => {
                    let tw = std::mem::replace(
                        tw,
                        TwistDecl {
                            family: String::new(),
                            name: String::new(),
                            kind_tokens: Vec::new(),
                            chart: VarStyle::X,
                            ymaps: Vec::new(),
                            ygens: Vec::new(),
                            yfields: Vec::new(),
                            ychecks: Vec::new(),
                            ybrackets: Vec::new(),
                            yfc_src: None,
                            require_czero: false,
                            atoms: Vec::new(),
                            rows: Vec::new(),
                            line: 0,
                        },
                    );
                    if tw.kind_tokens.is_empty() {
                        return Err(cerr(line, "twist block is missing `kind`"));
                    }
                    if tw.atoms.is_empty() {
                        return Err(cerr(line, "twist block is missing `atoms`"));
                    }
                    cat.twists.push(tw);
                    block = Block::Top;
                }
                other => return Err(cerr(line, format!("unexpected keyword `{}` in twist block", other))),
            },
        }
    }
    match block {
        Block::Top => Ok(cat),
        Block::Family(f) => Err(cerr(f.line, format!("family `{}` has no closing `end`", f.name))),
        Block::Twist(t) => Err(cerr(t.line, format!("twist `{}` has no closing `end`", t.name))),
    }
}

/// The built-in catalog, parsed once.
pub fn builtin() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| {
        parse_catalog(include_str!("../catalog/families.tcat"))
            .expect("built-in catalog must parse")
    })
}

// ---------------------------------------------------------------------------
// Parameter binding
// ---------------------------------------------------------------------------

/// User-supplied parameter values (`a`, `b`, `c`), all rational.
#[derive(Clone, Debug, Default)]
pub struct ParamValues {
    pub named: BTreeMap<String, Rational>,
}

impl ParamValues {
    pub fn set(&mut self, name: &str, value: Rational) {
        self.named.insert(name.to_string(), value);
    }

    /// Parse `name=value` bindings as they arrive from a command line.
    pub fn parse_bindings(args: &[String]) -> Result<Self> {
        let mut out = ParamValues::default();
        for arg in args {
            let (name, value) = arg
                .split_once('=')
                .ok_or_else(|| CoreError::BadParamBinding(arg.clone()))?;
            let v = expr::parse_rational(value.trim())
                .map_err(|_| CoreError::BadParamBinding(arg.clone()))?;
            out.set(name.trim(), v);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Family
// ---------------------------------------------------------------------------

/// A built family: defining polynomial, differential, symmetry basis and the
/// numeric parameter scalars the catalog expressions expect.
#[derive(Debug)]
pub struct Family {
    pub name: String,
    pub dim: usize,
    pub style: VarStyle,
    pub scalars: BTreeMap<String, Scalar>,
    pub free_params: Vec<String>,
    pub bind_b: Option<Rational>,
    pub bind_c: Option<Rational>,
    pub fc: AlgebraElement,
    pub dfc: AlgebraElement,
    pub basis: LieAlgebraBasis,
}

impl Family {
    /// Apply any numeric bindings of free parameters to an element for
    /// display/evaluation purposes.
    pub fn bind_element(&self, e: &AlgebraElement) -> AlgebraElement {
        e.bind_params(self.bind_b.as_ref(), self.bind_c.as_ref())
    }
}

/// Sum the scalar content of a degree-zero element.
fn pure_scalar(e: &AlgebraElement) -> Result<Scalar> {
    let mut found = Scalar::zero();
    for (w, s) in e.terms() {
        if w.total_degree() != 0 {
            return Err(CoreError::Unsupported(format!(
                "expected a scalar coefficient, got a degree-{} term",
                w.total_degree()
            )));
        }
        found = s.clone();
    }
    Ok(found)
}

/// A scalar must be a plain Gaussian-rational number (no `nu`, `q`, `b`, `c`).
pub(crate) fn numeric_scalar(s: &Scalar) -> Result<GaussianRational> {
    if s.is_zero() {
        return Ok(GaussianRational::zero());
    }
    match s.single_term() {
        Some((key, v)) if *key == crate::scalar::ScalarKey::ONE => Ok(v.clone()),
        _ => Err(CoreError::Unsupported(format!(
            "expected a numeric coefficient, got {:?}",
            s
        ))),
    }
}

/// Decompose a parsed expression as a linear combination of basis generators.
fn decompose_combo(env: &EvalEnv<'_>, e: &Expr) -> Result<Vec<(Scalar, String)>> {
    fn is_gen(env: &EvalEnv<'_>, name: &str) -> bool {
        env.basis.map(|b| b.contains(name)) == Some(true)
    }
    fn walk(
        env: &EvalEnv<'_>,
        e: &Expr,
        negate: bool,
        out: &mut Vec<(Scalar, String)>,
    ) -> Result<()> {
        let sign = |s: Scalar, negate: bool| {
            if negate {
                s.scale(&GaussianRational::from_int(-1))
            } else {
                s
            }
        };
        match e {
            Expr::Num(r) if r.is_zero() => Ok(()),
            Expr::Neg(inner) => walk(env, inner, !negate, out),
            Expr::Add(a, b) => {
                walk(env, a, negate, out)?;
                walk(env, b, negate, out)
            }
            Expr::Sub(a, b) => {
                walk(env, a, negate, out)?;
                walk(env, b, !negate, out)
            }
            Expr::Atom(g) if is_gen(env, g) => {
                out.push((sign(Scalar::one(), negate), g.clone()));
                Ok(())
            }
            Expr::Mul(a, b) => {
                if let Expr::Atom(g) = &**b {
                    if is_gen(env, g) {
                        let coeff = pure_scalar(&env.eval(a)?)?;
                        out.push((sign(coeff, negate), g.clone()));
                        return Ok(());
                    }
                }
                Err(CoreError::Unsupported(
                    "bracket combination terms must look like `coeff*GEN`".into(),
                ))
            }
            _ => Err(CoreError::Unsupported(
                "bracket combination must be a linear combination of generators".into(),
            )),
        }
    }
    let mut out = Vec::new();
    walk(env, e, false, &mut out)?;
    Ok(out)
}

impl Catalog {
    pub fn family_names(&self) -> Vec<&str> {
        self.families.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn twist_names(&self, family: &str) -> Vec<&str> {
        self.twists
            .iter()
            .filter(|t| t.family == family)
            .map(|t| t.name.as_str())
            .collect()
    }

    fn family_decl(&self, name: &str) -> Result<&FamilyDecl> {
        if name == "i" || name == "ellipsoid" {
            return Err(CoreError::Unsupported(
                "the definite quadric (ellipsoid) is rejected: its symmetry algebra is \
                 compact, so it contains no real two-dimensional solvable subalgebra and \
                 no locally nilpotent or dilation generator — none of the supported twist \
                 shapes can be built from it"
                    .into(),
            ));
        }
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| CoreError::UnknownFamily(name.into()))
    }

    fn twist_decl(&self, family: &str, twist: &str) -> Result<&TwistDecl> {
        self.twists
            .iter()
            .find(|t| t.family == family && t.name == twist)
            .ok_or_else(|| CoreError::UnknownTwist {
                family: family.into(),
                twist: twist.into(),
            })
    }

    /// Build a family, running every structural self-check.
    pub fn build_family(&self, name: &str, params: &ParamValues) -> Result<Family> {
        let decl = self.family_decl(name)?;
        let mut scalars = BTreeMap::new();
        let mut free_params = Vec::new();
        let mut bind_b = None;
        let mut bind_c = None;
        for (pname, mode) in &decl.params {
            match mode {
                ParamMode::Square => {
                    let v = params
                        .named
                        .get(pname)
                        .cloned()
                        .unwrap_or_else(Rational::one);
                    if !v.is_positive() {
                        return Err(CoreError::ParamConstraint {
                            name: pname.clone(),
                            constraint: "must be a positive square".into(),
                        });
                    }
                    let root = rational_sqrt(&v).ok_or_else(|| CoreError::NonSquareParam {
                        name: pname.clone(),
                        value: v.to_string(),
                    })?;
                    scalars.insert(pname.clone(), Scalar::from_rational(v));
                    scalars.insert(format!("sq{}", pname), Scalar::from_rational(root));
                }
                ParamMode::Free => {
                    free_params.push(pname.clone());
                    let bound = params.named.get(pname).cloned();
                    match pname.as_str() {
                        "b" => bind_b = bound,
                        "c" => bind_c = bound,
                        other => {
                            return Err(cerr(
                                decl.line,
                                format!("free parameter `{}` is not supported (use b or c)", other),
                            ))
                        }
                    }
                }
            }
        }
        for k in params.named.keys() {
            if !decl.params.iter().any(|(n, _)| n == k) {
                return Err(CoreError::BadParamBinding(format!(
                    "{}= (family {} has parameters: {})",
                    k,
                    name,
                    decl.params
                        .iter()
                        .map(|(n, _)| n.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
        }

        let mut env = EvalEnv::new(decl.dim, decl.style);
        env.scalars = scalars.clone();
        let fc = env.eval(&expr::parse(&decl.fc_src)?)?;
        if fc
            .terms()
            .any(|(w, _)| w.form_degree() != 0 || w.deriv_degree() != 0)
        {
            return Err(cerr(decl.line, "fc must be a pure coordinate polynomial"));
        }
        let dfc = fc.exterior_derivative()?;

        let mut basis = LieAlgebraBasis::new();
        for (gname, src) in &decl.gens {
            let e = env.eval(&expr::parse(src)?)?;
            let field = AffineVectorField::try_from_element(&e)?;
            if !tangency_check(&field, &fc)? {
                return Err(cerr(
                    decl.line,
                    format!("generator {} of family {} is not tangent to fc", gname, name),
                ));
            }
            basis.insert(gname, field);
        }

        let combos = {
            let mut benv = EvalEnv::new(decl.dim, decl.style);
            benv.scalars = scalars.clone();
            benv.basis = Some(&basis);
            let mut combos = Vec::new();
            for (l, r, src) in &decl.brackets {
                let combo = decompose_combo(&benv, &expr::parse(src)?)
                    .map_err(|e| cerr(decl.line, format!("bracket [{}, {}]: {}", l, r, e)))?;
                combos.push((l.clone(), r.clone(), combo));
            }
            combos
        };
        for (l, r, combo) in combos {
            basis.declare_bracket(&l, &r, combo);
        }
        let failures = basis.bracket_table_check()?;
        if !failures.is_empty() {
            return Err(cerr(
                decl.line,
                format!("bracket table of family {}: {}", name, failures.join("; ")),
            ));
        }
        if !basis.jacobi_check() {
            return Err(cerr(decl.line, format!("family {} fails the Jacobi identity", name)));
        }
        if !quadric_bracket_check(&fc)? {
            return Err(cerr(
                decl.line,
                format!("family {} fails the quadric bracket identity", name),
            ));
        }
        if !dependence_relation_check(&fc)? {
            return Err(cerr(
                decl.line,
                format!("family {} fails the gradient dependence relation", name),
            ));
        }

        Ok(Family {
            name: decl.name.clone(),
            dim: decl.dim,
            style: decl.style,
            scalars,
            free_params,
            bind_b,
            bind_c,
            fc,
            dfc,
            basis,
        })
    }

    /// Build a twist bundle over a built family, validating chart data.
    pub fn build_twist(&self, family: &Family, twist: &str) -> Result<TwistBundle> {
        let decl = self.twist_decl(&family.name, twist)?;
        let kind = match decl
            .kind_tokens
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .as_slice()
        {
            ["abelian", l, r] => TwistKind::Abelian { left: l.to_string(), right: r.to_string() },
            ["jordanian", h, e] => TwistKind::Jordanian { h: h.to_string(), e: e.to_string() },
            ["dilation", d, h] => {
                TwistKind::DilationAbelian { d: d.to_string(), h: h.to_string() }
            }
            _ => return Err(cerr(decl.line, "unknown twist kind")),
        };
        if decl.require_czero {
            if let Some(c) = &family.bind_c {
                if !c.is_zero() {
                    return Err(CoreError::ParamConstraint {
                        name: "c".into(),
                        constraint: format!("must be 0 for twist {} (got {})", decl.name, c),
                    });
                }
            }
        }

        let n = family.dim;
        let (basis, fc_chart, chart_map) = match decl.chart {
            VarStyle::X => {
                if !decl.ymaps.is_empty() {
                    return Err(cerr(decl.line, "x-chart twists must not declare ymap rows"));
                }
                (family.basis.clone(), family.fc.clone(), None)
            }
            VarStyle::Y => {
                if decl.ymaps.len() != n {
                    return Err(cerr(
                        decl.line,
                        format!("chart y needs exactly {} ymap rows", n),
                    ));
                }
                // Chart matrix: y^i = sum_j C[i][j] x^j.
                let mut c = Vec::with_capacity(n);
                {
                    let mut xenv = EvalEnv::new(n, family.style);
                    xenv.scalars = family.scalars.clone();
                    for (k, (yname, src)) in decl.ymaps.iter().enumerate() {
                        let expected = format!("y{}", k + 1);
                        if yname != &expected {
                            return Err(cerr(
                                decl.line,
                                format!("ymap rows must be ordered; expected {}, got {}", expected, yname),
                            ));
                        }
                        let e = xenv.eval(&expr::parse(src)?)?;
                        let mut row = vec![GaussianRational::zero(); n];
                        for (w, s) in e.terms() {
                            if w.total_degree() != 1 || w.coord_degree() != 1 {
                                return Err(cerr(
                                    decl.line,
                                    format!("ymap {} must be linear in the coordinates", yname),
                                ));
                            }
                            let j = w.q.iter().position(|&q| q == 1).expect("coordinate word");
                            row[j] = numeric_scalar(s)?;
                        }
                        c.push(row);
                    }
                }
                let c_inv = invert_matrix(&c)?;
                let map = ChartMap { c, c_inv };

                let mut ybasis = LieAlgebraBasis::new();
                {
                    let mut fenv = EvalEnv::new(n, family.style);
                    fenv.scalars = family.scalars.clone();
                    fenv.basis = Some(&family.basis);
                    for (gname, src) in &decl.ygens {
                        let e = fenv.eval(&expr::parse(src)?)?;
                        let xfield = AffineVectorField::try_from_element(&e)?;
                        let yfield = conjugate_field(&xfield, &map.c, &map.c_inv)?;
                        ybasis.insert(gname, yfield);
                    }
                }
                {
                    let mut yenv = EvalEnv::new(n, VarStyle::Y);
                    yenv.scalars = family.scalars.clone();
                    for (gname, src) in &decl.yfields {
                        let e = yenv.eval(&expr::parse(src)?)?;
                        ybasis.insert(gname, AffineVectorField::try_from_element(&e)?);
                    }
                    for (gname, src) in &decl.ychecks {
                        let e = yenv.eval(&expr::parse(src)?)?;
                        let expected = AffineVectorField::try_from_element(&e)?;
                        if ybasis.get(gname)? != &expected {
                            return Err(cerr(
                                decl.line,
                                format!(
                                    "chart transport of {} disagrees with its declared chart form",
                                    gname
                                ),
                            ));
                        }
                    }
                }
                let combos = {
                    let mut benv = EvalEnv::new(n, VarStyle::Y);
                    benv.scalars = family.scalars.clone();
                    benv.basis = Some(&ybasis);
                    let mut combos = Vec::new();
                    for (l, r, src) in &decl.ybrackets {
                        let combo = decompose_combo(&benv, &expr::parse(src)?)
                            .map_err(|e| cerr(decl.line, format!("ybracket [{}, {}]: {}", l, r, e)))?;
                        combos.push((l.clone(), r.clone(), combo));
                    }
                    combos
                };
                for (l, r, combo) in combos {
                    ybasis.declare_bracket(&l, &r, combo);
                }
                let failures = ybasis.bracket_table_check()?;
                if !failures.is_empty() {
                    return Err(cerr(
                        decl.line,
                        format!("chart bracket table of twist {}: {}", decl.name, failures.join("; ")),
                    ));
                }
                if !ybasis.jacobi_check() {
                    return Err(cerr(
                        decl.line,
                        format!("chart basis of twist {} fails the Jacobi identity", decl.name),
                    ));
                }

                // Transport fc and compare with the declared chart form.
                let fc_chart = chart_transport(&family.fc, &map)?;
                if let Some(yfc_src) = &decl.yfc_src {
                    let mut yenv = EvalEnv::new(n, VarStyle::Y);
                    yenv.scalars = family.scalars.clone();
                    let declared = yenv.eval(&expr::parse(yfc_src)?)?;
                    if fc_chart != declared {
                        return Err(cerr(
                            decl.line,
                            format!(
                                "transported fc disagrees with yfc: {} vs {}",
                                fc_chart.render(VarStyle::Y),
                                declared.render(VarStyle::Y)
                            ),
                        ));
                    }
                }
                (ybasis, fc_chart, Some(map))
            }
        };

        let fc_final = if decl.require_czero {
            fc_chart.bind_params(None, Some(&Rational::zero()))
        } else {
            fc_chart
        };
        let dfc_final = fc_final.exterior_derivative()?;

        let bundle = TwistBundle {
            family: family.name.clone(),
            twist: decl.name.clone(),
            dim: n,
            chart: decl.chart,
            kind,
            scalars: family.scalars.clone(),
            basis,
            fc: fc_final,
            dfc: dfc_final,
            atoms: decl.atoms.clone(),
            rows: decl.rows.clone(),
            chart_map,
            require_czero: decl.require_czero,
        };
        // Sanity: every atom must resolve, and the twist context must build.
        {
            let ctx = bundle.context()?;
            let mut env = bundle.env();
            env.twist = Some(&ctx);
            for a in &bundle.atoms {
                env.eval(&Expr::Atom(a.clone()))
                    .map_err(|e| cerr(decl.line, format!("atom `{}`: {}", a, e)))?;
            }
        }
        Ok(bundle)
    }
}

// ---------------------------------------------------------------------------
// Twist bundle
// ---------------------------------------------------------------------------

/// Linear chart data: `y = C x`, with `C_inv` its inverse.
pub struct ChartMap {
    pub c: Vec<Vec<GaussianRational>>,
    pub c_inv: Vec<Vec<GaussianRational>>,
}

/// Rewrite an element from the family chart into the twist chart.
pub fn chart_transport(e: &AlgebraElement, map: &ChartMap) -> Result<AlgebraElement> {
    let n = map.c.len();
    let mut x_img = Vec::with_capacity(n);
    let mut xi_img = Vec::with_capacity(n);
    let mut d_img = Vec::with_capacity(n);
    for i in 0..n {
        // x^i = sum_j Cinv[i][j] y^j, and differentials transform the same way;
        // derivations transform contravariantly: d_i = sum_j C[j][i] dt_j.
        let mut x_acc = AlgebraElement::zero(n);
        let mut xi_acc = AlgebraElement::zero(n);
        let mut d_acc = AlgebraElement::zero(n);
        for j in 0..n {
            x_acc = x_acc.add(&AlgebraElement::x(n, j).scale_gauss(&map.c_inv[i][j]));
            xi_acc = xi_acc.add(&AlgebraElement::xi(n, j).scale_gauss(&map.c_inv[i][j]));
            d_acc = d_acc.add(&AlgebraElement::del(n, j).scale_gauss(&map.c[j][i]));
        }
        x_img.push(x_acc);
        xi_img.push(xi_acc);
        d_img.push(d_acc);
    }
    e.substitute(&x_img, &xi_img, &d_img)
}

/// A twist over a family, fully materialized in its working chart: twist kind,
/// chart basis, transported defining polynomial, atoms and reference rows.
pub struct TwistBundle {
    pub family: String,
    pub twist: String,
    pub dim: usize,
    pub chart: VarStyle,
    pub kind: TwistKind,
    pub scalars: BTreeMap<String, Scalar>,
    pub basis: LieAlgebraBasis,
    pub fc: AlgebraElement,
    pub dfc: AlgebraElement,
    pub atoms: Vec<String>,
    pub rows: Vec<Row>,
    pub chart_map: Option<ChartMap>,
    pub require_czero: bool,
}

impl TwistBundle {
    pub fn context(&self) -> Result<TwistContext<'_>> {
        TwistContext::new(&self.basis, self.kind.clone())
    }

    /// Evaluation environment for this bundle's chart; the caller binds the
    /// twist context when star products are needed.
    pub fn env(&self) -> EvalEnv<'_> {
        let mut env = EvalEnv::new(self.dim, self.chart);
        env.scalars = self.scalars.clone();
        env.basis = Some(&self.basis);
        env
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.family, self.twist)
    }
}

/// Per-word weight of a diagonal vector field (the eigenvalue of the word
/// under the field's action): coordinates and differentials contribute the
/// diagonal entry, derivations its negative.
fn field_weight(name: &str, f: &AffineVectorField, w: &BasisWord) -> Result<Rational> {
    let n = f.dim();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        if !f.translation()[i].is_zero() {
            return Err(CoreError::NotDiagonal(name.into()));
        }
        for j in 0..n {
            if i != j && !f.matrix()[i][j].is_zero() {
                return Err(CoreError::NotDiagonal(name.into()));
            }
        }
        let v = numeric_scalar(&f.matrix()[i][i])?;
        if !v.im.is_zero() {
            return Err(CoreError::NotDiagonal(name.into()));
        }
        diag.push(v.re);
    }
    let mut weight = Rational::zero();
    for i in 0..n {
        let mut count = Rational::from_integer(w.q[i].into()) - Rational::from_integer(w.r[i].into());
        if w.p & (1 << i) != 0 {
            count += Rational::one();
        }
        weight += &diag[i] * count;
    }
    Ok(weight)
}

/// Reference product for the `sweep phase` rule: per word pair, the plain
/// product scaled by `q^(-d(u) h(v)/2)` where `d` and `h` are the weights
/// under the two diagonal twist legs.
pub fn phase_product(
    bundle: &TwistBundle,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<AlgebraElement> {
    let (dname, hname) = match &bundle.kind {
        TwistKind::DilationAbelian { d, h } => (d.as_str(), h.as_str()),
        _ => {
            return Err(CoreError::Unsupported(
                "phase products are defined for dilation twists only".into(),
            ))
        }
    };
    let df = bundle.basis.get(dname)?;
    let hf = bundle.basis.get(hname)?;
    let mut out = AlgebraElement::zero(a.dim());
    for (wa, sa) in a.terms() {
        let d_w = field_weight(dname, df, wa)?;
        for (wb, sb) in b.terms() {
            let h_w = field_weight(hname, hf, wb)?;
            let prod = &d_w * &h_w;
            if !prod.is_integer() {
                return Err(CoreError::FractionalPhase(prod.to_string()));
            }
            let e: i64 = prod
                .to_integer()
                .try_into()
                .map_err(|_| CoreError::FractionalPhase(prod.to_string()))?;
            if e % 2 != 0 {
                return Err(CoreError::FractionalPhase(format!("q^({}/2)", -e)));
            }
            let phase = Scalar::q_pow(-e / 2);
            let left = AlgebraElement::from_word(wa.clone(), sa.mul(&phase));
            let right = AlgebraElement::from_word(wb.clone(), sb.clone());
            out = out.add(&left.normal_mul(&right)?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coproduct parsing
// ---------------------------------------------------------------------------

fn contains_tensor(e: &Expr) -> bool {
    match e {
        Expr::Num(_) | Expr::Atom(_) => false,
        Expr::Neg(a) => contains_tensor(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            contains_tensor(a) || contains_tensor(b)
        }
        Expr::Pow(a, _) => contains_tensor(a),
        Expr::Call(name, args) => name == "tensor" || args.iter().any(contains_tensor),
    }
}

/// Parse a coproduct source (`tensor(A, B) + coeff*tensor(C, D) - ...`) into
/// operator leg pairs; scalar coefficients are folded into the first leg.
pub fn parse_coproduct(env: &EvalEnv<'_>, src: &str) -> Result<Vec<(OpExpr, OpExpr)>> {
    fn term(
        env: &EvalEnv<'_>,
        e: &Expr,
        negate: bool,
        out: &mut Vec<(OpExpr, OpExpr)>,
    ) -> Result<()> {
        // Flatten the multiplication spine; exactly one factor must be the
        // tensor call, everything else is a scalar coefficient.
        fn factors<'e>(e: &'e Expr, acc: &mut Vec<&'e Expr>) {
            if let Expr::Mul(a, b) = e {
                factors(a, acc);
                factors(b, acc);
            } else {
                acc.push(e);
            }
        }
        let mut fs = Vec::new();
        factors(e, &mut fs);
        let mut coeffs: Vec<&Expr> = Vec::new();
        let mut tensor: Option<(&Expr, &Expr)> = None;
        for f in fs {
            match f {
                Expr::Call(name, args) if name == "tensor" => {
                    if tensor.is_some() {
                        return Err(CoreError::Unsupported(
                            "coproduct term with more than one tensor factor".into(),
                        ));
                    }
                    match args.as_slice() {
                        [l, r] => tensor = Some((l, r)),
                        _ => {
                            return Err(CoreError::Unsupported(
                                "tensor(...) takes exactly two arguments".into(),
                            ))
                        }
                    }
                }
                other => {
                    if contains_tensor(other) {
                        return Err(CoreError::Unsupported(
                            "tensor(...) must be a top-level product factor".into(),
                        ));
                    }
                    coeffs.push(other);
                }
            }
        }
        let (l, r) = tensor.ok_or_else(|| {
            CoreError::Unsupported("every coproduct term needs a tensor(...) factor".into())
        })?;
        let mut leg1_expr = l.clone();
        for cexpr in coeffs.into_iter().rev() {
            leg1_expr = Expr::Mul(Box::new(cexpr.clone()), Box::new(leg1_expr));
        }
        if negate {
            leg1_expr = Expr::Neg(Box::new(leg1_expr));
        }
        out.push((env.eval_operator(&leg1_expr)?, env.eval_operator(r)?));
        Ok(())
    }
    fn walk(
        env: &EvalEnv<'_>,
        e: &Expr,
        negate: bool,
        out: &mut Vec<(OpExpr, OpExpr)>,
    ) -> Result<()> {
        match e {
            Expr::Add(a, b) => {
                walk(env, a, negate, out)?;
                walk(env, b, negate, out)
            }
            Expr::Sub(a, b) => {
                walk(env, a, negate, out)?;
                walk(env, b, !negate, out)
            }
            Expr::Neg(a) => walk(env, a, !negate, out),
            other => term(env, other, negate, out),
        }
    }
    let ast = expr::parse(src)?;
    let mut out = Vec::new();
    walk(env, &ast, false, &mut out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

fn render(e: &AlgebraElement, style: VarStyle) -> String {
    e.render(style)
}

/// Replay every reference row of a bundle against the engine.
pub fn verify_twist(bundle: &TwistBundle) -> Result<Report> {
    let ctx = bundle.context()?;
    let mut env = bundle.env();
    env.twist = Some(&ctx);
    let style = bundle.chart;
    let prefix = |kind: &str, key: &str| {
        format!("{}:{}:{}/{}", bundle.family, bundle.twist, kind, key)
    };

    let mut atom_elems: Vec<(String, AlgebraElement)> = Vec::new();
    for a in &bundle.atoms {
        atom_elems.push((a.clone(), env.eval(&Expr::Atom(a.clone()))?));
    }

    let mut report = Report::new();
    let mut xrow_pairs: BTreeSet<(String, String)> = BTreeSet::new();
    let mut sweep_mode: Option<bool> = None;
    let mut coproducts: BTreeMap<String, Vec<(OpExpr, OpExpr)>> = BTreeMap::new();
    let mut antipodes: BTreeMap<String, OpExpr> = BTreeMap::new();
    let mut anti_order: Vec<String> = Vec::new();
    let mut antivars: Vec<(String, OpExpr)> = Vec::new();
    let mut crow_idx = 0usize;
    let mut qrow_idx = 0usize;

    let lookup = |name: &str, elems: &[(String, AlgebraElement)]| -> Result<AlgebraElement> {
        if let Some((_, e)) = elems.iter().find(|(n, _)| n == name) {
            Ok(e.clone())
        } else {
            env.eval(&Expr::Atom(name.to_string()))
        }
    };

    for row in &bundle.rows {
        match row {
            Row::XRow { left, right, src, .. } => {
                let l = lookup(left, &atom_elems)?;
                let r = lookup(right, &atom_elems)?;
                let got = ctx.star(&l, &r)?;
                let want = env.eval(&expr::parse(src)?)?;
                let id = prefix("xrow", &format!("{},{}", left, right));
                let detail = format!("star({}, {}) = {}", left, right, src);
                if got == want {
                    report.pass(id, detail);
                } else {
                    report.fail(
                        id,
                        detail,
                        Some(render(&want, style)),
                        Some(render(&got, style)),
                    );
                }
                xrow_pairs.insert((left.clone(), right.clone()));
            }
            Row::Sweep { phase, .. } => sweep_mode = Some(*phase),
            Row::CRow { lhs, rhs, .. } => {
                crow_idx += 1;
                let l = env.eval(&expr::parse(lhs)?)?;
                let r = env.eval(&expr::parse(rhs)?)?;
                let id = prefix("crow", &format!("{:02}", crow_idx));
                let detail = format!("{} == {}", lhs, rhs);
                if l == r {
                    report.pass(id, detail);
                } else {
                    report.fail(id, detail, Some(render(&r, style)), Some(render(&l, style)));
                }
            }
            Row::VRow { id, lhs, rhs, .. } => {
                let l = env.eval(&expr::parse(lhs)?)?;
                let r = env.eval(&expr::parse(rhs)?)?;
                let cid = prefix("vrow", id);
                let detail = format!("tabulated candidate `{} == {}`", lhs, rhs);
                if l != r {
                    report.info(
                        cid,
                        format!("{} does not hold (recorded; engine value kept)", detail),
                        Some(render(&r, style)),
                        Some(render(&l, style)),
                    );
                } else {
                    report.fail(
                        cid,
                        format!("{} unexpectedly holds", detail),
                        Some(render(&r, style)),
                        Some(render(&l, style)),
                    );
                }
            }
            Row::IRow { id, lhs, rhs, .. } => {
                let l = env.eval(&expr::parse(lhs)?)?;
                let r = env.eval(&expr::parse(rhs)?)?;
                let cid = prefix("irow", id);
                let detail = format!("{} == {}", lhs, rhs);
                if l == r {
                    report.info(
                        cid,
                        format!("{} (informational record)", detail),
                        None,
                        Some(render(&l, style)),
                    );
                } else {
                    report.fail(cid, detail, Some(render(&r, style)), Some(render(&l, style)));
                }
            }
            Row::DRow { id, lhs, rhs, .. } => {
                let l = env.eval(&expr::parse(lhs)?)?;
                let r = env.eval(&expr::parse(rhs)?)?;
                let cid = prefix("drow", id);
                let detail = format!(
                    "engine value recorded where the tabulated reference is self-referential: {} == {}",
                    lhs, rhs
                );
                if l == r {
                    report.discrepancy(cid, detail, Some(render(&r, style)), Some(render(&l, style)));
                } else {
                    report.fail(cid, detail, Some(render(&r, style)), Some(render(&l, style)));
                }
            }
            Row::RRow { gen, src, .. } => {
                let got = bundle.basis.get(gen)?.as_element();
                let want = env.eval(&expr::parse(src)?)?;
                let id = prefix("rrow", gen);
                let detail = format!("{} = {}", gen, src);
                if got == want {
                    report.pass(id, detail);
                } else {
                    report.fail(id, detail, Some(render(&want, style)), Some(render(&got, style)));
                }
            }
            Row::QRow { lhs, target, .. } => {
                qrow_idx += 1;
                let got = env.eval(&expr::parse(lhs)?)?;
                let (want, tname) = match target {
                    QTarget::Fc => (bundle.fc.clone(), "fc"),
                    QTarget::Dfc => (bundle.dfc.clone(), "dfc"),
                    QTarget::Zero => (AlgebraElement::zero(bundle.dim), "zero"),
                };
                let id = prefix("qrow", &format!("{:02}", qrow_idx));
                let detail = format!("{} == {}", lhs, tname);
                if got == want {
                    report.pass(id, detail);
                } else {
                    report.fail(id, detail, Some(render(&want, style)), Some(render(&got, style)));
                }
            }
            Row::Inv { atom, src, .. } => {
                let a = lookup(atom, &atom_elems)?;
                let got = ctx.twisted_involution(&a)?;
                let want = env.eval(&expr::parse(src)?)?;
                let id = prefix("inv", atom);
                let detail = format!("deformed involution of {} = {}", atom, src);
                if got == want {
                    report.pass(id, detail);
                } else {
                    report.fail(id, detail, Some(render(&want, style)), Some(render(&got, style)));
                }
            }
            Row::Copr { gen, src, .. } => {
                let legs = parse_coproduct(&env, src)?;
                let pairs: Vec<(AlgebraElement, AlgebraElement)> = atom_elems
                    .iter()
                    .flat_map(|(_, a)| {
                        atom_elems.iter().map(move |(_, b)| (a.clone(), b.clone()))
                    })
                    .collect();
                let failures = ctx.twisted_leibniz_check(gen, &legs, &pairs)?;
                let id = prefix("copr", gen);
                let detail = format!(
                    "deformed Leibniz rule for {} on {} atom pairs",
                    gen,
                    pairs.len()
                );
                if failures.is_empty() {
                    report.pass(id, detail);
                } else {
                    report.fail(
                        id,
                        detail,
                        None,
                        Some(failures.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
                    );
                }
                coproducts.insert(gen.clone(), legs);
            }
            Row::Anti { gen, src, .. } => {
                let op = env.eval_operator(&expr::parse(src)?)?;
                antipodes.insert(gen.clone(), op);
                anti_order.push(gen.clone());
            }
            Row::AntiVar { gen, src, .. } => {
                let op = env.eval_operator(&expr::parse(src)?)?;
                antivars.push((gen.clone(), op));
            }
        }
    }

    // Exhaustive atom-pair sweep over everything the xrows left out.
    if let Some(phase) = sweep_mode {
        let sweep_pairs: Vec<(&str, &AlgebraElement, &str, &AlgebraElement)> = atom_elems
            .iter()
            .flat_map(|(lname, le)| {
                atom_elems
                    .iter()
                    .filter(|(rname, _)| {
                        !xrow_pairs.contains(&(lname.clone(), rname.clone()))
                    })
                    .map(move |(rname, re)| (lname.as_str(), le, rname.as_str(), re))
            })
            .collect();
        let pairs = sweep_pairs.len();
        let outcomes = crate::parallel::map_items(
            &sweep_pairs,
            |&(lname, le, rname, re)| -> Result<Option<String>> {
                let got = ctx.star(le, re)?;
                let want = if phase {
                    phase_product(bundle, le, re)?
                } else {
                    le.normal_mul(re)?
                };
                Ok(if got != want {
                    Some(format!(
                        "star({}, {}): got {}, want {}",
                        lname,
                        rname,
                        render(&got, style),
                        render(&want, style)
                    ))
                } else {
                    None
                })
            },
        );
        let mut mismatches = Vec::new();
        for outcome in outcomes {
            if let Some(m) = outcome? {
                mismatches.push(m);
            }
        }
        let id = prefix("sweep", if phase { "phase" } else { "plain" });
        let rule = if phase {
            "the diagonal phase rule"
        } else {
            "the undeformed product"
        };
        if mismatches.is_empty() {
            report.pass(
                id,
                format!("{} atom pairs without a reference row match {}", pairs, rule),
            );
        } else {
            report.fail(
                id,
                format!(
                    "{} of {} atom pairs disagree with {}",
                    mismatches.len(),
                    pairs,
                    rule
                ),
                None,
                Some(mismatches.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
            );
        }
    }

    // Antipode axiom for every generator with a declared coproduct+antipode.
    let samples = antipode_samples(bundle, &atom_elems)?;
    for gen in &anti_order {
        let Some(legs) = coproducts.get(gen) else {
            continue;
        };
        let failures = ctx.antipode_check(legs, &antipodes, &samples)?;
        let id = prefix("anti", gen);
        let detail = format!(
            "antipode axiom for {} on {} sample elements",
            gen,
            samples.len()
        );
        if failures.is_empty() {
            report.pass(id, detail);
        } else {
            report.fail(
                id,
                detail,
                None,
                Some(failures.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
            );
        }
    }

    // Tabulated antipode candidates expected to fail the axiom.
    for (gen, op) in antivars {
        let id = prefix("antivar", &gen);
        let Some(legs) = coproducts.get(&gen) else {
            report.fail(id, format!("antivar {} has no coproduct", gen), None, None);
            continue;
        };
        let mut table = antipodes.clone();
        table.insert(gen.clone(), op);
        let failures = ctx.antipode_check(legs, &table, &samples)?;
        if failures.is_empty() {
            report.fail(
                id,
                format!("tabulated antipode candidate for {} unexpectedly satisfies the axiom", gen),
                None,
                None,
            );
        } else {
            report.discrepancy(
                id,
                format!(
                    "tabulated antipode candidate for {} fails the axiom on {} of {} samples (recorded; the corrected antipode above passes)",
                    gen,
                    failures.len(),
                    samples.len()
                ),
                Some("zero residual".into()),
                Some(failures.into_iter().take(2).collect::<Vec<_>>().join(" | ")),
            );
        }
    }

    Ok(report)
}

/// Sample elements for antipode-axiom checks: the atoms plus a few quadratic
/// words so the check exercises the Leibniz structure of the axiom.
fn antipode_samples(
    bundle: &TwistBundle,
    atom_elems: &[(String, AlgebraElement)],
) -> Result<Vec<AlgebraElement>> {
    let n = bundle.dim;
    let mut out: Vec<AlgebraElement> = atom_elems.iter().map(|(_, e)| e.clone()).collect();
    let x1 = AlgebraElement::x(n, 0);
    let x2 = AlgebraElement::x(n, 1);
    out.push(x1.normal_mul(&x1)?);
    out.push(x1.normal_mul(&x2)?);
    out.push(AlgebraElement::xi(n, 0).normal_mul(&x1)?);
    out.push(AlgebraElement::del(n, 0).normal_mul(&x1)?);
    Ok(out)
}

/// Verify one family: build it, then replay every twist's tables.
pub fn verify_family(catalog: &Catalog, name: &str, params: &ParamValues) -> Result<Report> {
    let family = catalog.build_family(name, params)?;
    let mut report = Report::new();
    report.pass(
        format!("{}:family/build", name),
        format!(
            "family {}: {} generators tangent to fc; bracket table, Jacobi, quadric bracket and dependence identities verified",
            name,
            family.basis.names().len()
        ),
    );
    for tname in catalog.twist_names(name) {
        let bundle = catalog.build_twist(&family, tname)?;
        report.pass(
            format!("{}:{}:build", name, tname),
            format!(
                "twist {} on chart {}: legs resolved, chart transport validated",
                bundle.kind.label(),
                match bundle.chart {
                    VarStyle::X => "x",
                    VarStyle::Y => "y",
                }
            ),
        );
        report.merge(verify_twist(&bundle)?);
    }
    Ok(report)
}

/// Verify every family in the catalog.
pub fn verify_all(catalog: &Catalog, params: &ParamValues) -> Result<Report> {
    let mut report = Report::new();
    for name in catalog.family_names() {
        report.merge(verify_family(catalog, name, params)?);
    }
    Ok(report)
}

/// The two engine-vs-reference divergences the catalog deliberately records.
pub const SANCTIONED_DISCREPANCIES: [&str; 2] = [
    "a:abelian:drow/printed-self-identity",
    "a:abelian:antivar/L12",
];

// ---------------------------------------------------------------------------
// Centrality
// ---------------------------------------------------------------------------

/// Coordinate monomials of total degree <= `max_deg` (as exponent vectors and
/// elements).
pub fn coord_monomials(n: usize, max_deg: u32) -> Vec<(Vec<u32>, AlgebraElement)> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut exps = Vec::new();
    for d in 0..=max_deg {
        let mut layer = Vec::new();
        rec(n, 0, d, &mut Vec::new(), &mut layer);
        layer.retain(|e| e.iter().sum::<u32>() == d);
        layer.sort();
        exps.extend(layer);
    }
    exps.into_iter()
        .map(|e| {
            let mut w = BasisWord::unit(n);
            w.q = e.clone();
            (e, AlgebraElement::from_word(w, Scalar::one()))
        })
        .collect()
}

/// Centrality of the defining polynomial in the deformed function-and-form
/// algebra: star products with `fc` collapse to (phase-scaled) plain products
/// and the braided commutator vanishes identically.
pub fn centrality_report(bundle: &TwistBundle) -> Result<Report> {
    let ctx = bundle.context()?;
    let style = bundle.chart;
    let n = bundle.dim;
    let fc = &bundle.fc;
    let is_phase = matches!(bundle.kind, TwistKind::DilationAbelian { .. });
    let prefix = |key: &str| format!("{}:{}:centrality/{}", bundle.family, bundle.twist, key);

    let mut samples: Vec<(String, AlgebraElement)> = coord_monomials(n, 3)
        .into_iter()
        .map(|(e, m)| (format!("x^{:?}", e), m))
        .collect();
    for i in 0..n {
        for j in 0..n {
            let m = AlgebraElement::xi(n, i).normal_mul(&AlgebraElement::x(n, j))?;
            samples.push((format!("xi{}*x{}", i + 1, j + 1), m));
        }
        samples.push((format!("xi{}", i + 1), AlgebraElement::xi(n, i)));
    }

    let mut report = Report::new();
    let outcomes = crate::parallel::map_items(
        &samples,
        |(name, v)| -> Result<(Option<String>, Option<String>, Option<String>)> {
            let left = ctx.star(fc, v)?;
            let left_want = if is_phase {
                phase_product(bundle, fc, v)?
            } else {
                fc.normal_mul(v)?
            };
            let bad_l = (left != left_want)
                .then(|| format!("fc (*) {}: {}", name, render(&left, style)));
            let right = ctx.star(v, fc)?;
            let right_want = v.normal_mul(fc)?;
            let bad_r = (right != right_want)
                .then(|| format!("{} (*) fc: {}", name, render(&right, style)));
            let braided = ctx.braided_commutator(fc, v)?;
            let bad_b = (!braided.is_zero())
                .then(|| format!("[fc, {}]: {}", name, render(&braided, style)));
            Ok((bad_l, bad_r, bad_b))
        },
    );
    let mut bad_left = Vec::new();
    let mut bad_right = Vec::new();
    let mut bad_braided = Vec::new();
    for outcome in outcomes {
        let (l, r, b) = outcome?;
        bad_left.extend(l);
        bad_right.extend(r);
        bad_braided.extend(b);
    }
    let count = samples.len();
    let left_rule = if is_phase {
        "the diagonal phase multiple of the plain product"
    } else {
        "the plain product"
    };
    if bad_left.is_empty() {
        report.pass(
            prefix("star-left"),
            format!("fc (*) v equals {} on {} samples", left_rule, count),
        );
    } else {
        report.fail(
            prefix("star-left"),
            format!("fc (*) v deviates on {} of {} samples", bad_left.len(), count),
            None,
            Some(bad_left.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }
    if bad_right.is_empty() {
        report.pass(
            prefix("star-right"),
            format!("v (*) fc equals the plain product on {} samples", count),
        );
    } else {
        report.fail(
            prefix("star-right"),
            format!("v (*) fc deviates on {} of {} samples", bad_right.len(), count),
            None,
            Some(bad_right.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }
    if bad_braided.is_empty() {
        report.pass(
            prefix("braided"),
            format!("braided commutator [fc, v] vanishes on {} samples", count),
        );
    } else {
        report.fail(
            prefix("braided"),
            format!(
                "braided commutator [fc, v] nonzero on {} of {} samples",
                bad_braided.len(),
                count
            ),
            None,
            Some(bad_braided.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Associativity
// ---------------------------------------------------------------------------

/// Deformed-product associativity on a deterministic corpus: every ordered
/// triple of catalog atoms (coordinates, differentials, derivations and
/// symmetry generators), plus every ordered triple of coordinate monomials
/// whose degrees sum to at most 3.  The cocycle identity of a twist makes
/// the deformed product associative; this checks the series implementation,
/// not the theorem, so mismatches are reported with the offending triple.
pub fn associativity_report(bundle: &TwistBundle) -> Result<Report> {
    let ctx = bundle.context()?;
    let env = bundle.env();
    let n = bundle.dim;
    let style = bundle.chart;
    let prefix = |key: &str| format!("{}:{}:assoc/{}", bundle.family, bundle.twist, key);

    let mut atoms: Vec<(String, AlgebraElement)> = Vec::new();
    for a in &bundle.atoms {
        atoms.push((a.clone(), env.eval(&Expr::Atom(a.clone()))?));
    }
    let monos: Vec<(String, u32, AlgebraElement)> = coord_monomials(n, 3)
        .into_iter()
        .map(|(e, m)| (format!("x^{:?}", e), e.iter().sum::<u32>(), m))
        .collect();

    let mut triples: Vec<(&str, &AlgebraElement, &str, &AlgebraElement, &str, &AlgebraElement)> =
        Vec::new();
    for (an, ae) in &atoms {
        for (bn, be) in &atoms {
            for (cn, ce) in &atoms {
                triples.push((an, ae, bn, be, cn, ce));
            }
        }
    }
    let atom_triples = triples.len();
    for (an, ad, ae) in &monos {
        for (bn, bd, be) in &monos {
            for (cn, cd, ce) in &monos {
                if ad + bd + cd <= 3 {
                    triples.push((an, ae, bn, be, cn, ce));
                }
            }
        }
    }
    let mono_triples = triples.len() - atom_triples;

    let outcomes = crate::parallel::map_items(
        &triples,
        |&(an, ae, bn, be, cn, ce)| -> Result<Option<String>> {
            let left = ctx.star(&ctx.star(ae, be)?, ce)?;
            let right = ctx.star(ae, &ctx.star(be, ce)?)?;
            Ok(if left != right {
                Some(format!(
                    "({} (*) {}) (*) {} = {}  vs  {} (*) ({} (*) {}) = {}",
                    an,
                    bn,
                    cn,
                    render(&left, style),
                    an,
                    bn,
                    cn,
                    render(&right, style)
                ))
            } else {
                None
            })
        },
    );
    let mut mismatches = Vec::new();
    for outcome in outcomes {
        if let Some(m) = outcome? {
            mismatches.push(m);
        }
    }

    let mut report = Report::new();
    if mismatches.is_empty() {
        report.pass(
            prefix("triples"),
            format!(
                "((u (*) v) (*) w == u (*) (v (*) w) on {} ordered triples ({} atom triples, {} coordinate-monomial triples of total degree <= 3)",
                triples.len(),
                atom_triples,
                mono_triples
            ),
        );
    } else {
        report.fail(
            prefix("triples"),
            format!(
                "associativity fails on {} of {} triples",
                mismatches.len(),
                triples.len()
            ),
            None,
            Some(mismatches.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }
    Ok(report)
}

/// Negative control: an abelian twist whose left leg is NOT tangent to the
/// defining polynomial must break centrality, and the engine must see it.
pub fn broken_centrality_control(catalog: &Catalog) -> Result<Report> {
    let family = catalog.build_family("a", &ParamValues::default())?;
    let n = family.dim;
    let mut basis = LieAlgebraBasis::new();
    // P1 = d_1 (a plain translation, NOT tangent to fc) and T = b d_2 (the
    // tangent translation generator); they commute, so the twist is valid.
    let p1 = AffineVectorField::try_from_element(&AlgebraElement::del(n, 0))?;
    let t = family.basis.get("L23")?.clone();
    basis.insert("P1", p1.clone());
    basis.insert("T", t);
    basis.declare_bracket("P1", "T", Vec::new());
    let failures = basis.bracket_table_check()?;
    let mut report = Report::new();
    if !failures.is_empty() {
        report.fail(
            "control:centrality/pair-commutes",
            "control twist legs unexpectedly fail to commute",
            None,
            Some(failures.join("; ")),
        );
        return Ok(report);
    }
    if tangency_check(&p1, &family.fc)? {
        report.fail(
            "control:centrality/leg-non-tangent",
            "control leg P1 unexpectedly tangent to fc",
            None,
            None,
        );
        return Ok(report);
    }
    report.pass(
        "control:centrality/leg-non-tangent",
        "control leg P1 = d1 is not tangent to fc, as intended",
    );
    let ctx = TwistContext::new(
        &basis,
        TwistKind::Abelian { left: "P1".into(), right: "T".into() },
    )?;
    let v = AlgebraElement::x(n, 1);
    let l = ctx.star(&family.fc, &v)?;
    let r = ctx.star(&v, &family.fc)?;
    if l != r {
        report.pass(
            "control:centrality/detects-broken",
            "with a non-tangent twist leg, fc (*) x2 != x2 (*) fc — loss of centrality is detected",
        );
    } else {
        report.fail(
            "control:centrality/detects-broken",
            "fc unexpectedly stayed central under the broken twist",
            None,
            Some(render(&l, VarStyle::X)),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Ideal reduction and dimension counts
// ---------------------------------------------------------------------------

fn grlex_cmp(a: &BasisWord, b: &BasisWord) -> Ordering {
    match a.coord_degree().cmp(&b.coord_degree()) {
        Ordering::Equal => a.q.cmp(&b.q),
        o => o,
    }
}

/// The graded-lexicographically largest coordinate word of `fc` and its
/// (numeric) coefficient.
fn lead_monomial(fc: &AlgebraElement) -> Result<(BasisWord, GaussianRational)> {
    let mut best: Option<(&BasisWord, &Scalar)> = None;
    for (w, s) in fc.terms() {
        if w.form_degree() != 0 || w.deriv_degree() != 0 {
            return Err(CoreError::NotPolynomial("defining polynomial".into()));
        }
        if best.map(|(bw, _)| grlex_cmp(w, bw) == Ordering::Greater) != Some(false) {
            best = Some((w, s));
        }
    }
    let (w, s) = best.ok_or_else(|| CoreError::Unsupported("defining polynomial is zero".into()))?;
    Ok((w.clone(), numeric_scalar(s)?))
}

fn divisible(w: &BasisWord, lead: &BasisWord) -> bool {
    w.q.iter().zip(lead.q.iter()).all(|(a, b)| a >= b)
}

/// Canonical remainder of `e` modulo the principal ideal generated by `fc`:
/// graded-lexicographic division by the single divisor `fc`.  Form factors
/// pass through untouched; derivative factors are not supported.
pub fn reduce_mod_ideal(e: &AlgebraElement, fc: &AlgebraElement) -> Result<AlgebraElement> {
    let (lead_w, lead_c) = lead_monomial(fc)?;
    let lead_inv = lead_c.inv();
    let n = fc.dim();
    let mut cur = e.clone();
    for _ in 0..100_000 {
        // Largest reducible word.
        let mut target: Option<(BasisWord, Scalar)> = None;
        for (w, s) in cur.terms() {
            if w.deriv_degree() != 0 {
                return Err(CoreError::Unsupported(
                    "ideal reduction is defined on the function-and-form sector".into(),
                ));
            }
            if !divisible(w, &lead_w) {
                continue;
            }
            if target.as_ref().map(|(tw, _)| grlex_cmp(w, tw) == Ordering::Greater) != Some(false) {
                target = Some((w.clone(), s.clone()));
            }
        }
        let Some((w, s)) = target else {
            return Ok(cur);
        };
        let mut u = BasisWord::unit(n);
        u.p = w.p;
        for i in 0..n {
            u.q[i] = w.q[i] - lead_w.q[i];
        }
        let factor = AlgebraElement::from_word(u, s.scale(&lead_inv));
        cur = cur.sub(&factor.normal_mul(fc)?);
    }
    Err(CoreError::SafetyCap { cap: 100_000 })
}

/// Dimension certificates for the degree-filtered slices: the deformed
/// monomial basis specializes to the classical one, principal-ideal reduction
/// is canonical, and the quotient slice dimensions come out at `(q+1)^2`.
pub fn hilbert_report(bundle: &TwistBundle, qmax: u32) -> Result<Report> {
    let ctx = bundle.context()?;
    let n = bundle.dim;
    let fc = &bundle.fc;
    let style = bundle.chart;
    let prefix = |key: &str| format!("{}:{}:hilbert/{}", bundle.family, bundle.twist, key);
    let mut report = Report::new();

    let (lead_w, _) = lead_monomial(fc)?;
    let monomials = coord_monomials(n, qmax);

    // 1. Star monomials specialize to the classical monomial basis: the
    // change-of-basis matrix between deformed and plain monomials is the
    // identity at nu = 0, q = 1, so the free slice keeps its dimension.
    let mut free_bad = Vec::new();
    for (exps, m) in &monomials {
        let mut factors: Vec<AlgebraElement> = Vec::new();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                factors.push(AlgebraElement::x(n, i));
            }
        }
        if factors.is_empty() {
            factors.push(AlgebraElement::one(n));
        }
        let refs: Vec<&AlgebraElement> = factors.iter().collect();
        let star_m = ctx.star_many(&refs)?;
        let d = star_m.degrees();
        let degree_ok = d.q <= exps.iter().sum::<u32>() && d.p == 0 && d.r == 0;
        if star_m.classical_part() != *m || !degree_ok {
            free_bad.push(format!(
                "x^{:?}: classical part {}",
                exps,
                render(&star_m.classical_part(), style)
            ));
        }
    }
    if free_bad.is_empty() {
        report.pass(
            prefix("free-basis"),
            format!(
                "all {} deformed coordinate monomials up to degree {} specialize to the classical monomial basis (identity change of basis at nu=0, q=1)",
                monomials.len(),
                qmax
            ),
        );
    } else {
        report.fail(
            prefix("free-basis"),
            format!("{} deformed monomials fail to specialize", free_bad.len()),
            None,
            Some(free_bad.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }

    // 2. The deformed right multiples of fc are exactly the plain ones (the
    // symmetry legs annihilate fc), so the deformed principal ideal equals
    // the classical one and classical division computes deformed reduction.
    let mut exact_bad = Vec::new();
    for (exps, m) in coord_monomials(n, 2) {
        let got = ctx.star(&m, fc)?;
        let want = m.normal_mul(fc)?;
        if got != want {
            exact_bad.push(format!("x^{:?} (*) fc = {}", exps, render(&got, style)));
        }
        let left = ctx.star(fc, &m)?;
        if !reduce_mod_ideal(&left, fc)?.is_zero() {
            exact_bad.push(format!("fc (*) x^{:?} outside the ideal", exps));
        }
    }
    if exact_bad.is_empty() {
        report.pass(
            prefix("ideal-exact"),
            "deformed multiples of fc coincide with classical multiples (right) and stay in the classical ideal (left)",
        );
    } else {
        report.fail(
            prefix("ideal-exact"),
            format!("{} deformed multiples escape the classical ideal", exact_bad.len()),
            None,
            Some(exact_bad.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }

    // 3. Reduction is canonical: members reduce to zero, standard monomials
    // are fixed points, and every monomial reduces to standard support.
    let mut red_bad = Vec::new();
    let mut standard_per_degree = vec![0usize; (qmax + 1) as usize];
    for (exps, m) in &monomials {
        let deg: u32 = exps.iter().sum();
        let w = m.terms().next().map(|(w, _)| w.clone()).expect("monomial word");
        let is_standard = !divisible(&w, &lead_w);
        if is_standard {
            for d in deg..=qmax {
                standard_per_degree[d as usize] += 1;
            }
            if reduce_mod_ideal(m, fc)? != *m {
                red_bad.push(format!("standard x^{:?} not a fixed point", exps));
            }
        } else {
            let r = reduce_mod_ideal(m, fc)?;
            if r.terms().any(|(w, _)| divisible(w, &lead_w)) {
                red_bad.push(format!("x^{:?} reduces outside the standard span", exps));
            }
        }
        if deg + 2 <= qmax {
            let member = m.normal_mul(fc)?;
            if !reduce_mod_ideal(&member, fc)?.is_zero() {
                red_bad.push(format!("x^{:?} * fc does not reduce to zero", exps));
            }
        }
    }
    if red_bad.is_empty() {
        report.pass(
            prefix("reduction"),
            "principal-ideal reduction is canonical: members vanish, standard monomials are fixed, all remainders are standard",
        );
    } else {
        report.fail(
            prefix("reduction"),
            format!("{} reduction anomalies", red_bad.len()),
            None,
            Some(red_bad.into_iter().take(3).collect::<Vec<_>>().join(" | ")),
        );
    }

    // 4. Slice dimensions: free = C(q+3,3), quotient = (q+1)^2.
    let mut dim_bad = Vec::new();
    let mut free_dims = Vec::new();
    let mut quot_dims = Vec::new();
    for q in 0..=qmax {
        let free = monomials
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= q)
            .count();
        let free_want = ((q + 1) * (q + 2) * (q + 3) / 6) as usize;
        let quot = standard_per_degree[q as usize];
        let quot_want = ((q + 1) * (q + 1)) as usize;
        free_dims.push(free.to_string());
        quot_dims.push(quot.to_string());
        if free != free_want {
            dim_bad.push(format!("free slice at degree {}: {} != {}", q, free, free_want));
        }
        if quot != quot_want {
            dim_bad.push(format!("quotient slice at degree {}: {} != {}", q, quot, quot_want));
        }
    }
    if dim_bad.is_empty() {
        report.pass(
            prefix("dimensions"),
            format!(
                "slice dimensions through degree {}: free {}, quotient {}",
                qmax,
                free_dims.join(","),
                quot_dims.join(",")
            ),
        );
    } else {
        report.fail(
            prefix("dimensions"),
            "slice dimension mismatch",
            None,
            Some(dim_bad.join(" | ")),
        );
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_parses_and_lists_families() {
        let cat = builtin();
        assert_eq!(cat.family_names(), vec!["a", "b", "c", "d", "e", "fgh"]);
        assert_eq!(cat.twist_names("a"), vec!["abelian"]);
        assert_eq!(cat.twist_names("c"), vec!["abelian", "abelian-b0"]);
        assert_eq!(cat.twist_names("fgh"), vec!["jordanian", "dilation"]);
    }

    #[test]
    fn catalog_errors_carry_line_numbers() {
        let bad = "version 1\nfamily z\ndim 3\nfc = x1^\nend\n";
        match parse_catalog(bad) {
            Err(CoreError::Catalog { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected catalog error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn ellipsoid_is_rejected_with_reason() {
        let err = builtin()
            .build_family("i", &ParamValues::default())
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("compact"), "unexpected message: {}", msg);
    }

    #[test]
    fn unknown_family_and_twist_errors() {
        let cat = builtin();
        assert!(matches!(
            cat.build_family("zz", &ParamValues::default()),
            Err(CoreError::UnknownFamily(_))
        ));
        let fam = cat.build_family("a", &ParamValues::default()).unwrap();
        assert!(matches!(
            cat.build_twist(&fam, "jordanian"),
            Err(CoreError::UnknownTwist { .. })
        ));
    }

    #[test]
    fn square_params_must_be_squares() {
        let cat = builtin();
        let mut p = ParamValues::default();
        p.set("a", crate::scalar::Rational::from_integer(2.into()));
        assert!(matches!(
            cat.build_family("b", &p),
            Err(CoreError::NonSquareParam { .. })
        ));
        p.set("a", crate::scalar::Rational::from_integer(4.into()));
        assert!(cat.build_family("b", &p).is_ok());
    }

    #[test]
    fn family_a_twist_builds_and_verifies() {
        let cat = builtin();
        let fam = cat.build_family("a", &ParamValues::default()).unwrap();
        let bundle = cat.build_twist(&fam, "abelian").unwrap();
        let report = verify_twist(&bundle).unwrap();
        assert!(
            report.is_clean(&SANCTIONED_DISCREPANCIES),
            "{}",
            report.render_text(false)
        );
    }

    #[test]
    fn reduction_canonical_on_family_a() {
        let cat = builtin();
        let fam = cat.build_family("a", &ParamValues::default()).unwrap();
        let n = fam.dim;
        // x1^2 reduces to 2(b x3 + c) since fc = x1^2/2 - b x3 - c.
        let x1sq = AlgebraElement::x(n, 0).pow(2).unwrap();
        let r = reduce_mod_ideal(&x1sq, &fam.fc).unwrap();
        let env = EvalEnv::new(n, VarStyle::X);
        let want = env.eval(&expr::parse("2*b*x3 + 2*c").unwrap()).unwrap();
        assert_eq!(r, want);
        let member = x1sq.normal_mul(&fam.fc).unwrap();
        assert!(reduce_mod_ideal(&member, &fam.fc).unwrap().is_zero());
    }
}
