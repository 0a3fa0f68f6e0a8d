//! LaTeX emission for expressions, calculus elements and check listings.
//!
//! The text renderers in the core stay close to the input grammar
//! (`x1*x2 - i*nu*b^2`); this module re-renders the same canonical term
//! order in display style (`x^{1} x^{2} - i \nu b^{2}`), so `--format latex`
//! reproduces relation blocks as they are conventionally typeset.  Everything
//! here is purely syntactic: no evaluation, no simplification.

use num_traits::{One, Signed, Zero};
use twistcalc_core::algebra::{AlgebraElement, BasisWord, VarStyle};
use twistcalc_core::expr::Expr;
use twistcalc_core::scalar::{GaussianRational, Rational, Scalar, ScalarKey};

/// A rational as an integer or `\tfrac{p}{q}`; the sign stays on the front.
fn rational(r: &Rational) -> String {
    let (mag, sign) = if r.is_negative() {
        (-r.clone(), "-")
    } else {
        (r.clone(), "")
    };
    if mag.denom().is_one() {
        format!("{}{}", sign, mag.numer())
    } else {
        format!("{}\\tfrac{{{}}}{{{}}}", sign, mag.numer(), mag.denom())
    }
}

fn pow_latex(base: &str, exp: i64) -> String {
    if exp == 1 {
        base.to_string()
    } else {
        format!("{}^{{{}}}", base, exp)
    }
}

/// One scalar monomial as `(sign, body)`, mirroring the text renderer's sign
/// conventions: pure real/imaginary coefficients expose their sign, mixed
/// ones stay parenthesized with sign `+1`.
fn scalar_term(key: &ScalarKey, coeff: &GaussianRational) -> (i32, String) {
    let mut symbols = Vec::new();
    if key.nu > 0 {
        symbols.push(pow_latex("\\nu", key.nu as i64));
    }
    if key.q != 0 {
        symbols.push(pow_latex("q", key.q));
    }
    if key.b > 0 {
        symbols.push(pow_latex("b", key.b as i64));
    }
    if key.c > 0 {
        symbols.push(pow_latex("c", key.c as i64));
    }
    let syms = symbols.join(" ");

    let (sign, coeff_str): (i32, Option<String>) = if coeff.im.is_zero() {
        let neg = coeff.re.is_negative();
        let mag = if neg { -coeff.re.clone() } else { coeff.re.clone() };
        let s = if mag.is_one() && !syms.is_empty() {
            None
        } else {
            Some(rational(&mag))
        };
        (if neg { -1 } else { 1 }, s)
    } else if coeff.re.is_zero() {
        let neg = coeff.im.is_negative();
        let mag = if neg { -coeff.im.clone() } else { coeff.im.clone() };
        let s = if mag.is_one() {
            Some("i".into())
        } else {
            Some(format!("{} i", rational(&mag)))
        };
        (if neg { -1 } else { 1 }, s)
    } else {
        let im_part = if coeff.im.is_negative() {
            format!(" - {} i", rational(&-coeff.im.clone()))
        } else {
            format!(" + {} i", rational(&coeff.im))
        };
        (1, Some(format!("({}{})", rational(&coeff.re), im_part)))
    };

    let body = match (coeff_str, syms.is_empty()) {
        (Some(c), true) => c,
        (Some(c), false) => format!("{} {}", c, syms),
        (None, true) => "1".into(),
        (None, false) => syms,
    };
    (sign, body)
}

/// A full scalar; multi-term scalars come back parenthesized with sign `+1`.
fn scalar(s: &Scalar) -> (i32, String) {
    let terms: Vec<(&ScalarKey, &GaussianRational)> = s.terms().collect();
    match terms.as_slice() {
        [] => (1, "0".into()),
        [(key, coeff)] => scalar_term(key, coeff),
        many => {
            let mut out = String::from("\\left(");
            for (idx, (key, coeff)) in many.iter().enumerate() {
                let (sign, body) = scalar_term(key, coeff);
                if idx == 0 {
                    if sign < 0 {
                        out.push('-');
                    }
                } else if sign < 0 {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                out.push_str(&body);
            }
            out.push_str("\\right)");
            (1, out)
        }
    }
}

/// Symbol triple for a chart: coordinate, differential, derivation.
fn chart_symbols(style: VarStyle) -> (&'static str, &'static str, &'static str) {
    match style {
        VarStyle::X => ("x", "\\xi", "\\partial"),
        VarStyle::Y => ("y", "\\eta", "\\tilde{\\partial}"),
    }
}

/// The factors of one basis word in normal order, each already exponentiated.
fn word_factors(w: &BasisWord, style: VarStyle) -> Vec<String> {
    let (xs, xis, ds) = chart_symbols(style);
    let mut out = Vec::new();
    for i in 0..w.dim() {
        if w.p & (1 << i) != 0 {
            out.push(format!("{}^{{{}}}", xis, i + 1));
        }
    }
    for (i, &e) in w.q.iter().enumerate() {
        if e == 1 {
            out.push(format!("{}^{{{}}}", xs, i + 1));
        } else if e > 1 {
            out.push(format!("({}^{{{}}})^{{{}}}", xs, i + 1, e));
        }
    }
    for (i, &e) in w.r.iter().enumerate() {
        if e == 1 {
            out.push(format!("{}_{{{}}}", ds, i + 1));
        } else if e > 1 {
            out.push(format!("{}_{{{}}}^{{{}}}", ds, i + 1, e));
        }
    }
    out
}

/// A calculus element in the canonical term order of the text renderer.
pub fn element(e: &AlgebraElement, style: VarStyle) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut items: Vec<(&BasisWord, &Scalar)> = e.terms().collect();
    items.sort_by(|(wa, _), (wb, _)| {
        (wb.total_degree(), wb.symbol_sequence()).cmp(&(wa.total_degree(), wa.symbol_sequence()))
    });
    let mut out = String::new();
    for (idx, (w, s)) in items.into_iter().enumerate() {
        let word = word_factors(w, style).join(" ");
        let (sign, sbody) = scalar(s);
        let body = if word.is_empty() {
            sbody
        } else if sbody == "1" {
            word
        } else {
            format!("{} {}", sbody, word)
        };
        if idx == 0 {
            if sign < 0 {
                out.push('-');
            }
        } else if sign < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// A generator or scalar name in display form (`L12` -> `L_{12}`,
/// `xi2` -> `\xi^{2}`, `sqa` -> `\sqrt{a}`).
pub fn atom(name: &str, style: VarStyle) -> String {
    match name {
        "i" => return "i".into(),
        "nu" => return "\\nu".into(),
        "q" => return "q".into(),
        "a" | "b" | "c" => return name.into(),
        "sqa" => return "\\sqrt{a}".into(),
        "sqb" => return "\\sqrt{b}".into(),
        "fc" => return "f_c".into(),
        "dfc" => return "\\mathrm{d}f_c".into(),
        "Ep" => return "E'".into(),
        _ => {}
    }
    let (xn, xin, dn) = style.names();
    let (xs, xis, ds) = chart_symbols(style);
    let index_of = |rest: &str| -> Option<usize> { rest.parse::<usize>().ok() };
    // Longest prefix first so `xi1` does not read as `x` + `i1`.
    if let Some(rest) = name.strip_prefix(xin) {
        if let Some(k) = index_of(rest) {
            return format!("{}^{{{}}}", xis, k);
        }
    }
    if let Some(rest) = name.strip_prefix(dn) {
        if let Some(k) = index_of(rest) {
            return format!("{}_{{{}}}", ds, k);
        }
    }
    if let Some(rest) = name.strip_prefix(xn) {
        if let Some(k) = index_of(rest) {
            return format!("{}^{{{}}}", xs, k);
        }
    }
    // Generator names with a numeric tail become subscripted (`L12`, `P3`).
    let tail_start = name
        .char_indices()
        .find(|(_, c)| c.is_ascii_digit())
        .map(|(i, _)| i);
    if let Some(split) = tail_start {
        let (head, tail) = name.split_at(split);
        if !head.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            return format!("{}_{{{}}}", head, tail);
        }
    }
    name.into()
}

/// An expression AST in display form with minimal parenthesization.
///
/// Precedence levels mirror the grammar printer: 0 sums, 1 products, 2 unary
/// minus, 3 powers, 4 atoms.
pub fn expr(e: &Expr, style: VarStyle) -> String {
    fn needs_power_parens(base: &str) -> bool {
        base.contains('^') || base.contains(' ') || base.starts_with('-')
    }
    fn go(e: &Expr, parent: u8, style: VarStyle) -> String {
        let (s, level): (String, u8) = match e {
            Expr::Num(r) => {
                if r.is_negative() {
                    (rational(r), 2)
                } else {
                    (rational(r), 4)
                }
            }
            Expr::Atom(name) => (atom(name, style), 4),
            Expr::Neg(inner) => (format!("-{}", go(inner, 2, style)), 2),
            Expr::Add(a, b) => (
                format!("{} + {}", go(a, 0, style), go(b, 1, style)),
                0,
            ),
            Expr::Sub(a, b) => (
                format!("{} - {}", go(a, 0, style), go(b, 1, style)),
                0,
            ),
            Expr::Mul(a, b) => (
                format!("{} {}", go(a, 1, style), go(b, 2, style)),
                1,
            ),
            Expr::Div(a, b) => (
                format!(
                    "\\frac{{{}}}{{{}}}",
                    go(a, 0, style),
                    go(b, 0, style)
                ),
                4,
            ),
            Expr::Pow(base, exp) => {
                let b = go(base, 4, style);
                let b = if needs_power_parens(&b) {
                    format!("({})", b)
                } else {
                    b
                };
                (format!("{}^{{{}}}", b, exp), 3)
            }
            Expr::Call(name, args) => {
                let arg = |k: usize| go(&args[k], 0, style);
                let rendered = match (name.as_str(), args.len()) {
                    ("star", 2) => {
                        return parenthesize(
                            format!("{} \\star {}", go(&args[0], 2, style), go(&args[1], 2, style)),
                            1,
                            parent,
                        )
                    }
                    ("comm", 2) => format!("\\left[{}, {}\\right]_{{\\star}}", arg(0), arg(1)),
                    ("d", 1) => match &args[0] {
                        Expr::Atom(_) => format!("\\mathrm{{d}}{}", arg(0)),
                        _ => format!("\\mathrm{{d}}\\!\\left({}\\right)", arg(0)),
                    },
                    ("act", 2) => {
                        return parenthesize(
                            format!(
                                "{} \\triangleright {}",
                                go(&args[0], 2, style),
                                go(&args[1], 2, style)
                            ),
                            1,
                            parent,
                        )
                    }
                    ("inv", 1) => format!("\\left({}\\right)^{{*}}", arg(0)),
                    ("tinv", 1) => format!("\\left({}\\right)^{{*_\\star}}", arg(0)),
                    ("geo", 1) => format!("\\left(1 + i \\nu {}\\right)^{{-1}}", arg(0)),
                    ("qexp", 1) => format!("e^{{i \\nu {}}}", arg(0)),
                    ("qexpm", 1) => format!("e^{{-i \\nu {}}}", arg(0)),
                    _ => {
                        let inner: Vec<String> =
                            args.iter().map(|a| go(a, 0, style)).collect();
                        format!("\\mathrm{{{}}}({})", name, inner.join(", "))
                    }
                };
                (rendered, 4)
            }
        };
        parenthesize_at(s, level, parent)
    }
    fn parenthesize_at(s: String, level: u8, parent: u8) -> String {
        if level < parent {
            format!("\\left({}\\right)", s)
        } else {
            s
        }
    }
    fn parenthesize(s: String, level: u8, parent: u8) -> String {
        parenthesize_at(s, level, parent)
    }
    go(e, 0, style)
}

/// Escape a plain string (check ids, details) for use in LaTeX text mode.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '_' | '&' | '%' | '#' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\textbackslash{}"),
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(c),
        }
    }
    out
}
