//! Concrete syntax for theta-curves, knots and manifolds.
//!
//! ```text
//! expr  := term ('*' term)*
//! term  := name | 'tau' label '(' kexpr ')' | 'tauM' '(' mexpr ')' | '1' | '(' expr ')'
//! kexpr := katom ('#' katom)*
//! katom := name | 'flat' '(' mexpr ')' | 'unknot' | '(' kexpr ')'
//! mexpr := matom ('#' matom)*
//! matom := name | 'S3' | '(' mexpr ')'
//! label := '-' | '0' | '+'
//! ```
//!
//! `*` is the vertex product and `#` connected sum. Names resolve through a
//! [`Registry`], so every parsed tree is well-sorted. Whitespace is ignored
//! between tokens.
//!
//! [`parse`] reads a theta-curve expression unless the text plainly denotes
//! a knot (its first atom is a knot name, `flat` or `unknot`) or a manifold
//! (a manifold name or `S3`), in which case it reads that sort instead.

use std::fmt;

use thiserror::Error;

use crate::algebra::{
    flat_knot, tau_label, tau_manifold, GeneratorKind, KnotNF, Label, ManifoldNF, Registry,
    ThetaNF, UElement,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared name `{name}` at {position}")]
    Undeclared { name: String, position: usize },
    #[error("sort mismatch at {position}: {message}")]
    SortMismatch { position: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ThetaExpr {
    Prime(String),
    Product(Vec<ThetaExpr>),
    Tau(Label, KnotExpr),
    TauManifold(ManifoldExpr),
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KnotExpr {
    Prime(String),
    Sum(Vec<KnotExpr>),
    Flat(ManifoldExpr),
    Unknot,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldExpr {
    Prime(String),
    Sum(Vec<ManifoldExpr>),
    S3,
}

/// A parsed expression of any sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Theta(ThetaExpr),
    Knot(KnotExpr),
    Manifold(ManifoldExpr),
}

/// The value of an expression. Knots carry no label until they are placed
/// into a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Theta(ThetaNF),
    Knot(KnotNF),
    Manifold(ManifoldNF),
}

impl Value {
    /// Lifts the value into `U`, labelling a knot with `label`.
    pub fn into_element(self, label: Label) -> UElement {
        match self {
            Value::Theta(t) => UElement::Theta(t),
            Value::Knot(k) => UElement::LabeledKnot(label, k),
            Value::Manifold(m) => UElement::Manifold(m),
        }
    }

    pub fn sort_name(&self) -> &'static str {
        match self {
            Value::Theta(_) => "theta-curve",
            Value::Knot(_) => "knot",
            Value::Manifold(_) => "manifold",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Theta(t) => write!(f, "{t}"),
            Value::Knot(k) => write!(f, "{k}"),
            Value::Manifold(m) => write!(f, "{m}"),
        }
    }
}

impl ThetaExpr {
    pub fn evaluate(&self) -> ThetaNF {
        match self {
            ThetaExpr::Prime(n) => ThetaNF::hat_prime(n),
            ThetaExpr::Product(items) => items
                .iter()
                .fold(ThetaNF::trivial(), |acc, t| acc.vertex_product(&t.evaluate())),
            ThetaExpr::Tau(label, k) => tau_label(*label, &k.evaluate()),
            ThetaExpr::TauManifold(m) => tau_manifold(&m.evaluate()),
            ThetaExpr::Trivial => ThetaNF::trivial(),
        }
    }
}

impl KnotExpr {
    pub fn evaluate(&self) -> KnotNF {
        match self {
            KnotExpr::Prime(n) => KnotNF::prime(n),
            KnotExpr::Sum(items) => items
                .iter()
                .fold(KnotNF::unknot(), |acc, k| acc.connected_sum(&k.evaluate())),
            KnotExpr::Flat(m) => flat_knot(&m.evaluate()),
            KnotExpr::Unknot => KnotNF::unknot(),
        }
    }
}

impl ManifoldExpr {
    pub fn evaluate(&self) -> ManifoldNF {
        match self {
            ManifoldExpr::Prime(n) => ManifoldNF::prime(n),
            ManifoldExpr::Sum(items) => items
                .iter()
                .fold(ManifoldNF::s3(), |acc, m| acc.connected_sum(&m.evaluate())),
            ManifoldExpr::S3 => ManifoldNF::s3(),
        }
    }
}

impl Expression {
    pub fn evaluate(&self) -> Value {
        match self {
            Expression::Theta(t) => Value::Theta(t.evaluate()),
            Expression::Knot(k) => Value::Knot(k.evaluate()),
            Expression::Manifold(m) => Value::Manifold(m.evaluate()),
        }
    }
}

pub fn evaluate(e: &Expression) -> Value {
    e.evaluate()
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaExpr::Prime(n) => f.write_str(n),
            ThetaExpr::Product(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    match item {
                        ThetaExpr::Product(_) => write!(f, "({item})")?,
                        _ => write!(f, "{item}")?,
                    }
                }
                Ok(())
            }
            ThetaExpr::Tau(label, k) => write!(f, "tau{label}({k})"),
            ThetaExpr::TauManifold(m) => write!(f, "tauM({m})"),
            ThetaExpr::Trivial => f.write_str("1"),
        }
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Prime(n) => f.write_str(n),
            KnotExpr::Sum(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" # ")?;
                    }
                    match item {
                        KnotExpr::Sum(_) => write!(f, "({item})")?,
                        _ => write!(f, "{item}")?,
                    }
                }
                Ok(())
            }
            KnotExpr::Flat(m) => write!(f, "flat({m})"),
            KnotExpr::Unknot => f.write_str("unknot"),
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldExpr::Prime(n) => f.write_str(n),
            ManifoldExpr::Sum(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" # ")?;
                    }
                    match item {
                        ManifoldExpr::Sum(_) => write!(f, "({item})")?,
                        _ => write!(f, "{item}")?,
                    }
                }
                Ok(())
            }
            ManifoldExpr::S3 => f.write_str("S3"),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Theta(t) => write!(f, "{t}"),
            Expression::Knot(k) => write!(f, "{k}"),
            Expression::Manifold(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sort {
    Theta,
    Knot,
    Manifold,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    registry: &'a Registry,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, registry: &'a Registry) -> Self {
        Self {
            src,
            pos: 0,
            registry,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn syntax<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            position,
            message: message.into(),
        })
    }

    fn mismatch<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::SortMismatch {
            position,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => self.syntax(self.pos, format!("expected `{want}`, found `{c}`")),
            None => self.syntax(self.pos, format!("expected `{want}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos = start + end;
        Some((start, &rest[..end]))
    }

    fn finish(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            None => Ok(()),
            Some('#') => self.mismatch(self.pos, "`#` applies to knots and manifolds, not theta-curves"),
            Some('*') => self.mismatch(self.pos, "`*` applies to theta-curves only"),
            Some(c) => self.syntax(self.pos, format!("unexpected `{c}`")),
        }
    }

    /// First atom, looking through parentheses, decides the sort.
    fn leading_sort(&self) -> Sort {
        let trimmed = self.src.trim_start_matches(|c: char| c == '(' || c.is_whitespace());
        let end = trimmed
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(trimmed.len());
        let word = &trimmed[..end];
        match word {
            "flat" | "unknot" => Sort::Knot,
            "S3" => Sort::Manifold,
            _ => match self.registry.kind_of(word) {
                Some(GeneratorKind::KnotHatPrime) => Sort::Knot,
                Some(GeneratorKind::ManifoldPrime) => Sort::Manifold,
                _ => Sort::Theta,
            },
        }
    }

    fn theta_expr(&mut self) -> Result<ThetaExpr, ExprError> {
        let mut items = vec![self.theta_term()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            items.push(self.theta_term()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            ThetaExpr::Product(items)
        })
    }

    fn theta_term(&mut self) -> Result<ThetaExpr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.theta_expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('1') => {
                self.pos += 1;
                Ok(ThetaExpr::Trivial)
            }
            Some(_) => {
                let at = self.pos;
                let Some((start, word)) = self.ident() else {
                    return self.syntax(at, "expected a theta-curve term");
                };
                match word {
                    "tau" => {
                        let label_at = self.pos;
                        let label = match self.peek().and_then(Label::from_symbol) {
                            Some(l) => l,
                            None => return self.syntax(label_at, "expected a label `-`, `0` or `+`"),
                        };
                        self.pos += 1;
                        self.tau_body(label)
                    }
                    "tau0" => self.tau_body(Label::Zero),
                    "tauM" => {
                        self.expect('(')?;
                        let m = self.manifold_expr()?;
                        self.expect(')')?;
                        Ok(ThetaExpr::TauManifold(m))
                    }
                    "flat" | "unknot" => {
                        self.mismatch(start, format!("`{word}` is a knot, expected a theta-curve"))
                    }
                    "S3" => self.mismatch(start, "`S3` is a manifold, expected a theta-curve"),
                    name => match self.registry.kind_of(name) {
                        Some(GeneratorKind::ThetaHatPrime) => Ok(ThetaExpr::Prime(name.to_string())),
                        Some(kind) => self.mismatch(
                            start,
                            format!("`{name}` is a {kind}, expected a theta-curve"),
                        ),
                        None => Err(ExprError::Undeclared {
                            name: name.to_string(),
                            position: start,
                        }),
                    },
                }
            }
            None => self.syntax(self.pos, "expected a theta-curve term, found end of input"),
        }
    }

    fn tau_body(&mut self, label: Label) -> Result<ThetaExpr, ExprError> {
        self.expect('(')?;
        let k = self.knot_expr()?;
        self.expect(')')?;
        Ok(ThetaExpr::Tau(label, k))
    }

    fn knot_expr(&mut self) -> Result<KnotExpr, ExprError> {
        let mut items = vec![self.knot_atom()?];
        while self.peek() == Some('#') {
            self.pos += 1;
            items.push(self.knot_atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            KnotExpr::Sum(items)
        })
    }

    fn knot_atom(&mut self) -> Result<KnotExpr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.knot_expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('1') => self.mismatch(self.pos, "`1` is the trivial theta-curve, expected a knot"),
            Some(_) => {
                let at = self.pos;
                let Some((start, word)) = self.ident() else {
                    return self.syntax(at, "expected a knot");
                };
                match word {
                    "flat" => {
                        self.expect('(')?;
                        let m = self.manifold_expr()?;
                        self.expect(')')?;
                        Ok(KnotExpr::Flat(m))
                    }
                    "unknot" => Ok(KnotExpr::Unknot),
                    "tau" | "tau0" | "tauM" => {
                        self.mismatch(start, format!("`{word}` builds a theta-curve, expected a knot"))
                    }
                    "S3" => self.mismatch(start, "`S3` is a manifold, use flat(S3) for a knot"),
                    name => match self.registry.kind_of(name) {
                        Some(GeneratorKind::KnotHatPrime) => Ok(KnotExpr::Prime(name.to_string())),
                        Some(GeneratorKind::ManifoldPrime) => self.mismatch(
                            start,
                            format!("`{name}` is a manifold prime, use flat({name}) for a knot"),
                        ),
                        Some(kind) => {
                            self.mismatch(start, format!("`{name}` is a {kind}, expected a knot"))
                        }
                        None => Err(ExprError::Undeclared {
                            name: name.to_string(),
                            position: start,
                        }),
                    },
                }
            }
            None => self.syntax(self.pos, "expected a knot, found end of input"),
        }
    }

    fn manifold_expr(&mut self) -> Result<ManifoldExpr, ExprError> {
        let mut items = vec![self.manifold_atom()?];
        while self.peek() == Some('#') {
            self.pos += 1;
            items.push(self.manifold_atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            ManifoldExpr::Sum(items)
        })
    }

    fn manifold_atom(&mut self) -> Result<ManifoldExpr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.manifold_expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(_) => {
                let at = self.pos;
                let Some((start, word)) = self.ident() else {
                    return self.syntax(at, "expected a manifold");
                };
                match word {
                    "S3" => Ok(ManifoldExpr::S3),
                    "flat" | "unknot" => {
                        self.mismatch(start, format!("`{word}` is a knot, expected a manifold"))
                    }
                    "tau" | "tau0" | "tauM" => self.mismatch(
                        start,
                        format!("`{word}` builds a theta-curve, expected a manifold"),
                    ),
                    name => match self.registry.kind_of(name) {
                        Some(GeneratorKind::ManifoldPrime) => {
                            Ok(ManifoldExpr::Prime(name.to_string()))
                        }
                        Some(kind) => self.mismatch(
                            start,
                            format!("`{name}` is a {kind}, expected a manifold"),
                        ),
                        None => Err(ExprError::Undeclared {
                            name: name.to_string(),
                            position: start,
                        }),
                    },
                }
            }
            None => self.syntax(self.pos, "expected a manifold, found end of input"),
        }
    }
}

/// Parses an expression of whichever sort the text denotes.
pub fn parse(text: &str, registry: &Registry) -> Result<Expression, ExprError> {
    let mut p = Parser::new(text, registry);
    let e = match p.leading_sort() {
        Sort::Theta => Expression::Theta(p.theta_expr()?),
        Sort::Knot => Expression::Knot(p.knot_expr()?),
        Sort::Manifold => Expression::Manifold(p.manifold_expr()?),
    };
    p.finish()?;
    Ok(e)
}

pub fn parse_theta(text: &str, registry: &Registry) -> Result<ThetaExpr, ExprError> {
    let mut p = Parser::new(text, registry);
    let e = p.theta_expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_knot(text: &str, registry: &Registry) -> Result<KnotExpr, ExprError> {
    let mut p = Parser::new(text, registry);
    let e = p.knot_expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_manifold(text: &str, registry: &Registry) -> Result<ManifoldExpr, ExprError> {
    let mut p = Parser::new(text, registry);
    let e = p.manifold_expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimesManifest;

    fn reg() -> Registry {
        Registry::from_manifest(&PrimesManifest {
            theta: vec!["A".into(), "B".into()],
            knot: vec!["k".into(), "l".into()],
            manifold: vec!["P".into(), "Q".into()],
        })
        .unwrap()
    }

    fn theta(s: &str) -> ThetaExpr {
        parse_theta(s, &reg()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            theta("A * tau0(k # l) * B"),
            ThetaExpr::Product(vec![
                ThetaExpr::Prime("A".into()),
                ThetaExpr::Tau(
                    Label::Zero,
                    KnotExpr::Sum(vec![KnotExpr::Prime("k".into()), KnotExpr::Prime("l".into())])
                ),
                ThetaExpr::Prime("B".into()),
            ])
        );
        assert_eq!(
            theta("tauM(P # S3)"),
            ThetaExpr::TauManifold(ManifoldExpr::Sum(vec![
                ManifoldExpr::Prime("P".into()),
                ManifoldExpr::S3
            ]))
        );
        assert!(matches!(
            parse("A # B", &reg()),
            Err(ExprError::SortMismatch { .. })
        ));
    }

    #[test]
    fn labels_and_whitespace() {
        let minus = theta("tau-(k)");
        assert_eq!(minus, ThetaExpr::Tau(Label::Minus, KnotExpr::Prime("k".into())));
        assert_eq!(theta("  tau  + ( k )"), ThetaExpr::Tau(Label::Plus, KnotExpr::Prime("k".into())));
        assert_eq!(theta("tau 0(k)"), theta("tau0(k)"));
        assert_eq!(theta("A*B"), theta(" A  *\tB "));
    }

    #[test]
    fn error_positions() {
        let r = reg();
        assert_eq!(
            parse("A * Z", &r),
            Err(ExprError::Undeclared {
                name: "Z".into(),
                position: 4
            })
        );
        match parse("A * tau0(k", &r) {
            Err(ExprError::Syntax { position, .. }) => assert_eq!(position, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("tau0(P)", &r), Err(ExprError::SortMismatch { position: 5, .. })));
        assert!(matches!(parse("tauM(k)", &r), Err(ExprError::SortMismatch { .. })));
        assert!(matches!(parse("tau*(k)", &r), Err(ExprError::Syntax { position: 3, .. })));
        assert!(matches!(parse("k * A", &r), Err(ExprError::SortMismatch { .. })));
        assert!(matches!(parse("A B", &r), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("", &r), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn sorts_are_inferred() {
        let r = reg();
        assert!(matches!(parse("k # flat(P)", &r), Ok(Expression::Knot(_))));
        assert!(matches!(parse("(k # l) # k", &r), Ok(Expression::Knot(_))));
        assert!(matches!(parse("unknot", &r), Ok(Expression::Knot(KnotExpr::Unknot))));
        assert!(matches!(parse("P # Q", &r), Ok(Expression::Manifold(_))));
        assert!(matches!(parse("S3", &r), Ok(Expression::Manifold(ManifoldExpr::S3))));
        assert!(matches!(parse("((A))", &r), Ok(Expression::Theta(ThetaExpr::Prime(_)))));
    }

    #[test]
    fn evaluate_examples() {
        let r = reg();
        let eval = |s: &str| parse(s, &r).unwrap().evaluate();
        assert_eq!(eval("1 * A"), Value::Theta(ThetaNF::hat_prime("A")));
        assert_eq!(eval("tau0(unknot)"), Value::Theta(ThetaNF::trivial()));
        assert_eq!(eval("tau+(flat(P))"), eval("tauM(P)"));
        assert_eq!(eval("A*tau0(k)"), eval("tau0(k)*A"));
        assert_ne!(eval("A*B"), eval("B*A"));
        assert_eq!(eval("k # l"), eval("l # (k # unknot)"));
        assert_eq!(eval("P # S3"), eval("P"));
    }

    #[test]
    fn printing_reparses() {
        let r = reg();
        for s in [
            "A * tau0(k # l) * B",
            "(A * B) * tau-(flat(P # (Q # S3)))",
            "1",
            "tauM(S3) * (1 * A)",
            "(k # l) # flat(P)",
            "unknot",
            "(P # Q) # S3",
        ] {
            let e = parse(s, &r).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse(&e.to_string(), &r).unwrap(), e);
        }
    }
}
