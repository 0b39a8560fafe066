//! Sequential convergence methods: additive partial functions from sequences
//! to points. A sequence outside a method's domain evaluates to `None`,
//! which is a normal outcome and not an error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel, Scalar};
use crate::rational::Rational;
use crate::sequence::EvPerSeq;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawMethod")]
pub enum MethodDescriptor {
    /// The ordinary limit.
    Lim,
    /// Sliding kernel `y_n = sum_j c_j x_{n+j}` followed by the limit.
    Kernel { coefficients: Vec<Rational> },
    /// Limit of running means. Rational line only.
    Cesaro,
    /// `(G1 + G2)(x) = G1(x) + G2(x)` on the intersection of the domains.
    Sum { left: Box<MethodDescriptor>, right: Box<MethodDescriptor> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawMethod {
    Lim,
    Kernel { coefficients: Vec<Rational> },
    Cesaro,
    Sum { left: Box<MethodDescriptor>, right: Box<MethodDescriptor> },
}

impl TryFrom<RawMethod> for MethodDescriptor {
    type Error = Error;

    fn try_from(raw: RawMethod) -> Result<Self> {
        Ok(match raw {
            RawMethod::Lim => MethodDescriptor::Lim,
            RawMethod::Cesaro => MethodDescriptor::Cesaro,
            RawMethod::Kernel { coefficients } => MethodDescriptor::kernel(coefficients)?,
            RawMethod::Sum { left, right } => MethodDescriptor::Sum { left, right },
        })
    }
}

impl MethodDescriptor {
    pub fn kernel(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Parse("kernel needs at least one coefficient".into()));
        }
        Ok(MethodDescriptor::Kernel { coefficients })
    }

    /// Kernel from integer coefficients.
    pub fn int_kernel(coefficients: &[i64]) -> Self {
        Self::kernel(coefficients.iter().copied().map(Rational::from_integer).collect()).expect("nonempty kernel")
    }

    /// The averaging method `lim (x_n + x_{n+1}) / 2`.
    pub fn averaging() -> Self {
        MethodDescriptor::Kernel { coefficients: vec![Rational::new(1, 2), Rational::new(1, 2)] }
    }

    pub fn sum(left: MethodDescriptor, right: MethodDescriptor) -> Self {
        MethodDescriptor::Sum { left: Box::new(left), right: Box::new(right) }
    }

    /// Checks that the method can act on sequences over `model`.
    pub fn check_model(&self, model: GroupModel) -> Result<()> {
        match self {
            MethodDescriptor::Lim => Ok(()),
            MethodDescriptor::Kernel { coefficients } => {
                coefficients.iter().try_for_each(|c| model.scalar(c).map(drop))
            }
            MethodDescriptor::Cesaro => match model {
                GroupModel::RationalLine => Ok(()),
                _ => Err(Error::Unsupported(format!("cesaro means are not defined on {model}"))),
            },
            MethodDescriptor::Sum { left, right } => {
                left.check_model(model)?;
                right.check_model(model)
            }
        }
    }

    /// The factor by which the method scales an eventually constant sequence.
    pub fn constant_multiplier(&self) -> Rational {
        match self {
            MethodDescriptor::Lim | MethodDescriptor::Cesaro => Rational::one(),
            MethodDescriptor::Kernel { coefficients } => coefficients.iter().sum(),
            MethodDescriptor::Sum { left, right } => left.constant_multiplier() + right.constant_multiplier(),
        }
    }

    /// Flattens a method built from `Lim`, `Kernel` and `Sum` into its
    /// component kernels (`Lim` is the kernel `[1]`). `None` if a Cesàro
    /// component is present.
    pub fn kernel_bank(&self) -> Option<Vec<Vec<Rational>>> {
        match self {
            MethodDescriptor::Lim => Some(vec![vec![Rational::one()]]),
            MethodDescriptor::Kernel { coefficients } => Some(vec![coefficients.clone()]),
            MethodDescriptor::Cesaro => None,
            MethodDescriptor::Sum { left, right } => {
                let mut bank = left.kernel_bank()?;
                bank.extend(right.kernel_bank()?);
                Some(bank)
            }
        }
    }
}

/// Whether `method` agrees with the ordinary limit on every convergent
/// sequence, judged over the rationals.
///
/// Convergent eventually periodic sequences are eventually constant, every
/// component method accepts them, and a constant `a` is sent to `m * a` for
/// the constant multiplier `m`. So the method is regular exactly when `m = 1`.
/// For a sliding kernel this is the unit row-sum condition; the other
/// Silverman–Toeplitz conditions hold automatically for band matrices.
pub fn is_regular(method: &MethodDescriptor) -> bool {
    method.constant_multiplier() == Rational::one()
}

/// Regularity judged on a specific model: on Z_n the multiplier only has to
/// be congruent to 1 mod n.
pub fn is_regular_on(method: &MethodDescriptor, model: GroupModel) -> Result<bool> {
    method.check_model(model)?;
    let multiplier = method.constant_multiplier();
    Ok(match model {
        GroupModel::RationalLine => multiplier == Rational::one(),
        GroupModel::Cyclic { .. } => model.scalar(&multiplier)? == model.scalar(&Rational::one())?,
    })
}

/// Applies the sliding kernel to `x`, returning the output sequence.
pub fn apply_kernel(coefficients: &[Rational], x: &EvPerSeq) -> Result<EvPerSeq> {
    let model = x.model();
    let scalars = coefficients.iter().map(|c| model.scalar(c)).collect::<Result<Vec<Scalar>>>()?;
    let window = |n: usize| -> GroupElement {
        scalars.iter().enumerate().fold(model.zero(), |acc, (j, c)| model.add(&acc, &model.scale(c, x.term(n + j))))
    };
    let start = x.preamble().len();
    let period = x.cycle().len();
    let preamble: Vec<_> = (0..start).map(window).collect();
    let cycle: Vec<_> = (start..start + period).map(window).collect();
    Ok(EvPerSeq::from_terms(model, &preamble, &cycle))
}

/// Evaluates `method` on `x`; `Ok(None)` when `x` is outside the domain.
pub fn evaluate(method: &MethodDescriptor, x: &EvPerSeq) -> Result<Option<GroupElement>> {
    let model = x.model();
    match method {
        MethodDescriptor::Lim => Ok(x.tail_constant().cloned()),
        MethodDescriptor::Kernel { coefficients } => Ok(apply_kernel(coefficients, x)?.tail_constant().cloned()),
        MethodDescriptor::Cesaro => {
            method.check_model(model)?;
            let cycle = x.cycle();
            let total: Rational = cycle.iter().filter_map(GroupElement::as_rational).sum();
            Ok(Some(GroupElement::Rational(total / Rational::from_integer(cycle.len() as i64))))
        }
        MethodDescriptor::Sum { left, right } => {
            let l = evaluate(left, x)?;
            let r = evaluate(right, x)?;
            Ok(l.zip(r).map(|(a, b)| model.add(&a, &b)))
        }
    }
}

pub fn in_domain(method: &MethodDescriptor, x: &EvPerSeq) -> Result<bool> {
    Ok(evaluate(method, x)?.is_some())
}

fn write_coefficients(f: &mut fmt::Formatter<'_>, coefficients: &[Rational]) -> fmt::Result {
    for (i, c) in coefficients.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Compact syntax: `lim`, `cesaro`, `kernel:1/2,1/2`, and `a+b` for sums
/// (left associative; parenthesize to nest on the right).
impl fmt::Display for MethodDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodDescriptor::Lim => write!(f, "lim"),
            MethodDescriptor::Cesaro => write!(f, "cesaro"),
            MethodDescriptor::Kernel { coefficients } => {
                write!(f, "kernel:")?;
                write_coefficients(f, coefficients)
            }
            MethodDescriptor::Sum { left, right } => match **right {
                MethodDescriptor::Sum { .. } => write!(f, "{left}+({right})"),
                _ => write!(f, "{left}+{right}"),
            },
        }
    }
}

struct CompactParser<'a> {
    text: &'a str,
    pos: usize,
}

impl CompactParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in method {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().find(|c| !c.is_whitespace())
    }

    fn eat(&mut self, expected: char) -> bool {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        if trimmed.starts_with(expected) {
            self.pos += rest.len() - trimmed.len() + expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MethodDescriptor> {
        let mut method = self.term()?;
        while self.eat('+') {
            method = MethodDescriptor::sum(method, self.term()?);
        }
        Ok(method)
    }

    fn term(&mut self) -> Result<MethodDescriptor> {
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        let rest = &self.text[self.pos..];
        let len = rest.find(['+', '(', ')']).unwrap_or(rest.len());
        let atom = rest[..len].trim();
        self.pos += len;
        let lower = atom.to_ascii_lowercase();
        match lower.as_str() {
            "lim" => Ok(MethodDescriptor::Lim),
            "cesaro" => Ok(MethodDescriptor::Cesaro),
            _ => {
                let coefficients =
                    lower.strip_prefix("kernel:").ok_or_else(|| self.error(&format!("unknown method {atom:?}")))?;
                let coefficients = coefficients.split(',').map(str::parse).collect::<Result<Vec<Rational>>>()?;
                MethodDescriptor::kernel(coefficients)
            }
        }
    }
}

impl FromStr for MethodDescriptor {
    type Err = Error;

    /// Accepts the compact syntax or a JSON descriptor.
    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            return serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()));
        }
        let mut parser = CompactParser { text: trimmed, pos: 0 };
        let method = parser.expr()?;
        if parser.peek().is_some() {
            return Err(parser.error("trailing input"));
        }
        Ok(method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> GroupModel {
        GroupModel::RationalLine
    }

    fn seq(model: GroupModel, text: &str) -> EvPerSeq {
        EvPerSeq::parse(model, text).unwrap()
    }

    fn method(text: &str) -> MethodDescriptor {
        text.parse().unwrap()
    }

    fn value(method_text: &str, model: GroupModel, seq_text: &str) -> Option<String> {
        evaluate(&method(method_text), &seq(model, seq_text)).unwrap().map(|v| v.to_string())
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(value("kernel:1/2,1/2", q(), "cyc:[0,1]").as_deref(), Some("1/2"));
        assert_eq!(value("lim", q(), "pre:[4,5];cyc:[-2/7]").as_deref(), Some("-2/7"));
        assert_eq!(value("cesaro", q(), "cyc:[0,1]").as_deref(), Some("1/2"));
        let z2 = GroupModel::cyclic(2).unwrap();
        assert_eq!(value("kernel:1,1", z2, "cyc:[1]").as_deref(), Some("0"));
    }

    #[test]
    fn cesaro_partial_means_approach_the_cycle_mean() {
        // x = 0,1,0,1,...; the sum of the first n terms is floor(n/2).
        let x = seq(q(), "cyc:[0,1]");
        let half = Rational::new(1, 2);
        let mut running = Rational::zero();
        for n in 1..=1000i64 {
            running += x.term(n as usize - 1).as_rational().unwrap();
            assert_eq!(running, Rational::from_integer(n / 2));
            let gap = (&running / &Rational::from_integer(n)) - half.clone();
            assert!(gap.abs() <= Rational::new(1, n));
        }
        assert_eq!(evaluate(&MethodDescriptor::Cesaro, &x).unwrap(), Some(GroupElement::Rational(half)));
    }

    #[test]
    fn in_domain_examples() {
        let x = seq(q(), "cyc:[0,1]");
        assert!(!in_domain(&method("lim"), &x).unwrap());
        assert!(in_domain(&method("kernel:1/2,1/2"), &x).unwrap());
        assert!(!in_domain(&method("lim+cesaro"), &x).unwrap());
        assert!(in_domain(&method("kernel:1/2,1/2+cesaro"), &x).unwrap());
        assert_eq!(value("kernel:1/2,1/2+cesaro", q(), "cyc:[0,1]").as_deref(), Some("1"));
    }

    #[test]
    fn model_errors_are_errors_not_undefined() {
        let z3 = GroupModel::cyclic(3).unwrap();
        let x = seq(z3, "cyc:[1]");
        assert!(matches!(evaluate(&method("kernel:1/2,1/2"), &x), Err(Error::NonIntegerCoefficient(_))));
        assert!(matches!(evaluate(&method("cesaro"), &x), Err(Error::Unsupported(_))));
        assert!(method("lim+cesaro").check_model(z3).is_err());
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(&method("kernel:1/2,1/2")));
        assert!(is_regular(&method("kernel:1")));
        assert!(is_regular(&method("lim")));
        assert!(is_regular(&method("cesaro")));
        assert!(!is_regular(&method("kernel:1,1")));
        assert!(!is_regular(&method("kernel:2,2")));
        assert!(!is_regular(&method("lim+lim")));
        assert!(is_regular(&method("kernel:1/2,1/2+kernel:1/2,-1/2")));
        let z3 = GroupModel::cyclic(3).unwrap();
        assert!(is_regular_on(&method("kernel:2,-1"), z3).unwrap());
        // 2 + 2 = 4 = 1 mod 3
        assert!(is_regular_on(&method("kernel:2,2"), z3).unwrap());
        assert!(!is_regular_on(&method("kernel:1,1"), z3).unwrap());
    }

    #[test]
    fn compact_and_json_syntax_agree() {
        let cases = [
            ("lim", r#"{"kind":"lim"}"#),
            ("cesaro", r#"{"kind":"cesaro"}"#),
            ("kernel:1/2,1/2", r#"{"kind":"kernel","coefficients":["1/2","1/2"]}"#),
            (
                "lim+kernel:2,-1",
                r#"{"kind":"sum","left":{"kind":"lim"},"right":{"kind":"kernel","coefficients":["2","-1"]}}"#,
            ),
        ];
        for (compact, json) in cases {
            let a = method(compact);
            let b = method(json);
            assert_eq!(a, b);
            assert_eq!(a.to_string(), compact);
            assert_eq!(serde_json::to_string(&a).unwrap(), json);
        }
    }

    #[test]
    fn nested_sums_round_trip() {
        let m = MethodDescriptor::sum(MethodDescriptor::Lim, method("cesaro+kernel:3"));
        assert_eq!(m.to_string(), "lim+(cesaro+kernel:3)");
        assert_eq!(method(&m.to_string()), m);
    }

    #[test]
    fn parse_errors() {
        for bad in
            ["", "kernel:", "kernel:0.5", "limit", "lim+", "(lim", "lim)", r#"{"kind":"kernel","coefficients":[]}"#]
        {
            assert!(bad.parse::<MethodDescriptor>().is_err(), "{bad:?} should fail");
        }
    }
}
