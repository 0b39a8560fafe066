//! The two ambient groups: the rational line with its order topology and the
//! cyclic groups Z_n with the discrete topology. Both are written additively.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupModel {
    /// Q with the usual topology.
    RationalLine,
    /// Z_n, n >= 2, discrete.
    Cyclic { modulus: u64 },
}

impl GroupModel {
    pub fn cyclic(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModel(format!("cyclic modulus must be >= 2, got {modulus}")));
        }
        Ok(GroupModel::Cyclic { modulus })
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            GroupModel::RationalLine => None,
            GroupModel::Cyclic { modulus } => Some(modulus),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    /// All points of a finite model in residue order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.modulus().map(|n| (0..n).map(GroupElement::Residue).collect())
    }

    pub fn zero(&self) -> GroupElement {
        match self {
            GroupModel::RationalLine => GroupElement::Rational(Rational::zero()),
            GroupModel::Cyclic { .. } => GroupElement::Residue(0),
        }
    }

    pub fn contains(&self, element: &GroupElement) -> bool {
        match (self, element) {
            (GroupModel::RationalLine, GroupElement::Rational(_)) => true,
            (GroupModel::Cyclic { modulus }, GroupElement::Residue(r)) => r < modulus,
            _ => false,
        }
    }

    pub fn check(&self, element: &GroupElement) -> Result<()> {
        if self.contains(element) {
            Ok(())
        } else {
            Err(Error::Parse(format!("{element} is not a point of {self}")))
        }
    }

    /// Group addition. Both operands must belong to this model.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupModel::RationalLine, GroupElement::Rational(x), GroupElement::Rational(y)) => {
                GroupElement::Rational(x + y)
            }
            (GroupModel::Cyclic { modulus }, GroupElement::Residue(x), GroupElement::Residue(y)) => {
                GroupElement::Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            _ => panic!("operands {a}, {b} do not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupModel::RationalLine, GroupElement::Rational(x)) => GroupElement::Rational(-x),
            (GroupModel::Cyclic { modulus }, GroupElement::Residue(x)) => {
                GroupElement::Residue((modulus - x % modulus) % modulus)
            }
            _ => panic!("operand {a} does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Interprets a rational coefficient as a scalar acting on this group.
    /// Z_n only admits integer coefficients, reduced mod n.
    pub fn scalar(&self, coefficient: &Rational) -> Result<Scalar> {
        match self {
            GroupModel::RationalLine => Ok(Scalar::Rational(coefficient.clone())),
            GroupModel::Cyclic { modulus } => {
                if !coefficient.is_integer() {
                    return Err(Error::NonIntegerCoefficient(coefficient.to_string()));
                }
                let reduced = coefficient.numerator().mod_floor(&BigInt::from(*modulus));
                Ok(Scalar::Integer(reduced.to_u64().expect("residue fits in u64")))
            }
        }
    }

    pub fn scale(&self, scalar: &Scalar, a: &GroupElement) -> GroupElement {
        match (self, scalar, a) {
            (GroupModel::RationalLine, Scalar::Rational(c), GroupElement::Rational(x)) => GroupElement::Rational(c * x),
            (GroupModel::Cyclic { modulus }, Scalar::Integer(c), GroupElement::Residue(x)) => {
                GroupElement::Residue(((*c as u128 * *x as u128) % *modulus as u128) as u64)
            }
            _ => panic!("scalar {scalar:?} cannot act on {a} in {self}"),
        }
    }

    /// Parses a point: an exact rational on Q, a decimal integer on Z_n
    /// (reduced mod n, so `-1` is accepted).
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        match self {
            GroupModel::RationalLine => Ok(GroupElement::Rational(text.parse()?)),
            GroupModel::Cyclic { modulus } => {
                let value: Rational = text.parse()?;
                if !value.is_integer() {
                    return Err(Error::Parse(format!("{text:?} is not a residue of Z_{modulus}")));
                }
                let reduced = value.numerator().mod_floor(&BigInt::from(*modulus));
                Ok(GroupElement::Residue(reduced.to_u64().expect("residue fits in u64")))
            }
        }
    }

    /// Parses a comma separated list of points; the empty string is the empty list.
    pub fn parse_list(&self, text: &str) -> Result<Vec<GroupElement>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split(',').map(|t| self.parse_element(t)).collect()
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::RationalLine => write!(f, "q"),
            GroupModel::Cyclic { modulus } => write!(f, "z{modulus}"),
        }
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// `q` or `z<n>`.
    fn from_str(text: &str) -> Result<Self> {
        let lower = text.trim().to_ascii_lowercase();
        if lower == "q" {
            return Ok(GroupModel::RationalLine);
        }
        lower
            .strip_prefix('z')
            .and_then(|n| n.trim_start_matches('_').parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown universe {text:?}; expected q or z<n>")))
            .and_then(GroupModel::cyclic)
    }
}

impl Serialize for GroupModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A point of one of the models. Residues carry no modulus; arithmetic goes
/// through [`GroupModel`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Rational(Rational),
    Residue(u64),
}

impl GroupElement {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            GroupElement::Rational(r) => Some(r),
            GroupElement::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            GroupElement::Residue(r) => Some(*r),
            GroupElement::Rational(_) => None,
        }
    }
}

impl From<Rational> for GroupElement {
    fn from(value: Rational) -> Self {
        GroupElement::Rational(value)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Rational(r) => write!(f, "{r}"),
            GroupElement::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A coefficient already reduced for the group it acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rational),
    Integer(u64),
}
