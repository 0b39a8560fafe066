//! Exceptional-index densities behind statistical and lacunary statistical
//! convergence, evaluated exactly on finite prefixes.
//!
//! Positions are 1-based: position `k` is `prefix[k - 1]`, i.e. the term
//! `x_{k-1}` of a sequence indexed from zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::rational::Rational;

/// The neighbourhood `U` of zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    /// Open ball `|x| < r` on the rational line.
    Ball(Rational),
    /// `U = {0}` on Z_n.
    Discrete,
}

fn exceptional(model: GroupModel, term: &GroupElement, limit: &GroupElement, radius: &Radius) -> Result<bool> {
    model.check(term)?;
    let diff = model.sub(term, limit);
    match (model, radius) {
        (GroupModel::RationalLine, Radius::Ball(r)) => Ok(diff.as_rational().unwrap().abs() >= *r),
        (GroupModel::Cyclic { .. }, Radius::Discrete) => Ok(diff != model.zero()),
        (GroupModel::RationalLine, Radius::Discrete) => {
            Err(Error::Unsupported("the rational line needs a ball radius".into()))
        }
        (GroupModel::Cyclic { .. }, Radius::Ball(_)) => {
            Err(Error::Unsupported("Z_n uses the discrete neighbourhood {0}".into()))
        }
    }
}

fn validate(model: GroupModel, limit: &GroupElement, radius: &Radius) -> Result<()> {
    model.check(limit)?;
    if let Radius::Ball(r) = radius {
        if !r.is_positive() {
            return Err(Error::OutOfRange(format!("radius must be positive, got {r}")));
        }
    }
    Ok(())
}

fn count_exceptional(
    model: GroupModel,
    terms: &[GroupElement],
    limit: &GroupElement,
    radius: &Radius,
) -> Result<usize> {
    terms.iter().try_fold(0usize, |count, t| Ok(count + exceptional(model, t, limit, radius)? as usize))
}

/// `(1/n) |{k <= n : x_k - limit not in U}|` with `n = prefix.len()`.
pub fn statistical_density(
    model: GroupModel,
    prefix: &[GroupElement],
    limit: &GroupElement,
    radius: &Radius,
) -> Result<Rational> {
    if prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    validate(model, limit, radius)?;
    let count = count_exceptional(model, prefix, limit, radius)?;
    Ok(Rational::new(count as i64, prefix.len() as i64))
}

/// Breakpoints `k_1 < k_2 < ...` with `k_0 = 0` implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeDocument", into = "SchemeBreakpoints")]
pub struct LacunaryScheme {
    breakpoints: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SchemeDocument {
    Breakpoints(SchemeBreakpoints),
    Geometric { geometric: Geometric },
}

#[derive(Serialize, Deserialize)]
struct SchemeBreakpoints {
    breakpoints: Vec<u64>,
}

#[derive(Deserialize)]
struct Geometric {
    ratio: u64,
    count: u32,
}

impl TryFrom<SchemeDocument> for LacunaryScheme {
    type Error = Error;

    fn try_from(doc: SchemeDocument) -> Result<Self> {
        match doc {
            SchemeDocument::Breakpoints(b) => LacunaryScheme::new(b.breakpoints),
            SchemeDocument::Geometric { geometric } => LacunaryScheme::geometric(geometric.ratio, geometric.count),
        }
    }
}

impl From<LacunaryScheme> for SchemeBreakpoints {
    fn from(scheme: LacunaryScheme) -> Self {
        SchemeBreakpoints { breakpoints: scheme.breakpoints }
    }
}

impl LacunaryScheme {
    pub fn new(breakpoints: Vec<u64>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidScheme("no breakpoints".into()));
        }
        let mut previous = 0;
        for &k in &breakpoints {
            if k <= previous {
                return Err(Error::InvalidScheme(format!(
                    "breakpoints must be positive and strictly increasing: {breakpoints:?}"
                )));
            }
            previous = k;
        }
        Ok(LacunaryScheme { breakpoints })
    }

    /// `k_r = ratio^r` for `r = 1..=count`.
    pub fn geometric(ratio: u64, count: u32) -> Result<Self> {
        if ratio < 2 {
            return Err(Error::InvalidScheme(format!("geometric ratio must be >= 2, got {ratio}")));
        }
        let breakpoints = (1..=count)
            .map(|r| ratio.checked_pow(r))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidScheme("geometric breakpoints overflow u64".into()))?;
        Self::new(breakpoints)
    }

    pub fn breakpoints(&self) -> &[u64] {
        &self.breakpoints
    }

    /// Number of represented blocks.
    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// The block `I_r = (k_{r-1}, k_r]` as a half-open range of positions,
    /// `r >= 1`.
    pub fn block(&self, r: usize) -> Result<(u64, u64)> {
        if r == 0 || r > self.breakpoints.len() {
            return Err(Error::OutOfRange(format!("block {r} is outside 1..={}", self.breakpoints.len())));
        }
        let start = if r == 1 { 0 } else { self.breakpoints[r - 2] };
        Ok((start, self.breakpoints[r - 1]))
    }
}

/// `(1/h_r) |{k in I_r : x_k - limit not in U}|`.
pub fn lacunary_density(
    model: GroupModel,
    prefix: &[GroupElement],
    scheme: &LacunaryScheme,
    r: usize,
    limit: &GroupElement,
    radius: &Radius,
) -> Result<Rational> {
    let (start, end) = scheme.block(r)?;
    if end > prefix.len() as u64 {
        return Err(Error::OutOfRange(format!(
            "block {r} ends at position {end} but the prefix has {} terms",
            prefix.len()
        )));
    }
    validate(model, limit, radius)?;
    // positions start+1..=end are prefix[start..end]
    let count = count_exceptional(model, &prefix[start as usize..end as usize], limit, radius)?;
    Ok(Rational::new(count as i64, (end - start) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> GroupModel {
        GroupModel::RationalLine
    }

    fn rat(n: i64) -> GroupElement {
        GroupElement::Rational(Rational::from_integer(n))
    }

    /// `x_i = 1` when `i` is a perfect square, `i = 0, 1, ...`.
    fn squares_indicator(n: usize) -> Vec<GroupElement> {
        let mut out = vec![rat(0); n];
        let mut j = 0;
        while j * j < n {
            out[j * j] = rat(1);
            j += 1;
        }
        out
    }

    #[test]
    fn statistical_density_of_squares() {
        let half = Radius::Ball(Rational::new(1, 2));
        let d = statistical_density(q(), &squares_indicator(10_000), &rat(0), &half).unwrap();
        assert_eq!(d, Rational::new(1, 100));
    }

    #[test]
    fn statistical_density_small_cases() {
        let half = Radius::Ball(Rational::new(1, 2));
        let alternating = [rat(0), rat(1), rat(0), rat(1)];
        assert_eq!(statistical_density(q(), &alternating, &rat(0), &half).unwrap(), Rational::new(1, 2));
        let constant = vec![rat(7); 13];
        assert_eq!(statistical_density(q(), &constant, &rat(7), &half).unwrap(), Rational::zero());
        assert_eq!(statistical_density(q(), &[], &rat(0), &half), Err(Error::EmptyPrefix));
        let zero_radius = Radius::Ball(Rational::zero());
        assert!(statistical_density(q(), &constant, &rat(7), &zero_radius).is_err());
    }

    #[test]
    fn discrete_neighbourhood_on_cyclic_groups() {
        let z3 = GroupModel::cyclic(3).unwrap();
        let prefix = z3.parse_list("1,1,2,1,0,1").unwrap();
        let one = GroupElement::Residue(1);
        assert_eq!(statistical_density(z3, &prefix, &one, &Radius::Discrete).unwrap(), Rational::new(1, 3));
        assert!(statistical_density(z3, &prefix, &one, &Radius::Ball(Rational::one())).is_err());
        assert!(statistical_density(q(), &[rat(1)], &rat(1), &Radius::Discrete).is_err());
    }

    #[test]
    fn lacunary_density_of_squares() {
        let scheme = LacunaryScheme::geometric(2, 12).unwrap();
        assert_eq!(scheme.block(10).unwrap(), (512, 1024));
        let half = Radius::Ball(Rational::new(1, 2));
        let d = lacunary_density(q(), &squares_indicator(1024), &scheme, 10, &rat(0), &half).unwrap();
        assert_eq!(d, Rational::new(9, 512));
        assert!(lacunary_density(q(), &squares_indicator(1024), &scheme, 11, &rat(0), &half).is_err());
        assert!(lacunary_density(q(), &squares_indicator(1024), &scheme, 0, &rat(0), &half).is_err());
    }

    #[test]
    fn lacunary_density_small_cases() {
        let half = Radius::Ball(Rational::new(1, 2));
        let scheme = LacunaryScheme::new(vec![2, 4]).unwrap();
        let prefix = [rat(1), rat(1), rat(0), rat(0)];
        assert_eq!(lacunary_density(q(), &prefix, &scheme, 2, &rat(0), &half).unwrap(), Rational::zero());
        assert_eq!(lacunary_density(q(), &prefix, &scheme, 1, &rat(0), &half).unwrap(), Rational::one());
        let constant = vec![rat(3); 4];
        for r in 1..=2 {
            assert!(lacunary_density(q(), &constant, &scheme, r, &rat(3), &half).unwrap().is_zero());
        }
    }

    #[test]
    fn scheme_validation_and_documents() {
        assert!(LacunaryScheme::new(vec![]).is_err());
        assert!(LacunaryScheme::new(vec![0, 2]).is_err());
        assert!(LacunaryScheme::new(vec![2, 2]).is_err());
        assert!(LacunaryScheme::geometric(1, 3).is_err());
        let a: LacunaryScheme = serde_json::from_str(r#"{"breakpoints":[2,4,8]}"#).unwrap();
        let b: LacunaryScheme = serde_json::from_str(r#"{"geometric":{"ratio":2,"count":3}}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"breakpoints":[2,4,8]}"#);
        assert!(serde_json::from_str::<LacunaryScheme>(r#"{"breakpoints":[3,1]}"#).is_err());
    }
}
