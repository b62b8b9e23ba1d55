use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::snf::smith_normal_form;
use super::{GramLattice, LatticeError};
use crate::exact::linalg;
use crate::exact::rational::int;
use crate::exact::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Greater,
    GreaterEq,
    Less,
    LessEq,
    Equal,
}

impl Comparison {
    /// Does `value ⋄ 0` hold?
    pub fn holds<T: PartialOrd + Zero>(self, value: &T) -> bool {
        let z = T::zero();
        match self {
            Comparison::Greater => *value > z,
            Comparison::GreaterEq => *value >= z,
            Comparison::Less => *value < z,
            Comparison::LessEq => *value <= z,
            Comparison::Equal => *value == z,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Greater => ">",
            Comparison::GreaterEq => ">=",
            Comparison::Less => "<",
            Comparison::LessEq => "<=",
            Comparison::Equal => "=",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Comparison {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            ">" | "gt" => Comparison::Greater,
            ">=" | "ge" => Comparison::GreaterEq,
            "<" | "lt" => Comparison::Less,
            "<=" | "le" => Comparison::LessEq,
            "=" | "==" | "eq" => Comparison::Equal,
            other => return Err(LatticeError::Malformed(format!("unknown comparison {other:?}"))),
        })
    }
}

/// Inclusive integer bounds, one range per variable (outer first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub ranges: Vec<(i64, i64)>,
}

impl SearchBox {
    pub fn new(ranges: Vec<(i64, i64)>) -> Self {
        SearchBox { ranges }
    }

    /// Parses `"1..100,-100..-1"`.
    pub fn parse(s: &str) -> Result<Self, LatticeError> {
        let bad = || LatticeError::Malformed(format!("bad box {s:?}; expected lo..hi[,lo..hi]"));
        let ranges = s
            .split(',')
            .map(|r| {
                let (lo, hi) = r.trim().split_once("..").ok_or_else(bad)?;
                let lo = lo.trim().parse::<i64>().map_err(|_| bad())?;
                let hi = hi.trim().parse::<i64>().map_err(|_| bad())?;
                Ok((lo, hi))
            })
            .collect::<Result<Vec<_>, LatticeError>>()?;
        if ranges.is_empty() || ranges.len() > 2 {
            return Err(bad());
        }
        Ok(SearchBox { ranges })
    }
}

/// Every integer point of the box at which `form ⋄ 0` holds, in
/// lexicographic order. The box has one range per variable of `form`
/// (outer variable first); a one-range box searches univariate forms.
pub fn integer_search_quadratic(form: &Polynomial, cmp: Comparison, region: &SearchBox) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    match region.ranges.as_slice() {
        [(lo, hi)] => {
            for a in *lo..=*hi {
                if cmp.holds(&form.eval2(&int(a), &int(0))) {
                    out.push(vec![a]);
                }
            }
        }
        [(alo, ahi), (blo, bhi)] => {
            for a in *alo..=*ahi {
                let ra = int(a);
                for b in *blo..=*bhi {
                    if cmp.holds(&form.eval2(&ra, &int(b))) {
                        out.push(vec![a, b]);
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// True iff the sublattice spanned by `sub_basis` is a direct summand of the
/// ambient group.
pub fn is_saturated(ambient: &GramLattice, sub_basis: &[Vec<i64>]) -> Result<bool, LatticeError> {
    let n = ambient.rank();
    if let Some(v) = sub_basis.iter().find(|v| v.len() != n) {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if sub_basis.is_empty() {
        return Ok(true);
    }
    if linalg::rank(&linalg::from_i64(sub_basis)) < sub_basis.len() {
        return Err(LatticeError::DependentBasis);
    }
    let m: Vec<Vec<BigInt>> = sub_basis
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    Ok(smith_normal_form(&m).diagonal.iter().all(|d| d.is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn searches() {
        let f = Polynomial::parse_in("-8*a^2 + 28*a*b - 22*b^2 + 40", "a", "b").unwrap();
        let region = SearchBox::new(vec![(1, 100), (-100, -1)]);
        assert!(integer_search_quadratic(&f, Comparison::Greater, &region).is_empty());

        let g = Polynomial::parse_in("-22 + 28*c - 8*c^2", "c", "").unwrap();
        let region = SearchBox::new(vec![(-100, 100)]);
        assert_eq!(integer_search_quadratic(&g, Comparison::Greater, &region), vec![vec![2]]);

        let h = Polynomial::parse_in("a^2 + b^2 - 1", "a", "b").unwrap();
        let region = SearchBox::parse("-5..5,-5..5").unwrap();
        assert_eq!(integer_search_quadratic(&h, Comparison::Less, &region), vec![vec![0, 0]]);
    }

    #[test]
    fn saturation() {
        let ambient = GramLattice::parse("22 11 6; 11 4 1; 6 1 -2").unwrap();
        assert!(is_saturated(&ambient, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap());
        let id = GramLattice::diagonal(&[1, 1]);
        assert!(!is_saturated(&id, &[vec![2, 0]]).unwrap());
        assert!(is_saturated(&id, &[vec![1, 0], vec![0, 1]]).unwrap());
        assert_eq!(
            is_saturated(&id, &[vec![1, 1], vec![2, 2]]),
            Err(LatticeError::DependentBasis)
        );
    }

    #[test]
    fn comparison_parsing() {
        assert_eq!(">=".parse::<Comparison>().unwrap(), Comparison::GreaterEq);
        assert!("~".parse::<Comparison>().is_err());
    }
}
