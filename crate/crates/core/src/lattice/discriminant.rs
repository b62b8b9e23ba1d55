use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::snf::{row_space_basis, smith_normal_form};
use super::{GramLattice, LatticeError};
use crate::exact::linalg::{self, Matrix};
use crate::exact::rational::{fmt_rational, int, rem_euclid, to_i64, Rational};

/// `Λ∨/Λ` with elements stored as dual vectors in the original basis,
/// reduced into the unit cube `[0, 1)ⁿ`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    /// Invariant factors `d₁ | d₂ | …`, each `> 1`.
    pub factors: Vec<BigInt>,
    /// One generator of order `dᵢ` per factor.
    pub generators: Vec<Vec<Rational>>,
    gram: Matrix,
    even: bool,
}

/// Value of the discriminant quadratic form, canonical in `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DiscriminantQuadraticValue(#[serde(serialize_with = "ser_rational")] pub Rational);

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

impl fmt::Display for DiscriminantQuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub elements: Vec<Vec<Rational>>,
}

impl IsotropicSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: GramLattice,
    /// Columns are the new basis vectors in the coordinates of the old basis.
    pub basis_change: Matrix,
    pub subgroup_order: usize,
}

fn reduce_mod_one(x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|v| rem_euclid(v, &int(1))).collect()
}

impl DiscriminantGroup {
    pub fn of(lattice: &GramLattice) -> Result<Self, LatticeError> {
        if lattice.determinant().is_zero() {
            return Err(LatticeError::DegenerateLattice);
        }
        let snf = smith_normal_form(&lattice.big_gram());
        let gram = lattice.rational_gram();
        let ginv = linalg::inverse(&gram).ok_or(LatticeError::DegenerateLattice)?;
        let u: Matrix = snf
            .u
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let uinv = linalg::inverse(&u).expect("unimodular");
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in snf.diagonal.iter().enumerate() {
            if d > &BigInt::one() {
                let y: Vec<Rational> = uinv.iter().map(|row| row[i].clone()).collect();
                generators.push(reduce_mod_one(&linalg::mat_vec(&ginv, &y)));
                factors.push(d.clone());
            }
        }
        Ok(DiscriminantGroup {
            factors,
            generators,
            gram,
            even: lattice.is_even(),
        })
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.rank()]
    }

    pub fn reduce(&self, x: &[Rational]) -> Vec<Rational> {
        reduce_mod_one(x)
    }

    pub fn add(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let s: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        reduce_mod_one(&s)
    }

    /// True when `x` lies in the dual lattice, i.e. `G x` is integral.
    pub fn in_dual(&self, x: &[Rational]) -> bool {
        x.len() == self.rank() && linalg::mat_vec(&self.gram, x).iter().all(|v| v.is_integer())
    }

    /// `q(x) = xᵀ G x mod 2`.
    pub fn quadratic(&self, x: &[Rational]) -> Result<DiscriminantQuadraticValue, LatticeError> {
        if !self.even {
            let odd = (0..self.rank())
                .map(|i| to_i64(&self.gram[i][i]).unwrap_or(1))
                .find(|d| d % 2 != 0)
                .unwrap_or(1);
            return Err(LatticeError::OddLattice(odd));
        }
        if !self.in_dual(x) {
            return Err(LatticeError::NotInDual);
        }
        Ok(DiscriminantQuadraticValue(rem_euclid(
            &linalg::bilinear(&self.gram, x, x),
            &int(2),
        )))
    }

    /// `b(x, y) = xᵀ G y mod 1`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        rem_euclid(&linalg::bilinear(&self.gram, x, y), &int(1))
    }

    fn check_bound(&self, bound: usize) -> Result<usize, LatticeError> {
        let order = self.order();
        match order.to_usize() {
            Some(n) if n <= bound => Ok(n),
            _ => Err(LatticeError::GroupTooLarge {
                order: order.to_string(),
                bound,
            }),
        }
    }

    /// Every element, sorted in canonical (lexicographic) order.
    pub fn elements(&self, bound: usize) -> Result<Vec<Vec<Rational>>, LatticeError> {
        self.check_bound(bound)?;
        let mut out = vec![self.zero()];
        for (g, d) in self.generators.iter().zip(&self.factors) {
            let d = d.to_usize().expect("bounded");
            let mut next = Vec::with_capacity(out.len() * d);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..d {
                    next.push(cur.clone());
                    cur = self.add(&cur, g);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    pub fn isotropic_elements(&self, bound: usize) -> Result<Vec<Vec<Rational>>, LatticeError> {
        let mut out = Vec::new();
        for x in self.elements(bound)? {
            if self.quadratic(&x)?.0.is_zero() {
                out.push(x);
            }
        }
        Ok(out)
    }

    fn order_of(&self, x: &[Rational]) -> usize {
        x.iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
            .to_usize()
            .expect("element order fits")
    }

    fn span_with(&self, h: &BTreeSet<Vec<Rational>>, x: &[Rational]) -> BTreeSet<Vec<Rational>> {
        let mut out = BTreeSet::new();
        let n = self.order_of(x);
        for base in h {
            let mut cur = base.clone();
            for _ in 0..n {
                out.insert(cur.clone());
                cur = self.add(&cur, x);
            }
        }
        out
    }

    /// All subgroups on which `q` vanishes identically, the trivial one first,
    /// then by increasing order and canonical element list.
    pub fn isotropic_subgroups(&self, bound: usize) -> Result<Vec<IsotropicSubgroup>, LatticeError> {
        let iso = self.isotropic_elements(bound)?;
        let trivial: BTreeSet<Vec<Rational>> = [self.zero()].into_iter().collect();
        let mut seen: BTreeSet<Vec<Vec<Rational>>> = BTreeSet::new();
        seen.insert(trivial.iter().cloned().collect());
        let mut queue = VecDeque::from([trivial]);
        let mut found = Vec::new();
        while let Some(h) = queue.pop_front() {
            found.push(h.clone());
            for x in &iso {
                if h.contains(x) {
                    continue;
                }
                let bigger = self.span_with(&h, x);
                let key: Vec<Vec<Rational>> = bigger.iter().cloned().collect();
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key);
                let mut isotropic = true;
                for e in &bigger {
                    if !self.quadratic(e)?.0.is_zero() {
                        isotropic = false;
                        break;
                    }
                }
                if isotropic {
                    queue.push_back(bigger);
                }
            }
        }
        let mut out: Vec<IsotropicSubgroup> = found
            .into_iter()
            .map(|h| IsotropicSubgroup {
                elements: h.into_iter().collect(),
            })
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
        Ok(out)
    }
}

impl GramLattice {
    /// `q(x)` for a dual vector `x` given in the lattice basis.
    pub fn discriminant_quadratic(
        &self,
        x: &[Rational],
    ) -> Result<DiscriminantQuadraticValue, LatticeError> {
        self.require_even()?;
        self.discriminant_group()?.quadratic(x)
    }

    pub fn isotropic_elements(&self, bound: usize) -> Result<Vec<Vec<Rational>>, LatticeError> {
        self.require_even()?;
        self.discriminant_group()?.isotropic_elements(bound)
    }

    /// True iff the discriminant form has no nonzero isotropic element, so
    /// the lattice has no proper even overlattice and every embedding into an
    /// even unimodular lattice is primitive.
    pub fn is_primitivity_forced(&self, bound: usize) -> Result<bool, LatticeError> {
        Ok(self.isotropic_elements(bound)?.len() == 1)
    }

    /// One even overlattice per isotropic subgroup `H`, the lattice itself first.
    pub fn even_overlattices(&self, bound: usize) -> Result<Vec<Overlattice>, LatticeError> {
        self.require_even()?;
        let group = self.discriminant_group()?;
        group
            .isotropic_subgroups(bound)?
            .into_iter()
            .map(|h| self.overlattice_from(&h))
            .collect()
    }

    pub fn overlattice_from(&self, h: &IsotropicSubgroup) -> Result<Overlattice, LatticeError> {
        let n = self.rank();
        let mut gens: Vec<Vec<Rational>> = linalg::identity(n);
        gens.extend(h.elements.iter().cloned());
        let denom = gens
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = Rational::from_integer(denom.clone());
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|v| (v * &scale).to_integer()).collect())
            .collect();
        let basis_rows = row_space_basis(&rows);
        debug_assert_eq!(basis_rows.len(), n);
        let basis_change: Matrix = (0..n)
            .map(|i| {
                basis_rows
                    .iter()
                    .map(|r| Rational::new(r[i].clone(), denom.clone()))
                    .collect()
            })
            .collect();
        let g = self.transform(&basis_change);
        let mut gram = Vec::with_capacity(n);
        for row in &g {
            let mut out = Vec::with_capacity(n);
            for v in row {
                out.push(to_i64(v).ok_or_else(|| {
                    LatticeError::Malformed("subgroup is not isotropic: non-integral overlattice".into())
                })?);
            }
            gram.push(out);
        }
        Ok(Overlattice {
            lattice: GramLattice::new(gram)?,
            basis_change,
            subgroup_order: h.order(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::lattice::DEFAULT_ENUM_BOUND;

    #[test]
    fn nodal_discriminant_group() {
        let l = GramLattice::diagonal(&[22, -2]);
        let g = l.discriminant_group().unwrap();
        assert_eq!(g.factors, vec![BigInt::from(2), BigInt::from(22)]);
        assert_eq!(g.order(), BigInt::from(44));
        let unimodular = GramLattice::parse("0 1; 1 0").unwrap();
        assert!(unimodular.discriminant_group().unwrap().factors.is_empty());
        let one = GramLattice::parse("4").unwrap();
        assert_eq!(one.discriminant_group().unwrap().factors, vec![BigInt::from(4)]);
    }

    #[test]
    fn degenerate_rejected() {
        let l = GramLattice::parse("22 0; 0 0").unwrap();
        assert!(matches!(l.discriminant_group(), Err(LatticeError::DegenerateLattice)));
    }

    #[test]
    fn quadratic_values() {
        let l = GramLattice::diagonal(&[22, -2]);
        let x = l.dual_vector(&[1, 0]).unwrap();
        assert_eq!(l.discriminant_quadratic(&x).unwrap().0, rat(1, 22));
        let y = l.dual_vector(&[0, 1]).unwrap();
        assert_eq!(l.discriminant_quadratic(&y).unwrap().0, rat(3, 2));
        assert_eq!(l.discriminant_quadratic(&[int(0), int(0)]).unwrap().0, int(0));
        let odd = GramLattice::diagonal(&[3, 2]);
        assert!(matches!(odd.discriminant_quadratic(&[int(0), int(0)]), Err(LatticeError::OddLattice(3))));
        assert!(matches!(
            l.discriminant_quadratic(&[rat(1, 3), int(0)]),
            Err(LatticeError::NotInDual)
        ));
    }

    #[test]
    fn isotropy_and_primitivity() {
        let nodal = GramLattice::diagonal(&[22, -2]);
        assert_eq!(nodal.isotropic_elements(DEFAULT_ENUM_BOUND).unwrap().len(), 1);
        assert!(nodal.is_primitivity_forced(DEFAULT_ENUM_BOUND).unwrap());

        let split = GramLattice::diagonal(&[2, -2]);
        let iso = split.isotropic_elements(DEFAULT_ENUM_BOUND).unwrap();
        assert!(iso.contains(&vec![rat(1, 2), rat(1, 2)]));
        assert!(!split.is_primitivity_forced(DEFAULT_ENUM_BOUND).unwrap());

        let u = GramLattice::parse("0 1; 1 0").unwrap();
        assert_eq!(u.isotropic_elements(DEFAULT_ENUM_BOUND).unwrap(), vec![vec![int(0), int(0)]]);
        assert!(u.is_primitivity_forced(DEFAULT_ENUM_BOUND).unwrap());
    }

    #[test]
    fn overlattices_of_split_lattice() {
        let split = GramLattice::diagonal(&[2, -2]);
        let over = split.even_overlattices(DEFAULT_ENUM_BOUND).unwrap();
        let dets: Vec<BigInt> = over.iter().map(|o| o.lattice.determinant()).collect();
        assert_eq!(dets, vec![BigInt::from(-4), BigInt::from(-1)]);
        assert!(over.iter().all(|o| o.lattice.is_even()));
        assert_eq!(GramLattice::diagonal(&[22, -2]).even_overlattices(DEFAULT_ENUM_BOUND).unwrap().len(), 1);
    }

    #[test]
    fn bound_is_enforced() {
        let l = GramLattice::diagonal(&[22, -2]);
        assert!(matches!(l.isotropic_elements(10), Err(LatticeError::GroupTooLarge { .. })));
    }
}
