//! Intersection rings of threefold and surface models.
//!
//! A threefold model is a free basis of divisor classes with a symmetric
//! trilinear form; a surface model is a basis with a symmetric bilinear form.
//! Curves are recorded by their pairings with the basis divisors.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::linalg::{self, Matrix};
use crate::exact::rational::{int, parse_rational, rat, Rational};
use crate::exact::Polynomial;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IntersectError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection form is not symmetric")]
    NotSymmetric,
    #[error("invalid preset parameters: {0}")]
    InvalidPreset(String),
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),
    #[error("cannot parse class expression {0:?}")]
    Parse(String),
}

/// A labelled class: a divisor (coordinates in the basis) or a curve
/// (pairings with the basis divisors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedClass {
    pub label: String,
    pub vector: Vec<Rational>,
}

impl NamedClass {
    pub fn new(label: &str, vector: Vec<Rational>) -> Self {
        NamedClass {
            label: label.to_string(),
            vector,
        }
    }

    pub fn from_i64(label: &str, v: &[i64]) -> Self {
        Self::new(label, linalg::vec_from_i64(v))
    }
}

/// `constant + t · slope`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineClass {
    pub constant: Vec<Rational>,
    pub slope: Vec<Rational>,
}

impl AffineClass {
    pub fn new(constant: Vec<Rational>, slope: Vec<Rational>) -> Self {
        debug_assert_eq!(constant.len(), slope.len());
        AffineClass { constant, slope }
    }

    pub fn constant_class(c: Vec<Rational>) -> Self {
        let n = c.len();
        AffineClass::new(c, vec![Rational::zero(); n])
    }

    /// `base − t · direction`.
    pub fn family(base: &[Rational], direction: &[Rational]) -> Self {
        AffineClass::new(base.to_vec(), direction.iter().map(|x| -x).collect())
    }

    pub fn dim(&self) -> usize {
        self.constant.len()
    }

    pub fn at(&self, t: &Rational) -> Vec<Rational> {
        self.constant.iter().zip(&self.slope).map(|(c, s)| c + s * t).collect()
    }

    /// Coordinates as univariate polynomials in `var`.
    pub fn polys(&self, var: &str) -> Vec<Polynomial> {
        self.constant
            .iter()
            .zip(&self.slope)
            .map(|(c, s)| Polynomial::affine(var, c.clone(), s.clone()))
            .collect()
    }

    pub fn sub(&self, other: &AffineClass) -> AffineClass {
        AffineClass::new(sub_vec(&self.constant, &other.constant), sub_vec(&self.slope, &other.slope))
    }
}

pub(crate) fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Chamber of a divisor family with its declared positive part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub lo: Rational,
    pub hi: Rational,
    pub positive: AffineClass,
}

/// A prime divisor to test: the family is `−K − t · class`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestDivisor {
    pub label: String,
    pub class: Vec<Rational>,
    pub log_discrepancy: Rational,
    pub chambers: Vec<Chamber>,
}

/// Restriction of the positive part of `−K − t·S` to a surface `S`, given
/// per t-chamber in the basis of a surface preset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSpec {
    pub surface: String,
    pub chambers: Vec<Chamber>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreefoldModel {
    pub name: String,
    pub basis: Vec<String>,
    triple: Vec<Vec<Vec<Rational>>>,
    pub anticanonical: Vec<Rational>,
    pub curves: Vec<NamedClass>,
    pub exceptional: Vec<NamedClass>,
    pub divisors: Vec<TestDivisor>,
    pub flags: Vec<FlagSpec>,
    pub note: Option<String>,
}

fn check_len(v: &[Rational], n: usize) -> Result<(), IntersectError> {
    if v.len() != n {
        return Err(IntersectError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

impl ThreefoldModel {
    /// Builds a model from the entries `T(i, j, k)` with `i ≤ j ≤ k`;
    /// the remaining entries are filled in by symmetry. Unlisted entries are 0.
    pub fn new(
        name: &str,
        basis: &[&str],
        entries: &[((usize, usize, usize), Rational)],
        anticanonical: Vec<Rational>,
    ) -> Result<Self, IntersectError> {
        let r = basis.len();
        check_len(&anticanonical, r)?;
        let mut triple = vec![vec![vec![Rational::zero(); r]; r]; r];
        for ((i, j, k), v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= r || j >= r || k >= r {
                return Err(IntersectError::DimensionMismatch {
                    expected: r,
                    got: i.max(j).max(k) + 1,
                });
            }
            for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                if !triple[a][b][c].is_zero() && triple[a][b][c] != *v {
                    return Err(IntersectError::NotSymmetric);
                }
                triple[a][b][c] = v.clone();
            }
        }
        Ok(ThreefoldModel {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            triple,
            anticanonical,
            curves: Vec::new(),
            exceptional: Vec::new(),
            divisors: Vec::new(),
            flags: Vec::new(),
            note: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.triple[i][j][k]
    }

    /// Nonzero entries with `i ≤ j ≤ k`.
    pub fn entries(&self) -> Vec<((usize, usize, usize), Rational)> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i..r {
                for k in j..r {
                    if !self.triple[i][j][k].is_zero() {
                        out.push(((i, j, k), self.triple[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    pub fn with_curve(mut self, label: &str, pairings: &[i64]) -> Self {
        self.curves.push(NamedClass::from_i64(label, pairings));
        self
    }

    pub fn with_exceptional(mut self, label: &str, class: &[i64]) -> Self {
        self.exceptional.push(NamedClass::from_i64(label, class));
        self
    }

    pub fn triple_product(&self, a: &[Rational], b: &[Rational], c: &[Rational]) -> Result<Rational, IntersectError> {
        let r = self.rank();
        for v in [a, b, c] {
            check_len(v, r)?;
        }
        let mut total = Rational::zero();
        for i in 0..r {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if b[j].is_zero() {
                    continue;
                }
                for k in 0..r {
                    let t = &self.triple[i][j][k];
                    if !t.is_zero() && !c[k].is_zero() {
                        total += &a[i] * &b[j] * &c[k] * t;
                    }
                }
            }
        }
        Ok(total)
    }

    pub fn cube(&self, a: &[Rational]) -> Result<Rational, IntersectError> {
        self.triple_product(a, a, a)
    }

    /// `a³` for a class with polynomial coordinates.
    pub fn cube_poly(&self, a: &[Polynomial]) -> Result<Polynomial, IntersectError> {
        let r = self.rank();
        if a.len() != r {
            return Err(IntersectError::DimensionMismatch {
                expected: r,
                got: a.len(),
            });
        }
        let mut total = Polynomial::zero();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let t = &self.triple[i][j][k];
                    if !t.is_zero() {
                        total = &total + &(&(&a[i] * &a[j]) * &a[k]).scale(t);
                    }
                }
            }
        }
        Ok(total)
    }

    /// Pairing of a divisor with a declared curve.
    pub fn curve_pairing(&self, divisor: &[Rational], curve: &NamedClass) -> Rational {
        linalg::dot(divisor, &curve.vector)
    }

    pub fn anticanonical_volume(&self) -> Rational {
        self.cube(&self.anticanonical).expect("anticanonical has model rank")
    }

    pub fn divisor(&self, label: &str) -> Option<&TestDivisor> {
        self.divisors.iter().find(|d| d.label == label)
    }

    pub fn flag(&self, surface: &str) -> Option<&FlagSpec> {
        self.flags.iter().find(|f| f.surface == surface)
    }

    /// Parses a class expression such as `"4H - E"` in this model's basis.
    pub fn parse_class(&self, expr: &str) -> Result<Vec<Rational>, IntersectError> {
        parse_class(expr, &self.basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Matrix,
    pub canonical: Option<Vec<Rational>>,
    pub negative_curves: Vec<NamedClass>,
    pub eff_cone: Vec<NamedClass>,
    pub nef_witnesses: Vec<NamedClass>,
}

impl SurfaceModel {
    pub fn new(name: &str, basis: &[&str], gram: Matrix) -> Result<Self, IntersectError> {
        if gram.len() != basis.len() {
            return Err(IntersectError::DimensionMismatch {
                expected: basis.len(),
                got: gram.len(),
            });
        }
        if !linalg::is_symmetric(&gram) {
            return Err(IntersectError::NotSymmetric);
        }
        Ok(SurfaceModel {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            gram,
            canonical: None,
            negative_curves: Vec::new(),
            eff_cone: Vec::new(),
            nef_witnesses: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pair(&self, a: &[Rational], b: &[Rational]) -> Rational {
        linalg::bilinear(&self.gram, a, b)
    }

    pub fn square(&self, a: &[Rational]) -> Rational {
        self.pair(a, a)
    }

    /// `aᵀ G b` for classes with polynomial coordinates.
    pub fn pair_poly(&self, a: &[Polynomial], b: &[Polynomial]) -> Polynomial {
        let mut total = Polynomial::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let g = &self.gram[i][j];
                if !g.is_zero() {
                    total = &total + &(ai * bj).scale(g);
                }
            }
        }
        total
    }

    /// Effective-cone generators: the declared list, or the negative curves
    /// when none is declared.
    pub fn effective_generators(&self) -> &[NamedClass] {
        if self.eff_cone.is_empty() {
            &self.negative_curves
        } else {
            &self.eff_cone
        }
    }

    pub fn parse_class(&self, expr: &str) -> Result<Vec<Rational>, IntersectError> {
        parse_class(expr, &self.basis)
    }

    pub fn format_class(&self, v: &[Rational]) -> String {
        format_class(v, &self.basis)
    }
}

/// Parses a rational linear combination of basis labels, e.g.
/// `"9/4 L - e1 - e2"`, `"2*H - E"`, `"(1/2) e1"`.
pub fn parse_class(expr: &str, basis: &[String]) -> Result<Vec<Rational>, IntersectError> {
    let err = || IntersectError::Parse(expr.to_string());
    let mut out = vec![Rational::zero(); basis.len()];
    let compact: String = expr.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for ch in compact.chars() {
        let attached = matches!(cur.chars().last(), Some('/') | Some('*'));
        if (ch == '+' || ch == '-') && !attached {
            if !cur.is_empty() {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = false;
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err());
    }
    terms.push((negative, cur));

    for (neg, term) in terms {
        let term = term.replace('*', "");
        // leading rational coefficient, then a label (or nothing for a bare 0)
        let split = term
            .char_indices()
            .find(|&(i, c)| c.is_alphabetic() || (c == '_' && i > 0))
            .map_or(term.len(), |(i, _)| i);
        let (coef, label) = term.split_at(split);
        let mut c = if coef.is_empty() {
            Rational::one()
        } else {
            parse_rational(coef).map_err(|_| err())?
        };
        if neg {
            c = -c;
        }
        if label.is_empty() {
            if !c.is_zero() {
                return Err(err());
            }
            continue;
        }
        let idx = basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| IntersectError::UnknownLabel(label.to_string()))?;
        out[idx] += c;
    }
    Ok(out)
}

/// Inverse of [`parse_class`], e.g. `"9/4 L - e1"`.
pub fn format_class(v: &[Rational], basis: &[String]) -> String {
    let mut s = String::new();
    for (c, label) in v.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format!("{mag} "));
        }
        s.push_str(label);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Gram matrix `bᵢ · bⱼ · S` of the restricted classes.
pub fn restrict_to_surface(
    model: &ThreefoldModel,
    surface_class: &[Rational],
    restricted_basis: &[Vec<Rational>],
    labels: &[&str],
) -> Result<SurfaceModel, IntersectError> {
    let n = restricted_basis.len();
    if labels.len() != n {
        return Err(IntersectError::DimensionMismatch {
            expected: n,
            got: labels.len(),
        });
    }
    let mut gram = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = model.triple_product(&restricted_basis[i], &restricted_basis[j], surface_class)?;
        }
    }
    SurfaceModel::new(&format!("{}|S", model.name), labels, gram)
}

/// `Bl_C P³` for a smooth curve of degree `d` and genus `g`.
pub fn blowup_p3_curve(d: i64, g: i64) -> Result<ThreefoldModel, IntersectError> {
    if d < 1 || g < 0 {
        return Err(IntersectError::InvalidPreset(format!("need d >= 1, g >= 0; got d={d}, g={g}")));
    }
    let m = ThreefoldModel::new(
        &format!("bl_p3_d{d}_g{g}"),
        &["H", "E"],
        &[
            ((0, 0, 0), int(1)),
            ((0, 1, 1), int(-d)),
            ((1, 1, 1), int(-(4 * d + 2 * g - 2))),
        ],
        linalg::vec_from_i64(&[4, -1]),
    )?;
    let mut m = m.with_curve("line", &[1, 0]).with_curve("fiber", &[0, -1]);
    m.note = Some("curve pairings (H.C, E.C); E.fiber = -1".into());
    Ok(m)
}

/// Blowup of a node on a threefold of anticanonical volume `v`.
pub fn blowup_node(v: i64) -> Result<ThreefoldModel, IntersectError> {
    if v <= 0 || v % 2 != 0 {
        return Err(IntersectError::InvalidPreset(format!("volume must be even and positive, got {v}")));
    }
    let mut m = ThreefoldModel::new(
        &format!("bl_node_{v}"),
        &["A", "E"],
        &[((0, 0, 0), int(v)), ((1, 1, 1), int(2))],
        linalg::vec_from_i64(&[1, -1]),
    )?;
    m.note = Some("A pulled back from the base; E the exceptional quadric".into());
    Ok(m)
}

/// Blowup of the quartic del Pezzo threefold along a conic.
pub fn blowup_v4_conic() -> ThreefoldModel {
    let mut m = ThreefoldModel::new(
        "bl_v4_conic",
        &["L", "E"],
        &[((0, 0, 0), int(4)), ((0, 1, 1), int(-2)), ((1, 1, 1), int(-2))],
        linalg::vec_from_i64(&[2, -1]),
    )
    .expect("valid preset");
    m.note = Some("-K = 2L - E".into());
    m
}

/// Blowup along a line of singularities: `A³ = 2g−2`, `A·E² = −2`, `E³ = 4−k`.
pub fn sing_line_model(g: i64, k: i64) -> Result<ThreefoldModel, IntersectError> {
    if g < 3 || k < 0 {
        return Err(IntersectError::InvalidPreset(format!("need g >= 3, k >= 0; got g={g}, k={k}")));
    }
    let mut m = ThreefoldModel::new(
        &format!("sing_line({g},{k})"),
        &["A", "E"],
        &[
            ((0, 0, 0), int(2 * g - 2)),
            ((0, 1, 1), int(-2)),
            ((1, 1, 1), int(4 - k)),
        ],
        linalg::vec_from_i64(&[1, 0]),
    )?
    .with_curve("fiber", &[0, -1])
    .with_exceptional("D", &[1, -2]);
    let a = linalg::vec_from_i64(&[1, 0]);
    let e = linalg::vec_from_i64(&[0, 1]);
    m.divisors.push(TestDivisor {
        label: "E".into(),
        class: e.clone(),
        log_discrepancy: int(1),
        chambers: vec![
            Chamber {
                lo: int(0),
                hi: int(1),
                positive: AffineClass::family(&a, &e),
            },
            Chamber {
                lo: int(1),
                hi: int(2),
                // (2 − t)(A − E)
                positive: AffineClass::new(linalg::vec_from_i64(&[2, -2]), linalg::vec_from_i64(&[-1, 1])),
            },
        ],
    });
    m.note = Some("-K = A; D = A - 2E is the contracted divisor on [1, 2]".into());
    Ok(m)
}

/// `Bl_C P³` along a rational quintic curve, with its test divisors and flags.
pub fn bl_p3_quintic() -> ThreefoldModel {
    let mut m = blowup_p3_curve(5, 0)
        .expect("valid preset")
        .with_curve("quadrisecant", &[1, 4])
        .with_curve("unisecant", &[1, 1])
        .with_exceptional("E", &[0, 1])
        .with_exceptional("Qtilde", &[2, -1]);
    m.name = "bl_p3_quintic".into();
    let k = m.anticanonical.clone();
    let e = linalg::vec_from_i64(&[0, 1]);
    let q = linalg::vec_from_i64(&[2, -1]);
    m.divisors.push(TestDivisor {
        label: "E".into(),
        class: e.clone(),
        log_discrepancy: int(1),
        chambers: vec![Chamber {
            lo: int(0),
            hi: int(1),
            // (1 − u)(4H − E)
            positive: AffineClass::new(k.clone(), k.iter().map(|x| -x).collect()),
        }],
    });
    m.divisors.push(TestDivisor {
        label: "Qtilde".into(),
        class: q.clone(),
        log_discrepancy: int(1),
        chambers: vec![
            Chamber {
                lo: int(0),
                hi: int(1),
                positive: AffineClass::family(&k, &q),
            },
            Chamber {
                lo: int(1),
                hi: int(2),
                // (4 − 2u) H
                positive: AffineClass::new(linalg::vec_from_i64(&[4, 0]), linalg::vec_from_i64(&[-2, 0])),
            },
        ],
    });
    // restriction to the degree-4 del Pezzo: (4 − 2t) L − ((2 − t)/2) Σe
    let mut c0 = vec![int(4)];
    c0.extend(std::iter::repeat_n(int(-1), 5));
    let mut c1 = vec![int(-2)];
    c1.extend(std::iter::repeat_n(rat(1, 2), 5));
    m.flags.push(FlagSpec {
        surface: "dp4".into(),
        chambers: vec![Chamber {
            lo: int(0),
            hi: int(2),
            positive: AffineClass::new(c0, c1),
        }],
    });
    // restriction to the quadric: O(3 − u, 2u), then O(4 − 2u, 4 − 2u)
    m.flags.push(FlagSpec {
        surface: "quadric".into(),
        chambers: vec![
            Chamber {
                lo: int(0),
                hi: int(1),
                positive: AffineClass::new(linalg::vec_from_i64(&[3, 0]), linalg::vec_from_i64(&[-1, 2])),
            },
            Chamber {
                lo: int(1),
                hi: int(2),
                positive: AffineClass::new(linalg::vec_from_i64(&[4, 4]), linalg::vec_from_i64(&[-2, -2])),
            },
        ],
    });
    m.note = Some("curve pairings (H.C, E.C); Qtilde = 2H - E".into());
    m
}

/// The blowup of the plane in five general points, basis `(L, e1, …, e5)`.
pub fn dp4_surface() -> SurfaceModel {
    let labels = ["L", "e1", "e2", "e3", "e4", "e5"];
    let gram = linalg::from_i64(
        &(0..6)
            .map(|i| (0..6).map(|j| if i != j { 0 } else if i == 0 { 1 } else { -1 }).collect())
            .collect::<Vec<_>>(),
    );
    let mut s = SurfaceModel::new("dp4", &labels, gram).expect("valid preset");
    s.canonical = Some(linalg::vec_from_i64(&[-3, 1, 1, 1, 1, 1]));
    let unit = |i: usize| {
        let mut v = vec![0i64; 6];
        v[i] = 1;
        v
    };
    let mut curves = Vec::new();
    for i in 1..=5 {
        curves.push(NamedClass::from_i64(&format!("e{i}"), &unit(i)));
    }
    for i in 1..=5 {
        for j in i + 1..=5 {
            let mut v = unit(0);
            v[i] = -1;
            v[j] = -1;
            curves.push(NamedClass::from_i64(&format!("L-e{i}-e{j}"), &v));
        }
    }
    curves.push(NamedClass::from_i64("2L-e1-e2-e3-e4-e5", &[2, -1, -1, -1, -1, -1]));
    s.eff_cone = curves.clone();
    s.negative_curves = curves;
    s.nef_witnesses.push(NamedClass::from_i64("L", &unit(0)));
    for i in 1..=5 {
        let mut v = unit(0);
        v[i] = -1;
        s.nef_witnesses.push(NamedClass::from_i64(&format!("L-e{i}"), &v));
    }
    s
}

/// `P¹ × P¹` with the two rulings `f1`, `f2`.
pub fn quadric_surface() -> SurfaceModel {
    let mut s = SurfaceModel::new("quadric", &["f1", "f2"], linalg::from_i64(&[vec![0, 1], vec![1, 0]]))
        .expect("valid preset");
    s.canonical = Some(linalg::vec_from_i64(&[-2, -2]));
    s.eff_cone = vec![NamedClass::from_i64("f1", &[1, 0]), NamedClass::from_i64("f2", &[0, 1])];
    s.nef_witnesses = s.eff_cone.clone();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::linalg::vec_from_i64 as v;

    #[test]
    fn quintic_blowup_products() {
        let m = bl_p3_quintic();
        assert_eq!(m.cube(&v(&[4, -1])).unwrap(), int(22));
        assert_eq!(m.triple_product(&v(&[1, 0]), &v(&[1, 0]), &v(&[0, 0])).unwrap(), int(0));
        assert_eq!(blowup_p3_curve(1, 0).unwrap().anticanonical_volume(), int(54));
        assert_eq!(blowup_p3_curve(2, 0).unwrap().anticanonical_volume(), int(46));
        assert!(m.triple_product(&v(&[1]), &v(&[1, 0]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn sing_line_products() {
        let m = sing_line_model(12, 0).unwrap();
        let a_te = vec![Polynomial::constant(int(1)), Polynomial::affine("t", int(0), int(-1))];
        assert_eq!(m.cube_poly(&a_te).unwrap().to_string(), "22 - 6*t^2 - 4*t^3");
        assert_eq!(m.cube(&v(&[1, -1])).unwrap(), int(12));
        assert_eq!(sing_line_model(12, 3).unwrap().entry(1, 1, 1), &int(1));
        assert!(sing_line_model(2, 0).is_err());
    }

    #[test]
    fn restrictions() {
        let node = blowup_node(22).unwrap();
        assert_eq!(node.cube(&v(&[1, -1])).unwrap(), int(20));
        let s = restrict_to_surface(&node, &v(&[1, -1]), &[v(&[1, 0]), v(&[0, 1])], &["e1", "e2"]).unwrap();
        assert_eq!(s.gram, linalg::from_i64(&[vec![22, 0], vec![0, -2]]));
        assert!(blowup_node(0).is_err());

        let y = blowup_v4_conic();
        assert_eq!(y.anticanonical_volume(), int(22));
        assert_eq!(y.cube(&v(&[1, 0])).unwrap(), int(4));
        let s = restrict_to_surface(&y, &v(&[2, -1]), &[v(&[2, -1]), v(&[1, 0])], &["h", "l"]).unwrap();
        assert_eq!(s.gram, linalg::from_i64(&[vec![22, 14], vec![14, 8]]));
        let z = restrict_to_surface(&y, &v(&[0, 0]), &[v(&[2, -1]), v(&[1, 0])], &["h", "l"]).unwrap();
        assert!(z.gram.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn surfaces() {
        let s = dp4_surface();
        let conic = v(&[2, -1, -1, -1, -1, -1]);
        assert_eq!(s.square(&conic), int(-1));
        let k = s.canonical.clone().unwrap();
        assert_eq!(s.square(&k), int(4));
        assert_eq!(s.negative_curves.len(), 16);
        for c in &s.negative_curves {
            assert_eq!(s.square(&c.vector), int(-1));
            assert_eq!(-s.pair(&k, &c.vector), int(1));
        }
        let q = quadric_surface();
        assert_eq!(q.square(&v(&[3, 2])), int(12));
    }

    #[test]
    fn class_expressions() {
        let s = dp4_surface();
        let d = s.parse_class("9/4 L - e1 - e2 - e3 - e4 - e5").unwrap();
        assert_eq!(d[0], rat(9, 4));
        assert_eq!(d[5], int(-1));
        assert_eq!(s.parse_class("2*L - (1/2) e1").unwrap()[1], rat(-1, 2));
        assert_eq!(s.format_class(&d), "9/4 L - e1 - e2 - e3 - e4 - e5");
        assert_eq!(s.parse_class(&s.format_class(&d)).unwrap(), d);
        assert!(matches!(s.parse_class("L + x"), Err(IntersectError::UnknownLabel(_))));
        assert!(s.parse_class("L +").is_err());
    }
}
