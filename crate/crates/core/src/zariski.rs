//! Zariski decompositions on surface models, chamber sweeps for linear
//! families, two-parameter flag volumes, and certified threefold volumes.

use std::cmp::Ordering;

use log::debug;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::linalg::{self, Matrix};
use crate::exact::lp::{self, LpOutcome};
use crate::exact::rational::{fmt_rational, int, Rational};
use crate::exact::{ExactError, Piece, PiecewisePolynomial, Polynomial};
use crate::intersect::{sub_vec, AffineClass, Chamber, IntersectError, SurfaceModel, ThreefoldModel};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ZariskiError {
    #[error("class {0} is not pseudo-effective")]
    NotPseudoEffective(String),
    #[error("support {0:?} has a Gram matrix that is not negative definite (incomplete curve list?)")]
    IndefiniteSupport(Vec<String>),
    #[error("direction is anti-effective relative to the declared cone; threshold is unbounded")]
    UnboundedDirection,
    #[error("walls coincide or cross inconsistently near {0}")]
    WallCrossingDegeneracy(String),
    #[error("certificate violation: {0}")]
    CertificateViolation(String),
    #[error("class has {got} coordinates, model rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiResult {
    pub positive: Vec<Rational>,
    /// `(curve label, coefficient)` over the support, in declaration order.
    pub negative: Vec<(String, Rational)>,
    /// Gram matrix of the support curves (negative definite).
    pub support_gram: Matrix,
    /// `P²`.
    pub volume: Rational,
}

impl ZariskiResult {
    pub fn support(&self) -> Vec<&str> {
        self.negative.iter().map(|(l, _)| l.as_str()).collect()
    }
}

/// Orthogonal projection data for a fixed support set: the negative part of
/// `D` is `Σ (M D)_j C_j` and the positive part is `Π D`.
struct SupportData {
    indices: Vec<usize>,
    coeff: Matrix,
    pi: Matrix,
    gram: Matrix,
}

impl SupportData {
    fn new(s: &SurfaceModel, indices: Vec<usize>) -> Result<Self, ZariskiError> {
        let r = s.rank();
        let curves: Vec<&Vec<Rational>> = indices.iter().map(|&i| &s.negative_curves[i].vector).collect();
        let gram: Matrix = curves
            .iter()
            .map(|a| curves.iter().map(|b| s.pair(a, b)).collect())
            .collect();
        if indices.is_empty() {
            return Ok(SupportData {
                indices,
                coeff: vec![],
                pi: linalg::identity(r),
                gram,
            });
        }
        if !linalg::is_negative_definite(&gram) {
            return Err(ZariskiError::IndefiniteSupport(
                indices.iter().map(|&i| s.negative_curves[i].label.clone()).collect(),
            ));
        }
        let rows: Matrix = curves.iter().map(|c| linalg::mat_vec(&s.gram, c)).collect();
        let inv = linalg::inverse(&gram).expect("negative definite");
        let coeff = linalg::mul(&inv, &rows);
        let mut pi = linalg::identity(r);
        for (j, c) in curves.iter().enumerate() {
            for a in 0..r {
                for b in 0..r {
                    let delta = &c[a] * &coeff[j][b];
                    pi[a][b] -= delta;
                }
            }
        }
        Ok(SupportData {
            indices,
            coeff,
            pi,
            gram,
        })
    }

    fn positive(&self, d: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.pi, d)
    }

    fn coefficients(&self, d: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.coeff, d)
    }

    fn positive_poly(&self, d: &[Polynomial]) -> Vec<Polynomial> {
        apply_poly(&self.pi, d)
    }

    fn coefficients_poly(&self, d: &[Polynomial]) -> Vec<Polynomial> {
        apply_poly(&self.coeff, d)
    }
}

fn apply_poly(m: &Matrix, d: &[Polynomial]) -> Vec<Polynomial> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(d)
                .filter(|(c, _)| !c.is_zero())
                .fold(Polynomial::zero(), |acc, (c, p)| &acc + &p.scale(c))
        })
        .collect()
}

fn lex_cmp(a: &(Rational, Rational)) -> Ordering {
    match a.0.cmp(&Rational::zero()) {
        Ordering::Equal => a.1.cmp(&Rational::zero()),
        o => o,
    }
}

fn check_dim(s: &SurfaceModel, v: &[Rational]) -> Result<(), ZariskiError> {
    if v.len() != s.rank() {
        return Err(ZariskiError::DimensionMismatch {
            expected: s.rank(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Support of the Zariski decomposition of `d0 + ε·d1` for all sufficiently
/// small `ε > 0` (pass `d1 = 0` for `d0` itself), by the iterative algorithm
/// with pairings compared lexicographically.
fn lex_support(s: &SurfaceModel, d0: &[Rational], d1: &[Rational]) -> Result<SupportData, ZariskiError> {
    let mut support: Vec<usize> = Vec::new();
    loop {
        let data = SupportData::new(s, support.clone())?;
        let p0 = data.positive(d0);
        let p1 = data.positive(d1);
        let violations: Vec<usize> = (0..s.negative_curves.len())
            .filter(|i| !support.contains(i))
            .filter(|&i| {
                let c = &s.negative_curves[i].vector;
                lex_cmp(&(s.pair(&p0, c), s.pair(&p1, c))) == Ordering::Less
            })
            .collect();
        if violations.is_empty() {
            return Ok(data);
        }
        support.extend(violations);
        support.sort_unstable();
    }
}

/// Necessary and sufficient test against the declared data: nonnegative on
/// every nef witness and inside the cone of effective generators.
pub fn is_pseudo_effective(s: &SurfaceModel, d: &[Rational]) -> bool {
    if s.nef_witnesses.iter().any(|w| s.pair(d, &w.vector).is_negative()) {
        return false;
    }
    let gens: Vec<Vec<Rational>> = s.effective_generators().iter().map(|g| g.vector.clone()).collect();
    if gens.is_empty() {
        return true;
    }
    lp::cone_membership(&gens, d).is_some()
}

pub fn zariski_decompose(s: &SurfaceModel, d: &[Rational]) -> Result<ZariskiResult, ZariskiError> {
    check_dim(s, d)?;
    if !is_pseudo_effective(s, d) {
        return Err(ZariskiError::NotPseudoEffective(s.format_class(d)));
    }
    let zero = vec![Rational::zero(); s.rank()];
    let data = lex_support(s, d, &zero)?;
    let positive = data.positive(d);
    let coeffs = data.coefficients(d);
    let negative = data
        .indices
        .iter()
        .zip(coeffs)
        .map(|(&i, c)| (s.negative_curves[i].label.clone(), c))
        .collect();
    Ok(ZariskiResult {
        volume: s.square(&positive),
        positive,
        negative,
        support_gram: data.gram,
    })
}

/// `max { s : D − s·Z pseudo-effective }` over the declared effective cone.
pub fn pseff_threshold(s: &SurfaceModel, d: &[Rational], z: &[Rational]) -> Result<Rational, ZariskiError> {
    check_dim(s, d)?;
    check_dim(s, z)?;
    let gens: Vec<&Vec<Rational>> = s.effective_generators().iter().map(|g| &g.vector).collect();
    // Σ λ_i g_i + s·Z = D, λ, s ≥ 0, maximize s
    let a: Matrix = (0..s.rank())
        .map(|row| {
            gens.iter()
                .map(|g| g[row].clone())
                .chain(std::iter::once(z[row].clone()))
                .collect()
        })
        .collect();
    let mut cost = vec![Rational::zero(); gens.len()];
    cost.push(int(1));
    let tau = match lp::maximize(&a, d, &cost) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Err(ZariskiError::NotPseudoEffective(s.format_class(d))),
        LpOutcome::Unbounded => return Err(ZariskiError::UnboundedDirection),
    };
    // the nef witnesses cut the cone further when the generator list is partial
    let mut tau = tau;
    for w in &s.nef_witnesses {
        let dw = s.pair(d, &w.vector);
        let zw = s.pair(z, &w.vector);
        if zw.is_positive() {
            let bound = dw / zw;
            if bound < tau {
                tau = bound;
            }
        }
    }
    Ok(tau)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Event {
    Enters(usize),
    Leaves(usize),
    End,
}

struct SweepCell {
    lo: Rational,
    hi: Rational,
    data: SupportData,
    event: Event,
}

/// Chamber sweep of `d0 + x·d1` over `x ∈ [lo, hi]`.
fn sweep(
    s: &SurfaceModel,
    d0: &[Rational],
    d1: &[Rational],
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<SweepCell>, ZariskiError> {
    let mut cells = Vec::new();
    let mut x = lo.clone();
    let at = |x: &Rational| -> Vec<Rational> { d0.iter().zip(d1).map(|(a, b)| a + b * x).collect() };
    while &x < hi {
        let dx = at(&x);
        let data = lex_support(s, &dx, d1)?;
        let p0 = data.positive(&dx);
        let p1 = data.positive(d1);
        let mut next = hi.clone();
        let mut event = Event::End;
        for (i, c) in s.negative_curves.iter().enumerate() {
            if data.indices.contains(&i) {
                continue;
            }
            let (v0, v1) = (s.pair(&p0, &c.vector), s.pair(&p1, &c.vector));
            if v1.is_negative() {
                let root = &x - v0 / v1;
                if root < next {
                    next = root;
                    event = Event::Enters(i);
                }
            }
        }
        let c0 = data.coefficients(&dx);
        let c1 = data.coefficients(d1);
        for (j, (a, b)) in c0.iter().zip(&c1).enumerate() {
            if b.is_negative() {
                let root = &x - a / b;
                if root < next {
                    next = root;
                    event = Event::Leaves(data.indices[j]);
                }
            }
        }
        debug_assert!(next > x, "sweep must advance");
        cells.push(SweepCell {
            lo: x.clone(),
            hi: next.clone(),
            data,
            event,
        });
        x = next;
    }
    Ok(cells)
}

/// Per-chamber metadata of a volume function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeChamber {
    pub lo: Rational,
    pub hi: Rational,
    pub positive: AffineClass,
    pub support: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeFunction {
    pub function: PiecewisePolynomial,
    pub chambers: Vec<VolumeChamber>,
    pub certificate: String,
}

impl VolumeFunction {
    pub fn domain(&self) -> (Rational, Rational) {
        self.function.domain()
    }
}

fn support_labels(s: &SurfaceModel, data: &SupportData) -> Vec<String> {
    data.indices.iter().map(|&i| s.negative_curves[i].label.clone()).collect()
}

/// `vol(D(x))` for an affine family `D(x)` on `[lo, hi]`, one piece per
/// Zariski chamber.
pub fn one_param_volume(
    s: &SurfaceModel,
    family: &AffineClass,
    lo: &Rational,
    hi: &Rational,
    var: &str,
) -> Result<VolumeFunction, ZariskiError> {
    check_dim(s, &family.constant)?;
    if lo >= hi {
        return Err(ExactError::EmptyInterval {
            lo: fmt_rational(lo),
            hi: fmt_rational(hi),
        }
        .into());
    }
    for x in [lo, hi] {
        if !is_pseudo_effective(s, &family.at(x)) {
            return Err(ZariskiError::NotPseudoEffective(s.format_class(&family.at(x))));
        }
    }
    let polys = family.polys(var);
    let mut pieces = Vec::new();
    let mut chambers = Vec::new();
    for cell in sweep(s, &family.constant, &family.slope, lo, hi)? {
        let p = cell.data.positive_poly(&polys);
        let vol = s.pair_poly(&p, &p).with_names(var, "");
        let support = support_labels(s, &cell.data);
        pieces.push(Piece {
            lo: cell.lo.clone(),
            hi: cell.hi.clone(),
            poly: vol,
            label: Some(support.join(",")),
        });
        chambers.push(VolumeChamber {
            lo: cell.lo,
            hi: cell.hi,
            positive: AffineClass::new(cell.data.positive(&family.constant), cell.data.positive(&family.slope)),
            support,
        });
    }
    Ok(VolumeFunction {
        function: PiecewisePolynomial::new(pieces)?,
        chambers,
        certificate: "Zariski chambers relative to the declared negative curves".into(),
    })
}

/// One cell `lower(t) ≤ s ≤ upper(t)` of a two-parameter family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCell {
    pub lower: Polynomial,
    pub upper: Polynomial,
    pub support: Vec<String>,
    pub positive: Vec<Polynomial>,
    pub volume: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagChamber {
    pub lo: Rational,
    pub hi: Rational,
    pub cells: Vec<FlagCell>,
}

/// Cell structure of `vol(A(t) − s·Z)` over `t`-chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVolume {
    pub outer: String,
    pub inner: String,
    pub chambers: Vec<FlagChamber>,
}

impl FlagVolume {
    /// `Σ ∫∫ vol ds dt` over all cells.
    pub fn integral(&self) -> Rational {
        let mut total = Rational::zero();
        for ch in &self.chambers {
            for cell in &ch.cells {
                total += cell.volume.integrate_inner(&cell.lower, &cell.upper).integrate(&ch.lo, &ch.hi);
            }
        }
        total
    }

    /// The `s`-walls of each chamber, lowest first, excluding `s = 0`.
    pub fn walls(&self) -> Vec<Vec<Polynomial>> {
        self.chambers
            .iter()
            .map(|ch| ch.cells.iter().map(|c| c.upper.clone()).collect())
            .collect()
    }
}

const MAX_DEPTH: usize = 48;

struct FlagProblem<'a> {
    s: &'a SurfaceModel,
    a: &'a AffineClass,
    z: &'a [Rational],
    neg_z: Vec<Rational>,
    outer: &'a str,
    inner: &'a str,
}

/// Affine function of `t` through two points.
fn line_through(name: &str, t0: &Rational, v0: &Rational, t1: &Rational, v1: &Rational) -> Polynomial {
    let slope = (v1 - v0) / (t1 - t0);
    Polynomial::affine(name, v0 - &slope * t0, slope)
}

impl FlagProblem<'_> {
    fn tau(&self, t: &Rational) -> Result<Rational, ZariskiError> {
        pseff_threshold(self.s, &self.a.at(t), self.z)
    }

    fn cells_at(&self, t: &Rational) -> Result<Vec<SweepCell>, ZariskiError> {
        let tau = self.tau(t)?;
        if tau.is_zero() {
            return Ok(vec![]);
        }
        sweep(self.s, &self.a.at(t), &self.neg_z, &Rational::zero(), &tau)
    }

    /// `A(t) − s·Z` with `t` outer and `s` inner.
    fn family_poly(&self) -> Vec<Polynomial> {
        let s = Polynomial::inner_var(self.outer, self.inner);
        self.a
            .polys(self.outer)
            .into_iter()
            .zip(self.z)
            .map(|(p, z)| &p.with_names(self.outer, self.inner) - &s.scale(z))
            .collect()
    }

    /// Solves an affine `e(t, s) = 0` for `s`.
    fn solve_for_s(&self, e: &Polynomial) -> Result<Polynomial, ZariskiError> {
        let e01 = e.coefficient(0, 1);
        if e.degree() > 1 || e01.is_zero() {
            return Err(ZariskiError::WallCrossingDegeneracy(format!("wall {e} is not a graph over t")));
        }
        Ok(Polynomial::affine(
            self.outer,
            -e.coefficient(0, 0) / &e01,
            -e.coefficient(1, 0) / &e01,
        ))
    }

    /// Certifies `τ` affine on `[a, b]` (it is concave, so agreement with the
    /// chord at the midpoint suffices), or returns a kink candidate.
    fn tau_line(&self, a: &Rational, b: &Rational) -> Result<Result<Polynomial, Rational>, ZariskiError> {
        let (ta, tb) = (self.tau(a)?, self.tau(b)?);
        let m = (a + b) / int(2);
        if self.tau(&m)? == (&ta + &tb) / int(2) {
            return Ok(Ok(line_through(self.outer, a, &ta, b, &tb)));
        }
        let end_line = |x: &Rational, tx: &Rational, toward: &Rational| -> Result<Polynomial, ZariskiError> {
            let mut delta = (toward - x) / int(4);
            for _ in 0..64 {
                let x1 = x + &delta;
                let x2 = x + &delta + &delta;
                let (t1, t2) = (self.tau(&x1)?, self.tau(&x2)?);
                if t1 == (tx + &t2) / int(2) {
                    return Ok(line_through(self.outer, x, tx, &x2, &t2));
                }
                delta /= int(2);
            }
            Err(ZariskiError::WallCrossingDegeneracy(fmt_rational(x)))
        };
        let la = end_line(a, &ta, b)?;
        let lb = end_line(b, &tb, a)?;
        let ds = la.coefficient(1, 0) - lb.coefficient(1, 0);
        if ds.is_zero() {
            return Err(ZariskiError::WallCrossingDegeneracy(fmt_rational(&m)));
        }
        let kink = (lb.coefficient(0, 0) - la.coefficient(0, 0)) / ds;
        if &kink <= a || &kink >= b {
            return Err(ZariskiError::WallCrossingDegeneracy(fmt_rational(&kink)));
        }
        Ok(Err(kink))
    }

    fn chamber(&self, a: &Rational, b: &Rational, depth: usize) -> Result<Vec<FlagChamber>, ZariskiError> {
        if depth > MAX_DEPTH {
            return Err(ZariskiError::WallCrossingDegeneracy(format!("[{a}, {b}]")));
        }
        let tau = match self.tau_line(a, b)? {
            Ok(line) => line,
            Err(kink) => return self.split(a, b, &[kink], depth),
        };
        if tau.is_zero() {
            return Ok(vec![FlagChamber {
                lo: a.clone(),
                hi: b.clone(),
                cells: vec![],
            }]);
        }
        let m = (a + b) / int(2);
        let cells = self.cells_at(&m)?;
        let fam = self.family_poly();
        let mut boundaries = vec![Polynomial::zero().with_names(self.outer, "")];
        let mut built = Vec::new();
        for cell in &cells {
            let upper = match &cell.event {
                Event::End => tau.clone(),
                Event::Enters(i) => {
                    let p = cell.data.positive_poly(&fam);
                    let c: Vec<Polynomial> = self.s.negative_curves[*i]
                        .vector
                        .iter()
                        .map(|x| Polynomial::constant(x.clone()))
                        .collect();
                    self.solve_for_s(&self.s.pair_poly(&p, &c))?
                }
                Event::Leaves(i) => {
                    let j = cell.data.indices.iter().position(|x| x == i).expect("support index");
                    self.solve_for_s(&cell.data.coefficients_poly(&fam)[j])?
                }
            };
            boundaries.push(upper);
            built.push(cell);
        }
        // the walls must stay ordered on the open interval
        let mut cuts = Vec::new();
        for w in boundaries.windows(2) {
            let diff = &w[1] - &w[0];
            let slope = diff.coefficient(1, 0);
            if !slope.is_zero() {
                let root = -diff.coefficient(0, 0) / slope;
                if &root > a && &root < b {
                    cuts.push(root);
                }
            }
        }
        if !cuts.is_empty() {
            return self.split(a, b, &cuts, depth);
        }
        // the predicted structure must match fresh sweeps off the midpoint
        for frac in [(1, 4), (3, 4)] {
            let t = a + (b - a) * Rational::new(frac.0.into(), frac.1.into());
            let fresh = self.cells_at(&t)?;
            let same = fresh.len() == built.len()
                && fresh.iter().zip(&built).zip(boundaries.windows(2)).all(|((f, c), w)| {
                    f.data.indices == c.data.indices && f.lo == w[0].eval(&t) && f.hi == w[1].eval(&t)
                });
            if !same {
                return self.split(a, b, &[m], depth);
            }
        }
        let mut out = Vec::new();
        for (cell, w) in built.iter().zip(boundaries.windows(2)) {
            let p = cell.data.positive_poly(&fam);
            out.push(FlagCell {
                lower: w[0].clone(),
                upper: w[1].clone(),
                support: support_labels(self.s, &cell.data),
                volume: self.s.pair_poly(&p, &p).with_names(self.outer, self.inner),
                positive: p,
            });
        }
        Ok(vec![FlagChamber {
            lo: a.clone(),
            hi: b.clone(),
            cells: out,
        }])
    }

    fn split(&self, a: &Rational, b: &Rational, cuts: &[Rational], depth: usize) -> Result<Vec<FlagChamber>, ZariskiError> {
        let mut points = vec![a.clone()];
        let mut cuts = cuts.to_vec();
        cuts.sort();
        cuts.dedup();
        points.extend(cuts);
        points.push(b.clone());
        let mut out = Vec::new();
        for w in points.windows(2) {
            out.extend(self.chamber(&w[0], &w[1], depth + 1)?);
        }
        Ok(out)
    }
}

fn same_cells(x: &FlagChamber, y: &FlagChamber) -> bool {
    x.cells.len() == y.cells.len()
        && x.cells.iter().zip(&y.cells).all(|(a, b)| {
            a.support == b.support && a.lower == b.lower && a.upper == b.upper && a.volume == b.volume
        })
}

/// Two-parameter cell structure of `vol(A(t) − s·Z)` for `0 ≤ s ≤ τ(t)`,
/// with `A(t)` given per `t`-chamber.
pub fn two_param_flag_volume(
    s: &SurfaceModel,
    family: &[Chamber],
    z: &[Rational],
    outer: &str,
    inner: &str,
) -> Result<FlagVolume, ZariskiError> {
    check_dim(s, z)?;
    let mut chambers: Vec<FlagChamber> = Vec::new();
    for ch in family {
        check_dim(s, &ch.positive.constant)?;
        if ch.lo >= ch.hi {
            debug!("dropping degenerate t-chamber [{}, {}]", ch.lo, ch.hi);
            continue;
        }
        let problem = FlagProblem {
            s,
            a: &ch.positive,
            z,
            neg_z: z.iter().map(|x| -x).collect(),
            outer,
            inner,
        };
        for piece in problem.chamber(&ch.lo, &ch.hi, 0)? {
            match chambers.last_mut() {
                Some(last) if last.hi == piece.lo && same_cells(last, &piece) => last.hi = piece.hi,
                _ => chambers.push(piece),
            }
        }
    }
    Ok(FlagVolume {
        outer: outer.to_string(),
        inner: inner.to_string(),
        chambers,
    })
}

/// `vol(base − t·direction)` on a threefold from declared chambers, each
/// certified at its endpoints: the negative part is a nonnegative combination
/// of the declared exceptional divisors and the positive part pairs
/// nonnegatively with every declared curve. Both are affine in `t`.
pub fn threefold_volume_certified(
    m: &ThreefoldModel,
    base: &[Rational],
    direction: &[Rational],
    chambers: &[Chamber],
    var: &str,
) -> Result<VolumeFunction, ZariskiError> {
    let r = m.rank();
    for v in [base, direction] {
        if v.len() != r {
            return Err(ZariskiError::DimensionMismatch {
                expected: r,
                got: v.len(),
            });
        }
    }
    let family = AffineClass::family(base, direction);
    let exceptional: Vec<Vec<Rational>> = m.exceptional.iter().map(|e| e.vector.clone()).collect();
    let mut pieces = Vec::new();
    let mut meta = Vec::new();
    for ch in chambers {
        if ch.positive.dim() != r {
            return Err(ZariskiError::DimensionMismatch {
                expected: r,
                got: ch.positive.dim(),
            });
        }
        if ch.lo >= ch.hi {
            debug!("dropping degenerate chamber [{}, {}]", ch.lo, ch.hi);
            continue;
        }
        let neg = family.sub(&ch.positive);
        let mut support = Vec::new();
        for t in [&ch.lo, &ch.hi] {
            let n = neg.at(t);
            let coeffs = if n.iter().all(Zero::is_zero) {
                Some(vec![Rational::zero(); exceptional.len()])
            } else {
                lp::cone_membership(&exceptional, &n)
            };
            let Some(coeffs) = coeffs else {
                return Err(ZariskiError::CertificateViolation(format!(
                    "negative part {} at t = {t} is not a nonnegative combination of exceptional divisors",
                    crate::intersect::format_class(&n, &m.basis)
                )));
            };
            for (e, c) in m.exceptional.iter().zip(coeffs) {
                if c.is_positive() && !support.contains(&e.label) {
                    support.push(e.label.clone());
                }
            }
            let p = ch.positive.at(t);
            for c in &m.curves {
                let v = m.curve_pairing(&p, c);
                if v.is_negative() {
                    return Err(ZariskiError::CertificateViolation(format!(
                        "positive part pairs to {v} with curve {} at t = {t}",
                        c.label
                    )));
                }
            }
        }
        let vol = m.cube_poly(&ch.positive.polys(var))?.with_names(var, "");
        pieces.push(Piece {
            lo: ch.lo.clone(),
            hi: ch.hi.clone(),
            poly: vol,
            label: Some(support.join(",")),
        });
        meta.push(VolumeChamber {
            lo: ch.lo.clone(),
            hi: ch.hi.clone(),
            positive: ch.positive.clone(),
            support,
        });
    }
    let function = PiecewisePolynomial::new(pieces).map_err(|e| match e {
        ExactError::Discontinuous { at, left, right } => {
            ZariskiError::CertificateViolation(format!("volume jumps at {at}: {left} vs {right}"))
        }
        other => other.into(),
    })?;
    Ok(VolumeFunction {
        function,
        chambers: meta,
        certificate: "certified relative to declared curves".into(),
    })
}

/// Positive part of a threefold family at a point, for diagnostics.
pub fn negative_part_at(family: &AffineClass, chamber: &Chamber, t: &Rational) -> Vec<Rational> {
    sub_vec(&family.at(t), &chamber.positive.at(t))
}
