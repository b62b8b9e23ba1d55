//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use kstab_core::exact::linalg::{self, Matrix};
use kstab_core::exact::rational::{fmt_rational, int, rat, to_f64};
use kstab_core::exact::Piece;
use kstab_core::intersect::SurfaceModel;
use kstab_core::zariski::FlagVolume;
use kstab_core::{GramLattice, PiecewisePolynomial, Polynomial, Rational};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Prints one verdict line and returns whether every check held.
pub fn report(criterion: u32, title: &str, checks: &[(String, bool)]) -> bool {
    let ok = checks.iter().all(|(_, b)| *b);
    println!("criterion {criterion} [{title}]: {}", if ok { "PASS" } else { "FAIL" });
    for (name, b) in checks {
        println!("    {} {name}", if *b { "ok  " } else { "FAIL" });
    }
    ok
}

pub fn eq_check<T: PartialEq + Show>(name: &str, expected: T, computed: T) -> (String, bool) {
    let ok = expected == computed;
    (format!("{name}: expected {}, computed {}", expected.show(), computed.show()), ok)
}

/// Compact rendering for check lines.
pub trait Show {
    fn show(&self) -> String;
}

impl Show for Rational {
    fn show(&self) -> String {
        fmt_rational(self)
    }
}

impl Show for Polynomial {
    fn show(&self) -> String {
        self.to_string()
    }
}

macro_rules! show_display {
    ($($t:ty),*) => {
        $(impl Show for $t {
            fn show(&self) -> String {
                self.to_string()
            }
        })*
    };
}

show_display!(bool, usize, i64, u64, i32, String, &str, num_bigint::BigInt);

impl<T: Show> Show for Vec<T> {
    fn show(&self) -> String {
        format!("[{}]", self.iter().map(Show::show).collect::<Vec<_>>().join(", "))
    }
}

impl<T: Show, const N: usize> Show for [T; N] {
    fn show(&self) -> String {
        format!("[{}]", self.iter().map(Show::show).collect::<Vec<_>>().join(", "))
    }
}

macro_rules! show_tuple {
    ($($name:ident),+) => {
        impl<$($name: Show),+> Show for ($($name,)+) {
            #[allow(non_snake_case)]
            fn show(&self) -> String {
                let ($($name,)+) = self;
                format!("({})", [$($name.show()),+].join(", "))
            }
        }
    };
}

show_tuple!(A, B);
show_tuple!(A, B, C);
show_tuple!(A, B, C, D);

// ---------------------------------------------------------------------------
// Zariski decomposition by exhaustive search over negative-definite supports

/// `(P, [(label, coefficient)])`.
pub type Decomposition = (Vec<Rational>, Vec<(String, Rational)>);

pub struct ExhaustiveOracle {
    curves: Vec<(String, Vec<Rational>)>,
    /// `pairs[a][b] = C_a · C_b`.
    pairs: Matrix,
    /// Each negative-definite support with the inverse of its Gram matrix.
    supports: Vec<(Vec<usize>, Matrix)>,
    gram: Matrix,
}

impl ExhaustiveOracle {
    /// Enumerates every subset of the declared negative curves whose Gram
    /// matrix is negative definite.
    pub fn new(s: &SurfaceModel) -> Self {
        let curves: Vec<(String, Vec<Rational>)> =
            s.negative_curves.iter().map(|c| (c.label.clone(), c.vector.clone())).collect();
        let pairs: Matrix = curves
            .iter()
            .map(|a| curves.iter().map(|b| s.pair(&a.1, &b.1)).collect())
            .collect();
        let sub = |set: &[usize]| -> Matrix { set.iter().map(|&a| set.iter().map(|&b| pairs[a][b].clone()).collect()).collect() };
        let mut supports = vec![(Vec::new(), Vec::new())];
        let mut frontier = vec![Vec::new()];
        while let Some(set) = frontier.pop() {
            let start = set.last().map_or(0, |&i| i + 1);
            for j in start..curves.len() {
                let mut next: Vec<usize> = set.clone();
                next.push(j);
                let g = sub(&next);
                if linalg::is_negative_definite(&g) {
                    let inv = linalg::inverse(&g).expect("definite");
                    supports.push((next.clone(), inv));
                    frontier.push(next);
                }
            }
        }
        ExhaustiveOracle {
            curves,
            pairs,
            supports,
            gram: s.gram.clone(),
        }
    }

    pub fn support_count(&self) -> usize {
        self.supports.len()
    }

    /// The unique support `S` with `N > 0` on `S`, `P·C = 0` on `S` and `P`
    /// nef against every declared curve. Returns `(P, [(label, coeff)])` for
    /// each admissible support (there must be exactly one).
    pub fn decompose(&self, d: &[Rational]) -> Vec<Decomposition> {
        let dc: Vec<Rational> = self.curves.iter().map(|(_, c)| linalg::bilinear(&self.gram, d, c)).collect();
        let mut out = Vec::new();
        for (set, inv) in &self.supports {
            let rhs: Vec<Rational> = set.iter().map(|&a| dc[a].clone()).collect();
            let coeffs = linalg::mat_vec(inv, &rhs);
            if coeffs.iter().any(|c| !c.is_positive()) {
                continue;
            }
            let nef = (0..self.curves.len()).all(|b| {
                let mut pc = dc[b].clone();
                for (&a, c) in set.iter().zip(&coeffs) {
                    pc -= c * &self.pairs[a][b];
                }
                !pc.is_negative()
            });
            if !nef {
                continue;
            }
            let mut p = d.to_vec();
            for (&a, c) in set.iter().zip(&coeffs) {
                for (pi, ci) in p.iter_mut().zip(&self.curves[a].1) {
                    *pi -= c * ci;
                }
            }
            let labels = set.iter().map(|&a| self.curves[a].0.clone()).zip(coeffs).collect();
            out.push((p, labels));
        }
        out
    }
}

/// A random nonnegative combination of the effective generators.
pub fn random_pseff(s: &SurfaceModel, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let gens = s.effective_generators();
    let mut d = vec![Rational::zero(); s.rank()];
    let picks = rng.gen_range(1..=6);
    for _ in 0..picks {
        let g = &gens[rng.gen_range(0..gens.len())];
        let c = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
        for (di, gi) in d.iter_mut().zip(&g.vector) {
            *di += &c * gi;
        }
    }
    // sometimes add a multiple of the anticanonical class 3L - Σe (ample)
    if rng.gen_bool(0.5) {
        let c = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
        d[0] += &c * int(3);
        for di in d.iter_mut().skip(1) {
            *di -= &c;
        }
    }
    d
}

// ---------------------------------------------------------------------------
// lattices

/// Random nondegenerate even Gram matrix of the given rank, `|det| ≤ max_det`.
pub fn random_even_gram(rng: &mut ChaCha8Rng, rank: usize, max_det: i64) -> GramLattice {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            g[i][i] = 2 * rng.gen_range(-4..=4);
            for j in 0..i {
                let v = rng.gen_range(-3..=3);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let d = linalg::det(&linalg::from_i64(&g));
        if d.is_zero() || d.abs() > int(max_det) {
            continue;
        }
        return GramLattice::new(g).expect("symmetric");
    }
}

// ---------------------------------------------------------------------------
// quadrature

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite 5-point Gauss–Legendre rule with `panels` panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            total += w * half * f(mid + half * x);
        }
    }
    total
}

/// Continuous random piecewise polynomial with 1–4 pieces of degree ≤ 5.
pub fn random_piecewise(rng: &mut ChaCha8Rng) -> PiecewisePolynomial {
    let n = rng.gen_range(1..=4);
    let mut bps = vec![rat(rng.gen_range(-12..=0), 4)];
    for _ in 0..n {
        let step = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let next = bps.last().unwrap() + step;
        bps.push(next);
    }
    let mut pieces = Vec::new();
    let mut carry: Option<Rational> = None;
    for w in bps.windows(2) {
        let deg = rng.gen_range(0..=5u32);
        let mut p = Polynomial::zero();
        for k in 0..=deg {
            let c = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            p = &p + &Polynomial::var("x").pow(k).scale(&c);
        }
        if let Some(v) = &carry {
            let shift = v - p.eval(&w[0]);
            p = &p + &Polynomial::constant(shift);
        }
        carry = Some(p.eval(&w[1]));
        pieces.push(Piece {
            lo: w[0].clone(),
            hi: w[1].clone(),
            poly: p,
            label: None,
        });
    }
    PiecewisePolynomial::new(pieces).expect("continuous by construction")
}

/// `Σ ∫∫ vol ds dt` of a flag cell structure by nested Gauss–Legendre.
pub fn flag_quadrature(f: &FlagVolume) -> f64 {
    let mut total = 0.0;
    for ch in &f.chambers {
        for cell in &ch.cells {
            total += gauss_legendre(
                |t| {
                    let lo = cell.lower.eval_f64(t, 0.0);
                    let hi = cell.upper.eval_f64(t, 0.0);
                    gauss_legendre(|s| cell.volume.eval_f64(t, s), lo, hi, 4)
                },
                to_f64(&ch.lo),
                to_f64(&ch.hi),
                8,
            );
        }
    }
    total
}

// ---------------------------------------------------------------------------
// GL3(Z)

/// Product of random elementary matrices, sign flips and transpositions.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..rng.gen_range(1..=6) {
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        match rng.gen_range(0..3) {
            0 if i != j => {
                let c = rng.gen_range(-2..=2);
                for row in m.iter_mut() {
                    row[i] += c * row[j];
                }
            }
            1 => {
                for row in m.iter_mut() {
                    row[i] = -row[i];
                }
            }
            _ => {
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }
    m
}

pub fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `|det(b − a, c − a, d − a)| / 6`.
pub fn tetra_volume(pts: &[[i64; 3]; 4]) -> Rational {
    let e = |k: usize| [pts[k][0] - pts[0][0], pts[k][1] - pts[0][1], pts[k][2] - pts[0][2]];
    let m = [e(1), e(2), e(3)];
    rat(det3(&m).abs(), 6)
}
