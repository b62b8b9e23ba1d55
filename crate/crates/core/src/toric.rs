//! Lattice polytopes in dimension 3: hull, polar duality, reflexivity,
//! exact volume and barycenter, and the barycenter criterion.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rational::{fmt_rational, int, parse_rational, Rational};

pub type Point3 = [Rational; 3];

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,
    #[error("origin is not in the interior")]
    OriginNotInterior,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("malformed vertex input: {0}")]
    Malformed(String),
}

/// Facet inequality `normal · x ≤ offset`, with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: [BigInt; 3],
    pub offset: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    vertices: Vec<Point3>,
    facets: Vec<Facet>,
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &Point3, b: &Point3) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn det3(a: &Point3, b: &Point3, c: &Point3) -> Rational {
    dot(a, &cross(b, c))
}

fn is_zero3(a: &Point3) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Scales a nonzero rational vector to a primitive integer vector.
fn primitive(v: &Point3) -> [BigInt; 3] {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    [&ints[0] / &g, &ints[1] / &g, &ints[2] / &g]
}

fn to_rat3(n: &[BigInt; 3]) -> Point3 {
    [
        Rational::from_integer(n[0].clone()),
        Rational::from_integer(n[1].clone()),
        Rational::from_integer(n[2].clone()),
    ]
}

pub fn point(x: i64, y: i64, z: i64) -> Point3 {
    [int(x), int(y), int(z)]
}

impl LatticePolytope {
    /// Convex hull of a finite point set.
    pub fn new(points: &[Point3]) -> Result<Self, ToricError> {
        let mut pts: Vec<Point3> = points.to_vec();
        pts.sort();
        pts.dedup();
        let n = pts.len();
        let mut facets: Vec<Facet> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let nrm = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                    if is_zero3(&nrm) {
                        continue;
                    }
                    let mut nrm = to_rat3(&primitive(&nrm));
                    let mut c = dot(&nrm, &pts[i]);
                    let (mut above, mut below) = (false, false);
                    for p in &pts {
                        match dot(&nrm, p).cmp(&c) {
                            Ordering::Greater => above = true,
                            Ordering::Less => below = true,
                            Ordering::Equal => {}
                        }
                    }
                    if above && below {
                        continue;
                    }
                    if above {
                        nrm = [-nrm[0].clone(), -nrm[1].clone(), -nrm[2].clone()];
                        c = -c;
                    }
                    if !above && !below {
                        return Err(ToricError::DegeneratePolytope);
                    }
                    let f = Facet {
                        normal: primitive(&nrm),
                        offset: c,
                    };
                    if !facets.contains(&f) {
                        facets.push(f);
                    }
                }
            }
        }
        if facets.len() < 4 {
            return Err(ToricError::DegeneratePolytope);
        }
        let vertices: Vec<Point3> = pts
            .into_iter()
            .filter(|p| {
                let normals: Vec<Point3> = facets
                    .iter()
                    .filter(|f| dot(&to_rat3(&f.normal), p) == f.offset)
                    .map(|f| to_rat3(&f.normal))
                    .collect();
                spans_space(&normals)
            })
            .collect();
        facets.sort_by(|a, b| a.normal.cmp(&b.normal));
        Ok(LatticePolytope { vertices, facets })
    }

    pub fn from_i64(points: &[[i64; 3]]) -> Result<Self, ToricError> {
        let pts: Vec<Point3> = points.iter().map(|p| point(p[0], p[1], p[2])).collect();
        Self::new(&pts)
    }

    /// One point per non-empty line, coordinates separated by whitespace or commas.
    pub fn parse(text: &str) -> Result<Self, ToricError> {
        let mut pts = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
                .filter(|s| !s.is_empty())
                .collect();
            if coords.len() != 3 {
                return Err(ToricError::Malformed(line.to_string()));
            }
            let mut p = point(0, 0, 0);
            for (slot, c) in p.iter_mut().zip(coords) {
                *slot = parse_rational(c).map_err(|_| ToricError::Malformed(line.to_string()))?;
            }
            pts.push(p);
        }
        Self::new(&pts)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(Rational::is_integer)
    }

    pub fn contains_origin_strictly(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// Image under an integer matrix (row-major).
    pub fn transform(&self, m: &[[i64; 3]; 3]) -> Result<Self, ToricError> {
        let pts: Vec<Point3> = self.vertices.iter().map(|v| apply(m, v)).collect();
        Self::new(&pts)
    }

    fn vertex_mean(&self) -> Point3 {
        let n = Rational::from_integer(self.vertices.len().into());
        let mut c = point(0, 0, 0);
        for v in &self.vertices {
            for i in 0..3 {
                c[i] += &v[i];
            }
        }
        c.map(|x| x / &n)
    }

    /// Signed tetrahedra `(apex, a, b, c)` over a fan triangulation of every
    /// facet, oriented so that interior apexes give positive volume.
    fn tetrahedra(&self, apex: &Point3) -> Vec<(Rational, Point3)> {
        let mut out = Vec::new();
        for f in &self.facets {
            let n = to_rat3(&f.normal);
            let mut on: Vec<Point3> = self.vertices.iter().filter(|v| dot(&n, v) == f.offset).cloned().collect();
            let v0 = on.remove(0);
            on.sort_by(|a, b| {
                let s = dot(&cross(&sub(a, &v0), &sub(b, &v0)), &n);
                Rational::zero().cmp(&s)
            });
            for w in on.windows(2) {
                let vol = det3(&sub(&v0, apex), &sub(&w[0], apex), &sub(&w[1], apex)) / int(6);
                let mut centroid = point(0, 0, 0);
                for p in [apex, &v0, &w[0], &w[1]] {
                    for i in 0..3 {
                        centroid[i] += &p[i] / int(4);
                    }
                }
                out.push((vol, centroid));
            }
        }
        out
    }

    /// Volume from a triangulation coned over `apex` (any point; signed pieces).
    pub fn volume_from(&self, apex: &Point3) -> Rational {
        self.tetrahedra(apex).into_iter().map(|(v, _)| v).sum()
    }

    pub fn volume(&self) -> Rational {
        self.volume_from(&self.vertex_mean())
    }

    pub fn barycenter_from(&self, apex: &Point3) -> Point3 {
        let tets = self.tetrahedra(apex);
        let total: Rational = tets.iter().map(|(v, _)| v.clone()).sum();
        let mut c = point(0, 0, 0);
        for (v, cen) in &tets {
            for i in 0..3 {
                c[i] += v * &cen[i];
            }
        }
        c.map(|x| x / &total)
    }

    pub fn barycenter(&self) -> Point3 {
        self.barycenter_from(&self.vertex_mean())
    }
}

fn spans_space(normals: &[Point3]) -> bool {
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            for k in j + 1..normals.len() {
                if !det3(&normals[i], &normals[j], &normals[k]).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

pub fn apply(m: &[[i64; 3]; 3], v: &Point3) -> Point3 {
    let row = |r: &[i64; 3]| &v[0] * int(r[0]) + &v[1] * int(r[1]) + &v[2] * int(r[2]);
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

/// `{ y : y·x ≥ −1 for all x ∈ P }`; a facet `n·x ≤ c` gives the vertex `−n/c`.
pub fn polar_dual(p: &LatticePolytope) -> Result<LatticePolytope, ToricError> {
    if !p.contains_origin_strictly() {
        return Err(ToricError::OriginNotInterior);
    }
    let pts: Vec<Point3> = p
        .facets
        .iter()
        .map(|f| to_rat3(&f.normal).map(|x| -x / &f.offset))
        .collect();
    LatticePolytope::new(&pts)
}

pub fn is_reflexive(p: &LatticePolytope) -> Result<bool, ToricError> {
    Ok(p.is_lattice() && polar_dual(p)?.is_lattice())
}

/// `3! · vol(P°)`, the anticanonical degree of the toric Fano whose fan is
/// spanned by the faces of `P`.
pub fn anticanonical_degree(p: &LatticePolytope) -> Result<Rational, ToricError> {
    if !is_reflexive(p)? {
        return Err(ToricError::NotReflexive);
    }
    Ok(polar_dual(p)?.volume() * int(6))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpsCheck {
    pub polystable: bool,
    pub barycenter: Point3,
}

/// Barycenter criterion: true iff the dual polytope has barycenter 0.
pub fn toric_kps_check(p: &LatticePolytope) -> Result<KpsCheck, ToricError> {
    if !is_reflexive(p)? {
        return Err(ToricError::NotReflexive);
    }
    let barycenter = polar_dual(p)?.barycenter();
    Ok(KpsCheck {
        polystable: is_zero3(&barycenter),
        barycenter,
    })
}

pub fn fmt_point(p: &Point3) -> String {
    format!("({}, {}, {})", fmt_rational(&p[0]), fmt_rational(&p[1]), fmt_rational(&p[2]))
}

/// Triangular prism over `conv{(−1,−1), (1,0), (0,1)}` of height 2.
pub fn prism() -> LatticePolytope {
    LatticePolytope::from_i64(&[
        [-1, -1, -1],
        [1, 0, -1],
        [0, 1, -1],
        [-1, -1, 1],
        [1, 0, 1],
        [0, 1, 1],
    ])
    .expect("valid polytope")
}

pub fn simplex() -> LatticePolytope {
    LatticePolytope::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]).expect("valid polytope")
}

pub fn octahedron() -> LatticePolytope {
    LatticePolytope::from_i64(&[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
        .expect("valid polytope")
}

pub fn cube() -> LatticePolytope {
    let mut pts = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                pts.push([x, y, z]);
            }
        }
    }
    LatticePolytope::from_i64(&pts).expect("valid polytope")
}

/// Fan polytope of the blowup of projective 3-space in a torus-fixed point.
pub fn blown_up_simplex() -> LatticePolytope {
    LatticePolytope::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [1, 1, 1]]).expect("valid polytope")
}
