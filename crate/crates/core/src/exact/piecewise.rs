use std::fmt;

use num_traits::{Signed, Zero};

use super::poly::Polynomial;
use super::rational::{fmt_rational, rational_sqrt, Rational};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub poly: Polynomial,
    pub label: Option<String>,
}

/// Continuous function on a closed rational interval, polynomial on each
/// closed sub-interval. Pieces abut exactly and agree at shared endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    pieces: Vec<Piece>,
}

/// Left/right derivative comparison at an interior breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Record {
    pub at: Rational,
    pub left: Rational,
    pub right: Rational,
    pub equal: bool,
}

impl PiecewisePolynomial {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, ExactError> {
        if pieces.is_empty() {
            return Err(ExactError::Malformed("no pieces".into()));
        }
        for p in &pieces {
            if !p.poly.is_univariate() {
                return Err(ExactError::Malformed(format!(
                    "piece on [{}, {}] is not univariate",
                    p.lo, p.hi
                )));
            }
            if p.lo >= p.hi {
                return Err(ExactError::EmptyInterval {
                    lo: fmt_rational(&p.lo),
                    hi: fmt_rational(&p.hi),
                });
            }
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(ExactError::Gap {
                    left: fmt_rational(&w[0].hi),
                    right: fmt_rational(&w[1].lo),
                });
            }
            let x = &w[0].hi;
            let (l, r) = (w[0].poly.eval(x), w[1].poly.eval(x));
            if l != r {
                return Err(ExactError::Discontinuous {
                    at: fmt_rational(x),
                    left: fmt_rational(&l),
                    right: fmt_rational(&r),
                });
            }
        }
        Ok(PiecewisePolynomial { pieces })
    }

    /// Convenience constructor from `(lo, hi, poly)` triples.
    pub fn from_parts(
        parts: impl IntoIterator<Item = (Rational, Rational, Polynomial)>,
    ) -> Result<Self, ExactError> {
        Self::new(
            parts
                .into_iter()
                .map(|(lo, hi, poly)| Piece {
                    lo,
                    hi,
                    poly,
                    label: None,
                })
                .collect(),
        )
    }

    pub fn single(lo: Rational, hi: Rational, poly: Polynomial) -> Result<Self, ExactError> {
        Self::from_parts([(lo, hi, poly)])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (
            self.pieces[0].lo.clone(),
            self.pieces.last().unwrap().hi.clone(),
        )
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces[1..].iter().map(|p| p.lo.clone()).collect()
    }

    /// Value at `x`; at a breakpoint both pieces agree by construction.
    pub fn eval(&self, x: &Rational) -> Result<Rational, ExactError> {
        let (lo, hi) = self.domain();
        if x < &lo || x > &hi {
            return Err(self.domain_error(x, x));
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| &p.lo <= x && x <= &p.hi)
            .expect("domain covered");
        Ok(piece.poly.eval(x))
    }

    fn domain_error(&self, a: &Rational, b: &Rational) -> ExactError {
        let (lo, hi) = self.domain();
        ExactError::Domain {
            a: fmt_rational(a),
            b: fmt_rational(b),
            lo: fmt_rational(&lo),
            hi: fmt_rational(&hi),
        }
    }

    /// Exact `∫_a^b f`. Reversed bounds give the negated integral.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
        if a > b {
            return self.integrate(b, a).map(|v| -v);
        }
        let (lo, hi) = self.domain();
        if a < &lo || b > &hi {
            return Err(self.domain_error(a, b));
        }
        let mut total = Rational::zero();
        for p in &self.pieces {
            let from = if &p.lo > a { &p.lo } else { a };
            let to = if &p.hi < b { &p.hi } else { b };
            if from < to {
                total += p.poly.integrate(from, to);
            }
        }
        Ok(total)
    }

    pub fn integrate_all(&self) -> Rational {
        let (lo, hi) = self.domain();
        self.integrate(&lo, &hi).expect("own domain")
    }

    /// One record per interior breakpoint comparing one-sided derivatives.
    pub fn check_c1(&self) -> Vec<C1Record> {
        self.pieces
            .windows(2)
            .map(|w| {
                let at = w[0].hi.clone();
                let left = w[0].poly.derivative().eval(&at);
                let right = w[1].poly.derivative().eval(&at);
                let equal = left == right;
                C1Record {
                    at,
                    left,
                    right,
                    equal,
                }
            })
            .collect()
    }

    /// `g(x) = f(c·x)` on the domain scaled by `1/c` (`c > 0`).
    pub fn rescale(&self, c: &Rational) -> Result<Self, ExactError> {
        if !c.is_positive() {
            return Err(ExactError::Malformed("rescale factor must be positive".into()));
        }
        let name = self.pieces[0].poly.names().0.to_string();
        let name = if name.is_empty() { "t".to_string() } else { name };
        let cx = Polynomial::var(&name).scale(c);
        Self::new(
            self.pieces
                .iter()
                .map(|p| Piece {
                    lo: &p.lo / c,
                    hi: &p.hi / c,
                    poly: p.poly.compose(&cx),
                    label: p.label.clone(),
                })
                .collect(),
        )
    }

    /// Merges adjacent pieces that carry the same polynomial.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            match out.last_mut() {
                Some(last) if last.poly == p.poly => last.hi = p.hi.clone(),
                _ => out.push(p.clone()),
            }
        }
        PiecewisePolynomial { pieces: out }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| x <= super::rational::to_f64(&p.hi))
            .unwrap_or_else(|| self.pieces.last().unwrap());
        piece.poly.eval_f64(x, 0.0)
    }
}

impl fmt::Display for PiecewisePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} on [{}, {}]", p.poly, p.lo, p.hi)?;
        }
        Ok(())
    }
}

/// All roots of a univariate polynomial of degree at most 2 inside `[lo, hi]`,
/// sorted ascending. Irrational roots inside the interval are an error.
pub fn rational_roots_in_interval(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<Rational>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::Malformed("zero polynomial has no isolated roots".into()));
    }
    if !p.is_univariate() || p.degree() > 2 {
        return Err(ExactError::Malformed(format!(
            "root location needs a univariate polynomial of degree <= 2, got {p}"
        )));
    }
    let inside = |r: &Rational| lo <= r && r <= hi;
    let c = p.coefficient(0, 0);
    let b = p.coefficient(1, 0);
    let a = p.coefficient(2, 0);
    let mut roots = match p.degree() {
        0 => vec![],
        1 => vec![-c / b],
        _ => {
            let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
            if disc.is_negative() {
                vec![]
            } else if let Some(sq) = rational_sqrt(&disc) {
                let two_a = &a + &a;
                let mut r = vec![(-&b - &sq) / &two_a, (-&b + &sq) / &two_a];
                r.dedup();
                r
            } else {
                // irrational pair: never equal to an endpoint, so a sign change
                // (or an interior vertex of opposite sign) detects one inside
                let (plo, phi) = (p.eval(lo), p.eval(hi));
                let vertex = -&b / (&a + &a);
                let crosses = plo.is_positive() != phi.is_positive()
                    || (inside(&vertex)
                        && plo.is_positive() == phi.is_positive()
                        && p.eval(&vertex).is_positive() != plo.is_positive());
                if crosses {
                    return Err(ExactError::IrrationalWall {
                        poly: p.to_string(),
                        lo: fmt_rational(lo),
                        hi: fmt_rational(hi),
                    });
                }
                vec![]
            }
        }
    };
    roots.retain(inside);
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn sing_line_volume() -> PiecewisePolynomial {
        PiecewisePolynomial::from_parts([
            (int(0), int(1), Polynomial::parse("22 - 6*t^2 - 4*t^3").unwrap()),
            (
                int(1),
                int(2),
                Polynomial::parse("96 - 144*t + 72*t^2 - 12*t^3").unwrap(),
            ),
        ])
        .unwrap()
    }

    #[test]
    fn cube_integral_is_quarter() {
        let f = PiecewisePolynomial::single(
            int(0),
            int(1),
            Polynomial::parse("1 - 3*u + 3*u^2 - u^3").unwrap(),
        )
        .unwrap();
        assert_eq!(f.integrate(&int(0), &int(1)).unwrap(), rat(1, 4));
    }

    #[test]
    fn zero_integrand() {
        let f = PiecewisePolynomial::single(int(0), int(2), Polynomial::zero()).unwrap();
        assert_eq!(f.integrate(&int(0), &int(2)).unwrap(), int(0));
    }

    #[test]
    fn sing_line_first_piece_integral() {
        assert_eq!(sing_line_volume().integrate(&int(0), &int(1)).unwrap(), int(19));
    }

    #[test]
    fn integration_outside_domain_fails() {
        let err = sing_line_volume().integrate(&int(0), &int(3)).unwrap_err();
        assert!(matches!(err, ExactError::Domain { .. }));
    }

    #[test]
    fn c1_failure_of_sing_line_volume() {
        let recs = sing_line_volume().check_c1();
        assert_eq!(
            recs,
            vec![C1Record {
                at: int(1),
                left: int(-24),
                right: int(-36),
                equal: false
            }]
        );
    }

    #[test]
    fn c1_tangent_gluing_and_single_piece() {
        let f = PiecewisePolynomial::from_parts([
            (int(0), int(1), Polynomial::parse("t^2").unwrap()),
            (int(1), int(2), Polynomial::parse("-1 + 2*t").unwrap()),
        ])
        .unwrap();
        assert_eq!(
            f.check_c1(),
            vec![C1Record {
                at: int(1),
                left: int(2),
                right: int(2),
                equal: true
            }]
        );
        let g = PiecewisePolynomial::single(int(0), int(2), Polynomial::parse("t^2").unwrap())
            .unwrap();
        assert!(g.check_c1().is_empty());
    }

    #[test]
    fn discontinuous_and_gapped_data_rejected() {
        let gap = PiecewisePolynomial::from_parts([
            (int(0), int(1), Polynomial::parse("t").unwrap()),
            (int(2), int(3), Polynomial::parse("t").unwrap()),
        ]);
        assert!(matches!(gap, Err(ExactError::Gap { .. })));
        let jump = PiecewisePolynomial::from_parts([
            (int(0), int(1), Polynomial::parse("t").unwrap()),
            (int(1), int(2), Polynomial::parse("2*t").unwrap()),
        ]);
        assert!(matches!(jump, Err(ExactError::Discontinuous { .. })));
    }

    #[test]
    fn roots_in_interval() {
        let p = Polynomial::parse("-6 + 4*s").unwrap();
        assert_eq!(rational_roots_in_interval(&p, &int(0), &int(2)).unwrap(), vec![rat(3, 2)]);
        let p = Polynomial::parse("s").unwrap();
        assert_eq!(rational_roots_in_interval(&p, &int(0), &int(1)).unwrap(), vec![int(0)]);
        let p = Polynomial::parse("s^2 - 2").unwrap();
        assert!(matches!(
            rational_roots_in_interval(&p, &int(0), &int(2)),
            Err(ExactError::IrrationalWall { .. })
        ));
        // √2 is outside [0, 1]: no error, no roots
        assert!(rational_roots_in_interval(&p, &int(0), &int(1)).unwrap().is_empty());
        let p = Polynomial::parse("s^2 - 1/4").unwrap();
        assert_eq!(
            rational_roots_in_interval(&p, &int(-1), &int(1)).unwrap(),
            vec![rat(-1, 2), rat(1, 2)]
        );
    }

    #[test]
    fn rescale_divides_integral() {
        let f = sing_line_volume();
        let g = f.rescale(&int(3)).unwrap();
        assert_eq!(g.domain(), (int(0), rat(2, 3)));
        assert_eq!(g.integrate_all(), f.integrate_all() / int(3));
    }
}
