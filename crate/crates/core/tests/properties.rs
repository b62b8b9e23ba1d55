mod common;

use kstab_core::exact::linalg::{self, vec_from_i64 as v};
use kstab_core::exact::rational::{int, rat, to_f64};
use kstab_core::intersect::{
    bl_p3_quintic, blowup_p3_curve, blowup_v4_conic, dp4_surface, quadric_surface, sing_line_model, AffineClass,
    Chamber, ThreefoldModel,
};
use kstab_core::kstab::{divisor_s_invariant, model_flag, s_invariant};
use kstab_core::lattice::DEFAULT_ENUM_BOUND;
use kstab_core::model_file::{self, ModelFile};
use kstab_core::toric::{self, polar_dual};
use kstab_core::zariski::{threefold_volume_certified, zariski_decompose};
use kstab_core::{GramLattice, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

const BOUND: usize = DEFAULT_ENUM_BOUND;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn even_gram(max_det: i64) -> impl Strategy<Value = GramLattice> {
    (any::<u64>(), 1usize..=4).prop_map(move |(seed, rank)| common::random_even_gram(&mut common::rng(seed), rank, max_det))
}

fn sorted(mut xs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    xs.sort();
    xs
}

fn threefold_presets() -> Vec<ThreefoldModel> {
    vec![
        bl_p3_quintic(),
        blowup_v4_conic(),
        blowup_p3_curve(3, 0).unwrap(),
        sing_line_model(12, 0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discriminant_form_is_well_defined(l in even_gram(200), seed in any::<u64>()) {
        let disc = l.discriminant_group().unwrap();
        let mut rng = common::rng(seed);
        for x in disc.elements(BOUND).unwrap().iter().take(24) {
            let shift: Vec<Rational> = (0..l.rank()).map(|_| int(rng.gen_range(-3..=3))).collect();
            let y: Vec<Rational> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
            prop_assert_eq!(disc.quadratic(x).unwrap(), disc.quadratic(&y).unwrap());
            prop_assert_eq!(disc.bilinear(x, x), disc.bilinear(&y, x));
        }
    }

    #[test]
    fn discriminant_order_is_abs_det(l in even_gram(200)) {
        let disc = l.discriminant_group().unwrap();
        prop_assert_eq!(disc.order(), l.determinant().abs());
        prop_assert_eq!(BigInt::from(disc.elements(BOUND).unwrap().len()), l.determinant().abs());
    }

    #[test]
    fn overlattice_determinant_law(l in even_gram(200)) {
        for o in l.even_overlattices(BOUND).unwrap() {
            let h = BigInt::from(o.subgroup_order);
            prop_assert_eq!(o.lattice.determinant() * &h * &h, l.determinant());
            prop_assert!(o.lattice.is_even());
            prop_assert_eq!(o.lattice.signature(), l.signature());
        }
    }

    #[test]
    fn overlattices_recover_their_isotropic_subgroups(l in even_gram(200)) {
        let disc = l.discriminant_group().unwrap();
        let mut seen = Vec::new();
        for o in l.even_overlattices(BOUND).unwrap() {
            let n = l.rank();
            let gens: Vec<Vec<Rational>> =
                (0..n).map(|j| disc.reduce(&(0..n).map(|i| o.basis_change[i][j].clone()).collect::<Vec<_>>())).collect();
            let mut group = vec![disc.zero()];
            let mut i = 0;
            while i < group.len() {
                for g in &gens {
                    let next = disc.add(&group[i], g);
                    if !group.contains(&next) {
                        group.push(next);
                    }
                }
                i += 1;
            }
            prop_assert_eq!(group.len(), o.subgroup_order);
            for x in &group {
                prop_assert!(disc.quadratic(x).unwrap().0.is_zero());
            }
            let group = sorted(group);
            prop_assert!(!seen.contains(&group));
            seen.push(group);
        }
    }

    #[test]
    fn primitivity_forced_iff_no_proper_overlattice(l in even_gram(200)) {
        let forced = l.is_primitivity_forced(BOUND).unwrap();
        prop_assert_eq!(forced, l.even_overlattices(BOUND).unwrap().len() == 1);
    }

    #[test]
    fn isotropic_elements_match_brute_force(l in even_gram(200)) {
        let disc = l.discriminant_group().unwrap();
        let brute: Vec<Vec<Rational>> = disc
            .elements(BOUND)
            .unwrap()
            .into_iter()
            .filter(|x| disc.quadratic(x).unwrap().0.is_zero())
            .collect();
        prop_assert_eq!(sorted(l.isotropic_elements(BOUND).unwrap()), sorted(brute));
    }

    #[test]
    fn signature_and_det_are_basis_invariant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let l = common::random_even_gram(&mut rng, 3, 500);
        let u = common::random_unimodular(&mut rng);
        let m: Vec<Vec<i64>> = u.iter().map(|r| r.to_vec()).collect();
        let k = l.change_basis(&m).unwrap();
        prop_assert_eq!(k.signature(), l.signature());
        prop_assert_eq!(k.determinant(), l.determinant());
        prop_assert_eq!(k.discriminant_group().unwrap().factors, l.discriminant_group().unwrap().factors);
    }

    #[test]
    fn triple_product_is_symmetric_and_linear(
        which in 0usize..4,
        a in prop::collection::vec(small_rational(), 4),
        b in prop::collection::vec(small_rational(), 4),
        c in prop::collection::vec(small_rational(), 4),
        k in small_rational(),
    ) {
        let m = &threefold_presets()[which];
        let r = m.rank();
        let (a, b, c) = (&a[..r], &b[..r], &c[..r]);
        let abc = m.triple_product(a, b, c).unwrap();
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(&m.triple_product(x, y, z).unwrap(), &abc);
        }
        let ka_b: Vec<Rational> = a.iter().zip(b).map(|(x, y)| &k * x + y).collect();
        let lhs = m.triple_product(&ka_b, b, c).unwrap();
        prop_assert_eq!(lhs, &k * &abc + m.triple_product(b, b, c).unwrap());
    }

    #[test]
    fn curve_blowup_anticanonical_volume(d in 1i64..=20, g in 0i64..=30) {
        let m = blowup_p3_curve(d, g).unwrap();
        let expected = int(62 - 8 * d + 2 * g);
        prop_assert_eq!(m.cube(&v(&[4, -1])).unwrap(), expected.clone());
        prop_assert_eq!(m.anticanonical_volume(), expected);
    }

    #[test]
    fn s_invariant_scales_inversely(label in prop::sample::select(vec!["E", "Qtilde"]), c in positive_rational()) {
        let m = bl_p3_quintic();
        let d = m.divisor(label).unwrap().clone();
        let (_, s) = divisor_s_invariant(&m, label).unwrap();
        let class: Vec<Rational> = d.class.iter().map(|x| x * &c).collect();
        let chambers: Vec<Chamber> = d
            .chambers
            .iter()
            .map(|ch| Chamber {
                lo: &ch.lo / &c,
                hi: &ch.hi / &c,
                positive: AffineClass::new(
                    ch.positive.constant.clone(),
                    ch.positive.slope.iter().map(|x| x * &c).collect(),
                ),
            })
            .collect();
        let vol = threefold_volume_certified(&m, &m.anticanonical, &class, &chambers, "t").unwrap();
        prop_assert_eq!(s_invariant(&vol.function, &m.anticanonical_volume()).unwrap(), &s / &c);
    }

    #[test]
    fn zariski_decomposition_is_certified_and_homogeneous(seed in any::<u64>(), c in positive_rational()) {
        let s = dp4_surface();
        let d = common::random_pseff(&s, &mut common::rng(seed));
        let z = zariski_decompose(&s, &d).unwrap();
        for curve in &s.negative_curves {
            prop_assert!(!s.pair(&z.positive, &curve.vector).is_negative());
        }
        for (label, coeff) in &z.negative {
            let curve = s.negative_curves.iter().find(|x| &x.label == label).unwrap();
            prop_assert!(!coeff.is_negative());
            prop_assert!(s.pair(&z.positive, &curve.vector).is_zero());
        }
        if !z.support_gram.is_empty() {
            prop_assert!(linalg::is_negative_definite(&z.support_gram));
        }
        prop_assert_eq!(&z.volume, &s.square(&z.positive));
        let cd: Vec<Rational> = d.iter().map(|x| x * &c).collect();
        let zc = zariski_decompose(&s, &cd).unwrap();
        prop_assert_eq!(zc.positive, z.positive.iter().map(|x| x * &c).collect::<Vec<_>>());
        prop_assert_eq!(zc.volume, &z.volume * &c * &c);
    }

    #[test]
    fn piecewise_integrals_are_additive(seed in any::<u64>(), frac in 0i64..=8) {
        let p = common::random_piecewise(&mut common::rng(seed));
        let (lo, hi) = p.domain();
        let mid = &lo + (&hi - &lo) * rat(frac, 8);
        prop_assert_eq!(
            p.integrate(&lo, &mid).unwrap() + p.integrate(&mid, &hi).unwrap(),
            p.integrate_all()
        );
    }

    #[test]
    fn model_files_round_trip(g in 2i64..=30, k in 0i64..=6, d in 1i64..=12, h in 0i64..=20) {
        let mut models = vec![ModelFile::Threefold(blowup_p3_curve(d, h).unwrap())];
        if let Ok(m) = sing_line_model(g, k) {
            models.push(ModelFile::Threefold(m));
        }
        for m in models {
            let text = model_file::serialize(&m);
            prop_assert_eq!(model_file::parse(&text).unwrap(), m);
        }
    }

    #[test]
    fn polar_dual_is_an_involution_up_to_gl3z(seed in any::<u64>(), which in 0usize..5) {
        let bases = [toric::prism(), toric::cube(), toric::octahedron(), toric::simplex(), toric::blown_up_simplex()];
        let u = common::random_unimodular(&mut common::rng(seed));
        let p = bases[which].transform(&u).unwrap();
        if toric::is_reflexive(&p).unwrap() {
            let back = polar_dual(&polar_dual(&p).unwrap()).unwrap();
            let mut a = back.vertices().to_vec();
            let mut b = p.vertices().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flag_value_matches_quadrature_and_halves_under_doubling(picks in prop::collection::vec(0usize..64, 1..=2)) {
        let m = bl_p3_quintic();
        let s = dp4_surface();
        let gens = s.effective_generators();
        let mut z = vec![Rational::zero(); s.rank()];
        for i in picks {
            for (zi, gi) in z.iter_mut().zip(&gens[i % gens.len()].vector) {
                *zi += gi;
            }
        }
        let f = model_flag(&m, &s, &z).unwrap();
        let exact = to_f64(&f.cells.integral());
        let numeric = common::flag_quadrature(&f.cells);
        prop_assert!((exact - numeric).abs() <= 1e-8 * exact.abs().max(1.0), "{exact} vs {numeric}");
        let z2: Vec<Rational> = z.iter().map(|x| x * int(2)).collect();
        prop_assert_eq!(model_flag(&m, &s, &z2).unwrap().value, &f.value / int(2));
    }

    #[test]
    fn quadric_flag_halves_under_doubling(a in 1i64..=3, b in 0i64..=3) {
        let m = bl_p3_quintic();
        let s = quadric_surface();
        let z = v(&[a, b]);
        let f = model_flag(&m, &s, &z).unwrap();
        let z2 = v(&[2 * a, 2 * b]);
        prop_assert_eq!(model_flag(&m, &s, &z2).unwrap().value, &f.value / int(2));
    }
}
