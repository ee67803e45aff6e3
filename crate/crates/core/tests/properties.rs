use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use metric_affine::classify::quadric::normalize_point;
use metric_affine::formfile::{from_json, parse_poly, to_json};
use metric_affine::groups::{closure, enumerate_gl, gl_order, orthogonal_group, reflections, weak_orthogonal_group};
use metric_affine::homog::{drop, lift, AffineMap, HomogModel};
use metric_affine::matrix::{annihilator, same_span, unit_vector, Vector};
use metric_affine::transvect::delta_group;
use metric_affine::{Budget, FieldSpec, Mat, QForm, Scalar, Vars};

fn finite_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(3)),
        Just(FieldSpec::Gf4),
        Just(FieldSpec::Prime(5)),
        Just(FieldSpec::Prime(7)),
    ]
}

fn order(f: FieldSpec) -> u8 {
    f.order().unwrap() as u8
}

fn element(f: FieldSpec) -> impl Strategy<Value = Scalar> {
    (0..order(f)).prop_map(move |i| f.from_index(i).unwrap())
}

fn vector(f: FieldSpec, n: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(element(f), n)
}

fn form(f: FieldSpec, n: usize) -> impl Strategy<Value = QForm> {
    vector(f, n * (n + 1) / 2).prop_map(move |u| QForm::new(f, n, u).unwrap())
}

fn matrix(f: FieldSpec, n: usize) -> impl Strategy<Value = Mat> {
    vector(f, n * n).prop_map(move |e| Mat::from_entries(f, n, n, e).unwrap())
}

fn invertible(f: FieldSpec, n: usize) -> impl Strategy<Value = Mat> {
    matrix(f, n).prop_filter("invertible", Mat::is_invertible)
}

fn field_form(max_dim: usize) -> impl Strategy<Value = QForm> {
    (finite_field(), 0..=max_dim).prop_flat_map(|(f, n)| form(f, n))
}

/// Field and dimension pairs whose full matrix space fits the default budget.
fn small_case() -> impl Strategy<Value = (FieldSpec, usize)> {
    prop_oneof![
        (Just(FieldSpec::Prime(2)), 1..=3usize),
        (Just(FieldSpec::Prime(3)), 1..=2usize),
        (Just(FieldSpec::Gf4), 1..=2usize),
        (Just(FieldSpec::Prime(5)), 1..=2usize),
    ]
}

/// GF(4) product from bit polynomials modulo t² + t + 1.
fn gf4_mul_oracle(a: u8, b: u8) -> u8 {
    let mut p = 0u8;
    for i in 0..2 {
        if b >> i & 1 == 1 {
            p ^= a << i;
        }
    }
    if p & 0b100 != 0 {
        p ^= 0b111;
    }
    p
}

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-20i64..20, 1i64..12).prop_map(|(n, d)| Scalar::rational(BigRational::new(BigInt::from(n), BigInt::from(d))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms((a, b, c) in finite_field().prop_flat_map(|f| (element(f), element(f), element(f)))) {
        let f = a.field();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-a.clone()), f.zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn gf4_matches_bit_polynomials(a in 0u8..4, b in 0u8..4) {
        let f = FieldSpec::Gf4;
        let (x, y) = (f.from_index(a).unwrap(), f.from_index(b).unwrap());
        prop_assert_eq!((&x * &y).index().unwrap(), gf4_mul_oracle(a, b));
        prop_assert_eq!((&x + &y).index().unwrap(), a ^ b);
    }

    #[test]
    fn prime_fields_match_integers(p in prop_oneof![Just(2u8), Just(3), Just(5), Just(7)], a in 0i64..50, b in 0i64..50) {
        let f = FieldSpec::Prime(p);
        let m = p as i64;
        prop_assert_eq!((&f.from_int(a) * &f.from_int(b)).index().unwrap() as i64, a * b % m);
        prop_assert_eq!((&f.from_int(a) - &f.from_int(b)).index().unwrap() as i64, (a - b).rem_euclid(m));
    }

    #[test]
    fn rational_arithmetic(a in small_rational(), b in small_rational()) {
        let (x, y) = (a.as_rational().unwrap().clone(), b.as_rational().unwrap().clone());
        prop_assert_eq!(&a + &b, Scalar::rational(&x + &y));
        prop_assert_eq!(&a * &b, Scalar::rational(&x * &y));
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap(), Scalar::rational(&x / &y));
        }
    }

    #[test]
    fn polar_form_identity((q, x, y) in field_form(4).prop_flat_map(|q| {
        let (f, n) = (q.field(), q.dim());
        (Just(q), vector(f, n), vector(f, n))
    })) {
        let sum: Vector = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let expected = &(&q.eval(&sum).unwrap() - &q.eval(&x).unwrap()) - &q.eval(&y).unwrap();
        prop_assert_eq!(q.polar().bilinear(&x, &y).unwrap(), expected);
    }

    #[test]
    fn char2_polar_rank_is_even(q in prop_oneof![form(FieldSpec::Prime(2), 4), form(FieldSpec::Gf4, 3)]) {
        prop_assert_eq!(q.polar().rank % 2, 0);
    }

    #[test]
    fn radical_annihilator_is_image(q in field_form(4)) {
        let (f, n) = (q.field(), q.dim());
        let polar = q.polar();
        let ann = annihilator(f, n, &polar.radical).unwrap();
        let image: Vec<Vector> = (0..n).map(|j| polar.b.column(j)).collect();
        prop_assert!(same_span(f, n, &ann, &image));
        prop_assert_eq!(polar.radical.len() + polar.rank, n);
    }

    #[test]
    fn pullback_evaluates_through_the_map((q, eta, x) in field_form(3).prop_flat_map(|q| {
        let (f, n) = (q.field(), q.dim());
        (Just(q), matrix(f, n), vector(f, n))
    })) {
        let pulled = q.pullback(&eta).unwrap();
        prop_assert_eq!(pulled.eval(&x).unwrap(), q.eval(&eta.mul_vec(&x).unwrap()).unwrap());
    }

    #[test]
    fn reflections_are_involutive_weak_isometries((q, r) in field_form(3).prop_flat_map(|q| {
        let (f, n) = (q.field(), q.dim());
        (Just(q), vector(f, n))
    })) {
        prop_assume!(!q.eval(&r).unwrap().is_zero());
        let xi = q.reflection(&r).unwrap();
        prop_assert!(xi.mul(&xi).unwrap().is_identity());
        prop_assert!(q.is_weak_isometry(&xi).unwrap());
    }

    #[test]
    fn beta_is_a_homomorphism_dual_to_zeta(
        (g, h) in (finite_field(), 1..=3usize).prop_flat_map(|(f, n)| {
            let affine = move || (vector(f, n), invertible(f, n)).prop_map(|(t, a)| AffineMap::new(t, a).unwrap());
            (affine(), affine())
        })
    ) {
        let model = HomogModel::new(g.field(), g.dim());
        let bg = model.beta(&g).unwrap();
        let bh = model.beta(&h).unwrap();
        prop_assert_eq!(model.beta(&g.compose(&h).unwrap()).unwrap(), bg.mul(&bh).unwrap());
        prop_assert_eq!(&bg, &model.zeta(&g).unwrap().transpose().invert().unwrap());
        prop_assert_eq!(model.beta_preimage(&bg), Some(g.clone()));
        prop_assert_eq!(bg.mul_vec(&model.vertex()).unwrap(), model.vertex());
    }

    #[test]
    fn lift_and_drop_are_inverse(q in field_form(3)) {
        prop_assume!(q.is_nondegenerate());
        let up = lift(&q).unwrap();
        prop_assert_eq!(drop(&up).unwrap(), q);
        let vertex = HomogModel::new(up.field(), up.dim() - 1).vertex();
        prop_assert!(up.eval(&vertex).unwrap().is_zero());
        prop_assert_eq!(up.polar().radical.len(), 1);
    }

    #[test]
    fn rational_lift_round_trip(u in proptest::collection::vec(small_rational(), 3)) {
        let q = QForm::new(FieldSpec::Rational, 2, u).unwrap();
        prop_assume!(q.is_nondegenerate());
        prop_assert_eq!(drop(&lift(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn records_and_polynomials_round_trip(q in field_form(4)) {
        prop_assert_eq!(from_json(&to_json(&q)).unwrap(), q.clone());
        prop_assert_eq!(parse_poly(q.field(), q.dim(), Vars::X, &q.render(Vars::X)).unwrap(), q.clone());
        prop_assert_eq!(parse_poly(q.field(), q.dim(), Vars::A, &q.render(Vars::A)).unwrap(), q);
    }

    #[test]
    fn normalized_points_are_scalar_multiples((v, c) in finite_field().prop_flat_map(|f| (vector(f, 3), element(f)))) {
        prop_assume!(!c.is_zero());
        let scaled: Vector = v.iter().map(|x| x * &c).collect();
        prop_assert_eq!(normalize_point(&v), normalize_point(&scaled));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_orders_divide((f, n) in small_case(), seed in any::<u64>()) {
        let forms: Vec<QForm> = metric_affine::quadform::enumerate_forms(f, n).unwrap().collect();
        let q = &forms[(seed % forms.len() as u64) as usize];
        let b = Budget::default();
        let o = orthogonal_group(q, b).unwrap();
        let w = weak_orthogonal_group(q, b).unwrap();
        prop_assert!(o.is_group() && w.is_group());
        prop_assert_eq!(o.len() % w.len(), 0);
        prop_assert_eq!(gl_order(order(f) as u64, n as u32) % o.len() as u128, 0);
        prop_assert!(w.matrices().iter().all(|m| o.contains(m)));
    }

    #[test]
    fn closure_is_idempotent((f, n) in small_case(), seed in any::<u64>()) {
        let forms: Vec<QForm> = metric_affine::quadform::enumerate_forms(f, n).unwrap().collect();
        let q = &forms[(seed % forms.len() as u64) as usize];
        let b = Budget::default();
        let gens = reflections(q).unwrap();
        let g = closure(f, n, &gens, b).unwrap();
        prop_assert!(g.is_group());
        prop_assert_eq!(closure(f, n, &g.matrices(), b).unwrap(), g.clone());
        prop_assert!(g.matrices().iter().all(|m| weak_orthogonal_group(q, b).unwrap().contains(m)));
    }

    #[test]
    fn delta_groups_are_closed((f, n) in small_case(), seed in any::<u64>()) {
        let gl = enumerate_gl(f, n, Budget::default()).unwrap();
        let dir = gl.matrices()[(seed % gl.len() as u64) as usize].column(0);
        let g = delta_group(f, n, &dir).unwrap();
        prop_assert!(g.is_group());
        prop_assert_eq!(closure(f, n, &g.matrices(), Budget::default()).unwrap(), g);
    }
}

/// The β-image is exactly the set of invertible matrices fixing the vertex
/// line's coordinate vector, i.e. with first column e0.
#[test]
fn beta_image_is_first_column_stabiliser() {
    for (f, n) in [(FieldSpec::Prime(2), 2), (FieldSpec::Prime(3), 1), (FieldSpec::Gf4, 1)] {
        let model = HomogModel::new(f, n);
        let e0 = unit_vector(f, n + 1, 0);
        let gl = enumerate_gl(f, n + 1, Budget::default()).unwrap();
        let mut images = 0;
        for k in gl.matrices() {
            match model.beta_preimage(&k) {
                Some(g) => {
                    images += 1;
                    assert_eq!(k.column(0), e0);
                    assert_eq!(model.beta(&g).unwrap(), k);
                }
                None => assert_ne!(k.column(0), e0),
            }
        }
        let q = order(f) as u128;
        assert_eq!(images as u128, q.pow(n as u32) * gl_order(q as u64, n as u32));
    }
}
