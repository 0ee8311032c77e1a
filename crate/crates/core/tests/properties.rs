use std::sync::Arc;

use k3rigid_core::cyclotomic::{as_zeta_power, zeta_pow};
use k3rigid_core::funfield::{build_named_maps, EllipticCurve, FunctionField, Point};
use k3rigid_core::lattice::{direct_sum, named_lattice, GramMatrix};
use k3rigid_core::polyring::{gcd_free_basis, parse_expression, Expr, Var};
use k3rigid_core::rigidity::{parse_graph_file, propagate, Anchor, GraphFile, PointKind};
use k3rigid_core::surface::order16_model;
use k3rigid_core::{CycloNum, CyclotomicField, Field, MultiPoly, Rational, UniPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const FIXTURE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/k3_order16.graph"));

fn cyclo(field: &Arc<CyclotomicField>, coeffs: &[i64]) -> CycloNum {
    coeffs.iter().enumerate().fold(CycloNum::zero(), |acc, (i, &c)| acc + zeta_pow(field, i as i64) * CycloNum::from_i64(c))
}

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 0..6)
}

fn rational_poly() -> impl Strategy<Value = UniPoly<Rational>> {
    prop::collection::vec(-3i64..=3, 1..5).prop_map(|cs| UniPoly::from_i64s(&cs))
}

fn poly3(field: Arc<CyclotomicField>, max_y: u32, coeffs: usize) -> impl Strategy<Value = MultiPoly<CycloNum>> {
    let c = prop::collection::vec(-4i64..=4, 0..=coeffs);
    prop::collection::vec((c, 0u32..3, 0..=max_y, 0u32..3), 0..4).prop_map(move |terms| {
        terms.iter().fold(MultiPoly::zero(), |acc, (c, ex, ey, et)| acc + MultiPoly::term(cyclo(&field, c), [*ex, *ey, *et]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms(n in 1u32..=24, a in small_coeffs(), b in small_coeffs(), c in small_coeffs()) {
        let f = CyclotomicField::new(n);
        let (a, b, c) = (cyclo(&f, &a), cyclo(&f, &b), cyclo(&f, &c));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() - a.clone(), CycloNum::zero());
        if let Some(inv) = a.inv() {
            prop_assert!((a * inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn zeta_powers_add(n in 1u32..=32, j in -40i64..40, k in -40i64..40) {
        let f = CyclotomicField::new(n);
        prop_assert_eq!(zeta_pow(&f, j) * zeta_pow(&f, k), zeta_pow(&f, j + k));
        prop_assert_eq!(as_zeta_power(&f, &zeta_pow(&f, j)), Some(j.rem_euclid(n as i64) as u32));
    }

    #[test]
    fn printed_polynomials_parse_back(p in poly3(CyclotomicField::new(16), 2, 6)) {
        let f = CyclotomicField::new(16);
        let text = p.to_string();
        let back = parse_expression(&text, &[Var::X, Var::Y, Var::T], &f).unwrap();
        prop_assert_eq!(back, Expr::Poly(p), "{}", text);
    }

    #[test]
    fn gcd_free_basis_reconstructs(ps in prop::collection::vec(rational_poly(), 1..4), extra in rational_poly()) {
        // shared factors make the basis nontrivial
        let inputs: Vec<UniPoly<Rational>> =
            ps.iter().filter(|p| !p.is_zero()).map(|p| &(p * &extra) * p).filter(|p| !p.is_zero()).collect();
        prop_assume!(!inputs.is_empty());
        let basis = gcd_free_basis(&inputs).unwrap();
        for (j, p) in inputs.iter().enumerate() {
            let rebuilt = basis.iter().fold(UniPoly::one(), |acc, (f, e)| &acc * &f.pow(e[j]));
            prop_assert_eq!(p.monic(), rebuilt);
        }
        for (i, (f, _)) in basis.iter().enumerate() {
            prop_assert!(f.is_monic() && f.degree().unwrap_or(0) >= 1);
            for (g, _) in &basis[i + 1..] {
                prop_assert!(k3rigid_core::polyring::uni_gcd(f, g).is_constant());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // rational coefficients keep the tower arithmetic small
    #[test]
    fn leibniz_rule(p in poly3(CyclotomicField::new(16), 1, 1), q in poly3(CyclotomicField::new(16), 1, 1)) {
        let ff = FunctionField::new(order16_model());
        let (f, g) = (ff.from_poly(&p), ff.from_poly(&q));
        let lhs = ff.d_dx(&ff.mul(&f, &g));
        let rhs = &ff.mul(&ff.d_dx(&f), &g) + &ff.mul(&f, &ff.d_dx(&g));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law(a in 0u64..3, b in 0u64..3, c in 0u64..3, d in 0u64..3) {
        // y² = x³ + 17 with P = (−1, 4), Q = (2, 5)
        let e = EllipticCurve::new(Rational::zero(), Rational::from_i64(17));
        let pt = |x: i64, y: i64| Point::Affine(Rational::from_i64(x), Rational::from_i64(y));
        let (p, q) = (pt(-1, 4), pt(2, 5));
        let r1 = e.add(&e.mul(&p, a), &e.mul(&q, b));
        let r2 = e.add(&e.mul(&p, c), &e.mul(&q, d));
        let r3 = e.mul(&p, a + d);
        prop_assert!(e.contains(&r1) && e.contains(&r2));
        prop_assert_eq!(e.add(&e.add(&r1, &r2), &r3), e.add(&r1, &e.add(&r2, &r3)));
        prop_assert_eq!(e.add(&r1, &r2), e.add(&r2, &r1));
        prop_assert_eq!(e.add(&r1, &e.neg(&r1)), Point::Zero);
    }

    #[test]
    fn anchors_are_interchangeable(which in 0usize..3, mask in any::<u64>()) {
        let file = fixture();
        let spec = &file.actions[which];
        let action = spec.build(&file.config).unwrap();
        let flags = action.flags(&file.config);
        let subset: Vec<Anchor> = flags.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, a)| *a).collect();
        match propagate(&file.config, &spec.perm, spec.n, spec.c, &subset) {
            Ok(again) => prop_assert_eq!(again, action),
            Err(e) => prop_assert!(matches!(e, k3rigid_core::rigidity::RigidityError::Unanchored { .. }), "{}", e),
        }
    }

    #[test]
    fn signatures_add_and_determinants_match(names in prop::collection::vec(
        prop::sample::select(vec!["A1", "A2", "A3", "A5", "D4", "D6", "E6", "E7", "E8", "U", "U(2)", "U(3)"]), 1..5)
    ) {
        let parts: Vec<GramMatrix> = names.iter().map(|n| named_lattice(n).unwrap()).collect();
        let sum = direct_sum(&parts);
        let s = sum.signature();
        prop_assert_eq!(s.positive, parts.iter().map(|g| g.signature().positive).sum::<usize>());
        prop_assert_eq!(s.negative, parts.iter().map(|g| g.signature().negative).sum::<usize>());
        let d = sum.discriminant_data();
        prop_assert_eq!(sum.determinant().abs(), d.invariant_factors.iter().product::<BigInt>());
    }
}

fn fixture() -> GraphFile {
    parse_graph_file(FIXTURE).unwrap()
}

#[test]
fn volume_rule_at_every_fixed_point() {
    let file = fixture();
    for spec in &file.actions {
        let a = spec.build(&file.config).unwrap();
        for item in a.census(&file.config).items {
            if item.kind == PointKind::TransverseIntersection {
                let sum: u32 = item.weights.iter().map(|(_, w)| w).sum();
                assert_eq!(sum % a.n(), a.c(), "{} at {}", spec.name, item.location);
            }
        }
    }
}

#[test]
fn omega_factor_is_multiplicative() {
    let ff = FunctionField::new(order16_model());
    let named = build_named_maps(&ff).unwrap();
    let maps = [&named.sigma, &named.translation, &named.sigma_ast, &named.tau];
    for f in maps {
        for g in maps {
            let fg = f.compose(g).unwrap();
            assert_eq!(fg.omega_factor().unwrap(), f.omega_factor().unwrap() * g.omega_factor().unwrap());
        }
    }
}
