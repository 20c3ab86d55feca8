use mapstrata::blowup::{
    corner_expansion, phi1_values, phi2_coords, phik_coords, product_minor_expansion, segre,
    veronese, MinorIndex, ProjectivePoint,
};
use mapstrata::strata::{classify_point, StratumParam};
use mapstrata::sylvester::{in_stratum, rank_of};
use mapstrata::{rat, BinaryForm, FormTuple, Rational, RationalMatrix, TupleDocument};
use num_traits::Zero;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = i64> {
    -9i64..=9
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(prop::collection::vec(coeff(), cols), rows).prop_map(|g| {
        RationalMatrix::from_rows(
            g.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
        .unwrap()
    })
}

fn form(degree: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(coeff(), degree + 1).prop_map(|c| BinaryForm::from_i64(&c))
}

fn nonzero_form(degree: usize) -> impl Strategy<Value = BinaryForm> {
    form(degree).prop_filter("nonzero", |f| !f.is_zero())
}

fn tuple(d: usize, r: usize) -> impl Strategy<Value = FormTuple> {
    prop::collection::vec(form(d), r + 1)
        .prop_filter_map("nonzero tuple", |f| FormTuple::new(f).ok())
}

/// `(d, r, tuple)` with `1 <= d <= 4`, `r <= 2`.
fn any_tuple() -> impl Strategy<Value = FormTuple> {
    (1usize..=4, 0usize..=2).prop_flat_map(|(d, r)| tuple(d, r))
}

fn nonzero_scalar() -> impl Strategy<Value = Rational> {
    (coeff(), 1i64..=5)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, m)| Rational::new(n.into(), m.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn det_nonzero_iff_full_rank(m in (1usize..=5).prop_flat_map(|n| matrix(n, n))) {
        prop_assert_eq!(!m.det().unwrap().is_zero(), m.rank() == m.rows());
    }

    #[test]
    fn det_of_transpose(m in (1usize..=5).prop_flat_map(|n| matrix(n, n))) {
        prop_assert_eq!(m.det().unwrap(), m.transpose().det().unwrap());
    }

    #[test]
    fn multiply_commutes_and_associates(f in form(2), g in form(3), h in form(1)) {
        prop_assert_eq!(f.multiply(&g), g.multiply(&f));
        prop_assert_eq!(f.multiply(&g).multiply(&h), f.multiply(&g.multiply(&h)));
    }

    #[test]
    fn multiplicity_and_strata_are_homothety_invariant(t in any_tuple(), c in nonzero_scalar()) {
        let s = t.scale(&c);
        prop_assert_eq!(t.common_root_multiplicity().unwrap(), s.common_root_multiplicity().unwrap());
        for k in 1..=t.degree() {
            prop_assert_eq!(rank_of(&t, k).unwrap(), rank_of(&s, k).unwrap());
            prop_assert_eq!(classify_point(&t, k).unwrap().kind, classify_point(&s, k).unwrap().kind);
        }
    }

    #[test]
    fn strata_are_nested(t in any_tuple()) {
        let d = t.degree();
        for k in 1..d {
            if in_stratum(&t, k).unwrap() {
                prop_assert!(in_stratum(&t, k + 1).unwrap());
            }
        }
    }

    #[test]
    fn products_have_the_common_factor(
        (k, d, g, p) in (1usize..=4, 0usize..=3, 0usize..=2).prop_flat_map(|(k, extra, r)| {
            let d = k + extra;
            (Just(k), Just(d), tuple(k - 1, r), nonzero_form(d - k + 1))
        })
    ) {
        let param = StratumParam::new(k, g, p.clone()).unwrap();
        let t = param.image();
        prop_assert_eq!(t.degree(), d);
        prop_assert!(t.common_root_multiplicity().unwrap() >= p.degree());
        prop_assert!(in_stratum(&t, k).unwrap());
    }

    #[test]
    fn classification_is_consistent(t in (1usize..=4, 1usize..=2).prop_flat_map(|(d, r)| tuple(d, r))) {
        for k in 1..=t.degree() {
            prop_assert!(classify_point(&t, k).unwrap().consistent());
        }
    }

    #[test]
    fn veronese_separates_points(
        a in prop::collection::vec(coeff(), 3),
        b in prop::collection::vec(coeff(), 3),
    ) {
        let (Ok(p), Ok(q)) = (
            ProjectivePoint::new(a.into_iter().map(rat).collect()),
            ProjectivePoint::new(b.into_iter().map(rat).collect()),
        ) else {
            return Ok(());
        };
        for degree in 1..=3 {
            prop_assert_eq!(p == q, veronese(&p, degree) == veronese(&q, degree));
        }
    }

    #[test]
    fn segre_separates_pairs(
        a in prop::collection::vec(coeff(), 2),
        b in prop::collection::vec(coeff(), 3),
        c in prop::collection::vec(coeff(), 2),
        e in prop::collection::vec(coeff(), 3),
    ) {
        let pt = |v: Vec<i64>| ProjectivePoint::new(v.into_iter().map(rat).collect());
        let (Ok(p), Ok(q), Ok(p2), Ok(q2)) = (pt(a), pt(b), pt(c), pt(e)) else {
            return Ok(());
        };
        prop_assert_eq!(p == p2 && q == q2, segre(&p, &q) == segre(&p2, &q2));
    }

    #[test]
    fn document_round_trip(t in any_tuple()) {
        let doc = TupleDocument::from_tuple(&t);
        let again = TupleDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.to_tuple().unwrap(), t);
    }

    #[test]
    fn levels_one_and_two_agree_with_phi1_phi2(t in (2usize..=4, 1usize..=2).prop_flat_map(|(d, r)| tuple(d, r))) {
        let u = phi1_values(&t).values;
        match phik_coords(&t, 1) {
            Ok(c) => prop_assert_eq!(c.into_iter().map(|(_, v)| v).collect::<Vec<_>>(), u),
            Err(_) => prop_assert!(u.iter().all(Zero::is_zero)),
        }
        match (phik_coords(&t, 2), phi2_coords(&t)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.len(), b.len());
                for ((ia, va), (ib, vb)) in a.into_iter().zip(b) {
                    prop_assert_eq!(ia.root, ib);
                    prop_assert_eq!(va, vb);
                }
            }
            (a, b) => prop_assert!(a.is_err() && b.is_err()),
        }
    }

    #[test]
    fn corner_expansion_holds_for_any_fill(
        fill in prop::collection::vec(prop::collection::vec(coeff(), 5), 3),
        rows in prop::collection::vec(0usize..3, 6),
        skip in 0usize..7,
        n in (0usize..5, 1usize..5),
    ) {
        let s = |i: usize, j: i64| {
            if (0..5).contains(&j) { rat(fill[i][j as usize]) } else { Rational::zero() }
        };
        let m: Vec<usize> = (0..7).filter(|&c| c != skip).collect();
        let n = [n.0.min(n.1), n.0.max(n.1)];
        prop_assume!(n[0] != n[1]);
        let c = corner_expansion(s, rows.try_into().unwrap(), m.try_into().unwrap(), n);
        prop_assert!(c.sides_agree());
        prop_assert!(c.lhs_factors());
    }

    #[test]
    fn product_minors_expand(
        (g, p, s) in (1usize..=3, 0usize..=2, 1usize..=2, 1usize..=2)
            .prop_flat_map(|(k, extra, r, s)| (tuple(k - 1, r), nonzero_form(extra + 1), Just(s)))
    ) {
        let d = g.degree() + p.degree();
        let r = g.r();
        for idx in mapstrata::blowup::enumerate_minor_indices(d, r, s) {
            let e = product_minor_expansion(&g, &p, &idx).unwrap();
            prop_assert!(e.passed(), "{:?}", e);
        }
    }
}

#[test]
fn single_forms_are_smooth_everywhere() {
    // With one form every point lies in every R_k and the codimension is 0.
    let t = FormTuple::from_i64(&[&[0, 0, 1]]).unwrap();
    for k in 1..=2 {
        let c = classify_point(&t, k).unwrap();
        assert_eq!(c.kind, mapstrata::strata::PointKind::SmoothPoint);
        assert_eq!(c.codimension, 0);
    }
}

#[test]
fn minor_index_validation() {
    assert!(MinorIndex::new(vec![1, 0], vec![0, 1]).is_err());
    assert!(MinorIndex::new(vec![0, 1], vec![1, 0]).is_err());
    assert!(MinorIndex::new(vec![0, 1, 0], vec![0, 1, 2]).is_err());
    assert!(MinorIndex::new(vec![0, 1], vec![0, 1]).is_ok());
}
