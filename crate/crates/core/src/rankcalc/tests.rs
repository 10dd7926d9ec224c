use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::exprcore::parse_expr;
use crate::jetspace::jet_dimension;
use crate::liealg::{
    build_classical_generating_set, build_eikonal_algebra, dilation, family_members, template_field, Template,
    EIKONAL_FAMILIES,
};

/// Plain Gaussian elimination over the rationals.
fn gauss_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[rank][col];
                for j in 0..ncols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn eikonal_rank(n: usize, k: u32, r: usize) -> RankReport {
    generic_rank(&RankQuery::new(build_eikonal_algebra(n, k), r, SpaceSpec::lorentz(n))).unwrap()
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    // products of random factors give rank deficiency often
    (1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(a, b, c)| {
        let entry = (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rat::new(n.into(), d.into()));
        (
            proptest::collection::vec(proptest::collection::vec(entry.clone(), b), a),
            proptest::collection::vec(proptest::collection::vec(entry, c), b),
        )
            .prop_map(|(x, y)| {
                x.iter()
                    .map(|row| (0..y[0].len()).map(|j| row.iter().zip(&y).map(|(s, t)| s * &t[j]).sum()).collect())
                    .collect()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bareiss_matches_gauss(m in arb_matrix()) {
        prop_assert_eq!(bareiss_rank(&m), gauss_rank(&m));
    }

    #[test]
    fn incremental_matches_gauss(m in arb_matrix()) {
        let mut e = IncrementalEchelon::new();
        for (i, row) in m.iter().enumerate() {
            let grew = e.insert(row);
            prop_assert_eq!(e.rank(), gauss_rank(&m[..=i]));
            prop_assert_eq!(grew, gauss_rank(&m[..=i]) > gauss_rank(&m[..i]));
        }
    }
}

#[test]
fn matrix_rows() {
    let s = SpaceSpec::lorentz(1);
    let fields = prolong_all(&[template_field(Template::Translation { mu: 0 }, 0, &s)], 2, &s);
    let pt: Point = enumerate_jet_coords(&s, 2).into_iter().map(|c| (c, rat(5))).collect();
    let m = prolonged_matrix_at(&fields, 2, &s, &pt).unwrap();
    let mut expected = vec![rat(0); 8];
    expected[0] = rat(1);
    assert_eq!(m, vec![expected]);

    let scale = VectorField::new("u*d_u", vec![Expr::zero(); 2], vec![Expr::var(JetCoord::dep(0))], &s).unwrap();
    let mut pt: Point = enumerate_jet_coords(&s, 1).into_iter().map(|c| (c, rat(0))).collect();
    pt.insert(JetCoord::dep(0), rat(2));
    pt.insert(JetCoord::jet(0, &[0]), rat(3));
    let m = prolonged_matrix_at(&prolong_all(&[scale], 1, &s), 1, &s, &pt).unwrap();
    assert_eq!(m, vec![vec![rat(0), rat(0), rat(2), rat(3), rat(0)]]);

    let zero = VectorField::zero("0", &s);
    let m = prolonged_matrix_at(&prolong_all(&[zero], 1, &s), 1, &s, &pt).unwrap();
    assert!(m[0].iter().all(Zero::is_zero));
}

#[test]
fn first_order_ranks() {
    let r = eikonal_rank(3, 3, 1);
    assert_eq!((r.rank, r.jet_dimension, r.invariant_count), (9, 9, 0));
    let r = eikonal_rank(2, 3, 1);
    assert_eq!((r.rank, r.jet_dimension, r.invariant_count), (7, 7, 0));
    let s = SpaceSpec::lorentz(2);
    for order in 0..=2 {
        let q = RankQuery::new(vec![template_field(Template::Translation { mu: 0 }, 0, &s)], order, s.clone());
        assert_eq!(generic_rank(&q).unwrap().rank, 1);
    }
}

#[test]
fn second_order_count_n2() {
    let s = SpaceSpec::lorentz(2);
    assert_eq!(invariant_count(&build_eikonal_algebra(2, 3), 2, &s).unwrap(), 2);
    assert_eq!(jet_dimension(&s, 2), 13);
    assert_eq!(invariant_count(&[], 1, &s).unwrap(), 7);
}

#[test]
fn scans() {
    let s3 = SpaceSpec::lorentz(3);
    let scan = stabilization_scan(&family_members(&EIKONAL_FAMILIES, 5, &s3), 1, &s3, 5, Sampling::default()).unwrap();
    assert_eq!(scan.rows.len(), 6);
    assert_eq!(scan.rows.last().unwrap().1, 9);
    assert!(scan.rows[scan.stable_from as usize..].iter().all(|(_, r)| *r == 9));
    assert!(scan.rows.windows(2).all(|w| w[0].1 <= w[1].1));

    let one = stabilization_scan(&family_members(&EIKONAL_FAMILIES, 0, &s3), 1, &s3, 0, Sampling::default()).unwrap();
    assert_eq!((one.rows.len(), one.stable_from), (1, 0));

    let s2 = SpaceSpec::lorentz(2);
    let scan = stabilization_scan(&family_members(&EIKONAL_FAMILIES, 5, &s2), 2, &s2, 5, Sampling::default()).unwrap();
    assert_eq!(scan.rows.last().unwrap().1, jet_dimension(&s2, 2) - 2);
    assert!(scan.stable_from <= 5);
}

#[test]
fn generating_sets() {
    let s1 = SpaceSpec::lorentz(1);
    let ops = build_eikonal_algebra(1, 3);
    let g = find_generating_set(&ops, 1, &s1, Sampling::default()).unwrap();
    assert_eq!(g.selected.len(), 5);
    assert_eq!(g.report.rank, 5);
    assert_eq!(g.rank_trace, [1, 2, 3, 4, 5]);

    let mut dup = vec![ops[0].clone(), ops[0].clone(), ops[1].clone(), ops[1].clone()];
    dup.push(ops[0].clone());
    let g = find_generating_set(&dup, 1, &s1, Sampling::default()).unwrap();
    assert_eq!(g.selected, [0, 2]);

    let g = find_generating_set(&ops[3..4], 1, &s1, Sampling::default()).unwrap();
    assert_eq!(g.selected, [0]);
}

#[test]
fn classical_set_matches_family() {
    let s = SpaceSpec::lorentz(3);
    let family = build_eikonal_algebra(3, 3);
    let v = verify_generating_set(&build_classical_generating_set(3), &family, 1, &s, Sampling::default()).unwrap();
    assert!(v.equal_rank);
    assert_eq!((v.candidate.rank, v.reference.rank), (9, 9));

    let translations: Vec<VectorField> = (0..4).map(|mu| template_field(Template::Translation { mu }, 0, &s)).collect();
    let v = verify_generating_set(&translations, &family, 1, &s, Sampling::default()).unwrap();
    assert!(!v.equal_rank);
    assert_eq!(v.candidate.rank, 4);

    assert!(verify_generating_set(&family, &family, 1, &s, Sampling::default()).unwrap().equal_rank);
}

#[test]
fn dilation_in_span() {
    for n in 1..=4 {
        let s = SpaceSpec::lorentz(n);
        let family = build_eikonal_algebra(n, 3);
        let mut with_d = family.clone();
        with_d.push(dilation(&s));
        let v = verify_generating_set(&with_d, &family, 1, &s, Sampling::default()).unwrap();
        assert!(v.equal_rank, "n = {n}");
    }
}

#[test]
fn determinism_and_point_counts() {
    let s = SpaceSpec::lorentz(2);
    let q = RankQuery::new(build_eikonal_algebra(2, 2), 2, s.clone()).seed(17);
    assert_eq!(generic_rank(&q).unwrap(), generic_rank(&q).unwrap());
    let one = generic_rank(&q.clone().points(1)).unwrap();
    let five = generic_rank(&q.clone().points(5)).unwrap();
    assert_eq!(one.rank, five.rank);
    assert!(five.per_point_ranks.iter().all(|&r| r == five.rank));
    assert_eq!(generic_rank(&q.clone().seed(99)).unwrap().rank, one.rank);
}

#[test]
fn rank_bounded_and_monotone() {
    for n in 1..=3 {
        let s = SpaceSpec::lorentz(n);
        let ops = build_eikonal_algebra(n, 2);
        let system = EvaluatedSystem::new(&prolong_all(&ops, 1, &s), 1, &s, Sampling::default()).unwrap();
        let mut last = 0;
        for len in 0..=ops.len() {
            let r = system.report(&(0..len).collect::<Vec<_>>()).rank;
            assert!(r >= last && r <= len.min(jet_dimension(&s, 1)));
            last = r;
        }
    }
}

#[test]
fn degenerate_points() {
    let s = SpaceSpec::lorentz(1);
    let field = |den: &str| {
        let xi0 = parse_expr(&format!("1/({den})"), &s).unwrap();
        VectorField::new("X", vec![xi0, Expr::zero()], vec![Expr::zero()], &s).unwrap()
    };
    let always = field("(x0 - 2)*(x0 - 1)*x0*(x0 + 1)*(x0 + 2)");
    let q = RankQuery::new(vec![always], 1, s.clone()).bound(2);
    assert_eq!(generic_rank(&q), Err(RankError::AllPointsDegenerate { points: 3, seed: 0 }));

    let often = field("(x0 - 1)*x0*(x0 + 1)*(x0 + 2)");
    let r = generic_rank(&RankQuery::new(vec![often], 1, s.clone()).bound(2)).unwrap();
    assert_eq!(r.rank, 1);

    assert!(matches!(generic_rank(&RankQuery::new(vec![], 1, s).points(0)), Err(RankError::BadSampling(_))));
}
