use cpn_bundles::comodule::{stunted_cohomology, GradedComodule};
use cpn_bundles::counts::{count_bundles, j_closed, matsunaga_order, CountKind};
use cpn_bundles::eo::{eo_neg1_shifted_cp, EoEngine};
use cpn_bundles::{Execution, Prime};
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(3i64), Just(5), Just(7)].prop_map(|p| Prime::new(p).unwrap())
}

fn stunted(p: Prime) -> impl Strategy<Value = (Prime, i64, i64)> {
    (0i64..60, 0i64..14).prop_map(move |(r, c)| (p, r, r + c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_symmetric((p, r, n) in small_prime().prop_flat_map(stunted), r2 in 0i64..20, c2 in 0i64..8) {
        let a = stunted_cohomology(r, n, p).unwrap();
        let b = stunted_cohomology(r2, r2 + c2, p).unwrap();
        let ab = a.tensor(&b).unwrap().decompose().unwrap();
        let ba = b.tensor(&a).unwrap().decompose().unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn dual_is_an_involution((p, r, n) in small_prime().prop_flat_map(stunted)) {
        let m = stunted_cohomology(r, n, p).unwrap();
        let dd = m.dualize().dualize();
        prop_assert_eq!(dd.decompose().unwrap(), m.decompose().unwrap());
        prop_assert_eq!(dd.rank_profile(), m.rank_profile());
    }

    #[test]
    fn dual_negates_degrees((p, r, n) in small_prime().prop_flat_map(stunted)) {
        let m = stunted_cohomology(r, n, p).unwrap();
        let flipped: Vec<(i64, usize)> = m.degree_dims().into_iter().map(|(d, k)| (-d, k)).rev().collect();
        let dual: Vec<(i64, usize)> = m.dualize().degree_dims().into_iter().collect();
        prop_assert_eq!(dual, flipped);
    }

    #[test]
    fn chain_modules_are_indecomposable(p in small_prime(), s in -20i64..20, l in 1i64..=7) {
        prop_assume!(l <= p.get());
        let m = GradedComodule::chain(p, s, l).unwrap();
        let d = m.decompose().unwrap();
        prop_assert_eq!(d.summands().len(), 1);
        prop_assert_eq!(d.summands()[0].length, l);
        prop_assert_eq!(d.summands()[0].half_shift, s);
    }

    #[test]
    fn engine_is_p_periodic(p in prop_oneof![Just(3i64), Just(5)], r in 0i64..30, c in 0i64..20, k in 1i64..4) {
        let p = Prime::new(p).unwrap();
        prop_assume!(c < p.window());
        let engine = EoEngine::new(p).unwrap();
        let shift = k * p.get();
        prop_assert_eq!(engine.tensor_dual(r, r + c).unwrap(), engine.tensor_dual(r + shift, r + c + shift).unwrap());
    }

    #[test]
    fn sequential_and_parallel_engines_agree(r in 0i64..40, c in 0i64..13) {
        let p = Prime::new(3).unwrap();
        let par = EoEngine::new(p).unwrap();
        let seq = EoEngine::new(p).unwrap().with_execution(Execution::Sequential);
        prop_assert_eq!(par.tensor_dual_report(r, r + c).unwrap(), seq.tensor_dual_report(r, r + c).unwrap());
    }

    #[test]
    fn top_cell_group_is_at_most_cyclic((p, r, n) in small_prime().prop_flat_map(stunted)) {
        prop_assume!(n > r && n - r < p.window());
        let g = eo_neg1_shifted_cp(r, n, p).unwrap();
        prop_assert!(g.order_exponent() <= 1);
    }

    #[test]
    fn lower_bounds_never_exceed_exact_counts(p in prop_oneof![Just(3i64), Just(5), Just(7)], r in 2i64..80, c in 1i64..12) {
        let p = Prime::new(p).unwrap();
        let n = r + c;
        let res = count_bundles(r, n, p);
        prop_assert_eq!(res.metastable, 2 * r >= n);
        if res.kind == CountKind::Exact {
            let v = res.valuation.unwrap();
            prop_assert_eq!(res.group.as_ref().unwrap().order_exponent(), v);
            if let Some(lb) = res.eo_lower_bound {
                prop_assert!(lb <= v, "bound {} above exact {} at r={} n={}", lb, v, r, n);
            }
        }
        if res.kind == CountKind::LowerBound {
            prop_assert_eq!(res.valuation, Some(j_closed(n, r, p).unwrap()));
        }
    }

    #[test]
    fn matsunaga_is_cyclic_with_bounded_exponent(p in prop_oneof![Just(3i64), Just(5), Just(7)], k in 0i64..42, m in 1i64..40) {
        let p = Prime::new(p).unwrap();
        let q = p.get();
        prop_assume!(k <= q * (q - 1));
        let n = m * q - k;
        prop_assume!(n >= 2 && n > k);
        let g = matsunaga_order(n, k, p).unwrap();
        prop_assert!(g.rank() <= 1);
        prop_assert!(i64::from(g.order_exponent()) <= ((k - 1).max(0)) / (q - 1));
    }
}
