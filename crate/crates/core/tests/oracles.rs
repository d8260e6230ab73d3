use std::collections::BTreeMap;

use cpn_bundles::comodule::{stunted_cohomology, GradedComodule, Summand};
use cpn_bundles::counts::{j_closed, j_closed_amended};
use cpn_bundles::eo::{
    closed_form_splitting, dual_summand, eo_neg1_cp_tensor_dcp, eo_neg1_shifted_xl, tensor_rule, EoEngine,
};
use cpn_bundles::Prime;

fn prime(p: i64) -> Prime {
    Prime::new(p).unwrap()
}

/// Chains of `CP^n_r` read off the monomial action: start at every cell not
/// hit by a nonzero `P¹` and follow `x_k -> k x_{k+p-1}` until the
/// coefficient vanishes or the cells run out.
fn walk_chains(r: i64, n: i64, p: i64) -> Vec<Summand> {
    let step = p - 1;
    let hit = |k: i64| k - step >= r && (k - step).rem_euclid(p) != 0;
    let mut out = Vec::new();
    for start in r..=n {
        if hit(start) {
            continue;
        }
        let mut len = 1;
        let mut k = start;
        while k.rem_euclid(p) != 0 && k + step <= n {
            k += step;
            len += 1;
        }
        out.push(Summand::new(start, len));
    }
    out.sort();
    out
}

/// Jordan type from ranks alone: with `ρ_j(d) = rank (P¹)^j` out of degree
/// `d` (and `ρ_0(d)` the dimension), the number of chains of length exactly
/// `l` starting in `d` is
/// `ρ_{l-1}(d) - ρ_l(d) - (ρ_l(d-e) - ρ_{l+1}(d-e))`.
fn rank_type(m: &GradedComodule, p: i64) -> Vec<Summand> {
    let e = 2 * (p - 1);
    let dims = m.degree_dims();
    let rho = |d: i64, j: i64| -> i64 {
        if j == 0 {
            *dims.get(&d).unwrap_or(&0) as i64
        } else if j >= p {
            0
        } else if dims.contains_key(&d) {
            m.power_rank(d, j) as i64
        } else {
            0
        }
    };
    let mut out = Vec::new();
    for &d in dims.keys() {
        for l in 1..=p {
            let here = rho(d, l - 1) - rho(d, l);
            let from_below = rho(d - e, l) - rho(d - e, l + 1);
            let count = here - from_below;
            assert!(count >= 0, "negative chain count at degree {d}, length {l}");
            for _ in 0..count {
                out.push(Summand::new(d.div_euclid(2), l));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn decompose_matches_chain_walk_and_closed_form() {
    for p in [3, 5, 7] {
        let q = prime(p);
        for r in 0..2 * p * p {
            for c in 0..(2 * p * p - p - 2).min(30) {
                let n = r + c;
                let walked = walk_chains(r, n, p);
                let decomposed = stunted_cohomology(r, n, q).unwrap().decompose().unwrap();
                assert_eq!(decomposed.summands(), walked.as_slice(), "p={p} r={r} n={n}");
                let closed = closed_form_splitting(r, n, q).unwrap().all();
                assert_eq!(closed.summands(), walked.as_slice(), "closed form p={p} r={r} n={n}");
            }
        }
    }
}

#[test]
fn rank_oracle_on_tensor_products() {
    for p in [3, 5] {
        let q = prime(p);
        for (r, n, r2, n2) in [(1, 6, 2, 5), (3, 9, 0, 4), (4, 11, 7, 12), (5, 14, 2, 9)] {
            let a = stunted_cohomology(r, n, q).unwrap();
            let b = stunted_cohomology(r2, n2, q).unwrap().dualize();
            let t = a.tensor(&b).unwrap();
            let d = t.decompose().unwrap();
            assert_eq!(d.summands(), rank_type(&t, p).as_slice(), "p={p} {r},{n} x D{r2},{n2}");
            assert_eq!(d.dim(), t.dim());
        }
    }
}

#[test]
fn chain_tensor_squares_have_expected_dimension() {
    for p in [3, 5, 7] {
        let q = prime(p);
        for a in 1..=p {
            for b in 1..=p {
                let t = GradedComodule::chain(q, 0, a).unwrap().tensor(&GradedComodule::chain(q, 0, b).unwrap()).unwrap();
                let d = t.decompose().unwrap();
                let total: i64 = d.summands().iter().map(|s| s.length).sum();
                assert_eq!(total, a * b);
                assert_eq!(d.summands(), rank_type(&t, p).as_slice());
            }
        }
    }
}

/// EO_{-1} of `Σ^{2s} X_l`, restated: nonzero exactly for `l < p` and
/// `s = -l(p-1)`.
fn xl_order(s: Summand, p: i64) -> u32 {
    u32::from(s.length < p && s.half_shift == -s.length * (p - 1))
}

/// The engine pairs summands of the closed-form splitting. This route
/// decomposes the whole of `H*(CP^n_r) ⊗ H*(D CP^n_r)` instead.
fn full_tensor_order(r: i64, n: i64, p: i64) -> u32 {
    let q = prime(p);
    let m = stunted_cohomology(r, n, q).unwrap();
    let t = m.tensor(&m.dualize()).unwrap();
    t.decompose().unwrap().summands().iter().map(|&s| xl_order(s, p)).sum()
}

#[test]
fn engine_matches_full_tensor_route() {
    for (p, max_c) in [(3, 12), (5, 18)] {
        let q = prime(p);
        let engine = EoEngine::new(q).unwrap();
        for r in 0..p * p {
            for c in 0..=max_c {
                let n = r + c;
                let engine_order = engine.tensor_dual(r, n).unwrap().order_exponent();
                assert_eq!(engine_order, full_tensor_order(r, n, p), "p={p} r={r} n={n}");
            }
        }
    }
}

#[test]
fn amended_count_is_engine_order_and_bounds_literal_count() {
    let mut undercounts: BTreeMap<i64, usize> = BTreeMap::new();
    for p in [3, 5] {
        let q = prime(p);
        for r in 0..p * (p - 1) {
            for c in 0..q.window() {
                let n = r + c;
                let amended = j_closed_amended(n, r, q).unwrap();
                let literal = j_closed(n, r, q).unwrap();
                let group = eo_neg1_cp_tensor_dcp(r, n, q).unwrap();
                assert_eq!(group.order_exponent(), amended, "p={p} r={r} n={n}");
                assert_eq!(group.rank() as u32, amended, "elementary abelian");
                assert!(literal <= amended);
                if literal < amended {
                    *undercounts.entry(p).or_default() += 1;
                    assert!(c >= 2 * p - 2, "undercount below corank 2p-2 at p={p} r={r} n={n}");
                }
            }
        }
    }
    assert!(undercounts.values().all(|&k| k > 0));
}

/// Reading the tensor pieces with half-shift `l - j` instead of
/// `(l - j)(p - 1)` changes no total: only `j = l` pieces ever contribute.
#[test]
fn totals_do_not_depend_on_the_tensor_shift_convention() {
    for p in [3i64, 5] {
        let q = prime(p);
        for r in 0..=3 * p {
            for c in 1..q.window() {
                let split = closed_form_splitting(r, r + c, q).unwrap();
                let (mut comodule_shift, mut flat_shift) = (0, 0);
                for &a in split.main() {
                    for &a2 in split.main() {
                        let b = dual_summand(a2, q);
                        let base = a.half_shift + b.half_shift;
                        if base.rem_euclid(p - 1) != 0 {
                            continue;
                        }
                        let (l, l2) = (a.length.min(b.length), a.length.max(b.length));
                        for piece in tensor_rule(l, l2, q).unwrap().main() {
                            let steps = piece.half_shift / (p - 1);
                            let order = |s| eo_neg1_shifted_xl(s, piece.length, q).map(|v| v.group.order_exponent());
                            comodule_shift += order(base + piece.half_shift).unwrap();
                            flat_shift += order(base + steps).unwrap_or(0);
                        }
                    }
                }
                assert_eq!(comodule_shift, flat_shift, "p={p} r={r} c={c}");
                assert_eq!(comodule_shift, eo_neg1_cp_tensor_dcp(r, r + c, q).unwrap().order_exponent());
            }
        }
    }
}
