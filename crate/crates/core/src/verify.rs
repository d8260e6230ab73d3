//! Oracle-agreement grids. Each check sweeps a fixed grid, compares a
//! closed form against an independent route and reports the outcome rather
//! than panicking, so the same sweeps back the `selftest` command and the
//! acceptance target.

use std::collections::HashMap;

use crate::arith::Prime;
use crate::comodule::{stunted_cohomology, GradedComodule, Summand};
use crate::counts::{
    bigcount_j, corank4_p3_group, count_bundles, eo_top_cell_closed, j_closed, j_closed_amended,
    phi_valuation_small_corank,
};
use crate::eo::{closed_form_splitting, eo_neg1_shifted_cp, tensor_rule, EoEngine};
use crate::error::Result;
use crate::exec::Execution;
use crate::group::FinitePGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<String>,
    /// Set when the failures are a known gap between a formula as stated and
    /// the computation, and an amended form has been checked to close it.
    pub documented: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failed without a documented explanation: a bug signal.
    pub fn blocking(&self) -> bool {
        !self.passed() && self.documented.is_none()
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("[{status}] {:>2}. {} ({} instances", self.id, self.name, self.instances);
        if !self.passed() {
            line.push_str(&format!(", {} failures; first: {}", self.failures.len(), self.failures[0]));
        }
        line.push(')');
        if let Some(doc) = &self.documented {
            line.push_str(&format!(" [documented: {doc}]"));
        }
        line
    }
}

struct Tally {
    id: u32,
    name: &'static str,
    instances: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(id: u32, name: &'static str) -> Self {
        Tally { id, name, instances: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.instances += 1;
                self.failures.push(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome { id: self.id, name: self.name, instances: self.instances, failures: self.failures, documented: None }
    }
}

fn primes(qs: &[i64]) -> Vec<Prime> {
    qs.iter().map(|&q| Prime::new(q).expect("literal prime")).collect()
}

/// The small-corank count against its residue rule.
pub fn check_small_corank() -> CheckOutcome {
    let mut t = Tally::new(1, "small-corank exact counts");
    for p in primes(&[3, 5, 7]) {
        let q = p.get();
        for c in 0..=2 * q - 3 {
            for r in c..c + q {
                let Some(v) = t.absorb(phi_valuation_small_corank(r, c, p), || format!("p={q} r={r} c={c}")) else {
                    continue;
                };
                // Residues 0, -1, ..., p-1-c written as p - m.
                let listed: Vec<i64> = (0..=c - (q - 1)).map(|m| (q - m) % q).collect();
                let by_list = c >= q - 1 && listed.contains(&(r % q));
                let next_multiple = r + (q - r % q) % q;
                let by_witness = c >= q - 1 && next_multiple <= r + c - (q - 1);
                t.check(by_list == by_witness && u32::from(by_list) == v, || {
                    format!("p={q} r={r} c={c}: got {v}, list {by_list}, witness {by_witness}")
                });
            }
        }
    }
    let five = Prime::new(5).expect("prime");
    t.check(phi_valuation_small_corank(18, 6, five).ok() == Some(1), || "(18,6,5) != 1".into());
    t.check(phi_valuation_small_corank(16, 6, five).ok() == Some(0), || "(16,6,5) != 0".into());
    t.done()
}

/// The corank-4 table at 3.
pub fn check_corank4_table() -> CheckOutcome {
    let mut t = Tally::new(2, "p=3 corank-4 table");
    let orders = [9, 9, 3, 3, 3, 3, 3, 3, 3];
    for (res, &order) in orders.iter().enumerate() {
        for base in [9i64, 18, 90] {
            let r = base + res as i64;
            let g = corank4_p3_group(r);
            let got = 3i64.pow(g.order_exponent());
            t.check(g.rank() == 1 && got == order, || format!("r={r}: {g}, expected Z/{order}"));
        }
    }
    t.done()
}

/// Closed-form splitting against the comodule decomposition.
pub fn check_splitting(exec: Execution) -> CheckOutcome {
    let mut t = Tally::new(3, "splitting oracle agreement");
    let mut grid = Vec::new();
    for p in primes(&[2, 3, 5, 7]) {
        let span = (p.window() - 1).min(40);
        for r in 0..=3 * p.get() {
            for n in r..=r + span {
                grid.push((p, r, n));
            }
        }
    }
    let results = exec.map(&grid, |&(p, r, n)| -> Result<Option<String>> {
        let split = closed_form_splitting(r, n, p)?;
        let cohomology = stunted_cohomology(r, n, p)?;
        let oracle = cohomology.decompose()?;
        let all = split.all();
        if all.summands() != oracle.summands() {
            return Ok(Some(format!("multisets differ: {:?} vs {:?}", all.summands(), oracle.summands())));
        }
        if all.degree_dims() != cohomology.degree_dims() {
            return Ok(Some("degreewise dimensions differ".to_string()));
        }
        Ok(None)
    });
    for (&(p, r, n), res) in grid.iter().zip(results) {
        let ctx = || format!("p={p} r={r} n={n}");
        if let Some(mismatch) = t.absorb(res, ctx) {
            t.check(mismatch.is_none(), || format!("{}: {}", ctx(), mismatch.unwrap_or_default()));
        }
    }
    t.done()
}

/// Tensor rule against the brute-force decomposition.
pub fn check_tensor_rule() -> CheckOutcome {
    let mut t = Tally::new(4, "tensor rule agreement");
    for p in primes(&[2, 3, 5, 7]) {
        let q = p.get();
        for l in 1..=q {
            for l2 in l..=q {
                let ctx = || format!("p={q} l={l} l2={l2}");
                let Some(rule) = t.absorb(tensor_rule(l, l2, p), ctx) else { continue };
                let top = if l + l2 <= q { l } else { q - l2 };
                let mut expected: Vec<i64> = (1..=top).map(|j| l2 - l + 2 * j - 1).filter(|&x| x < q).collect();
                let mut got: Vec<i64> = rule.main().iter().map(|s| s.length).collect();
                expected.sort_unstable();
                got.sort_unstable();
                t.check(expected == got, || format!("{}: lengths {got:?}, formula {expected:?}", ctx()));
                let brute = GradedComodule::chain(p, 0, l)
                    .and_then(|a| a.tensor(&GradedComodule::chain(p, 0, l2)?))
                    .and_then(|m| m.decompose());
                if let Some(brute) = t.absorb(brute, ctx) {
                    t.check(rule.all().summands() == brute.summands(), || {
                        format!("{}: {:?} vs brute force {:?}", ctx(), rule.all().summands(), brute.summands())
                    });
                }
            }
        }
    }
    let three = Prime::new(3).expect("prime");
    let w22 = tensor_rule(2, 2, three).map(|d| d.all().into_summands());
    t.check(w22.as_deref() == Ok(&[Summand::new(0, 3), Summand::new(2, 1)][..]), || {
        format!("W2 ⊗ W2 at 3 gave {w22:?}")
    });
    t.done()
}

/// Engine values for `r` in `[0, 3p + extra]` and `0 < c < window`.
fn engine_grid(p: Prime, extra_r: i64, exec: Execution) -> Result<HashMap<(i64, i64), Result<FinitePGroup>>> {
    let engine = EoEngine::new(p)?.with_execution(Execution::Sequential);
    let mut points = Vec::new();
    for r in 0..=3 * p.get() + extra_r {
        for c in 1..p.window() {
            points.push((r, r + c));
        }
    }
    let values = exec.map(&points, |&(r, n)| engine.tensor_dual(r, n));
    Ok(points.into_iter().zip(values).collect())
}

/// Engine against `j_closed` as stated, against the amended count, and
/// periodicity of both routes. Returns the three outcomes in that order.
pub fn check_engine_and_periodicity(exec: Execution) -> (CheckOutcome, CheckOutcome, CheckOutcome) {
    let mut stated = Tally::new(5, "EO total computation equals p^j");
    let mut amended = Tally::new(5, "EO total computation equals p^j, amended condition C");
    let mut period = Tally::new(7, "periodicity in (r, n) -> (r+p, n+p)");
    let mut undercounts = 0usize;
    for p in primes(&[3, 5, 7]) {
        let q = p.get();
        let Some(values) = stated.absorb(engine_grid(p, q, exec), || format!("engine at p={q}")) else {
            continue;
        };
        for r in 0..=3 * q {
            for c in 1..p.window() {
                let n = r + c;
                let ctx = || format!("p={q} r={r} n={n}");
                let engine = values[&(r, n)].clone();
                let (Some(g), Some(j)) = (stated.absorb(engine, ctx), stated.absorb(j_closed(n, r, p), ctx)) else {
                    continue;
                };
                stated.check(g == FinitePGroup::elementary(p, j as usize), || format!("{}: engine {g}, j = {j}", ctx()));
                if let Some(ja) = amended.absorb(j_closed_amended(n, r, p), ctx) {
                    amended.check(g == FinitePGroup::elementary(p, ja as usize), || {
                        format!("{}: engine {g}, amended j = {ja}", ctx())
                    });
                    if ja > j && ja as usize == g.rank() {
                        undercounts += 1;
                    }
                }

                let shifted = values[&(r + q, n + q)].clone();
                let j_shift = j_closed(n + q, r + q, p);
                if let (Some(gs), Some(js)) = (period.absorb(shifted, ctx), period.absorb(j_shift, ctx)) {
                    period.check(gs == g && js == j, || format!("{}: ({g}, {j}) vs ({gs}, {js})", ctx()));
                }
            }
        }
    }
    let mut stated = stated.done();
    let amended = amended.done();
    if !stated.passed() && amended.passed() && undercounts == stated.failures.len() {
        stated.documented = Some(format!(
            "the stated conditions undercount at {undercounts} points; every one is a pair whose top piece is \
             shorter than its bottom piece, excluded by the first clause of C, and the amended count matches \
             the engine at all {} points",
            amended.instances
        ));
    }
    (stated, amended, period.done())
}

/// The named instance and the rank-`p^2 + tp + r` family.
pub fn check_named_instances() -> CheckOutcome {
    let mut t = Tally::new(6, "named instances and the big family");
    let three = Prime::new(3).expect("prime");
    t.check(j_closed(13, 9, three).ok() == Some(1), || "j(13, 9) at 3 is not 1".into());
    let c = count_bundles(9, 13, three);
    t.check(c.eo_lower_bound == Some(1) && c.valuation.is_some_and(|v| v >= 1), || {
        format!("count(9, 13, 3) = {c:?}")
    });
    for p in primes(&[2, 3, 5, 7, 11]) {
        let q = p.get();
        for tt in 0..=2 {
            for r in 0..q {
                let rank = q * q + tt * q + r;
                let n = rank + (q - 1) * (q - 1);
                let ctx = || format!("p={q} t={tt} r={r}");
                if let Some(j) = t.absorb(j_closed(n, rank, p), ctx) {
                    let b = bigcount_j(r, p);
                    t.check(b == j, || format!("{}: family formula {b}, j = {j}", ctx()));
                }
            }
        }
    }
    t.done()
}

/// The EO lower bound never exceeds the exact counts.
pub fn check_bound_consistency() -> CheckOutcome {
    let mut t = Tally::new(8, "lower bounds below exact counts");
    for p in primes(&[5, 7]) {
        let q = p.get();
        for c in q - 1..=2 * q - 3 {
            for r in c..c + q {
                let ctx = || format!("p={q} r={r} c={c}");
                let (Some(j), Some(v)) =
                    (t.absorb(j_closed(r + c, r, p), ctx), t.absorb(phi_valuation_small_corank(r, c, p), ctx))
                else {
                    continue;
                };
                t.check(j <= v, || format!("{}: j = {j} > {v}", ctx()));
            }
        }
    }
    let three = Prime::new(3).expect("prime");
    for r in 9..18 {
        if let Some(j) = t.absorb(j_closed(r + 4, r, three), || format!("p=3 r={r}")) {
            let v = corank4_p3_group(r).order_exponent();
            t.check(j <= v, || format!("p=3 r={r} c=4: j = {j} > {v}"));
        }
    }
    t.done()
}

/// The top-cell closed form against the splitting route.
pub fn check_top_cell(exec: Execution) -> CheckOutcome {
    let mut t = Tally::new(9, "top-cell closed form");
    let mut grid = Vec::new();
    for p in primes(&[3, 5]) {
        for r in 0..=3 * p.get() {
            for c in 1..p.window() {
                grid.push((p, r, r + c));
            }
        }
    }
    let results = exec.map(&grid, |&(p, r, n)| -> Result<bool> {
        Ok(eo_top_cell_closed(r, n, p)? == eo_neg1_shifted_cp(r, n, p)?)
    });
    for (&(p, r, n), res) in grid.iter().zip(results) {
        let ctx = || format!("p={p} r={r} n={n}");
        if let Some(ok) = t.absorb(res, ctx) {
            t.check(ok, ctx);
        }
    }
    let three = Prime::new(3).expect("prime");
    let a = eo_top_cell_closed(10, 14, three);
    t.check(a == Ok(FinitePGroup::cyclic(three, 1)), || format!("(10,14,3) gave {a:?}"));
    let b = eo_top_cell_closed(9, 13, three);
    t.check(b == Ok(FinitePGroup::trivial(three)), || format!("(9,13,3) gave {b:?}"));
    t.done()
}

/// All grid checks, in numbering order.
pub fn run_all(exec: Execution) -> Vec<CheckOutcome> {
    let (total, amended, period) = check_engine_and_periodicity(exec);
    vec![
        check_small_corank(),
        check_corank4_table(),
        check_splitting(exec),
        check_tensor_rule(),
        total,
        amended,
        check_named_instances(),
        period,
        check_bound_consistency(),
        check_top_cell(exec),
    ]
}
