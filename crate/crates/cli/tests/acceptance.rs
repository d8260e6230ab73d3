//! Acceptance gate: one PASS/FAIL line per criterion. All tolerances are
//! exact equality (or exact inequality for bounds); nothing here is
//! floating point.
//!
//! A criterion that fails with a documented cause is reported as FAIL but
//! does not fail the target; any other failure does.

use std::process::Command;

use cpn_bundles::counts::matsunaga_order;
use cpn_bundles::detection::{
    eo2_family, eop_family, eop_min_l, find_projective_instances, ko_family, theta_degree, tmf2_families,
    unitary_families, DetectionInstance, Target, TmfVariant, UnitaryFamily,
};
use cpn_bundles::error::MatsunagaHypothesis as H;
use cpn_bundles::verify::{run_all, CheckOutcome};
use cpn_bundles::{Error, Execution, FinitePGroup, Prime};
use cpn_bundles_cli::report::Report;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOLERANCE: &str = "exact";
const MATSUNAGA_SEED: u64 = 0x5eed_0010;
const MATSUNAGA_TRIPLES: usize = 100;

struct Line {
    id: u32,
    name: String,
    instances: usize,
    failures: Vec<String>,
    documented: Option<String>,
}

impl Line {
    fn new(id: u32, name: &str) -> Self {
        Line { id, name: name.to_string(), instances: 0, failures: Vec::new(), documented: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn from_outcome(o: &CheckOutcome) -> Self {
        Line {
            id: o.id,
            name: o.name.to_string(),
            instances: o.instances,
            failures: o.failures.clone(),
            documented: o.documented.clone(),
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn print(&self, tag: &str) {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{tag} {:>2} {status}  {} ({} instances, tolerance {TOLERANCE})", self.id, self.name, self.instances);
        if let Some(first) = self.failures.first() {
            s.push_str(&format!("; {} failures, first: {first}", self.failures.len()));
        }
        println!("{s}");
        if let Some(d) = &self.documented {
            println!("{:>16}documented: {d}", "");
        }
    }
}

fn prime(p: i64) -> Prime {
    Prime::new(p).unwrap()
}

fn valuation(mut n: i64, p: i64) -> i64 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn matsunaga() -> Line {
    let mut line = Line::new(10, "Matsunaga orders and hypotheses");
    let three = prime(3);
    line.check(matsunaga_order(9, 6, three) == Ok(FinitePGroup::cyclic(three, 1)), || "(9,6,3) is not Z/3".into());
    let violations = [
        ((4, 0, 2), H::OddPrime),
        ((1, 2, 3), H::NAtLeastTwo),
        ((4, -1, 3), H::KNonNegative),
        ((20, 7, 3), H::KAtMostPTimesPMinusOne),
        ((4, 5, 3), H::NGreaterThanK),
        ((5, 2, 3), H::NPlusKDivisibleByP),
    ];
    for ((n, k, p), h) in violations {
        let got = matsunaga_order(n, k, prime(p));
        line.check(got == Err(Error::Hypothesis(h)), || format!("({n},{k},{p}) gave {got:?}, expected {h}"));
    }
    let mut rng = StdRng::seed_from_u64(MATSUNAGA_SEED);
    let mut drawn = 0;
    while drawn < MATSUNAGA_TRIPLES {
        let p = [3i64, 5, 7, 11, 13][rng.random_range(0..5)];
        let k = rng.random_range(0..=p * (p - 1));
        let n = p * rng.random_range(1..200) - k;
        if n < 2 || n <= k {
            continue;
        }
        drawn += 1;
        // k = 0 makes the floor negative; the group is trivial there.
        let expected = ((k - 1).div_euclid(p - 1)).min(valuation(n + k, p)).max(0) as u32;
        let got = matsunaga_order(n, k, prime(p));
        line.check(got == Ok(FinitePGroup::cyclic(prime(p), expected)), || {
            format!("({n},{k},{p}) gave {got:?}, expected exponent {expected}")
        });
    }
    line
}

fn projective(i: &DetectionInstance) -> (i64, i64) {
    match i.target {
        Target::Projective { dim } => (i.rank, dim),
        Target::Unitary { .. } => (i.rank, -1),
    }
}

fn detection() -> Line {
    let mut line = Line::new(11, "detection coherence");
    let ko = ko_family(0, 1);
    line.check(ko.as_ref().map(projective).ok() == Some((2, 3)), || format!("ko_family(0,1) = {ko:?}"));

    let mut pairs: Vec<(DetectionInstance, DetectionInstance)> = Vec::new();
    let mut push = |proj: cpn_bundles::Result<DetectionInstance>, uni: cpn_bundles::Result<DetectionInstance>| {
        pairs.push((proj.expect("valid family index"), uni.expect("valid family index")));
    };
    for t in 0..=3 {
        for d in 0..5 {
            let i = 2 * t + 1 + d;
            push(ko_family(t, i), unitary_families(UnitaryFamily::Ko { t, i }));
            let i = 12 * t + 3 + d;
            push(tmf2_families(t, i, TmfVariant::W), unitary_families(UnitaryFamily::TmfW { t, i }));
            let j = 12 * t + 8 + d;
            push(tmf2_families(t, j, TmfVariant::WKappa4), unitary_families(UnitaryFamily::TmfWk { t, j }));
            let l = 12 * t + 7 + d;
            push(eo2_family(t, l), unitary_families(UnitaryFamily::Eo2 { t, l }));
        }
    }
    for p in [5, 7, 11] {
        let min = eop_min_l(prime(p)).unwrap();
        for l in min..min + 5 {
            push(eop_family(prime(p), l), unitary_families(UnitaryFamily::Eop { p, j: 1, l }));
        }
    }
    for (proj, uni) in &pairs {
        let (rank, dim) = projective(proj);
        line.check(2 * rank >= dim && rank < dim, || format!("{proj:?} is not metastable"));
        line.check(
            uni.target == Target::Unitary { degree: 2 * dim, group_rank: rank } && uni.rank == rank,
            || format!("{uni:?} is not the Toda image of {proj:?}"),
        );
        let found = find_projective_instances(proj.prime, rank, dim);
        line.check(found.iter().any(|f| f.same_bundle(proj)), || format!("search at ({rank},{dim}) misses {proj:?}"));
    }

    for (p, j) in [(5i64, 1i64), (5, 4), (7, 1), (11, 3)] {
        let inline = 2 * p * p * (p - 1) * (p - 1) + 2 * p - 3 + j * (2 * p * p - 2 * p - 2);
        line.check(theta_degree(prime(p), j).ok() == Some(inline), || format!("d_{j} at {p}"));
    }
    let d = theta_degree(prime(5), 1).unwrap();
    line.check(d == 845, || format!("d_1 at 5 is {d}"));
    line.check(eop_min_l(prime(5)).ok() == Some(85), || "minimal l at 5 is not 85".into());
    let e = eop_family(prime(5), 85);
    line.check(e.as_ref().map(projective).ok() == Some((425, 848)), || format!("eop_family(5,85) = {e:?}"));
    line.check(eop_family(prime(5), 84).is_err(), || "l = 84 accepted at 5".into());
    line
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cpn-bundles")).args(args).output().expect("binary runs")
}

fn cli() -> Line {
    let mut line = Line::new(12, "command line: selftest, JSON round trip, corank-4 table");
    let o = bin(&["selftest", "--format", "json"]);
    line.check(o.status.code() == Some(0), || format!("selftest exit {:?}", o.status.code()));
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    match Report::from_json(&text) {
        Ok(report) => {
            let checks = report.result.checks.clone().unwrap_or_default();
            line.check(checks.len() == 10, || format!("selftest reported {} checks", checks.len()));
            line.check(checks.iter().all(|c| c.status == "pass" || c.documented.is_some()), || {
                "selftest has an undocumented failure".into()
            });
            line.check(report.to_json() == text, || "selftest JSON does not round-trip".into());
        }
        Err(e) => line.check(false, || format!("selftest JSON does not parse: {e}")),
    }

    for args in [
        &["count", "--prime", "3", "--rank", "9", "--dim", "13", "--format", "json"][..],
        &["eo-group", "--prime", "3", "--rank", "9", "--dim", "14", "--format", "json"][..],
    ] {
        let o = bin(args);
        let text = String::from_utf8_lossy(&o.stdout).into_owned();
        let back = Report::from_json(&text).ok().map(|r| r.to_json());
        line.check(o.status.code() == Some(0) && back.as_deref() == Some(text.as_str()), || {
            format!("{args:?} does not round-trip")
        });
    }

    let o = bin(&["table", "--prime", "3", "--corank", "4", "--format", "json"]);
    let rows = Report::from_json(&String::from_utf8_lossy(&o.stdout)).ok().and_then(|r| r.result.rows);
    let got: Option<Vec<(i64, Option<i64>)>> = rows.map(|rs| rs.iter().map(|r| (r.rank.0, r.valuation.map(|v| v.0))).collect());
    let expected: Vec<(i64, Option<i64>)> =
        (9..18).map(|r| (r, Some(cpn_bundles::counts::corank4_p3_group(r).order_exponent() as i64))).collect();
    line.check(got.as_ref() == Some(&expected), || format!("table rows {got:?}, expected {expected:?}"));
    let vals: Vec<i64> = expected.iter().filter_map(|(_, v)| *v).collect();
    line.check(vals == [2, 2, 1, 1, 1, 1, 1, 1, 1], || format!("corank-4 valuations {vals:?}"));
    line
}

fn main() {
    let outcomes = run_all(Execution::default());
    let mut lines: Vec<Line> = Vec::new();
    let mut info: Vec<Line> = Vec::new();
    for o in &outcomes {
        let l = Line::from_outcome(o);
        // The amended form of criterion 5 shares its number; report it
        // beside the stated form rather than as a criterion of its own.
        if lines.iter().any(|x| x.id == o.id) {
            info.push(l);
        } else {
            lines.push(l);
        }
    }
    lines.push(matsunaga());
    lines.push(detection());
    lines.push(cli());
    lines.sort_by_key(|l| l.id);

    println!("acceptance: {} criteria", lines.len());
    for l in &lines {
        l.print("criterion");
        for extra in info.iter().filter(|x| x.id == l.id) {
            extra.print("     info");
        }
    }
    let passed = lines.iter().filter(|l| l.passed()).count();
    let documented = lines.iter().filter(|l| !l.passed() && l.documented.is_some()).count();
    let blocking = lines.len() - passed - documented;
    let info_failures = info.iter().filter(|l| !l.passed()).count();
    println!("acceptance: {passed} pass, {documented} fail with documented cause, {blocking} fail unexplained");
    assert_eq!(lines.len(), 12, "criterion count");
    if blocking > 0 || info_failures > 0 {
        std::process::exit(1);
    }
}
