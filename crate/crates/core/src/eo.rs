//! EO-module computations for stunted projective spectra.
//!
//! After base change to `EO = EO_{p-1}`, `CP^n_r` splits as a sum of even
//! suspensions of `X_l^e`. This module gives the closed-form splitting (the
//! summands of length `< p`, indexed by Adams summand), the rule for
//! `X_l^e ⊗ X_{l'}^e`, the value of `EO_{-1}` on a shifted `X_l`, and the
//! engine that assembles these into `EO_{-1}(CP^n_r ⊗ D CP^n_r)`.
//!
//! Every closed form is cross-checked against [`crate::comodule`] on each
//! call. Length-`p` pieces ("junk") never contribute to `EO_{-1}`; their
//! shifts are always read off the brute-force decomposition.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{floor_same_residue, rep, Prime};
use crate::comodule::{multiset_difference, stunted_cohomology, Decomposition, GradedComodule, Summand};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::FinitePGroup;

pub const CITE_SPLITTING: &str = "eo-splitting-closed-form";
pub const CITE_TENSOR: &str = "x-l-tensor-rule";
pub const CITE_SHIFTED_XL: &str = "eo-minus-one-of-x-l";
pub const CITE_TOP_CELL: &str = "eo-top-cell";

/// An EO-module splitting into shifted `X_l^e`: `main` holds the summands
/// of length `< p`, `junk` the free ones of length exactly `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EODecomposition {
    prime: Prime,
    main: Vec<Summand>,
    junk: Vec<Summand>,
}

impl EODecomposition {
    pub fn new(prime: Prime, main: Vec<Summand>, junk: Vec<Summand>) -> Result<Self> {
        let p = prime.get();
        if let Some(s) = main.iter().find(|s| s.length < 1 || s.length >= p) {
            return Err(Error::contradiction(format!("main summand {s} must have length in [1, {})", p)));
        }
        if let Some(s) = junk.iter().find(|s| s.length != p) {
            return Err(Error::contradiction(format!("junk summand {s} must have length {p}")));
        }
        let (mut main, mut junk) = (main, junk);
        main.sort_unstable();
        junk.sort_unstable();
        Ok(EODecomposition { prime, main, junk })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn main(&self) -> &[Summand] {
        &self.main
    }

    pub fn junk(&self) -> &[Summand] {
        &self.junk
    }

    /// `main ⊎ junk`.
    pub fn all(&self) -> Decomposition {
        Decomposition::new(self.prime, self.main.iter().chain(&self.junk).copied())
            .expect("lengths validated at construction")
    }
}

/// What the closed-form splitting says about one Adams summand
/// (cells `x_k` with `k ≡ r + i (mod p-1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdamsSlot {
    pub i: i64,
    /// `n_{r+i}`: the top cell of this Adams summand.
    pub top_cell: i64,
    /// `l(n,r,i)`; `None` when it is `<= 0` (`X_l = 0` convention).
    pub bottom_length: Option<i64>,
    /// Whether `r+i + [r+i]_p (p-1) < n_{r+i}`, i.e. the bottom chain is
    /// complete and a separate top piece exists.
    pub has_top: bool,
    /// `y(n,r,i)/2`.
    pub top_half_shift: i64,
    /// `p - [n_{r+i}]_p`.
    pub top_length: i64,
}

impl AdamsSlot {
    pub fn bottom(&self, r: i64) -> Option<Summand> {
        self.bottom_length.map(|l| Summand::new(r + self.i, l))
    }

    pub fn top(&self) -> Option<Summand> {
        self.has_top.then(|| Summand::new(self.top_half_shift, self.top_length))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingContext {
    pub r: i64,
    pub n: i64,
    pub prime: Prime,
    pub slots: Vec<AdamsSlot>,
}

pub fn splitting_context(r: i64, n: i64, p: Prime) -> Result<SplittingContext> {
    if r < 0 || r > n {
        return Err(Error::invalid(format!("need 0 <= r <= n, got r={r}, n={n}")));
    }
    let q = p.get();
    let pm1 = p.pm1();
    let slots = (0..pm1)
        .map(|i| {
            let k = r + i;
            let top_cell = floor_same_residue(n, k, p);
            let k_res = rep(k, q);
            let top_res = rep(top_cell, q);
            let l = (k_res + 1).min((top_cell - k) / pm1 + 1);
            AdamsSlot {
                i,
                top_cell,
                bottom_length: (l > 0).then_some(l),
                has_top: k + k_res * pm1 < top_cell,
                top_half_shift: top_cell - (q - top_res - 1) * pm1,
                top_length: q - top_res,
            }
        })
        .collect();
    Ok(SplittingContext { r, n, prime: p, slots })
}

/// `EO ⊗ CP^n_r` as bottom pieces `Σ^{2(r+i)} X_{l(n,r,i)}`, top pieces
/// `Σ^{y(n,r,i)} X_{p-[n_{r+i}]_p}`, and free junk. The closed form is
/// checked against the decomposition of the cohomology on every call.
pub fn closed_form_splitting(r: i64, n: i64, p: Prime) -> Result<EODecomposition> {
    let ctx = splitting_context(r, n, p)?;
    let candidates: Vec<Summand> = ctx
        .slots
        .iter()
        .flat_map(|s| s.bottom(r).into_iter().chain(s.top()))
        .collect();
    let oracle = stunted_cohomology(r, n, p)?.decompose()?;
    let rest = multiset_difference(oracle.summands(), &candidates).ok_or_else(|| {
        Error::contradiction(format!(
            "closed-form summands {candidates:?} of CP^{n}_{r} at p={p} are not part of the comodule decomposition {:?}",
            oracle.summands()
        ))
    })?;
    let q = p.get();
    if let Some(s) = rest.iter().find(|s| s.length != q) {
        return Err(Error::contradiction(format!(
            "CP^{n}_{r} at p={p}: summand {s} is missing from the closed form"
        )));
    }
    let (mut main, mut junk): (Vec<_>, Vec<_>) = candidates.into_iter().partition(|s| s.length < q);
    junk.extend(rest);
    main.sort_unstable();
    junk.sort_unstable();
    EODecomposition::new(p, main, junk)
}

/// Spanier–Whitehead dual: `D Σ^{2s} X_l = Σ^{-2s - 2(l-1)(p-1)} X_l`.
pub fn dual_summand(s: Summand, p: Prime) -> Summand {
    Summand::new(-s.half_shift - (s.length - 1) * p.pm1(), s.length)
}

/// `X_l^e ⊗ X_{l2}^e` for unshifted factors.
///
/// Main pieces are `Σ^{2(l-j)(p-1)} X_{l2-l+2j-1}` for `1 <= j <= t`, with
/// `t = l` if `l + l2 <= p` and `t = p - l2` otherwise (after ordering
/// `l <= l2`). The remaining free pieces come from the brute-force
/// decomposition of `W_l ⊗ W_{l2}`, which also certifies the main pieces.
pub fn tensor_rule(l: i64, l2: i64, p: Prime) -> Result<EODecomposition> {
    let q = p.get();
    for x in [l, l2] {
        if !(1..=q).contains(&x) {
            return Err(Error::invalid(format!("length {x} outside [1, {q}]")));
        }
    }
    let (a, b) = if l <= l2 { (l, l2) } else { (l2, l) };
    let t = if a + b <= q { a } else { q - b };
    let formula: Vec<Summand> =
        (1..=t).map(|j| Summand::new((a - j) * p.pm1(), b - a + 2 * j - 1)).collect();

    let wa = GradedComodule::chain(p, 0, a)?;
    let wb = GradedComodule::chain(p, 0, b)?;
    let oracle = wa.tensor(&wb)?.decompose()?;

    let mut formula_lengths: Vec<i64> = formula.iter().map(|s| s.length).collect();
    let mut oracle_lengths: Vec<i64> =
        oracle.summands().iter().map(|s| s.length).filter(|&x| x != q).collect();
    formula_lengths.retain(|&x| x != q);
    formula_lengths.sort_unstable();
    oracle_lengths.sort_unstable();
    if formula_lengths != oracle_lengths {
        return Err(Error::contradiction(format!(
            "W_{a} ⊗ W_{b} at p={q}: formula lengths {formula_lengths:?} vs brute force {oracle_lengths:?}"
        )));
    }
    let rest = multiset_difference(oracle.summands(), &formula).ok_or_else(|| {
        Error::contradiction(format!(
            "W_{a} ⊗ W_{b} at p={q}: formula {formula:?} not contained in {:?}",
            oracle.summands()
        ))
    })?;
    let (main, mut junk): (Vec<_>, Vec<_>) = formula.into_iter().partition(|s| s.length < q);
    junk.extend(rest);
    EODecomposition::new(p, main, junk)
}

/// Why an `EO_{-1}` value holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    /// Inside `-(2p²-p-2) < s < 2p²-p-2-(p-1)(l-1)`.
    Window,
    /// Above the window: the group vanishes by connectivity.
    Connectivity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EoValue {
    pub group: FinitePGroup,
    pub justification: Justification,
}

/// `EO_{-1} Σ^{2s} X_l`: `Z/p` when `l ≠ p` and `s = -l(p-1)`, else 0.
pub fn eo_neg1_shifted_xl(s: i64, l: i64, p: Prime) -> Result<EoValue> {
    let q = p.get();
    if !(1..=q).contains(&l) {
        return Err(Error::invalid(format!("length {l} outside [1, {q}]")));
    }
    let w = p.window();
    if s <= -w {
        return Err(Error::window(format!(
            "EO_-1 of S^{}X_{l} needs s > -(2p^2-p-2) = {}",
            2 * s,
            -w
        )));
    }
    let upper = w - p.pm1() * (l - 1);
    let justification = if s < upper { Justification::Window } else { Justification::Connectivity };
    let group = if justification == Justification::Window && l != q && s == -l * p.pm1() {
        FinitePGroup::cyclic(p, 1)
    } else {
        FinitePGroup::trivial(p)
    };
    Ok(EoValue { group, justification })
}

fn check_corank_window(r: i64, n: i64, p: Prime) -> Result<()> {
    if r < 0 || r > n {
        return Err(Error::invalid(format!("need 0 <= r <= n, got r={r}, n={n}")));
    }
    if n - r >= p.window() {
        return Err(Error::window(format!(
            "corank {} must be < 2p^2-p-2 = {} at p={p}",
            n - r,
            p.window()
        )));
    }
    Ok(())
}

/// One nonzero `Z/p` found by the engine: the piece of `source ⊗ dual`
/// that carries it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub source: Summand,
    pub dual: Summand,
    pub piece: Summand,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineReport {
    pub group: FinitePGroup,
    pub splitting: EODecomposition,
    pub contributions: Vec<Contribution>,
}

/// Derivation engine for `EO_{-1}(CP^n_r ⊗ D CP^n_r)` at a fixed prime.
///
/// Holds the verified tensor rules for all length pairs so that grid
/// sweeps pay for the brute-force check once per prime.
#[derive(Debug, Clone)]
pub struct EoEngine {
    prime: Prime,
    tensors: HashMap<(i64, i64), EODecomposition>,
    /// Also evaluate pairs from different Adams summands and require them
    /// to vanish instead of skipping them.
    pub check_cross_summands: bool,
    pub execution: Execution,
}

impl EoEngine {
    pub fn new(prime: Prime) -> Result<Self> {
        let q = prime.get();
        let mut tensors = HashMap::new();
        for a in 1..=q {
            for b in a..=q {
                tensors.insert((a, b), tensor_rule(a, b, prime)?);
            }
        }
        Ok(EoEngine { prime, tensors, check_cross_summands: false, execution: Execution::default() })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn tensor(&self, a: i64, b: i64) -> &EODecomposition {
        let key = if a <= b { (a, b) } else { (b, a) };
        &self.tensors[&key]
    }

    /// Nonzero pieces of `EO_{-1}(Σ^{2a.s}X_{a.l} ⊗ Σ^{2b.s}X_{b.l})`.
    fn pair_contributions(&self, a: Summand, b: Summand) -> Result<Vec<Contribution>> {
        let base = a.half_shift + b.half_shift;
        let cross = rep(base, self.prime.pm1()) != 0;
        if cross && !self.check_cross_summands {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for piece in self.tensor(a.length, b.length).main() {
            let v = eo_neg1_shifted_xl(base + piece.half_shift, piece.length, self.prime)?;
            if !v.group.is_trivial() {
                if cross {
                    return Err(Error::contradiction(format!(
                        "cross-summand pair {a} ⊗ {b} has nonzero EO_-1"
                    )));
                }
                out.push(Contribution { source: a, dual: b, piece: *piece });
            }
        }
        Ok(out)
    }

    pub fn tensor_dual_report(&self, r: i64, n: i64) -> Result<EngineReport> {
        check_corank_window(r, n, self.prime)?;
        let splitting = closed_form_splitting(r, n, self.prime)?;
        let duals: Vec<Summand> = splitting.main().iter().map(|&s| dual_summand(s, self.prime)).collect();
        let pairs: Vec<(Summand, Summand)> = splitting
            .main()
            .iter()
            .flat_map(|&a| duals.iter().map(move |&b| (a, b)))
            .collect();
        let found = self.execution.try_map(&pairs, |&(a, b)| self.pair_contributions(a, b))?;
        let contributions: Vec<Contribution> = found.into_iter().flatten().collect();
        let group = FinitePGroup::elementary(self.prime, contributions.len());
        Ok(EngineReport { group, splitting, contributions })
    }

    pub fn tensor_dual(&self, r: i64, n: i64) -> Result<FinitePGroup> {
        Ok(self.tensor_dual_report(r, n)?.group)
    }
}

/// `EO_{-1}(CP^n_r ⊗ D CP^n_r)` for `n - r < 2p²-p-2`.
pub fn eo_neg1_cp_tensor_dcp(r: i64, n: i64, p: Prime) -> Result<FinitePGroup> {
    EoEngine::new(p)?.tensor_dual(r, n)
}

/// `EO_{-1} Σ^{-2n} CP^n_r` by summing [`eo_neg1_shifted_xl`] over the
/// splitting, for `0 < n - r < 2p²-p-2`.
pub fn eo_neg1_shifted_cp(r: i64, n: i64, p: Prime) -> Result<FinitePGroup> {
    check_corank_window(r, n, p)?;
    if n == r {
        return Err(Error::window("needs corank n - r > 0"));
    }
    let split = closed_form_splitting(r, n, p)?;
    let mut group = FinitePGroup::trivial(p);
    for s in split.main().iter().chain(split.junk()) {
        group = group.direct_sum(&eo_neg1_shifted_xl(s.half_shift - n, s.length, p)?.group);
    }
    Ok(group)
}

/// Whether the engine value is unchanged under `(r, n) -> (r + kp, n + kp)`
/// for `k = 0..=steps`.
pub fn verify_periodicity(r: i64, n: i64, p: Prime, steps: i64) -> Result<bool> {
    if steps < 1 {
        return Err(Error::invalid("steps must be positive"));
    }
    let engine = EoEngine::new(p)?;
    let first = engine.tensor_dual(r, n)?;
    for k in 1..=steps {
        let shift = k * p.get();
        if engine.tensor_dual(r + shift, n + shift)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}
