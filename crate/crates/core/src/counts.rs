//! Closed-form answers for the p-part `φ(r,c,p)` of the number of stably
//! trivial rank-`r` bundles on `CP^{r+c}`, and the unified query
//! [`count_bundles`].

use serde::{Deserialize, Serialize};

use crate::arith::{is_metastable, p_valuation, rep, Prime};
use crate::detection::{find_projective_instances, DetectionInstance};
use crate::eo::eo_neg1_shifted_cp;
use crate::error::{Error, MatsunagaHypothesis, Result};
use crate::group::FinitePGroup;

pub const CITE_METASTABLE: &str = "metastable-range";
pub const CITE_SMALL_CORANK: &str = "small-corank-splitting";
pub const CITE_CORANK4_P3: &str = "corank-four-at-three";
pub const CITE_TOTAL: &str = "eo-total-computation";
pub const CITE_SURJECTIVE: &str = "eo-hurewicz-surjectivity";
pub const CITE_DETECTION: &str = "hurewicz-detection";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountKind {
    Exact,
    LowerBound,
    Unknown,
}

impl CountKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CountKind::Exact => "exact",
            CountKind::LowerBound => "lower_bound",
            CountKind::Unknown => "unknown",
        }
    }
}

/// Answer to "what is the p-part of `φ(r, n-r)`".
///
/// `Exact` and `LowerBound` carry a valuation (for `LowerBound`, `p^valuation`
/// divides the count); `Unknown` never does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub kind: CountKind,
    pub valuation: Option<u32>,
    pub group: Option<FinitePGroup>,
    pub citations: Vec<String>,
    pub metastable: bool,
    pub evidence: Vec<DetectionInstance>,
    /// `j(n, r)` whenever the corank is inside the EO window, even when an
    /// exact answer is also known.
    pub eo_lower_bound: Option<u32>,
    pub note: Option<String>,
}

impl CountResult {
    fn unknown(metastable: bool, note: String, citations: Vec<String>) -> Self {
        CountResult {
            kind: CountKind::Unknown,
            valuation: None,
            group: None,
            citations,
            metastable,
            evidence: Vec::new(),
            eo_lower_bound: None,
            note: Some(note),
        }
    }
}

/// `v_p φ(r, c)` for odd `p` and `c <= 2p-3`: 1 when
/// `r ≡ 0, -1, ..., p-1-c (mod p)` and `c >= p-1`, otherwise 0.
pub fn phi_valuation_small_corank(r: i64, c: i64, p: Prime) -> Result<u32> {
    let q = p.get();
    if !p.is_odd() {
        return Err(Error::window("the small-corank count needs an odd prime"));
    }
    if c < 0 || c > r {
        return Err(Error::invalid(format!("need 0 <= c <= r, got r={r}, c={c}")));
    }
    if c > 2 * q - 3 {
        return Err(Error::window(format!("corank {c} exceeds 2p-3 = {}", 2 * q - 3)));
    }
    if c < p.pm1() {
        return Ok(0);
    }
    let span = c - p.pm1();
    let residues = (0..=span).any(|m| rep(r, q) == rep(-m, q));
    let witness = (r..=r + span).any(|k| k % q == 0);
    if residues != witness {
        return Err(Error::contradiction(format!(
            "small-corank forms disagree at r={r}, c={c}, p={q}"
        )));
    }
    Ok(u32::from(residues))
}

/// The 3-primary group for corank 4: `Z/9` when `r ≡ 0, 1 (mod 9)`,
/// otherwise `Z/3`.
pub fn corank4_p3_group(r: i64) -> FinitePGroup {
    let three = Prime::new(3).expect("3 is prime");
    let exponent = if rep(r, 9) <= 1 { 2 } else { 1 };
    FinitePGroup::cyclic(three, exponent)
}

fn check_window(n: i64, r: i64, p: Prime) -> Result<()> {
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

/// Which of the four conditions hold at one index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JConditions {
    pub i: i64,
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl JConditions {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }
}

pub fn j_conditions(n: i64, r: i64, p: Prime) -> Result<Vec<JConditions>> {
    check_window(n, r, p)?;
    let q = p.get();
    let pm1 = p.pm1();
    Ok((0..pm1)
        .map(|i| {
            let k = r + i;
            let top = crate::arith::floor_same_residue(n, k, p);
            let (kr, tr) = (rep(k, q), rep(top, q));
            JConditions {
                i,
                a: k + kr * pm1 < top,
                b: tr != 0,
                c: kr < q - tr && kr < tr,
                d: top - k + pm1 * (tr - kr) == q * pm1,
            }
        })
        .collect())
}

/// `j(n, r)`: the number of `i` in `[0, p-2]` meeting conditions A–D, so
/// that `EO_{-1}(CP^n_r ⊗ D CP^n_r) = (Z/p)^j`.
pub fn j_closed(n: i64, r: i64, p: Prime) -> Result<u32> {
    Ok(j_conditions(n, r, p)?.iter().filter(|c| c.all()).count() as u32)
}

/// The count with the first clause of C (`[r+i]_p < p-[n_{r+i}]_p`)
/// dropped. That clause excludes top pieces shorter than the bottom piece of
/// the same Adams summand, but those pairs contribute under the same
/// equation D; this is the form that equals the order exponent of
/// [`crate::eo::eo_neg1_cp_tensor_dcp`]. Always `>=` [`j_closed`].
pub fn j_closed_amended(n: i64, r: i64, p: Prime) -> Result<u32> {
    let q = p.get();
    let count = j_conditions(n, r, p)?
        .iter()
        .filter(|c| {
            let top = crate::arith::floor_same_residue(n, r + c.i, p);
            c.a && c.b && c.d && rep(r + c.i, q) < rep(top, q)
        })
        .count();
    Ok(count as u32)
}

/// `j` for the family of rank `p^2 + tp + r` on `CP^{p^2 + (p-1)^2 + tp + r}`,
/// as a function of `[r]_p`.
///
/// Indices `i > 0` contribute when `2[r+i]_p < p-2`; they run over every
/// residue except `[r-1]_p` and `[r]_p`. The index `i = 0` contributes when
/// `2[r]_p < p-1`.
pub fn bigcount_j(r_mod_p: i64, p: Prime) -> u32 {
    let q = p.get();
    let in_s = |x: i64| 2 * rep(x, q) < q - 2;
    let s_size = (0..q).filter(|&x| in_s(x)).count() as i64;
    let j = s_size - i64::from(in_s(r_mod_p - 1)) - i64::from(in_s(r_mod_p))
        + i64::from(2 * rep(r_mod_p, q) < q - 1);
    j as u32
}

/// The four-case display for the same family, read literally. For
/// `p >= 5` it is one lower than [`bigcount_j`] exactly when
/// `2[r]_p >= p-1`; [`bigcount_j`] is the form that matches [`j_closed`].
pub fn bigcount_j_uncorrected(r_mod_p: i64, p: Prime) -> u32 {
    let q = p.get();
    let f = (q - 2) / 2;
    let high_prev = 2 * rep(r_mod_p - 1, q) >= q - 2;
    let high_cur = 2 * rep(r_mod_p, q) >= q - 1;
    let j = match (high_prev, high_cur) {
        (true, true) => f,
        (false, true) => (f - 1).max(0),
        (true, false) => f + 1,
        (false, false) => (f - 1).max(0) + 1,
    };
    j as u32
}

fn check_top_cell_window(r: i64, n: i64, p: Prime) -> Result<i64> {
    check_window(n, r, p)?;
    let c = n - r;
    if c == 0 {
        return Err(Error::window("needs corank n - r > 0"));
    }
    Ok(c)
}

/// `EO_{-1} Σ^{-2n} CP^n_r`: `Z/p` when `p-1 <= c < p(p-1)` and
/// `floor(c/(p-1)) - 1 ≡ [r]_p + [c]_{p-1} (mod p)`, else 0. Checked against
/// [`eo_neg1_shifted_cp`] on every call.
pub fn eo_top_cell_closed(r: i64, n: i64, p: Prime) -> Result<FinitePGroup> {
    let c = check_top_cell_window(r, n, p)?;
    let q = p.get();
    let pm1 = p.pm1();
    let nonzero = pm1 <= c && c < q * pm1 && rep(c / pm1 - 1 - rep(r, q) - rep(c, pm1), q) == 0;
    let closed = FinitePGroup::elementary(p, usize::from(nonzero));
    let derived = eo_neg1_shifted_cp(r, n, p)?;
    if closed != derived {
        return Err(Error::contradiction(format!(
            "top-cell closed form {closed} vs splitting {derived} at r={r}, n={n}, p={q}"
        )));
    }
    Ok(closed)
}

/// The top-cell display read literally: `0 < c <= (p-1)^2` and
/// `ceil(c/(p-1)) - 1 ≡ [r]_p + [c]_{p-1} (mod p)`. Differs from
/// [`eo_top_cell_closed`] when `p-1` does not divide `c` and for
/// `(p-1)^2 < c < p(p-1)`.
pub fn eo_top_cell_closed_uncorrected(r: i64, n: i64, p: Prime) -> Result<FinitePGroup> {
    let c = check_top_cell_window(r, n, p)?;
    let q = p.get();
    let pm1 = p.pm1();
    let ceil = crate::arith::ceil_div(c, pm1);
    let nonzero = c <= pm1 * pm1 && rep(ceil - 1 - rep(r, q) - rep(c, pm1), q) == 0;
    Ok(FinitePGroup::elementary(p, usize::from(nonzero)))
}

/// p-primary part of `π_{2n+2k-3} U(n)`: `Z/p^N` with
/// `N = min(floor((k-1)/(p-1)), v_p(n+k))`. For `k = 0` the floor is
/// negative and the group is trivial.
pub fn matsunaga_order(n: i64, k: i64, p: Prime) -> Result<FinitePGroup> {
    use MatsunagaHypothesis as H;
    let q = p.get();
    let checks = [
        (p.is_odd(), H::OddPrime),
        (n >= 2, H::NAtLeastTwo),
        (k >= 0, H::KNonNegative),
        (k <= q * p.pm1(), H::KAtMostPTimesPMinusOne),
        (n > k, H::NGreaterThanK),
        (n.checked_add(k).is_some_and(|s| s % q == 0), H::NPlusKDivisibleByP),
    ];
    if let Some(&(_, h)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::Hypothesis(h));
    }
    let bound = (k - 1).div_euclid(p.pm1());
    let v = i64::from(p_valuation(n + k, p)?);
    Ok(FinitePGroup::cyclic(p, bound.min(v).max(0) as u32))
}

/// The p-part of the number of stably trivial rank-`r` bundles on `CP^n`.
pub fn count_bundles(r: i64, n: i64, p: Prime) -> CountResult {
    let metastable = is_metastable(r, n);
    if !metastable {
        return CountResult::unknown(
            false,
            format!("(r, n) = ({r}, {n}) is outside the metastable range n/2 <= r < n"),
            Vec::new(),
        );
    }
    let c = n - r;
    let q = p.get();
    let cite = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let eo_lower_bound = if c < p.window() { j_closed(n, r, p).ok() } else { None };

    if p.is_odd() && c <= 2 * q - 3 {
        if let Ok(v) = phi_valuation_small_corank(r, c, p) {
            return CountResult {
                kind: CountKind::Exact,
                valuation: Some(v),
                group: Some(FinitePGroup::cyclic(p, v)),
                citations: cite(&[CITE_METASTABLE, CITE_SMALL_CORANK]),
                metastable,
                evidence: Vec::new(),
                eo_lower_bound,
                note: None,
            };
        }
    }
    if q == 3 && c == 4 {
        let g = corank4_p3_group(r);
        return CountResult {
            kind: CountKind::Exact,
            valuation: Some(g.order_exponent()),
            group: Some(g),
            citations: cite(&[CITE_METASTABLE, CITE_CORANK4_P3]),
            metastable,
            evidence: Vec::new(),
            eo_lower_bound,
            note: None,
        };
    }
    if let Some(j) = eo_lower_bound {
        return CountResult {
            kind: CountKind::LowerBound,
            valuation: Some(j),
            group: None,
            citations: cite(&[CITE_METASTABLE, CITE_SURJECTIVE, CITE_TOTAL]),
            metastable,
            evidence: Vec::new(),
            eo_lower_bound,
            note: None,
        };
    }
    let evidence = find_projective_instances(p, r, n);
    let mut citations = cite(&[CITE_METASTABLE]);
    if !evidence.is_empty() {
        citations.push(CITE_DETECTION.to_string());
    }
    let mut result = CountResult::unknown(
        true,
        format!("corank {c} is beyond the EO window 2p^2-p-2 = {}", p.window()),
        citations,
    );
    result.evidence = evidence;
    result
}
