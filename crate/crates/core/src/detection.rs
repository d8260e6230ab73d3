//! Families of nontrivial bundles detected through the Hurewicz image of
//! `KO`, `tmf` at 2, `eo_2` at 3 and `eo_{p-1}` at `p >= 5`.
//!
//! The detecting homotopy elements are opaque labels with a degree. Bounds
//! on the family indices are the metastability thresholds.

use serde::{Deserialize, Serialize};

use crate::arith::{is_metastable, Prime};
use crate::error::{Error, Result};

pub const CITE_SPLIT: &str = "split-construction";
pub const CITE_KO: &str = "ko-alpha-family";
pub const CITE_TMF: &str = "tmf-w-family";
pub const CITE_EO2: &str = "eo2-theta-family";
pub const CITE_EOP: &str = "eop-theta-family";
pub const CITE_TODA: &str = "toda-identification";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// A bundle on `CP^dim`.
    Projective { dim: i64 },
    /// A class in `π_degree BU(group_rank)`.
    Unitary { degree: i64, group_rank: i64 },
}

/// A guaranteed nonzero `Z/p^torsion_exponent` among rank-`rank` bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionInstance {
    pub prime: Prime,
    pub rank: i64,
    pub target: Target,
    pub torsion_exponent: u32,
    pub source_label: String,
    pub citation: String,
}

impl DetectionInstance {
    /// Same prime, rank, target and torsion, ignoring labels.
    pub fn same_bundle(&self, other: &DetectionInstance) -> bool {
        (self.prime, self.rank, self.target, self.torsion_exponent)
            == (other.prime, other.rank, other.target, other.torsion_exponent)
    }
}

fn ck(v: Option<i64>, what: &'static str) -> Result<i64> {
    v.ok_or(Error::Overflow(what))
}

fn prime(p: i64) -> Prime {
    Prime::new(p).expect("literal prime")
}

fn projective(p: Prime, rank: i64, dim: i64, label: String, citation: &str) -> Result<DetectionInstance> {
    if !is_metastable(rank, dim) {
        return Err(Error::contradiction(format!("rank {rank} on CP^{dim} is not metastable")));
    }
    Ok(DetectionInstance {
        prime: p,
        rank,
        target: Target::Projective { dim },
        torsion_exponent: 1,
        source_label: label,
        citation: citation.to_string(),
    })
}

fn unitary(p: Prime, group_rank: i64, degree: i64, label: String, citation: &str) -> DetectionInstance {
    DetectionInstance {
        prime: p,
        rank: group_rank,
        target: Target::Unitary { degree, group_rank },
        torsion_exponent: 1,
        source_label: label,
        citation: citation.to_string(),
    }
}

/// Input to the split construction: a stable element of degree
/// `element_degree = 2nk - 3` detected by a theory orienting `n γ_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConstructionParams {
    pub orientability_multiple: i64,
    pub k: i64,
    pub i: i64,
    pub element_degree: i64,
}

/// Bottom and top cell degrees of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitDegrees {
    pub rank: i64,
    pub dim: i64,
    /// `2n(k+i) - 2`.
    pub top_cell: i64,
    /// `2ni + 1`.
    pub bottom_cell_plus_one: i64,
}

pub fn split_construction_degrees(params: &SplitConstructionParams) -> Result<SplitDegrees> {
    let SplitConstructionParams { orientability_multiple: n, k, i, element_degree } = *params;
    if n < 1 || k < 1 || i < 1 {
        return Err(Error::invalid(format!("n, k, i must be positive, got n={n}, k={k}, i={i}")));
    }
    let expected = ck(n.checked_mul(k).and_then(|x| x.checked_mul(2)).and_then(|x| x.checked_sub(3)), "2nk-3")?;
    if element_degree != expected {
        return Err(Error::invalid(format!("element degree {element_degree} differs from 2nk-3 = {expected}")));
    }
    if i < k {
        return Err(Error::invalid(format!("need i >= k for metastability, got i={i}, k={k}")));
    }
    let rank = ck(n.checked_mul(i), "ni")?;
    let dim = ck(k.checked_add(i).and_then(|x| x.checked_mul(n)).and_then(|x| x.checked_sub(1)), "n(k+i)-1")?;
    let top_cell = ck(dim.checked_mul(2), "2n(k+i)-2")?;
    let bottom_cell_plus_one = ck(rank.checked_mul(2).and_then(|x| x.checked_add(1)), "2ni+1")?;
    if top_cell - element_degree != bottom_cell_plus_one {
        return Err(Error::contradiction("split construction degree bookkeeping"));
    }
    Ok(SplitDegrees { rank, dim, top_cell, bottom_cell_plus_one })
}

/// Rank `ni` on `CP^{n(k+i)-1}` from the composite
/// `CP^{n(k+i)-1}_{ni} -> S^{2n(k+i)-2} -> S^{2ni+1} -> Σ CP^{n(k+i)-1}_{ni}`.
pub fn split_construction_instance(params: &SplitConstructionParams, p: Prime) -> Result<DetectionInstance> {
    let d = split_construction_degrees(params)?;
    projective(p, d.rank, d.dim, format!("theta in degree {}", params.element_degree), CITE_SPLIT)
}

fn family_params(n: i64, k: i64, i: i64, deg: i64) -> SplitConstructionParams {
    SplitConstructionParams { orientability_multiple: n, k, i, element_degree: deg }
}

fn need(ok: bool, clause: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(clause()))
    }
}

fn lin(a: i64, t: i64, b: i64, what: &'static str) -> Result<i64> {
    ck(a.checked_mul(t).and_then(|x| x.checked_add(b)), what)
}

pub fn ko_params(t: i64, i: i64) -> Result<SplitConstructionParams> {
    need(t >= 0, || format!("t must be >= 0, got {t}"))?;
    let k = lin(2, t, 1, "2t+1")?;
    need(i >= k, || format!("need i >= 2t+1 = {k}, got i={i}"))?;
    Ok(family_params(2, k, i, lin(8, t, 1, "8t+1")?))
}

/// Rank `2i` on `CP^{2i+4t+1}` at 2, from `α_{4t+1}`; needs `i >= 2t+1`.
pub fn ko_family(t: i64, i: i64) -> Result<DetectionInstance> {
    let d = split_construction_degrees(&ko_params(t, i)?)?;
    projective(prime(2), d.rank, d.dim, format!("alpha_{{{}}}", 4 * t + 1), CITE_KO)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TmfVariant {
    /// `Δ^{8t} w` in degree `192t + 45`.
    W,
    /// `Δ^{8t} w κ̄^4` in degree `192t + 125`.
    WKappa4,
}

impl TmfVariant {
    fn offset(self) -> i64 {
        match self {
            TmfVariant::W => 3,
            TmfVariant::WKappa4 => 8,
        }
    }

    fn degree(self, t: i64) -> Result<i64> {
        match self {
            TmfVariant::W => lin(192, t, 45, "192t+45"),
            TmfVariant::WKappa4 => lin(192, t, 125, "192t+125"),
        }
    }

    fn label(self, t: i64) -> String {
        match self {
            TmfVariant::W => format!("Delta^{{{}}} w", 8 * t),
            TmfVariant::WKappa4 => format!("Delta^{{{}}} w kappabar^4", 8 * t),
        }
    }
}

pub fn tmf2_params(t: i64, index: i64, variant: TmfVariant) -> Result<SplitConstructionParams> {
    need(t >= 0, || format!("t must be >= 0, got {t}"))?;
    let k = lin(12, t, variant.offset(), "12t+offset")?;
    need(index >= k, || format!("need index >= 12t+{} = {k}, got {index}", variant.offset()))?;
    Ok(family_params(8, k, index, variant.degree(t)?))
}

/// Rank `8i` on `CP^{8(12t+3+i)-1}` (variant `W`) or `CP^{8(12t+8+i)-1}`
/// (variant `WKappa4`) at 2.
pub fn tmf2_families(t: i64, index: i64, variant: TmfVariant) -> Result<DetectionInstance> {
    let d = split_construction_degrees(&tmf2_params(t, index, variant)?)?;
    projective(prime(2), d.rank, d.dim, variant.label(t), CITE_TMF)
}

/// Rank `3l` on `CP^{3l+19+36t}` at 3, from `θ_t` in degree `37 + 72t`;
/// needs `3l >= 19 + 36t`.
pub fn eo2_family(t: i64, l: i64) -> Result<DetectionInstance> {
    need(t >= 0, || format!("t must be >= 0, got {t}"))?;
    let rank = ck(l.checked_mul(3), "3l")?;
    let gap = lin(36, t, 19, "19+36t")?;
    need(rank >= gap, || format!("need 3l >= 19+36t = {gap}, got 3l = {rank}"))?;
    projective(prime(3), rank, ck(rank.checked_add(gap), "3l+19+36t")?, format!("theta_{t}"), CITE_EO2)
}

/// `d_j = 2p^2(p-1)^2 + 2p - 3 + j(2p^2 - 2p - 2)`, the degree of `θ_j`.
pub fn theta_degree(p: Prime, j: i64) -> Result<i64> {
    let q = p.get();
    let sq = |x: i64| x.checked_mul(x);
    let base = sq(q)
        .and_then(|q2| sq(q - 1).and_then(|m| q2.checked_mul(m)))
        .and_then(|x| x.checked_mul(2))
        .and_then(|x| x.checked_add(2 * q - 3));
    let step = sq(q).and_then(|q2| q2.checked_mul(2)).and_then(|x| x.checked_sub(2 * q + 2));
    ck(base.and_then(|b| step.and_then(|s| s.checked_mul(j)).and_then(|s| b.checked_add(s))), "d_j")
}

fn check_eop_prime(p: Prime) -> Result<()> {
    need(p.get() >= 5, || format!("the eo_(p-1) family needs p >= 5, got p={p}"))
}

/// Rank `lp` on `CP^{lp + (d+1)/2}` with `d = d_1`; needs `lp >= (d+1)/2`.
pub fn eop_family(p: Prime, l: i64) -> Result<DetectionInstance> {
    check_eop_prime(p)?;
    let d = theta_degree(p, 1)?;
    let half = (d + 1) / 2;
    let rank = ck(l.checked_mul(p.get()), "lp")?;
    need(rank >= half, || format!("need lp >= (d+1)/2 = {half}, got lp = {rank}"))?;
    projective(p, rank, ck(rank.checked_add(half), "lp+(d+1)/2")?, "theta_1".to_string(), CITE_EOP)
}

/// Smallest `l` admitted by [`eop_family`].
pub fn eop_min_l(p: Prime) -> Result<i64> {
    check_eop_prime(p)?;
    let half = (theta_degree(p, 1)? + 1) / 2;
    Ok(crate::arith::ceil_div(half, p.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitaryFamily {
    /// `π_{4(2t+1+i)-2} BU(2i)`, `i >= 2t+1`.
    Ko { t: i64, i: i64 },
    /// `π_{2m(i)} BU(8i)`, `m(i) = 8(12t+3+i)-1`, `i >= 12t+3`.
    TmfW { t: i64, i: i64 },
    /// `π_{2n(j)} BU(8j)`, `n(j) = 8(12t+8+j)-1`, `j >= 12t+8`.
    TmfWk { t: i64, j: i64 },
    /// `π_{2(3l+19+36t)} BU(3l)`, `l >= 12t+7`.
    Eo2 { t: i64, l: i64 },
    /// `π_{2lp+1+d_j} BU(lp)`, `1 <= j <= p-1`, `l >= (d_j+1)/(2p)`.
    Eop { p: i64, j: i64, l: i64 },
}

pub fn unitary_families(family: UnitaryFamily) -> Result<DetectionInstance> {
    match family {
        UnitaryFamily::Ko { t, i } => {
            let d = split_construction_degrees(&ko_params(t, i)?)?;
            Ok(unitary(prime(2), d.rank, 2 * d.dim, format!("alpha_{{{}}}", 4 * t + 1), CITE_KO))
        }
        UnitaryFamily::TmfW { t, i } => {
            let d = split_construction_degrees(&tmf2_params(t, i, TmfVariant::W)?)?;
            Ok(unitary(prime(2), d.rank, 2 * d.dim, TmfVariant::W.label(t), CITE_TMF))
        }
        UnitaryFamily::TmfWk { t, j } => {
            let d = split_construction_degrees(&tmf2_params(t, j, TmfVariant::WKappa4)?)?;
            Ok(unitary(prime(2), d.rank, 2 * d.dim, TmfVariant::WKappa4.label(t), CITE_TMF))
        }
        UnitaryFamily::Eo2 { t, l } => {
            need(t >= 0, || format!("t must be >= 0, got {t}"))?;
            let min = lin(12, t, 7, "12t+7")?;
            need(l >= min, || format!("need l >= 12t+7 = {min}, got l={l}"))?;
            let rank = ck(l.checked_mul(3), "3l")?;
            let degree = ck(lin(36, t, 19, "19+36t")?.checked_add(rank).and_then(|x| x.checked_mul(2)), "2(3l+19+36t)")?;
            Ok(unitary(prime(3), rank, degree, format!("theta_{t}"), CITE_EO2))
        }
        UnitaryFamily::Eop { p, j, l } => {
            let p = Prime::new(p)?;
            check_eop_prime(p)?;
            need((1..p.get()).contains(&j), || format!("need 1 <= j <= p-1, got j={j}"))?;
            let d = theta_degree(p, j)?;
            let q = p.get();
            // l >= (d_j + 1) / (2p), compared without division.
            need(l.checked_mul(2 * q).is_some_and(|x| x > d), || {
                format!("need l >= (d_j+1)/(2p) = {}/{}, got l={l}", d + 1, 2 * q)
            })?;
            let rank = ck(l.checked_mul(q), "lp")?;
            let degree = ck(rank.checked_mul(2).and_then(|x| x.checked_add(1 + d)), "2lp+1+d_j")?;
            Ok(unitary(p, rank, degree, format!("theta_{j}"), CITE_EOP))
        }
    }
}

/// The identification `π_{2n} BU(r) ≅ π_{2n} Σ^∞ Σ CP^n_r` for `n > r >= n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TodaIdentification {
    pub degree: i64,
    pub r: i64,
    pub n: i64,
}

impl std::fmt::Display for TodaIdentification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pi_{d} BU({r}) = pi_{d} Sigma CP^{n}_{r} (stable)", d = self.degree, r = self.r, n = self.n)
    }
}

pub fn toda_degree(r: i64, n: i64) -> Result<TodaIdentification> {
    need(is_metastable(r, n), || format!("need n > r >= n/2, got r={r}, n={n}"))?;
    Ok(TodaIdentification { degree: ck(n.checked_mul(2), "2n")?, r, n })
}

/// Every projective family member at `p` that is a rank-`r` bundle on `CP^n`.
pub fn find_projective_instances(p: Prime, r: i64, n: i64) -> Vec<DetectionInstance> {
    let mut out = Vec::new();
    let c = n - r;
    if !is_metastable(r, n) {
        return out;
    }
    match p.get() {
        2 => {
            // KO: rank 2i, corank 4t+1.
            if r % 2 == 0 && c % 4 == 1 {
                out.extend(ko_family((c - 1) / 4, r / 2));
            }
            // tmf: rank 8i, corank 8k - 1 with k = 12t + offset.
            if r % 8 == 0 && (c + 1) % 8 == 0 {
                let k = (c + 1) / 8;
                for v in [TmfVariant::W, TmfVariant::WKappa4] {
                    let rest = k - v.offset();
                    if rest >= 0 && rest % 12 == 0 {
                        out.extend(tmf2_families(rest / 12, r / 8, v));
                    }
                }
            }
        }
        3 => {
            if r % 3 == 0 && c >= 19 && (c - 19) % 36 == 0 {
                out.extend(eo2_family((c - 19) / 36, r / 3));
            }
        }
        q => {
            if q >= 5 && r % q == 0 {
                if let Ok(d) = theta_degree(p, 1) {
                    if c == (d + 1) / 2 {
                        out.extend(eop_family(p, r / q));
                    }
                }
            }
        }
    }
    out
}
