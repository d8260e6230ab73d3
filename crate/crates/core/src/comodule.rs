//! Finite graded modules over the truncated algebra `F_p[P¹]/(P¹)^p`, the
//! mod-p (co)homology model of stunted projective spectra.
//!
//! The indecomposables are the chains `W_l` (`1 <= l <= p`): `l` classes in
//! degrees `2s, 2s + 2(p-1), ..., 2s + 2(l-1)(p-1)` with `P¹` an isomorphism
//! between consecutive ones. [`GradedComodule::decompose`] computes an
//! explicit Jordan-chain basis degree by degree and reads off the summands;
//! everything else in the crate is checked against it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{rep, Prime};
use crate::error::{Error, Result};
use crate::fp::{is_zero, Echelon, LinearMap, Vector};

/// `Σ^{2s} W_l` (homology) or `Σ^{2s} X_l` (spectra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub half_shift: i64,
    pub length: i64,
}

impl Summand {
    pub const fn new(half_shift: i64, length: i64) -> Self {
        Summand { half_shift, length }
    }

    /// Half-degree of the top class.
    pub fn top_half_shift(self, p: Prime) -> i64 {
        self.half_shift + (self.length - 1) * p.pm1()
    }

    /// Degrees of the `length` classes, bottom first.
    pub fn degrees(self, p: Prime) -> impl Iterator<Item = i64> {
        let step = 2 * p.pm1();
        let base = 2 * self.half_shift;
        (0..self.length).map(move |k| base + k * step)
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{}W_{}", 2 * self.half_shift, self.length)
    }
}

/// A multiset of summands in canonical (half-shift, length) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    prime: Prime,
    summands: Vec<Summand>,
}

impl Decomposition {
    pub fn new(prime: Prime, summands: impl IntoIterator<Item = Summand>) -> Result<Self> {
        let mut summands: Vec<Summand> = summands.into_iter().collect();
        if let Some(bad) = summands.iter().find(|s| s.length < 1 || s.length > prime.get()) {
            return Err(Error::invalid(format!(
                "summand length {} outside [1, {prime}]",
                bad.length
            )));
        }
        summands.sort_unstable();
        Ok(Decomposition { prime, summands })
    }

    pub fn empty(prime: Prime) -> Self {
        Decomposition { prime, summands: Vec::new() }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn into_summands(self) -> Vec<Summand> {
        self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(|s| s.length as usize).sum()
    }

    /// Number of classes in each degree.
    pub fn degree_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            for d in s.degrees(self.prime) {
                *out.entry(d).or_insert(0) += 1;
            }
        }
        out
    }

    /// Multiset union.
    pub fn union(&self, other: &Decomposition) -> Decomposition {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        summands.sort_unstable();
        Decomposition { prime: self.prime, summands }
    }

    /// The direct sum of chains realising this decomposition.
    pub fn to_comodule(&self) -> GradedComodule {
        let mut out = GradedComodule::zero(self.prime);
        for s in &self.summands {
            let w = GradedComodule::chain(self.prime, s.half_shift, s.length)
                .expect("lengths validated at construction");
            out = out.direct_sum(&w).expect("same prime");
        }
        out
    }
}

/// Remove `part` from `whole` as multisets; `None` if `part` is not contained.
pub(crate) fn multiset_difference(whole: &[Summand], part: &[Summand]) -> Option<Vec<Summand>> {
    let mut counts: BTreeMap<Summand, usize> = BTreeMap::new();
    for s in whole {
        *counts.entry(*s).or_insert(0) += 1;
    }
    for s in part {
        match counts.get_mut(s) {
            Some(c) if *c > 0 => *c -= 1,
            _ => return None,
        }
    }
    Some(counts.into_iter().flat_map(|(s, c)| std::iter::repeat_n(s, c)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub degree: i64,
}

/// One Jordan chain found by [`GradedComodule::jordan_chains`]: the
/// generator (as coordinates in the original basis) and its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub degree: i64,
    pub length: i64,
    pub generator: BTreeMap<usize, u64>,
}

type Sparse = BTreeMap<usize, u64>;

/// A finite graded F_p-vector space with a degree `2(p-1)` operator `P¹`
/// satisfying `(P¹)^p = 0`.
///
/// The action is stored sparsely: `action[i]` lists `(j, c)` with
/// `P¹(e_i) = Σ c·e_j`, every `c` in `1..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComodule {
    prime: Prime,
    cells: Vec<Cell>,
    action: Vec<Vec<(usize, u64)>>,
}

impl GradedComodule {
    pub fn new(prime: Prime, cells: Vec<Cell>, action: Vec<Vec<(usize, u64)>>) -> Result<Self> {
        if cells.len() != action.len() {
            return Err(Error::MalformedComodule(format!(
                "{} cells but {} action rows",
                cells.len(),
                action.len()
            )));
        }
        let p = prime.get() as u64;
        let step = 2 * prime.pm1();
        let mut action = action;
        for (i, row) in action.iter_mut().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::MalformedComodule(format!(
                        "repeated target {} in the image of {}",
                        w[0].0, cells[i].label
                    )));
                }
            }
            for &(j, c) in row.iter() {
                let target = cells.get(j).ok_or_else(|| {
                    Error::MalformedComodule(format!("target index {j} out of range"))
                })?;
                if c == 0 || c >= p {
                    return Err(Error::MalformedComodule(format!(
                        "coefficient {c} not in 1..{p}"
                    )));
                }
                if target.degree != cells[i].degree + step {
                    return Err(Error::MalformedComodule(format!(
                        "P1 sends {} (degree {}) to {} (degree {}), expected a jump of {step}",
                        cells[i].label, cells[i].degree, target.label, target.degree
                    )));
                }
            }
        }
        let m = GradedComodule { prime, cells, action };
        for i in 0..m.dim() {
            let mut v: Sparse = BTreeMap::from([(i, 1)]);
            for _ in 0..prime.get() {
                v = m.apply_sparse(&v);
            }
            if !v.is_empty() {
                return Err(Error::MalformedComodule(format!(
                    "(P1)^{} is nonzero on {}",
                    prime,
                    m.cells[i].label
                )));
            }
        }
        Ok(m)
    }

    pub fn zero(prime: Prime) -> Self {
        GradedComodule { prime, cells: Vec::new(), action: Vec::new() }
    }

    /// `W_l` with bottom class in degree `2·half_shift`, all coefficients 1.
    pub fn chain(prime: Prime, half_shift: i64, length: i64) -> Result<Self> {
        if length < 1 || length > prime.get() {
            return Err(Error::invalid(format!("chain length {length} outside [1, {prime}]")));
        }
        let s = Summand::new(half_shift, length);
        let cells: Vec<Cell> = s
            .degrees(prime)
            .enumerate()
            .map(|(k, degree)| Cell { label: format!("w{half_shift}.{k}"), degree })
            .collect();
        let n = cells.len();
        let action = (0..n).map(|k| if k + 1 < n { vec![(k + 1, 1)] } else { vec![] }).collect();
        Ok(GradedComodule { prime, cells, action })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `P¹(e_i)` as `(target, coefficient)` pairs.
    pub fn action_of(&self, i: usize) -> &[(usize, u64)] {
        &self.action[i]
    }

    fn step(&self) -> i64 {
        2 * self.prime.pm1()
    }

    fn modulus(&self) -> u64 {
        self.prime.get() as u64
    }

    fn apply_sparse(&self, v: &Sparse) -> Sparse {
        let p = self.modulus();
        let mut out: Sparse = BTreeMap::new();
        for (&i, &c) in v {
            for &(j, a) in &self.action[i] {
                let e = out.entry(j).or_insert(0);
                *e = (*e + c * a) % p;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Basis indices grouped by degree.
    fn pieces(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            out.entry(c.degree).or_default().push(i);
        }
        out
    }

    /// Number of classes in each degree.
    pub fn degree_dims(&self) -> BTreeMap<i64, usize> {
        self.pieces().into_iter().map(|(d, v)| (d, v.len())).collect()
    }

    /// `(P¹)^j` restricted to degree `degree`, in local coordinates.
    fn power_map(&self, pieces: &BTreeMap<i64, Vec<usize>>, degree: i64, j: i64) -> LinearMap {
        let empty = Vec::new();
        let source = pieces.get(&degree).unwrap_or(&empty);
        let target = pieces.get(&(degree + j * self.step())).unwrap_or(&empty);
        let local: HashMap<usize, usize> = target.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let columns = source
            .iter()
            .map(|&g| {
                let mut v: Sparse = BTreeMap::from([(g, 1)]);
                for _ in 0..j {
                    v = self.apply_sparse(&v);
                }
                let mut col = vec![0; target.len()];
                for (g, c) in v {
                    col[local[&g]] = c;
                }
                col
            })
            .collect();
        LinearMap { p: self.modulus(), target_dim: target.len(), columns }
    }

    /// Rank of `(P¹)^j` out of `degree`.
    pub fn power_rank(&self, degree: i64, j: i64) -> usize {
        self.power_map(&self.pieces(), degree, j).rank()
    }

    /// `(degree, j) -> rank (P¹)^j` for every occupied degree and `1 <= j < p`.
    /// Two modules over the truncated algebra are isomorphic exactly when
    /// these agree together with [`degree_dims`](Self::degree_dims).
    pub fn rank_profile(&self) -> BTreeMap<(i64, i64), usize> {
        let pieces = self.pieces();
        let mut out = BTreeMap::new();
        for &d in pieces.keys() {
            for j in 1..self.prime.get() {
                let r = self.power_map(&pieces, d, j).rank();
                if r > 0 {
                    out.insert((d, j), r);
                }
            }
        }
        out
    }

    /// An explicit Jordan-chain basis.
    ///
    /// In each degree `d` and for each length `l` from `p` down to 1, the
    /// generators of chains of length exactly `l` starting in degree `d`
    /// are a basis of a complement of `ker P^{l-1} + P(ker P^{l+1})` inside
    /// `ker P^l` (all restricted to the relevant degrees).
    pub fn jordan_chains(&self) -> Vec<Chain> {
        let p = self.prime.get();
        let step = self.step();
        let pieces = self.pieces();
        let mut kernels: HashMap<(i64, i64), Vec<Vector>> = HashMap::new();
        let mut kernel = |d: i64, l: i64| -> Vec<Vector> {
            kernels
                .entry((d, l))
                .or_insert_with(|| {
                    let dim = pieces.get(&d).map_or(0, Vec::len);
                    if l <= 0 {
                        Vec::new()
                    } else if l >= p {
                        unit_vectors(dim)
                    } else {
                        self.power_map(&pieces, d, l).kernel()
                    }
                })
                .clone()
        };

        let mut chains = Vec::new();
        for (&d, basis) in &pieces {
            let dim = basis.len();
            let lower = pieces.get(&(d - step));
            let p_in = self.power_map(&pieces, d - step, 1);
            for l in (1..=p).rev() {
                let mut span = Echelon::new(self.modulus(), dim);
                for v in kernel(d, l - 1) {
                    span.insert(&v);
                }
                if lower.is_some() {
                    for v in kernel(d - step, l + 1) {
                        span.insert(&p_in.apply(&v));
                    }
                }
                for v in kernel(d, l) {
                    if span.insert(&v) {
                        let generator = v
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(k, &c)| (basis[k], c))
                            .collect();
                        chains.push(Chain { degree: d, length: l, generator });
                    }
                }
            }
        }
        chains
    }

    /// Every vector of every chain, in the original basis. Used to certify
    /// that the chains form a basis.
    pub fn chain_vectors(&self, chains: &[Chain]) -> Vec<BTreeMap<usize, u64>> {
        let mut out = Vec::new();
        for c in chains {
            let mut v = c.generator.clone();
            for _ in 0..c.length {
                out.push(v.clone());
                v = self.apply_sparse(&v);
            }
        }
        out
    }

    /// Split into shifted `W_l`'s. Rejects odd-degree input, which has no
    /// half-shift.
    pub fn decompose(&self) -> Result<Decomposition> {
        if let Some(c) = self.cells.iter().find(|c| c.degree % 2 != 0) {
            return Err(Error::invalid(format!("odd degree {} in {}", c.degree, c.label)));
        }
        let summands = self
            .jordan_chains()
            .into_iter()
            .map(|c| Summand::new(c.degree / 2, c.length));
        Decomposition::new(self.prime, summands)
    }

    /// Cells with `degree/2 ≡ i (mod p-1)`.
    pub fn adams_summand(&self, i: i64) -> Result<Self> {
        if let Some(c) = self.cells.iter().find(|c| c.degree % 2 != 0) {
            return Err(Error::invalid(format!(
                "Adams summands need even degrees; {} has degree {}",
                c.label, c.degree
            )));
        }
        let pm1 = self.prime.pm1();
        let class = rep(i, pm1);
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&k| rep(self.cells[k].degree / 2, pm1) == class)
            .collect();
        Ok(self.restrict(&keep))
    }

    /// Sub-basis closed under the action.
    fn restrict(&self, keep: &[usize]) -> Self {
        let new_index: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let cells = keep.iter().map(|&k| self.cells[k].clone()).collect();
        let action = keep
            .iter()
            .map(|&k| self.action[k].iter().map(|&(j, c)| (new_index[&j], c)).collect())
            .collect();
        GradedComodule { prime: self.prime, cells, action }
    }

    pub fn direct_sum(&self, other: &GradedComodule) -> Result<Self> {
        self.same_prime(other)?;
        let offset = self.dim();
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        let mut action = self.action.clone();
        action.extend(
            other
                .action
                .iter()
                .map(|row| row.iter().map(|&(j, c)| (j + offset, c)).collect()),
        );
        Ok(GradedComodule { prime: self.prime, cells, action })
    }

    /// Tensor product with the Cartan rule `P¹(x⊗y) = P¹x⊗y + x⊗P¹y`.
    pub fn tensor(&self, other: &GradedComodule) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.modulus();
        let m = other.dim();
        let mut cells = Vec::with_capacity(self.dim() * m);
        let mut action = Vec::with_capacity(self.dim() * m);
        for (i, a) in self.cells.iter().enumerate() {
            for (j, b) in other.cells.iter().enumerate() {
                cells.push(Cell { label: format!("{}*{}", a.label, b.label), degree: a.degree + b.degree });
                let mut row: Sparse = BTreeMap::new();
                for &(k, c) in &self.action[i] {
                    *row.entry(k * m + j).or_insert(0) += c;
                }
                for &(l, c) in &other.action[j] {
                    *row.entry(i * m + l).or_insert(0) += c;
                }
                action.push(
                    row.into_iter()
                        .map(|(k, c)| (k, c % p))
                        .filter(|&(_, c)| c != 0)
                        .collect(),
                );
            }
        }
        Ok(GradedComodule { prime: self.prime, cells, action })
    }

    /// Linear dual: degrees negated, action transposed.
    pub fn dualize(&self) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|c| Cell { label: format!("D{}", c.label), degree: -c.degree })
            .collect();
        let mut action = vec![Vec::new(); self.dim()];
        for (i, row) in self.action.iter().enumerate() {
            for &(j, c) in row {
                action[j].push((i, c));
            }
        }
        GradedComodule { prime: self.prime, cells, action }
    }

    fn same_prime(&self, other: &GradedComodule) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(())
    }
}

fn unit_vectors(dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|k| {
            let mut v = vec![0; dim];
            v[k] = 1;
            v
        })
        .collect()
}

/// `∏_{l=0}^{j-1} (k + (p-1)l) mod p`, the coefficient of `(P¹)^j` on `x^k`.
pub fn p1_iterated_coeff(k: i64, j: i64, p: Prime) -> Result<u64> {
    if j < 0 {
        return Err(Error::invalid(format!("iterate count must be non-negative, got {j}")));
    }
    let q = p.get();
    let mut acc = 1i64;
    for l in 0..j {
        acc = acc * rep(k + p.pm1() * rep(l, q), q) % q;
    }
    Ok(acc as u64)
}

/// Mod-p cohomology of `CP^n_r` with `P¹(x_i) = i·x_{i+p-1}`.
pub fn stunted_cohomology(r: i64, n: i64, p: Prime) -> Result<GradedComodule> {
    if r < 0 || r > n {
        return Err(Error::invalid(format!("need 0 <= r <= n, got r={r}, n={n}")));
    }
    let q = p.get();
    let cells = (r..=n).map(|i| Cell { label: format!("x{i}"), degree: 2 * i }).collect();
    let action = (r..=n)
        .map(|i| {
            let coeff = rep(i, q);
            let target = i + p.pm1();
            if coeff != 0 && target <= n {
                vec![((target - r) as usize, coeff as u64)]
            } else {
                vec![]
            }
        })
        .collect();
    Ok(GradedComodule { prime: p, cells, action })
}

/// Checks that the chains of `m` form a basis of it.
pub fn chains_span(m: &GradedComodule, chains: &[Chain]) -> bool {
    let vectors = m.chain_vectors(chains);
    if vectors.len() != m.dim() {
        return false;
    }
    let mut e = Echelon::new(m.modulus(), m.dim());
    vectors.iter().all(|v| {
        let mut dense = vec![0; m.dim()];
        for (&k, &c) in v {
            dense[k] = c;
        }
        !is_zero(&dense) && e.insert(&dense)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn dec(q: i64, pairs: &[(i64, i64)]) -> Decomposition {
        Decomposition::new(p(q), pairs.iter().map(|&(s, l)| Summand::new(s, l))).unwrap()
    }

    #[test]
    fn iterated_coefficients() {
        assert_eq!(p1_iterated_coeff(9, 1, p(3)).unwrap(), 0);
        assert_eq!(p1_iterated_coeff(11, 1, p(3)).unwrap(), 2);
        assert_eq!(p1_iterated_coeff(123, 0, p(7)).unwrap(), 1);
        assert_eq!(p1_iterated_coeff(-4, 0, p(7)).unwrap(), 1);
        assert!(p1_iterated_coeff(1, -1, p(3)).is_err());
        // (P1)^{[k]_p + 1} x^k = 0 and lower powers are nonzero.
        for q in [3, 5, 7] {
            for k in 0..3 * q {
                let top = rep(k, q);
                for j in 1..=top {
                    assert_ne!(p1_iterated_coeff(k, j, p(q)).unwrap(), 0, "k={k} j={j} p={q}");
                }
                assert_eq!(p1_iterated_coeff(k, top + 1, p(q)).unwrap(), 0);
            }
        }
    }

    #[test]
    fn stunted_9_13_at_3() {
        let m = stunted_cohomology(9, 13, p(3)).unwrap();
        let degrees: Vec<i64> = m.cells().iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![18, 20, 22, 24, 26]);
        assert_eq!(m.action_of(0), &[] as &[(usize, u64)]);
        assert_eq!(m.action_of(1), &[(3, 1)]);
        assert_eq!(m.action_of(2), &[(4, 2)]);
        assert!(m.action_of(3).is_empty() && m.action_of(4).is_empty());
        assert_eq!(m.decompose().unwrap(), dec(3, &[(9, 1), (10, 2), (11, 2)]));
    }

    #[test]
    fn stunted_degenerate_cases() {
        for q in [2, 3, 5, 7] {
            let one = stunted_cohomology(4, 4, p(q)).unwrap();
            assert_eq!(one.dim(), 1);
            assert!(one.action_of(0).is_empty());
            let bottom = stunted_cohomology(0, q - 1, p(q)).unwrap();
            assert!((0..bottom.dim()).all(|k| bottom.action_of(k).is_empty()));
        }
        assert!(stunted_cohomology(5, 4, p(3)).is_err());
        assert!(stunted_cohomology(-1, 4, p(3)).is_err());
    }

    #[test]
    fn adams_summands_of_9_13() {
        let m = stunted_cohomology(9, 13, p(3)).unwrap();
        let odd = m.adams_summand(1).unwrap();
        let labels: Vec<&str> = odd.cells().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["x9", "x11", "x13"]);
        assert_eq!(odd.action_of(1), &[(2, 2)]);
        let even = m.adams_summand(0).unwrap();
        let labels: Vec<&str> = even.cells().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["x10", "x12"]);
        assert_eq!(even.action_of(0), &[(1, 1)]);
        assert_eq!(odd.dim() + even.dim(), m.dim());
    }

    #[test]
    fn adams_summand_rejects_odd_degrees() {
        let m = GradedComodule::new(p(3), vec![Cell { label: "y".into(), degree: 3 }], vec![vec![]]).unwrap();
        assert!(m.adams_summand(0).is_err());
        assert!(m.decompose().is_err());
    }

    #[test]
    fn decompose_trivial_cases() {
        assert!(GradedComodule::zero(p(5)).decompose().unwrap().is_empty());
        for q in [2, 3, 5, 7] {
            for l in 1..=q {
                let w = GradedComodule::chain(p(q), -3, l).unwrap();
                assert_eq!(w.decompose().unwrap(), dec(q, &[(-3, l)]));
            }
        }
    }

    #[test]
    fn w2_tensor_w2_at_3() {
        let w2 = GradedComodule::chain(p(3), 0, 2).unwrap();
        let t = w2.tensor(&w2).unwrap();
        let degs: Vec<i64> = t.cells().iter().map(|c| c.degree).collect();
        assert_eq!(degs, vec![0, 4, 4, 8]);
        assert_eq!(t.decompose().unwrap(), dec(3, &[(0, 3), (2, 1)]));
    }

    #[test]
    fn unit_and_dimension_of_tensor() {
        for q in [2, 3, 5] {
            let w1 = GradedComodule::chain(p(q), 0, 1).unwrap();
            for l in 1..=q {
                let w = GradedComodule::chain(p(q), 0, l).unwrap();
                assert_eq!(w1.tensor(&w).unwrap().decompose().unwrap(), dec(q, &[(0, l)]));
                for l2 in 1..=q {
                    let w2 = GradedComodule::chain(p(q), 1, l2).unwrap();
                    assert_eq!(w.tensor(&w2).unwrap().dim(), (l * l2) as usize);
                }
            }
        }
    }

    #[test]
    fn tensor_rejects_prime_mismatch() {
        let a = GradedComodule::chain(p(3), 0, 1).unwrap();
        let b = GradedComodule::chain(p(5), 0, 1).unwrap();
        assert_eq!(a.tensor(&b), Err(Error::PrimeMismatch(3, 5)));
    }

    #[test]
    fn duals() {
        for q in [2, 3, 5, 7] {
            for l in 1..=q {
                let w = GradedComodule::chain(p(q), 4, l).unwrap();
                let expected = dec(q, &[(-4 - (l - 1) * (q - 1), l)]);
                assert_eq!(w.dualize().decompose().unwrap(), expected);
            }
        }
        let m = stunted_cohomology(9, 13, p(3)).unwrap();
        assert_eq!(m.dualize().decompose().unwrap(), dec(3, &[(-9, 1), (-12, 2), (-13, 2)]));
        assert_eq!(m.dualize().dualize().decompose().unwrap(), m.decompose().unwrap());
    }

    #[test]
    fn constructor_validates() {
        let cells = vec![
            Cell { label: "a".into(), degree: 0 },
            Cell { label: "b".into(), degree: 4 },
        ];
        assert!(GradedComodule::new(p(3), cells.clone(), vec![vec![(1, 2)], vec![]]).is_ok());
        // wrong degree jump
        assert!(GradedComodule::new(p(5), cells.clone(), vec![vec![(1, 1)], vec![]]).is_err());
        // zero coefficient
        assert!(GradedComodule::new(p(3), cells.clone(), vec![vec![(1, 0)], vec![]]).is_err());
        // coefficient not reduced
        assert!(GradedComodule::new(p(3), cells, vec![vec![(1, 3)], vec![]]).is_err());
        // (P1)^p != 0: a chain of length 3 at p = 2
        let long: Vec<Cell> = (0..3).map(|k| Cell { label: format!("c{k}"), degree: 2 * k }).collect();
        assert!(GradedComodule::new(p(2), long, vec![vec![(1, 1)], vec![(2, 1)], vec![]]).is_err());
    }

    #[test]
    fn jordan_chains_form_a_basis() {
        for q in [2, 3, 5] {
            for r in 0..2 * q {
                for n in r..r + 3 * q {
                    let m = stunted_cohomology(r, n, p(q)).unwrap();
                    let chains = m.jordan_chains();
                    assert!(chains_span(&m, &chains));
                }
            }
        }
        let a = GradedComodule::chain(p(5), 0, 3).unwrap();
        let b = GradedComodule::chain(p(5), 2, 4).unwrap();
        let t = a.tensor(&b).unwrap().tensor(&a.dualize()).unwrap();
        assert!(chains_span(&t, &t.jordan_chains()));
    }

    #[test]
    fn rank_profile_survives_reassembly() {
        let a = GradedComodule::chain(p(5), 0, 3).unwrap();
        let b = stunted_cohomology(3, 14, p(5)).unwrap();
        let t = a.tensor(&b).unwrap();
        let d = t.decompose().unwrap();
        let back = d.to_comodule();
        assert_eq!(back.degree_dims(), t.degree_dims());
        assert_eq!(back.rank_profile(), t.rank_profile());
    }

    #[test]
    fn multiset_difference_works() {
        let s = |a, b| Summand::new(a, b);
        let whole = [s(0, 1), s(0, 1), s(2, 3)];
        assert_eq!(multiset_difference(&whole, &[s(0, 1)]), Some(vec![s(0, 1), s(2, 3)]));
        assert_eq!(multiset_difference(&whole, &[s(1, 1)]), None);
        assert_eq!(multiset_difference(&whole, &[s(2, 3), s(2, 3)]), None);
    }
}
