//! Dense linear algebra over F_p, sized for the small graded pieces that
//! appear in stunted projective spaces and their tensor products.

pub(crate) type Vector = Vec<u64>;

pub(crate) fn inverse(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// `target += scale * v` in F_p.
fn axpy(target: &mut [u64], scale: u64, v: &[u64], p: u64) {
    if scale == 0 {
        return;
    }
    for (t, &x) in target.iter_mut().zip(v) {
        *t = (*t + scale * x) % p;
    }
}

/// Row space kept in echelon form; each stored row has a leading 1 and
/// zeros in the pivot columns of every earlier row.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    p: u64,
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new(p: u64, dim: usize) -> Self {
        Echelon { p, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                axpy(v, self.p - c, row, self.p);
            }
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = inverse(w[pivot], self.p);
                for x in &mut w {
                    *x = *x * inv % self.p;
                }
                self.rows.push((pivot, w));
                true
            }
        }
    }
}

/// A linear map F_p^m -> F_p^k stored as the images of the m basis vectors.
#[derive(Debug, Clone)]
pub(crate) struct LinearMap {
    pub p: u64,
    pub target_dim: usize,
    pub columns: Vec<Vector>,
}

impl LinearMap {
    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, v: &[u64]) -> Vector {
        let mut out = vec![0; self.target_dim];
        for (&c, col) in v.iter().zip(&self.columns) {
            axpy(&mut out, c, col, self.p);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.p, self.target_dim);
        for c in &self.columns {
            e.insert(c);
        }
        e.rank()
    }

    /// A basis of the kernel, as vectors in the source.
    pub fn kernel(&self) -> Vec<Vector> {
        let m = self.source_dim();
        let k = self.target_dim;
        // Eliminate on [image | combination]; rows whose image part dies
        // carry kernel vectors in their combination part.
        let mut pivots: Vec<(usize, Vector)> = Vec::new();
        let mut kernel = Vec::new();
        for (i, col) in self.columns.iter().enumerate() {
            let mut row = vec![0; k + m];
            row[..k].copy_from_slice(col);
            row[k + i] = 1;
            for (pivot, prow) in &pivots {
                let c = row[*pivot];
                if c != 0 {
                    axpy(&mut row, self.p - c, prow, self.p);
                }
            }
            match row[..k].iter().position(|&x| x != 0) {
                None => kernel.push(row[k..].to_vec()),
                Some(pivot) => {
                    let inv = inverse(row[pivot], self.p);
                    for x in &mut row {
                        *x = *x * inv % self.p;
                    }
                    pivots.push((pivot, row));
                }
            }
        }
        kernel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(a * inverse(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new(3, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 0, 1])); // sum of the first two
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn kernel_and_rank_nullity() {
        // Nilpotent shift on F_5^4.
        let p = 5;
        let cols = vec![vec![0, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 0, 3], vec![0, 0, 0, 0]];
        let n = LinearMap { p, target_dim: 4, columns: cols };
        assert_eq!(n.rank(), 3);
        let ker = n.kernel();
        assert_eq!(ker.len(), 1);
        assert!(is_zero(&n.apply(&ker[0])));
    }
}
