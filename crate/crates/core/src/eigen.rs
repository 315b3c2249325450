//! Lowest eigenpairs of a dense real symmetric matrix.
//!
//! Householder reduction to tridiagonal form, Sturm-sequence bisection for
//! the wanted eigenvalues, inverse iteration on the tridiagonal matrix, and
//! back-transformation through the stored reflectors. Only `k` eigenvectors
//! are ever formed, so the cost is one `O(n³)` reduction plus `O(n²k)`.

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymmetricMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
    /// Unit Householder vectors; reflector `k` acts on indices `k+1..n`.
    reflectors: Vec<Vec<f64>>,
}

/// `A = Q T Qᵀ` with `Q = H₀ H₁ ⋯`, each `H = I − 2vvᵀ`.
pub fn tridiagonalize(matrix: &SymmetricMatrix) -> Tridiagonal {
    let n = matrix.n;
    let mut a = matrix.data.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        diag[k] = a[k * n + k];
        if norm == 0.0 {
            off[k] = 0.0;
            reflectors.push(vec![0.0; m]);
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            off[k] = v[0] + alpha;
            reflectors.push(vec![0.0; m]);
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        off[k] = alpha;

        // trailing block B ← (I − 2vvᵀ) B (I − 2vvᵀ) = B − 2vwᵀ − 2wvᵀ,
        // with p = Bv and w = p − (vᵀp)v.
        let base = k + 1;
        let p: Vec<f64> = (0..m)
            .map(|i| {
                let row = &a[(base + i) * n + base..(base + i) * n + n];
                dot(row, &v)
            })
            .collect();
        let kappa = dot(&v, &p);
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
        for i in 0..m {
            let (vi, wi) = (2.0 * v[i], 2.0 * w[i]);
            let row = &mut a[(base + i) * n + base..(base + i) * n + n];
            for ((x, vj), wj) in row.iter_mut().zip(&v).zip(&w) {
                *x -= vi * wj + wi * vj;
            }
        }
        reflectors.push(v);
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        diag[n - 1] = a[(n - 1) * n + n - 1];
    }
    Tridiagonal { diag, off, reflectors }
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs())).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for an (accurate) eigenvalue by inverse iteration,
    /// orthogonalised against `previous`.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.dim();
        let scale = self.gershgorin().1.abs().max(self.gershgorin().0.abs()).max(1.0);
        let lu = PivotedLu::factor(&self.diag, &self.off, lambda, f64::EPSILON * scale);

        // deterministic, non-symmetric start vector
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0).collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            for v in previous {
                let c = dot(v, &x);
                x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= c * vi);
            }
            let norm = dot(&x, &x).sqrt();
            x.iter_mut().for_each(|xi| *xi /= norm);
        }
        x
    }

    /// Maps a tridiagonal eigenvector back to the original basis.
    pub fn back_transform(&self, mut z: Vec<f64>) -> Vec<f64> {
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            let tail = &mut z[k + 1..];
            let c = 2.0 * dot(v, tail);
            tail.iter_mut().zip(v).for_each(|(t, vi)| *t -= c * vi);
        }
        z
    }
}

/// LU with partial pivoting of `T − λI` for tridiagonal `T`.
struct PivotedLu {
    // U has up to two superdiagonals after pivoting
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl PivotedLu {
    fn factor(diag: &[f64], off: &[f64], lambda: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut u0: Vec<f64> = diag.iter().map(|d| d - lambda).collect();
        let mut u1: Vec<f64> = off.to_vec();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut swapped = vec![false; n];
        // sub-diagonal entries, consumed during elimination
        let sub: Vec<f64> = off.to_vec();

        for k in 0..n.saturating_sub(1) {
            let below = sub[k];
            if below.abs() > u0[k].abs() {
                // swap row k with row k+1
                swapped[k] = true;
                let (a0, a1, a2) = (u0[k], u1[k], u2[k]);
                u0[k] = below;
                u1[k] = u0[k + 1];
                u2[k] = u1[k + 1];
                let m = a0 / below;
                l[k] = m;
                u0[k + 1] = a1 - m * u1[k];
                u1[k + 1] = a2 - m * u2[k];
            } else {
                let piv = if u0[k] == 0.0 { tiny } else { u0[k] };
                u0[k] = piv;
                let m = below / piv;
                l[k] = m;
                u0[k + 1] -= m * u1[k];
                u1[k + 1] -= m * u2[k];
            }
        }
        if n > 0 && u0[n - 1] == 0.0 {
            u0[n - 1] = tiny;
        }
        for p in u0.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        PivotedLu { u0, u1, u2, l, swapped }
    }

    fn solve(&self, x: &mut [f64]) {
        let n = x.len();
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                x.swap(k, k + 1);
            }
            x[k + 1] -= self.l[k] * x[k];
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            if k + 1 < n {
                s -= self.u1[k] * x[k + 1];
            }
            if k + 2 < n {
                s -= self.u2[k] * x[k + 2];
            }
            x[k] = s / self.u0[k];
        }
    }
}

/// Eigenpair with its Euclidean residual `‖Av − λv‖` (`v` unit).
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// The `k` smallest eigenpairs of `matrix`, ascending.
pub fn lowest_eigenpairs(matrix: &SymmetricMatrix, k: usize) -> Vec<EigenPair> {
    let tri = tridiagonalize(matrix);
    let mut tri_vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(k);
    for index in 0..k.min(matrix.dim()) {
        let value = tri.eigenvalue(index);
        let z = tri.eigenvector(value, &tri_vectors);
        tri_vectors.push(z.clone());
        let vector = tri.back_transform(z);
        let av = matrix.mul_vec(&vector);
        let residual = av
            .iter()
            .zip(&vector)
            .map(|(a, v)| (a - value * v).powi(2))
            .sum::<f64>()
            .sqrt();
        pairs.push(EigenPair { value, vector, residual });
    }
    pairs
}
