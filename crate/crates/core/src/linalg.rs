//! Dense complex linear algebra used throughout: rank-revealing nullspaces,
//! orthonormal bases with a fixed phase convention, pseudo-inverses and
//! seeded complex Gaussian sampling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold for invertibility, nonzero scalars and inclusion checks.
    pub rel: f64,
    /// Singular values below `sigma_max * max(rows, cols) * nullspace_factor` count as zero.
    pub nullspace_factor: f64,
    /// Smallest relative eigenvalue gap at which a spectral split is attempted.
    pub cluster_gap: f64,
    /// Bound for verification residuals.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-9,
            nullspace_factor: 2f64.powi(-40),
            cluster_gap: 1e-6,
            residual: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_rel(rel: f64) -> Self {
        Tolerances {
            rel,
            ..Self::default()
        }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Real matrix from rows.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, c, |i, j| real(rows[i][j]))
}

pub fn diag(values: &[C64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular value decomposition `m = U diag(s) V^H` with descending `s`.
/// `thin` keeps `min(rows, cols)` columns in `U` and `V`; otherwise both are square.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

fn faer_view(m: &CMat) -> faer::MatRef<'_, C64> {
    faer::MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols())
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Computes the SVD. Panics only if the iteration fails to converge, which requires
/// non-finite input.
pub fn svd(m: &CMat, thin: bool) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        let (ur, vr) = if thin { (0, 0) } else { (rows, cols) };
        return Svd {
            u: eye(rows).columns(0, ur).into_owned(),
            s: Vec::new(),
            v: eye(cols).columns(0, vr).into_owned(),
        };
    }
    let f = faer_view(m);
    let d = if thin { f.thin_svd() } else { f.svd() }.expect("SVD did not converge");
    let sd = d.S().column_vector();
    Svd {
        u: from_faer(d.U()),
        s: (0..rows.min(cols)).map(|k| sd[k].re).collect(),
        v: from_faer(d.V()),
    }
}

/// Singular values in descending order; empty for an empty matrix.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    faer_view(m).singular_values().expect("SVD did not converge")
}

fn threshold(sv: &[f64], rows: usize, cols: usize, factor: f64) -> f64 {
    let smax = sv.first().copied().unwrap_or(0.0);
    smax * rows.max(cols) as f64 * factor
}

/// Numerical rank with the SVD threshold `sigma_max * max(rows, cols) * factor`.
pub fn rank(m: &CMat, factor: f64) -> usize {
    let sv = singular_values(m);
    let t = threshold(&sv, m.nrows(), m.ncols(), factor);
    sv.iter().filter(|&&s| s > t && s > 0.0).count()
}

/// Multiply each column by a unit scalar so its largest-magnitude entry is real positive.
/// Ties are broken towards the lowest index.
pub fn normalize_phases(m: &mut CMat) {
    for j in 0..m.ncols() {
        let mut best = 0usize;
        let mut best_abs = -1.0f64;
        for i in 0..m.nrows() {
            let a = m[(i, j)].norm();
            if a > best_abs * (1.0 + 1e-9) {
                best = i;
                best_abs = a;
            }
        }
        if best_abs > 0.0 {
            let ph = m[(best, j)].conj() / best_abs;
            for i in 0..m.nrows() {
                m[(i, j)] *= ph;
            }
        }
    }
}

/// Orthonormal basis of the nullspace as columns, phase-normalised.
pub fn nullspace(m: &CMat, factor: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return zeros(0, 0);
    }
    if rows == 0 {
        return eye(cols);
    }
    let d = svd(m, false);
    let t = threshold(&d.s, rows, cols, factor);
    let r = d.s.iter().filter(|&&s| s > t && s > 0.0).count();
    let mut out = d.v.columns(r, cols - r).into_owned();
    normalize_phases(&mut out);
    out
}

/// Orthonormal basis of the column space (SVD based, rank revealing).
pub fn range_basis(m: &CMat, factor: f64) -> CMat {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return zeros(rows, 0);
    }
    let d = svd(m, true);
    let t = threshold(&d.s, rows, cols, factor);
    let r = d.s.iter().filter(|&&s| s > t && s > 0.0).count();
    let mut out = d.u.columns(0, r).into_owned();
    normalize_phases(&mut out);
    out
}

/// Orthonormal basis of the column space. Uses Householder QR without pivoting when the
/// columns are numerically independent (R normalised to a positive real diagonal), and falls
/// back to an SVD range basis otherwise.
pub fn orth_columns(m: &CMat, tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 || rows == 0 {
        return zeros(rows, 0);
    }
    if cols <= rows {
        let qr = m.clone().qr();
        let r = qr.r();
        let dmax = (0..cols).map(|j| r[(j, j)].norm()).fold(0.0, f64::max);
        let cmax = (0..cols).map(|j| m.column(j).norm()).fold(0.0, f64::max);
        if dmax > 0.0 && (0..cols).all(|j| r[(j, j)].norm() > tol * cmax) {
            let mut q = qr.q();
            for j in 0..cols {
                let d = r[(j, j)];
                let ph = d / d.norm();
                for i in 0..rows {
                    q[(i, j)] *= ph;
                }
            }
            return q;
        }
    }
    range_basis(m, Tolerances::default().nullspace_factor)
}

/// Orthonormal basis of the orthogonal complement of the column space.
pub fn complement_basis(m: &CMat, factor: f64) -> CMat {
    nullspace(&m.adjoint(), factor)
}

/// Moore-Penrose pseudo-inverse via SVD with the standard threshold.
pub fn pinv(m: &CMat, factor: f64) -> CMat {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return zeros(cols, rows);
    }
    let d = svd(m, true);
    let t = threshold(&d.s, rows, cols, factor);
    let r = d.s.iter().filter(|&&s| s > t && s > 0.0).count();
    let mut vs = d.v.columns(0, r).into_owned();
    for (k, s) in d.s.iter().take(r).enumerate() {
        vs.column_mut(k).scale_mut(1.0 / s);
    }
    vs * d.u.columns(0, r).adjoint()
}

/// `sigma_min / sigma_max` of a matrix (1 for an empty matrix, 0 for a zero matrix).
pub fn condition_ratio(m: &CMat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (None, _) | (_, None) => 1.0,
        (Some(&a), Some(&b)) => {
            if a == 0.0 {
                0.0
            } else {
                b / a
            }
        }
    }
}

/// Square invertibility test `sigma_min > tol * sigma_max`. The 0x0 matrix is invertible.
pub fn is_invertible(m: &CMat, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    if m.nrows() == 0 {
        return true;
    }
    let sv = singular_values(m);
    let smax = sv[0];
    let smin = *sv.last().unwrap_or(&0.0);
    smax > 0.0 && smin > tol * smax
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Block diagonal matrix from a list of blocks.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(r, c);
    let (mut i, mut j) = (0, 0);
    for b in blocks {
        out.view_mut((i, j), b.shape()).copy_from(b);
        i += b.nrows();
        j += b.ncols();
    }
    out
}

/// Stack matrices with equal column count vertically.
pub fn vstack(blocks: &[CMat], cols: usize) -> CMat {
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(r, cols);
    let mut i = 0;
    for b in blocks {
        out.view_mut((i, 0), b.shape()).copy_from(b);
        i += b.nrows();
    }
    out
}

/// Stack matrices with equal row count horizontally.
pub fn hstack(blocks: &[CMat], rows: usize) -> CMat {
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, c);
    let mut j = 0;
    for b in blocks {
        out.view_mut((0, j), b.shape()).copy_from(b);
        j += b.ncols();
    }
    out
}

/// Standard complex Gaussian with unit variance split evenly between both parts.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| gaussian(rng))
}

/// Row-major flattening.
pub fn flatten_into(m: &CMat, out: &mut Vec<C64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
}

/// Inverse of [`flatten_into`].
pub fn unflatten(data: &[C64], r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |i, j| data[i * c + j])
}

/// Unit vector in a fixed dimension.
pub fn basis_vector(n: usize, k: usize) -> CMat {
    let mut v = zeros(n, 1);
    v[(k, 0)] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_of_wide_matrix_is_complete() {
        let m = from_real_rows(&[&[1.0, 1.0, 0.0, 0.0]]);
        let n = nullspace(&m, 2f64.powi(-40));
        assert_eq!(n.shape(), (4, 3));
        assert!(frob(&(&m * &n)) < 1e-14);
        assert!(frob(&(n.adjoint() * &n - eye(3))) < 1e-13);
    }

    #[test]
    fn nullspace_phase_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = gaussian_matrix(&mut rng, 3, 6);
        let n = nullspace(&m, 2f64.powi(-40));
        for j in 0..n.ncols() {
            let (mut bi, mut ba) = (0, 0.0);
            for i in 0..n.nrows() {
                if n[(i, j)].norm() > ba + 1e-12 {
                    bi = i;
                    ba = n[(i, j)].norm();
                }
            }
            assert!(n[(bi, j)].im.abs() < 1e-14 && n[(bi, j)].re > 0.0);
        }
    }

    #[test]
    fn orth_columns_rank_deficient_falls_back() {
        let m = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0], &[0.0, 1.0]]);
        let q = orth_columns(&m, 1e-9);
        assert_eq!(q.ncols(), 1);
        let p = &q * q.adjoint();
        assert!(frob(&(&p * &m - &m)) < 1e-13);
    }

    #[test]
    fn pinv_of_injective_is_left_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = gaussian_matrix(&mut rng, 6, 3);
        let p = pinv(&m, 2f64.powi(-40));
        assert!(frob(&(&p * &m - eye(3))) < 1e-12);
    }

    #[test]
    fn invertibility_threshold() {
        assert!(is_invertible(&eye(3), 1e-9));
        assert!(!is_invertible(&diag(&[ONE, real(1e-12)]), 1e-9));
        assert!(is_invertible(&zeros(0, 0), 1e-9));
    }

    #[test]
    fn svd_recomposes_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(r, c) in &[(5usize, 3usize), (3, 5), (8, 8), (20, 20)] {
            for k in 0..40 {
                let m = if k % 2 == 0 {
                    gaussian_matrix(&mut rng, r, 1) * gaussian_matrix(&mut rng, 1, c)
                } else {
                    gaussian_matrix(&mut rng, r, c)
                };
                for thin in [true, false] {
                    let d = svd(&m, thin);
                    let p = r.min(c);
                    let s = diag(&d.s.iter().map(|&x| real(x)).collect::<Vec<_>>());
                    let rec = d.u.columns(0, p) * s * d.v.columns(0, p).adjoint();
                    assert!(frob(&(rec - &m)) <= 1e-12 * frob(&m));
                    assert!(frob(&(d.u.adjoint() * &d.u - eye(d.u.ncols()))) < 1e-12);
                    assert!(frob(&(d.v.adjoint() * &d.v - eye(d.v.ncols()))) < 1e-12);
                }
                let ns = nullspace(&m, 2f64.powi(-40));
                let expect = c - if k % 2 == 0 { 1 } else { r.min(c) };
                assert_eq!(ns.ncols(), expect);
                assert!(frob(&(&m * &ns)) < 1e-10 * frob(&m));
            }
        }
    }
}
