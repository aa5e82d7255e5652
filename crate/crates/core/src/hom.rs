//! Intertwiner spaces, endomorphism algebras, and the transitivity, indecomposability
//! and isomorphism decisions built on them.
//!
//! Unknowns are the entries of `(T_v)`, vertices in quiver order, each matrix row-major.
//! Large systems are first reduced by exact elimination along well-conditioned injective
//! or surjective arrow maps; see [`Strategy`].

use std::f64::consts::PI;

use nalgebra::Schur;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, frob, CMat, Tolerances, C64, ZERO};
use crate::rep::{hom_residual, Hom, Rep};

/// How the linear system for Hom is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Reduce when the number of unknowns exceeds [`REDUCE_ABOVE`].
    Auto,
    /// Nullspace of the full stacked constraint matrix.
    Direct,
    /// Eliminate vertex blocks along invertible-on-one-side arrow maps first.
    Reduced,
}

pub const REDUCE_ABOVE: usize = 400;

/// Orthonormal basis of `Hom(source, target)`.
#[derive(Debug, Clone)]
pub struct HomBasis {
    pub source: Rep,
    pub target: Rep,
    pub basis: Vec<Hom>,
    pub dim: usize,
    pub tol_used: f64,
    /// Largest intertwining residual over the basis.
    pub max_residual: f64,
    /// Number of unknowns actually passed to the SVD.
    pub solved_unknowns: usize,
}

impl HomBasis {
    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[C64]) -> Hom {
        let mut mats: Vec<CMat> = self
            .source
            .dims()
            .iter()
            .zip(self.target.dims())
            .map(|(&s, &t)| CMat::zeros(t, s))
            .collect();
        for (b, &w) in self.basis.iter().zip(coeffs) {
            for (m, bm) in mats.iter_mut().zip(&b.mats) {
                *m += bm * w;
            }
        }
        Hom::new(mats)
    }

    /// Orthogonal projection of a Hom-shaped tuple onto the span of the basis.
    pub fn project(&self, h: &Hom) -> Hom {
        let coeffs: Vec<C64> = self.basis.iter().map(|b| b.inner(h)).collect();
        self.combine(&coeffs)
    }

    /// Coefficients of `h` in the basis.
    pub fn coordinates(&self, h: &Hom) -> Vec<C64> {
        self.basis.iter().map(|b| b.inner(h)).collect()
    }
}

fn offsets(src: &Rep, dst: &Rep) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(src.dims().len());
    let mut n = 0;
    for (&s, &t) in src.dims().iter().zip(dst.dims()) {
        off.push(n);
        n += s * t;
    }
    (off, n)
}

/// The explicit stacked constraint matrix: for each arrow `a: s -> r`, the rows of
/// `T_r f_a - g_a T_s` (row-major), columns indexed by the flattened `(T_v)`.
pub fn constraint_matrix(src: &Rep, dst: &Rep) -> Result<CMat> {
    if src.quiver() != dst.quiver() {
        return Err(Error::QuiverMismatch);
    }
    let (off, n) = offsets(src, dst);
    let hd = src.dims();
    let kd = dst.dims();
    let rows: usize = src
        .quiver()
        .arrows()
        .iter()
        .map(|a| kd[a.dst] * hd[a.src])
        .sum();
    let mut m = CMat::zeros(rows, n);
    let mut row0 = 0;
    for (ai, a) in src.quiver().arrows().iter().enumerate() {
        let f = &src.mats()[ai];
        let g = &dst.mats()[ai];
        let (s, r) = (a.src, a.dst);
        for i in 0..kd[r] {
            for j in 0..hd[s] {
                let row = row0 + i * hd[s] + j;
                for k in 0..hd[r] {
                    m[(row, off[r] + i * hd[r] + k)] += f[(k, j)];
                }
                for k in 0..kd[s] {
                    m[(row, off[s] + k * hd[s] + j)] -= g[(i, k)];
                }
            }
        }
        row0 += kd[r] * hd[s];
    }
    Ok(m)
}

fn unflatten_hom(col: &[C64], src: &Rep, dst: &Rep) -> Hom {
    let mut mats = Vec::with_capacity(src.dims().len());
    let mut p = 0;
    for (&s, &t) in src.dims().iter().zip(dst.dims()) {
        mats.push(linalg::unflatten(&col[p..p + s * t], t, s));
        p += s * t;
    }
    Hom::new(mats)
}

pub fn hom_basis(src: &Rep, dst: &Rep) -> Result<HomBasis> {
    hom_basis_with(src, dst, &Tolerances::default(), Strategy::Auto)
}

pub fn end_basis(r: &Rep) -> Result<HomBasis> {
    hom_basis(r, r)
}

pub fn end_basis_with(r: &Rep, tol: &Tolerances) -> Result<HomBasis> {
    hom_basis_with(r, r, tol, Strategy::Auto)
}

pub fn hom_basis_with(src: &Rep, dst: &Rep, tol: &Tolerances, strategy: Strategy) -> Result<HomBasis> {
    if src.quiver() != dst.quiver() {
        return Err(Error::QuiverMismatch);
    }
    let (_, n) = offsets(src, dst);
    let use_reduced = match strategy {
        Strategy::Direct => false,
        Strategy::Reduced => true,
        Strategy::Auto => n > REDUCE_ABOVE,
    };
    if use_reduced {
        if let Some(b) = reduced_basis(src, dst, tol)? {
            if b.max_residual <= tol.residual || strategy == Strategy::Reduced {
                return Ok(b);
            }
        }
    }
    direct_basis(src, dst, tol)
}

fn finish(src: &Rep, dst: &Rep, cols: &CMat, tol: &Tolerances, solved: usize) -> HomBasis {
    let mut basis = Vec::with_capacity(cols.ncols());
    let mut worst = 0.0f64;
    for j in 0..cols.ncols() {
        let col: Vec<C64> = cols.column(j).iter().copied().collect();
        let mut h = unflatten_hom(&col, src, dst);
        h.residual = hom_residual(&h, src, dst);
        worst = worst.max(h.residual);
        basis.push(h);
    }
    HomBasis {
        source: src.clone(),
        target: dst.clone(),
        dim: basis.len(),
        basis,
        tol_used: tol.nullspace_factor,
        max_residual: worst,
        solved_unknowns: solved,
    }
}

fn direct_basis(src: &Rep, dst: &Rep, tol: &Tolerances) -> Result<HomBasis> {
    let m = constraint_matrix(src, dst)?;
    let n = m.ncols();
    let ns = if n == 0 {
        CMat::zeros(0, 0)
    } else {
        linalg::nullspace(&m, tol.nullspace_factor)
    };
    Ok(finish(src, dst, &ns, tol, n))
}

#[derive(Clone)]
enum Elim {
    Free,
    /// `T_v = pinv(g) T_parent f` through an arrow whose target-side map is injective.
    Injective { parent: usize, arrow: usize, gp: CMat },
    /// `T_v = g T_parent pinv(f)` through an arrow whose source-side map is surjective.
    Surjective { parent: usize, arrow: usize, fp: CMat },
}

const ELIM_COND: f64 = 1e-6;

fn reduced_basis(src: &Rep, dst: &Rep, tol: &Tolerances) -> Result<Option<HomBasis>> {
    let q = src.quiver();
    let nv = q.n_vertices();
    let hd = src.dims();
    let kd = dst.dims();
    let block = |v: usize| kd[v] * hd[v];
    let mut elim: Vec<Elim> = vec![Elim::Free; nv];
    let mut cond = vec![1.0f64; nv];
    let mut parent: Vec<Option<usize>> = vec![None; nv];
    let reaches = |parent: &Vec<Option<usize>>, mut from: usize, target: usize| -> bool {
        loop {
            if from == target {
                return true;
            }
            match parent[from] {
                Some(p) => from = p,
                None => return false,
            }
        }
    };
    // Injective eliminations: T_s from T_r.
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, r) = (a.src, a.dst);
        if s == r || parent[s].is_some() || block(s) == 0 || reaches(&parent, r, s) {
            continue;
        }
        let g = &dst.mats()[ai];
        if g.ncols() > g.nrows() {
            continue;
        }
        let ratio = linalg::condition_ratio(g);
        if ratio * cond[r] < ELIM_COND {
            continue;
        }
        let gp = linalg::pinv(g, tol.nullspace_factor);
        parent[s] = Some(r);
        cond[s] = ratio * cond[r];
        elim[s] = Elim::Injective {
            parent: r,
            arrow: ai,
            gp,
        };
    }
    // Surjective eliminations: T_r from T_s.
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, r) = (a.src, a.dst);
        if s == r || parent[r].is_some() || block(r) == 0 || reaches(&parent, s, r) {
            continue;
        }
        let f = &src.mats()[ai];
        if f.nrows() > f.ncols() {
            continue;
        }
        let ratio = linalg::condition_ratio(f);
        if ratio * cond[s] < ELIM_COND {
            continue;
        }
        let fp = linalg::pinv(f, tol.nullspace_factor);
        parent[r] = Some(s);
        cond[r] = ratio * cond[s];
        elim[r] = Elim::Surjective {
            parent: s,
            arrow: ai,
            fp,
        };
    }
    if elim.iter().all(|e| matches!(e, Elim::Free)) {
        return Ok(None);
    }
    // Evaluation order: parents before children.
    let mut order = Vec::with_capacity(nv);
    let mut placed = vec![false; nv];
    while order.len() < nv {
        for v in 0..nv {
            if placed[v] {
                continue;
            }
            let ready = match parent[v] {
                None => true,
                Some(p) => placed[p],
            };
            if ready {
                placed[v] = true;
                order.push(v);
            }
        }
    }
    let mut free_off = vec![usize::MAX; nv];
    let mut n_free = 0;
    for v in 0..nv {
        if matches!(elim[v], Elim::Free) {
            free_off[v] = n_free;
            n_free += block(v);
        }
    }
    let (full_off, n_full) = offsets(src, dst);

    // Per-arrow projectors that make the residual constraint of an elimination arrow exact.
    enum RowKind {
        Full,
        Left(CMat),
        Right(CMat),
    }
    let mut rows_kind = Vec::with_capacity(q.arrows().len());
    for (ai, _) in q.arrows().iter().enumerate() {
        let kind = (0..nv)
            .find_map(|v| match &elim[v] {
                Elim::Injective { arrow, .. } if *arrow == ai => Some(RowKind::Left(
                    linalg::complement_basis(&dst.mats()[ai], tol.nullspace_factor).adjoint(),
                )),
                Elim::Surjective { arrow, .. } if *arrow == ai => Some(RowKind::Right(
                    linalg::nullspace(&src.mats()[ai], tol.nullspace_factor),
                )),
                _ => None,
            })
            .unwrap_or(RowKind::Full);
        rows_kind.push(kind);
    }
    let rows_of = |ai: usize, k: &RowKind| -> usize {
        let a = &q.arrows()[ai];
        match k {
            RowKind::Full => kd[a.dst] * hd[a.src],
            RowKind::Left(p) => p.nrows() * hd[a.src],
            RowKind::Right(w) => kd[a.dst] * w.ncols(),
        }
    };
    let n_rows: usize = rows_kind.iter().enumerate().map(|(i, k)| rows_of(i, k)).sum();

    let mut lift = CMat::zeros(n_full, n_free);
    let mut red = CMat::zeros(n_rows, n_free);
    let mut t: Vec<CMat> = (0..nv).map(|v| CMat::zeros(kd[v], hd[v])).collect();
    for j in 0..n_free {
        for &v in &order {
            t[v] = match &elim[v] {
                Elim::Free => {
                    let mut m = CMat::zeros(kd[v], hd[v]);
                    let b = block(v);
                    if j >= free_off[v] && j < free_off[v] + b {
                        let k = j - free_off[v];
                        m[(k / hd[v], k % hd[v])] = linalg::ONE;
                    }
                    m
                }
                Elim::Injective { parent, arrow, gp } => gp * &t[*parent] * &src.mats()[*arrow],
                Elim::Surjective { parent, arrow, fp } => &dst.mats()[*arrow] * &t[*parent] * fp,
            };
        }
        let mut p = 0;
        for v in 0..nv {
            for i in 0..kd[v] {
                for k in 0..hd[v] {
                    lift[(full_off[v] + i * hd[v] + k, j)] = t[v][(i, k)];
                }
            }
            p += block(v);
        }
        debug_assert_eq!(p, n_full);
        let mut row = 0;
        for (ai, a) in q.arrows().iter().enumerate() {
            let resid = &t[a.dst] * &src.mats()[ai] - &dst.mats()[ai] * &t[a.src];
            let projected = match &rows_kind[ai] {
                RowKind::Full => resid,
                RowKind::Left(p) => p * resid,
                RowKind::Right(w) => resid * w,
            };
            for x in 0..projected.nrows() {
                for y in 0..projected.ncols() {
                    red[(row, j)] = projected[(x, y)];
                    row += 1;
                }
            }
        }
    }
    let ns = if n_free == 0 {
        CMat::zeros(0, 0)
    } else {
        linalg::nullspace(&red, tol.nullspace_factor)
    };
    let lifted = &lift * &ns;
    let mut q_cols = if lifted.ncols() == 0 {
        CMat::zeros(n_full, 0)
    } else {
        linalg::orth_columns(&lifted, 1e-12)
    };
    if q_cols.ncols() != ns.ncols() {
        return Ok(None);
    }
    linalg::normalize_phases(&mut q_cols);
    Ok(Some(finish(src, dst, &q_cols, tol, n_free)))
}

/// `(End = C I, dim End)`; errors on the zero representation.
pub fn is_transitive(r: &Rep) -> Result<(bool, usize)> {
    is_transitive_with(r, &Tolerances::default())
}

pub fn is_transitive_with(r: &Rep, tol: &Tolerances) -> Result<(bool, usize)> {
    if r.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let b = end_basis_with(r, tol)?;
    Ok((b.dim == 1, b.dim))
}

/// Outcome of a Monte-Carlo idempotent search.
#[derive(Debug, Clone)]
pub struct IdempotentSearch {
    pub witness: Option<Hom>,
    pub trials_used: usize,
    /// Largest relative eigenvalue gap seen among candidate splits (0 if none).
    pub best_gap: f64,
    /// Candidate splits rejected because the projection did not verify.
    pub rejected_splits: usize,
}

pub const DEFAULT_TRIALS: usize = 8;
const MAX_CANDIDATES: usize = 4;

/// Search `End` for an idempotent other than 0 and I.
pub fn find_nontrivial_idempotent(end: &HomBasis, seed: u64, trials: usize) -> IdempotentSearch {
    find_nontrivial_idempotent_with(end, seed, trials, &Tolerances::default())
}

pub fn find_nontrivial_idempotent_with(
    end: &HomBasis,
    seed: u64,
    trials: usize,
    tol: &Tolerances,
) -> IdempotentSearch {
    let mut out = IdempotentSearch {
        witness: None,
        trials_used: 0,
        best_gap: 0.0,
        rejected_splits: 0,
    };
    if end.dim <= 1 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        out.trials_used += 1;
        let coeffs: Vec<C64> = (0..end.dim).map(|_| linalg::gaussian(&mut rng)).collect();
        let t = end.combine(&coeffs);
        let spec = BlockSpectrum::new(&t);
        let candidates = spec.candidate_splits(tol.cluster_gap);
        for cand in candidates {
            out.best_gap = out.best_gap.max(cand.rel_gap);
            match verify_projection(end, &spec, &cand, tol) {
                Some(p) => {
                    out.witness = Some(p);
                    return out;
                }
                None => out.rejected_splits += 1,
            }
        }
    }
    out
}

struct BlockSpectrum {
    /// Per vertex `(Q, U)` with `T_v = Q U Q^H`, `U` upper triangular; `None` for empty blocks.
    schur: Vec<Option<(CMat, CMat)>>,
    eig: Vec<C64>,
    radius: f64,
}

struct Split {
    center: C64,
    radius: f64,
    ratio: f64,
    rel_gap: f64,
    inside: Vec<usize>,
}

impl BlockSpectrum {
    fn new(t: &Hom) -> BlockSpectrum {
        let mut schur = Vec::with_capacity(t.mats.len());
        let mut eig = Vec::new();
        for m in &t.mats {
            if m.nrows() == 0 {
                schur.push(None);
                continue;
            }
            let (q, mut u) = Schur::new(m.clone()).unpack();
            for i in 0..u.nrows() {
                for j in 0..i {
                    u[(i, j)] = ZERO;
                }
                eig.push(u[(i, i)]);
            }
            schur.push(Some((q, u)));
        }
        let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
        BlockSpectrum { schur, eig, radius }
    }

    /// Circles around an eigenvalue placed in the widest radial gap, best separated first.
    fn candidate_splits(&self, min_rel_gap: f64) -> Vec<Split> {
        let n = self.eig.len();
        let mut out: Vec<Split> = Vec::new();
        if n < 2 || self.radius == 0.0 {
            return out;
        }
        for ci in 0..n {
            let center = self.eig[ci];
            let mut d: Vec<(f64, usize)> = self
                .eig
                .iter()
                .enumerate()
                .map(|(i, z)| ((z - center).norm(), i))
                .collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut best: Option<(f64, usize)> = None;
            for k in 0..n - 1 {
                let (din, dout) = (d[k].0, d[k + 1].0);
                if dout - din < min_rel_gap * self.radius {
                    continue;
                }
                let ratio = if din == 0.0 { 0.0 } else { din / dout };
                if best.is_none_or(|(r, _)| ratio < r) {
                    best = Some((ratio, k));
                }
            }
            if let Some((ratio, k)) = best {
                let (din, dout) = (d[k].0, d[k + 1].0);
                let mut inside: Vec<usize> = d[..=k].iter().map(|x| x.1).collect();
                inside.sort_unstable();
                let radius = if din == 0.0 { 0.5 * dout } else { (din * dout).sqrt() };
                out.push(Split {
                    center,
                    radius,
                    ratio,
                    rel_gap: (dout - din) / self.radius,
                    inside,
                });
            }
        }
        out.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
        let mut uniq: Vec<Split> = Vec::new();
        for s in out {
            let complement_of = |u: &Split| {
                u.inside.len() + s.inside.len() == n
                    && !u.inside.iter().any(|i| s.inside.binary_search(i).is_ok())
            };
            if !uniq.iter().any(|u| u.inside == s.inside || complement_of(u)) {
                uniq.push(s);
            }
            if uniq.len() == MAX_CANDIDATES {
                break;
            }
        }
        uniq
    }

    /// Riesz projection onto the eigenvalues inside the circle, by trapezoid quadrature of
    /// the resolvent of each triangular Schur factor.
    fn projection(&self, split: &Split) -> Option<Vec<CMat>> {
        let mut q_eff = if split.ratio == 0.0 { 0.5 } else { split.ratio.sqrt() };
        if split.ratio == 0.0 {
            // inside points sit at the centre; outside starts at 2 * radius
            q_eff = q_eff.max(0.5);
        }
        if q_eff > 0.985 {
            return None;
        }
        let nodes = ((-39.0) / q_eff.ln()).ceil().clamp(8.0, 4096.0) as usize;
        let mut out = Vec::with_capacity(self.schur.len());
        for s in &self.schur {
            let Some((q, u)) = s else {
                out.push(CMat::zeros(0, 0));
                continue;
            };
            let d = u.nrows();
            let mut acc = CMat::zeros(d, d);
            for j in 0..nodes {
                let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
                let e = c(theta.cos(), theta.sin());
                let z = split.center + e * split.radius;
                let w = e * (split.radius / nodes as f64);
                upper_resolvent_accumulate(u, z, w, &mut acc);
            }
            out.push(q * acc * q.adjoint());
        }
        out.iter().all(linalg::is_finite).then_some(out)
    }
}

/// `acc += w * (z I - U)^{-1}` for upper triangular `U`.
fn upper_resolvent_accumulate(u: &CMat, z: C64, w: C64, acc: &mut CMat) {
    let d = u.nrows();
    let mut x = vec![ZERO; d];
    for col in 0..d {
        for v in x.iter_mut() {
            *v = ZERO;
        }
        for i in (0..=col).rev() {
            let mut s = if i == col { linalg::ONE } else { ZERO };
            for k in i + 1..=col {
                s += u[(i, k)] * x[k];
            }
            x[i] = s / (z - u[(i, i)]);
        }
        for i in 0..=col {
            acc[(i, col)] += w * x[i];
        }
    }
}

fn verify_projection(end: &HomBasis, spec: &BlockSpectrum, split: &Split, tol: &Tolerances) -> Option<Hom> {
    let raw = Hom::new(spec.projection(split)?);
    let mut p = end.project(&raw);
    for _ in 0..80 {
        let p2 = p.compose(&p).ok()?;
        let gap = p2.sub(&p).ok()?.norm();
        if !gap.is_finite() {
            return None;
        }
        if gap <= 1e-14 * p.norm().max(1.0) {
            break;
        }
        let p3 = p2.compose(&p).ok()?;
        p = p2.scale(c(3.0, 0.0)).sub(&p3.scale(c(2.0, 0.0))).ok()?;
        if !p.norm().is_finite() {
            return None;
        }
    }
    p = end.project(&p);
    let scale = p.norm().max(1.0);
    let idem = p.compose(&p).ok()?.sub(&p).ok()?.norm() / scale;
    let member = hom_residual(&p, &end.source, &end.target);
    let total: f64 = p.mats.iter().map(|m| m.trace().re).sum();
    let full = end.source.total_dim() as f64;
    if !(idem <= tol.residual && member <= tol.residual && total > 0.5 && total < full - 0.5) {
        return None;
    }
    p.residual = idem.max(member);
    Some(p)
}

/// Indecomposability verdict.
#[derive(Debug, Clone)]
pub enum Verdict {
    Zero,
    Indecomposable,
    Decomposable(Hom),
}

#[derive(Debug, Clone)]
pub struct Indecomposability {
    pub verdict: Verdict,
    pub end_dim: usize,
    pub trials_used: usize,
    pub best_gap: f64,
    pub rejected_splits: usize,
}

impl Indecomposability {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self.verdict, Verdict::Indecomposable)
    }

    pub fn is_decomposable(&self) -> bool {
        matches!(self.verdict, Verdict::Decomposable(_))
    }

    pub fn label(&self) -> &'static str {
        match self.verdict {
            Verdict::Zero => "zero",
            Verdict::Indecomposable => "indecomposable",
            Verdict::Decomposable(_) => "decomposable",
        }
    }
}

pub fn is_indecomposable(r: &Rep, seed: u64) -> Result<Indecomposability> {
    is_indecomposable_with(r, seed, DEFAULT_TRIALS, &Tolerances::default())
}

pub fn is_indecomposable_with(r: &Rep, seed: u64, trials: usize, tol: &Tolerances) -> Result<Indecomposability> {
    if r.is_zero() {
        return Ok(Indecomposability {
            verdict: Verdict::Zero,
            end_dim: 0,
            trials_used: 0,
            best_gap: 0.0,
            rejected_splits: 0,
        });
    }
    let end = end_basis_with(r, tol)?;
    Ok(indecomposability_from_end(&end, seed, trials, tol))
}

pub fn indecomposability_from_end(end: &HomBasis, seed: u64, trials: usize, tol: &Tolerances) -> Indecomposability {
    let search = find_nontrivial_idempotent_with(end, seed, trials, tol);
    Indecomposability {
        verdict: match search.witness {
            Some(p) => Verdict::Decomposable(p),
            None => Verdict::Indecomposable,
        },
        end_dim: end.dim,
        trials_used: search.trials_used,
        best_gap: search.best_gap,
        rejected_splits: search.rejected_splits,
    }
}

/// Random elements of `Hom(r1, r2)` until one is invertible at every vertex.
pub fn find_isomorphism(r1: &Rep, r2: &Rep, seed: u64, trials: usize) -> Result<Option<Hom>> {
    find_isomorphism_with(r1, r2, seed, trials, &Tolerances::default())
}

pub fn find_isomorphism_with(
    r1: &Rep,
    r2: &Rep,
    seed: u64,
    trials: usize,
    tol: &Tolerances,
) -> Result<Option<Hom>> {
    if r1.quiver() != r2.quiver() {
        return Err(Error::QuiverMismatch);
    }
    if r1.dims() != r2.dims() {
        return Ok(None);
    }
    if r1.is_zero() {
        return Ok(Some(Hom::identity(r1)));
    }
    let hb = hom_basis_with(r1, r2, tol, Strategy::Auto)?;
    if hb.dim == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let coeffs: Vec<C64> = (0..hb.dim).map(|_| linalg::gaussian(&mut rng)).collect();
        let mut h = hb.combine(&coeffs);
        if h.mats.iter().all(|m| linalg::is_invertible(m, tol.rel)) {
            h.residual = hom_residual(&h, r1, r2);
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Relative distance of a Hom-shaped tuple from the span of a basis.
pub fn distance_from_span(b: &HomBasis, h: &Hom) -> f64 {
    let p = b.project(h);
    let d = h.sub(&p).map(|x| x.norm()).unwrap_or(f64::INFINITY);
    d / h.norm().max(1.0)
}

/// Frobenius norm helper re-exported for report code.
pub fn hom_norm(h: &Hom) -> f64 {
    h.mats.iter().map(frob).map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, from_real_rows, gaussian_matrix, real, ONE};
    use crate::quiver::Quiver;

    fn kron(a: CMat, b: CMat) -> Rep {
        Rep::new(Quiver::kronecker(), vec![a.ncols(), a.nrows()], vec![a, b]).unwrap()
    }

    fn jordan(k: usize) -> CMat {
        CMat::from_fn(k, k, |i, j| if i == j + 1 { ONE } else { ZERO })
    }

    #[test]
    fn scalars_and_jordan() {
        let r = kron(from_real_rows(&[&[1.0]]), from_real_rows(&[&[0.0]]));
        assert_eq!(end_basis(&r).unwrap().dim, 1);
        let r = kron(linalg::eye(2), jordan(2));
        let b = end_basis(&r).unwrap();
        assert_eq!(b.dim, 2);
        assert!(b.max_residual < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let r = kron(linalg::eye(3), jordan(3));
        let b = end_basis(&r).unwrap();
        for i in 0..b.dim {
            for j in 0..b.dim {
                let ip = b.basis[i].inner(&b.basis[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - real(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // star into a 4-dim sink with injective arrows plus a structured direct sum
        let q = Quiver::from_strs(
            "star",
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "5"), ("b", "2", "5"), ("c", "3", "5"), ("d", "4", "5")],
        )
        .unwrap();
        let base = Rep::new(
            q.clone(),
            vec![1, 1, 1, 1, 2],
            (0..4).map(|_| gaussian_matrix(&mut rng, 2, 1)).collect(),
        )
        .unwrap();
        let r = base.direct_sum(&base).unwrap();
        let tol = Tolerances::default();
        let d = hom_basis_with(&r, &r, &tol, Strategy::Direct).unwrap();
        let red = hom_basis_with(&r, &r, &tol, Strategy::Reduced).unwrap();
        assert_eq!(d.dim, red.dim);
        assert!(red.solved_unknowns < d.solved_unknowns);
        for h in &red.basis {
            assert!(distance_from_span(&d, h) < 1e-10);
        }
    }

    #[test]
    fn transitivity() {
        let c3 = Quiver::cycle(3);
        let one = || from_real_rows(&[&[1.0]]);
        let r = Rep::new(c3, vec![1, 1, 1], vec![one(), one(), from_real_rows(&[&[0.0]])]).unwrap();
        assert_eq!(is_transitive(&r).unwrap(), (true, 1));
        let c2 = Quiver::cycle(2);
        let r = Rep::new(
            c2,
            vec![1, 1],
            vec![from_real_rows(&[&[0.0]]), from_real_rows(&[&[0.0]])],
        )
        .unwrap();
        assert_eq!(is_transitive(&r).unwrap(), (false, 2));
        assert!(matches!(
            is_transitive(&Rep::zero(Quiver::kronecker())),
            Err(Error::ZeroRepresentation)
        ));
    }

    #[test]
    fn idempotent_found_in_direct_sum() {
        let r1 = kron(from_real_rows(&[&[1.0]]), from_real_rows(&[&[0.0]]));
        let r2 = kron(from_real_rows(&[&[0.0]]), from_real_rows(&[&[1.0]]));
        let s = r1.direct_sum(&r2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi = vec![gaussian_matrix(&mut rng, 2, 2), gaussian_matrix(&mut rng, 2, 2)];
        let hidden = s.conjugate(&phi, 1e-9).unwrap();
        let end = end_basis(&hidden).unwrap();
        let found = find_nontrivial_idempotent(&end, 0, 8).witness.expect("idempotent");
        assert!(found.residual <= 1e-8);
        let (a, b, _) = hidden.decompose_with(&found, &Tolerances::default()).unwrap();
        assert_eq!(a.dims(), &[1, 1]);
        assert_eq!(b.dims(), &[1, 1]);
    }

    #[test]
    fn local_algebras_have_no_idempotent() {
        for k in 2..=6 {
            let r = kron(linalg::eye(k), jordan(k));
            let end = end_basis(&r).unwrap();
            assert_eq!(end.dim, k);
            let s = find_nontrivial_idempotent(&end, 42, 8);
            assert!(s.witness.is_none(), "k={k}");
            assert_eq!(s.trials_used, 8);
        }
        let scalar = kron(from_real_rows(&[&[1.0]]), from_real_rows(&[&[2.0]]));
        let s = find_nontrivial_idempotent(&end_basis(&scalar).unwrap(), 0, 8);
        assert_eq!(s.trials_used, 0);
    }

    #[test]
    fn verdicts() {
        let r = kron(from_real_rows(&[&[1.0]]), from_real_rows(&[&[1.0]]));
        assert!(is_indecomposable(&r, 0).unwrap().is_indecomposable());
        let rr = r.direct_sum(&r).unwrap();
        assert!(is_indecomposable(&rr, 0).unwrap().is_decomposable());
        let z = Rep::zero(Quiver::kronecker());
        assert!(matches!(is_indecomposable(&z, 0).unwrap().verdict, Verdict::Zero));
        let d = kron(linalg::eye(2), diag(&[ONE, real(2.0)]));
        assert!(is_indecomposable(&d, 3).unwrap().is_decomposable());
    }

    #[test]
    fn isomorphism_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = kron(gaussian_matrix(&mut rng, 2, 2), gaussian_matrix(&mut rng, 2, 2));
        let phi = vec![gaussian_matrix(&mut rng, 2, 2), gaussian_matrix(&mut rng, 2, 2)];
        let r2 = r.conjugate(&phi, 1e-9).unwrap();
        let iso = find_isomorphism(&r, &r2, 0, 8).unwrap().expect("iso");
        assert!(iso.residual < 1e-9);
        let other = kron(gaussian_matrix(&mut rng, 2, 2), gaussian_matrix(&mut rng, 2, 2));
        assert!(find_isomorphism(&r, &other, 0, 8).unwrap().is_none());
    }
}
