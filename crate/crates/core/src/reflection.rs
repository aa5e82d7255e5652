//! Reflection functors at a sink (`Plus`) or source (`Minus`), the adjoint functor on the
//! opposite quiver, fullness predicates, verification that a reflection induces an
//! algebra isomorphism on `End`, and orientation changes of `A_n` by source reflections.

use crate::error::{Error, Result};
use crate::hom::{end_basis_with, hom_basis_with, Strategy};
use crate::linalg::{self, frob, CMat, Tolerances};
use crate::quiver::{Quiver, ReflectMode};
use crate::rep::{hom_residual, Hom, Rep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Reflection at a sink.
    Plus,
    /// Reflection at a source.
    Minus,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Plus => "plus",
            Direction::Minus => "minus",
        }
    }
}

/// Output of a reflection together with the data needed to act on homomorphisms.
#[derive(Debug, Clone)]
pub struct ReflectionResult {
    /// Representation on the reflected quiver.
    pub rep: Rep,
    /// Index of the reflected vertex.
    pub vertex: usize,
    pub direction: Direction,
    /// Orthonormal columns spanning the new space at the vertex inside the direct sum
    /// over the arrows at the vertex.
    pub kernel_basis: CMat,
    /// Arrows at the vertex in direct-sum order.
    pub arrows: Vec<usize>,
    /// Row offset of each arrow's block inside the direct sum.
    pub offsets: Vec<usize>,
    /// The input representation.
    pub input: Rep,
}

impl ReflectionResult {
    /// Image under the functor of `h: self.input -> target.input`, as a Hom
    /// `self.rep -> target.rep`.
    pub fn transport(&self, target: &ReflectionResult, h: &Hom) -> Result<Hom> {
        if self.vertex != target.vertex
            || self.direction != target.direction
            || self.input.quiver() != target.input.quiver()
        {
            return Err(Error::ReflectionMismatch);
        }
        let sd = self.input.dims();
        let td = target.input.dims();
        let shape_ok = h.mats.len() == sd.len()
            && h
                .mats
                .iter()
                .enumerate()
                .all(|(v, m)| m.shape() == (td[v], sd[v]));
        if !shape_ok {
            return Err(Error::DimsMismatch("homomorphism does not match the representations".into()));
        }
        let q = self.input.quiver();
        let blocks: Vec<CMat> = self
            .arrows
            .iter()
            .map(|&ai| {
                let a = &q.arrows()[ai];
                let far = match self.direction {
                    Direction::Plus => a.src,
                    Direction::Minus => a.dst,
                };
                h.mats[far].clone()
            })
            .collect();
        let sum = linalg::block_diag(&blocks);
        let mut mats = h.mats.clone();
        mats[self.vertex] = target.kernel_basis.adjoint() * sum * &self.kernel_basis;
        let mut out = Hom::new(mats);
        out.residual = hom_residual(&out, &self.rep, &target.rep);
        Ok(out)
    }
}

fn block_offsets(r: &Rep, arrows: &[usize], direction: Direction) -> (Vec<usize>, usize) {
    let q = r.quiver();
    let mut off = Vec::with_capacity(arrows.len());
    let mut n = 0;
    for &ai in arrows {
        off.push(n);
        let a = &q.arrows()[ai];
        n += match direction {
            Direction::Plus => r.dims()[a.src],
            Direction::Minus => r.dims()[a.dst],
        };
    }
    (off, n)
}

/// `h_v`: the row of incoming maps, `(+)_a H_{s(a)} -> H_v`.
pub fn sink_sum_map(r: &Rep, v: usize) -> CMat {
    let arrows = r.quiver().incoming(v);
    let blocks: Vec<CMat> = arrows.iter().map(|&ai| r.mats()[ai].clone()).collect();
    linalg::hstack(&blocks, r.dims()[v])
}

/// `ĥ_v`: the column of outgoing maps, `H_v -> (+)_a H_{r(a)}`.
pub fn source_sum_map(r: &Rep, v: usize) -> CMat {
    let arrows = r.quiver().outgoing(v);
    let blocks: Vec<CMat> = arrows.iter().map(|&ai| r.mats()[ai].clone()).collect();
    linalg::vstack(&blocks, r.dims()[v])
}

/// Reflection at a sink.
pub fn reflect_sink(r: &Rep, v: &str) -> Result<ReflectionResult> {
    reflect_sink_with(r, v, &Tolerances::default())
}

pub fn reflect_sink_with(r: &Rep, v: &str, tol: &Tolerances) -> Result<ReflectionResult> {
    let q = r.quiver();
    let vi = q.vertex_index(v)?;
    let new_q = q.reverse_at(v, ReflectMode::Sink)?;
    let arrows = q.incoming(vi);
    let (offsets, _) = block_offsets(r, &arrows, Direction::Plus);
    let k = linalg::nullspace(&sink_sum_map(r, vi), tol.nullspace_factor);
    let mut dims = r.dims().to_vec();
    dims[vi] = k.ncols();
    let mut mats = r.mats().to_vec();
    for (&ai, &off) in arrows.iter().zip(&offsets) {
        let d = r.dims()[q.arrows()[ai].src];
        mats[ai] = k.rows(off, d).into_owned();
    }
    Ok(ReflectionResult {
        rep: Rep::new(new_q, dims, mats)?,
        vertex: vi,
        direction: Direction::Plus,
        kernel_basis: k,
        arrows,
        offsets,
        input: r.clone(),
    })
}

/// Reflection at a source.
pub fn reflect_source(r: &Rep, v: &str) -> Result<ReflectionResult> {
    reflect_source_with(r, v, &Tolerances::default())
}

pub fn reflect_source_with(r: &Rep, v: &str, tol: &Tolerances) -> Result<ReflectionResult> {
    let q = r.quiver();
    let vi = q.vertex_index(v)?;
    let new_q = q.reverse_at(v, ReflectMode::Source)?;
    let arrows = q.outgoing(vi);
    let (offsets, _) = block_offsets(r, &arrows, Direction::Minus);
    let k = linalg::complement_basis(&source_sum_map(r, vi), tol.nullspace_factor);
    let kh = k.adjoint();
    let mut dims = r.dims().to_vec();
    dims[vi] = k.ncols();
    let mut mats = r.mats().to_vec();
    for (&ai, &off) in arrows.iter().zip(&offsets) {
        let d = r.dims()[q.arrows()[ai].dst];
        mats[ai] = kh.columns(off, d).into_owned();
    }
    Ok(ReflectionResult {
        rep: Rep::new(new_q, dims, mats)?,
        vertex: vi,
        direction: Direction::Minus,
        kernel_basis: k,
        arrows,
        offsets,
        input: r.clone(),
    })
}

pub fn reflect(r: &Rep, v: &str, direction: Direction, tol: &Tolerances) -> Result<ReflectionResult> {
    match direction {
        Direction::Plus => reflect_sink_with(r, v, tol),
        Direction::Minus => reflect_source_with(r, v, tol),
    }
}

/// The adjoint representation on the opposite quiver.
pub fn dual(r: &Rep) -> Rep {
    let mats = r.mats().iter().map(|m| m.adjoint()).collect();
    Rep::new(r.quiver().opposite(), r.dims().to_vec(), mats).expect("adjoint shapes are consistent")
}

/// Full at a sink (`Plus`: incoming images span `H_v`) or co-full at a source
/// (`Minus`: adjoint images of outgoing maps span `H_v`).
pub fn is_full_at(r: &Rep, v: &str, direction: Direction, tol: &Tolerances) -> Result<bool> {
    let q = r.quiver();
    let vi = q.vertex_index(v)?;
    let m = match direction {
        Direction::Plus => {
            if !q.is_sink(vi) {
                return Err(Error::NotSink(v.to_string()));
            }
            sink_sum_map(r, vi)
        }
        Direction::Minus => {
            if !q.is_source(vi) {
                return Err(Error::NotSource(v.to_string()));
            }
            source_sum_map(r, vi)
        }
    };
    Ok(linalg::rank(&m, tol.nullspace_factor) == r.dims()[vi])
}

/// Closedness of the image sum; automatic in finite dimension.
pub fn is_closed_at(_r: &Rep, _v: &str) -> bool {
    true
}

/// Closedness of the adjoint image sum; automatic in finite dimension.
pub fn is_coclosed_at(_r: &Rep, _v: &str) -> bool {
    true
}

/// Outcome of checking that a reflection maps `End` isomorphically onto `End` of the result.
#[derive(Debug, Clone)]
pub struct EndIsoReport {
    pub direction: Direction,
    pub vertex: String,
    /// Fullness (for `Plus`) or co-fullness (for `Minus`) at the vertex.
    pub hypothesis_holds: bool,
    pub end_dim_before: usize,
    pub end_dim_after: usize,
    /// Rank of the transported End basis.
    pub transported_rank: usize,
    /// Largest intertwining residual of a transported basis element.
    pub membership_residual: f64,
    /// Largest `|Phi(S T) - Phi(S) Phi(T)|` over basis pairs, relative.
    pub multiplicativity_residual: f64,
    /// `Phi(I) = I` residual.
    pub unit_residual: f64,
}

impl EndIsoReport {
    /// Linear bijection and multiplicative at tolerance.
    pub fn is_isomorphism(&self, tol: &Tolerances) -> bool {
        self.end_dim_before == self.end_dim_after
            && self.transported_rank == self.end_dim_before
            && self.membership_residual <= tol.residual
            && self.multiplicativity_residual <= tol.residual
            && self.unit_residual <= tol.residual
    }

    pub fn status(&self, tol: &Tolerances) -> &'static str {
        if !self.hypothesis_holds {
            "hypothesis violated"
        } else if self.is_isomorphism(tol) {
            "isomorphism"
        } else {
            "failed"
        }
    }
}

fn hom_rel_diff(a: &Hom, b: &Hom) -> f64 {
    let d = a.sub(b).map(|x| x.norm()).unwrap_or(f64::INFINITY);
    d / a.norm().max(b.norm()).max(1.0)
}

/// Transport an End basis through the reflection and measure how far the induced map is
/// from an algebra isomorphism. A failed hypothesis is reported, not raised.
pub fn verify_end_isomorphism(
    r: &Rep,
    v: &str,
    direction: Direction,
    tol: &Tolerances,
) -> Result<EndIsoReport> {
    let hypothesis_holds = is_full_at(r, v, direction, tol)?;
    let res = reflect(r, v, direction, tol)?;
    let before = end_basis_with(r, tol)?;
    let after = end_basis_with(&res.rep, tol)?;
    let mut images = Vec::with_capacity(before.dim);
    let mut membership = 0.0f64;
    for b in &before.basis {
        let t = res.transport(&res, b)?;
        membership = membership.max(t.residual);
        images.push(t);
    }
    let rank = if images.is_empty() {
        0
    } else {
        let cols: Vec<CMat> = images
            .iter()
            .map(|h| {
                let f = h.flatten();
                CMat::from_column_slice(f.len(), 1, &f)
            })
            .collect();
        let rows = cols[0].nrows();
        linalg::rank(&linalg::hstack(&cols, rows), tol.nullspace_factor)
    };
    let mut mult = 0.0f64;
    for (i, bi) in before.basis.iter().enumerate() {
        for (j, bj) in before.basis.iter().enumerate() {
            let prod = bi.compose(bj)?;
            let lhs = res.transport(&res, &prod)?;
            let rhs = images[i].compose(&images[j])?;
            mult = mult.max(hom_rel_diff(&lhs, &rhs));
        }
    }
    let id = Hom::identity(r);
    let unit = hom_rel_diff(&res.transport(&res, &id)?, &Hom::identity(&res.rep));
    Ok(EndIsoReport {
        direction,
        vertex: v.to_string(),
        hypothesis_holds,
        end_dim_before: before.dim,
        end_dim_after: after.dim,
        transported_rank: rank,
        membership_residual: membership,
        multiplicativity_residual: mult,
        unit_residual: unit,
    })
}

/// `dim Hom(r1, r2)` and `dim Hom(dual r2, dual r1)`.
pub fn dual_hom_dims(r1: &Rep, r2: &Rep, tol: &Tolerances) -> Result<(usize, usize)> {
    let a = hom_basis_with(r1, r2, tol, Strategy::Auto)?.dim;
    let b = hom_basis_with(&dual(r2), &dual(r1), tol, Strategy::Auto)?.dim;
    Ok((a, b))
}

/// The path `1 - 2 - ... - n` where `orientation[k]` is true when arrow `a{k+1}` points
/// from `k+1` to `k+2`.
pub fn an_quiver(orientation: &[bool]) -> Quiver {
    let n = orientation.len() + 1;
    let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows = orientation.iter().enumerate().map(|(k, &right)| {
        let (s, t) = if right { (k + 1, k + 2) } else { (k + 2, k + 1) };
        (format!("a{}", k + 1), s.to_string(), t.to_string())
    });
    Quiver::new(&format!("A{n}"), vs, arrows).expect("path quiver is valid")
}

/// Orientation of a quiver whose vertices, in declaration order, form a path with one
/// arrow between each consecutive pair.
pub fn an_orientation(q: &Quiver) -> Result<Vec<bool>> {
    let n = q.n_vertices();
    if q.arrows().len() + 1 != n {
        return Err(Error::InvalidOrientation(format!(
            "{} arrows on {n} vertices is not a path",
            q.arrows().len()
        )));
    }
    let mut out = vec![None; n - 1];
    for a in q.arrows() {
        let (lo, hi) = (a.src.min(a.dst), a.src.max(a.dst));
        if hi != lo + 1 || out[lo].is_some() {
            return Err(Error::InvalidOrientation(format!(
                "arrow `{}` does not join consecutive vertices of a path",
                a.label()
            )));
        }
        out[lo] = Some(a.src < a.dst);
    }
    Ok(out.into_iter().map(|x| x.expect("every gap filled")).collect())
}

/// Source reflections turning the all-rightward path on `n` vertices into `target`.
/// Vertices are 1-based; `n` never appears.
pub fn orientation_sequence_an(n: usize, target: &[bool]) -> Result<Vec<usize>> {
    if n == 0 || target.len() + 1 != n {
        return Err(Error::InvalidOrientation(format!(
            "expected {} arrow directions for A{n}, got {}",
            n.saturating_sub(1),
            target.len()
        )));
    }
    let mut seq = Vec::new();
    for j in (1..n).rev() {
        if !target[j - 1] {
            seq.extend(1..=j);
        }
    }
    Ok(seq)
}

/// Apply source reflections to the all-rightward path, checking each step is at a source
/// other than `n`. Returns the reached orientation.
pub fn replay_an(n: usize, seq: &[usize]) -> Result<Vec<bool>> {
    let mut q = an_quiver(&vec![true; n.saturating_sub(1)]);
    for &v in seq {
        if v == 0 || v >= n {
            return Err(Error::InvalidOrientation(format!("step at vertex {v} is not allowed")));
        }
        q = q.reverse_at(&v.to_string(), ReflectMode::Source)?;
    }
    an_orientation(&q)
}

/// Max relative difference between two representations with equal data layout.
pub fn rep_distance(a: &Rep, b: &Rep) -> f64 {
    if a.dims() != b.dims() {
        return f64::INFINITY;
    }
    a.mats()
        .iter()
        .zip(b.mats())
        .map(|(x, y)| frob(&(x - y)) / frob(x).max(frob(y)).max(1.0))
        .fold(0.0, f64::max)
}
