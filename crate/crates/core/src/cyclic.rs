//! Representations of oriented cycles: connected components of the nonzero vertices, the
//! transitivity criterion for spaces of dimension at most one, the zero-vertex reduction
//! and the small-cycle classification lists.

use crate::error::{Error, Result};
use crate::linalg::{CMat, Tolerances};
use crate::quiver::Quiver;
use crate::rep::Rep;

/// A representation of an oriented cycle, read in cyclic order: position `i` carries
/// `H_i` and the arrow `A_i: H_i -> H_{i+1 mod n}`.
#[derive(Debug, Clone)]
pub struct CycleRep {
    rep: Rep,
    /// Vertex index at each cyclic position.
    verts: Vec<usize>,
    /// Arrow index leaving each cyclic position.
    arrows: Vec<usize>,
}

impl CycleRep {
    /// Representation of the standard cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn new(dims: Vec<usize>, mats: Vec<CMat>) -> Result<CycleRep> {
        let n = dims.len();
        if n < 2 {
            return Err(Error::CycleTooShort(n));
        }
        CycleRep::from_rep(Rep::new(Quiver::cycle(n), dims, mats)?)
    }

    /// Scalar data: `dims[i] in {0, 1}`, `scalars[i]` used when both ends are one-dimensional.
    pub fn from_scalars(dims: &[usize], scalars: &[f64]) -> Result<CycleRep> {
        let n = dims.len();
        if scalars.len() != n {
            return Err(Error::DimsMismatch(format!("{} scalars for {n} arrows", scalars.len())));
        }
        let mats = (0..n)
            .map(|i| {
                let (s, t) = (dims[i], dims[(i + 1) % n]);
                CMat::from_element(t, s, crate::linalg::real(scalars[i]))
            })
            .collect();
        CycleRep::new(dims.to_vec(), mats)
    }

    pub fn from_rep(rep: Rep) -> Result<CycleRep> {
        let order = rep.quiver().cycle_order().ok_or(Error::NotOrientedCycle)?;
        if order.len() < 2 {
            return Err(Error::CycleTooShort(order.len()));
        }
        let (verts, arrows) = order.into_iter().unzip();
        Ok(CycleRep { rep, verts, arrows })
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Dimensions in cyclic order.
    pub fn dims(&self) -> Vec<usize> {
        self.verts.iter().map(|&v| self.rep.dims()[v]).collect()
    }

    /// `A_i` in cyclic order.
    pub fn mat(&self, i: usize) -> &CMat {
        &self.rep.mats()[self.arrows[i]]
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.rep.quiver().vertices()[self.verts[i]]
    }

    fn check_small(&self) -> Result<()> {
        for i in 0..self.len() {
            let d = self.rep.dims()[self.verts[i]];
            if d >= 2 {
                return Err(Error::DimTooLarge {
                    vertex: self.vertex_id(i).to_string(),
                    dim: d,
                });
            }
        }
        Ok(())
    }

    /// Which `A_i` count as nonzero: `|A_i| > tol.rel * max(1, max_j |A_j|)`.
    /// Maps touching a zero space are zero.
    pub fn nonzero_arrows(&self, tol: &Tolerances) -> Vec<bool> {
        let scale = (0..self.len())
            .map(|i| crate::linalg::max_abs(self.mat(i)))
            .fold(1.0, f64::max);
        (0..self.len())
            .map(|i| crate::linalg::max_abs(self.mat(i)) > tol.rel * scale)
            .collect()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Classes of nonzero positions, linked through `i ~ i+1 (mod n)` whenever `A_i` is nonzero.
/// Positions are 0-based and classes are sorted by their smallest member.
pub fn hf_components_positions(r: &CycleRep, tol: &Tolerances) -> Result<Vec<Vec<usize>>> {
    r.check_small()?;
    let n = r.len();
    let dims = r.dims();
    let nz = r.nonzero_arrows(tol);
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        if nz[i] && dims[i] == 1 && dims[j] == 1 {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in (0..n).filter(|&i| dims[i] == 1) {
        let root = find(&mut parent, i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[root_slot[root]].push(i);
    }
    Ok(classes)
}

/// The same classes as vertex ids.
pub fn hf_components(r: &CycleRep, tol: &Tolerances) -> Result<Vec<Vec<String>>> {
    Ok(hf_components_positions(r, tol)?
        .into_iter()
        .map(|c| c.into_iter().map(|i| r.vertex_id(i).to_string()).collect())
        .collect())
}

/// Transitivity predicted from the data alone: every space of dimension at most one, not
/// all zero, and a single component.
pub fn cn_transitive_criterion(r: &CycleRep, tol: &Tolerances) -> bool {
    let dims = r.dims();
    if dims.iter().any(|&d| d >= 2) || dims.iter().all(|&d| d == 0) {
        return false;
    }
    hf_components_positions(r, tol).map(|c| c.len() == 1).unwrap_or(false)
}

/// Remove a zero-dimensional position `k` (0-based) from a cycle of length at least 3.
/// The two arrows through `k` become one zero arrow; every other arrow is kept.
pub fn reduce_zero_vertex(r: &CycleRep, k: usize) -> Result<CycleRep> {
    let n = r.len();
    if n < 3 {
        return Err(Error::CycleTooShort(n));
    }
    if k >= n {
        return Err(Error::InvalidArgument(format!("position {k} outside a cycle of length {n}")));
    }
    if r.dims()[k] != 0 {
        return Err(Error::NonzeroVertex(r.vertex_id(k).to_string()));
    }
    let q = r.rep.quiver();
    let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let vertices: Vec<String> = keep.iter().map(|&i| r.vertex_id(i).to_string()).collect();
    let prev = (k + n - 1) % n;
    let mut arrows = Vec::with_capacity(n - 1);
    let mut mats = Vec::with_capacity(n - 1);
    let dims: Vec<usize> = keep.iter().map(|&i| r.dims()[i]).collect();
    for (j, &i) in keep.iter().enumerate() {
        let next = keep[(j + 1) % (n - 1)];
        let (id, m) = if i == prev {
            let id = format!("{}_{}", q.arrows()[r.arrows[prev]].id, q.arrows()[r.arrows[k]].id);
            (id, CMat::zeros(r.dims()[next], r.dims()[i]))
        } else {
            (q.arrows()[r.arrows[i]].id.clone(), r.mat(i).clone())
        };
        arrows.push((id, vertices[j].clone(), vertices[(j + 1) % (n - 1)].clone()));
        mats.push(m);
    }
    let nq = Quiver::new(&format!("C{}", n - 1), vertices, arrows)?;
    CycleRep::from_rep(Rep::new(nq, dims, mats)?)
}

/// Case number (1-based) of the two-cycle classification satisfied by scalar data, or
/// `None` when no case applies (the representation is then not transitive).
pub fn c2_case(dims: [usize; 2], nonzero: [bool; 2]) -> Option<usize> {
    match (dims, nonzero) {
        ([1, 0], [false, false]) => Some(1),
        ([0, 1], [false, false]) => Some(2),
        ([1, 1], [a1, a2]) if a1 || a2 => Some(3),
        _ => None,
    }
}

/// Case number (1-based) of the three-cycle classification satisfied by scalar data.
/// `nonzero[i]` refers to `A_{i+1}`.
pub fn c3_case(dims: [usize; 3], nonzero: [bool; 3]) -> Option<usize> {
    let [a1, a2, a3] = nonzero;
    match dims {
        [1, 0, 0] => Some(1),
        [0, 1, 0] => Some(2),
        [0, 0, 1] => Some(3),
        [1, 1, 0] if a1 => Some(4),
        [0, 1, 1] if a2 => Some(5),
        [1, 0, 1] if a3 => Some(6),
        [1, 1, 1] if (a1 && a2) || (a2 && a3) || (a1 && a3) => Some(7),
        _ => None,
    }
}

/// Every scalar representation of `C_n` with dimensions in `{0, 1}` and scalars in `{0, 1}`,
/// each listed once (scalars on arrows touching a zero space are fixed to 0).
pub fn enumerate_binary(n: usize) -> Vec<CycleRep> {
    let mut out = Vec::new();
    for dmask in 0..(1u32 << n) {
        let dims: Vec<usize> = (0..n).map(|i| (dmask >> i & 1) as usize).collect();
        let live: Vec<usize> = (0..n).filter(|&i| dims[i] == 1 && dims[(i + 1) % n] == 1).collect();
        for smask in 0..(1u32 << live.len()) {
            let mut s = vec![0.0; n];
            for (b, &i) in live.iter().enumerate() {
                if smask >> b & 1 == 1 {
                    s[i] = 1.0;
                }
            }
            out.push(CycleRep::from_scalars(&dims, &s).expect("valid cycle data"));
        }
    }
    out
}
