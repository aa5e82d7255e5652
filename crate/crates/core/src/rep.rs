//! Finite-dimensional complex representations of quivers and homomorphisms between them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, block_diag, frob, CMat, Tolerances};
use crate::quiver::Quiver;

/// A representation: a space `C^{dims[v]}` per vertex and a `dims[dst] x dims[src]`
/// matrix per arrow, both indexed in quiver order.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    quiver: Quiver,
    dims: Vec<usize>,
    mats: Vec<CMat>,
}

impl Rep {
    pub fn new(quiver: Quiver, dims: Vec<usize>, mats: Vec<CMat>) -> Result<Rep> {
        if dims.len() != quiver.n_vertices() {
            return Err(Error::DimsMismatch(format!(
                "{} dimensions for {} vertices",
                dims.len(),
                quiver.n_vertices()
            )));
        }
        if mats.len() != quiver.arrows().len() {
            return Err(Error::DimsMismatch(format!(
                "{} matrices for {} arrows",
                mats.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            let expected = (dims[a.dst], dims[a.src]);
            if m.shape() != expected {
                return Err(Error::ShapeMismatch {
                    arrow: a.label(),
                    expected,
                    found: m.shape(),
                });
            }
            if !linalg::is_finite(m) {
                return Err(Error::NonFinite(a.label()));
            }
        }
        Ok(Rep { quiver, dims, mats })
    }

    /// Build from id-keyed maps. Missing matrices are allowed only for empty shapes.
    pub fn from_maps(
        quiver: Quiver,
        dims: &BTreeMap<String, usize>,
        mats: &BTreeMap<String, CMat>,
    ) -> Result<Rep> {
        let mut d = Vec::with_capacity(quiver.n_vertices());
        for v in quiver.vertices() {
            d.push(
                *dims
                    .get(v)
                    .ok_or_else(|| Error::DimsMismatch(format!("no dimension for vertex `{v}`")))?,
            );
        }
        for k in dims.keys() {
            quiver.vertex_index(k)?;
        }
        for k in mats.keys() {
            quiver.arrow_index(k)?;
        }
        let mut m = Vec::with_capacity(quiver.arrows().len());
        for a in quiver.arrows() {
            let shape = (d[a.dst], d[a.src]);
            match mats.get(&a.id).or_else(|| mats.get(&a.label())) {
                Some(x) => m.push(x.clone()),
                None if shape.0 == 0 || shape.1 == 0 => m.push(CMat::zeros(shape.0, shape.1)),
                None => {
                    return Err(Error::DimsMismatch(format!(
                        "no matrix for arrow `{}`",
                        a.label()
                    )))
                }
            }
        }
        Rep::new(quiver, d, m)
    }

    /// Zero representation on a quiver.
    pub fn zero(quiver: Quiver) -> Rep {
        let dims = vec![0; quiver.n_vertices()];
        let mats = quiver.arrows().iter().map(|_| CMat::zeros(0, 0)).collect();
        Rep { quiver, dims, mats }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn dim(&self, v: &str) -> Result<usize> {
        Ok(self.dims[self.quiver.vertex_index(v)?])
    }

    pub fn mat(&self, arrow: &str) -> Result<&CMat> {
        Ok(&self.mats[self.quiver.arrow_index(arrow)?])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Number of Hom coordinates for End of this representation.
    pub fn end_unknowns(&self) -> usize {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch);
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| block_diag(&[a.clone(), b.clone()]))
            .collect();
        Ok(Rep {
            quiver: self.quiver.clone(),
            dims,
            mats,
        })
    }

    /// `g_a = phi_dst f_a phi_src^{-1}`.
    pub fn conjugate(&self, phi: &[CMat], tol: f64) -> Result<Rep> {
        if phi.len() != self.dims.len() {
            return Err(Error::DimsMismatch("one matrix per vertex expected".into()));
        }
        let mut inv = Vec::with_capacity(phi.len());
        for (v, p) in phi.iter().enumerate() {
            if p.shape() != (self.dims[v], self.dims[v]) || !linalg::is_invertible(p, tol) {
                return Err(Error::Singular {
                    vertex: self.quiver.vertices()[v].clone(),
                });
            }
            inv.push(if p.nrows() == 0 {
                p.clone()
            } else {
                p.clone().try_inverse().ok_or_else(|| Error::Singular {
                    vertex: self.quiver.vertices()[v].clone(),
                })?
            });
        }
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, f)| &phi[a.dst] * f * &inv[a.src])
            .collect();
        Rep::new(self.quiver.clone(), self.dims.clone(), mats)
    }

    /// Split along an idempotent endomorphism. Returns `(image part, kernel part, iso)` where
    /// `iso: image ⊕ kernel -> self` is an isomorphism.
    pub fn decompose_with(&self, e: &Hom, tol: &Tolerances) -> Result<(Rep, Rep, Hom)> {
        if e.mats.len() != self.dims.len()
            || e
                .mats
                .iter()
                .zip(&self.dims)
                .any(|(m, &d)| m.shape() != (d, d))
        {
            return Err(Error::DimsMismatch("idempotent does not match representation".into()));
        }
        let scale = e.norm().max(1.0);
        let idem = e.compose(e)?.sub(e)?.norm() / scale;
        let membership = hom_residual(e, self, self);
        if idem > tol.residual || membership > tol.residual {
            return Err(Error::NotIdempotent {
                residual: idem.max(membership),
            });
        }
        let mut ranks = Vec::with_capacity(self.dims.len());
        for m in &e.mats {
            let t = m.trace().re;
            ranks.push(t.round().max(0.0) as usize);
        }
        let total: usize = ranks.iter().sum();
        if total == 0 || total == self.total_dim() {
            return Err(Error::TrivialIdempotent);
        }
        let mut u = Vec::with_capacity(self.dims.len());
        let mut w = Vec::with_capacity(self.dims.len());
        for (v, m) in e.mats.iter().enumerate() {
            let d = self.dims[v];
            let p = ranks[v].min(d);
            u.push(leading_left_vectors(m, p));
            w.push(leading_left_vectors(&(linalg::eye(d) - m), d - p));
        }
        let sub = |basis: &Vec<CMat>| -> Result<Rep> {
            let dims: Vec<usize> = basis.iter().map(|b| b.ncols()).collect();
            let mats = self
                .quiver
                .arrows()
                .iter()
                .zip(&self.mats)
                .map(|(a, f)| basis[a.dst].adjoint() * f * &basis[a.src])
                .collect();
            Rep::new(self.quiver.clone(), dims, mats)
        };
        let r1 = sub(&u)?;
        let r2 = sub(&w)?;
        let iso_mats: Vec<CMat> = u
            .iter()
            .zip(&w)
            .zip(&self.dims)
            .map(|((a, b), &d)| linalg::hstack(&[a.clone(), b.clone()], d))
            .collect();
        let sum = r1.direct_sum(&r2)?;
        let mut iso = Hom::new(iso_mats);
        iso.residual = hom_residual(&iso, &sum, self);
        if iso.residual > tol.residual.sqrt() {
            return Err(Error::NotIdempotent {
                residual: iso.residual,
            });
        }
        Ok((r1, r2, iso))
    }
}

fn leading_left_vectors(m: &CMat, k: usize) -> CMat {
    if k == 0 || m.nrows() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let mut u = linalg::svd(m, true).u.columns(0, k).into_owned();
    linalg::normalize_phases(&mut u);
    u
}

/// A homomorphism `(T_v)` between two representations, one matrix per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Hom {
    pub mats: Vec<CMat>,
    /// Relative intertwining residual recorded when the Hom was produced.
    pub residual: f64,
}

impl Hom {
    pub fn new(mats: Vec<CMat>) -> Hom {
        Hom {
            mats,
            residual: 0.0,
        }
    }

    pub fn identity(r: &Rep) -> Hom {
        Hom::new(r.dims().iter().map(|&d| linalg::eye(d)).collect())
    }

    pub fn zero(src: &Rep, dst: &Rep) -> Hom {
        Hom::new(
            src.dims()
                .iter()
                .zip(dst.dims())
                .map(|(&s, &t)| CMat::zeros(t, s))
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Hom) -> Result<Hom> {
        if self.mats.len() != other.mats.len() {
            return Err(Error::QuiverMismatch);
        }
        let mut out = Vec::with_capacity(self.mats.len());
        for (a, b) in self.mats.iter().zip(&other.mats) {
            if a.ncols() != b.nrows() {
                return Err(Error::DimsMismatch("incompatible composition".into()));
            }
            out.push(a * b);
        }
        Ok(Hom::new(out))
    }

    pub fn sub(&self, other: &Hom) -> Result<Hom> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Hom) -> Result<Hom> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &Hom, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Hom> {
        if self.mats.len() != other.mats.len()
            || self
                .mats
                .iter()
                .zip(&other.mats)
                .any(|(a, b)| a.shape() != b.shape())
        {
            return Err(Error::DimsMismatch("shapes differ".into()));
        }
        Ok(Hom::new(
            self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect(),
        ))
    }

    pub fn scale(&self, s: linalg::C64) -> Hom {
        Hom::new(self.mats.iter().map(|m| m * s).collect())
    }

    /// Frobenius norm of the flattened coordinate vector.
    pub fn norm(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| m.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// Flattened coordinates: vertices in quiver order, each matrix row-major.
    pub fn flatten(&self) -> Vec<linalg::C64> {
        let mut out = Vec::new();
        for m in &self.mats {
            linalg::flatten_into(m, &mut out);
        }
        out
    }

    /// Inner product of flattened coordinates, `<self, other>` conjugate-linear in `self`.
    pub fn inner(&self, other: &Hom) -> linalg::C64 {
        let mut acc = linalg::ZERO;
        for (a, b) in self.mats.iter().zip(&other.mats) {
            for (x, y) in a.iter().zip(b.iter()) {
                acc += x.conj() * y;
            }
        }
        acc
    }

    /// Conjugate transpose at every vertex (a Hom between the dual representations,
    /// in the opposite direction).
    pub fn adjoint(&self) -> Hom {
        Hom::new(self.mats.iter().map(|m| m.adjoint()).collect())
    }
}

/// `max_a ||T_dst f_a - g_a T_src|| / max(1, ||T|| max(||f_a||, ||g_a||))`.
pub fn hom_residual(h: &Hom, src: &Rep, dst: &Rep) -> f64 {
    let tn = h.norm();
    let mut worst = 0.0f64;
    for (i, a) in src.quiver().arrows().iter().enumerate() {
        let f = &src.mats()[i];
        let g = &dst.mats()[i];
        let lhs = &h.mats[a.dst] * f;
        let rhs = g * &h.mats[a.src];
        let num = frob(&(lhs - rhs));
        let den = (tn * frob(f).max(frob(g))).max(1.0);
        worst = worst.max(num / den);
    }
    worst
}
