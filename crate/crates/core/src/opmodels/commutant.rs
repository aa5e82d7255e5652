//! Commutants `{X : AX = XA}` and strong irreducibility (no idempotents in the commutant
//! other than 0 and I).

use crate::hom::{indecomposability_from_end, HomBasis, Verdict, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Tolerances, C64};
use crate::quiver::Quiver;
use crate::rep::{Hom, Rep};

/// Orthonormal basis (Frobenius) of the commutant of a square matrix, from the nullspace
/// of `A ⊗ I - I ⊗ A^T` acting on row-major vectorizations.
pub fn commutant_basis(a: &CMat, tol: &Tolerances) -> Result<Vec<CMat>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument(format!("commutant needs a square matrix, got {:?}", a.shape())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let i = linalg::eye(n);
    let sys = linalg::kron(a, &i) - linalg::kron(&i, &a.transpose());
    let null = linalg::nullspace(&sys, tol.nullspace_factor);
    Ok((0..null.ncols())
        .map(|c| {
            let col: Vec<C64> = null.column(c).iter().copied().collect();
            linalg::unflatten(&col, n, n)
        })
        .collect())
}

/// The one-vertex representation with a single loop carrying `a`; its End is `{a}'`.
pub fn loop_rep(a: &CMat) -> Result<Rep> {
    let q = Quiver::from_strs("loop", &["1"], &[("l", "1", "1")])?;
    Rep::new(q, vec![a.nrows()], vec![a.clone()])
}

#[derive(Debug, Clone)]
pub struct StrongIrreducibility {
    pub strongly_irreducible: bool,
    pub commutant_dim: usize,
    /// A nontrivial idempotent commuting with the input, when one was found.
    pub witness: Option<CMat>,
    pub trials_used: usize,
}

pub fn is_strongly_irreducible(a: &CMat, seed: u64, tol: &Tolerances) -> Result<StrongIrreducibility> {
    let rep = loop_rep(a)?;
    let basis = commutant_basis(a, tol)?;
    let max_residual = basis
        .iter()
        .map(|x| linalg::frob(&(a * x - x * a)))
        .fold(0.0, f64::max);
    let end = HomBasis {
        source: rep.clone(),
        target: rep,
        dim: basis.len(),
        basis: basis.into_iter().map(|x| Hom::new(vec![x])).collect(),
        tol_used: tol.nullspace_factor,
        max_residual,
        solved_unknowns: a.nrows() * a.nrows(),
    };
    let v = indecomposability_from_end(&end, seed, DEFAULT_TRIALS, tol);
    let witness = match v.verdict {
        Verdict::Decomposable(p) => p.mats.into_iter().next(),
        _ => None,
    };
    Ok(StrongIrreducibility {
        strongly_irreducible: witness.is_none() && a.nrows() > 0,
        commutant_dim: end.dim,
        witness,
        trials_used: v.trials_used,
    })
}
