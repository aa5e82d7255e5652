//! Finite subspace systems `(H; E_1, ..., E_n)`, their endomorphism algebras
//! `{T : T E_i ⊂ E_i}`, and the algebra map from the Kronecker representation of a pair.

use crate::builders::{subspace_inclusion_rep, SubspaceRepSpec};
use crate::error::{Error, Result};
use crate::hom::end_basis_with;
use crate::linalg::{self, CMat, Tolerances, C64};
use crate::quiver::Quiver;
use crate::rep::Rep;

use super::pairs::OperatorPair;
use super::sequence::SequenceSpec;

/// Subspaces of `C^ambient`, each stored as an injection with orthonormal columns.
#[derive(Debug, Clone)]
pub struct SubspaceSystem {
    pub ambient: usize,
    pub subspaces: Vec<CMat>,
    pub names: Vec<String>,
}

impl SubspaceSystem {
    /// Orthonormalize spanning matrices and wrap them.
    pub fn from_spans(ambient: usize, names: Vec<String>, spans: Vec<CMat>) -> Result<SubspaceSystem> {
        if names.len() != spans.len() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} subspaces",
                names.len(),
                spans.len()
            )));
        }
        let tol = Tolerances::default();
        let mut subspaces = Vec::with_capacity(spans.len());
        for (n, m) in names.iter().zip(&spans) {
            if m.nrows() != ambient {
                return Err(Error::DimsMismatch(format!(
                    "subspace `{n}` has {} rows, ambient is {ambient}",
                    m.nrows()
                )));
            }
            subspaces.push(linalg::orth_columns(m, tol.rel));
        }
        Ok(SubspaceSystem {
            ambient,
            subspaces,
            names,
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(|j| j.ncols()).collect()
    }

    /// The subspace-quiver representation: vertex per subspace, ambient vertex `H`,
    /// inclusion arrows `f_i : E_i -> H`.
    pub fn inclusion_spec(&self) -> Result<SubspaceRepSpec> {
        let mut verts = self.names.clone();
        verts.push("H".into());
        let arrows = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (format!("f{}", i + 1), n.clone(), "H".to_string()));
        let quiver = Quiver::new(&format!("R{}", self.names.len()), verts.clone(), arrows)?;
        let mut subspaces: Vec<(String, CMat)> = self.names.iter().cloned().zip(self.subspaces.iter().cloned()).collect();
        subspaces.push(("H".into(), linalg::eye(self.ambient)));
        Ok(SubspaceRepSpec {
            ambient: self.ambient,
            subspaces,
            quiver,
            vertex_spaces: verts,
        })
    }

    pub fn inclusion_rep(&self, tol: &Tolerances) -> Result<Rep> {
        subspace_inclusion_rep(&self.inclusion_spec()?, tol)
    }

    /// `max_i ||(I - P_i) T P_i|| / max(1, ||T||)`.
    pub fn invariance_residual(&self, t: &CMat) -> f64 {
        let scale = linalg::frob(t).max(1.0);
        self.subspaces
            .iter()
            .map(|j| {
                let tj = t * j;
                let off = &tj - j * (j.adjoint() * &tj);
                linalg::frob(&off) / scale
            })
            .fold(0.0, f64::max)
    }
}

/// `E_1 = K ⊕ 0`, `E_2 = 0 ⊕ K`, `E_3 = {(Ax, Bx)}`, `E_4 = {(x, x)}` in `K ⊕ K`.
pub fn four_subspace_from_pair(p: &OperatorPair) -> SubspaceSystem {
    let n = p.size();
    let i = linalg::eye(n);
    let z = CMat::zeros(n, n);
    let spans = vec![
        linalg::vstack(&[i.clone(), z.clone()], n),
        linalg::vstack(&[z, i.clone()], n),
        linalg::vstack(&[p.a.clone(), p.b.clone()], n),
        linalg::vstack(&[i.clone(), i], n),
    ];
    let names = ["E1", "E2", "E3", "E4"].iter().map(|s| s.to_string()).collect();
    SubspaceSystem::from_spans(2 * n, names, spans).expect("shapes agree by construction")
}

/// Orthonormal basis of `{T : T E_i ⊂ E_i for all i}`.
#[derive(Debug, Clone)]
pub struct SubspaceEnd {
    pub basis: Vec<CMat>,
    pub dim: usize,
    pub max_residual: f64,
}

/// Solve `U_i^H T J_i = 0` with `U_i` an orthonormal basis of `E_i^⊥`.
pub fn subspace_system_end(s: &SubspaceSystem, tol: &Tolerances) -> SubspaceEnd {
    let amb = s.ambient;
    let mut blocks = Vec::new();
    for j in &s.subspaces {
        let u = linalg::complement_basis(j, tol.nullspace_factor);
        if u.ncols() == 0 || j.ncols() == 0 {
            continue;
        }
        blocks.push(linalg::kron(&u.adjoint(), &j.transpose()));
    }
    let sys = linalg::vstack(&blocks, amb * amb);
    let null = if sys.nrows() == 0 {
        linalg::eye(amb * amb)
    } else {
        linalg::nullspace(&sys, tol.nullspace_factor)
    };
    let basis: Vec<CMat> = (0..null.ncols())
        .map(|c| {
            let col: Vec<C64> = null.column(c).iter().copied().collect();
            linalg::unflatten(&col, amb, amb)
        })
        .collect();
    let max_residual = basis.iter().map(|t| s.invariance_residual(t)).fold(0.0, f64::max);
    SubspaceEnd {
        dim: basis.len(),
        basis,
        max_residual,
    }
}

/// Agreement between the projection solve and the End of the inclusion representation.
#[derive(Debug, Clone, Copy)]
pub struct EndCrossCheck {
    pub projection_dim: usize,
    pub rep_dim: usize,
    /// Invariance residual of the ambient components of the representation basis.
    pub rep_residual: f64,
    pub projection_residual: f64,
}

impl EndCrossCheck {
    pub fn agrees(&self, tol: &Tolerances) -> bool {
        self.projection_dim == self.rep_dim
            && self.rep_residual <= tol.residual
            && self.projection_residual <= tol.residual
    }
}

pub fn cross_check_end(s: &SubspaceSystem, tol: &Tolerances) -> Result<EndCrossCheck> {
    let proj = subspace_system_end(s, tol);
    let rep = s.inclusion_rep(tol)?;
    let end = end_basis_with(&rep, tol)?;
    let h = rep.quiver().vertex_index("H")?;
    let rep_residual = end
        .basis
        .iter()
        .map(|t| s.invariance_residual(&t.mats[h]))
        .fold(0.0, f64::max);
    Ok(EndCrossCheck {
        projection_dim: proj.dim,
        rep_dim: end.dim,
        rep_residual,
        projection_residual: proj.max_residual,
    })
}

/// The map `(S, T) -> T ⊕ T` from the End of the Kronecker representation of `(A, B)` to
/// the End of its four-subspace system.
#[derive(Debug, Clone)]
pub struct PhiReport {
    pub end_rep_dim: usize,
    pub end_system_dim: usize,
    pub image_dim: usize,
    pub ker_dim: usize,
    /// `N * dim(ker A ∩ ker B)`.
    pub expected_ker_dim: usize,
    pub injective: bool,
    /// `dim End(S) == dim End(H, f) - ker_dim`.
    pub surjective: bool,
    /// Largest invariance residual of an image element.
    pub membership_residual: f64,
}

impl PhiReport {
    pub fn kernel_matches(&self) -> bool {
        self.ker_dim == self.expected_ker_dim
    }
}

pub fn phi_map(p: &OperatorPair, tol: &Tolerances) -> Result<PhiReport> {
    let n = p.size();
    let rep = p.kronecker_rep();
    let end = end_basis_with(&rep, tol)?;
    let system = four_subspace_from_pair(p);
    let end_s = subspace_system_end(&system, tol);
    let mut cols = Vec::with_capacity(end.dim);
    let mut membership_residual: f64 = 0.0;
    for e in &end.basis {
        let t = &e.mats[1];
        let img = linalg::block_diag(&[t.clone(), t.clone()]);
        membership_residual = membership_residual.max(system.invariance_residual(&img));
        let mut flat = Vec::with_capacity(4 * n * n);
        linalg::flatten_into(&img, &mut flat);
        cols.push(CMat::from_vec(flat.len(), 1, flat));
    }
    let image_dim = if cols.is_empty() {
        0
    } else {
        linalg::rank(&linalg::hstack(&cols, 4 * n * n), tol.nullspace_factor)
    };
    let stacked = linalg::vstack(&[p.a.clone(), p.b.clone()], n);
    let common_kernel = linalg::nullspace(&stacked, tol.nullspace_factor).ncols();
    let ker_dim = end.dim - image_dim;
    Ok(PhiReport {
        end_rep_dim: end.dim,
        end_system_dim: end_s.dim,
        image_dim,
        ker_dim,
        expected_ker_dim: n * common_kernel,
        injective: ker_dim == 0,
        surjective: end_s.dim == image_dim,
        membership_residual,
    })
}

/// Truncated four-subspace system of a bilateral weighted shift with weights
/// `w_n = exp((-1)^n n!)` for `n > 0` and `1` otherwise, on the window
/// `n = -floor((N-1)/2), ..., N - 1 - floor((N-1)/2)`.
#[derive(Debug, Clone)]
pub struct HrrSystem {
    pub system: SubspaceSystem,
    pub window: Vec<i64>,
    /// `log w_n` for each window index.
    pub log_weights: Vec<f64>,
}

pub fn hrr_system(n: usize) -> Result<HrrSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument("the window needs at least 2 points".into()));
    }
    let lo = -(((n - 1) / 2) as i64);
    let window: Vec<i64> = (0..n as i64).map(|i| lo + i).collect();
    let seq = SequenceSpec::Hrr;
    let log_weights: Vec<f64> = window.iter().map(|&k| seq.log_abs(k)).collect::<Result<_>>()?;
    let i = linalg::eye(n);
    let z = CMat::zeros(n, n);
    // Graph columns (e_i, w_i e_{i+1}) / sqrt(1 + w_i^2), computed without forming w_i.
    let mut graph = CMat::zeros(2 * n, n);
    for c in 0..n {
        if c + 1 == n {
            graph[(c, c)] = linalg::ONE;
            continue;
        }
        let lw = log_weights[c];
        let (top, bottom) = if lw > 0.0 {
            let r = (-lw).exp();
            (r / (1.0 + r * r).sqrt(), 1.0 / (1.0 + r * r).sqrt())
        } else {
            let r = lw.exp();
            (1.0 / (1.0 + r * r).sqrt(), r / (1.0 + r * r).sqrt())
        };
        graph[(c, c)] = linalg::real(top);
        graph[(n + c + 1, c)] = linalg::real(bottom);
    }
    let spans = vec![
        linalg::vstack(&[i.clone(), z.clone()], n),
        linalg::vstack(&[z, i.clone()], n),
        graph,
        linalg::vstack(&[i.clone(), i], n),
    ];
    let names = ["E1", "E2", "E3", "E4"].iter().map(|s| s.to_string()).collect();
    Ok(HrrSystem {
        system: SubspaceSystem::from_spans(2 * n, names, spans)?,
        window,
        log_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::opmodels::pairs::jordan;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn operator_system_of_jordan() {
        for k in 1..=4 {
            let p = OperatorPair::new(linalg::eye(k), jordan(k, ZERO), "graph").unwrap();
            let s = four_subspace_from_pair(&p);
            let e = subspace_system_end(&s, &tol());
            assert_eq!(e.dim, k);
            assert!(e.max_residual < 1e-10);
            assert!(cross_check_end(&s, &tol()).unwrap().agrees(&tol()));
        }
    }

    #[test]
    fn identity_pair_and_ranks() {
        let p = OperatorPair::new(linalg::eye(2), linalg::eye(2), "id").unwrap();
        let s = four_subspace_from_pair(&p);
        let d = s.subspaces[2].clone() - s.subspaces[3].clone();
        assert!(linalg::frob(&d) < 1e-12);
        let a = linalg::diag(&[ONE, ZERO, ZERO]);
        let p = OperatorPair::new(a.clone(), a, "rank1").unwrap();
        assert_eq!(four_subspace_from_pair(&p).subspaces[2].ncols(), 1);
    }

    #[test]
    fn unconstrained_system() {
        let s = SubspaceSystem::from_spans(3, vec!["A".into(), "B".into()], vec![linalg::eye(3), linalg::eye(3)]).unwrap();
        assert_eq!(subspace_system_end(&s, &tol()).dim, 9);
    }

    #[test]
    fn random_systems_cross_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..10 {
            let amb = 3 + trial % 2;
            let spans: Vec<CMat> = (0..3)
                .map(|i| linalg::gaussian_matrix(&mut rng, amb, 1 + (i + trial) % (amb - 1)))
                .collect();
            let names = vec!["A".into(), "B".into(), "C".into()];
            let s = SubspaceSystem::from_spans(amb, names, spans).unwrap();
            let cc = cross_check_end(&s, &tol()).unwrap();
            assert!(cc.agrees(&tol()), "{cc:?}");
        }
    }

    #[test]
    fn phi_kernel() {
        let a = linalg::diag(&[ONE, ZERO]);
        let p = OperatorPair::new(a.clone(), a, "diag10").unwrap();
        let r = phi_map(&p, &tol()).unwrap();
        assert_eq!(r.ker_dim, 2);
        assert!(r.kernel_matches() && r.surjective);
        assert!(r.membership_residual < 1e-10);
        let p = OperatorPair::new(linalg::eye(2), linalg::eye(2), "id").unwrap();
        let r = phi_map(&p, &tol()).unwrap();
        assert!(r.injective && r.surjective);
        assert_eq!(r.end_rep_dim, r.end_system_dim);
    }

    #[test]
    fn hrr_window() {
        let h = hrr_system(5).unwrap();
        assert_eq!(h.window, vec![-2, -1, 0, 1, 2]);
        assert_eq!(h.log_weights, vec![0.0, 0.0, 0.0, -1.0, 2.0]);
        assert_eq!(h.system.subspaces[2].ncols(), 5);
        let big = hrr_system(12).unwrap();
        let e = subspace_system_end(&big.system, &tol());
        assert!(e.dim >= 1 && e.max_residual < 1e-8);
        assert!(linalg::is_finite(&big.system.subspaces[2]));
    }
}
