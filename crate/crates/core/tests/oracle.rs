//! End and Hom dimensions of small 0/1 representations against exact integer elimination.

use quiverlab::hom;
use quiverlab::linalg::{real, CMat};
use quiverlab::{Quiver, Rep};

/// Rank over Q by fraction-free elimination.
fn exact_rank(mut m: Vec<Vec<i128>>, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

/// `dim Hom(src, dst)` from integer matrices, unknowns `T_v` row-major in vertex order.
fn exact_hom_dim(q: &Quiver, ds: &[usize], ms: &[Vec<Vec<i128>>], dt: &[usize], mt: &[Vec<Vec<i128>>]) -> usize {
    let mut offs = Vec::new();
    let mut n = 0;
    for v in 0..ds.len() {
        offs.push(n);
        n += dt[v] * ds[v];
    }
    let mut rows = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.src, a.dst);
        // T_t * X_a - Y_a * T_s = 0, entries (i, j) with i < dt[t], j < ds[s]
        for i in 0..dt[t] {
            for j in 0..ds[s] {
                let mut row = vec![0i128; n];
                for k in 0..ds[t] {
                    row[offs[t] + i * ds[t] + k] += ms[ai][k][j];
                }
                for k in 0..dt[s] {
                    row[offs[s] + k * ds[s] + j] -= mt[ai][i][k];
                }
                rows.push(row);
            }
        }
    }
    n - exact_rank(rows, n)
}

fn to_cmat(m: &[Vec<i128>], r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |i, j| real(m[i][j] as f64))
}

fn binary_mats(r: usize, c: usize) -> Vec<Vec<Vec<i128>>> {
    (0..1u32 << (r * c))
        .map(|mask| (0..r).map(|i| (0..c).map(|j| (mask >> (i * c + j) & 1) as i128).collect()).collect())
        .collect()
}

type Sample = (Vec<usize>, Vec<Vec<Vec<i128>>>, Rep);

fn all_reps(q: &Quiver, max_dim: usize) -> Vec<Sample> {
    let nv = q.n_vertices();
    let mut out = Vec::new();
    for dmask in 0..(max_dim + 1).pow(nv as u32) {
        let dims: Vec<usize> = (0..nv).map(|v| dmask / (max_dim + 1).pow(v as u32) % (max_dim + 1)).collect();
        let mut tuples: Vec<Vec<Vec<Vec<i128>>>> = vec![Vec::new()];
        for a in q.arrows() {
            let choices = binary_mats(dims[a.dst], dims[a.src]);
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    choices.iter().map(move |m| {
                        let mut t = t.clone();
                        t.push(m.clone());
                        t
                    })
                })
                .collect();
        }
        for mats in tuples {
            let cm = q
                .arrows()
                .iter()
                .zip(&mats)
                .map(|(a, m)| to_cmat(m, dims[a.dst], dims[a.src]))
                .collect();
            let rep = Rep::new(q.clone(), dims.clone(), cm).unwrap();
            out.push((dims.clone(), mats, rep));
        }
    }
    out
}

fn check_end_dims(q: &Quiver) -> usize {
    let reps = all_reps(q, 2);
    for (dims, mats, rep) in &reps {
        let exact = exact_hom_dim(q, dims, mats, dims, mats);
        assert_eq!(hom::end_basis(rep).unwrap().dim, exact, "dims {dims:?} mats {mats:?}");
    }
    reps.len()
}

#[test]
fn kronecker_end_dims_exact() {
    assert_eq!(check_end_dims(&Quiver::kronecker()), 297);
}

#[test]
fn two_cycle_end_dims_exact() {
    assert_eq!(check_end_dims(&Quiver::cycle(2)), 297);
}

#[test]
fn kronecker_hom_dims_exact() {
    let q = Quiver::kronecker();
    let reps = all_reps(&q, 1);
    let extra: Vec<Sample> = all_reps(&q, 2).into_iter().step_by(97).collect();
    let all: Vec<&Sample> = reps.iter().chain(&extra).collect();
    for (ds, ms, rs) in &all {
        for (dt, mt, rt) in &all {
            let exact = exact_hom_dim(&q, ds, ms, dt, mt);
            assert_eq!(hom::hom_basis(rs, rt).unwrap().dim, exact, "{ds:?}->{dt:?}");
        }
    }
}
