//! Explicit representations of extended Dynkin quivers built from subspace families of
//! `K^m`, `K = C^k`, with every arrow an inclusion. The operator parameter `s` enters
//! through a graph subspace `{(x, s x)}`; the endomorphism algebra of the result is
//! isomorphic to the commutant of `s`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Tolerances};
use crate::quiver::Quiver;
use crate::rep::Rep;

/// A family of subspaces of `C^ambient` attached to the vertices of a quiver.
#[derive(Debug, Clone)]
pub struct SubspaceRepSpec {
    pub ambient: usize,
    /// Named subspaces given by injection matrices `ambient x d` of full column rank.
    pub subspaces: Vec<(String, CMat)>,
    pub quiver: Quiver,
    /// Subspace name per vertex, in quiver order. Each arrow is the inclusion of the
    /// source vertex's subspace into the range vertex's subspace.
    pub vertex_spaces: Vec<String>,
}

impl SubspaceRepSpec {
    pub fn injection(&self, name: &str) -> Result<&CMat> {
        self.subspaces
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown subspace `{name}`")))
    }

    /// `(source subspace, target subspace)` for every arrow.
    pub fn arrow_assignments(&self) -> Vec<(String, String)> {
        self.quiver
            .arrows()
            .iter()
            .map(|a| (self.vertex_spaces[a.src].clone(), self.vertex_spaces[a.dst].clone()))
            .collect()
    }
}

/// Relative residual `||(I - P_t) J_s|| / max(1, ||J_s||)`.
pub fn inclusion_residual(j_source: &CMat, j_target: &CMat) -> f64 {
    let f = Tolerances::default().nullspace_factor;
    let coords = linalg::pinv(j_target, f) * j_source;
    let res = j_source - j_target * &coords;
    linalg::frob(&res) / linalg::frob(j_source).max(1.0)
}

/// The representation whose arrow matrices are the coordinate matrices `J_t^+ J_s` of the
/// inclusions.
pub fn subspace_inclusion_rep(spec: &SubspaceRepSpec, tol: &Tolerances) -> Result<Rep> {
    let q = &spec.quiver;
    if spec.vertex_spaces.len() != q.n_vertices() {
        return Err(Error::DimsMismatch(format!(
            "{} subspace assignments for {} vertices",
            spec.vertex_spaces.len(),
            q.n_vertices()
        )));
    }
    for (name, j) in &spec.subspaces {
        if j.nrows() != spec.ambient {
            return Err(Error::DimsMismatch(format!(
                "subspace `{name}` has {} rows, ambient is {}",
                j.nrows(),
                spec.ambient
            )));
        }
    }
    let mut dims = Vec::with_capacity(q.n_vertices());
    for name in &spec.vertex_spaces {
        dims.push(spec.injection(name)?.ncols());
    }
    let f = tol.nullspace_factor;
    let mut mats = Vec::with_capacity(q.arrows().len());
    for (s, t) in spec.arrow_assignments() {
        let js = spec.injection(&s)?;
        let jt = spec.injection(&t)?;
        let residual = inclusion_residual(js, jt);
        if residual > tol.residual {
            return Err(Error::InclusionViolated {
                source_space: s,
                target: t,
                residual,
            });
        }
        mats.push(linalg::pinv(jt, f) * js);
    }
    Rep::new(q.clone(), dims, mats)
}

/// Extended Dynkin families with a fixed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `D~n`, `n >= 4`, on `n + 1` vertices.
    DTilde(usize),
    E6Tilde,
    E7Tilde,
    E8Tilde,
}

impl Family {
    /// `d4tilde`, `dNtilde`, `e6tilde`, `e7tilde`, `e8tilde`.
    pub fn parse(text: &str) -> Result<Family> {
        let t = text.trim().to_ascii_lowercase();
        match t.as_str() {
            "e6tilde" => Ok(Family::E6Tilde),
            "e7tilde" => Ok(Family::E7Tilde),
            "e8tilde" => Ok(Family::E8Tilde),
            _ => t
                .strip_prefix('d')
                .and_then(|r| r.strip_suffix("tilde"))
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 4)
                .map(Family::DTilde)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{text}`"))),
        }
    }

    /// Number of copies of `K` in the ambient space.
    pub fn ambient_copies(&self) -> usize {
        match self {
            Family::DTilde(_) => 2,
            Family::E6Tilde => 3,
            Family::E7Tilde => 4,
            Family::E8Tilde => 6,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::DTilde(n) => write!(f, "d{n}tilde"),
            Family::E6Tilde => f.write_str("e6tilde"),
            Family::E7Tilde => f.write_str("e7tilde"),
            Family::E8Tilde => f.write_str("e8tilde"),
        }
    }
}

#[derive(Clone, Copy)]
enum Blk {
    Z,
    I,
    S,
}

use Blk::{I, S, Z};

/// Spanning matrix with `k x k` blocks.
fn span(rows: &[&[Blk]], s: &CMat) -> CMat {
    let k = s.nrows();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut m = CMat::zeros(rows.len() * k, nc * k);
    for (i, row) in rows.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            let blk = match b {
                Z => continue,
                I => linalg::eye(k),
                S => s.clone(),
            };
            m.view_mut((i * k, j * k), (k, k)).copy_from(&blk);
        }
    }
    m
}

type Layout = (Vec<String>, Vec<(String, String, String)>, Vec<(String, CMat)>);

fn layout(family: Family, s: &CMat) -> Result<Layout> {
    let str3 = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
    let full = |m: usize| {
        let rows: Vec<Vec<Blk>> = (0..m).map(|i| (0..m).map(|j| if i == j { I } else { Z }).collect()).collect();
        let refs: Vec<&[Blk]> = rows.iter().map(|r| r.as_slice()).collect();
        span(&refs, s)
    };
    Ok(match family {
        Family::DTilde(n) => {
            if n < 4 {
                return Err(Error::InvalidArgument(format!("D~{n} needs n >= 4")));
            }
            let verts: Vec<String> = (1..=n + 1).map(|i| i.to_string()).collect();
            let last = (n + 1).to_string();
            let mut arrows = vec![str3("alpha1", "1", "5"), str3("alpha2", "2", "5")];
            for i in 5..=n {
                arrows.push((format!("beta{i}"), i.to_string(), (i + 1).to_string()));
            }
            arrows.push(str3("alpha3", "3", &last));
            arrows.push(str3("alpha4", "4", &last));
            let mut spaces = vec![
                ("1".to_string(), span(&[&[I], &[Z]], s)),
                ("2".to_string(), span(&[&[Z], &[I]], s)),
                ("3".to_string(), span(&[&[I], &[S]], s)),
                ("4".to_string(), span(&[&[I], &[I]], s)),
            ];
            for i in 5..=n + 1 {
                spaces.push((i.to_string(), full(2)));
            }
            (verts, arrows, spaces)
        }
        Family::E6Tilde => {
            let verts = ["0", "1", "2", "1'", "2'", "1''", "2''"];
            let arrows = vec![
                str3("a1", "1", "0"),
                str3("a2", "2", "1"),
                str3("b1", "1'", "0"),
                str3("b2", "2'", "1'"),
                str3("c1", "1''", "0"),
                str3("c2", "2''", "1''"),
            ];
            let spaces = vec![
                ("0", full(3)),
                ("1", span(&[&[Z, Z], &[I, Z], &[Z, I]], s)),
                ("2", span(&[&[Z], &[I], &[S]], s)),
                ("1'", span(&[&[I, Z], &[Z, I], &[Z, Z]], s)),
                ("2'", span(&[&[I], &[I], &[Z]], s)),
                ("1''", span(&[&[I, Z], &[Z, Z], &[Z, I]], s)),
                ("2''", span(&[&[I], &[Z], &[I]], s)),
            ];
            named(&verts, arrows, spaces)
        }
        Family::E7Tilde => {
            let verts = ["0", "1", "2", "3", "1'", "2'", "3'", "1''"];
            let arrows = vec![
                str3("a1", "1", "0"),
                str3("a2", "2", "1"),
                str3("a3", "3", "2"),
                str3("b1", "1'", "0"),
                str3("b2", "2'", "1'"),
                str3("b3", "3'", "2'"),
                str3("c1", "1''", "0"),
            ];
            let spaces = vec![
                ("0", full(4)),
                ("1", span(&[&[I, Z, Z], &[Z, Z, Z], &[Z, I, Z], &[Z, Z, I]], s)),
                ("2", span(&[&[I, Z], &[Z, Z], &[Z, I], &[Z, I]], s)),
                ("3", span(&[&[I], &[Z], &[Z], &[Z]], s)),
                ("1'", span(&[&[Z, Z, Z], &[I, Z, Z], &[Z, I, Z], &[Z, Z, I]], s)),
                ("2'", span(&[&[Z, Z], &[I, Z], &[Z, I], &[Z, S]], s)),
                ("3'", span(&[&[Z], &[I], &[Z], &[Z]], s)),
                ("1''", span(&[&[I, Z], &[Z, I], &[I, Z], &[Z, I]], s)),
            ];
            named(&verts, arrows, spaces)
        }
        Family::E8Tilde => {
            let verts = ["0", "1", "2", "3", "4", "5", "1'", "2'", "1''"];
            let arrows = vec![
                str3("a1", "1", "0"),
                str3("a2", "2", "1"),
                str3("a3", "3", "2"),
                str3("a4", "4", "3"),
                str3("a5", "5", "4"),
                str3("b1", "1'", "0"),
                str3("b2", "2'", "1'"),
                str3("c1", "1''", "0"),
            ];
            let spaces = vec![
                ("0", full(6)),
                (
                    "1",
                    span(
                        &[
                            &[I, Z, Z, Z, Z],
                            &[I, Z, Z, Z, Z],
                            &[Z, I, Z, Z, Z],
                            &[Z, Z, I, Z, Z],
                            &[Z, Z, Z, I, Z],
                            &[Z, Z, Z, Z, I],
                        ],
                        s,
                    ),
                ),
                (
                    "2",
                    span(
                        &[&[Z, Z, Z, Z], &[Z, Z, Z, Z], &[I, Z, Z, Z], &[Z, I, Z, Z], &[Z, Z, I, Z], &[Z, Z, Z, I]],
                        s,
                    ),
                ),
                (
                    "3",
                    span(&[&[Z, Z, Z], &[Z, Z, Z], &[Z, Z, Z], &[I, Z, Z], &[Z, I, Z], &[Z, Z, I]], s),
                ),
                ("4", span(&[&[Z, Z], &[Z, Z], &[Z, Z], &[I, Z], &[Z, I], &[Z, S]], s)),
                ("5", span(&[&[Z], &[Z], &[Z], &[I], &[Z], &[Z]], s)),
                (
                    "1'",
                    span(
                        &[&[I, Z, Z, Z], &[Z, I, Z, Z], &[Z, Z, I, Z], &[Z, Z, Z, I], &[Z, Z, I, Z], &[Z, Z, Z, I]],
                        s,
                    ),
                ),
                ("2'", span(&[&[I, Z], &[Z, I], &[Z, Z], &[Z, Z], &[Z, Z], &[Z, Z]], s)),
                // columns (x, y, z) -> (y, z, x, 0, y, z)
                ("1''", span(&[&[Z, I, Z], &[Z, Z, I], &[I, Z, Z], &[Z, Z, Z], &[Z, I, Z], &[Z, Z, I]], s)),
            ];
            named(&verts, arrows, spaces)
        }
    })
}

fn named(verts: &[&str], arrows: Vec<(String, String, String)>, spaces: Vec<(&str, CMat)>) -> Layout {
    (
        verts.iter().map(|v| v.to_string()).collect(),
        arrows,
        spaces.into_iter().map(|(n, m)| (n.to_string(), m)).collect(),
    )
}

/// The subspace specification of a family with operator parameter `s` (`k x k`, `k >= 1`).
/// Injections are orthonormalized.
pub fn extended_dynkin_spec(family: Family, s: &CMat) -> Result<SubspaceRepSpec> {
    if s.nrows() != s.ncols() || s.nrows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "operator parameter must be square and nonempty, got {:?}",
            s.shape()
        )));
    }
    if !linalg::is_finite(s) {
        return Err(Error::NonFinite("s".into()));
    }
    let (verts, arrows, spaces) = layout(family, s)?;
    let quiver = Quiver::new(&family.to_string(), verts.clone(), arrows)?;
    let tol = Tolerances::default();
    let subspaces = spaces
        .into_iter()
        .map(|(n, m)| (n, linalg::orth_columns(&m, tol.rel)))
        .collect();
    Ok(SubspaceRepSpec {
        ambient: family.ambient_copies() * s.nrows(),
        subspaces,
        quiver,
        vertex_spaces: verts,
    })
}

pub fn build_extended_dynkin(family: Family, s: &CMat) -> Result<Rep> {
    subspace_inclusion_rep(&extended_dynkin_spec(family, s)?, &Tolerances::default())
}

/// Arrows of a non-oriented cyclic quiver chosen to carry the pair.
#[derive(Debug, Clone)]
pub struct AnTildeBuild {
    pub rep: Rep,
    /// Arrow carrying `a`; traversed forward along the cycle walk.
    pub forward_arrow: String,
    /// Arrow carrying `b`; traversed backward.
    pub backward_arrow: String,
}

/// Walk the underlying cycle from vertex 0; returns `(arrow index, traversed forward)`.
fn cycle_walk(q: &Quiver) -> Result<Vec<(usize, bool)>> {
    let n = q.n_vertices();
    let bad = |m: &str| Error::InvalidOrientation(m.to_string());
    if q.arrows().len() != n || !q.is_connected() {
        return Err(bad("underlying graph is not a single cycle"));
    }
    let mut deg = vec![0usize; n];
    for a in q.arrows() {
        deg[a.src] += 1;
        deg[a.dst] += 1;
    }
    if deg.iter().any(|&d| d != 2) {
        return Err(bad("underlying graph is not a single cycle"));
    }
    let mut used = vec![false; n];
    let mut walk = Vec::with_capacity(n);
    let mut v = 0;
    for _ in 0..n {
        let (i, a) = q
            .arrows()
            .iter()
            .enumerate()
            .find(|(i, a)| !used[*i] && (a.src == v || a.dst == v))
            .ok_or_else(|| bad("underlying graph is not a single cycle"))?;
        used[i] = true;
        let fwd = a.src == v;
        walk.push((i, fwd));
        v = if fwd { a.dst } else { a.src };
    }
    Ok(walk)
}

/// Identity on every arrow except one forward arrow (carrying `a`) and one backward arrow
/// (carrying `b`) of the cycle walk. Fails for oriented cycles.
pub fn build_an_tilde_noncyclic(q: &Quiver, a: &CMat, b: &CMat) -> Result<AnTildeBuild> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "a and b must be square of equal size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if q.is_oriented_cycle() {
        return Err(Error::OrientedCycle);
    }
    let walk = cycle_walk(q)?;
    let fwd = walk.iter().find(|w| w.1).map(|w| w.0);
    let bwd = walk.iter().find(|w| !w.1).map(|w| w.0);
    let (fa, ba) = match (fwd, bwd) {
        (Some(f), Some(b)) => (f, b),
        _ => return Err(Error::OrientedCycle),
    };
    let k = a.nrows();
    let mats = (0..q.arrows().len())
        .map(|i| {
            if i == fa {
                a.clone()
            } else if i == ba {
                b.clone()
            } else {
                linalg::eye(k)
            }
        })
        .collect();
    let rep = Rep::new(q.clone(), vec![k; q.n_vertices()], mats)?;
    Ok(AnTildeBuild {
        rep,
        forward_arrow: q.arrows()[fa].label(),
        backward_arrow: q.arrows()[ba].label(),
    })
}

/// Quiver on the `n`-cycle `1, ..., n` with arrow `g_i` between `i` and `i + 1 (mod n)`,
/// pointing forward when `forward[i - 1]`.
pub fn cycle_quiver(forward: &[bool]) -> Result<Quiver> {
    let n = forward.len();
    if n == 0 {
        return Err(Error::EmptyQuiver);
    }
    let verts: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows = forward.iter().enumerate().map(|(i, &f)| {
        let (s, t) = ((i + 1).to_string(), ((i + 1) % n + 1).to_string());
        let (s, t) = if f { (s, t) } else { (t, s) };
        (format!("g{}", i + 1), s, t)
    });
    Quiver::new(&format!("cycle{n}"), verts, arrows)
}
