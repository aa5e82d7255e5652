//! Seeded verification suites. Each check is deterministic in `(trials, seed, tol)`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builders::{build_an_tilde_noncyclic, build_extended_dynkin, cycle_quiver, Family};
use crate::cyclic::{self, CycleRep};
use crate::error::{Error, Result};
use crate::hom::{self, end_basis_with, Verdict};
use crate::linalg::{self, CMat, Tolerances, ONE, ZERO};
use crate::opmodels::{self, commutant_basis, OperatorPair, SequenceSpec};
use crate::quiver::Quiver;
use crate::reflection::{self, Direction};
use crate::rep::{hom_residual, Rep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Reflection,
    Cyclic,
    Operator,
    Builders,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s {
            "reflection" => Ok(Suite::Reflection),
            "cyclic" => Ok(Suite::Cyclic),
            "operator" => Ok(Suite::Operator),
            "builders" => Ok(Suite::Builders),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidArgument(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Reflection => "reflection",
            Suite::Cyclic => "cyclic",
            Suite::Operator => "operator",
            Suite::Builders => "builders",
            Suite::All => "all",
        })
    }
}

/// One named check with its verdict and supporting numbers.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub details: BTreeMap<String, String>,
}

impl Check {
    fn new(suite: &'static str, name: &'static str) -> Check {
        Check {
            suite,
            name,
            passed: true,
            details: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.details.insert(key.to_string(), value.to_string());
    }

    fn require(&mut self, ok: bool) {
        self.passed &= ok;
    }

    pub fn key(&self) -> String {
        format!("{}.{}", self.suite, self.name)
    }
}

/// Fixed formatting for residuals in reports.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn rng_for(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_rep<R: Rng>(q: Quiver, dims: Vec<usize>, rng: &mut R) -> Rep {
    let mats = q
        .arrows()
        .iter()
        .map(|a| linalg::gaussian_matrix(rng, dims[a.dst], dims[a.src]))
        .collect();
    Rep::new(q, dims, mats).expect("shapes follow the dimension vector")
}

/// Four leaves `1..4` around vertex `5`; arrows point into `5` when `into_center`.
pub fn star_quiver(into_center: bool) -> Quiver {
    let arrows = (1..=4).map(|i| {
        let (s, t) = if into_center {
            (i.to_string(), "5".to_string())
        } else {
            ("5".to_string(), i.to_string())
        };
        (format!("alpha{i}"), s, t)
    });
    Quiver::new("d4tilde", (1..=5).map(|i| i.to_string()), arrows).expect("static quiver")
}

/// Random rep full at its sink: Kronecker `1 => 2` or the star with sink `5`.
fn full_sink_instance<R: Rng>(rng: &mut R, i: usize) -> (Rep, &'static str) {
    if i % 2 == 0 {
        let d2: usize = rng.random_range(1..=4);
        let d1 = rng.random_range(d2.div_ceil(2)..=4);
        (random_rep(Quiver::kronecker(), vec![d1, d2], rng), "2")
    } else {
        let c = rng.random_range(1..=4);
        let mut leaves: Vec<usize> = (0..4).map(|_| rng.random_range(0..=3)).collect();
        while leaves.iter().sum::<usize>() < c {
            let j = rng.random_range(0..4);
            leaves[j] = (leaves[j] + 1).min(3);
        }
        leaves.push(c);
        (random_rep(star_quiver(true), leaves, rng), "5")
    }
}

pub fn run(suite: Suite, trials: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Reflection | Suite::All) {
        out.extend(reflection_suite(trials, seed, tol)?);
    }
    if matches!(suite, Suite::Cyclic | Suite::All) {
        out.extend(cyclic_suite(trials, seed, tol)?);
    }
    if matches!(suite, Suite::Operator | Suite::All) {
        out.extend(operator_suite(trials, seed, tol)?);
    }
    if matches!(suite, Suite::Builders | Suite::All) {
        out.extend(builders_suite(seed, tol)?);
    }
    Ok(out)
}

pub fn reflection_suite(trials: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    Ok(vec![
        check_end_iso(Direction::Plus, trials, seed, tol)?,
        check_end_iso(Direction::Minus, trials, seed, tol)?,
        check_round_trip(trials, seed, tol)?,
        check_dual_identity(trials, seed, tol)?,
        check_orientation_change()?,
        check_builder_reflection(tol)?,
    ])
}

/// `dim End` preserved and the transported basis multiplicative, at full sinks (`Plus`) or
/// co-full sources (`Minus`, duals of full-sink samples).
pub fn check_end_iso(direction: Direction, trials: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let name = match direction {
        Direction::Plus => "end_iso_plus",
        Direction::Minus => "end_iso_minus",
    };
    let mut c = Check::new("reflection", name);
    let mut rng = rng_for(seed, 1 + direction as u64);
    let (mut ok, mut skipped) = (0usize, 0usize);
    let (mut mult, mut member) = (0.0f64, 0.0f64);
    for i in 0..trials {
        let (r, v) = full_sink_instance(&mut rng, i);
        let r = match direction {
            Direction::Plus => r,
            Direction::Minus => reflection::dual(&r),
        };
        if !reflection::is_full_at(&r, v, direction, tol)? {
            skipped += 1;
            continue;
        }
        let rep = reflection::verify_end_isomorphism(&r, v, direction, tol)?;
        mult = mult.max(rep.multiplicativity_residual);
        member = member.max(rep.membership_residual);
        if rep.is_isomorphism(tol) {
            ok += 1;
        }
    }
    c.set("instances", trials - skipped);
    c.set("isomorphisms", ok);
    c.set("max_multiplicativity_residual", sci(mult));
    c.set("max_membership_residual", sci(member));
    c.require(ok == trials - skipped && skipped * 10 <= trials);
    Ok(c)
}

/// Indecomposable reps with nonzero `Phi-` at a source come back up to isomorphism.
pub fn check_round_trip(trials: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("reflection", "round_trip");
    let mut rng = rng_for(seed, 3);
    let (mut instances, mut indec_out, mut iso, mut attempts) = (0usize, 0usize, 0usize, 0usize);
    while instances < trials && attempts < 20 * trials.max(1) {
        attempts += 1;
        let (r, v) = if attempts % 2 == 0 {
            let d = rng.random_range(1..=3);
            let dims = if rng.random_bool(0.5) { vec![d, d + 1] } else { vec![d + 1, d] };
            (random_rep(Quiver::kronecker(), dims, &mut rng), "1")
        } else {
            let c = rng.random_range(1..=2);
            let leaves: Vec<usize> = (0..4).map(|_| rng.random_range(0..=1)).collect();
            let mut dims = leaves;
            dims.push(c);
            (random_rep(star_quiver(false), dims, &mut rng), "5")
        };
        let s = attempts as u64;
        if !hom::is_indecomposable_with(&r, seed ^ s, hom::DEFAULT_TRIALS, tol)?.is_indecomposable() {
            continue;
        }
        let minus = reflection::reflect(&r, v, Direction::Minus, tol)?;
        if minus.rep.is_zero() {
            continue;
        }
        instances += 1;
        if hom::is_indecomposable_with(&minus.rep, seed ^ s, hom::DEFAULT_TRIALS, tol)?.is_indecomposable() {
            indec_out += 1;
        }
        let back = reflection::reflect(&minus.rep, v, Direction::Plus, tol)?;
        if hom::find_isomorphism_with(&r, &back.rep, seed ^ s, 8, tol)?.is_some() {
            iso += 1;
        }
    }
    c.set("instances", instances);
    c.set("indecomposable_outputs", indec_out);
    c.set("isomorphic_round_trips", iso);
    c.require(instances == trials && indec_out == instances && iso * 100 >= 99 * instances);
    Ok(c)
}

/// `Phi-(r)` is isomorphic to `dual(Phi+(dual r))`.
pub fn check_dual_identity(trials: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("reflection", "minus_is_dual_plus_dual");
    let mut rng = rng_for(seed, 4);
    let mut iso = 0;
    for i in 0..trials {
        let (r, v) = if i % 2 == 0 {
            let dims = vec![rng.random_range(1..=3), rng.random_range(1..=3)];
            (random_rep(Quiver::kronecker(), dims, &mut rng), "1")
        } else {
            let dims: Vec<usize> = (0..5).map(|_| rng.random_range(0..=3)).collect();
            (random_rep(star_quiver(false), dims, &mut rng), "5")
        };
        let minus = reflection::reflect(&r, v, Direction::Minus, tol)?.rep;
        let plus = reflection::reflect(&reflection::dual(&r), v, Direction::Plus, tol)?.rep;
        let other = reflection::dual(&plus);
        if hom::find_isomorphism_with(&minus, &other, seed ^ i as u64, 8, tol)?.is_some() {
            iso += 1;
        }
    }
    c.set("instances", trials);
    c.set("isomorphic", iso);
    c.require(iso == trials);
    Ok(c)
}

/// Every orientation of `A_n`, `n <= 5`, reached by source reflections avoiding vertex `n`.
pub fn check_orientation_change() -> Result<Check> {
    let mut c = Check::new("reflection", "orientation_change");
    let (mut total, mut ok) = (0usize, 0usize);
    for n in 1..=5usize {
        let m = n.saturating_sub(1);
        for mask in 0..(1u32 << m) {
            total += 1;
            let target: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            let good = reflection::orientation_sequence_an(n, &target)
                .and_then(|seq| {
                    let never_n = seq.iter().all(|&v| v != n);
                    Ok(never_n && reflection::replay_an(n, &seq)? == target)
                })
                .unwrap_or(false);
            if good {
                ok += 1;
            }
        }
    }
    c.set("orientations", total);
    c.set("reached", ok);
    c.require(ok == total);
    Ok(c)
}

/// The `D~4` builder reflected at its full sink keeps `dim End`.
pub fn check_builder_reflection(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("reflection", "builder_d4tilde_sink");
    let r = build_extended_dynkin(Family::DTilde(4), &opmodels::pairs::jordan(2, ZERO))?;
    let rep = reflection::verify_end_isomorphism(&r, "5", Direction::Plus, tol)?;
    c.set("end_dim_before", rep.end_dim_before);
    c.set("end_dim_after", rep.end_dim_after);
    c.set("end_iso", rep.status(tol));
    c.require(rep.hypothesis_holds && rep.is_isomorphism(tol));
    Ok(c)
}

pub fn cyclic_suite(trials: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    Ok(vec![
        check_cn_oracle(tol)?,
        check_classification(2, tol)?,
        check_classification(3, tol)?,
        check_dim_bound(5 * trials, seed, tol)?,
        check_zero_vertex_reduction(trials, seed, tol)?,
    ])
}

fn direct_transitive(r: &CycleRep, tol: &Tolerances) -> Result<bool> {
    if r.rep().is_zero() {
        return Ok(false);
    }
    Ok(hom::is_transitive_with(r.rep(), tol)?.0)
}

/// Criterion against the direct End computation on every binary rep of `C_2, C_3, C_4`.
pub fn check_cn_oracle(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("cyclic", "criterion_vs_direct");
    let (mut total, mut agree, mut transitive) = (0usize, 0usize, 0usize);
    for n in 2..=4 {
        for r in cyclic::enumerate_binary(n) {
            total += 1;
            let d = direct_transitive(&r, tol)?;
            if d == cyclic::cn_transitive_criterion(&r, tol) {
                agree += 1;
            }
            transitive += d as usize;
        }
    }
    c.set("instances", total);
    c.set("agree", agree);
    c.set("transitive", transitive);
    c.require(agree == total);
    Ok(c)
}

/// The transitive binary reps of `C_2` (`C_3`) are exactly those matched by one of the
/// 3 (7) classification cases, and every case occurs.
pub fn check_classification(n: usize, tol: &Tolerances) -> Result<Check> {
    let name = if n == 2 { "c2_cases" } else { "c3_cases" };
    let mut c = Check::new("cyclic", name);
    let mut seen = std::collections::BTreeSet::new();
    let mut mismatches = 0;
    let mut listed = Vec::new();
    for r in cyclic::enumerate_binary(n) {
        let d = r.dims();
        let nz = r.nonzero_arrows(tol);
        let case = if n == 2 {
            cyclic::c2_case([d[0], d[1]], [nz[0], nz[1]])
        } else {
            cyclic::c3_case([d[0], d[1], d[2]], [nz[0], nz[1], nz[2]])
        };
        let t = direct_transitive(&r, tol)?;
        if t != case.is_some() {
            mismatches += 1;
        }
        if let Some(k) = case {
            seen.insert(k);
            let dims: String = d.iter().map(|x| x.to_string()).collect();
            let arrows: String = nz.iter().map(|&b| if b { '1' } else { '0' }).collect();
            listed.push(format!("{k}:{dims}/{arrows}"));
        }
    }
    let cases = if n == 2 { 3 } else { 7 };
    listed.sort();
    c.set("cases_seen", seen.len());
    c.set("mismatches", mismatches);
    c.set("transitive_instances", listed.join(","));
    c.require(mismatches == 0 && seen.len() == cases);
    Ok(c)
}

/// No transitive rep of `C_n` has a space of dimension at least 2.
pub fn check_dim_bound(count: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("cyclic", "dimension_bound");
    let mut rng = rng_for(seed, 5);
    let mut transitive = 0;
    for _ in 0..count {
        let n = rng.random_range(2..=4);
        let mut dims: Vec<usize> = (0..n).map(|_| rng.random_range(0..=3)).collect();
        let j = rng.random_range(0..n);
        dims[j] = rng.random_range(2..=3);
        let mats: Vec<CMat> = (0..n)
            .map(|i| {
                let (s, t) = (dims[i], dims[(i + 1) % n]);
                if rng.random_bool(0.25) {
                    CMat::zeros(t, s)
                } else {
                    linalg::gaussian_matrix(&mut rng, t, s)
                }
            })
            .collect();
        let r = CycleRep::new(dims, mats)?;
        if direct_transitive(&r, tol)? || cyclic::cn_transitive_criterion(&r, tol) {
            transitive += 1;
        }
    }
    c.set("instances", count);
    c.set("transitive", transitive);
    c.require(transitive == 0);
    Ok(c)
}

/// Removing a zero space from a cycle of length at least 3 keeps `dim End`.
pub fn check_zero_vertex_reduction(trials: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("cyclic", "zero_vertex_reduction");
    let mut rng = rng_for(seed, 6);
    let mut ok = 0;
    for _ in 0..trials {
        let n = rng.random_range(3..=5);
        let mut dims: Vec<usize> = (0..n).map(|_| rng.random_range(0..=2)).collect();
        let k = rng.random_range(0..n);
        dims[k] = 0;
        let mats: Vec<CMat> = (0..n)
            .map(|i| linalg::gaussian_matrix(&mut rng, dims[(i + 1) % n], dims[i]))
            .collect();
        let r = CycleRep::new(dims, mats)?;
        let reduced = cyclic::reduce_zero_vertex(&r, k)?;
        let a = end_basis_with(r.rep(), tol)?.dim;
        let b = end_basis_with(reduced.rep(), tol)?.dim;
        ok += (a == b) as usize;
    }
    c.set("instances", trials);
    c.set("end_dim_preserved", ok);
    c.require(ok == trials);
    Ok(c)
}

pub fn operator_suite(trials: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    Ok(vec![
        check_operator_system(seed, tol)?,
        check_shift_rank_one(tol)?,
        check_density_cases()?,
        check_phi_noninjective(tol)?,
        check_phi_random(trials / 2, seed, tol)?,
        check_phi_kernels(trials / 2, seed, tol)?,
        check_mk_unbounded()?,
        check_hrr(tol)?,
    ])
}

/// `End(S_{J_k})` for `k = 2..6` has dimension `k`, matches the commutant, and the
/// inclusion representation is indecomposable.
pub fn check_operator_system(seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "operator_system_jordan");
    let mut dims = Vec::new();
    let mut res = 0.0f64;
    for k in 2..=6 {
        let j = opmodels::pairs::jordan(k, ZERO);
        let p = OperatorPair::new(linalg::eye(k), j.clone(), "graph")?;
        let s = opmodels::four_subspace_from_pair(&p);
        let cc = opmodels::subspace::cross_check_end(&s, tol)?;
        let comm = commutant_basis(&j, tol)?.len();
        let indec = hom::is_indecomposable_with(&s.inclusion_rep(tol)?, seed, hom::DEFAULT_TRIALS, tol)?;
        res = res.max(cc.projection_residual).max(cc.rep_residual);
        dims.push(cc.projection_dim.to_string());
        c.require(cc.agrees(tol) && cc.projection_dim == k && comm == k && indec.is_indecomposable());
    }
    c.set("end_dims", dims.join(","));
    c.set("max_residual", sci(res));
    c.require(res <= tol.residual);
    Ok(c)
}

/// The shift plus rank-one pair at `N = 32` with `lambda_n = w_n = 1/n` has `ker A = 0`.
pub fn check_shift_rank_one(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "shift_rank_one_kernel");
    let p = opmodels::kron_pair_shift_rank_one(&SequenceSpec::Reciprocal, &SequenceSpec::Reciprocal, 32)?;
    let (k, ratio) = opmodels::pairs::kernel_info(&p.a, tol.nullspace_factor);
    c.set("kernel_dim", k);
    c.set("sigma_ratio", sci(ratio));
    c.require(k == 0 && ratio > 1e-12);
    Ok(c)
}

/// The three density verdicts for the shift plus rank-one quotient.
pub fn check_density_cases() -> Result<Check> {
    let mut c = Check::new("operator", "density_cases");
    let cases = [
        ("seq:reciprocal", "seq:reciprocal", true),
        ("seq:list:[0]:then=reciprocal", "seq:reciprocal", false),
        ("seq:one-minus-pow:2", "seq:reciprocal", false),
    ];
    let mut labels = Vec::new();
    for (l, w, expect) in cases {
        let v = opmodels::density_criterion(&SequenceSpec::parse(l)?, &SequenceSpec::parse(w)?)?;
        labels.push(v.label());
        c.require(v.dense == expect);
    }
    c.set("verdicts", labels.join(","));
    Ok(c)
}

/// `A = B = diag(1, 0)`: the kernel of `(S, T) -> T ⊕ T` has dimension 2.
pub fn check_phi_noninjective(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "phi_noninjective");
    let a = linalg::diag(&[ONE, ZERO]);
    let r = opmodels::phi_map(&OperatorPair::new(a.clone(), a, "diag10")?, tol)?;
    c.set("ker_dim", r.ker_dim);
    c.set("surjective", r.surjective);
    c.require(r.ker_dim == 2 && r.kernel_matches() && r.surjective && r.membership_residual <= tol.residual);
    Ok(c)
}

/// Random pairs with `ker A ∩ ker B = 0`: injective and onto `End(S)`.
pub fn check_phi_random(count: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "phi_injective");
    let mut rng = rng_for(seed, 7);
    let (mut inj, mut surj) = (0, 0);
    let mut member = 0.0f64;
    for _ in 0..count {
        let n = rng.random_range(2..=4);
        // generic kernels of dimensions n - ra and n - rb meet trivially when ra + rb >= n
        let ra = rng.random_range(0..=n);
        let rb = rng.random_range(n - ra..=n);
        let a = linalg::gaussian_matrix(&mut rng, n, ra) * linalg::gaussian_matrix(&mut rng, ra, n);
        let b = linalg::gaussian_matrix(&mut rng, n, rb) * linalg::gaussian_matrix(&mut rng, rb, n);
        let r = opmodels::phi_map(&OperatorPair::new(a, b, "random")?, tol)?;
        inj += r.injective as usize;
        surj += r.surjective as usize;
        member = member.max(r.membership_residual);
    }
    c.set("instances", count);
    c.set("injective", inj);
    c.set("surjective", surj);
    c.set("max_membership_residual", sci(member));
    c.require(inj == count && surj == count && member <= tol.residual);
    Ok(c)
}

/// Engineered common kernels: `dim ker = N * dim(ker A ∩ ker B)`.
pub fn check_phi_kernels(count: usize, seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "phi_kernel_dimension");
    let mut rng = rng_for(seed, 8);
    let (mut ok, mut surj) = (0, 0);
    for _ in 0..count {
        let n = rng.random_range(2..=4);
        let kdim = rng.random_range(0..n);
        // rows of P span the complement of a random kdim-dimensional subspace
        let p = linalg::gaussian_matrix(&mut rng, n - kdim, n);
        let a = linalg::gaussian_matrix(&mut rng, n, n - kdim) * &p;
        let b = linalg::gaussian_matrix(&mut rng, n, n - kdim) * &p;
        let r = opmodels::phi_map(&OperatorPair::new(a, b, "engineered")?, tol)?;
        ok += (r.kernel_matches() && r.expected_ker_dim == n * kdim) as usize;
        surj += r.surjective as usize;
    }
    c.set("instances", count);
    c.set("kernel_matches", ok);
    c.set("surjective", surj);
    c.require(ok == count && surj == count);
    Ok(c)
}

/// `max_{k <= 12} |log M_k(m, n)| > 1e3` for `|m|, |n| <= 4`, `m != n`.
pub fn check_mk_unbounded() -> Result<Check> {
    let mut c = Check::new("operator", "mk_unbounded");
    let a = SequenceSpec::parse("seq:exp-neg-pow:3:even")?;
    let b = SequenceSpec::parse("seq:exp-neg-pow:3:odd")?;
    let mut smallest = f64::INFINITY;
    for m in -4..=4i64 {
        for n in -4..=4i64 {
            if m != n {
                smallest = smallest.min(opmodels::sequence::max_abs_log_mk(&a, &b, m, n, 12)?);
            }
        }
    }
    c.set("min_over_pairs", sci(smallest));
    c.require(smallest > 1e3);
    Ok(c)
}

/// Truncated factorial-weight system: weights on `[-2, 2]`, End computable.
pub fn check_hrr(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("operator", "hrr_truncation");
    let small = opmodels::hrr_system(5)?;
    let expect = [0.0, 0.0, 0.0, -1.0, 2.0];
    c.require(small.log_weights == expect);
    let big = opmodels::hrr_system(10)?;
    let e = opmodels::subspace_system_end(&big.system, tol);
    c.set("end_dim_n10", e.dim);
    c.set("residual", sci(e.max_residual));
    c.require(e.dim >= 1 && e.max_residual <= tol.residual && big.system.subspaces[2].ncols() == 10);
    Ok(c)
}

pub fn builders_suite(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    Ok(vec![
        check_builder_jordan(seed, tol)?,
        check_builder_diag(seed, tol)?,
        check_builder_e8_k4(seed, tol)?,
        check_an_tilde(tol)?,
    ])
}

const FAMILIES: [Family; 4] = [Family::DTilde(4), Family::E6Tilde, Family::E7Tilde, Family::E8Tilde];

/// Each family with `s = J_k(0)`, `k = 1..3`: `dim End = k = dim {s}'`, indecomposable.
pub fn check_builder_jordan(seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("builders", "jordan_parameter");
    let mut dims = Vec::new();
    for f in FAMILIES {
        for k in 1..=3 {
            let s = opmodels::pairs::jordan(k, ZERO);
            let r = build_extended_dynkin(f, &s)?;
            let end = end_basis_with(&r, tol)?;
            let v = hom::indecomposability_from_end(&end, seed, hom::DEFAULT_TRIALS, tol);
            let comm = commutant_basis(&s, tol)?.len();
            dims.push(end.dim.to_string());
            c.require(end.dim == k && comm == k && v.is_indecomposable() && end.max_residual <= tol.residual);
        }
    }
    c.set("end_dims", dims.join(","));
    Ok(c)
}

/// `s = diag(1, 2)`: decomposable with a verified idempotent for each family.
pub fn check_builder_diag(seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("builders", "diagonal_parameter");
    let s = linalg::diag(&[ONE, linalg::real(2.0)]);
    let mut worst = 0.0f64;
    for f in FAMILIES {
        let r = build_extended_dynkin(f, &s)?;
        let v = hom::is_indecomposable_with(&r, seed, hom::DEFAULT_TRIALS, tol)?;
        match v.verdict {
            Verdict::Decomposable(p) => {
                let sq = p.compose(&p)?;
                let idem = sq.sub(&p)?.norm() / p.norm().max(1.0);
                let id = crate::rep::Hom::identity(&r);
                let nontrivial = p.norm() > tol.rel && p.sub(&id)?.norm() > tol.rel;
                worst = worst.max(idem).max(hom_residual(&p, &r, &r));
                c.require(nontrivial);
            }
            _ => c.require(false),
        }
    }
    c.set("max_witness_residual", sci(worst));
    c.require(worst <= tol.residual);
    Ok(c)
}

/// The largest builder instance: `E~8` with `k = 4`, ambient dimension 24.
pub fn check_builder_e8_k4(seed: u64, tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("builders", "e8tilde_k4");
    let r = build_extended_dynkin(Family::E8Tilde, &opmodels::pairs::jordan(4, ZERO))?;
    let end = end_basis_with(&r, tol)?;
    let v = hom::indecomposability_from_end(&end, seed, hom::DEFAULT_TRIALS, tol);
    c.set("ambient", r.dim("0")?);
    c.set("end_dim", end.dim);
    c.set("solved_unknowns", end.solved_unknowns);
    c.require(end.dim == 4 && v.is_indecomposable());
    Ok(c)
}

/// Non-cyclic `A~` constructions: identity arrows do not change `End`.
pub fn check_an_tilde(tol: &Tolerances) -> Result<Check> {
    let mut c = Check::new("builders", "an_tilde");
    let kq = Quiver::kronecker();
    let j2 = opmodels::pairs::jordan(2, ZERO);
    let kr = build_an_tilde_noncyclic(&kq, &linalg::eye(2), &j2)?;
    let kdim = end_basis_with(&kr.rep, tol)?.dim;
    c.set("kronecker_jordan2_end_dim", kdim);
    c.require(kdim == 2);
    let cyclic_rejected = matches!(
        build_an_tilde_noncyclic(&Quiver::cycle(3), &linalg::eye(1), &linalg::eye(1)),
        Err(Error::OrientedCycle)
    );
    c.require(cyclic_rejected);
    let pair = opmodels::kron_pair_bilateral(&SequenceSpec::parse("seq:const:1")?, &SequenceSpec::parse("seq:hrr")?, 2)?;
    let q3 = cycle_quiver(&[true, true, false])?;
    let big = build_an_tilde_noncyclic(&q3, &pair.a, &pair.b)?;
    let d3 = end_basis_with(&big.rep, tol)?.dim;
    let d2 = end_basis_with(&pair.kronecker_rep(), tol)?.dim;
    c.set("bilateral_cycle3_end_dim", d3);
    c.set("bilateral_kronecker_end_dim", d2);
    c.require(d3 == d2);
    Ok(c)
}
