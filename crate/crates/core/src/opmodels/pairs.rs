//! Matrix fixtures and truncated operator pairs `(A, B)` standing for quotients `B A^{-1}`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE};
use crate::quiver::Quiver;
use crate::rep::Rep;
use crate::textio;

use super::sequence::SequenceSpec;

/// Named matrix fixtures. Matrices act on column vectors; `e_1` is the first basis vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    /// `e_i -> e_{i+1}`, `e_N -> 0`.
    UnilateralShift(usize),
    /// Window of the bilateral shift with the wrap-around dropped.
    BilateralShift(usize),
    /// `diag(x_1, ..., x_N)`.
    Diag(SequenceSpec, usize),
    /// `lambda I + N` with `N e_i = e_{i+1}`.
    Jordan(usize, C64),
    /// Explicit matrix.
    Matrix(CMat),
}

impl Fixture {
    /// Parse `jordan:k[:lambda]`, `unilateral-shift:N`, `bilateral-shift:N`,
    /// `diag:v1,v2,...`, `diag-seq:N:<sequence>` or `mat:<matrix literal>`.
    pub fn parse(text: &str) -> Result<Fixture> {
        let t = text.trim();
        let (kind, rest) = t.split_once(':').unwrap_or((t, ""));
        let size = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidArgument(format!("size `{s}` must be a positive integer")))
        };
        match kind {
            "jordan" => {
                let (k, lam) = rest.split_once(':').unwrap_or((rest, "0"));
                let lam = textio::parse_complex(lam)
                    .ok_or_else(|| Error::InvalidArgument(format!("invalid eigenvalue `{lam}`")))?;
                Ok(Fixture::Jordan(size(k)?, lam))
            }
            "unilateral-shift" => Ok(Fixture::UnilateralShift(size(rest)?)),
            "bilateral-shift" => Ok(Fixture::BilateralShift(size(rest)?)),
            "diag" => {
                let vals: Option<Vec<C64>> = rest.split(',').map(textio::parse_complex).collect();
                let vals = vals
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| Error::InvalidArgument(format!("invalid diagonal `{rest}`")))?;
                Ok(Fixture::Matrix(linalg::diag(&vals)))
            }
            "diag-seq" => {
                let (n, seq) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidArgument("diag-seq needs N and a sequence".into()))?;
                Ok(Fixture::Diag(SequenceSpec::parse(seq)?, size(n)?))
            }
            "mat" => Ok(Fixture::Matrix(textio::parse_matrix(rest)?)),
            other => Err(Error::UnknownFixture(other.to_string())),
        }
    }

    pub fn matrix(&self) -> Result<CMat> {
        Ok(match self {
            Fixture::UnilateralShift(n) | Fixture::BilateralShift(n) => shift(*n),
            Fixture::Diag(seq, n) => {
                let v: Result<Vec<C64>> = (1..=*n as i64).map(|k| seq.value(k)).collect();
                linalg::diag(&v?)
            }
            Fixture::Jordan(n, lam) => jordan(*n, *lam),
            Fixture::Matrix(m) => {
                if m.nrows() != m.ncols() || m.nrows() == 0 {
                    return Err(Error::InvalidArgument("operator must be a nonempty square matrix".into()));
                }
                m.clone()
            }
        })
    }
}

/// Subdiagonal ones.
pub fn shift(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j + 1 { ONE } else { linalg::ZERO })
}

/// `J_n(lambda)`: `lambda` on the diagonal and ones below it, so `J e_i = lambda e_i + e_{i+1}`.
pub fn jordan(n: usize, lambda: C64) -> CMat {
    shift(n) + CMat::identity(n, n) * lambda
}

/// `theta_{x,y}(z) = (z|y) x`, i.e. `x y^H`.
pub fn rank_one(x: &CMat, y: &CMat) -> CMat {
    x * y.adjoint()
}

/// Two square matrices of equal size and the construction that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPair {
    pub a: CMat,
    pub b: CMat,
    pub tag: String,
}

impl OperatorPair {
    pub fn new(a: CMat, b: CMat, tag: impl Into<String>) -> Result<OperatorPair> {
        if a.shape() != b.shape() || a.nrows() != a.ncols() {
            return Err(Error::InvalidArgument(format!(
                "pair needs equal square shapes, got {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        if !linalg::is_finite(&a) || !linalg::is_finite(&b) {
            return Err(Error::NonFinite("pair".into()));
        }
        Ok(OperatorPair { a, b, tag: tag.into() })
    }

    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    /// The Kronecker representation `f_a = A`, `f_b = B` on `C^N => C^N`.
    pub fn kronecker_rep(&self) -> Rep {
        let n = self.size();
        Rep::new(Quiver::kronecker(), vec![n, n], vec![self.a.clone(), self.b.clone()])
            .expect("square pair fits the Kronecker quiver")
    }
}

/// `A = S D_lambda + theta_{e_1, conj(w)}`, `B = S` at truncation `N`: the first row of `A` is
/// `(w_1, ..., w_N)` and `A e_i` has `lambda_i` in position `i + 1`.
pub fn kron_pair_shift_rank_one(lambda: &SequenceSpec, w: &SequenceSpec, n: usize) -> Result<OperatorPair> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let lam: Vec<C64> = (1..=n as i64).map(|k| lambda.value(k)).collect::<Result<_>>()?;
    for i in 0..n {
        for j in 0..i {
            if lam[i] == lam[j] {
                return Err(Error::RepeatedLambda(j + 1, i + 1));
            }
        }
    }
    let mut wv = Vec::with_capacity(n);
    for k in 1..=n as i64 {
        if w.log_abs(k)? == f64::NEG_INFINITY {
            return Err(Error::ZeroWeight(k));
        }
        wv.push(w.value(k)?);
    }
    let e1 = linalg::basis_vector(n, 0);
    let wbar = CMat::from_fn(n, 1, |i, _| wv[i].conj());
    let a = &shift(n) * linalg::diag(&lam) + rank_one(&e1, &wbar);
    OperatorPair::new(a, shift(n), format!("shift-rank-one lambda={lambda} w={w} N={n}"))
}

/// Bilateral pair on the window `[-m, m]`: `A = D_a`, `B = U D_b` with the wrap-around
/// dropped, so `B e_i = b(n_i) e_{i+1}` and the last basis vector is sent to 0.
///
/// Weights are handled as logarithms. When a weight would leave the double range, the pair is
/// replaced by the diagonally rescaled pair `(D_2 A D_1^{-1}, D_2 B D_1^{-1})` with all
/// moduli equal to one, an isomorphic Kronecker representation; the tag records this.
pub fn kron_pair_bilateral(a: &SequenceSpec, b: &SequenceSpec, m: usize) -> Result<OperatorPair> {
    let idx: Vec<i64> = (-(m as i64)..=m as i64).collect();
    let n = idx.len();
    let mut la = Vec::with_capacity(n);
    let mut lb = Vec::with_capacity(n);
    for &k in &idx {
        let (x, y) = (a.log_abs(k)?, b.log_abs(k)?);
        if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
            return Err(Error::ZeroWeight(k));
        }
        la.push(x);
        lb.push(y);
    }
    const SAFE: f64 = 700.0;
    let rescale = la.iter().chain(&lb[..n - 1]).any(|x| x.abs() > SAFE);
    let tag_base = format!("bilateral a={a} b={b} window=[-{m},{m}]");
    let (ma, mb) = if rescale {
        // Column scale p_i, row scale q_i with q_i + la_i - p_i = 0 and q_{i+1} + lb_i - p_i = 0.
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        q[0] = -la[0];
        for i in 0..n {
            if i > 0 {
                q[i] = p[i - 1] - lb[i - 1];
            }
            p[i] = q[i] + la[i];
        }
        let ma = CMat::from_fn(n, n, |i, j| if i == j { a.phase(idx[i]).unwrap_or(ONE) } else { linalg::ZERO });
        let mb = CMat::from_fn(n, n, |i, j| {
            if i == j + 1 {
                b.phase(idx[j]).unwrap_or(ONE) * (q[i] + lb[j] - p[j]).exp()
            } else {
                linalg::ZERO
            }
        });
        (ma, mb)
    } else {
        let ma = CMat::from_fn(n, n, |i, j| {
            if i == j {
                a.phase(idx[i]).unwrap_or(ONE) * la[i].exp()
            } else {
                linalg::ZERO
            }
        });
        let mb = CMat::from_fn(n, n, |i, j| {
            if i == j + 1 {
                b.phase(idx[j]).unwrap_or(ONE) * lb[j].exp()
            } else {
                linalg::ZERO
            }
        });
        (ma, mb)
    };
    let tag = if rescale {
        format!("{tag_base} rescaled")
    } else {
        tag_base
    };
    OperatorPair::new(ma, mb, tag)
}

/// Dimension of the numerical kernel and `sigma_min / sigma_max`.
pub fn kernel_info(m: &CMat, factor: f64) -> (usize, f64) {
    let k = linalg::nullspace(m, factor).ncols();
    (k, linalg::condition_ratio(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, frob, from_real_rows};

    fn unit(re: f64) -> C64 {
        c(re, 0.0)
    }

    fn seq(s: &str) -> SequenceSpec {
        SequenceSpec::parse(s).unwrap()
    }

    #[test]
    fn fixtures() {
        assert_eq!(
            Fixture::parse("jordan:2").unwrap().matrix().unwrap(),
            from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
        );
        let s = Fixture::parse("unilateral-shift:3").unwrap().matrix().unwrap();
        assert_eq!(&s * linalg::basis_vector(3, 0), linalg::basis_vector(3, 1));
        let x = linalg::basis_vector(3, 0);
        let y = CMat::from_column_slice(3, 1, &[unit(1.0), c(0.0, 2.0), unit(3.0)]);
        let z = CMat::from_column_slice(3, 1, &[unit(1.0), unit(1.0), unit(1.0)]);
        let got = rank_one(&x, &y) * &z;
        let inner = (y.adjoint() * &z)[(0, 0)];
        assert!(frob(&(got - &x * inner)) < 1e-15);
        assert_eq!(
            Fixture::parse("diag:1,2").unwrap().matrix().unwrap(),
            from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]])
        );
        assert!(matches!(Fixture::parse("nope:1"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn shift_rank_one_action() {
        let p = kron_pair_shift_rank_one(&seq("reciprocal"), &seq("reciprocal"), 4).unwrap();
        let x = CMat::from_column_slice(4, 1, &[unit(1.0), unit(2.0), unit(3.0), unit(4.0)]);
        let ax = &p.a * &x;
        assert!((ax[(0, 0)] - unit(4.0)).norm() < 1e-14);
        assert!((ax[(1, 0)] - unit(1.0)).norm() < 1e-14);
        assert!((ax[(2, 0)] - unit(1.0)).norm() < 1e-14);
        assert!((ax[(3, 0)] - unit(1.0)).norm() < 1e-14);
        let p16 = kron_pair_shift_rank_one(&seq("reciprocal"), &seq("reciprocal"), 16).unwrap();
        assert_eq!(kernel_info(&p16.a, 2f64.powi(-40)).0, 0);
        assert!(matches!(
            kron_pair_shift_rank_one(&seq("const:1"), &seq("reciprocal"), 3),
            Err(Error::RepeatedLambda(1, 2))
        ));
    }

    #[test]
    fn bilateral() {
        let one = seq("const:1");
        let p = kron_pair_bilateral(&one, &one, 2).unwrap();
        assert_eq!(p.a, CMat::identity(5, 5));
        assert_eq!(p.b, shift(5));
        let a = seq("exp-neg-pow:3:even");
        let b = seq("exp-neg-pow:3:odd");
        let p = kron_pair_bilateral(&a, &b, 3).unwrap();
        assert!((p.a[(5, 5)].re - (-9f64).exp()).abs() < 1e-15);
        assert_eq!(p.b[(4, 3)], ONE);
        assert!((p.b[(5, 4)].re - (-3f64).exp()).abs() < 1e-15);
        assert_eq!(kernel_info(&p.a, 2f64.powi(-40)).0, 0);
        let big = kron_pair_bilateral(&a, &b, 8).unwrap();
        assert!(big.tag.ends_with("rescaled"));
        assert_eq!(kernel_info(&big.a, 2f64.powi(-40)).0, 0);
    }
}
