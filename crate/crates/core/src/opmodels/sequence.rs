//! Weight sequences with log-domain evaluation, closed-form square-summability decisions
//! and the density criterion for shift-plus-rank-one quotients.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use crate::textio::{format_complex, parse_complex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    All,
}

impl Parity {
    fn matches(self, n: i64) -> bool {
        match self {
            Parity::Even => n % 2 == 0,
            Parity::Odd => n % 2 != 0,
            Parity::All => true,
        }
    }
}

/// A sequence indexed by integers.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// `1/n`, defined for `n >= 1`.
    Reciprocal,
    /// `1 - base^(-n)`.
    OneMinusPow(f64),
    /// `exp(-lambda^n)` for `n >= 1` of the given parity, `1` otherwise.
    ExpNegPow { lambda: f64, parity: Parity },
    /// `exp((-1)^n n!)` for `n >= 1`, `1` otherwise.
    Hrr,
    Const(C64),
    /// Values at `1..=len`, then the tail family (evaluated at the same absolute index).
    List {
        values: Vec<C64>,
        tail: Option<Box<SequenceSpec>>,
    },
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Reciprocal => write!(f, "seq:reciprocal"),
            SequenceSpec::OneMinusPow(b) => write!(f, "seq:one-minus-pow:{b}"),
            SequenceSpec::ExpNegPow { lambda, parity } => {
                write!(f, "seq:exp-neg-pow:{lambda}")?;
                match parity {
                    Parity::Even => write!(f, ":even"),
                    Parity::Odd => write!(f, ":odd"),
                    Parity::All => Ok(()),
                }
            }
            SequenceSpec::Hrr => write!(f, "seq:hrr"),
            SequenceSpec::Const(v) => write!(f, "seq:const:{}", format_complex(*v)),
            SequenceSpec::List { values, tail } => {
                let vs: Vec<String> = values.iter().map(|v| format_complex(*v)).collect();
                write!(f, "seq:list:[{}]", vs.join(","))?;
                if let Some(t) = tail {
                    let t = t.to_string();
                    write!(f, ":then={}", t.strip_prefix("seq:").unwrap_or(&t))?;
                }
                Ok(())
            }
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSequence(msg.into())
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad(format!("{what} `{s}` is not a finite number")))
}

impl SequenceSpec {
    /// Parse `seq:reciprocal`, `seq:one-minus-pow:<b>`, `seq:exp-neg-pow:<lambda>[:even|odd]`,
    /// `seq:hrr`, `seq:const:<c>`, `seq:list:[v1,v2,...][:then=<family>]`.
    /// The `seq:` prefix is optional.
    pub fn parse(text: &str) -> Result<SequenceSpec> {
        let t = text.trim();
        let t = t.strip_prefix("seq:").unwrap_or(t);
        let (name, rest) = match t.find(':') {
            Some(i) => (&t[..i], &t[i + 1..]),
            None => (t, ""),
        };
        let no_args = |spec: SequenceSpec| {
            if rest.is_empty() {
                Ok(spec)
            } else {
                Err(bad(format!("`{name}` takes no parameters")))
            }
        };
        match name {
            "reciprocal" => no_args(SequenceSpec::Reciprocal),
            "hrr" => no_args(SequenceSpec::Hrr),
            "one-minus-pow" => {
                let b = parse_f64(rest, "base")?;
                if b <= 0.0 || b == 1.0 {
                    return Err(bad("one-minus-pow needs a positive base other than 1"));
                }
                Ok(SequenceSpec::OneMinusPow(b))
            }
            "exp-neg-pow" => {
                let mut parts = rest.split(':');
                let lambda = parse_f64(parts.next().unwrap_or(""), "lambda")?;
                if lambda <= 0.0 {
                    return Err(bad("exp-neg-pow needs lambda > 0"));
                }
                let parity = match parts.next() {
                    None => Parity::All,
                    Some("even") => Parity::Even,
                    Some("odd") => Parity::Odd,
                    Some(p) => return Err(bad(format!("unknown parity `{p}`"))),
                };
                if parts.next().is_some() {
                    return Err(bad("too many exp-neg-pow parameters"));
                }
                Ok(SequenceSpec::ExpNegPow { lambda, parity })
            }
            "const" => Ok(SequenceSpec::Const(
                parse_complex(rest).ok_or_else(|| bad(format!("invalid constant `{rest}`")))?,
            )),
            "list" => {
                let body = rest
                    .strip_prefix('[')
                    .ok_or_else(|| bad("list values must be enclosed in [ ]"))?;
                let end = body.find(']').ok_or_else(|| bad("unterminated list"))?;
                let mut values = Vec::new();
                for tok in body[..end].split(',').filter(|x| !x.trim().is_empty()) {
                    values.push(parse_complex(tok).ok_or_else(|| bad(format!("invalid value `{}`", tok.trim())))?);
                }
                let after = &body[end + 1..];
                let tail = if after.is_empty() {
                    None
                } else {
                    let spec = after
                        .strip_prefix(":then=")
                        .ok_or_else(|| bad("expected `:then=<family>` after the list"))?;
                    Some(Box::new(SequenceSpec::parse(spec)?))
                };
                Ok(SequenceSpec::List { values, tail })
            }
            other => Err(bad(format!("unknown family `{other}`"))),
        }
    }

    fn undefined(&self, n: i64) -> Error {
        bad(format!("{self} is undefined at index {n}"))
    }

    /// `ln |x_n|`, `-inf` for an exact zero.
    pub fn log_abs(&self, n: i64) -> Result<f64> {
        match self {
            SequenceSpec::Reciprocal => {
                if n >= 1 {
                    Ok(-(n as f64).ln())
                } else {
                    Err(self.undefined(n))
                }
            }
            SequenceSpec::OneMinusPow(b) => Ok((1.0 - b.powf(-(n as f64))).abs().ln()),
            SequenceSpec::ExpNegPow { lambda, parity } => {
                if n >= 1 && parity.matches(n) {
                    Ok(-lambda.powf(n as f64))
                } else {
                    Ok(0.0)
                }
            }
            SequenceSpec::Hrr => {
                if n >= 1 {
                    let f = factorial(n);
                    Ok(if n % 2 == 0 { f } else { -f })
                } else {
                    Ok(0.0)
                }
            }
            SequenceSpec::Const(v) => Ok(v.norm().ln()),
            SequenceSpec::List { values, tail } => {
                if n >= 1 && (n as usize) <= values.len() {
                    Ok(values[n as usize - 1].norm().ln())
                } else if n > values.len() as i64 {
                    match tail {
                        Some(t) => t.log_abs(n),
                        None => Err(self.undefined(n)),
                    }
                } else {
                    Err(self.undefined(n))
                }
            }
        }
    }

    /// Unit-modulus phase of `x_n` (1 for zero).
    pub fn phase(&self, n: i64) -> Result<C64> {
        let v = match self {
            SequenceSpec::OneMinusPow(b) => c(1.0 - b.powf(-(n as f64)), 0.0),
            SequenceSpec::Const(v) => *v,
            SequenceSpec::List { values, tail } => {
                if n >= 1 && (n as usize) <= values.len() {
                    values[n as usize - 1]
                } else if let (true, Some(t)) = (n > values.len() as i64, tail) {
                    return t.phase(n);
                } else {
                    return Err(self.undefined(n));
                }
            }
            _ => {
                self.log_abs(n)?;
                c(1.0, 0.0)
            }
        };
        Ok(if v.norm() == 0.0 { c(1.0, 0.0) } else { v / v.norm() })
    }

    /// `x_n` as a double (may underflow to 0 or overflow to infinity).
    pub fn value(&self, n: i64) -> Result<C64> {
        let l = self.log_abs(n)?;
        Ok(self.phase(n)? * l.exp())
    }

    /// `ln |x_n|` ~ asymptotic form along `n -> inf` restricted to `parity`.
    fn asymptotic(&self, parity: Parity) -> Result<LogAsym> {
        let mut a = LogAsym::default();
        match self {
            SequenceSpec::Reciprocal => a.power = -1.0,
            SequenceSpec::OneMinusPow(b) => {
                if *b < 1.0 {
                    // |1 - b^{-n}| ~ b^{-n}
                    a.linear = -b.ln();
                }
            }
            SequenceSpec::ExpNegPow { lambda, parity: p } => {
                let hits = match (p, parity) {
                    (Parity::All, _) => true,
                    (x, y) => *x == y,
                };
                if hits {
                    if *lambda > 1.0 {
                        a.exps.push((*lambda, -1.0));
                    } else if *lambda == 1.0 {
                        a.constant = -1.0;
                    }
                }
            }
            SequenceSpec::Hrr => {
                a.factorial = match parity {
                    Parity::Even => 1.0,
                    Parity::Odd => -1.0,
                    Parity::All => return Err(bad("hrr has parity-dependent growth")),
                }
            }
            SequenceSpec::Const(v) => {
                if v.norm() == 0.0 {
                    a.zero = true;
                } else {
                    a.constant = v.norm().ln();
                }
            }
            SequenceSpec::List { tail, .. } => match tail {
                Some(t) => return t.asymptotic(parity),
                None => return Err(Error::UndecidableTail),
            },
        }
        Ok(a)
    }

    /// First index `n >= 1` with `x_n = 0`, decided in closed form.
    pub fn first_zero(&self) -> Result<Option<u64>> {
        self.first_zero_from(1)
    }

    fn first_zero_from(&self, start: u64) -> Result<Option<u64>> {
        match self {
            SequenceSpec::Const(v) if v.norm() == 0.0 => Ok(Some(start)),
            SequenceSpec::List { values, tail } => {
                let len = values.len() as u64;
                if let Some(i) = (start..=len).find(|&i| values[i as usize - 1].norm() == 0.0) {
                    return Ok(Some(i));
                }
                match tail {
                    None => Err(Error::UndecidableTail),
                    Some(t) => t.first_zero_from(start.max(len + 1)),
                }
            }
            _ => Ok(None),
        }
    }

    /// Square-summability of `(x_n)_{n >= 1}`.
    pub fn in_l2(&self) -> Result<bool> {
        ratio_in_l2(self, &SequenceSpec::Const(c(1.0, 0.0)))
    }
}

/// `n!` as a double; infinite beyond 170.
fn factorial(n: i64) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `ln |x_k| ~ factorial * k! + sum coeff * base^k + linear * k + power * ln k + constant`.
#[derive(Debug, Clone, Default)]
struct LogAsym {
    factorial: f64,
    exps: Vec<(f64, f64)>,
    linear: f64,
    power: f64,
    constant: f64,
    zero: bool,
}

impl LogAsym {
    fn minus(&self, other: &LogAsym) -> LogAsym {
        let mut exps = self.exps.clone();
        exps.extend(other.exps.iter().map(|&(b, c)| (b, -c)));
        LogAsym {
            factorial: self.factorial - other.factorial,
            exps,
            linear: self.linear - other.linear,
            power: self.power - other.power,
            constant: self.constant - other.constant,
            zero: self.zero,
        }
    }

    /// `sum_k exp(2 ln|x_k|) < inf`.
    fn square_summable(&self) -> bool {
        if self.zero {
            return true;
        }
        const EPS: f64 = 1e-12;
        if self.factorial.abs() > EPS {
            return self.factorial < 0.0;
        }
        let mut bases: Vec<f64> = self.exps.iter().map(|e| e.0).collect();
        bases.sort_by(|a, b| b.total_cmp(a));
        bases.dedup();
        for b in bases {
            let coeff: f64 = self.exps.iter().filter(|e| e.0 == b).map(|e| e.1).sum();
            if coeff.abs() > EPS {
                return coeff < 0.0;
            }
        }
        if self.linear.abs() > EPS {
            return self.linear < 0.0;
        }
        self.power < -0.5
    }
}

/// Square-summability of `(num_k / den_k)_{k >= 1}` along both parities.
pub fn ratio_in_l2(num: &SequenceSpec, den: &SequenceSpec) -> Result<bool> {
    for parity in [Parity::Even, Parity::Odd] {
        let a = num.asymptotic(parity)?.minus(&den.asymptotic(parity)?);
        if !a.square_summable() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the density test for the quotient of the shift by the shift-plus-rank-one
/// operator built from `(lambda, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVerdict {
    pub dense: bool,
    /// First `k` with `lambda_k = 0`.
    pub lambda_zero_at: Option<u64>,
    /// Whether `(w_k / lambda_k)` is square-summable; `None` when some `lambda_k = 0`.
    pub ratio_in_l2: Option<bool>,
}

impl DensityVerdict {
    pub fn label(&self) -> &'static str {
        if self.dense {
            "dense"
        } else {
            "not_dense"
        }
    }
}

/// Dense iff no `lambda_k` vanishes and `(w_k / lambda_k)` is not square-summable.
/// Both conditions are decided in closed form from the family asymptotics.
pub fn density_criterion(lambda: &SequenceSpec, w: &SequenceSpec) -> Result<DensityVerdict> {
    if let Some(k) = w.first_zero()? {
        return Err(Error::ZeroWeight(k as i64));
    }
    if let Some(k) = lambda.first_zero()? {
        return Ok(DensityVerdict {
            dense: false,
            lambda_zero_at: Some(k),
            ratio_in_l2: None,
        });
    }
    let l2 = ratio_in_l2(w, lambda)?;
    Ok(DensityVerdict {
        dense: !l2,
        lambda_zero_at: None,
        ratio_in_l2: Some(l2),
    })
}

/// `ln |w_n|` for `w = b / a`.
pub fn log_quotient_weight(a: &SequenceSpec, b: &SequenceSpec, n: i64) -> Result<f64> {
    let la = a.log_abs(n)?;
    let lb = b.log_abs(n)?;
    if la == f64::NEG_INFINITY || lb == f64::NEG_INFINITY {
        return Err(Error::ZeroWeight(n));
    }
    Ok(lb - la)
}

/// `ln |M_k(m, n)| = sum_{j<k} (ln|w_{m+j}| - ln|w_{n+j}|)` with `w = b / a`.
pub fn log_mk(a: &SequenceSpec, b: &SequenceSpec, m: i64, n: i64, k: usize) -> Result<f64> {
    let mut s = 0.0;
    for j in 0..k as i64 {
        s += log_quotient_weight(a, b, m + j)? - log_quotient_weight(a, b, n + j)?;
    }
    Ok(s)
}

/// `max_{1 <= k <= kmax} |ln M_k(m, n)|`.
pub fn max_abs_log_mk(a: &SequenceSpec, b: &SequenceSpec, m: i64, n: i64, kmax: usize) -> Result<f64> {
    let mut best = 0.0f64;
    let mut s = 0.0;
    for j in 0..kmax as i64 {
        s += log_quotient_weight(a, b, m + j)? - log_quotient_weight(a, b, n + j)?;
        best = best.max(s.abs());
    }
    Ok(best)
}
