//! Finite prefixes of eigenvalue and singular-value sequences, their norms,
//! partial sums, and the elementary two-sided inequalities.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rv::{KaramataPrimitive, RegVarFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    Singular,
    EigenComplex,
    EigenRealSigned,
}

impl SpectralKind {
    pub fn name(self) -> &'static str {
        match self {
            SpectralKind::Singular => "singular",
            SpectralKind::EigenComplex => "eigen_complex",
            SpectralKind::EigenRealSigned => "eigen_real_signed",
        }
    }
}

/// Which part of a sequence a counting function is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralPart {
    Plus,
    Minus,
    Singular,
    Modulus,
}

#[derive(Debug, Clone)]
enum Data {
    Singular(Vec<f64>),
    EigenComplex(Vec<Complex64>),
    EigenSigned { plus: Vec<f64>, minus: Vec<f64> },
}

/// A modulus-sorted prefix of a spectral sequence.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    data: Data,
}

fn check_nonneg_nonincreasing(values: &[f64], what: &str) -> Result<()> {
    for (j, w) in values.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::NotSorted(format!(
                "{what}[{}] = {} exceeds {what}[{}] = {}",
                j + 1,
                w[1],
                j,
                w[0]
            )));
        }
    }
    if let Some((j, &v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::NotSorted(format!("{what}[{j}] = {v} is negative or NaN")));
    }
    Ok(())
}

impl SpectralSequence {
    pub fn singular(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_nonneg_nonincreasing(&values, "mu")?;
        Ok(SpectralSequence {
            data: Data::Singular(values),
        })
    }

    /// Skips the sortedness check; for synthetic diagnostic streams
    /// (oscillating ratio models) that are deliberately non-monotone.
    pub fn singular_unchecked(values: Vec<f64>) -> Self {
        SpectralSequence {
            data: Data::Singular(values),
        }
    }

    pub fn eigen_complex(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for w in values.windows(2) {
            if w[1].norm() > w[0].norm() {
                return Err(Error::NotSorted("moduli must be non-increasing".into()));
            }
        }
        Ok(SpectralSequence {
            data: Data::EigenComplex(values),
        })
    }

    pub fn eigen_signed(plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        if plus.is_empty() && minus.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_nonneg_nonincreasing(&plus, "lambda_plus")?;
        check_nonneg_nonincreasing(&minus, "lambda_minus")?;
        Ok(SpectralSequence {
            data: Data::EigenSigned { plus, minus },
        })
    }

    pub fn eigen_signed_unchecked(plus: Vec<f64>, minus: Vec<f64>) -> Self {
        SpectralSequence {
            data: Data::EigenSigned { plus, minus },
        }
    }

    pub fn kind(&self) -> SpectralKind {
        match &self.data {
            Data::Singular(_) => SpectralKind::Singular,
            Data::EigenComplex(_) => SpectralKind::EigenComplex,
            Data::EigenSigned { .. } => SpectralKind::EigenRealSigned,
        }
    }

    /// Total prefix length M (for signed data, both channels combined).
    pub fn len(&self) -> usize {
        match &self.data {
            Data::Singular(v) => v.len(),
            Data::EigenComplex(v) => v.len(),
            Data::EigenSigned { plus, minus } => plus.len() + minus.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn singular_values(&self) -> Result<&[f64]> {
        match &self.data {
            Data::Singular(v) => Ok(v),
            other => Err(Error::KindMismatch {
                expected: "singular",
                got: kind_of(other).name(),
            }),
        }
    }

    pub fn signed_parts(&self) -> Result<(&[f64], &[f64])> {
        match &self.data {
            Data::EigenSigned { plus, minus } => Ok((plus, minus)),
            other => Err(Error::KindMismatch {
                expected: "eigen_real_signed",
                got: kind_of(other).name(),
            }),
        }
    }

    pub fn complex_values(&self) -> Result<&[Complex64]> {
        match &self.data {
            Data::EigenComplex(v) => Ok(v),
            other => Err(Error::KindMismatch {
                expected: "eigen_complex",
                got: kind_of(other).name(),
            }),
        }
    }

    /// Moduli in the stored order (identity for singular data).
    pub fn moduli(&self) -> Vec<f64> {
        match &self.data {
            Data::Singular(v) => v.clone(),
            Data::EigenComplex(v) => v.iter().map(|z| z.norm()).collect(),
            Data::EigenSigned { .. } => self.merged_signed().iter().map(|x| x.abs()).collect(),
        }
    }

    /// Signed eigenvalues merged into one modulus-sorted stream.  Ties between
    /// +x and -x break positive-first, making the merge deterministic.
    pub fn merged_signed(&self) -> Vec<f64> {
        match &self.data {
            Data::EigenSigned { plus, minus } => {
                let mut out = Vec::with_capacity(plus.len() + minus.len());
                let (mut i, mut j) = (0, 0);
                while i < plus.len() || j < minus.len() {
                    let take_plus = match (plus.get(i), minus.get(j)) {
                        (Some(&p), Some(&m)) => p >= m,
                        (Some(_), None) => true,
                        (None, Some(_)) => false,
                        (None, None) => unreachable!(),
                    };
                    if take_plus {
                        out.push(plus[i]);
                        i += 1;
                    } else {
                        out.push(-minus[j]);
                        j += 1;
                    }
                }
                out
            }
            Data::Singular(v) => v.clone(),
            Data::EigenComplex(v) => v.iter().map(|z| z.re).collect(),
        }
    }

    /// Sum of the first N entries (signed data merged by descending modulus);
    /// N = 0 sums nothing.
    pub fn partial_sum(&self, n: usize) -> Result<Complex64> {
        if n > self.len() {
            return Err(Error::PrefixExceeded {
                requested: n,
                len: self.len(),
            });
        }
        Ok(match &self.data {
            Data::Singular(v) => Complex64::new(v[..n].iter().sum(), 0.0),
            Data::EigenComplex(v) => v[..n].iter().sum(),
            Data::EigenSigned { .. } => {
                Complex64::new(self.merged_signed()[..n].iter().sum(), 0.0)
            }
        })
    }

    /// Running real partial sums S_0 = 0, S_1, ..., S_M over the merged stream.
    /// For complex data this is the running sum of real parts.
    pub(crate) fn real_prefix_sums(&self) -> Vec<f64> {
        let stream: Vec<f64> = match &self.data {
            Data::Singular(v) => v.clone(),
            Data::EigenComplex(v) => v.iter().map(|z| z.re).collect(),
            Data::EigenSigned { .. } => self.merged_signed(),
        };
        let mut out = Vec::with_capacity(stream.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for x in stream {
            acc += x;
            out.push(acc);
        }
        out
    }
}

fn kind_of(d: &Data) -> SpectralKind {
    match d {
        Data::Singular(_) => SpectralKind::Singular,
        Data::EigenComplex(_) => SpectralKind::EigenComplex,
        Data::EigenSigned { .. } => SpectralKind::EigenRealSigned,
    }
}

/// ||T||_g = sup_j mu_j / g(j), on the stored prefix.
pub fn quasi_norm_g(s: &SpectralSequence, g: &RegVarFunction) -> Result<f64> {
    let mu = s.singular_values()?;
    Ok(mu
        .iter()
        .enumerate()
        .map(|(j, &m)| m / g.eval(j as f64))
        .fold(0.0, f64::max))
}

/// ||T||_G = sup_{1 <= N <= M} G(N)^-1 sum_{j<N} mu_j.
pub fn lorentz_norm_g_big(s: &SpectralSequence, g_int: &KaramataPrimitive) -> Result<f64> {
    let mu = s.singular_values()?;
    let mut acc = 0.0;
    let mut best = 0.0f64;
    for (j, &m) in mu.iter().enumerate() {
        acc += m;
        best = best.max(acc / g_int.eval((j + 1) as f64)?);
    }
    Ok(best)
}

/// Tail-window statistics standing in for a limsup.
#[derive(Debug, Clone, Copy)]
pub struct TailStats {
    /// max of the statistic over the final window
    pub last: f64,
    /// same statistic over the window immediately before it
    pub prev: f64,
}

/// Quotient-norm proxy: max of mu_j/g(j) over the final `tail_window` indices,
/// with the penultimate window reported alongside so callers can judge
/// stabilization.
pub fn quotient_norm(
    s: &SpectralSequence,
    g: &RegVarFunction,
    tail_window: usize,
) -> Result<TailStats> {
    let mu = s.singular_values()?;
    let m = mu.len();
    if tail_window == 0 || 2 * tail_window > m {
        return Err(Error::WindowTooLarge {
            window: tail_window,
            len: m,
        });
    }
    let ratio = |j: usize| mu[j] / g.eval(j as f64);
    let last = (m - tail_window..m).map(ratio).fold(0.0, f64::max);
    let prev = (m - 2 * tail_window..m - tail_window)
        .map(ratio)
        .fold(0.0, f64::max);
    Ok(TailStats { last, prev })
}

/// Outcome of the two-sided singular value inequality checks.
#[derive(Debug, Clone)]
pub struct FanReport {
    /// first (j, k, excess) with mu_{j+k}(S+T) > mu_j(S) + mu_k(T)
    pub pointwise_violation: Option<(usize, usize, f64)>,
    /// first (N, excess) where the partial-sum form fails
    pub partial_sum_violation: Option<(usize, f64)>,
    pub pairs_checked: usize,
    pub sums_checked: usize,
}

impl FanReport {
    pub fn ok(&self) -> bool {
        self.pointwise_violation.is_none() && self.partial_sum_violation.is_none()
    }
}

/// Verify mu_{j+k}(S+T) <= mu_j(S) + mu_k(T) for all j + k < M and the
/// partial-sum variant for all N <= M.  `slack` absorbs solver round-off;
/// pass 0 for exact data.
pub fn check_fan(
    s1: &SpectralSequence,
    s2: &SpectralSequence,
    s12: &SpectralSequence,
    slack: f64,
) -> Result<FanReport> {
    let a = s1.singular_values()?;
    let b = s2.singular_values()?;
    let c = s12.singular_values()?;
    let m = c.len().min(a.len()).min(b.len());

    let mut pointwise_violation = None;
    let mut pairs_checked = 0;
    'outer: for j in 0..m {
        for k in 0..m - j {
            pairs_checked += 1;
            let excess = c[j + k] - (a[j] + b[k]);
            if excess > slack {
                pointwise_violation = Some((j, k, excess));
                break 'outer;
            }
        }
    }

    let mut partial_sum_violation = None;
    let (mut sa, mut sb, mut sc) = (0.0, 0.0, 0.0);
    let mut sums_checked = 0;
    for n in 0..m {
        sa += a[n];
        sb += b[n];
        sc += c[n];
        sums_checked += 1;
        let excess = sc - (sa + sb);
        if excess > slack * (n + 1) as f64 && partial_sum_violation.is_none() {
            partial_sum_violation = Some((n + 1, excess));
        }
    }

    Ok(FanReport {
        pointwise_violation,
        partial_sum_violation,
        pairs_checked,
        sums_checked,
    })
}

#[derive(Debug, Clone)]
pub struct WeylModulusReport {
    /// first (N, excess) with sum |lambda_j| > sum mu_j
    pub violation: Option<(usize, f64)>,
    pub sums_checked: usize,
}

impl WeylModulusReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Verify sum_{j<N} |lambda_j| <= sum_{j<N} mu_j for all N up to the shorter
/// prefix.
pub fn check_weyl_modulus(
    eigs: &SpectralSequence,
    sing: &SpectralSequence,
    slack: f64,
) -> Result<WeylModulusReport> {
    let lam = eigs.moduli();
    let mu = sing.singular_values()?;
    let m = lam.len().min(mu.len());
    let mut violation = None;
    let (mut sl, mut sm) = (0.0, 0.0);
    for n in 0..m {
        sl += lam[n];
        sm += mu[n];
        let excess = sl - sm;
        if excess > slack * (n + 1) as f64 {
            violation = Some((n + 1, excess));
            break;
        }
    }
    Ok(WeylModulusReport {
        violation,
        sums_checked: m,
    })
}

fn fmt_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}j", z.re, z.im)
    } else {
        format!("{}-{}j", z.re, -z.im)
    }
}

fn parse_complex(s: &str, line: usize) -> Result<Complex64> {
    let s = s.trim();
    let err = |m: &str| Error::Parse {
        line,
        message: format!("{m}: `{s}`"),
    };
    let body = s.strip_suffix('j').ok_or_else(|| err("complex value must end in j"))?;
    // split at the sign of the imaginary part (skip a leading sign)
    let mut split = None;
    for (i, c) in body.char_indices().skip(1) {
        if (c == '+' || c == '-') && !matches!(&body[i - 1..i], "e" | "E") {
            split = Some(i);
        }
    }
    let i = split.ok_or_else(|| err("missing imaginary part"))?;
    let re: f64 = body[..i].parse().map_err(|_| err("bad real part"))?;
    let im: f64 = body[i..].parse().map_err(|_| err("bad imaginary part"))?;
    Ok(Complex64::new(re, im))
}

/// Write the spectrum CSV: `index,value` (complex as re+imj) or
/// `index,lambda_plus,lambda_minus`.  Doubles use shortest round-trip
/// encoding, so write-then-read is bit exact.
pub fn write_csv(s: &SpectralSequence, w: &mut impl Write) -> Result<()> {
    match &s.data {
        Data::Singular(v) => {
            writeln!(w, "index,value")?;
            for (i, x) in v.iter().enumerate() {
                writeln!(w, "{i},{x}")?;
            }
        }
        Data::EigenComplex(v) => {
            writeln!(w, "index,value")?;
            for (i, z) in v.iter().enumerate() {
                writeln!(w, "{i},{}", fmt_complex(*z))?;
            }
        }
        Data::EigenSigned { plus, minus } => {
            writeln!(w, "index,lambda_plus,lambda_minus")?;
            let rows = plus.len().max(minus.len());
            for i in 0..rows {
                let p = plus.get(i).map(|x| x.to_string()).unwrap_or_default();
                let m = minus.get(i).map(|x| x.to_string()).unwrap_or_default();
                writeln!(w, "{i},{p},{m}")?;
            }
        }
    }
    Ok(())
}

/// Read a spectrum CSV produced by [`write_csv`] (or hand-written in the same
/// shape).  Unsorted singular input is accepted as a diagnostic stream only
/// when every value is finite and non-negative.
pub fn read_csv(r: impl BufRead) -> Result<SpectralSequence> {
    let mut lines = r.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((i, line)) => {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                break (i, t.to_string());
            }
            None => return Err(Error::EmptyInput),
        }
    };
    let signed = match header.1.as_str() {
        "index,value" => false,
        "index,lambda_plus,lambda_minus" => true,
        other => {
            return Err(Error::Parse {
                line: header.0 + 1,
                message: format!("unrecognized header `{other}`"),
            })
        }
    };

    let mut singular = Vec::new();
    let mut complex = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut any_complex = false;
    for (i, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let mut cols = t.split(',');
        let _idx = cols.next().ok_or(Error::Parse {
            line: lineno,
            message: "missing index column".into(),
        })?;
        if signed {
            let p = cols.next().unwrap_or("");
            let m = cols.next().unwrap_or("");
            if !p.is_empty() {
                plus.push(p.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad lambda_plus `{p}`"),
                })?);
            }
            if !m.is_empty() {
                minus.push(m.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad lambda_minus `{m}`"),
                })?);
            }
        } else {
            let v = cols.next().ok_or(Error::Parse {
                line: lineno,
                message: "missing value column".into(),
            })?;
            let v = v.trim();
            if v.ends_with('j') {
                any_complex = true;
                complex.push(parse_complex(v, lineno)?);
            } else if any_complex {
                return Err(Error::Parse {
                    line: lineno,
                    message: "mixed real and complex values".into(),
                });
            } else {
                singular.push(v.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad value `{v}`"),
                })?);
            }
        }
    }

    if signed {
        SpectralSequence::eigen_signed(plus, minus)
    } else if any_complex {
        SpectralSequence::eigen_complex(complex)
    } else if singular.is_empty() {
        Err(Error::EmptyInput)
    } else if check_nonneg_nonincreasing(&singular, "value").is_ok() {
        SpectralSequence::singular(singular)
    } else if singular.iter().all(|v| v.is_finite() && *v >= 0.0) {
        Ok(SpectralSequence::singular_unchecked(singular))
    } else {
        Err(Error::NotSorted("negative or non-finite singular values".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rv::karamata_integral;

    fn gseq(g: &RegVarFunction, m: usize) -> Vec<f64> {
        (0..m).map(|j| g.eval(j as f64)).collect()
    }

    #[test]
    fn quasi_norm_examples() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let s = SpectralSequence::singular(gseq(&g, 1000)).unwrap();
        assert!((quasi_norm_g(&s, &g).unwrap() - 1.0).abs() < 1e-15);

        let mut v = vec![0.0; 100];
        v[0] = 2.0;
        v[1] = 1.0;
        let s = SpectralSequence::singular(v).unwrap();
        assert!((quasi_norm_g(&s, &g).unwrap() - 2.0).abs() < 1e-15);

        let s = SpectralSequence::singular(vec![0.0; 64]).unwrap();
        assert_eq!(quasi_norm_g(&s, &g).unwrap(), 0.0);
    }

    #[test]
    fn lorentz_norm_examples() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let gi = karamata_integral(&g);

        // mu_j = g(j): brute-force maximum over N on a 10^4 prefix sits at N=1
        let s = SpectralSequence::singular(gseq(&g, 10_000)).unwrap();
        let got = lorentz_norm_g_big(&s, &gi).unwrap();
        let mut acc = 0.0;
        let mut brute = 0.0f64;
        for n in 1..=10_000usize {
            acc += g.eval((n - 1) as f64);
            brute = brute.max(acc / ((n as f64) + 1.0).ln());
        }
        assert!((got - brute).abs() < 1e-14);
        assert!((got - 1.0 / 2f64.ln()).abs() < 1e-12, "got {got}");

        let s = SpectralSequence::singular(vec![0.0; 16]).unwrap();
        assert_eq!(lorentz_norm_g_big(&s, &gi).unwrap(), 0.0);

        let mut v = vec![0.0; 128];
        v[0] = 1.0;
        let s = SpectralSequence::singular(v).unwrap();
        let got = lorentz_norm_g_big(&s, &gi).unwrap();
        assert!((got - 1.0 / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quotient_norm_examples() {
        let m = 1 << 16;
        let g = RegVarFunction::power_log(-0.5, 0.0);
        let v: Vec<f64> = (0..m)
            .map(|j| g.eval(j as f64) + ((j + 1) as f64).powi(-2))
            .collect();
        let s = SpectralSequence::singular(v).unwrap();
        let stats = quotient_norm(&s, &g, 1024).unwrap();
        assert!((stats.last - 1.0).abs() < 1e-3, "last {}", stats.last);
        assert!(stats.last <= stats.prev);

        // finite rank: zero past index 100
        let v: Vec<f64> = (0..m).map(|j| if j < 100 { 1.0 } else { 0.0 }).collect();
        let s = SpectralSequence::singular(v).unwrap();
        let stats = quotient_norm(&s, &g, 4096).unwrap();
        assert_eq!(stats.last, 0.0);

        // oscillating factor 2 + (-1)^j has limsup ratio 3
        let v: Vec<f64> = (0..m)
            .map(|j| g.eval(j as f64) * (2.0 + if j % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        let s = SpectralSequence::singular_unchecked(v);
        let stats = quotient_norm(&s, &g, 1024).unwrap();
        assert!((stats.last - 3.0).abs() < 1e-12);

        assert!(matches!(
            quotient_norm(&s, &g, m),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn partial_sum_examples() {
        let s = SpectralSequence::singular(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(s.partial_sum(0).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(s.partial_sum(3).unwrap().re, 1.75);
        assert!(s.partial_sum(4).is_err());

        // exact cancellation for matched signed channels
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let plus: Vec<f64> = (0..64).map(|j| g.eval(2.0 * j as f64)).collect();
        let s = SpectralSequence::eigen_signed(plus.clone(), plus).unwrap();
        for k in 0..32 {
            assert_eq!(s.partial_sum(2 * k).unwrap().re, 0.0);
        }
    }

    #[test]
    fn merge_breaks_ties_positive_first() {
        let s = SpectralSequence::eigen_signed(vec![3.0, 1.0], vec![3.0, 2.0]).unwrap();
        assert_eq!(s.merged_signed(), vec![3.0, -3.0, -2.0, 1.0]);
    }

    #[test]
    fn fan_trivial_examples() {
        let z = SpectralSequence::singular(vec![0.0; 8]).unwrap();
        assert!(check_fan(&z, &z, &z, 0.0).unwrap().ok());

        let g = RegVarFunction::power_log(-1.0, 0.0);
        let d = SpectralSequence::singular(gseq(&g, 8)).unwrap();
        assert!(check_fan(&d, &d, &z, 0.0).unwrap().ok());
    }

    #[test]
    fn weyl_modulus_trivial_examples() {
        // normal operator: equality
        let mu = SpectralSequence::singular(vec![3.0, 2.0, 1.0]).unwrap();
        let lam = SpectralSequence::eigen_complex(vec![
            Complex64::new(0.0, 3.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(check_weyl_modulus(&lam, &mu, 0.0).unwrap().ok());

        // nilpotent 2x2 model
        let lam = SpectralSequence::eigen_complex(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let mu = SpectralSequence::singular(vec![1.0, 0.0]).unwrap();
        assert!(check_weyl_modulus(&lam, &mu, 0.0).unwrap().ok());
    }

    #[test]
    fn csv_round_trip_singular() {
        let s = SpectralSequence::singular(vec![1.5, 0.1 + 0.2, 1e-300, 0.0]).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(s.singular_values().unwrap(), back.singular_values().unwrap());
    }

    #[test]
    fn csv_round_trip_complex_and_signed() {
        let s = SpectralSequence::eigen_complex(vec![
            Complex64::new(1.0, -2.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(1e-17, 3e-18),
        ])
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(s.complex_values().unwrap(), back.complex_values().unwrap());

        let s = SpectralSequence::eigen_signed(vec![2.0, 1.0, 0.5], vec![1.75]).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        let (p, m) = back.signed_parts().unwrap();
        assert_eq!(p, &[2.0, 1.0, 0.5]);
        assert_eq!(m, &[1.75]);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(matches!(read_csv(&b""[..]), Err(Error::EmptyInput)));
        let bad = b"index,value\n0,1.0\n1,zzz\n";
        assert!(matches!(read_csv(&bad[..]), Err(Error::Parse { line: 3, .. })));
    }
}
