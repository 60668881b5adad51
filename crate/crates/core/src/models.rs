//! Explicit spectra and constants for the worked examples, plus the
//! synthetic generators feeding the detectors.

use std::f64::consts::{E, PI};
use std::io::BufRead;
use std::path::Path;

use crate::counting::{sequence_from_counting, CountingFunction, CountingModel};
use crate::error::{Error, Result};
use crate::gamma::{ball_volume, gamma, sphere_area};
use crate::lattice::r2_table;
use crate::rv::RegVarFunction;
use crate::spectra::SpectralSequence;

/// q-deformed number [x]_q = (q^x - q^-x)/(q - q^-1).
pub fn q_number(x: f64, q: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

/// Reciprocal spectrum of the zero-counting main-term model: inverts
/// N(nu) = 2 (nu/2pi)(log(nu/2pi) - 1) above its positivity floor 2 pi e and
/// returns the M largest reciprocals, non-increasing.
pub fn zeta_rvm_sequence(m: usize) -> Result<SpectralSequence> {
    if m < 2 {
        return Err(Error::domain("need at least 2 entries"));
    }
    sequence_from_counting(&CountingFunction::Model(CountingModel::RvmReciprocal), m)
}

/// Reciprocals of tabulated zero ordinates: each zero used twice (the spectrum
/// is symmetric about the real axis), truncated to M entries.
pub fn zeta_file_sequence(path: &Path, m: usize) -> Result<SpectralSequence> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut zeros: Vec<f64> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("bad ordinate `{t}`"),
        })?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("ordinate must be a positive finite number, got {v}"),
            });
        }
        if let Some(&prev) = zeros.last() {
            if v <= prev {
                return Err(Error::NotAscending { line: i + 1 });
            }
        }
        zeros.push(v);
    }
    if zeros.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut vals = Vec::with_capacity((2 * zeros.len()).min(m));
    'fill: for z in zeros {
        for _ in 0..2 {
            if vals.len() >= m {
                break 'fill;
            }
            vals.push(1.0 / z);
        }
    }
    SpectralSequence::singular(vals)
}

/// Aggregated point spectrum of the product model: values d + n with
/// d = [x]_q running over the q-spinor ladder and n over torus levels,
/// weighted by ladder multiplicity (2x) times the lattice count r2(n).
#[derive(Debug, Clone)]
pub struct PodlesSpectrum {
    /// (eigenvalue of A, multiplicity), sorted ascending
    pairs: Vec<(f64, u64)>,
    /// running multiplicity totals aligned with `pairs`
    cumulative: Vec<u64>,
}

impl PodlesSpectrum {
    pub fn build(q: f64, lambda_max: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("need 0 < q < 1, got {q}")));
        }
        if !(lambda_max > 1.0) || !lambda_max.is_finite() {
            return Err(Error::domain("need lambda_max > [1]_q = 1"));
        }
        let r2 = r2_table(lambda_max as usize + 1);
        let mut pairs: Vec<(f64, u64)> = Vec::new();
        let mut x = 1u64;
        loop {
            let d = q_number(x as f64, q);
            if !d.is_finite() {
                return Err(Error::Overflow { x });
            }
            if d > lambda_max {
                break;
            }
            let budget = (lambda_max - d).floor() as usize;
            for (n, &r) in r2.iter().enumerate().take(budget + 1) {
                if r > 0 {
                    pairs.push((d + n as f64, 2 * x * r as u64));
                }
            }
            x += 1;
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
        let mut cumulative = Vec::with_capacity(pairs.len());
        let mut acc = 0u64;
        for &(_, mult) in &pairs {
            acc += mult;
            cumulative.push(acc);
        }
        Ok(PodlesSpectrum { pairs, cumulative })
    }

    pub fn pairs(&self) -> &[(f64, u64)] {
        &self.pairs
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Large-eigenvalue counting N(A; lambda) = #{j : lambda_j(A) < lambda}.
    pub fn count_below(&self, lambda: f64) -> u64 {
        let idx = self.pairs.partition_point(|&(v, _)| v < lambda);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// The scaled statistic N(A; lambda)/(lambda (log lambda)^2) along
    /// dyadic windows lambda_max / 2^k, ordered by increasing lambda.
    pub fn scaled_counting_curve(&self, lambda_max: f64, windows: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for k in (0..windows).rev() {
            let lambda = lambda_max / 2f64.powi(k as i32);
            if lambda <= E {
                continue;
            }
            let stat = self.count_below(lambda) as f64 / (lambda * lambda.ln().powi(2));
            out.push((lambda, stat));
        }
        out
    }

    /// Reciprocal spectrum lambda_j(A^-1), largest first, at most `cap`
    /// entries.
    pub fn sequence(&self, cap: usize) -> Result<SpectralSequence> {
        let total = self.total_multiplicity().min(cap as u64) as usize;
        let mut vals = Vec::with_capacity(total);
        'outer: for &(v, mult) in &self.pairs {
            for _ in 0..mult {
                if vals.len() >= total {
                    break 'outer;
                }
                vals.push(1.0 / v);
            }
        }
        SpectralSequence::singular(vals)
    }
}

/// Full reciprocal spectrum of the product model up to lambda_max.
pub fn podles_torus_sequence(q: f64, lambda_max: f64) -> Result<SpectralSequence> {
    PodlesSpectrum::build(q, lambda_max)?.sequence(usize::MAX)
}

/// Weyl-law constant c(n, alpha) of the anharmonic family; alpha = infinity
/// selects the closed form 2 n^n / n! (2 pi)^-n |B^n|.
pub fn simon_constant(n: u32, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("need alpha > 0, got {alpha}")));
    }
    let nf = n as f64;
    if alpha.is_infinite() {
        let mut n_fact = 1.0f64;
        for k in 1..=n {
            n_fact *= k as f64;
        }
        return Ok(2.0 * nf.powi(n as i32) / n_fact * (2.0 * PI).powi(-(n as i32)) * ball_volume(n));
    }
    let a = 1.0 / alpha;
    let factorial_n_minus_1 = gamma(nf);
    Ok((1.0 / factorial_n_minus_1)
        * (nf / 2.0 + a).powi(n as i32 - 1)
        * PI.powf(-nf / 2.0)
        * gamma(a + 1.0)
        / gamma(nf / 2.0 + a + 1.0))
}

/// Spinor Weyl-law constants for conformally cusp metrics:
/// c1 = 2^[n/2] (2 pi)^(-n/2) |B^n| and c2 with the sphere area instead.
pub fn cusp_constants(n: u32) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    let scale = 2f64.powi((n / 2) as i32) * (2.0 * PI).powf(-(n as f64) / 2.0);
    Ok((scale * ball_volume(n), scale * sphere_area(n)))
}

/// Perturbation profiles for planted sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    None,
    /// multiply by 1 + 1/log(j + 3)
    LogCorrection,
    /// multiply by 1 +- amplitude on alternating dyadic blocks
    Oscillating { amplitude: f64 },
    /// overwrite the first k entries with the given height, then re-sort
    FiniteRank { k: usize, height: f64 },
}

impl Perturbation {
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "none" {
            return Ok(Perturbation::None);
        }
        if spec == "og" {
            return Ok(Perturbation::LogCorrection);
        }
        if let Some(a) = spec.strip_prefix("osc:") {
            let amplitude: f64 = a
                .parse()
                .map_err(|_| Error::bad_spec(spec, "bad amplitude"))?;
            return Ok(Perturbation::Oscillating { amplitude });
        }
        if let Some(rest) = spec.strip_prefix("rank:") {
            let (k, h) = rest
                .split_once(',')
                .ok_or_else(|| Error::bad_spec(spec, "expected rank:<k>,<height>"))?;
            return Ok(Perturbation::FiniteRank {
                k: k.parse().map_err(|_| Error::bad_spec(spec, "bad k"))?,
                height: h.parse().map_err(|_| Error::bad_spec(spec, "bad height"))?,
            });
        }
        Err(Error::bad_spec(spec, "expected none|og|osc:<a>|rank:<k>,<h>"))
    }
}

fn apply_perturbation(vals: &mut Vec<f64>, pert: Perturbation) -> bool {
    match pert {
        Perturbation::None => true,
        Perturbation::LogCorrection => {
            for (j, v) in vals.iter_mut().enumerate() {
                *v *= 1.0 + 1.0 / ((j as f64) + 3.0).ln();
            }
            true
        }
        Perturbation::Oscillating { amplitude } => {
            for (j, v) in vals.iter_mut().enumerate() {
                let block = 63 - ((j as u64) + 1).leading_zeros();
                let sign = if block % 2 == 0 { 1.0 } else { -1.0 };
                *v *= 1.0 + sign * amplitude;
            }
            // dyadic modulation breaks monotonicity by design
            false
        }
        Perturbation::FiniteRank { k, height } => {
            // prepend k entries, re-sort, keep the original length
            let m = vals.len();
            let mut head = vec![height; k];
            head.append(vals);
            head.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
            head.truncate(m);
            *vals = head;
            true
        }
    }
}

/// lambda_j = c g(j) with g = power-log(rho, q), optionally perturbed.
pub fn planted_sequence(
    c: f64,
    rho: f64,
    q: f64,
    m: usize,
    pert: Perturbation,
) -> Result<SpectralSequence> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("need c > 0, got {c}")));
    }
    let g = RegVarFunction::power_log(rho, q);
    let mut vals: Vec<f64> = (0..m).map(|j| c * g.eval(j as f64)).collect();
    let sorted = apply_perturbation(&mut vals, pert);
    if sorted && rho < 0.0 && g.monotone_from() == 0.0 {
        SpectralSequence::singular(vals)
    } else {
        Ok(SpectralSequence::singular_unchecked(vals))
    }
}

/// Signed plant with independent channel constants c+ and c-.
pub fn planted_signed(
    c_plus: f64,
    c_minus: f64,
    rho: f64,
    q: f64,
    m: usize,
    pert: Perturbation,
) -> Result<SpectralSequence> {
    let g = RegVarFunction::power_log(rho, q);
    let half = m / 2;
    let mut plus: Vec<f64> = (0..half).map(|j| c_plus * g.eval(j as f64)).collect();
    let mut minus: Vec<f64> = (0..m - half).map(|j| c_minus * g.eval(j as f64)).collect();
    let ok_p = apply_perturbation(&mut plus, pert);
    let ok_m = apply_perturbation(&mut minus, pert);
    if ok_p && ok_m && rho < 0.0 && g.monotone_from() == 0.0 {
        SpectralSequence::eigen_signed(plus, minus)
    } else {
        Ok(SpectralSequence::eigen_signed_unchecked(plus, minus))
    }
}

/// lambda_j = g(j) for an arbitrary weight function.
pub fn generator_sequence(g: &RegVarFunction, m: usize) -> Result<SpectralSequence> {
    let vals: Vec<f64> = (0..m).map(|j| g.eval(j as f64)).collect();
    if g.monotone_from() == 0.0 && g.index() < 0.0 {
        SpectralSequence::singular(vals)
    } else {
        Ok(SpectralSequence::singular_unchecked(vals))
    }
}

/// Parsed model spec from the CLI mini-language.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    ZetaRvm { m: usize },
    ZetaFile { path: String, m: usize },
    Podles { q: f64, lambda_max: f64 },
    Planted { c: f64, rho: f64, q: f64, m: usize, pert: Perturbation },
    Generator { gspec: String, m: usize },
}

impl ModelSpec {
    /// Parse `zeta-rvm:<M>`, `zeta-file:<path>,<M>`, `podles:<q>,<lmax>`,
    /// `planted:<c>,<rho>,<q>,<M>,<perturbation>`, `generator:<gspec>,<M>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::bad_spec(spec, "expected `model:args`"))?;
        let int = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| Error::bad_spec(spec, format!("bad count `{s}`")))
        };
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::bad_spec(spec, format!("bad number `{s}`")))
        };
        match head {
            "zeta-rvm" => Ok(ModelSpec::ZetaRvm { m: int(rest)? }),
            "zeta-file" => {
                let (path, m) = rest
                    .rsplit_once(',')
                    .ok_or_else(|| Error::bad_spec(spec, "expected zeta-file:<path>,<M>"))?;
                Ok(ModelSpec::ZetaFile {
                    path: path.to_string(),
                    m: int(m)?,
                })
            }
            "podles" => {
                let (q, l) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::bad_spec(spec, "expected podles:<q>,<lambda_max>"))?;
                Ok(ModelSpec::Podles {
                    q: num(q)?,
                    lambda_max: num(l)?,
                })
            }
            "planted" => {
                // M is optional: planted:<c>,<rho>,<q>[,<M>],<perturbation>
                let parts: Vec<&str> = rest.splitn(5, ',').collect();
                if parts.len() == 5 {
                    if let Ok(m) = parts[3].trim().parse::<usize>() {
                        return Ok(ModelSpec::Planted {
                            c: num(parts[0])?,
                            rho: num(parts[1])?,
                            q: num(parts[2])?,
                            m,
                            pert: Perturbation::parse(parts[4])?,
                        });
                    }
                }
                let parts: Vec<&str> = rest.splitn(4, ',').collect();
                if parts.len() != 4 {
                    return Err(Error::bad_spec(
                        spec,
                        "expected planted:<c>,<rho>,<q>[,<M>],<perturbation>",
                    ));
                }
                Ok(ModelSpec::Planted {
                    c: num(parts[0])?,
                    rho: num(parts[1])?,
                    q: num(parts[2])?,
                    m: 1 << 20,
                    pert: Perturbation::parse(parts[3])?,
                })
            }
            "generator" => {
                let (gspec, m) = rest
                    .rsplit_once(',')
                    .ok_or_else(|| Error::bad_spec(spec, "expected generator:<gspec>,<M>"))?;
                Ok(ModelSpec::Generator {
                    gspec: gspec.to_string(),
                    m: int(m)?,
                })
            }
            _ => Err(Error::bad_spec(spec, "unknown model")),
        }
    }

    /// Materialize the spectrum.
    pub fn build(&self) -> Result<SpectralSequence> {
        match self {
            ModelSpec::ZetaRvm { m } => zeta_rvm_sequence(*m),
            ModelSpec::ZetaFile { path, m } => zeta_file_sequence(Path::new(path), *m),
            ModelSpec::Podles { q, lambda_max } => podles_torus_sequence(*q, *lambda_max),
            ModelSpec::Planted { c, rho, q, m, pert } => planted_sequence(*c, *rho, *q, *m, *pert),
            ModelSpec::Generator { gspec, m } => {
                let g = RegVarFunction::parse(gspec)?;
                generator_sequence(&g, *m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{CountingFunction, LambdaGrid};
    use crate::spectra::SpectralPart;

    #[test]
    fn q_number_examples() {
        assert!((q_number(1.0, 0.5) - 1.0).abs() < 1e-15);
        assert!((q_number(1.0, 0.123) - 1.0).abs() < 1e-15);
        // q -> 1 limit recovers x
        assert!((q_number(3.0, 0.999) - 3.0).abs() < 1e-4);
        // direct arithmetic for [3/2]_{1/2}
        let expect = (0.5f64.powf(1.5) - 0.5f64.powf(-1.5)) / (0.5 - 2.0);
        assert!((q_number(1.5, 0.5) - expect).abs() < 1e-15);
        assert!((expect - 1.6499158227686108).abs() < 1e-12);
    }

    #[test]
    fn rvm_sequence_counting_round_trip() {
        let m = 4096;
        let s = zeta_rvm_sequence(m).unwrap();
        let vals = s.singular_values().unwrap();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        // the step count at each stored value is within 1 of the model
        let n = CountingFunction::from_sequence(&s, SpectralPart::Singular).unwrap();
        let model = CountingModel::RvmReciprocal;
        for j in [10usize, 100, 1000, 4000] {
            let lambda = vals[j];
            let diff = (n.eval(lambda).unwrap() - model.eval(lambda)).abs();
            assert!(diff <= 1.0 + 1e-6, "j = {j}: diff = {diff}");
        }
    }

    #[test]
    fn rvm_two_smallest_zeros() {
        let s = zeta_rvm_sequence(2).unwrap();
        let vals = s.singular_values().unwrap();
        // bisection oracle: nu_j solves rvm(nu) = j + 1
        for (j, &v) in vals.iter().enumerate() {
            let target = (j + 1) as f64;
            let (mut lo, mut hi) = (17.0f64, 1e3f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if crate::counting::rvm_counting(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((v - 1.0 / lo).abs() < 1e-9, "j = {j}");
        }
    }

    #[test]
    fn zeta_file_parsing() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();

        let p = dir.path().join("one.txt");
        writeln!(std::fs::File::create(&p).unwrap(), "14.134725").unwrap();
        let s = zeta_file_sequence(&p, 10).unwrap();
        let v = s.singular_values().unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0], v[1]);
        assert!((v[0] - 1.0 / 14.134725).abs() < 1e-15);

        let p = dir.path().join("empty.txt");
        std::fs::File::create(&p).unwrap();
        assert!(matches!(zeta_file_sequence(&p, 4), Err(Error::EmptyInput)));

        let p = dir.path().join("desc.txt");
        write!(std::fs::File::create(&p).unwrap(), "10.0\n9.0\n").unwrap();
        assert!(matches!(
            zeta_file_sequence(&p, 4),
            Err(Error::NotAscending { line: 2 })
        ));

        let p = dir.path().join("bad.txt");
        write!(std::fs::File::create(&p).unwrap(), "# header\n14.1\nxyz\n").unwrap();
        assert!(matches!(
            zeta_file_sequence(&p, 4),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn podles_enumeration_matches_brute_force() {
        let q = 0.5;
        let lambda_max = 50.0;
        let spec = PodlesSpectrum::build(q, lambda_max).unwrap();

        // independent double loop over (x, k) in Z^2
        let mut brute: Vec<(f64, u64)> = Vec::new();
        let mut x = 1u64;
        loop {
            let d = q_number(x as f64, q);
            if d > lambda_max {
                break;
            }
            let bound = (lambda_max - d).sqrt().ceil() as i64 + 1;
            let mut by_n: std::collections::BTreeMap<u64, u64> = Default::default();
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let n = (a * a + b * b) as u64;
                    if d + n as f64 <= lambda_max {
                        *by_n.entry(n).or_default() += 1;
                    }
                }
            }
            for (n, cnt) in by_n {
                brute.push((d + n as f64, 2 * x * cnt));
            }
            x += 1;
        }
        brute.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        assert_eq!(spec.pairs().len(), brute.len());
        for (a, b) in spec.pairs().iter().zip(&brute) {
            assert!((a.0 - b.0).abs() < 1e-12);
            assert_eq!(a.1, b.1, "multiplicity at {}", a.0);
        }
    }

    #[test]
    fn podles_first_reciprocal_eigenvalue_is_one() {
        let s = PodlesSpectrum::build(0.5, 30.0).unwrap().sequence(16).unwrap();
        assert_eq!(s.singular_values().unwrap()[0], 1.0);
    }

    #[test]
    fn podles_scaled_counting_tracks_the_constant() {
        // small run; the acceptance suite does lambda_max = 1e5
        let spec = PodlesSpectrum::build(0.5, 4096.0).unwrap();
        let curve = spec.scaled_counting_curve(4096.0, 6);
        let target = PI / 0.5f64.ln().powi(2);
        let rel: Vec<f64> = curve
            .iter()
            .map(|&(_, s)| (s - target).abs() / target)
            .collect();
        assert!(rel.last().unwrap() < &0.30, "rel {:?}", rel);
        // error shrinks with lambda
        assert!(rel[rel.len() - 1] <= rel[0]);
    }

    #[test]
    fn podles_rejects_bad_parameters() {
        assert!(PodlesSpectrum::build(1.5, 100.0).is_err());
        assert!(PodlesSpectrum::build(0.5, 0.5).is_err());
    }

    #[test]
    fn simon_constant_examples() {
        let inv_pi = 1.0 / PI;
        // both closed forms at (2, infinity)
        let a = simon_constant(2, f64::INFINITY).unwrap();
        assert!((a - inv_pi).abs() <= 1e-12, "{a}");
        // finite-alpha route; identical to 1/pi for n = 2 by the
        // Gamma recurrence
        let b = simon_constant(2, 1000.0).unwrap();
        assert!((b - inv_pi).abs() <= 1e-3);
        assert!((b - inv_pi).abs() <= 1e-12);
        // a genuinely alpha-dependent case
        let c32 = simon_constant(3, 2.0).unwrap();
        assert!((c32 - 1.0 / (2.0 * PI)).abs() < 1e-12, "{c32}");
        assert!(simon_constant(1, 1.0).is_err());
        assert!(simon_constant(2, -1.0).is_err());
    }

    #[test]
    fn simon_constant_alpha_limit_is_monotone_ish() {
        let target = simon_constant(3, f64::INFINITY).unwrap();
        let mut last = f64::INFINITY;
        for alpha in [10.0, 100.0, 1000.0, 10_000.0] {
            let gap = (simon_constant(3, alpha).unwrap() - target).abs();
            assert!(gap <= last * (1.0 + 1e-9));
            last = gap;
        }
        // O(1/alpha) empirically
        assert!(last < 1e-4);
    }

    #[test]
    fn cusp_constant_examples() {
        let (c1, c2) = cusp_constants(2).unwrap();
        assert!((c1 - 1.0).abs() <= 1e-12);
        assert!((c2 - 2.0).abs() <= 1e-12);
        let (c1, c2) = cusp_constants(3).unwrap();
        assert!((c1 - 0.5319230405352435).abs() < 1e-12);
        assert!((c2 - 1.5957691216057306).abs() < 1e-12);
        assert!(cusp_constants(1).is_err());
    }

    #[test]
    fn planted_detections() {
        use crate::asymptotics::{analyze_sequence, DyadicGrid, RateHint, Verdict, WindowPlan};
        let m = 1 << 20;
        let grid = DyadicGrid::up_to(m);
        let plan = WindowPlan::new(RateHint::Log);

        let s = planted_sequence(1.0, -1.0, 0.0, m, Perturbation::None).unwrap();
        let rep = analyze_sequence(&s, &RegVarFunction::power_log(-1.0, 0.0), &grid, &plan)
            .unwrap();
        assert!(rep.spectrally_measurable);
        assert!((rep.nc_integral.unwrap() - 1.0).abs() < 5e-3);

        let s = planted_sequence(1.0, -1.0, 0.0, m, Perturbation::LogCorrection).unwrap();
        let rep = analyze_sequence(&s, &RegVarFunction::power_log(-1.0, 0.0), &grid, &plan)
            .unwrap();
        assert!(rep.spectrally_measurable);
        assert!((rep.nc_integral.unwrap() - 1.0).abs() < 5e-3);
        let lp = rep.lambda_plus.unwrap();
        assert_eq!(lp.verdict, Verdict::Convergent);
        assert!((lp.best() - 1.0).abs() < 5e-3, "lambda+ {}", lp.best());

        let s = planted_sequence(1.0, -1.0, 0.0, m, Perturbation::Oscillating { amplitude: 0.5 })
            .unwrap();
        let rep = analyze_sequence(&s, &RegVarFunction::power_log(-1.0, 0.0), &grid, &plan)
            .unwrap();
        let lp = rep.lambda_plus.unwrap();
        assert_eq!(lp.verdict, Verdict::Divergent);
        assert!((lp.band.0 - 0.5).abs() < 1e-9 && (lp.band.1 - 1.5).abs() < 1e-9);
    }

    #[test]
    fn finite_rank_perturbation_shifts_nothing_asymptotically() {
        let m = 1 << 18;
        let s0 = planted_sequence(1.0, -1.0, 0.0, m, Perturbation::None).unwrap();
        let s1 = planted_sequence(
            1.0,
            -1.0,
            0.0,
            m,
            Perturbation::FiniteRank { k: 32, height: 7.0 },
        )
        .unwrap();
        let v0 = s0.singular_values().unwrap();
        let v1 = s1.singular_values().unwrap();
        assert_eq!(v1[0], 7.0);
        // past the insertion the tail is the original shifted by 32
        assert_eq!(v1[100], v0[100 - 32]);
        assert_eq!(v1.len(), v0.len());
    }

    #[test]
    fn model_spec_parsing() {
        assert!(matches!(
            ModelSpec::parse("zeta-rvm:1000"),
            Ok(ModelSpec::ZetaRvm { m: 1000 })
        ));
        assert!(matches!(
            ModelSpec::parse("generator:power-log:-1,1,1024"),
            Ok(ModelSpec::Generator { ref gspec, m: 1024 }) if gspec == "power-log:-1,1"
        ));
        assert!(matches!(
            ModelSpec::parse("planted:1,-1,0,4096,osc:0.5"),
            Ok(ModelSpec::Planted { m: 4096, pert: Perturbation::Oscillating { .. }, .. })
        ));
        // M defaults to 2^20 when omitted
        assert!(matches!(
            ModelSpec::parse("planted:1,-1,0,none"),
            Ok(ModelSpec::Planted { m: 1048576, pert: Perturbation::None, .. })
        ));
        assert!(matches!(
            ModelSpec::parse("planted:1,-1,0,rank:5,2.0"),
            Ok(ModelSpec::Planted { m: 1048576, pert: Perturbation::FiniteRank { k: 5, .. }, .. })
        ));
        assert!(ModelSpec::parse("planted:1,-1,none").is_err());
        assert!(ModelSpec::parse("???").is_err());
    }

    #[test]
    fn scaled_counting_limit_on_podles_export() {
        use crate::asymptotics::{RateHint, WindowPlan};
        // the small-lambda side: counting of A^-1 from the sequence itself
        let s = podles_torus_sequence(0.5, 2048.0).unwrap();
        let n = CountingFunction::from_sequence(&s, SpectralPart::Singular).unwrap();
        let h = RegVarFunction::power_log(1.0, 2.0);
        let grid = LambdaGrid::new(0.25, n.floor().unwrap());
        let e = crate::counting::scaled_counting_limit(&n, &h, &grid, &WindowPlan::new(RateHint::Log))
            .unwrap();
        // the statistic heads toward pi/(log q)^2 (slow log^2 rate; wide gate)
        let target = PI / 0.5f64.ln().powi(2);
        assert!((e.estimate - target).abs() / target < 0.5, "est {}", e.estimate);
    }
}
