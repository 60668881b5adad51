//! Counting functions, their generalized inverses, and the equivalence
//! between counting asymptotics and eigenvalue asymptotics.

use crate::asymptotics::{Abscissa, LimitEstimate, WindowPlan};
use crate::error::{Error, Result};
use crate::rv::RegVarFunction;
use crate::spectra::{SpectralPart, SpectralSequence};

/// Bisection stops at this relative interval width.
const INVERT_REL_TOL: f64 = 1e-12;

/// Smooth counting models addressable from the CLI.
#[derive(Debug, Clone)]
pub enum CountingModel {
    /// N(lambda) = c lambda^-p |log lambda|^q for lambda <= 1/e, continued as
    /// c e^p (e lambda)^-p above.
    SmallLambda { c: f64, p: f64, q: f64 },
    /// Counting function of the reciprocal of the zero-counting main term
    /// 2 (nu/2pi)(log(nu/2pi) - 1); positive for nu above 2 pi e.
    RvmReciprocal,
}

impl CountingModel {
    pub fn eval(&self, lambda: f64) -> f64 {
        match self {
            CountingModel::SmallLambda { c, p, q } => {
                let e_inv = (-1.0f64).exp();
                if lambda <= e_inv {
                    c * lambda.powf(-p) * (-lambda.ln()).powf(*q)
                } else {
                    // log-free monotone continuation, continuous at 1/e
                    c * std::f64::consts::E.powf(*p) * (std::f64::consts::E * lambda).powf(-p)
                }
            }
            CountingModel::RvmReciprocal => rvm_counting(1.0 / lambda),
        }
    }

    /// Parse `rvm` or `smalllam:<c>,<p>,<q>`.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "rvm" {
            return Ok(CountingModel::RvmReciprocal);
        }
        if let Some(rest) = spec.strip_prefix("smalllam:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::bad_spec(spec, "expected smalllam:<c>,<p>,<q>"));
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::bad_spec(spec, "bad number"))?;
            if !(nums[0] > 0.0) || !(nums[1] > 0.0) {
                return Err(Error::bad_spec(spec, "need c > 0 and p > 0"));
            }
            return Ok(CountingModel::SmallLambda {
                c: nums[0],
                p: nums[1],
                q: nums[2],
            });
        }
        Err(Error::bad_spec(spec, "expected `rvm` or `smalllam:...`"))
    }
}

/// Large-argument zero-counting main term; zero below its positivity floor.
pub fn rvm_counting(nu: f64) -> f64 {
    let floor = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    if nu <= floor {
        return 0.0;
    }
    let x = nu / (2.0 * std::f64::consts::PI);
    2.0 * x * (x.ln() - 1.0)
}

/// A non-increasing map lambda -> N(lambda): exact step data from a stored
/// prefix, or a smooth model.
#[derive(Debug, Clone)]
pub enum CountingFunction {
    /// Values sorted non-increasing; N(lambda) = #{j : values[j] > lambda}.
    Step(Vec<f64>),
    Model(CountingModel),
}

impl CountingFunction {
    /// Step counting function for the chosen part of a stored prefix.
    pub fn from_sequence(s: &SpectralSequence, part: SpectralPart) -> Result<Self> {
        let values = match part {
            SpectralPart::Singular => s.singular_values()?.to_vec(),
            SpectralPart::Plus => s.signed_parts()?.0.to_vec(),
            SpectralPart::Minus => s.signed_parts()?.1.to_vec(),
            SpectralPart::Modulus => {
                let mut m = s.moduli();
                m.sort_by(|a, b| b.partial_cmp(a).expect("finite moduli"));
                m
            }
        };
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for w in values.windows(2) {
            if w[1] > w[0] {
                return Err(Error::NotSorted(
                    "counting needs a non-increasing prefix".into(),
                ));
            }
        }
        Ok(CountingFunction::Step(values))
    }

    /// N(lambda).  Step data refuses to count below its prefix floor, where
    /// unseen entries would be missed.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        match self {
            CountingFunction::Step(values) => {
                let floor = *values.last().expect("non-empty");
                if lambda < floor {
                    return Err(Error::PrefixExhausted { lambda, floor });
                }
                // values sorted descending: count of entries > lambda
                Ok(values.partition_point(|&v| v > lambda) as f64)
            }
            CountingFunction::Model(m) => Ok(m.eval(lambda)),
        }
    }

    /// Prefix floor of step data; models have none.
    pub fn floor(&self) -> Option<f64> {
        match self {
            CountingFunction::Step(v) => v.last().copied(),
            CountingFunction::Model(_) => None,
        }
    }
}

/// Invert a counting function into the sequence it counts.
///
/// Step data comes back verbatim (the generalized inverse
/// sup{lambda : N(lambda) > j} picks the left limit at each jump).  For a
/// continuous model the j-th value solves N(lambda) = j + 1 by bisection.
pub fn sequence_from_counting(n: &CountingFunction, m: usize) -> Result<SpectralSequence> {
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    match n {
        CountingFunction::Step(values) => {
            if m > values.len() {
                return Err(Error::PrefixExceeded {
                    requested: m,
                    len: values.len(),
                });
            }
            SpectralSequence::singular(values[..m].to_vec())
        }
        CountingFunction::Model(model) => {
            // divergence check: the model must climb past m near zero
            let mut probe = 0.5;
            let mut seen = model.eval(probe);
            for _ in 0..4400 {
                if seen > m as f64 {
                    break;
                }
                probe *= 0.5;
                if probe < 1e-300 {
                    return Err(Error::NotDivergent);
                }
                seen = model.eval(probe);
            }
            if seen <= m as f64 {
                return Err(Error::NotDivergent);
            }

            let mut out = Vec::with_capacity(m);
            // the sequence is non-increasing, so each solved value brackets
            // the next one from above
            let mut hi = 1.0f64;
            while model.eval(hi) >= 1.0 {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(Error::NotDivergent);
                }
            }
            for j in 0..m {
                let target = (j + 1) as f64;
                let mut lo = hi;
                loop {
                    lo *= 0.5;
                    if model.eval(lo) >= target {
                        break;
                    }
                    if lo < 1e-300 {
                        return Err(Error::NotDivergent);
                    }
                }
                let mut hi_j = 2.0 * lo;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi_j);
                    if model.eval(mid) >= target {
                        lo = mid;
                    } else {
                        hi_j = mid;
                    }
                    if (hi_j - lo) <= INVERT_REL_TOL * hi_j {
                        break;
                    }
                }
                out.push(0.5 * (lo + hi_j));
                hi = out[j];
            }
            // guard against bisection round-off breaking monotonicity
            for i in 1..out.len() {
                if out[i] > out[i - 1] {
                    out[i] = out[i - 1];
                }
            }
            SpectralSequence::singular(out)
        }
    }
}

/// A decreasing lambda grid lambda_k = lambda_max 2^-k, stopping at the floor.
#[derive(Debug, Clone, Copy)]
pub struct LambdaGrid {
    pub lambda_max: f64,
    pub floor: f64,
    pub max_points: usize,
}

impl LambdaGrid {
    pub fn new(lambda_max: f64, floor: f64) -> Self {
        LambdaGrid {
            lambda_max,
            floor,
            max_points: 200,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut l = self.lambda_max;
        while l >= self.floor && out.len() < self.max_points {
            out.push(l);
            l *= 0.5;
        }
        out
    }
}

/// Windowed diagnostics of h(1/lambda)^-1 N(lambda) along a decreasing grid.
pub fn scaled_counting_limit(
    n: &CountingFunction,
    h: &RegVarFunction,
    grid: &LambdaGrid,
    plan: &WindowPlan,
) -> Result<LimitEstimate> {
    if h.index() <= 0.0 {
        return Err(Error::domain("scaled counting limit needs index > 0"));
    }
    let mut plan = *plan;
    plan.abscissa = Abscissa::Ordinal;
    let mut samples = Vec::new();
    for (k, lambda) in grid.points().into_iter().enumerate() {
        if let Some(floor) = n.floor() {
            if lambda < floor {
                break;
            }
        }
        let stat = n.eval(lambda)? / h.eval(1.0 / lambda);
        samples.push((k as u64 + 1, stat));
    }
    LimitEstimate::from_samples(&samples, &plan)
}

/// Windowed two-sided comparison of eigenvalue and counting asymptotics.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// refined windowed limsup/liminf of h^#(j) lambda_j
    pub seq_limsup: f64,
    pub seq_liminf: f64,
    /// refined windowed limsup/liminf of (h(1/lambda)^-1 N(lambda))^(1/p)
    pub cnt_limsup: f64,
    pub cnt_liminf: f64,
    pub gap_limsup: f64,
    pub gap_liminf: f64,
    /// raw per-window |seq - cnt^(1/p)| gaps on the max channel
    pub window_gaps: Vec<f64>,
}

impl EquivalenceReport {
    /// Gaps shrink (up to `tol` jitter) across the last three windows.
    pub fn gaps_settling(&self, tol: f64) -> bool {
        let g = &self.window_gaps;
        let n = g.len();
        n >= 3 && g[n - 1] <= g[n - 2] + tol && g[n - 2] <= g[n - 3] + tol
    }
}

/// Compare limsup/liminf of h^#(j) lambda_j against the 1/p-th power of the
/// scaled counting statistic, each channel accelerated at the given rate
/// hint.
///
/// Smooth inputs are handled through point curves sampled at dyadic indices
/// (sequence side) and an eighth-octave lambda grid (counting side).  When
/// the in-window spread of either curve exceeds what its own drift accounts
/// for, the input oscillates and both sides switch to deduplicated envelope
/// curves over windows wide enough to hold a full dyadic-block period.
/// The input is re-sorted if necessary; the counting side only sees the
/// multiset.
pub fn equivalence_check_b5(
    s: &SpectralSequence,
    h: &RegVarFunction,
    plan: &WindowPlan,
) -> Result<EquivalenceReport> {
    let p = h.index();
    if p <= 0.0 {
        return Err(Error::NotInvertible { index: p });
    }
    let hsharp = h.asymptotic_inverse()?;

    let mut lam = match s.singular_values() {
        Ok(v) => v.to_vec(),
        Err(_) => s.moduli(),
    };
    lam.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let m = lam.len();
    if m < 256 {
        return Err(Error::TooFewSamples { need: 256, got: m });
    }

    // sequence-side raw statistic at every index; point curve at j = 2^k
    let k_max = (m as f64).log2().floor() as u32;
    let seq_stat = |j: usize| hsharp.eval(j as f64) * lam[j];
    let seq_xs: Vec<f64> = (4..=k_max).map(|k| k as f64).collect();
    let seq_vs: Vec<f64> = (4..=k_max)
        .map(|k| seq_stat(((1usize << k) - 1).min(m - 1)))
        .collect();

    // counting-side raw statistic on an eighth-octave lambda grid, abscissa
    // log2(1/lambda); counts are exact down to the prefix floor
    let count_above = |x: f64| lam.partition_point(|&v| v > x) as f64;
    let floor = lam[m - 1].max(f64::MIN_POSITIVE);
    let eighth = 2f64.powf(-0.125);
    let mut cnt_xs = Vec::new();
    let mut cnt_vs = Vec::new();
    let mut lambda = lam[1] * 0.5;
    while lambda >= floor && cnt_vs.len() < 800 {
        cnt_xs.push((1.0 / lambda).log2());
        cnt_vs.push(count_above(lambda) / h.eval(1.0 / lambda));
        lambda *= eighth;
    }
    if cnt_vs.len() < 16 {
        return Err(Error::TooFewSamples {
            need: 16,
            got: cnt_vs.len(),
        });
    }

    // oscillation test: does the trailing spread exceed twice the drift?
    let oscillating = {
        let span = 32.min(cnt_vs.len() - 1); // 4 octaves
        let tailv = &cnt_vs[cnt_vs.len() - span..];
        let spread = tailv.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - tailv.iter().cloned().fold(f64::INFINITY, f64::min);
        let drift = (cnt_vs[cnt_vs.len() - 1] - cnt_vs[cnt_vs.len() - span]).abs();
        let scale = cnt_vs[cnt_vs.len() - 1].abs().max(1e-300);
        spread > 2.0 * drift + 0.02 * scale
    };

    let (seq_limsup, seq_liminf, cnt_up_raw, cnt_lo_raw);
    if !oscillating {
        // one channel: the limit, limsup and liminf coincide
        let s_ref = crate::asymptotics::refine_curve(&seq_xs, &seq_vs, plan.hint, crate::asymptotics::DriftModel::Rational)
            .unwrap_or_else(|| *seq_vs.last().expect("non-empty"));
        let c_ref = crate::asymptotics::refine_curve(&cnt_xs, &cnt_vs, plan.hint, crate::asymptotics::DriftModel::Rational)
            .unwrap_or_else(|| *cnt_vs.last().expect("non-empty"));
        seq_limsup = s_ref;
        seq_liminf = s_ref;
        cnt_up_raw = c_ref;
        cnt_lo_raw = c_ref;
    } else {
        // envelope mode: sequence windows of two index octaves scanned at
        // full resolution and emitted at eighth-octave marks, counting
        // windows of four lambda octaves; consecutive duplicate extrema
        // (one hump seen by many windows) collapse to a single point
        let mut seq_upper: Vec<(f64, f64)> = Vec::new();
        let mut seq_lower: Vec<(f64, f64)> = Vec::new();
        let mut x = 3.0f64;
        while x <= k_max as f64 {
            let hi = (2f64.powf(x).round() as usize).min(m - 1);
            let lo = (2f64.powf(x - 2.0).round() as usize).max(1);
            let (mut wmax, mut wmin) = ((lo, f64::NEG_INFINITY), (lo, f64::INFINITY));
            for j in lo..=hi {
                let v = seq_stat(j);
                if v > wmax.1 {
                    wmax = (j, v);
                }
                if v < wmin.1 {
                    wmin = (j, v);
                }
            }
            let up = ((wmax.0 as f64).log2(), wmax.1);
            let dn = ((wmin.0 as f64).log2(), wmin.1);
            if seq_upper.last() != Some(&up) {
                seq_upper.push(up);
            }
            if seq_lower.last() != Some(&dn) {
                seq_lower.push(dn);
            }
            x += 0.125;
        }
        let seq_env = (seq_upper, seq_lower);
        let cnt_env = envelope_curves(
            &cnt_xs.iter().cloned().zip(cnt_vs.iter().cloned()).collect::<Vec<_>>(),
            4.0,
        );
        let refine = |pts: &[(f64, f64)]| -> f64 {
            let xs: Vec<f64> = pts.iter().map(|&(x, _)| x).collect();
            let vs: Vec<f64> = pts.iter().map(|&(_, v)| v).collect();
            crate::asymptotics::refine_curve(&xs, &vs, plan.hint, crate::asymptotics::DriftModel::Rational)
                .unwrap_or_else(|| *vs.last().expect("non-empty"))
        };
        seq_limsup = refine(&seq_env.0);
        seq_liminf = refine(&seq_env.1);
        cnt_up_raw = refine(&cnt_env.0);
        cnt_lo_raw = refine(&cnt_env.1);
    }
    let cnt_limsup = cnt_up_raw.max(0.0).powf(1.0 / p);
    let cnt_liminf = cnt_lo_raw.max(0.0).powf(1.0 / p);

    // per-window raw gaps at matched scales: both sides probed at the stored
    // dyadic values, where the counting statistic sees the same physical
    // point as the sequence statistic
    let window_gaps = (4..=k_max)
        .map(|k| {
            let j = ((1usize << k) - 1).min(m - 1);
            let s = seq_stat(j);
            let lambda = lam[j];
            let c = if lambda > 0.0 {
                (count_above(lambda) / h.eval(1.0 / lambda)).max(0.0).powf(1.0 / p)
            } else {
                0.0
            };
            (s - c).abs()
        })
        .collect();

    Ok(EquivalenceReport {
        seq_limsup,
        seq_liminf,
        cnt_limsup,
        cnt_liminf,
        gap_limsup: (seq_limsup - cnt_limsup).abs(),
        gap_liminf: (seq_liminf - cnt_liminf).abs(),
        window_gaps,
    })
}

/// Sliding-window upper/lower envelopes of a curve over float abscissae.
/// `span` is the window width in abscissa units; windows advance point by
/// point and consecutive identical extrema are deduplicated.
fn envelope_curves(pts: &[(f64, f64)], span: f64) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut upper: Vec<(f64, f64)> = Vec::new();
    let mut lower: Vec<(f64, f64)> = Vec::new();
    let n = pts.len();
    let mut lo = 0usize;
    for hi in 0..n {
        while pts[hi].0 - pts[lo].0 > span {
            lo += 1;
        }
        let w = &pts[lo..=hi];
        if w.last().expect("non-empty").0 - w[0].0 < span * 0.75 && hi + 1 < n {
            continue; // window not yet full
        }
        let mut wmax = w[0];
        let mut wmin = w[0];
        for &(x, v) in w {
            if v > wmax.1 {
                wmax = (x, v);
            }
            if v < wmin.1 {
                wmin = (x, v);
            }
        }
        if upper.last() != Some(&wmax) {
            upper.push(wmax);
        }
        if lower.last() != Some(&wmin) {
            lower.push(wmin);
        }
    }
    (upper, lower)
}

/// Sequence lambda_j = c / h^#(j+1) whose counting and eigenvalue asymptotics
/// are pinned to (c^p, c); the workhorse of the equivalence tests.
pub fn inverse_power_log_sequence(c: f64, p: f64, q: f64, m: usize) -> Result<SpectralSequence> {
    let h = RegVarFunction::power_log(p, q);
    let hsharp = h.asymptotic_inverse()?;
    let mut vals: Vec<f64> = (0..m)
        .map(|j| c / hsharp.eval((j + 1) as f64))
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    SpectralSequence::singular(vals)
}
