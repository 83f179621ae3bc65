use num_complex::Complex64;

use super::types::{QParam, SeriesValue, Truncation};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
/// Number of edge terms used to estimate the local decay ratio.
const PROBE: usize = 4;

/// Asymptotic decay of the terms on one side of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|t_{k+1}| <~ r |t_k|` with the stated `r < 1`.
    Geometric(f64),
    /// Super-geometric decay like `q^{c k^2}`: term ratios shrink, so the last
    /// observed ratio bounds all later ones.
    Gaussian,
}

/// Declared decay for the `k -> +inf` and `k -> -inf` sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailHint {
    pub upper: Decay,
    pub lower: Decay,
}

impl TailHint {
    pub fn new(upper: Decay, lower: Decay) -> Self {
        TailHint { upper, lower }
    }
}

struct Side {
    dir: i64,
    decay: Option<Decay>,
    last: usize,
    width: usize,
    sum: Complex64,
    incr: f64,
    mags: Vec<f64>,
    bound: f64,
    done: bool,
}

impl Side {
    fn new(dir: i64, decay: Option<Decay>, width: usize) -> Self {
        Side {
            dir,
            decay,
            last: 0,
            width,
            sum: Complex64::new(0.0, 0.0),
            incr: f64::INFINITY,
            mags: Vec::new(),
            bound: f64::INFINITY,
            done: false,
        }
    }

    /// Bound on everything beyond the current edge.
    fn remainder(&self) -> f64 {
        let n = self.mags.len();
        if n < 2 * PROBE {
            return f64::INFINITY;
        }
        let recent = self.mags[n - PROBE..].iter().cloned().fold(0.0, f64::max);
        if recent == 0.0 {
            return 0.0;
        }
        let older = self.mags[n - 2 * PROBE..n - PROBE].iter().cloned().fold(0.0, f64::max);
        let observed = if older > 0.0 {
            (recent / older).powf(1.0 / PROBE as f64)
        } else {
            f64::INFINITY
        };
        let r = match self.decay {
            Some(Decay::Geometric(r)) => r.max(observed),
            Some(Decay::Gaussian) | None => observed,
        };
        if r < 1.0 {
            recent * r / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}

enum Flow {
    Continue,
    Overflow,
}

fn run_side<F>(side: &mut Side, term: &mut F, abs_total: &mut f64, used: &mut usize) -> Result<Flow>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    let mut inc = Complex64::new(0.0, 0.0);
    for i in side.last + 1..=side.width {
        let idx = side.dir * i as i64;
        let t = term(idx)?;
        *used += 1;
        if t.re.is_nan() || t.im.is_nan() {
            return Err(Error::NonFinite(format!("series term at index {} is NaN", idx)));
        }
        if !t.is_finite() {
            side.sum += inc + t;
            side.last = i;
            return Ok(Flow::Overflow);
        }
        inc += t;
        *abs_total += t.norm();
        side.mags.push(t.norm());
    }
    if side.mags.len() > 4 * PROBE {
        let cut = side.mags.len() - 2 * PROBE;
        side.mags.drain(..cut);
    }
    side.sum += inc;
    side.incr = inc.norm();
    side.last = side.width;
    Ok(Flow::Continue)
}

fn engine<F>(mut term: F, trunc: &Truncation, upper: Option<Decay>, lower: Option<Option<Decay>>) -> Result<SeriesValue>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    let t0 = term(0)?;
    if t0.re.is_nan() || t0.im.is_nan() {
        return Err(Error::NonFinite("series term at index 0 is NaN".into()));
    }
    let mut used = 1usize;
    let mut abs_total = t0.norm();
    let mut sides = vec![Side::new(1, upper, trunc.window_init)];
    if let Some(lo) = lower {
        sides.push(Side::new(-1, lo, trunc.window_init));
    }
    if !t0.is_finite() {
        return Ok(SeriesValue {
            value: t0,
            est_error: f64::INFINITY,
            terms_used: used,
            converged: false,
        });
    }
    loop {
        for side in sides.iter_mut().filter(|s| !s.done) {
            if let Flow::Overflow = run_side(side, &mut term, &mut abs_total, &mut used)? {
                let total = t0 + sides.iter().map(|s| s.sum).sum::<Complex64>();
                return Ok(SeriesValue {
                    value: total,
                    est_error: f64::INFINITY,
                    terms_used: used,
                    converged: false,
                });
            }
        }
        let total = t0 + sides.iter().map(|s| s.sum).sum::<Complex64>();
        let tol = trunc.tolerance(total.norm());
        for side in sides.iter_mut().filter(|s| !s.done) {
            side.bound = side.remainder();
            side.done = side.incr <= 0.5 * tol && side.bound <= 0.5 * tol;
        }
        let all_done = sides.iter().all(|s| s.done);
        if all_done || used >= trunc.max_terms {
            let trunc_err: f64 = sides.iter().map(|s| s.bound).sum();
            let est = trunc_err + EPS * abs_total;
            return Ok(SeriesValue::judged(total, est, used, all_done, trunc));
        }
        let active = sides.iter().filter(|s| !s.done).count();
        let budget = (trunc.max_terms - used) / active.max(1);
        for side in sides.iter_mut().filter(|s| !s.done) {
            let grown = side.width.saturating_mul(trunc.window_growth);
            side.width = grown.min(side.last + budget.max(1));
        }
    }
}

/// Adaptive sum over all integers of a fallible term.
///
/// Each side grows its window independently by `window_growth` until the
/// last increment and the remainder bound are both below half the
/// tolerance. A declared geometric rate is combined with the observed edge
/// ratio (the larger wins); Gaussian sides rely on the observed ratio.
/// Overflow to infinity yields a non-converged value, NaN an error.
pub fn try_bilateral_sum<F>(term: F, trunc: &Truncation, tail_hint: Option<TailHint>) -> Result<SeriesValue>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    let (up, lo) = match tail_hint {
        Some(h) => (Some(h.upper), Some(h.lower)),
        None => (None, None),
    };
    engine(term, trunc, up, Some(lo))
}

/// Infallible variant of [`try_bilateral_sum`].
pub fn bilateral_sum<F>(mut term: F, trunc: &Truncation, tail_hint: Option<TailHint>) -> Result<SeriesValue>
where
    F: FnMut(i64) -> Complex64,
{
    try_bilateral_sum(|k| Ok(term(k)), trunc, tail_hint)
}

/// Adaptive sum over `k = 0, 1, 2, ...` with the same stopping rule.
pub fn one_sided_sum<F>(mut term: F, trunc: &Truncation, decay: Option<Decay>) -> Result<SeriesValue>
where
    F: FnMut(u64) -> Result<Complex64>,
{
    engine(|k| term(k as u64), trunc, decay, None)
}

/// `∫_0^∞ f dm_q = Σ_z q^z f(q^{z/2})`.
pub fn q_integral_dmq<F>(mut f: F, q: QParam, trunc: &Truncation, tail_hint: Option<TailHint>) -> Result<SeriesValue>
where
    F: FnMut(Complex64) -> Complex64,
{
    bilateral_sum(
        |z| {
            let x = Complex64::new(q.pow(0.5 * z as f64), 0.0);
            q.pow(z as f64) * f(x)
        },
        trunc,
        tail_hint,
    )
}

/// Lattice form of [`q_integral_dmq`]: `f` receives the index `z` of the
/// point `q^{z/2}`, which lets callers use lattice-specific evaluators.
pub fn q_integral_dmq_lattice<F>(mut f: F, q: QParam, trunc: &Truncation, tail_hint: Option<TailHint>) -> Result<SeriesValue>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    try_bilateral_sum(|z| Ok(q.pow(z as f64) * f(z)?), trunc, tail_hint)
}
