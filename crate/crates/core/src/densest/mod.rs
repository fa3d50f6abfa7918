//! Edge-private densest-subgraph estimation by noisy peeling.
//!
//! Both variants repeatedly remove a vertex of (approximately) minimum
//! *noisy score* and remember the point where the popped score peaked; the
//! answer is the suffix of the removal order from that peak, plus a noised
//! density for it. A vertex's score is its noisy initial degree minus a
//! noisy running total of departed neighbors. The running total only
//! re-releases when a padded counter crosses a threshold, so each vertex
//! updates its prefix sum a bounded number of times and the whole peel
//! touches each edge O(1) times outside the selection structure.
//!
//! The two variants differ only in how the minimum is selected:
//! a lazy binary heap (exact minimum, `O((n + m) log n)` overall) or a
//! bucket queue over score intervals (minimum up to half a bucket width,
//! `O(n + m)` plus the bucket scan).
//!
//! Peeling with exact scores and a zero threshold (the `*_noiseless`
//! variants) degenerates to plain greedy peeling; those exist to validate
//! the machinery, not to be released.

mod bucket;
mod schedule;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::graph::{DensityReport, Graph, VertexSet};
use crate::noise::{sample_crossing_time, CrossingTime, GeomParam, NoRng};
use crate::psum::NoisyPrefixSum;
use crate::{Error, Result};

use bucket::BucketQueue;
use schedule::ScheduleTable;

/// Privacy parameters for one peel: the total budget `epsilon`, the failure
/// probability `sigma` the utility statement is allowed, and two tuning
/// knobs that trade accuracy against work without affecting privacy.
#[derive(Debug, Clone)]
pub struct PrivacyBudget {
    epsilon: f64,
    sigma: f64,
    threshold_constant: f64,
    bucket_width_override: Option<u64>,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, sigma: f64) -> Result<PrivacyBudget> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::Domain(format!(
                "epsilon must be finite and positive, got {epsilon}"
            )));
        }
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Domain(format!(
                "sigma must lie strictly between 0 and 1, got {sigma}"
            )));
        }
        Ok(PrivacyBudget {
            epsilon,
            sigma,
            threshold_constant: 0.5,
            bucket_width_override: None,
        })
    }

    /// Scales the flush threshold (and the default bucket width). Larger
    /// values flush less often; accuracy degrades once scores lag far
    /// behind true residual degrees. Privacy is unaffected.
    pub fn with_threshold_constant(mut self, c: f64) -> Result<PrivacyBudget> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Domain(format!(
                "threshold constant must be finite and positive, got {c}"
            )));
        }
        self.threshold_constant = c;
        Ok(self)
    }

    /// Fixes the bucket width of the bucketed variant instead of deriving
    /// it from the analysis. Width 1 buckets scores exactly. Privacy is
    /// unaffected; this is purely an accuracy/speed knob.
    pub fn with_bucket_width(mut self, width: u64) -> Result<PrivacyBudget> {
        if width == 0 {
            return Err(Error::Domain("bucket width must be at least 1".into()));
        }
        self.bucket_width_override = Some(width);
        Ok(self)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn threshold_constant(&self) -> f64 {
        self.threshold_constant
    }

    /// Budget spent on the initial noisy degrees. The four phases (degrees,
    /// prefix sums, flush counters, density release) each get a quarter;
    /// the whole run then costs `epsilon` by sequential composition.
    pub fn eps_degree(&self) -> f64 {
        self.epsilon / 4.0
    }

    /// Budget spent on each vertex's prefix sum of departed neighbors.
    pub fn eps_prefix_sum(&self) -> f64 {
        self.epsilon / 4.0
    }

    /// Budget spent on the padded flush counters.
    pub fn eps_counter(&self) -> f64 {
        self.epsilon / 4.0
    }

    /// Budget spent on the released density of the chosen subset.
    pub fn eps_release(&self) -> f64 {
        self.epsilon / 4.0
    }

    /// Flush threshold for an `n`-vertex run: the configured
    /// `(C / epsilon) ln(n) ln(1/sigma)` schedule, raised when necessary so
    /// that a persistent counter offset exceeds it with probability at most
    /// `sigma / n` — the property the flush-count bound rests on. Without
    /// the raise, small `C` would let counters sit above the threshold from
    /// the start and flush every step.
    pub fn flush_threshold(&self, n: usize) -> Result<i64> {
        if n == 0 {
            return Err(Error::Domain("graph must have at least one vertex".into()));
        }
        let gamma = GeomParam::from_epsilon(self.eps_counter())?;
        let n_f = n as f64;
        let formula = (self.threshold_constant / self.epsilon * n_f.ln() * (1.0 / self.sigma).ln())
            .ceil() as i64;
        let bound = self.sigma / n_f;
        // Analytic start for the smallest t with Pr[noise > t] <= bound,
        // then walk to the exact value of the same tail used at runtime.
        let analytic =
            ((n_f / self.sigma).ln() - (gamma.gamma() + 1.0).ln()) / self.eps_counter();
        let mut t = formula.max(analytic.ceil() as i64 - 2).max(1);
        while gamma.tail_above(t) > bound {
            t += 1;
        }
        Ok(t)
    }

    /// Bucket width for the bucketed variant: the override if set, else
    /// `(C / epsilon) ln(n)^2.5 ln(1/sigma)` from the error analysis,
    /// at least 1.
    pub fn bucket_width(&self, n: usize) -> u64 {
        if let Some(w) = self.bucket_width_override {
            return w;
        }
        if n <= 1 {
            return 1;
        }
        let w = self.threshold_constant / self.epsilon
            * (n as f64).ln().powf(2.5)
            * (1.0 / self.sigma).ln();
        (w.ceil() as u64).max(1)
    }
}

/// Outcome of one peel, with enough instrumentation to audit cost bounds.
#[derive(Debug, Clone)]
pub struct PeelRun {
    pub report: DensityReport,
    /// Total prefix-sum updates consumed across all vertices.
    pub psum_updates: u64,
    /// Flush threshold the run used (0 for noiseless runs).
    pub flush_threshold: i64,
    /// Bucket width, for runs that selected minima through buckets.
    pub bucket_width: Option<u64>,
}

/// Releases `edge_count / set_size` with `Geom(exp(epsilon))` noise on the
/// numerator. The result is clamped above by `set_size` (no set of that
/// size can be denser); the lower tail is released as-is.
pub fn release_density<R: Rng + ?Sized>(
    edge_count: u64,
    set_size: u64,
    epsilon: f64,
    rng: &mut R,
) -> Result<f64> {
    if set_size == 0 {
        return Err(Error::Domain("empty subset has no density".into()));
    }
    let noise = GeomParam::from_epsilon(epsilon)?.sample(rng);
    let base = edge_count.min(i64::MAX as u64) as i64;
    let noisy = base.saturating_add(noise) as f64 / set_size as f64;
    Ok(noisy.min(set_size as f64))
}

/// Quasilinear variant: exact minimum selection through a lazy binary heap.
pub fn dp_densest_quasilinear<R: Rng + ?Sized>(
    g: &Graph,
    budget: &PrivacyBudget,
    rng: &mut R,
) -> Result<DensityReport> {
    Ok(dp_densest_quasilinear_run(g, budget, rng)?.report)
}

/// [`dp_densest_quasilinear`] with instrumentation.
pub fn dp_densest_quasilinear_run<R: Rng + ?Sized>(
    g: &Graph,
    budget: &PrivacyBudget,
    rng: &mut R,
) -> Result<PeelRun> {
    let plan = NoisePlan::build(budget, g.n())?;
    let st = run_quasilinear(g, Some(&plan), rng)?;
    finish(g, Some(&plan), st, None, rng)
}

/// The zero-noise, zero-threshold limit of the quasilinear variant: plain
/// greedy peeling by exact residual degree (lowest id on ties). Not private.
pub fn dp_densest_quasilinear_noiseless(g: &Graph) -> Result<PeelRun> {
    let mut rng = NoRng;
    let st = run_quasilinear(g, None, &mut rng)?;
    finish(g, None, st, None, &mut rng)
}

/// Bucketed variant: minima selected up to half a bucket width, giving
/// linear work outside the bucket scan.
pub fn dp_densest_linear<R: Rng + ?Sized>(
    g: &Graph,
    budget: &PrivacyBudget,
    rng: &mut R,
) -> Result<DensityReport> {
    Ok(dp_densest_linear_run(g, budget, rng)?.report)
}

/// [`dp_densest_linear`] with instrumentation.
pub fn dp_densest_linear_run<R: Rng + ?Sized>(
    g: &Graph,
    budget: &PrivacyBudget,
    rng: &mut R,
) -> Result<PeelRun> {
    let plan = NoisePlan::build(budget, g.n())?;
    let width = budget.bucket_width(g.n());
    let st = run_linear(g, Some(&plan), width, rng)?;
    finish(g, Some(&plan), st, Some(width), rng)
}

/// The zero-noise, zero-threshold limit of the bucketed variant with an
/// explicit bucket width. Not private.
pub fn dp_densest_linear_noiseless(g: &Graph, bucket_width: u64) -> Result<PeelRun> {
    if bucket_width == 0 {
        return Err(Error::Domain("bucket width must be at least 1".into()));
    }
    let mut rng = NoRng;
    let st = run_linear(g, None, bucket_width, &mut rng)?;
    finish(g, None, st, Some(bucket_width), &mut rng)
}

/// Noise scales and the flush threshold, fixed once per run.
struct NoisePlan {
    gamma_degree: GeomParam,
    eps_psum: f64,
    gamma_counter: GeomParam,
    eps_release: f64,
    threshold: i64,
}

impl NoisePlan {
    fn build(budget: &PrivacyBudget, n: usize) -> Result<NoisePlan> {
        if n == 0 {
            return Err(Error::Domain("empty graph".into()));
        }
        Ok(NoisePlan {
            // One edge shifts two degrees, so each degree release gets half
            // the phase budget.
            gamma_degree: GeomParam::from_epsilon(budget.eps_degree() / 2.0)?,
            eps_psum: budget.eps_prefix_sum(),
            gamma_counter: GeomParam::from_epsilon(budget.eps_counter())?,
            eps_release: budget.eps_release(),
            threshold: budget.flush_threshold(n)?,
        })
    }
}

struct PeelState {
    /// Noisy initial degree, fixed at the start.
    d: Vec<i64>,
    /// Current score: `d[v]` minus the vertex's last prefix-sum output.
    score: Vec<i64>,
    psum: Vec<NoisyPrefixSum>,
    /// Departed neighbors not yet folded into the prefix sum.
    cnt: Vec<i64>,
    /// Persistent counter offset, redrawn at each flush.
    persistent: Vec<i64>,
    in_s: Vec<bool>,
    /// Exact departed-neighbor totals; backs the bookkeeping asserts.
    departed: Vec<i64>,
    schedule: ScheduleTable,
    order: Vec<u32>,
    d_max: i64,
    best_idx: usize,
    psum_updates: u64,
    threshold: i64,
}

fn init_state<R: Rng + ?Sized>(
    g: &Graph,
    plan: Option<&NoisePlan>,
    rng: &mut R,
) -> Result<PeelState> {
    let n = g.n();
    let mut d = Vec::with_capacity(n);
    let mut psum = Vec::with_capacity(n);
    let mut persistent = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let deg = g.degree(v) as i64;
        match plan {
            Some(p) => {
                d.push(deg + p.gamma_degree.sample(rng));
                psum.push(NoisyPrefixSum::new(n as u64, p.eps_psum)?);
                persistent.push(p.gamma_counter.sample(rng));
            }
            None => {
                d.push(deg);
                psum.push(NoisyPrefixSum::noiseless(n as u64)?);
                persistent.push(0);
            }
        }
    }
    let mut st = PeelState {
        score: d.clone(),
        d,
        psum,
        cnt: vec![0; n],
        persistent,
        in_s: vec![true; n],
        departed: vec![0; n],
        schedule: ScheduleTable::new(n, n),
        order: Vec::with_capacity(n),
        d_max: 0,
        best_idx: 0,
        psum_updates: 0,
        threshold: plan.map_or(0, |p| p.threshold),
    };
    for v in 0..n as u32 {
        // The first per-step checks run at step 1.
        if let Some(slot) = predict_slot(plan, st.threshold, 0, st.persistent[v as usize], 1, n, rng)
        {
            st.schedule.schedule(v, slot);
        }
    }
    Ok(st)
}

/// Absolute step of the next successful check `cnt + persistent + N > T`
/// with fresh `N` each step, given that the next check runs at `first_step`;
/// `None` when it lands beyond the horizon.
fn predict_slot<R: Rng + ?Sized>(
    plan: Option<&NoisePlan>,
    threshold: i64,
    cnt: i64,
    persistent: i64,
    first_step: usize,
    horizon: usize,
    rng: &mut R,
) -> Option<usize> {
    match plan {
        None => (cnt > threshold).then_some(first_step),
        Some(p) => match sample_crossing_time(cnt, persistent, threshold, p.gamma_counter, rng) {
            CrossingTime::Never => None,
            CrossingTime::At(k) => {
                // k can sit at u64::MAX when the crossing probability
                // underflows; saturate rather than wrap past the horizon
                let abs = (first_step as u64).saturating_add(k - 1);
                (abs <= horizon as u64).then_some(abs as usize)
            }
        },
    }
}

/// Records the popped vertex's score before removal; the released subset is
/// the removal-order suffix from the step with the highest popped score.
fn track_best(st: &mut PeelState, v: u32) {
    let s = st.score[v as usize];
    if s > st.d_max {
        st.d_max = s;
        st.best_idx = st.order.len();
    }
}

/// Removes `v` at step `t`: bumps surviving neighbors' counters (their
/// crossing times restart from this very step), then flushes everyone whose
/// presampled check lands on `t`. `on_score` hears every score change so
/// the caller can maintain its selection structure.
fn peel_step<R, F>(
    g: &Graph,
    plan: Option<&NoisePlan>,
    st: &mut PeelState,
    v: u32,
    t: usize,
    rng: &mut R,
    mut on_score: F,
) -> Result<()>
where
    R: Rng + ?Sized,
    F: FnMut(u32, i64),
{
    let n = g.n();
    st.in_s[v as usize] = false;
    st.schedule.unschedule(v);
    st.order.push(v);
    for &u in g.neighbors(v) {
        let ui = u as usize;
        if !st.in_s[ui] {
            continue;
        }
        st.cnt[ui] += 1;
        st.departed[ui] += 1;
        debug_assert_eq!(
            st.psum[ui].exact_sum() + st.cnt[ui],
            st.departed[ui],
            "pending + flushed must cover every departure"
        );
        st.schedule.unschedule(u);
        if let Some(slot) =
            predict_slot(plan, st.threshold, st.cnt[ui], st.persistent[ui], t, n, rng)
        {
            st.schedule.schedule(u, slot);
        }
    }
    while let Some(u) = st.schedule.pop_from(t) {
        let ui = u as usize;
        debug_assert!(st.in_s[ui], "departed vertices leave the agenda");
        let out = st.psum[ui].update(st.cnt[ui], rng)?;
        st.psum_updates += 1;
        st.score[ui] = st.d[ui] - out;
        st.cnt[ui] = 0;
        st.persistent[ui] = match plan {
            Some(p) => p.gamma_counter.sample(rng),
            None => 0,
        };
        debug_assert_eq!(st.psum[ui].exact_sum(), st.departed[ui], "flush bookkeeping");
        // After a flush the counter restarts; next possible check is t + 1.
        if let Some(slot) = predict_slot(plan, st.threshold, 0, st.persistent[ui], t + 1, n, rng) {
            st.schedule.schedule(u, slot);
        }
        on_score(u, st.score[ui]);
    }
    Ok(())
}

fn run_quasilinear<R: Rng + ?Sized>(
    g: &Graph,
    plan: Option<&NoisePlan>,
    rng: &mut R,
) -> Result<PeelState> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let mut st = init_state(g, plan, rng)?;
    let mut heap: BinaryHeap<Reverse<(i64, u32)>> = (0..n as u32)
        .map(|v| Reverse((st.score[v as usize], v)))
        .collect();
    for t in 1..=n {
        // Lazy deletion: entries whose score moved on are dead weight.
        let v = loop {
            let Reverse((s, v)) = heap.pop().expect("live vertices keep a current entry");
            if st.in_s[v as usize] && st.score[v as usize] == s {
                break v;
            }
        };
        track_best(&mut st, v);
        peel_step(g, plan, &mut st, v, t, rng, |u, s| heap.push(Reverse((s, u))))?;
    }
    Ok(st)
}

fn run_linear<R: Rng + ?Sized>(
    g: &Graph,
    plan: Option<&NoisePlan>,
    width: u64,
    rng: &mut R,
) -> Result<PeelState> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let mut st = init_state(g, plan, rng)?;
    // ceil(n / width + 1) buckets cover every clamped score.
    let bucket_count = ((n as u64 + width).div_ceil(width)).min(u32::MAX as u64) as u32;
    let mut queue = BucketQueue::new(n, width as i64, bucket_count);
    for v in 0..n as u32 {
        queue.insert(v, st.score[v as usize]);
    }
    for t in 1..=n {
        let v = queue.pop_min().expect("queue tracks the surviving set");
        track_best(&mut st, v);
        peel_step(g, plan, &mut st, v, t, rng, |u, s| queue.relocate(u, s))?;
    }
    Ok(st)
}

fn finish<R: Rng + ?Sized>(
    g: &Graph,
    plan: Option<&NoisePlan>,
    st: PeelState,
    bucket_width: Option<u64>,
    rng: &mut R,
) -> Result<PeelRun> {
    debug_assert_eq!(st.order.len(), g.n());
    let subset = VertexSet::new(st.order[st.best_idx..].to_vec());
    let e = g.induced_edge_count(&subset)?;
    let k = subset.len() as u64;
    let true_density = e as f64 / k as f64;
    let noisy_density = match plan {
        Some(p) => release_density(e, k, p.eps_release, rng)?,
        None => true_density.min(k as f64),
    };
    Ok(PeelRun {
        report: DensityReport {
            subset,
            true_density,
            noisy_density,
        },
        psum_updates: st.psum_updates,
        flush_threshold: st.threshold,
        bucket_width,
    })
}
