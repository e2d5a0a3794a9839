//! Monte Carlo runner for the distinguisher.
//!
//! Each trial draws one random pair and one equivalent pair from its own
//! child seed and runs the distinguisher on both. Trials run on the rayon
//! pool (`RAYON_NUM_THREADS` sets its size) and are folded with a
//! commutative sum, so a report depends only on `(params, trials, seed)`.

use std::io::Write;
use std::ops::{Add, Range};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::Result;
use crate::field::{field_for_q, Field};
use crate::instances::{child_seed, equivalent_pair, random_pair};
use crate::solver::{
    build_pair, diag_subfield, distinguish, fp_estimate, select_construction, select_form, ConstructionPlan, PlanForm,
    Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// Force a construction form instead of the registry's choice.
    pub form: Option<PlanForm>,
}

impl ExperimentParams {
    pub fn new(q: u32, n: usize, k: usize) -> Self {
        ExperimentParams { q, n, k, form: None }
    }

    pub fn field(&self) -> Result<Field> {
        field_for_q(self.q as u64)
    }

    pub fn plan(&self, field: &Field) -> Result<ConstructionPlan> {
        match self.form {
            Some(f) => select_form(field, self.k, self.n, f),
            None => select_construction(field, self.k, self.n),
        }
    }
}

/// Per-trial counts; summing is the only aggregation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    /// Random pairs on which event T held.
    pub t_count: u64,
    /// Random pairs with T whose diagonal multisets matched.
    pub fp_matches: u64,
    /// Random pairs declared inequivalent.
    pub not_equivalent: u64,
    /// Equivalent pairs on which T held.
    pub eq_t_count: u64,
    /// Equivalent pairs declared inequivalent.
    pub fn_count: u64,
    /// Diagonal entries found outside the predicted subfield.
    pub subfield_violations: u64,
    /// Sides whose dimension exceeded the plan's bound.
    pub bound_violations: u64,
}

impl Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            t_count: self.t_count + o.t_count,
            fp_matches: self.fp_matches + o.fp_matches,
            not_equivalent: self.not_equivalent + o.not_equivalent,
            eq_t_count: self.eq_t_count + o.eq_t_count,
            fn_count: self.fn_count + o.fn_count,
            subfield_violations: self.subfield_violations + o.subfield_violations,
            bound_violations: self.bound_violations + o.bound_violations,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub form: PlanForm,
    pub seed: u64,
    pub q_diag: u32,
    pub tally: Tally,
    pub p_t: f64,
    pub fp_given_t: f64,
    pub estimate: f64,
    pub wall_time_secs: f64,
}

/// One CSV line: `q,n,k,form,trials,t_count,fp_matches,fn_count,p_t,fp_given_t,estimate,seed`.
#[derive(Serialize)]
struct CsvRow<'a> {
    q: u32,
    n: usize,
    k: usize,
    form: &'a str,
    trials: u64,
    t_count: u64,
    fp_matches: u64,
    fn_count: u64,
    p_t: f64,
    fp_given_t: f64,
    estimate: f64,
    seed: u64,
}

impl ExperimentReport {
    fn from_tally(
        params: &ExperimentParams,
        plan: &ConstructionPlan,
        q_diag: u32,
        seed: u64,
        tally: Tally,
        secs: f64,
    ) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        ExperimentReport {
            q: params.q,
            n: params.n,
            k: params.k,
            form: plan.form,
            seed,
            q_diag,
            tally,
            p_t: ratio(tally.t_count, tally.trials),
            fp_given_t: ratio(tally.fp_matches, tally.t_count),
            estimate: fp_estimate(q_diag, params.n),
            wall_time_secs: secs,
        }
    }

    /// Equal up to wall time.
    pub fn same_result(&self, other: &ExperimentReport) -> bool {
        let mut a = self.clone();
        a.wall_time_secs = other.wall_time_secs;
        a == *other
    }

    pub fn write_csv<W: Write>(reports: &[ExperimentReport], out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in reports {
            w.serialize(CsvRow {
                q: r.q,
                n: r.n,
                k: r.k,
                form: r.form.name(),
                trials: r.tally.trials,
                t_count: r.tally.t_count,
                fp_matches: r.tally.fp_matches,
                fn_count: r.tally.fn_count,
                p_t: r.p_t,
                fp_given_t: r.fp_given_t,
                estimate: r.estimate,
                seed: r.seed,
            })?;
        }
        w.flush()
    }
}

struct TrialContext {
    field: Field,
    plan: ConstructionPlan,
    subfield_degree: u32,
    n: usize,
    k: usize,
}

impl TrialContext {
    fn new(params: &ExperimentParams) -> Result<(Self, u32)> {
        let field = params.field()?;
        let plan = params.plan(&field)?;
        let q_diag = diag_subfield(&plan, &field);
        let subfield_degree = (q_diag as f64).log(field.p() as f64).round() as u32;
        Ok((TrialContext { field, plan, subfield_degree, n: params.n, k: params.k }, q_diag))
    }

    fn audit(&self, diag: Option<&Vec<crate::field::Fq>>, dims: [usize; 2], tally: &mut Tally) {
        if let Some(d) = diag {
            tally.subfield_violations +=
                d.iter().filter(|&&x| !self.field.in_subfield(x, self.subfield_degree)).count() as u64;
        }
        tally.bound_violations += dims.iter().filter(|&&d| d as u128 > self.plan.dim_bound).count() as u64;
    }

    fn run(&self, master: u64, t: u64) -> Tally {
        let seed = child_seed(master, t);
        let mut tally = Tally { trials: 1, ..Tally::default() };

        let pair = random_pair(&self.field, self.n, self.k, child_seed(seed, 0)).expect("validated dimensions");
        let out = distinguish(&pair.code_a, &pair.code_b, &self.plan);
        if out.detail.t_held {
            tally.t_count += 1;
        }
        match out.verdict {
            Verdict::LikelyEquivalent => tally.fp_matches += 1,
            Verdict::NotEquivalent => tally.not_equivalent += 1,
            Verdict::Inconclusive => {}
        }
        self.audit(out.detail.diag_a.as_ref(), [out.detail.dim_a1, out.detail.dim_b1], &mut tally);
        self.audit(out.detail.diag_b.as_ref(), [0, 0], &mut tally);

        let inst =
            equivalent_pair(&self.field, self.n, self.k, None, child_seed(seed, 1)).expect("validated dimensions");
        let out = distinguish(&inst.code_a, &inst.code_b, &self.plan);
        if out.detail.t_held {
            tally.eq_t_count += 1;
        }
        if out.verdict == Verdict::NotEquivalent {
            tally.fn_count += 1;
        }
        self.audit(out.detail.diag_a.as_ref(), [out.detail.dim_a1, out.detail.dim_b1], &mut tally);
        self.audit(out.detail.diag_b.as_ref(), [0, 0], &mut tally);
        tally
    }
}

/// Runs trials `range` of the experiment seeded by `master_seed`.
pub fn run_trials(params: &ExperimentParams, range: Range<u64>, master_seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (ctx, q_diag) = TrialContext::new(params)?;
    let tally = range.into_par_iter().map(|t| ctx.run(master_seed, t)).reduce(Tally::default, |a, b| a + b);
    Ok(ExperimentReport::from_tally(params, &ctx.plan, q_diag, master_seed, tally, start.elapsed().as_secs_f64()))
}

pub fn run_experiment(params: &ExperimentParams, trials: u64, master_seed: u64) -> Result<ExperimentReport> {
    run_trials(params, 0..trials, master_seed)
}

/// Runs consecutive batches until at least `min_t` random pairs satisfied
/// event T or `max_trials` is reached. The result equals
/// `run_experiment(params, report.tally.trials, master_seed)`.
pub fn run_until_t(
    params: &ExperimentParams,
    min_t: u64,
    max_trials: u64,
    batch: u64,
    master_seed: u64,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (ctx, q_diag) = TrialContext::new(params)?;
    let mut tally = Tally::default();
    let mut next = 0;
    while tally.t_count < min_t && next < max_trials {
        let end = (next + batch.max(1)).min(max_trials);
        tally =
            tally + (next..end).into_par_iter().map(|t| ctx.run(master_seed, t)).reduce(Tally::default, |a, b| a + b);
        next = end;
    }
    Ok(ExperimentReport::from_tally(params, &ctx.plan, q_diag, master_seed, tally, start.elapsed().as_secs_f64()))
}

/// Reference values: `(q, n, k, P(T), P(M|T), estimate)`.
pub const TABLE2_ROWS: [(u32, usize, usize, f64, f64, f64); 4] = [
    (5, 100, 10, 0.630, 1.84e-4, 3.54e-5),
    (8, 300, 6, 0.175, 0.0646, 0.0326),
    (9, 100, 12, 0.518, 0.0125, 4.135e-3),
    (16, 100, 8, 0.619, 1.40e-3, 3.59e-4),
];

pub fn table2(trials: u64, master_seed: u64) -> Result<Vec<ExperimentReport>> {
    TABLE2_ROWS
        .iter()
        .map(|&(q, n, k, ..)| run_experiment(&ExperimentParams::new(q, n, k), trials, master_seed))
        .collect()
}

pub fn format_table2(reports: &[ExperimentReport]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<12} {:<17} {:>8} {:>8} {:>11} {:>11} {:>10} {:>10} {:>5}\n",
        "[n,k]_q", "construction", "P(T)", "ref", "P(match|T)", "ref", "estimate", "ref", "FN"
    ));
    for r in reports {
        let reference = TABLE2_ROWS.iter().find(|row| (row.0, row.1, row.2) == (r.q, r.n, r.k));
        let (rt, rm, re) = reference.map(|row| (row.3, row.4, row.5)).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        s.push_str(&format!(
            "{:<12} {:<17} {:>8.3} {:>8.3} {:>11.3e} {:>11.3e} {:>10.3e} {:>10.3e} {:>5}\n",
            format!("[{},{}]_{}", r.n, r.k, r.q),
            r.form.name(),
            r.p_t,
            rt,
            r.fp_given_t,
            rm,
            r.estimate,
            re,
            r.tally.fn_count
        ));
    }
    s
}

/// Dimension of `A_1` for one random code under a plan.
pub fn side_dimension(code: &LinearCode, plan: &ConstructionPlan) -> Result<usize> {
    Ok(build_pair(code, plan)?.first.k())
}
