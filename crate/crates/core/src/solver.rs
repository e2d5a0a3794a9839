//! The power-code distinguisher.
//!
//! From a code pair `(A, B)` we build four codes `A_1, A_2, B_1, B_2` as Schur
//! products of Frobenius images of power codes, chosen so that a monomial map
//! `B = S A D P` becomes `B_1 = S_1 A_1 D^i P`, `B_2 = S_2 A_2 D^j P` with
//! `(q - 1) | (i + j)`. Under that relation the diagonal of
//! `Adj(B_1, B_2) = P^T D^j Adj(A_1, A_2) D^i P` is a permutation of the
//! diagonal of `Adj(A_1, A_2)`, so differing diagonal multisets prove the
//! codes inequivalent.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::{binomial, LinearCode};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::MatFq;

/// One factor `(C^(power))^[p^frob]` of a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactorSpec {
    pub power: u32,
    pub frob: u32,
}

impl FactorSpec {
    pub fn new(power: u32, frob: u32) -> Self {
        FactorSpec { power, frob }
    }
}

/// Construction families, in tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlanForm {
    /// `q = 2r + 1`: `A_1 = A_2 = A^(r)`.
    OddPrime,
    /// `q = p^m`: `A_1 = A_2 = A^(p-1) * ... * (A^(p-1))^[p^(m-1)]`.
    FrobeniusGeneral,
    /// `q = (2r + 1)^m`: as above with powers `r`.
    FrobeniusOdd,
    /// `q = p^(2l)`: `A_2 = A_1^[p^l]`, a Hermitian hull.
    Hermitian,
    /// `q = (2r + 1)^(2l + 1)`: asymmetric sides sharing the factor `(A^(r))^[p^l]`.
    OddDegree,
}

impl PlanForm {
    pub const ALL: [PlanForm; 5] = [
        PlanForm::OddPrime,
        PlanForm::FrobeniusGeneral,
        PlanForm::FrobeniusOdd,
        PlanForm::Hermitian,
        PlanForm::OddDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlanForm::OddPrime => "OddPrime",
            PlanForm::FrobeniusGeneral => "FrobeniusGeneral",
            PlanForm::FrobeniusOdd => "FrobeniusOdd",
            PlanForm::Hermitian => "Hermitian",
            PlanForm::OddDegree => "OddDegree",
        }
    }

    pub fn parse(s: &str) -> Option<PlanForm> {
        PlanForm::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for PlanForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub form: PlanForm,
    pub p: u32,
    pub m: u32,
    pub factors1: Vec<FactorSpec>,
    pub factors2: Vec<FactorSpec>,
    /// Upper bound on `dim A_1`; saturates at `u128::MAX`.
    pub dim_bound: u128,
}

/// Logged form `{ form, factors1, factors2, i, j, dim_bound }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub form: PlanForm,
    pub factors1: Vec<FactorSpec>,
    pub factors2: Vec<FactorSpec>,
    pub i: u64,
    pub j: u64,
    pub dim_bound: u128,
}

fn exponent(p: u32, factors: &[FactorSpec]) -> u64 {
    factors.iter().map(|f| f.power as u64 * (p as u64).pow(f.frob)).sum()
}

impl ConstructionPlan {
    pub fn q(&self) -> u32 {
        self.p.pow(self.m)
    }

    /// The power of `D` picked up by `A_1`.
    pub fn i_exp(&self) -> u64 {
        exponent(self.p, &self.factors1)
    }

    /// The power of `D` picked up by `A_2`.
    pub fn j_exp(&self) -> u64 {
        exponent(self.p, &self.factors2)
    }

    pub fn exponents_valid(&self) -> bool {
        (self.i_exp() + self.j_exp()).is_multiple_of(self.q() as u64 - 1)
    }

    pub fn symmetric(&self) -> bool {
        self.factors1 == self.factors2
    }

    pub fn total_factors(&self) -> usize {
        self.factors1.len() + self.factors2.len()
    }

    pub fn record(&self) -> PlanRecord {
        PlanRecord {
            form: self.form,
            factors1: self.factors1.clone(),
            factors2: self.factors2.clone(),
            i: self.i_exp(),
            j: self.j_exp(),
            dim_bound: self.dim_bound,
        }
    }
}

fn pow_sat(base: u128, e: u32) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Every construction the field's form admits, with bounds for dimension `k`.
/// Fields with `q < 5` are left out.
pub fn enumerate_plans(field: &Field, k: usize) -> Vec<ConstructionPlan> {
    let (p, m, q) = (field.p(), field.m(), field.q());
    let k = k as u64;
    let mut plans = Vec::new();
    if q < 5 {
        return plans;
    }
    let plan = |form, factors1: Vec<FactorSpec>, factors2: Vec<FactorSpec>, dim_bound| ConstructionPlan {
        form,
        p,
        m,
        factors1,
        factors2,
        dim_bound,
    };
    // binom(k + s - 1, s), the generic dimension of A^(s)
    let pd = |s: u32| binomial(k + s as u64 - 1, s as u64);

    if q % 2 == 1 {
        let r = (q - 1) / 2;
        let f = vec![FactorSpec::new(r, 0)];
        plans.push(plan(PlanForm::OddPrime, f.clone(), f, pd(r)));
    }
    {
        let f: Vec<_> = (0..m).map(|i| FactorSpec::new(p - 1, i)).collect();
        plans.push(plan(PlanForm::FrobeniusGeneral, f.clone(), f, pow_sat(pd(p - 1), m)));
    }
    if p % 2 == 1 && m >= 2 {
        let r = (p - 1) / 2;
        let f: Vec<_> = (0..m).map(|i| FactorSpec::new(r, i)).collect();
        plans.push(plan(PlanForm::FrobeniusOdd, f.clone(), f, pow_sat(pd(r), m)));
    }
    if m % 2 == 0 {
        let l = m / 2;
        let f1: Vec<_> = (0..l).map(|i| FactorSpec::new(p - 1, i)).collect();
        let f2: Vec<_> = (0..l).map(|i| FactorSpec::new(p - 1, i + l)).collect();
        plans.push(plan(PlanForm::Hermitian, f1, f2, pow_sat(pd(p - 1), l)));
    }
    if p % 2 == 1 && m % 2 == 1 && m >= 3 {
        let l = (m - 1) / 2;
        let r = (p - 1) / 2;
        let mut f1: Vec<_> = (0..l).map(|i| FactorSpec::new(p - 1, i)).collect();
        f1.push(FactorSpec::new(r, l));
        let mut f2 = vec![FactorSpec::new(r, l)];
        f2.extend((l + 1..=2 * l).map(|i| FactorSpec::new(p - 1, i)));
        plans.push(plan(PlanForm::OddDegree, f1, f2, pow_sat(pd(p - 1), l).saturating_mul(pd(r))));
    }
    plans
}

/// The applicable plan with the smallest dimension bound; ties go to fewer
/// factors, then to the earlier form.
pub fn select_construction(field: &Field, k: usize, n: usize) -> Result<ConstructionPlan> {
    select_with(field, k, n, None)
}

/// Like [`select_construction`] but restricted to one form.
pub fn select_form(field: &Field, k: usize, n: usize, form: PlanForm) -> Result<ConstructionPlan> {
    select_with(field, k, n, Some(form))
}

fn select_with(field: &Field, k: usize, n: usize, only: Option<PlanForm>) -> Result<ConstructionPlan> {
    let q = field.q();
    let fail = |reason: String| Error::NoApplicablePlan { q, n, k, reason };
    if k < 1 || n <= k {
        return Err(fail("need 1 <= k < n".into()));
    }
    let candidates: Vec<_> =
        enumerate_plans(field, k).into_iter().filter(|p| only.is_none_or(|f| p.form == f)).collect();
    if candidates.is_empty() {
        return Err(fail(match only {
            Some(f) if q >= 5 => format!("form {f} does not apply to q = {q}"),
            _ => format!("q = {q} < 5 is outside the construction registry"),
        }));
    }
    let violated: Vec<String> =
        candidates.iter().map(|p| format!("{}: dim bound {} >= n = {n}", p.form, p.dim_bound)).collect();
    candidates
        .into_iter()
        .filter(|p| p.dim_bound < n as u128)
        .min_by_key(|p| (p.dim_bound, p.total_factors(), p.form))
        .ok_or_else(|| fail(violated.join("; ")))
}

/// Schur product over `factors` of `(C^(power))^[p^frob]`.
pub fn build_side(c: &LinearCode, factors: &[FactorSpec]) -> Result<LinearCode> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::InvalidDims("empty factor list".into()))?;
    let mut powers: HashMap<u32, LinearCode> = HashMap::new();
    let mut factor = |f: &FactorSpec| -> Result<LinearCode> {
        if let std::collections::hash_map::Entry::Vacant(e) = powers.entry(f.power) {
            e.insert(c.power(f.power)?);
        }
        Ok(powers[&f.power].frobenius_code(f.frob))
    };
    let mut acc = factor(first)?;
    for f in rest {
        if acc.is_full() {
            break;
        }
        acc = acc.schur(&factor(f)?)?;
    }
    Ok(acc)
}

fn check_adj_inputs(c1: &LinearCode, c2: &LinearCode) -> Result<()> {
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch);
    }
    if c1.n() != c2.n() {
        return Err(Error::DimMismatch(c1.n(), c2.n()));
    }
    if c1.k() != c2.k() {
        return Err(Error::DimMismatch(c1.k(), c2.k()));
    }
    Ok(())
}

/// `(G_1 G_2^T)^{-1} G_1`, shared by both Adj routines.
fn adj_core(c1: &LinearCode, c2: &LinearCode) -> Result<MatFq> {
    check_adj_inputs(c1, c2)?;
    let g1 = c1.gen();
    let g2t = c2.gen().transpose();
    let gram = g1.matmul(&g2t)?;
    let inv = gram.invert().map_err(|e| match e {
        Error::Singular => Error::NotInvertible,
        other => other,
    })?;
    inv.matmul(g1)
}

/// `Adj(C_1, C_2) = G_2^T (G_1 G_2^T)^{-1} G_1` on the canonical generators.
pub fn adj(c1: &LinearCode, c2: &LinearCode) -> Result<MatFq> {
    let w = adj_core(c1, c2)?;
    c2.gen().transpose().matmul(&w)
}

/// Only the diagonal of [`adj`], in `O(k^2 n)`.
pub fn adj_diagonal(c1: &LinearCode, c2: &LinearCode) -> Result<Vec<Fq>> {
    let w = adj_core(c1, c2)?;
    let g2 = c2.gen();
    let f = c1.field();
    Ok((0..c1.n())
        .map(|u| (0..g2.rows()).fold(Fq::ZERO, |acc, b| f.add(acc, f.mul(g2.get(b, u), w.get(b, u)))))
        .collect())
}

/// Diagonal entries sorted by encoding; equal outputs mean equal multisets.
pub fn diag_multiset(m: &MatFq) -> Vec<Fq> {
    sorted(m.diagonal())
}

fn sorted(mut v: Vec<Fq>) -> Vec<Fq> {
    v.sort_unstable();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    LikelyEquivalent,
    NotEquivalent,
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeDetail {
    pub dim_a1: usize,
    pub dim_a2: usize,
    pub dim_b1: usize,
    pub dim_b2: usize,
    /// Both `A_1 ∩ A_2^⊥` and `B_1 ∩ B_2^⊥` are trivial.
    pub t_held: bool,
    pub diag_a: Option<Vec<Fq>>,
    pub diag_b: Option<Vec<Fq>>,
    /// Why the verdict is inconclusive, when it is.
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishOutcome {
    pub verdict: Verdict,
    pub detail: OutcomeDetail,
}

/// The two codes of one side of the distinguisher.
#[derive(Clone, Debug)]
pub struct SidePair {
    pub first: LinearCode,
    pub second: LinearCode,
}

pub fn build_pair(c: &LinearCode, plan: &ConstructionPlan) -> Result<SidePair> {
    let first = build_side(c, &plan.factors1)?;
    let second = if plan.symmetric() { first.clone() } else { build_side(c, &plan.factors2)? };
    Ok(SidePair { first, second })
}

/// Sorted diagonal of `Adj(first, second)`, or the reason it does not exist.
fn side_invariant(side: &SidePair) -> std::result::Result<Vec<Fq>, String> {
    let (k1, k2, n) = (side.first.k(), side.second.k(), side.first.n());
    if k1 != k2 {
        return Err(format!("side dimensions differ ({k1} vs {k2})"));
    }
    if k1 == n || k1 == 0 {
        return Err(format!("degenerate side of dimension {k1} in length {n}"));
    }
    match adj_diagonal(&side.first, &side.second) {
        Ok(d) => Ok(sorted(d)),
        Err(Error::NotInvertible) => Err("nontrivial intersection with the dual".into()),
        Err(e) => Err(e.to_string()),
    }
}

pub fn distinguish(a: &LinearCode, b: &LinearCode, plan: &ConstructionPlan) -> DistinguishOutcome {
    let mut detail = OutcomeDetail::default();
    let inconclusive = |mut detail: OutcomeDetail, reason: String| {
        detail.reason = Some(reason);
        DistinguishOutcome { verdict: Verdict::Inconclusive, detail }
    };
    if a.field() != b.field() || a.n() != b.n() || a.k() != b.k() {
        return inconclusive(detail, "codes do not share [n, k]_q".into());
    }
    if a.field().p() != plan.p || a.field().m() != plan.m {
        return inconclusive(detail, "plan was built for a different field".into());
    }
    let side_a = match build_pair(a, plan) {
        Ok(s) => s,
        Err(e) => return inconclusive(detail, e.to_string()),
    };
    detail.dim_a1 = side_a.first.k();
    detail.dim_a2 = side_a.second.k();
    // Event T needs both sides, so a failure on A already decides the verdict.
    let diag_a = match side_invariant(&side_a) {
        Ok(d) => d,
        Err(reason) => return inconclusive(detail, format!("A side: {reason}")),
    };
    detail.diag_a = Some(diag_a.clone());
    let side_b = match build_pair(b, plan) {
        Ok(s) => s,
        Err(e) => return inconclusive(detail, e.to_string()),
    };
    detail.dim_b1 = side_b.first.k();
    detail.dim_b2 = side_b.second.k();
    if detail.dim_a1 != detail.dim_b1 {
        return inconclusive(detail, "A and B sides have different dimensions".into());
    }
    let diag_b = match side_invariant(&side_b) {
        Ok(d) => d,
        Err(reason) => return inconclusive(detail, format!("B side: {reason}")),
    };
    detail.t_held = true;
    let verdict = if diag_a == diag_b { Verdict::LikelyEquivalent } else { Verdict::NotEquivalent };
    detail.diag_b = Some(diag_b);
    DistinguishOutcome { verdict, detail }
}

/// Probability that two random vectors of length `n` over a field of
/// `q_diag` elements have the same multiset of entries, asymptotically
/// `q^(q/2) (4 pi n)^((1 - q)/2)`.
pub fn fp_estimate(q_diag: u32, n: usize) -> f64 {
    let q = q_diag as f64;
    q.powf(q / 2.0) * (4.0 * std::f64::consts::PI * n as f64).powf((1.0 - q) / 2.0)
}

fn shifted(factors: &[FactorSpec], d: u32, m: u32) -> Vec<FactorSpec> {
    let mut out: Vec<_> = factors.iter().map(|f| FactorSpec::new(f.power, (f.frob + d) % m)).collect();
    out.sort();
    out
}

/// Size of the smallest subfield `F_{p^d}` that the Adj diagonals are
/// forced into.
///
/// If shifting every Frobenius exponent by `d` maps the factor lists onto
/// themselves, `phi_d` fixes `A_1` and `A_2` and therefore fixes Adj; if it
/// swaps them, `phi_d` turns `Adj(A_1, A_2)` into `Adj(A_2, A_1)`, its
/// transpose, which has the same diagonal. Either way the diagonal is fixed
/// by `phi_d`.
pub fn diag_subfield(plan: &ConstructionPlan, field: &Field) -> u32 {
    let (p, m) = (field.p(), field.m());
    let f1 = shifted(&plan.factors1, 0, m);
    let f2 = shifted(&plan.factors2, 0, m);
    let d = (1..=m)
        .filter(|d| m % d == 0)
        .find(|&d| {
            let (s1, s2) = (shifted(&f1, d, m), shifted(&f2, d, m));
            (s1 == f1 && s2 == f2) || (s1 == f2 && s2 == f1)
        })
        .unwrap_or(m);
    p.pow(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn adj_of_identity_block() {
        let f = make_field(5, 1).unwrap();
        let c = LinearCode::from_generator(&MatFq::from_rows(&f, 3, &[&[1u32, 0, 0][..], &[0, 1, 0]]).unwrap());
        let a = adj(&c, &c).unwrap();
        let mut expect = MatFq::identity(&f, 3);
        expect.set(2, 2, Fq::ZERO);
        assert_eq!(a, expect);
        assert_eq!(adj_diagonal(&c, &c).unwrap(), expect.diagonal());
        assert_eq!(diag_multiset(&a), vec![Fq(0), Fq(1), Fq(1)]);
    }

    #[test]
    fn adj_errors() {
        let f = make_field(5, 1).unwrap();
        let c = LinearCode::from_generator(&MatFq::from_rows(&f, 2, &[&[1u32, 2][..]]).unwrap());
        // (1,2)·(1,2) = 5 = 0
        assert_eq!(adj(&c, &c).unwrap_err(), Error::NotInvertible);
        let d = LinearCode::full(&f, 2);
        assert_eq!(adj(&c, &d).unwrap_err(), Error::DimMismatch(1, 2));
    }

    #[test]
    fn select_examples() {
        let f5 = make_field(5, 1).unwrap();
        let plan = select_construction(&f5, 10, 100).unwrap();
        assert_eq!(plan.form, PlanForm::OddPrime);
        assert_eq!(plan.factors1, vec![FactorSpec::new(2, 0)]);
        assert_eq!((plan.i_exp(), plan.j_exp(), plan.dim_bound), (2, 2, 55));
        assert!(matches!(select_construction(&f5, 50, 100), Err(Error::NoApplicablePlan { .. })));

        let f16 = make_field(2, 4).unwrap();
        let plan = select_construction(&f16, 8, 100).unwrap();
        assert_eq!(plan.form, PlanForm::Hermitian);
        assert_eq!(plan.factors1, vec![FactorSpec::new(1, 0), FactorSpec::new(1, 1)]);
        assert_eq!(plan.factors2, vec![FactorSpec::new(1, 2), FactorSpec::new(1, 3)]);
        assert_eq!(plan.dim_bound, 64);

        let f8 = make_field(2, 3).unwrap();
        let plan = select_construction(&f8, 6, 300).unwrap();
        assert_eq!(plan.form, PlanForm::FrobeniusGeneral);
        assert_eq!(plan.dim_bound, 216);

        let f9 = make_field(3, 2).unwrap();
        let plan = select_construction(&f9, 12, 100).unwrap();
        assert_eq!(plan.form, PlanForm::Hermitian);
        assert_eq!(plan.dim_bound, 78);

        let f4 = make_field(2, 2).unwrap();
        assert!(matches!(select_construction(&f4, 2, 100), Err(Error::NoApplicablePlan { .. })));
        assert!(matches!(select_form(&f5, 10, 100, PlanForm::Hermitian), Err(Error::NoApplicablePlan { .. })));
    }

    #[test]
    fn odd_degree_exponents_for_f27() {
        let f27 = make_field(3, 3).unwrap();
        let plan = enumerate_plans(&f27, 5).into_iter().find(|p| p.form == PlanForm::OddDegree).unwrap();
        assert_eq!(plan.factors1, vec![FactorSpec::new(2, 0), FactorSpec::new(1, 1)]);
        assert_eq!(plan.factors2, vec![FactorSpec::new(1, 1), FactorSpec::new(2, 2)]);
        assert_eq!((plan.i_exp(), plan.j_exp()), (5, 21));
        assert!(plan.exponents_valid());
        // binom(k+1, 2) * binom(k, 1)
        assert_eq!(plan.dim_bound, 15 * 5);
    }

    #[test]
    fn subfield_sizes() {
        let f8 = make_field(2, 3).unwrap();
        assert_eq!(diag_subfield(&select_construction(&f8, 6, 300).unwrap(), &f8), 2);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(diag_subfield(&select_construction(&f9, 12, 100).unwrap(), &f9), 3);
        let f16 = make_field(2, 4).unwrap();
        assert_eq!(diag_subfield(&select_construction(&f16, 8, 100).unwrap(), &f16), 4);
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(diag_subfield(&select_construction(&f5, 10, 100).unwrap(), &f5), 5);
        let f27 = make_field(3, 3).unwrap();
        let odd = enumerate_plans(&f27, 3).into_iter().find(|p| p.form == PlanForm::OddDegree).unwrap();
        assert_eq!(diag_subfield(&odd, &f27), 27);
    }

    #[test]
    fn estimate_values() {
        let close = |x: f64, y: f64| ((x - y) / y).abs() < 5e-3;
        assert!(close(fp_estimate(5, 100), 3.54e-5));
        assert!(close(fp_estimate(2, 300), 0.0326));
        assert!(close(fp_estimate(3, 100), 4.135e-3));
    }

    #[test]
    fn plan_record_serializes() {
        let f5 = make_field(5, 1).unwrap();
        let rec = select_construction(&f5, 10, 100).unwrap().record();
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["form"], "OddPrime");
        assert_eq!(json["i"], 2);
        assert_eq!(json["dim_bound"], 55);
    }
}
