//! Linear codes stored by their canonical (RREF) generator matrix, and the
//! operations the distinguisher and the closure reduction are built from:
//! duals, hulls, Schur products, power codes, Frobenius images, closures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Fq};
use crate::matrix::MatFq;

/// An `[n, k]_q` code. Two values are equal iff they are the same code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: MatFq,
}

/// Serialized form `{ field, n, k, gen }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    pub gen: Vec<Vec<u32>>,
}

impl LinearCode {
    /// The row space of `m`.
    pub fn from_generator(m: &MatFq) -> LinearCode {
        let mut gen = m.clone();
        let (rank, _) = gen.rref_in_place();
        gen.truncate_rows(rank);
        LinearCode { gen }
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode { gen: MatFq::zeros(field, 0, n) }
    }

    pub fn full(field: &Field, n: usize) -> LinearCode {
        LinearCode { gen: MatFq::identity(field, n) }
    }

    /// Canonical generator matrix (`k x n`, RREF).
    pub fn gen(&self) -> &MatFq {
        &self.gen
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn is_full(&self) -> bool {
        self.k() == self.n()
    }

    pub fn is_zero(&self) -> bool {
        self.k() == 0
    }

    pub fn to_record(&self) -> CodeRecord {
        CodeRecord { field: self.field().descriptor(), n: self.n(), k: self.k(), gen: self.gen.to_rows() }
    }

    pub fn contains(&self, x: &[Fq]) -> bool {
        if x.len() != self.n() {
            return false;
        }
        let single = MatFq::from_vec(self.field(), 1, x.len(), x.to_vec()).expect("entries come from the same field");
        let stacked = self.gen.vstack(&single).expect("same shape");
        stacked.rank() == self.k()
    }

    /// Whether `self` is a subspace of `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n() == other.n()
            && self.field() == other.field()
            && other.gen.vstack(&self.gen).map(|m| m.rank() == other.k()).unwrap_or(false)
    }

    fn compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.n() != other.n() {
            return Err(Error::DimMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode { gen: self.gen.right_kernel() }
    }

    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        self.compatible(other)?;
        let checks = self.dual().gen.vstack(&other.dual().gen)?;
        Ok(LinearCode { gen: checks.right_kernel() })
    }

    pub fn hull(&self) -> LinearCode {
        self.intersect(&self.dual()).expect("a code and its dual are compatible")
    }

    /// Dual under `<x, y>_H = Σ x_i y_i^(p^(m/2))`.
    pub fn hermitian_dual(&self) -> Result<LinearCode> {
        let m = self.field().m();
        if !m.is_multiple_of(2) {
            return Err(Error::OddExtension(m));
        }
        Ok(self.frobenius_code(m / 2).dual())
    }

    pub fn hermitian_hull(&self) -> Result<LinearCode> {
        self.intersect(&self.hermitian_dual()?)
    }

    /// Span of the `k1 * k2` products of basis vectors.
    pub fn schur(&self, other: &LinearCode) -> Result<LinearCode> {
        self.compatible(other)?;
        let f = self.field().clone();
        let n = self.n();
        let mut acc = Accumulator::new(&f, n);
        'outer: for a in 0..self.k() {
            let ra = self.gen.row(a);
            let start = if std::ptr::eq(self, other) { a } else { 0 };
            for b in start..other.k() {
                let rb = other.gen.row(b);
                let prod: Vec<Fq> = ra.iter().zip(rb).map(|(&x, &y)| f.mul(x, y)).collect();
                acc.insert(prod);
                if acc.rank() == n {
                    break 'outer;
                }
            }
        }
        Ok(acc.into_code())
    }

    /// `C^(l)`, the span of all `l`-fold Schur products.
    pub fn power(&self, l: u32) -> Result<LinearCode> {
        if l < 1 {
            return Err(Error::ZeroPower);
        }
        if l == 2 {
            return self.schur(self);
        }
        let mut acc = self.clone();
        for _ in 1..l {
            if acc.is_full() {
                break;
            }
            acc = acc.schur(self)?;
        }
        Ok(acc)
    }

    /// `C^[p^i]`, the entry-wise Frobenius image.
    pub fn frobenius_code(&self, i: u32) -> LinearCode {
        // The image of an RREF matrix is still in RREF: pivots stay 1 and zeros stay 0.
        LinearCode { gen: self.gen.frobenius(i) }
    }

    /// The r-th partial closure, generated by `ā ⊗ G` with
    /// `ā = (1, β, β^2, ..., β^(r-1))`, `β = α^((q-1)/r)`.
    pub fn closure(&self, r: u32) -> Result<LinearCode> {
        let a = closure_vector(self.field(), r)?;
        Ok(LinearCode::from_generator(&MatFq::kron_row(&a, &self.gen)?))
    }
}

/// `ā = (1, β, ..., β^(r-1))` with `β = α^((q-1)/r)`.
pub fn closure_vector(field: &Field, r: u32) -> Result<Vec<Fq>> {
    let q1 = field.q() - 1;
    if r == 0 || !q1.is_multiple_of(r) {
        return Err(Error::BadSubgroupOrder { r, q_minus_one: q1 });
    }
    let step = (q1 / r) as u64;
    Ok((0..r as u64).map(|j| field.exp_alpha(j * step)).collect())
}

/// `min(binom(k + l - 1, l), n)`.
pub fn expected_power_dim(k: usize, l: u32, n: usize) -> usize {
    let b = binomial((k + l as usize).saturating_sub(1) as u64, l as u64);
    b.min(n as u128) as usize
}

/// Saturating binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Incremental row-echelon basis used to span many candidate vectors
/// without materializing them all.
struct Accumulator {
    field: Field,
    n: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Accumulator {
    fn new(field: &Field, n: usize) -> Self {
        Accumulator { field: field.clone(), n, rows: Vec::new(), pivots: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<Fq>) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                f.axpy(&mut v[p..], f.neg(c), &row[p..]);
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = f.inv(v[p]).expect("nonzero");
            f.scale(&mut v[p..], inv);
            self.rows.push(v);
            self.pivots.push(p);
        }
    }

    fn into_code(self) -> LinearCode {
        let data: Vec<Fq> = self.rows.into_iter().flatten().collect();
        let k = data.len() / self.n.max(1);
        let m = MatFq::from_vec(&self.field, if self.n == 0 { 0 } else { k }, self.n, data).expect("consistent shape");
        LinearCode::from_generator(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn code(f: &Field, n: usize, rows: &[&[u32]]) -> LinearCode {
        LinearCode::from_generator(&MatFq::from_rows(f, n, rows).unwrap())
    }

    #[test]
    fn from_generator_collapses_dependent_rows() {
        let f = make_field(5, 1).unwrap();
        let c = code(&f, 2, &[&[2, 4], &[1, 2]]);
        assert_eq!((c.n(), c.k()), (2, 1));
        assert_eq!(c.gen().to_rows(), vec![vec![1, 2]]);
        let full = LinearCode::from_generator(&MatFq::identity(&f, 3));
        assert!(full.is_full());
    }

    #[test]
    fn dual_examples() {
        let f = make_field(5, 1).unwrap();
        assert!(LinearCode::full(&f, 4).dual().is_zero());
        assert_eq!(LinearCode::zero(&f, 4).dual(), LinearCode::full(&f, 4));
        let f2 = make_field(2, 1).unwrap();
        let rep = code(&f2, 2, &[&[1, 1]]);
        assert_eq!(rep.dual(), rep);
        assert_eq!(rep.hull(), rep);
    }

    #[test]
    fn schur_small_example() {
        let f = make_field(5, 1).unwrap();
        let c = code(&f, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert!(c.power(2).unwrap().is_full());
        let ones = code(&f, 3, &[&[1, 1, 1]]);
        assert_eq!(c.schur(&ones).unwrap(), c);
        assert_eq!(c.power(1).unwrap(), c);
        assert_eq!(c.power(0).unwrap_err(), Error::ZeroPower);
    }

    #[test]
    fn expected_power_dim_examples() {
        assert_eq!(expected_power_dim(10, 2, 100), 55);
        assert_eq!(expected_power_dim(10, 2, 40), 40);
        assert_eq!(expected_power_dim(12, 2, 100), 78);
        assert_eq!(expected_power_dim(4, 3, 30), 20);
        assert_eq!(binomial(100, 50), 100891344545564193334812497256);
        assert_eq!(binomial(400, 200), u128::MAX);
    }

    #[test]
    fn closure_vector_examples() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(closure_vector(&f, 4).unwrap(), vec![Fq(1), Fq(2), Fq(4), Fq(3)]);
        assert_eq!(closure_vector(&f, 2).unwrap(), vec![Fq(1), Fq(4)]);
        assert_eq!(closure_vector(&f, 1).unwrap(), vec![Fq(1)]);
        assert!(matches!(closure_vector(&f, 3), Err(Error::BadSubgroupOrder { .. })));
        let a = closure_vector(&f, 4).unwrap();
        assert_eq!(f.dot(&a, &a), Fq::ZERO);
    }

    #[test]
    fn hermitian_hull_needs_even_degree() {
        let f = make_field(2, 3).unwrap();
        let c = LinearCode::full(&f, 3);
        assert_eq!(c.hermitian_hull().unwrap_err(), Error::OddExtension(3));
    }

    #[test]
    fn mismatched_operands() {
        let f = make_field(5, 1).unwrap();
        let a = LinearCode::full(&f, 3);
        let b = LinearCode::full(&f, 4);
        assert_eq!(a.intersect(&b).unwrap_err(), Error::DimMismatch(3, 4));
        let g = make_field(7, 1).unwrap();
        assert_eq!(a.schur(&LinearCode::full(&g, 3)).unwrap_err(), Error::FieldMismatch);
    }
}
