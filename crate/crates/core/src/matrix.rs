//! Dense matrices over a [`FieldSpec`](crate::field::FieldSpec).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

#[derive(Clone, PartialEq, Eq)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
    field: Field,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFq {}x{} over F_{}", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r).iter().map(|x| x.0).collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

/// Output of [`MatFq::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: MatFq,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatFq {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> MatFq {
        MatFq { rows, cols, data: vec![Fq::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> MatFq {
        let mut m = MatFq::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Fq>) -> Result<MatFq> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|x| x.value() >= field.q()) {
            return Err(Error::Format(format!("{bad} is not an element of F_{}", field.q())));
        }
        Ok(MatFq { rows, cols, data, field: field.clone() })
    }

    /// Builds a matrix from integer-encoded rows. An empty row list gives a `0 x cols` matrix.
    pub fn from_rows<R: AsRef<[u32]>>(field: &Field, cols: usize, rows: &[R]) -> Result<MatFq> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a matrix with {cols} columns", r.len())));
            }
            for &v in r {
                data.push(field.elem(v)?);
            }
        }
        MatFq::from_vec(field, rows.len(), cols, data)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|x| x.value()).collect()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn data(&self) -> &[Fq] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Fq] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &MatFq) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> MatFq {
        let mut t = MatFq::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn matmul(&self, other: &MatFq) -> Result<MatFq> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = &self.field;
        let mut out = MatFq::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (l, &a) in self.row(r).iter().enumerate() {
                f.axpy(dst, a, other.row(l));
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &MatFq) -> Result<MatFq> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!("stacking {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatFq { rows: self.rows + other.rows, cols: self.cols, data, field: self.field.clone() })
    }

    pub fn block_diag(blocks: &[MatFq]) -> Result<MatFq> {
        let first = blocks.first().ok_or_else(|| Error::Shape("block_diag of no blocks".into()))?;
        for b in blocks {
            first.same_field(b)?;
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatFq::zeros(&first.field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                out.row_mut(r0 + r)[c0..c0 + b.cols].copy_from_slice(b.row(r));
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// `[a_1 M | a_2 M | ... | a_r M]`, the Kronecker product of a row vector with `M`.
    pub fn kron_row(a: &[Fq], m: &MatFq) -> Result<MatFq> {
        if a.is_empty() {
            return Err(Error::Shape("kron with an empty vector".into()));
        }
        let f = &m.field;
        let cols = a.len() * m.cols;
        let mut out = MatFq::zeros(f, m.rows, cols);
        for r in 0..m.rows {
            let src = m.row(r);
            let dst = out.row_mut(r);
            for (b, &s) in a.iter().enumerate() {
                f.axpy(&mut dst[b * m.cols..(b + 1) * m.cols], s, src);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(Fq) -> Fq) -> MatFq {
        MatFq {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
            field: self.field.clone(),
        }
    }

    /// Entry-wise `x -> x^(p^i)`.
    pub fn frobenius(&self, i: u32) -> MatFq {
        if i.is_multiple_of(self.field.m()) {
            return self.clone();
        }
        let table = self.field.frobenius_table(i);
        self.map(|x| table[x.0 as usize])
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> MatFq {
        let mut out = MatFq::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            let src = self.row(r);
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = src[c];
            }
        }
        out
    }

    /// Scales column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[Fq]) -> Result<MatFq> {
        if d.len() != self.cols {
            return Err(Error::Shape(format!("{} scalars for {} columns", d.len(), self.cols)));
        }
        let f = &self.field;
        let mut out = self.clone();
        for r in 0..self.rows {
            for (x, &s) in out.row_mut(r).iter_mut().zip(d) {
                *x = f.mul(*x, s);
            }
        }
        Ok(out)
    }

    pub fn diagonal(&self) -> Vec<Fq> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Gauss-Jordan elimination in place; returns `(rank, pivots)`.
    ///
    /// Pivots are the first nonzero entry found scanning down each column.
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let field = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    self.data.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = field.inv(self.get(rank, c)).expect("pivot is nonzero");
            field.scale(&mut self.data[rank * cols + c..(rank + 1) * cols], inv);
            let (before, rest) = self.data.split_at_mut(rank * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let pivot_tail = &pivot_row[c..];
            for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
                let factor = row[c];
                if !factor.is_zero() {
                    field.axpy(&mut row[c..], field.neg(factor), pivot_tail);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        (rank, pivots)
    }

    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let (rank, pivots) = reduced.rref_in_place();
        Rref { reduced, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().0
    }

    /// Drops rows past `n`.
    pub fn truncate_rows(&mut self, n: usize) {
        self.rows = self.rows.min(n);
        self.data.truncate(self.rows * self.cols);
    }

    pub fn invert(&self) -> Result<MatFq> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverting a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut aug = MatFq::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug.set(r, n + r, Fq::ONE);
        }
        let (_, pivots) = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_columns(&cols))
    }

    /// Basis of `{x : M x^T = 0}`, one row per vector, in RREF.
    pub fn right_kernel(&self) -> MatFq {
        let Rref { reduced, rank, pivots } = self.rref();
        let n = self.cols;
        let f = &self.field;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut basis = MatFq::zeros(f, free.len(), n);
        for (i, &fc) in free.iter().enumerate() {
            basis.set(i, fc, Fq::ONE);
            for (r, &pc) in pivots.iter().enumerate().take(rank) {
                basis.set(i, pc, f.neg(reduced.get(r, fc)));
            }
        }
        basis.rref_in_place();
        basis
    }
}
