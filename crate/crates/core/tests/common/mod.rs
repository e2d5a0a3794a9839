//! Brute-force oracles. Nothing here calls the library's elimination code;
//! only scalar field arithmetic is shared.

#![allow(dead_code)]

use std::collections::HashSet;

use lepkit::{Field, Fq, LinearCode};

/// Every vector of `F_q^n`, in encoding order.
pub fn all_vectors(field: &Field, n: usize) -> Vec<Vec<Fq>> {
    let q = field.q() as usize;
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % q;
                    code /= q;
                    Fq(v as u16)
                })
                .collect()
        })
        .collect()
}

/// All linear combinations of `rows`.
pub fn span(field: &Field, rows: &[Vec<Fq>], n: usize) -> HashSet<Vec<Fq>> {
    let mut out = HashSet::new();
    for coeffs in all_vectors(field, rows.len()) {
        let mut v = vec![Fq::ZERO; n];
        for (c, row) in coeffs.iter().zip(rows) {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = field.add(*x, field.mul(*c, y));
            }
        }
        out.insert(v);
    }
    out
}

/// Rank from the size of the span: `|span| = q^rank`.
pub fn rank_by_span(field: &Field, rows: &[Vec<Fq>], n: usize) -> usize {
    let size = span(field, rows, n).len();
    let q = field.q() as usize;
    let mut rank = 0;
    let mut acc = 1;
    while acc < size {
        acc *= q;
        rank += 1;
    }
    assert_eq!(acc, size, "span size is a power of q");
    rank
}

pub fn dot(field: &Field, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Plain row-echelon basis built one vector at a time.
pub struct NaiveSpan {
    field: Field,
    rows: Vec<(usize, Vec<Fq>)>,
}

impl NaiveSpan {
    pub fn new(field: &Field) -> Self {
        NaiveSpan { field: field.clone(), rows: Vec::new() }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fq>]) -> Self {
        let mut s = NaiveSpan::new(field);
        for r in rows {
            s.insert(r.clone());
        }
        s
    }

    fn reduce(&self, mut v: Vec<Fq>) -> Vec<Fq> {
        let f = &self.field;
        for (p, row) in &self.rows {
            let c = v[*p];
            if !c.is_zero() {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Vec<Fq>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let inv = self.field.inv(v[p]).unwrap();
                let v: Vec<Fq> = v.iter().map(|&x| self.field.mul(x, inv)).collect();
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn rows_of(code: &LinearCode) -> Vec<Vec<Fq>> {
    (0..code.k()).map(|r| code.gen().row(r).to_vec()).collect()
}

/// Dimension of `span{x * y : x, y ∈ C}` from every codeword pair.
pub fn square_dim_by_pairs(code: &LinearCode) -> usize {
    let f = code.field();
    let n = code.n();
    let words: Vec<Vec<Fq>> = span(f, &rows_of(code), n).into_iter().collect();
    let mut acc = NaiveSpan::new(f);
    for (i, x) in words.iter().enumerate() {
        for y in &words[i..] {
            acc.insert(x.iter().zip(y).map(|(&a, &b)| f.mul(a, b)).collect());
            if acc.rank() == n {
                return n;
            }
        }
    }
    acc.rank()
}

pub fn q_pow(q: u32, k: usize) -> u64 {
    (q as u64).pow(k as u32)
}
