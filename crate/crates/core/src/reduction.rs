//! Partial closures and the reduction from LEP(U) to PEP.
//!
//! For `r | q - 1` let `β = α^((q-1)/r)` and `U = <β>`. The r-th partial
//! closure of `A` is generated by `ā ⊗ A = [A | βA | ... | β^(r-1) A]`.
//! Column `b * n + i` of the closure is copy `b` of coordinate `i`.
//!
//! Writing `d_i = α^(s_i (q-1)/r + t_i)`, a monomial map `B = S A D P` lifts to
//! `ā ⊗ B = S (ā ⊗ A) D̃ (I_r ⊗ P)`, where `D̃` acts on the `r` copies of each
//! coordinate `i` as `α^(t_i)` times a cyclic shift by `s_i`: lifted copy `b`
//! reads source copy `(b + s_i) mod r`. `D̃` is a permutation exactly when
//! every `t_i = 0`, i.e. every `d_i ∈ U`.

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::instances::{LepInstance, MonomialWitness, Provenance};
use crate::matrix::MatFq;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    field: Field,
    r: u32,
    /// `(q - 1) / r`, the number of cosets.
    index: u32,
    generator: Fq,
    members: Vec<Fq>,
    coset_reps: Vec<Fq>,
}

impl SubgroupSpec {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `|U|`.
    pub fn order(&self) -> u32 {
        self.r
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn generator(&self) -> Fq {
        self.generator
    }

    /// `1, β, β^2, ...`.
    pub fn members(&self) -> &[Fq] {
        &self.members
    }

    /// `1, α, ..., α^((q-1)/r - 1)`.
    pub fn coset_reps(&self) -> &[Fq] {
        &self.coset_reps
    }

    pub fn contains(&self, x: Fq) -> bool {
        self.field.dlog(x).map(|e| e % self.index == 0).unwrap_or(false)
    }

    /// `d = α^(s (q-1)/r + t)` with `0 <= t < (q-1)/r`, `0 <= s < r`.
    pub fn decompose_scalar(&self, d: Fq) -> Result<(u32, u32)> {
        let j = self.field.dlog(d)?;
        Ok((j / self.index, j % self.index))
    }
}

pub fn make_subgroup(field: &Field, r: u32) -> Result<SubgroupSpec> {
    let q1 = field.q() - 1;
    if r == 0 || !q1.is_multiple_of(r) {
        return Err(Error::BadSubgroupOrder { r, q_minus_one: q1 });
    }
    let index = q1 / r;
    let generator = field.exp_alpha(index as u64);
    let members = (0..r as u64).map(|s| field.exp_alpha(s * index as u64)).collect();
    let coset_reps = (0..index as u64).map(|t| field.exp_alpha(t)).collect();
    Ok(SubgroupSpec { field: field.clone(), r, index, generator, members, coset_reps })
}

/// The r-th partial closures of both codes.
pub fn reduce_to_pep(a: &LinearCode, b: &LinearCode, r: u32) -> Result<(LinearCode, LinearCode)> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.n() != b.n() || a.k() != b.k() {
        return Err(Error::InvalidDims(format!("[{}, {}] vs [{}, {}]", a.n(), a.k(), b.n(), b.k())));
    }
    Ok((a.closure(r)?, b.closure(r)?))
}

/// One `r x r` block `M_i = α^t · shift(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftBlock {
    pub shift: u32,
    pub scalar: Fq,
}

/// `D̃ = diag(M_1, ..., M_n)`, one block per original coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMonomial {
    pub r: u32,
    pub blocks: Vec<ShiftBlock>,
}

impl BlockMonomial {
    /// Every nonzero entry is 1.
    pub fn is_permutation(&self) -> bool {
        self.blocks.iter().all(|b| b.scalar == Fq::ONE)
    }

    /// The `rn x rn` matrix in closure column order (`b * n + i`).
    pub fn to_matrix(&self, field: &Field) -> MatFq {
        let (r, n) = (self.r as usize, self.blocks.len());
        let mut m = MatFq::zeros(field, r * n, r * n);
        for (i, blk) in self.blocks.iter().enumerate() {
            for b in 0..r {
                let src = (b + blk.shift as usize) % r;
                m.set(src * n + i, b * n + i, blk.scalar);
            }
        }
        m
    }
}

/// A witness for the closed codes: the monomial `D̃ (I_r ⊗ P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedWitness {
    pub blocks: BlockMonomial,
    /// Lifted column `c` reads closure column `source[c]` ...
    pub source: Vec<usize>,
    /// ... scaled by `scalars[c]`.
    pub scalars: Vec<Fq>,
    pub is_permutation: bool,
}

impl LiftedWitness {
    /// `G D̃ (I_r ⊗ P)` for a generator `G` of the closure of `A`.
    pub fn apply(&self, gen: &MatFq) -> Result<MatFq> {
        if gen.cols() != self.source.len() {
            return Err(Error::Shape(format!("{} columns for a map of size {}", gen.cols(), self.source.len())));
        }
        gen.select_columns(&self.source).scale_columns(&self.scalars)
    }

    /// `I_r ⊗ P` as a matrix.
    pub fn outer_perm_matrix(&self, field: &Field, perm: &[usize]) -> MatFq {
        let p = crate::instances::perm_matrix(field, perm);
        MatFq::block_diag(&vec![p; self.blocks.r as usize]).expect("nonempty")
    }
}

pub fn lift_witness(witness: &MonomialWitness, sub: &SubgroupSpec) -> Result<LiftedWitness> {
    let n = witness.d.len();
    let r = sub.order() as usize;
    let blocks = witness
        .d
        .iter()
        .map(|&d| {
            let (s, t) = sub.decompose_scalar(d)?;
            Ok(ShiftBlock { shift: s, scalar: sub.field().exp_alpha(t as u64) })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut source = vec![0; r * n];
    let mut scalars = vec![Fq::ONE; r * n];
    for b in 0..r {
        for j in 0..n {
            let i = witness.perm[j];
            let blk = blocks[i];
            source[b * n + j] = ((b + blk.shift as usize) % r) * n + i;
            scalars[b * n + j] = blk.scalar;
        }
    }
    let blocks = BlockMonomial { r: r as u32, blocks };
    let is_permutation = blocks.is_permutation();
    Ok(LiftedWitness { blocks, source, scalars, is_permutation })
}

pub fn is_subgroup_instance(witness: &MonomialWitness, sub: &SubgroupSpec) -> bool {
    witness.d.iter().all(|&d| sub.contains(d))
}

/// Closes both codes of an instance and, when the witness has all scalars in
/// `U`, carries the lifted permutation along.
pub fn reduce_instance(inst: &LepInstance, r: u32) -> Result<LepInstance> {
    let sub = make_subgroup(inst.code_a.field(), r)?;
    let (a, b) = reduce_to_pep(&inst.code_a, &inst.code_b, r)?;
    let witness = match &inst.witness {
        Some(w) if is_subgroup_instance(w, &sub) => {
            let lifted = lift_witness(w, &sub)?;
            Some(MonomialWitness { s: w.s.clone(), d: vec![Fq::ONE; lifted.source.len()], perm: lifted.source })
        }
        _ => None,
    };
    let mut metadata = inst.metadata.clone();
    metadata.subgroup_r = Some(1);
    Ok(LepInstance {
        code_a: a,
        code_b: b,
        witness,
        metadata,
        provenance: Some(Provenance {
            reduced_from: format!("[{}, {}]_{}", inst.code_a.n(), inst.code_a.k(), inst.code_a.field().q()),
            r,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn subgroups_of_f5() {
        let f = make_field(5, 1).unwrap();
        let u = make_subgroup(&f, 2).unwrap();
        assert_eq!(u.members(), &[Fq(1), Fq(4)]);
        assert_eq!(u.coset_reps(), &[Fq(1), Fq(2)]);
        assert_eq!(make_subgroup(&f, 4).unwrap().members().len(), 4);
        assert_eq!(make_subgroup(&f, 1).unwrap().members(), &[Fq(1)]);
        assert!(matches!(make_subgroup(&f, 3), Err(Error::BadSubgroupOrder { r: 3, q_minus_one: 4 })));
    }

    #[test]
    fn decompose_examples() {
        let f = make_field(5, 1).unwrap();
        let u = make_subgroup(&f, 2).unwrap();
        assert_eq!(u.decompose_scalar(Fq(3)).unwrap(), (1, 1));
        assert_eq!(u.decompose_scalar(Fq(4)).unwrap(), (1, 0));
        assert_eq!(u.decompose_scalar(Fq(1)).unwrap(), (0, 0));
        assert_eq!(u.decompose_scalar(Fq(0)).unwrap_err(), Error::LogOfZero);
    }

    #[test]
    fn lifting_flags_scalars_outside_subgroup() {
        let f = make_field(5, 1).unwrap();
        let u = make_subgroup(&f, 2).unwrap();
        let w = MonomialWitness { s: None, d: vec![Fq(4), Fq(2), Fq(1)], perm: vec![2, 0, 1] };
        let lifted = lift_witness(&w, &u).unwrap();
        assert!(!lifted.is_permutation);
        assert!(!is_subgroup_instance(&w, &u));
        assert_eq!(lifted.blocks.blocks[1], ShiftBlock { shift: 0, scalar: Fq(2) });
        let ones = MonomialWitness { s: None, d: vec![Fq(1); 3], perm: vec![2, 0, 1] };
        let lifted = lift_witness(&ones, &u).unwrap();
        assert!(lifted.is_permutation);
        assert_eq!(lifted.source, vec![2, 0, 1, 5, 3, 4]);
        assert_eq!(lifted.blocks.to_matrix(&f), MatFq::identity(&f, 6));
    }
}
