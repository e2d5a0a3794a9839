//! Seeded instance generation and the `lep-instance/1` file format.
//!
//! Every generator takes a `u64` seed and draws from a ChaCha8 stream seeded
//! with it, so instances are reproducible bit for bit. Experiment trial `t`
//! uses [`child_seed`]`(master, t)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::{field_from_descriptor, Field, FieldDescriptor, Fq};
use crate::matrix::MatFq;
use crate::reduction::{make_subgroup, SubgroupSpec};

pub const FORMAT_TAG: &str = "lep-instance/1";

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sub-stream `index` of `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `B = S A D P` with `D = diag(d)` and `P[perm[j]][j] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialWitness {
    pub s: Option<MatFq>,
    pub d: Vec<Fq>,
    /// Column `j` of `B` comes from column `perm[j]` of `A`.
    pub perm: Vec<usize>,
}

impl MonomialWitness {
    pub fn identity(n: usize) -> Self {
        MonomialWitness { s: None, d: vec![Fq::ONE; n], perm: (0..n).collect() }
    }

    pub fn is_valid(&self) -> bool {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        self.d.len() == n
            && self.d.iter().all(|x| !x.is_zero())
            && self.perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    }
}

/// The permutation matrix with `P[perm[j]][j] = 1`, so `(X P)[:, j] = X[:, perm[j]]`.
pub fn perm_matrix(field: &Field, perm: &[usize]) -> MatFq {
    let n = perm.len();
    let mut p = MatFq::zeros(field, n, n);
    for (j, &i) in perm.iter().enumerate() {
        p.set(i, j, Fq::ONE);
    }
    p
}

pub fn diag_matrix(field: &Field, d: &[Fq]) -> MatFq {
    let mut m = MatFq::zeros(field, d.len(), d.len());
    for (i, &x) in d.iter().enumerate() {
        m.set(i, i, x);
    }
    m
}

/// `G D P`.
pub fn apply_monomial(gen: &MatFq, d: &[Fq], perm: &[usize]) -> Result<MatFq> {
    if d.len() != gen.cols() || perm.len() != gen.cols() {
        return Err(Error::Shape(format!("monomial of size {} on {} columns", perm.len(), gen.cols())));
    }
    gen.scale_columns(d).map(|m| m.select_columns(perm))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub seed: String,
    pub subgroup_r: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub reduced_from: String,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LepInstance {
    pub code_a: LinearCode,
    pub code_b: LinearCode,
    pub witness: Option<MonomialWitness>,
    pub metadata: InstanceMetadata,
    pub provenance: Option<Provenance>,
}

fn random_matrix(field: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> MatFq {
    let q = field.q();
    let data = (0..rows * cols).map(|_| Fq(rng.gen_range(0..q) as u16)).collect();
    MatFq::from_vec(field, rows, cols, data).expect("entries in range")
}

fn random_invertible(field: &Field, k: usize, rng: &mut impl Rng) -> MatFq {
    loop {
        let s = random_matrix(field, k, k, rng);
        if s.rank() == k {
            return s;
        }
    }
}

fn random_code_with(field: &Field, n: usize, k: usize, rng: &mut impl Rng) -> Result<LinearCode> {
    if k < 1 || k > n {
        return Err(Error::InvalidDims(format!("need 1 <= k <= n, got [{n}, {k}]")));
    }
    loop {
        let c = LinearCode::from_generator(&random_matrix(field, k, n, rng));
        if c.k() == k {
            return Ok(c);
        }
    }
}

/// Uniform `k x n` generator, resampled until it has full rank.
pub fn random_code(field: &Field, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    random_code_with(field, n, k, &mut rng_for(seed))
}

fn random_monomial_with(
    field: &Field,
    n: usize,
    k: usize,
    subgroup: Option<&SubgroupSpec>,
    rng: &mut impl Rng,
) -> MonomialWitness {
    let q = field.q();
    let d = (0..n)
        .map(|_| match subgroup {
            Some(u) => u.members()[rng.gen_range(0..u.members().len())],
            None => Fq(rng.gen_range(1..q) as u16),
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let s = random_invertible(field, k, rng);
    MonomialWitness { s: Some(s), d, perm }
}

/// Uniform `d` over `(F_q*)^n` or `U^n`, uniform permutation, uniform invertible `S`.
pub fn random_monomial(
    field: &Field,
    n: usize,
    k: usize,
    subgroup: Option<&SubgroupSpec>,
    seed: u64,
) -> MonomialWitness {
    random_monomial_with(field, n, k, subgroup, &mut rng_for(seed))
}

/// A random code `A` and `B = S A D P` for a random witness.
pub fn equivalent_pair(field: &Field, n: usize, k: usize, subgroup_r: Option<u32>, seed: u64) -> Result<LepInstance> {
    let sub = subgroup_r.map(|r| make_subgroup(field, r)).transpose()?;
    let mut rng = rng_for(seed);
    let code_a = random_code_with(field, n, k, &mut rng)?;
    let witness = random_monomial_with(field, n, k, sub.as_ref(), &mut rng);
    let s = witness.s.as_ref().expect("sampled");
    let b = s.matmul(&apply_monomial(code_a.gen(), &witness.d, &witness.perm)?)?;
    Ok(LepInstance {
        code_a,
        code_b: LinearCode::from_generator(&b),
        witness: Some(witness),
        metadata: InstanceMetadata { seed: seed.to_string(), subgroup_r },
        provenance: None,
    })
}

/// Two independent random codes.
pub fn random_pair(field: &Field, n: usize, k: usize, seed: u64) -> Result<LepInstance> {
    let mut rng = rng_for(seed);
    let code_a = random_code_with(field, n, k, &mut rng)?;
    let code_b = random_code_with(field, n, k, &mut rng)?;
    Ok(LepInstance {
        code_a,
        code_b,
        witness: None,
        metadata: InstanceMetadata { seed: seed.to_string(), subgroup_r: None },
        provenance: None,
    })
}

/// Whether `code_a.gen · D · P` spans `code_b`; `S` plays no role.
pub fn verify_witness(inst: &LepInstance) -> Result<bool> {
    let w = inst.witness.as_ref().ok_or(Error::MissingWitness)?;
    if !w.is_valid() || w.d.len() != inst.code_a.n() {
        return Ok(false);
    }
    let mapped = apply_monomial(inst.code_a.gen(), &w.d, &w.perm)?;
    Ok(LinearCode::from_generator(&mapped) == inst.code_b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub d: Vec<u32>,
    pub perm: Vec<usize>,
    pub s: Option<Vec<Vec<u32>>>,
}

/// On-disk layout of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub field: FieldDescriptor,
    pub n: usize,
    pub k: usize,
    pub gen_a: Vec<Vec<u32>>,
    pub gen_b: Vec<Vec<u32>>,
    pub witness: Option<WitnessRecord>,
    pub metadata: InstanceMetadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl LepInstance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            format: FORMAT_TAG.to_string(),
            field: self.code_a.field().descriptor(),
            n: self.code_a.n(),
            k: self.code_a.k(),
            gen_a: self.code_a.gen().to_rows(),
            gen_b: self.code_b.gen().to_rows(),
            witness: self.witness.as_ref().map(|w| WitnessRecord {
                d: w.d.iter().map(|x| x.value()).collect(),
                perm: w.perm.clone(),
                s: w.s.as_ref().map(|s| s.to_rows()),
            }),
            metadata: self.metadata.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_file(file: &InstanceFile) -> Result<LepInstance> {
        if file.format != FORMAT_TAG {
            return Err(Error::Format(format!("unknown format tag {:?}", file.format)));
        }
        let field = field_from_descriptor(&file.field)?;
        let code = |rows: &Vec<Vec<u32>>, name: &str| -> Result<LinearCode> {
            let c = LinearCode::from_generator(&MatFq::from_rows(&field, file.n, rows)?);
            if c.k() != file.k || rows.len() != file.k {
                return Err(Error::Format(format!("{name} does not have full rank k = {}", file.k)));
            }
            Ok(c)
        };
        let code_a = code(&file.gen_a, "gen_a")?;
        let code_b = code(&file.gen_b, "gen_b")?;
        let witness = file
            .witness
            .as_ref()
            .map(|w| -> Result<MonomialWitness> {
                let d = w.d.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>()?;
                let s = w.s.as_ref().map(|s| MatFq::from_rows(&field, file.k, s)).transpose()?;
                let wit = MonomialWitness { s, d, perm: w.perm.clone() };
                if !wit.is_valid() || wit.perm.len() != file.n {
                    return Err(Error::Format("witness is not a monomial map of the right size".into()));
                }
                Ok(wit)
            })
            .transpose()?;
        Ok(LepInstance {
            code_a,
            code_b,
            witness,
            metadata: file.metadata.clone(),
            provenance: file.provenance.clone(),
        })
    }

    /// Canonical JSON: compact, keys sorted.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_file()).expect("instance serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    pub fn from_json(s: &str) -> Result<LepInstance> {
        let file: InstanceFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        LepInstance::from_file(&file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn deterministic_in_seed() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(random_code(&f, 10, 3, 7).unwrap(), random_code(&f, 10, 3, 7).unwrap());
        assert_ne!(random_code(&f, 10, 3, 7).unwrap(), random_code(&f, 10, 3, 8).unwrap());
        assert!(random_code(&f, 6, 6, 1).unwrap().is_full());
        assert!(random_code(&f, 6, 0, 1).is_err());
        assert!(random_code(&f, 6, 7, 1).is_err());
        assert_eq!(random_monomial(&f, 9, 3, None, 3), random_monomial(&f, 9, 3, None, 3));
    }

    #[test]
    fn trivial_subgroup_gives_permutation() {
        let f = make_field(7, 1).unwrap();
        let u = make_subgroup(&f, 1).unwrap();
        let w = random_monomial(&f, 12, 4, Some(&u), 11);
        assert!(w.d.iter().all(|&x| x == Fq::ONE));
        assert!(w.is_valid());
    }

    #[test]
    fn equivalent_pair_verifies_and_tamper_fails() {
        let f = make_field(5, 1).unwrap();
        let inst = equivalent_pair(&f, 12, 4, None, 5).unwrap();
        assert!(verify_witness(&inst).unwrap());
        let mut bad = inst.clone();
        let w = bad.witness.as_mut().unwrap();
        w.d[0] = f.mul(w.d[0], Fq(2));
        assert!(!verify_witness(&bad).unwrap());
        let pair = random_pair(&f, 12, 4, 5).unwrap();
        assert_eq!(verify_witness(&pair).unwrap_err(), Error::MissingWitness);
    }

    #[test]
    fn identity_witness_on_same_code() {
        let f = make_field(3, 2).unwrap();
        let c = random_code(&f, 9, 3, 1).unwrap();
        let inst = LepInstance {
            code_a: c.clone(),
            code_b: c,
            witness: Some(MonomialWitness::identity(9)),
            metadata: InstanceMetadata::default(),
            provenance: None,
        };
        assert!(verify_witness(&inst).unwrap());
    }

    #[test]
    fn json_has_sorted_keys_and_round_trips() {
        let f = make_field(2, 3).unwrap();
        let inst = equivalent_pair(&f, 10, 3, None, 99).unwrap();
        let json = inst.to_json();
        assert!(json.starts_with(
            "{\"field\":{\"alpha\":2,\"m\":3,\"modulus\":[1,1,0,1],\"p\":2},\"format\":\"lep-instance/1\""
        ));
        let back = LepInstance::from_json(&json).unwrap();
        assert_eq!(back, inst);
        assert!(LepInstance::from_json(&json.replace("lep-instance/1", "lep-instance/2")).is_err());
    }

    #[test]
    fn child_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| child_seed(42, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(child_seed(42, 3), child_seed(42, 3));
    }
}
