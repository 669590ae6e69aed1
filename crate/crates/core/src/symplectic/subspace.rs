//! Invariant subspaces of the classical map and their symplectic type.

use super::charpoly::char_poly_info;
use super::linalg::{nullspace_mod_p, nullspace_rational, rank_mod_p, rank_rational, rref_mod_p, rref_rational};
use super::matrix::SymplecticMatrix;
use super::poly::IntPoly;
use super::zero_divisor::{krylov, reduce_frequency, FrequencyVector};
use crate::arith::modular::{add_mod, mul_mod, sub_mod};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Isotropy {
    Isotropic,
    Symplectic,
    Mixed,
}

/// A rational subspace of `Q^{2g}` given by independent row vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDescriptor {
    #[serde(with = "rational_rows")]
    pub basis: Vec<Vec<BigRational>>,
    pub label: String,
    pub isotropy: Isotropy,
}

impl SubspaceDescriptor {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Rational rows as strings like `"-3/2"`.
mod rational_rows {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        serde::Serialize::serialize(&text, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.iter()
            .map(|r| r.iter().map(|x| x.parse::<BigRational>().map_err(D::Error::custom)).collect())
            .collect()
    }
}

/// A subspace of `F_p^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModSubspace {
    pub p: u64,
    pub basis: Vec<Vec<u64>>,
    pub label: String,
    pub isotropy: Isotropy,
}

impl ModSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSplit {
    /// Kernels of the factors of `f_A` (primary components when a factor repeats).
    pub subspaces: Vec<SubspaceDescriptor>,
    pub scar_prone: bool,
    /// An invariant isotropic subspace, when one was found.
    pub isotropic_witness: Option<SubspaceDescriptor>,
}

fn omega_rat(x: &[BigRational], y: &[BigRational]) -> BigRational {
    let g = x.len() / 2;
    (0..g).fold(BigRational::zero(), |acc, i| acc + &x[i] * &y[g + i] - &x[g + i] * &y[i])
}

fn omega_mod(x: &[u64], y: &[u64], p: u64) -> u64 {
    let g = x.len() / 2;
    (0..g).fold(0, |acc, i| {
        sub_mod(add_mod(acc, mul_mod(x[i], y[g + i], p), p), mul_mod(x[g + i], y[i], p), p)
    })
}

pub fn classify_rational(basis: &[Vec<BigRational>]) -> Isotropy {
    let k = basis.len();
    let gram: Vec<Vec<BigRational>> = (0..k)
        .map(|a| (0..k).map(|b| omega_rat(&basis[a], &basis[b])).collect())
        .collect();
    if gram.iter().flatten().all(|v| v.is_zero()) {
        Isotropy::Isotropic
    } else if rank_rational(&gram) == k {
        Isotropy::Symplectic
    } else {
        Isotropy::Mixed
    }
}

pub fn classify_mod(basis: &[Vec<u64>], p: u64) -> Isotropy {
    let k = basis.len();
    let gram: Vec<Vec<u64>> = (0..k)
        .map(|a| (0..k).map(|b| omega_mod(&basis[a], &basis[b], p)).collect())
        .collect();
    if gram.iter().flatten().all(|&v| v == 0) {
        Isotropy::Isotropic
    } else if rank_mod_p(&gram, p) == k {
        Isotropy::Symplectic
    } else {
        Isotropy::Mixed
    }
}

fn rational_matrix(a: &SymplecticMatrix) -> Vec<Vec<BigRational>> {
    a.entries()
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect()
}

fn row_times(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let d = m.len();
    (0..d)
        .map(|j| (0..d).fold(BigRational::zero(), |acc, i| acc + &v[i] * &m[i][j]))
        .collect()
}

/// `h(A)` over `Q` by Horner's rule.
fn poly_of_matrix(h: &IntPoly, a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = a.len();
    let mut acc = vec![vec![BigRational::zero(); d]; d];
    for c in h.coeffs().iter().rev() {
        let mut next = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if !acc[i][k].is_zero() {
                        next[i][j] += &acc[i][k] * &a[k][j];
                    }
                }
            }
            next[i][i] += BigRational::from_integer(c.clone());
        }
        acc = next;
    }
    acc
}

/// Left kernel `{v : v M = 0}`, reduced to row echelon form.
fn left_kernel(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = m.len();
    let mt: Vec<Vec<BigRational>> = (0..d).map(|j| (0..d).map(|i| m[i][j].clone()).collect()).collect();
    echelon(nullspace_rational(&mt, d))
}

fn echelon(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let r = rref_rational(&mut rows).len();
    rows.truncate(r);
    rows
}

/// Whether the row span of `basis` is mapped into itself by `A`.
pub fn is_invariant(basis: &[Vec<BigRational>], a: &SymplecticMatrix) -> bool {
    let m = rational_matrix(a);
    let mut all = basis.to_vec();
    all.extend(basis.iter().map(|v| row_times(v, &m)));
    rank_rational(&all) == rank_rational(basis)
}

/// Rational kernels of the irreducible factors of `f_A` with their isotropy,
/// and whether any invariant isotropic subspace exists.
///
/// For separable `f_A` every invariant subspace is a sum of factor kernels,
/// so all `2^t` sums are examined. A repeated factor makes the invariant
/// lattice infinite; there the cyclic spans of the standard basis vectors
/// and of each kernel vector are examined as well.
pub fn invariant_subspace_split(a: &SymplecticMatrix) -> Result<InvariantSplit> {
    let info = char_poly_info(a)?;
    let m = rational_matrix(a);
    let mut subspaces = Vec::new();
    for (h, e) in &info.rational_factors {
        let kernel = left_kernel(&poly_of_matrix(&h.pow(*e), &m));
        subspaces.push(SubspaceDescriptor {
            isotropy: classify_rational(&kernel),
            basis: kernel,
            label: if *e == 1 { format!("ker({h})") } else { format!("ker(({h})^{e})") },
        });
    }
    let mut witness = None;
    let t = subspaces.len();
    for mask in 1u32..(1 << t) {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for (i, s) in subspaces.iter().enumerate() {
            if mask & (1 << i) != 0 {
                basis.extend(s.basis.iter().cloned());
                labels.push(s.label.clone());
            }
        }
        if classify_rational(&basis) == Isotropy::Isotropic {
            witness = Some(SubspaceDescriptor {
                basis,
                label: labels.join(" + "),
                isotropy: Isotropy::Isotropic,
            });
            break;
        }
    }
    if witness.is_none() && !info.separable {
        witness = cyclic_isotropic_candidate(a, &subspaces);
    }
    Ok(InvariantSplit {
        subspaces,
        scar_prone: witness.is_some(),
        isotropic_witness: witness,
    })
}

fn cyclic_span(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut rows = vec![v.to_vec()];
    for _ in 1..m.len() {
        let next = row_times(rows.last().unwrap(), m);
        rows.push(next);
    }
    echelon(rows)
}

fn cyclic_isotropic_candidate(
    a: &SymplecticMatrix,
    subspaces: &[SubspaceDescriptor],
) -> Option<SubspaceDescriptor> {
    let m = rational_matrix(a);
    let d = a.dim();
    let mut seeds: Vec<(Vec<BigRational>, String)> = (0..d)
        .map(|i| {
            let mut v = vec![BigRational::zero(); d];
            v[i] = BigRational::one();
            (v, format!("Z[A] e{}", i + 1))
        })
        .collect();
    for s in subspaces {
        for (k, v) in s.basis.iter().enumerate() {
            seeds.push((v.clone(), format!("Z[A] v{k} of {}", s.label)));
        }
    }
    seeds.into_iter().find_map(|(v, label)| {
        let span = cyclic_span(&v, &m);
        (!span.is_empty() && classify_rational(&span) == Isotropy::Isotropic).then_some(
            SubspaceDescriptor {
                basis: span,
                label,
                isotropy: Isotropy::Isotropic,
            },
        )
    })
}

/// Split `F_p^{2g}` along a zero-divisor `n`: `W1` is the cyclic span of
/// `n` under `A`, `W2` its symplectic complement.
pub fn zero_divisor_split(
    n: &FrequencyVector,
    a: &SymplecticMatrix,
    p: u64,
) -> Result<(ModSubspace, ModSubspace)> {
    let d = a.dim();
    if n.0.len() != d {
        return Err(Error::InvalidInput("frequency length must be 2g".into()));
    }
    let f = super::charpoly::char_poly(a);
    if f.discriminant().mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::Ramified { p });
    }
    let v = reduce_frequency(n, p);
    if v.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("zero frequency has no nontrivial split".into()));
    }
    let am = a.to_mod(p);
    let mut rows = vec![v];
    for _ in 1..d {
        let next = am.row_mul(rows.last().unwrap());
        rows.push(next);
    }
    let r = rref_mod_p(&mut rows, p).len();
    rows.truncate(r);
    if r == d {
        return Err(Error::Precondition(format!("frequency is not a zero-divisor mod {p}")));
    }
    let iso1 = classify_mod(&rows, p);
    if iso1 != Isotropy::Symplectic {
        return Err(Error::ScarRegime(format!(
            "cyclic span of the frequency mod {p} is not symplectic"
        )));
    }
    // y in W1^perp iff omega(b, y) = b J y^t = 0 for every basis row b.
    let g = d / 2;
    let bj: Vec<Vec<u64>> = rows
        .iter()
        .map(|b| {
            let mut out = vec![0u64; d];
            for i in 0..g {
                out[g + i] = b[i];
                out[i] = sub_mod(0, b[g + i], p);
            }
            out
        })
        .collect();
    let mut w2 = nullspace_mod_p(&bj, d, p);
    let r2 = rref_mod_p(&mut w2, p).len();
    w2.truncate(r2);
    let iso2 = classify_mod(&w2, p);
    Ok((
        ModSubspace { p, basis: rows, label: "W1".into(), isotropy: iso1 },
        ModSubspace { p, basis: w2, label: "W2".into(), isotropy: iso2 },
    ))
}

/// Krylov rank over `Q`, exposed for diagnostics.
pub fn krylov_rank(n: &FrequencyVector, a: &SymplecticMatrix) -> usize {
    super::linalg::rank_int(&krylov(n, a))
}

#[cfg(test)]
mod tests {
    use super::super::matrix::catalog::*;
    use super::*;

    #[test]
    fn descriptor_json() {
        let s = invariant_subspace_split(&a3()).unwrap().isotropic_witness.unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"basis\":[[\"1\",\"0\""), "{text}");
        assert_eq!(serde_json::from_str::<SubspaceDescriptor>(&text).unwrap(), s);
    }

    fn unit(i: usize, d: usize) -> Vec<BigRational> {
        (0..d)
            .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect()
    }

    #[test]
    fn block_matrix_has_two_symplectic_planes() {
        let s = invariant_subspace_split(&a2()).unwrap();
        assert_eq!(s.subspaces.len(), 2);
        assert!(s.subspaces.iter().all(|x| x.dim() == 2 && x.isotropy == Isotropy::Symplectic));
        assert!(!s.scar_prone);
        for x in &s.subspaces {
            assert!(is_invariant(&x.basis, &a2()));
        }
    }

    #[test]
    fn position_block_is_scar_prone() {
        let s = invariant_subspace_split(&a3()).unwrap();
        assert!(s.scar_prone);
        let w = s.isotropic_witness.unwrap();
        assert!(is_invariant(&w.basis, &a3()));
        assert_eq!(rank_rational(&w.basis), 2);
        let mut plane = w.basis.clone();
        plane.push(unit(0, 4));
        plane.push(unit(1, 4));
        assert_eq!(rank_rational(&plane), 2);
    }

    #[test]
    fn irreducible_gives_whole_space() {
        let s = invariant_subspace_split(&a1()).unwrap();
        assert_eq!(s.subspaces.len(), 1);
        assert_eq!(s.subspaces[0].dim(), 2);
        assert_eq!(s.subspaces[0].isotropy, Isotropy::Symplectic);
    }

    #[test]
    fn zero_divisor_split_block() {
        let n = FrequencyVector::new(vec![1, 0, 0, 0]);
        let p = 7;
        let (w1, w2) = zero_divisor_split(&n, &a2(), p).unwrap();
        assert_eq!(w1.basis, vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(w2.basis, vec![vec![0, 1, 0, 0], vec![0, 0, 0, 1]]);
        for x in &w1.basis {
            for y in &w2.basis {
                assert_eq!(omega_mod(x, y, p), 0);
            }
        }
        assert_eq!(w2.isotropy, Isotropy::Symplectic);
        let full = FrequencyVector::new(vec![1, 1, 0, 0]);
        assert!(matches!(zero_divisor_split(&full, &a2(), p), Err(Error::Precondition(_))));
    }
}
