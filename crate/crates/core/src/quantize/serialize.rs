//! JSON forms of operators and propagators. Complex numbers are `[re, im]`
//! pairs; operator entries are row-major, eigenbases column-major.

use super::operator::{CMat, DenseOperator, OperatorKind};
use super::propagator::{IntertwinerReport, Propagator};
use super::spectrum::Eigenspace;
use crate::symplectic::SymplecticMatrix;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    #[serde(rename = "N")]
    pub n: u64,
    pub g: usize,
    pub kind: OperatorKind,
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl From<&DenseOperator> for OperatorRecord {
    fn from(op: &DenseOperator) -> Self {
        let d = op.dim();
        let entries = (0..d * d).map(|k| op.matrix[(k / d, k % d)]).collect();
        OperatorRecord { n: op.n, g: op.g, kind: op.kind, dim: d, entries }
    }
}

impl TryFrom<OperatorRecord> for DenseOperator {
    type Error = Error;

    fn try_from(rec: OperatorRecord) -> Result<Self> {
        let d = rec.dim;
        if rec.entries.len() != d * d || super::state::dimension(rec.n, rec.g) != d {
            return Err(Error::InvalidInput("operator record has inconsistent dimensions".into()));
        }
        let m = CMat::from_fn(d, d, |i, j| rec.entries[i * d + j]);
        Ok(DenseOperator::new(rec.n, rec.g, rec.kind, m))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceRecord {
    pub m: u64,
    pub theta: Complex64,
    pub dim: usize,
    pub basis: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorRecord {
    pub matrix: Vec<Vec<i64>>,
    #[serde(rename = "N")]
    pub n: u64,
    pub r: u64,
    pub quantum_period: u64,
    pub phase: Complex64,
    pub intertwiner: IntertwinerReport,
    pub operator: OperatorRecord,
    pub eigen: Vec<EigenspaceRecord>,
}

impl PropagatorRecord {
    pub fn from_propagator(p: &Propagator) -> Result<Self> {
        let matrix = p
            .a
            .to_i64()
            .ok_or_else(|| Error::BoundExceeded("matrix entries exceed i64".into()))?;
        let eigen = p
            .eigen
            .iter()
            .map(|e| EigenspaceRecord {
                m: e.m,
                theta: e.theta,
                dim: e.dim(),
                basis: (0..e.dim()).flat_map(|k| e.basis.col_as_slice(k).to_vec()).collect(),
            })
            .collect();
        Ok(PropagatorRecord {
            matrix,
            n: p.n,
            r: p.r,
            quantum_period: p.quantum_period,
            phase: p.phase,
            intertwiner: p.intertwiner,
            operator: OperatorRecord::from(&p.operator),
            eigen,
        })
    }

    pub fn into_propagator(self) -> Result<Propagator> {
        let a = SymplecticMatrix::from_rows(&self.matrix)?;
        let operator = DenseOperator::try_from(self.operator)?;
        let d = operator.dim();
        let mut eigen = Vec::with_capacity(self.eigen.len());
        for e in self.eigen {
            if e.basis.len() != d * e.dim {
                return Err(Error::InvalidInput("eigenspace record has inconsistent dimensions".into()));
            }
            eigen.push(Eigenspace { m: e.m, theta: e.theta, basis: CMat::from_fn(d, e.dim, |i, k| e.basis[k * d + i]) });
        }
        Ok(Propagator {
            a,
            n: self.n,
            r: self.r,
            operator,
            quantum_period: self.quantum_period,
            phase: self.phase,
            eigen,
            intertwiner: self.intertwiner,
        })
    }
}

pub fn propagator_to_json(p: &Propagator) -> Result<String> {
    Ok(serde_json::to_string(&PropagatorRecord::from_propagator(p)?)?)
}

pub fn propagator_from_json(s: &str) -> Result<Propagator> {
    serde_json::from_str::<PropagatorRecord>(s)?.into_propagator()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::operator::diff_norm;
    use crate::quantize::propagator::egorov_residual;
    use crate::quantize::spectrum::solve_and_decompose;
    use crate::symplectic::catalog::a1;

    #[test]
    fn complex_pairs() {
        let op = DenseOperator::new(1, 1, OperatorKind::Other, CMat::from_fn(1, 1, |_, _| Complex64::new(0.5, -2.0)));
        let s = serde_json::to_string(&OperatorRecord::from(&op)).unwrap();
        assert!(s.contains("[0.5,-2.0]"), "{s}");
        assert!(s.contains("\"kind\":\"other\""));
    }

    #[test]
    fn roundtrip() {
        let p = solve_and_decompose(&a1(), 7, 1).unwrap();
        let q = propagator_from_json(&propagator_to_json(&p).unwrap()).unwrap();
        assert_eq!(diff_norm(p.matrix(), q.matrix()), 0.0);
        assert_eq!(q.eigen.len(), p.eigen.len());
        assert!(egorov_residual(&q, &[1, 2]).unwrap() < 1e-10);
    }
}
