//! Separating sets inside an arbitrary monomial subalgebra `K[x^d : d ∈ D]`.
//!
//! `M ⊆ D` separates iff every `d ∈ D` lies in the lattice spanned by the
//! elements of `M` supported inside `supp(d)` (characteristic 0), or some
//! `p`-power multiple of `d` does (characteristic `p`). Read literally, the
//! condition "D ⊆ ZM_J for every J" fails at `J = ∅` as soon as `D ≠ {0}`;
//! the per-element form used here is the restricted reading `D_J ⊆ ZM_J`.

use num_bigint::BigInt;

use crate::exact_linalg::{self, Lattice};
use crate::hilbert::ExponentVector;
use crate::separating::{make_failure_certificate, Characteristic, SeparatingError, SeparatingVerdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialFamily {
    n: usize,
    generators: Vec<ExponentVector>,
}

impl MonomialFamily {
    /// Sorts and removes duplicates. All vectors must have length `n`.
    pub fn new(n: usize, mut generators: Vec<ExponentVector>) -> Result<Self, SeparatingError> {
        if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
            return Err(SeparatingError::Rep(crate::repspec::RepError::DimensionMismatch {
                expected: n,
                got: bad.dim(),
            }));
        }
        generators.sort();
        generators.dedup();
        Ok(MonomialFamily { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }
}

pub fn check_separating_general(
    family: &MonomialFamily,
    m: &[ExponentVector],
    characteristic: Characteristic,
) -> Result<SeparatingVerdict, SeparatingError> {
    let n = family.n;
    for v in m {
        if v.dim() != n || family.generators.binary_search(v).is_err() {
            return Err(SeparatingError::NotInFamily(v.coords().to_vec()));
        }
    }
    let mut witnesses = Vec::new();
    let mut supports_seen = std::collections::BTreeSet::new();
    for d in &family.generators {
        if d.is_zero() {
            continue;
        }
        let subset = d.support().to_vec();
        supports_seen.insert(subset.clone());
        let mut mask = vec![false; n];
        for &j in &subset {
            mask[j] = true;
        }
        let m_j: Vec<ExponentVector> = m.iter().filter(|v| v.support_within(&mask)).cloned().collect();
        let cols: Vec<Vec<u32>> = m_j.iter().map(|v| v.coords().to_vec()).collect();
        let small = exact_linalg::lattice_from_generators(n, &cols)?;
        if !p_power_member(&small, d, characteristic)? {
            let certificate = make_failure_certificate(&subset, &m_j, d, characteristic)?;
            witnesses.push(Witness {
                subset,
                atom: d.clone(),
                certificate,
            });
        }
    }
    witnesses.sort_by(|a, b| a.subset.cmp(&b.subset).then_with(|| a.atom.cmp(&b.atom)));
    Ok(SeparatingVerdict {
        is_separating: witnesses.is_empty(),
        characteristic,
        subsets_examined: supports_seen.len(),
        support_bound_used: n,
        witnesses,
        conditional: false,
    })
}

/// Whether the image of `d` in `Z(L ∪ {d}) / L` has order 1 (characteristic 0)
/// or a power of `p`. Decided from the invariant factors, no bound on the exponent needed.
fn p_power_member(l: &Lattice, d: &ExponentVector, characteristic: Characteristic) -> Result<bool, SeparatingError> {
    let v = d.to_bigints();
    match characteristic {
        Characteristic::Zero => Ok(l.contains(&v)?.is_some()),
        Characteristic::Prime(p) => {
            let mut gens = l.basis_vectors();
            gens.push(v);
            let big = exact_linalg::lattice_from_generators(l.ambient_dim(), &gens)?;
            let q = exact_linalg::lattice_quotient(&big, l)?;
            Ok(exact_linalg::is_finite_p_group(&q, &BigInt::from(p))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn identical_sets_separate() {
        let d = vec![ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 3])];
        let fam = MonomialFamily::new(2, d.clone()).unwrap();
        assert!(
            check_separating_general(&fam, &d, Characteristic::Zero)
                .unwrap()
                .is_separating
        );
    }

    #[test]
    fn missing_mixed_monomial() {
        let fam = MonomialFamily::new(2, vec![ev(&[2, 0]), ev(&[1, 1])]).unwrap();
        let m = [ev(&[2, 0])];
        let v = check_separating_general(&fam, &m, Characteristic::Zero).unwrap();
        assert!(!v.is_separating);
        let w = &v.witnesses[0];
        assert_eq!(w.subset, vec![0, 1]);
        assert_eq!(w.atom, ev(&[1, 1]));
        assert!(w.certificate.validate(&w.subset, &m, &w.atom, Characteristic::Zero));
    }

    #[test]
    fn p_power_rescue() {
        let fam = MonomialFamily::new(1, vec![ev(&[1]), ev(&[2])]).unwrap();
        let m = [ev(&[2])];
        assert!(
            !check_separating_general(&fam, &m, Characteristic::Zero)
                .unwrap()
                .is_separating
        );
        assert!(
            check_separating_general(&fam, &m, Characteristic::Prime(2))
                .unwrap()
                .is_separating
        );
        assert!(
            !check_separating_general(&fam, &m, Characteristic::Prime(3))
                .unwrap()
                .is_separating
        );
    }

    #[test]
    fn m_must_be_inside_d() {
        let fam = MonomialFamily::new(1, vec![ev(&[1])]).unwrap();
        assert!(matches!(
            check_separating_general(&fam, &[ev(&[2])], Characteristic::Zero),
            Err(SeparatingError::NotInFamily(_))
        ));
        assert!(MonomialFamily::new(2, vec![ev(&[1])]).is_err());
    }
}
