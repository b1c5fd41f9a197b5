//! Diagonalizable representations given by a weight matrix.
//!
//! The character group is presented as `Z^s ⊕ Z/d1 ⊕ ... ⊕ Z/dt`. Column `j`
//! of the weight matrix is the character of the `j`-th coordinate: its first
//! `s` entries are free coordinates, the remaining `t` are residues mod `d_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{self, IntMatrix, Lattice};
use crate::hilbert::{AtomSet, ExponentVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value at {path}: {message}")]
    Field { path: String, message: String },
    #[error("torsion order at torsion[{index}] is {value}; orders must be at least 2")]
    TorsionOrder { index: usize, value: BigInt },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    n: usize,
    torus_rank: usize,
    torsion_orders: Vec<BigInt>,
    weights: IntMatrix,
}

impl RepSpec {
    /// Validates the shape and reduces torsion rows into `[0, d_i)`.
    pub fn new(
        n: usize,
        torus_rank: usize,
        torsion_orders: Vec<BigInt>,
        weight_rows: Vec<Vec<BigInt>>,
    ) -> Result<Self, RepError> {
        if n == 0 {
            return Err(RepError::Field {
                path: "n".into(),
                message: "must be at least 1".into(),
            });
        }
        for (index, d) in torsion_orders.iter().enumerate() {
            if d < &BigInt::from(2) {
                return Err(RepError::TorsionOrder {
                    index,
                    value: d.clone(),
                });
            }
        }
        let expected_rows = torus_rank + torsion_orders.len();
        if weight_rows.len() != expected_rows {
            return Err(RepError::Shape(format!(
                "weights has {} rows, expected torus_rank + len(torsion) = {}",
                weight_rows.len(),
                expected_rows
            )));
        }
        for (r, row) in weight_rows.iter().enumerate() {
            if row.len() != n {
                return Err(RepError::Shape(format!(
                    "weights[{r}] has {} entries, expected n = {n}",
                    row.len()
                )));
            }
        }
        let mut weights = IntMatrix::from_rows(n, &weight_rows).expect("row lengths checked");
        for (i, d) in torsion_orders.iter().enumerate() {
            let r = torus_rank + i;
            for c in 0..n {
                let v = weights[(r, c)].mod_floor(d);
                weights[(r, c)] = v;
            }
        }
        Ok(RepSpec {
            n,
            torus_rank,
            torsion_orders,
            weights,
        })
    }

    /// Shorthand for tests and fixtures: small integer entries.
    pub fn from_i64(n: usize, torus_rank: usize, torsion: &[i64], weights: &[&[i64]]) -> Result<Self, RepError> {
        RepSpec::new(
            n,
            torus_rank,
            torsion.iter().map(|&d| BigInt::from(d)).collect(),
            weights
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// The trivial group acting on `n` coordinates.
    pub fn trivial(n: usize) -> Self {
        RepSpec::new(n, 0, vec![], vec![]).expect("trivial rep is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn torsion_orders(&self) -> &[BigInt] {
        &self.torsion_orders
    }

    pub fn weights(&self) -> &IntMatrix {
        &self.weights
    }

    pub fn free_rows(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.torus_rank).map(|r| self.weights.row(r))
    }

    pub fn torsion_rows(&self) -> impl Iterator<Item = (&[BigInt], &BigInt)> {
        self.torsion_orders
            .iter()
            .enumerate()
            .map(|(i, d)| (self.weights.row(self.torus_rank + i), d))
    }

    /// Whether `prod chi_i^{m_i}` is the trivial character.
    pub fn in_b(&self, m: &ExponentVector) -> Result<bool, RepError> {
        if m.dim() != self.n {
            return Err(RepError::DimensionMismatch {
                expected: self.n,
                got: m.dim(),
            });
        }
        let dot = |row: &[BigInt]| -> BigInt {
            row.iter()
                .zip(m.coords())
                .filter(|(_, &x)| x != 0)
                .map(|(w, &x)| w * BigInt::from(x))
                .sum()
        };
        if self.free_rows().any(|row| !dot(row).is_zero()) {
            return Ok(false);
        }
        Ok(self.torsion_rows().all(|(row, d)| dot(row).is_multiple_of(d)))
    }

    /// Weight rows as machine integers (free rows, then torsion rows), or
    /// `None` if any entry or torsion order does not fit in an `i64`.
    pub fn small_weights(&self) -> Option<SmallWeights> {
        let rows = (0..self.weights.rows())
            .map(|r| {
                self.weights
                    .row(r)
                    .iter()
                    .map(ToPrimitive::to_i64)
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        let moduli = self
            .torsion_orders
            .iter()
            .map(ToPrimitive::to_i64)
            .collect::<Option<Vec<_>>>()?;
        Some(SmallWeights {
            torus_rank: self.torus_rank,
            rows,
            moduli,
        })
    }

    /// Warnings for a positive characteristic dividing the order of the finite part.
    pub fn characteristic_warnings(&self, p: &BigInt) -> Vec<String> {
        self.torsion_orders
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_multiple_of(p))
            .map(|(i, d)| {
                format!("characteristic {p} divides torsion order {d} (torsion[{i}]); the group is assumed to have order prime to the characteristic")
            })
            .collect()
    }
}

/// Machine-integer copy of a weight matrix for hot loops.
#[derive(Clone, Debug)]
pub struct SmallWeights {
    pub torus_rank: usize,
    pub rows: Vec<Vec<i64>>,
    pub moduli: Vec<i64>,
}

impl SmallWeights {
    pub fn contains(&self, coords: &[u32]) -> bool {
        self.rows.iter().enumerate().all(|(r, row)| {
            let dot: i128 = row.iter().zip(coords).map(|(&w, &x)| w as i128 * x as i128).sum();
            if r < self.torus_rank {
                dot == 0
            } else {
                dot.rem_euclid(self.moduli[r - self.torus_rank] as i128) == 0
            }
        })
    }
}

/// Summary numbers attached to the acting group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStats {
    pub dim_g: usize,
    pub rk_x: usize,
    /// Proven bound on the support-size invariant tau.
    pub tau_upper: usize,
    /// Conjectured sharper bound; never used unless explicitly requested.
    pub tau_upper_conjectural: usize,
    pub kappa_lower: usize,
    pub kappa_upper: usize,
    pub delta_upper: usize,
}

pub fn group_stats(rep: &RepSpec) -> GroupStats {
    let s = rep.torus_rank;
    let torsion = exact_linalg::torsion_invariant_factors(&rep.torsion_orders);
    let rk_x = s + torsion.len();
    let general = 1 + 2 * s + rk_x;
    let tau_upper = if torsion.is_empty() {
        general.min(1 + 2 * s)
    } else {
        general
    };
    GroupStats {
        dim_g: s,
        rk_x,
        tau_upper,
        tau_upper_conjectural: 1 + s + rk_x,
        kappa_lower: 1 + rk_x,
        kappa_upper: 1 + s + rk_x,
        delta_upper: 2 * s,
    }
}

/// A representation whose invariant monoid is `l ∩ N^n`, with character group
/// `Z^n / l` in invariant-factor form.
pub fn realize_from_lattice(l: &Lattice) -> RepSpec {
    let n = l.ambient_dim();
    let r = l.rank();
    let (s, u, _) = exact_linalg::snf(l.basis());
    // u * l = s * Z^r: coordinate i < r must be divisible by s_ii, coordinates >= r vanish
    let mut free_rows = Vec::new();
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..n {
        let row = u.row(i).to_vec();
        if i >= r {
            free_rows.push(row);
        } else {
            let d = s[(i, i)].abs();
            if d > BigInt::one() {
                torsion_rows.push(row);
                torsion.push(d);
            }
        }
    }
    let torus_rank = free_rows.len();
    free_rows.extend(torsion_rows);
    RepSpec::new(n, torus_rank, torsion, free_rows).expect("snf presentation is well formed")
}

/// Union of the supports of all atoms supported inside `s`.
pub fn support_closure(atoms: &AtomSet, s: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; atoms.n()];
    for &j in s {
        if j < inside.len() {
            inside[j] = true;
        }
    }
    let mut out = vec![false; atoms.n()];
    for a in atoms.atoms() {
        if a.support().iter().all(|&j| inside[j]) {
            for &j in a.support() {
                out[j] = true;
            }
        }
    }
    (0..atoms.n()).filter(|&j| out[j]).collect()
}

/// Whether a vector with support `s` has a closed orbit: `s` must be exactly
/// covered by supports of atoms lying inside it.
pub fn is_closed_orbit_support(atoms: &AtomSet, s: &[usize]) -> bool {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    support_closure(atoms, &sorted) == sorted
}

/// Parses the JSON job format, keeping only the representation.
pub fn parse_repspec(text: &str) -> Result<RepSpec, RepError> {
    crate::input::JobInput::parse(text).map(|job| job.rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{atoms, Limits};

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn parse_and_reduce() {
        let rep = parse_repspec(r#"{"n":3,"torus_rank":1,"torsion":[],"weights":[[1,1,-2]]}"#).unwrap();
        assert_eq!(rep.n(), 3);
        assert_eq!(rep.torus_rank(), 1);

        let rep = parse_repspec(r#"{"n":2,"torus_rank":0,"torsion":[2],"weights":[[5,1]]}"#).unwrap();
        assert_eq!(rep.weights()[(0, 0)], BigInt::one());

        let z2 = parse_repspec(r#"{"n":2,"torus_rank":0,"torsion":[2],"weights":[[1,1]]}"#).unwrap();
        assert!(z2.in_b(&ev(&[1, 1])).unwrap());
        assert!(!z2.in_b(&ev(&[1, 0])).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_repspec("{"), Err(RepError::Json { .. })));
        assert!(matches!(
            parse_repspec(r#"{"n":2,"torus_rank":0,"torsion":[1],"weights":[[1,1]]}"#),
            Err(RepError::TorsionOrder { index: 0, .. })
        ));
        assert!(matches!(
            parse_repspec(r#"{"n":2,"torus_rank":1,"torsion":[],"weights":[[1,1,1]]}"#),
            Err(RepError::Shape(_))
        ));
        let err = parse_repspec(r#"{"n":2,"torus_rank":1,"torsion":[],"weights":[[1,"x"]]}"#).unwrap_err();
        assert_eq!(
            err,
            RepError::Field {
                path: "weights[0][1]".into(),
                message: "expected an integer".into()
            }
        );
    }

    #[test]
    fn membership() {
        let rep = RepSpec::from_i64(3, 1, &[], &[&[1, 1, -2]]).unwrap();
        assert!(rep.in_b(&ev(&[1, 1, 1])).unwrap());
        assert!(!rep.in_b(&ev(&[1, 0, 0])).unwrap());
        assert!(rep.in_b(&ev(&[1, 1])).is_err());
        let small = rep.small_weights().unwrap();
        assert!(small.contains(&[2, 0, 1]));
        assert!(!small.contains(&[2, 0, 0]));
    }

    #[test]
    fn stats() {
        let torus = RepSpec::from_i64(3, 2, &[], &[&[1, 0, -1], &[0, 1, -1]]).unwrap();
        let g = group_stats(&torus);
        assert_eq!(
            (
                g.dim_g,
                g.rk_x,
                g.tau_upper,
                g.kappa_lower,
                g.kappa_upper,
                g.delta_upper
            ),
            (2, 2, 5, 3, 5, 4)
        );
        assert_eq!(g.tau_upper_conjectural, 5);

        let z2 = RepSpec::from_i64(2, 0, &[2], &[&[1, 1]]).unwrap();
        let g = group_stats(&z2);
        assert_eq!(
            (g.dim_g, g.rk_x, g.tau_upper, g.kappa_lower, g.kappa_upper),
            (0, 1, 2, 2, 2)
        );

        let g = group_stats(&RepSpec::trivial(3));
        assert_eq!((g.rk_x, g.tau_upper), (0, 1));

        // Z/2 ⊕ Z/3 is cyclic
        let mixed = RepSpec::from_i64(2, 1, &[2, 3], &[&[1, -1], &[1, 1], &[1, 2]]).unwrap();
        let g = group_stats(&mixed);
        assert_eq!((g.rk_x, g.tau_upper), (2, 5));
    }

    #[test]
    fn realize_small_lattices() {
        let rep = realize_from_lattice(&Lattice::full(3));
        assert_eq!(rep.torus_rank(), 0);
        assert!(rep.torsion_orders().is_empty());
        assert!(rep.in_b(&ev(&[1, 0, 2])).unwrap());

        let even = exact_linalg::lattice_from_generators(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        let rep = realize_from_lattice(&even);
        assert_eq!(rep.torus_rank(), 0);
        assert_eq!(rep.torsion_orders(), &[BigInt::from(2)]);
        for a in 0..=8u32 {
            for b in 0..=8 - a {
                assert_eq!(rep.in_b(&ev(&[a, b])).unwrap(), (a + b) % 2 == 0);
            }
        }

        let original = RepSpec::from_i64(3, 1, &[], &[&[1, 1, -2]]).unwrap();
        let kernel = exact_linalg::lattice_from_generators(3, &[vec![2, 0, 1], vec![0, 2, 1], vec![1, 1, 1]]).unwrap();
        let rep = realize_from_lattice(&kernel);
        assert_eq!(rep.torus_rank(), 1);
        assert!(rep.torsion_orders().is_empty());
        for a in 0..=8u32 {
            for b in 0..=8 - a {
                for c in 0..=8 - a - b {
                    let m = ev(&[a, b, c]);
                    assert_eq!(rep.in_b(&m).unwrap(), original.in_b(&m).unwrap());
                }
            }
        }
    }

    #[test]
    fn closed_orbit_supports() {
        let rep = RepSpec::from_i64(3, 1, &[], &[&[1, 1, -2]]).unwrap();
        let a = atoms(&rep, &Limits::default()).unwrap();
        assert!(is_closed_orbit_support(&a, &[]));
        assert!(!is_closed_orbit_support(&a, &[0, 1]));
        assert!(is_closed_orbit_support(&a, &[0, 2]));
        assert!(is_closed_orbit_support(&a, &[0, 1, 2]));

        let at = RepSpec::from_i64(5, 2, &[], &[&[1, 0, 1, -3, 0], &[0, 1, 1, 0, -3]]).unwrap();
        let a = atoms(&at, &Limits::default()).unwrap();
        assert!(is_closed_orbit_support(&a, &[0, 1, 2, 3, 4]));
        assert!(!is_closed_orbit_support(&a, &[0, 1]));
    }
}
