//! Brute-force reference implementations.
//!
//! Nothing here calls into `hilbert` or `separating`: atoms come from
//! exhaustive enumeration, subset conditions are evaluated on every `J` with
//! no support bound and no deduplication, and lattice membership is first
//! attempted by bounded coefficient enumeration before falling back to the
//! exact lattice primitives. A representation found by enumeration that the
//! exact path rejects is reported as a discrepancy, never silently resolved.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{self, Lattice, LinalgError};
use crate::hilbert::{AtomSet, ExponentVector};
use crate::repspec::RepSpec;
use crate::separating::Characteristic;

/// Subset enumeration cap.
pub const MAX_ORACLE_N: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle enumerates all 2^n subsets and is capped at n = {MAX_ORACLE_N}, got n = {0}")]
    TooLarge(usize),
    #[error("weights do not fit in machine integers")]
    Overflow,
    #[error("membership discrepancy: {vector:?} is an integer combination of {generators:?} by enumeration but the exact path rejects it")]
    Discrepancy {
        vector: Vec<u32>,
        generators: Vec<Vec<u32>>,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Coefficients are enumerated in `[-C, C]`.
    pub coefficient_bound: i64,
    /// Skip enumeration when `(2C+1)^k` exceeds this.
    pub enumeration_budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            coefficient_bound: 10,
            enumeration_budget: 200_000,
        }
    }
}

fn machine_weights(rep: &RepSpec) -> Result<(Vec<Vec<i128>>, Vec<i128>), OracleError> {
    let w = rep.weights();
    let rows = (0..w.rows())
        .map(|r| w.row(r).iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or(OracleError::Overflow)?;
    let moduli = rep
        .torsion_orders()
        .iter()
        .map(|d| d.to_i128())
        .collect::<Option<Vec<_>>>()
        .ok_or(OracleError::Overflow)?;
    Ok((rows, moduli))
}

fn invariant(rows: &[Vec<i128>], moduli: &[i128], torus_rank: usize, m: &[u32]) -> bool {
    rows.iter().enumerate().all(|(r, row)| {
        let s: i128 = row.iter().zip(m).map(|(a, &b)| a * b as i128).sum();
        if r < torus_rank {
            s == 0
        } else {
            s % moduli[r - torus_rank] == 0
        }
    })
}

fn for_each_vector(n: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, n: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if buf.len() + 1 == n {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for v in (0..=left).rev() {
            buf.push(v);
            rec(buf, n, left - v, f);
            buf.pop();
        }
    }
    if n == 0 {
        return;
    }
    rec(&mut Vec::with_capacity(n), n, total, f);
}

/// Minimal elements of `{m ∈ B : 1 <= |m| <= degree_cap}`. Complete only if
/// every atom has length below `degree_cap`; callers must check that.
pub fn atoms_bruteforce(rep: &RepSpec, degree_cap: u32) -> Result<AtomSet, OracleError> {
    let (rows, moduli) = machine_weights(rep)?;
    let n = rep.n();
    let mut minimal: Vec<Vec<u32>> = Vec::new();
    for total in 1..=degree_cap {
        let mut found = Vec::new();
        for_each_vector(n, total, &mut |m| {
            if invariant(&rows, &moduli, rep.torus_rank(), m)
                && !minimal.iter().any(|a| a.iter().zip(m).all(|(x, y)| x <= y))
            {
                found.push(m.to_vec());
            }
        });
        minimal.extend(found);
    }
    Ok(AtomSet::new(n, minimal.into_iter().map(ExponentVector::new).collect()))
}

/// Looks for integer coefficients in `[-C, C]` with `sum c_i g_i = v`.
/// `None` when the search space is over budget.
pub fn bounded_membership(generators: &[Vec<i64>], v: &[i64], options: &OracleOptions) -> Option<bool> {
    let c = options.coefficient_bound;
    let width = (2 * c + 1) as u64;
    let mut space: u64 = 1;
    for _ in generators {
        space = space.checked_mul(width)?;
        if space > options.enumeration_budget {
            return None;
        }
    }
    fn rec(gens: &[Vec<i64>], residual: &mut [i64], c: i64) -> bool {
        let Some((g, rest)) = gens.split_first() else {
            return residual.iter().all(|&x| x == 0);
        };
        for k in -c..=c {
            for (r, x) in residual.iter_mut().zip(g) {
                *r -= k * x;
            }
            let ok = rec(rest, residual, c);
            for (r, x) in residual.iter_mut().zip(g) {
                *r += k * x;
            }
            if ok {
                return true;
            }
        }
        false
    }
    let mut residual = v.to_vec();
    Some(rec(generators, &mut residual, c))
}

fn member(
    generators: &[&ExponentVector],
    v: &ExponentVector,
    n: usize,
    options: &OracleOptions,
) -> Result<bool, OracleError> {
    let gens_i64: Vec<Vec<i64>> = generators
        .iter()
        .map(|g| g.coords().iter().map(|&x| x as i64).collect())
        .collect();
    let v_i64: Vec<i64> = v.coords().iter().map(|&x| x as i64).collect();
    let enumerated = bounded_membership(&gens_i64, &v_i64, options);
    let lattice = exact_linalg::lattice_from_generators(n, &gens_i64)?;
    let exact = lattice.contains(&v.to_bigints())?.is_some();
    if enumerated == Some(true) && !exact {
        return Err(OracleError::Discrepancy {
            vector: v.coords().to_vec(),
            generators: generators.iter().map(|g| g.coords().to_vec()).collect(),
        });
    }
    Ok(exact)
}

fn span(n: usize, vectors: &[&ExponentVector]) -> Lattice {
    let cols: Vec<Vec<u32>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    exact_linalg::lattice_from_generators(n, &cols).expect("lengths match")
}

fn restrict(vectors: &[ExponentVector], subset: u32) -> Vec<&ExponentVector> {
    vectors
        .iter()
        .filter(|v| v.support().iter().all(|&j| subset >> j & 1 == 1))
        .collect()
}

fn p_group_quotient(big: &Lattice, small: &Lattice, p: u64) -> Result<bool, OracleError> {
    let q = exact_linalg::lattice_quotient(big, small)?;
    Ok(exact_linalg::is_finite_p_group(&q, &BigInt::from(p))?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub is_separating: bool,
    pub subsets_examined: usize,
    pub failing_subsets: usize,
    /// First failing `(J, atom)` in subset-bitmask order.
    pub first_failure: Option<(Vec<usize>, ExponentVector)>,
}

/// Evaluates the subset condition on all `2^n` subsets.
pub fn check_condition2_all_subsets(
    rep: &RepSpec,
    atoms: &AtomSet,
    m: &[ExponentVector],
    characteristic: Characteristic,
    options: &OracleOptions,
) -> Result<OracleVerdict, OracleError> {
    let n = rep.n();
    if n > MAX_ORACLE_N {
        return Err(OracleError::TooLarge(n));
    }
    let mut failing = 0;
    let mut first_failure = None;
    for subset in 0u32..(1 << n) {
        let a_j = restrict(atoms.atoms(), subset);
        let m_j = restrict(m, subset);
        let bad_atom = match characteristic {
            Characteristic::Zero => {
                let mut bad = None;
                for a in &a_j {
                    if !member(&m_j, a, n, options)? {
                        bad = Some((*a).clone());
                        break;
                    }
                }
                bad
            }
            Characteristic::Prime(p) => {
                if p_group_quotient(&span(n, &a_j), &span(n, &m_j), p)? {
                    None
                } else {
                    let small = span(n, &m_j);
                    let mut bad = None;
                    for a in &a_j {
                        let mut with_a = m_j.clone();
                        with_a.push(a);
                        if !p_group_quotient(&span(n, &with_a), &small, p)? {
                            bad = Some((*a).clone());
                            break;
                        }
                    }
                    bad
                }
            }
        };
        if let Some(a) = bad_atom {
            failing += 1;
            if first_failure.is_none() {
                first_failure = Some(((0..n).filter(|j| subset >> j & 1 == 1).collect(), a));
            }
        }
    }
    Ok(OracleVerdict {
        is_separating: failing == 0,
        subsets_examined: 1 << n,
        failing_subsets: failing,
        first_failure,
    })
}

fn lattice_condition(big: &Lattice, small: &Lattice, characteristic: Characteristic) -> Result<bool, OracleError> {
    match characteristic {
        Characteristic::Zero => Ok(big == small),
        Characteristic::Prime(p) => p_group_quotient(big, small, p),
    }
}

/// `tau(B)` (or `tau_p(B)`) straight from the definition over every `I`.
pub fn tau_definition_oracle(
    rep: &RepSpec,
    atoms: &AtomSet,
    characteristic: Characteristic,
) -> Result<usize, OracleError> {
    let n = rep.n();
    if n > MAX_ORACLE_N {
        return Err(OracleError::TooLarge(n));
    }
    let mut tau = 0;
    for subset in 0u32..(1 << n) {
        let a_i = restrict(atoms.atoms(), subset);
        let big = span(n, &a_i);
        let mut t = tau;
        loop {
            let small: Vec<&ExponentVector> = a_i.iter().copied().filter(|a| a.support().len() <= t).collect();
            if lattice_condition(&big, &span(n, &small), characteristic)? {
                break;
            }
            t += 1;
        }
        tau = tau.max(t);
    }
    Ok(tau)
}

/// `beta_sep` straight from its definition over every `J`, scanning `d` upward.
pub fn beta_sep_definition_oracle(
    rep: &RepSpec,
    atoms: &AtomSet,
    characteristic: Characteristic,
) -> Result<u64, OracleError> {
    let n = rep.n();
    if n > MAX_ORACLE_N {
        return Err(OracleError::TooLarge(n));
    }
    'degrees: for d in 0..=atoms.max_length() {
        for subset in 0u32..(1 << n) {
            let a_j = restrict(atoms.atoms(), subset);
            let small: Vec<&ExponentVector> = a_j.iter().copied().filter(|a| a.length() <= d).collect();
            if !lattice_condition(&span(n, &a_j), &span(n, &small), characteristic)? {
                continue 'degrees;
            }
        }
        return Ok(d);
    }
    Ok(atoms.max_length())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferenceCheck {
    NoViolationUpTo(u32),
    Violation { minuend: Vec<u32>, subtrahend: Vec<u32> },
}

impl DifferenceCheck {
    pub fn holds(&self) -> bool {
        matches!(self, DifferenceCheck::NoViolationUpTo(_))
    }
}

/// Bounded test of difference-closedness for the monoid generated by
/// `generators`: every difference `m - q >= 0` of elements up to `degree_cap`
/// with `|m - q| <= degree_cap - max generator length` must be in the monoid.
/// Passing is evidence, not proof.
pub fn is_difference_closed_small(generators: &[ExponentVector], degree_cap: u32) -> DifferenceCheck {
    let gens: Vec<&ExponentVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = gens.first() else {
        return DifferenceCheck::NoViolationUpTo(degree_cap);
    };
    let n = first.dim();
    let max_gen = gens.iter().map(|g| g.length()).max().unwrap_or(0);
    // all monoid elements of length <= cap, by breadth-first closure
    let mut elements: HashSet<Vec<u32>> = HashSet::new();
    let mut layer = vec![vec![0u32; n]];
    elements.insert(vec![0u32; n]);
    while !layer.is_empty() {
        let mut next = Vec::new();
        for e in &layer {
            for g in &gens {
                let s: Vec<u32> = e.iter().zip(g.coords()).map(|(a, b)| a + b).collect();
                if s.iter().map(|&x| x as u64).sum::<u64>() <= degree_cap as u64 && elements.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        layer = next;
    }
    let mut sorted: Vec<&Vec<u32>> = elements.iter().collect();
    sorted.sort_by(|a, b| {
        let la: u32 = a.iter().sum();
        let lb: u32 = b.iter().sum();
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    let slack = (degree_cap as u64).saturating_sub(max_gen);
    for m in &sorted {
        for q in &sorted {
            if !q.iter().zip(m.iter()).all(|(a, b)| a <= b) {
                continue;
            }
            let diff: Vec<u32> = m.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
            let len: u64 = diff.iter().map(|&x| x as u64).sum();
            if len <= slack && !elements.contains(&diff) {
                return DifferenceCheck::Violation {
                    minuend: (*m).clone(),
                    subtrahend: (*q).clone(),
                };
            }
        }
    }
    DifferenceCheck::NoViolationUpTo(degree_cap)
}

/// Greatest common divisor of all maximal minors of `m` (0 if rank deficient),
/// by expanding every minor. Tiny matrices only.
pub fn maximal_minor_gcd(m: &exact_linalg::IntMatrix) -> Result<BigInt, OracleError> {
    let k = m.rows().min(m.cols());
    let mut g = BigInt::zero();
    let choose = |len: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..len {
                cur.push(i);
                rec(i + 1, len, k, cur, out);
                cur.pop();
            }
        }
        rec(0, len, k, &mut cur, &mut out);
        out
    };
    for rows in choose(m.rows()) {
        for cols in choose(m.cols()) {
            let minor = m.select_rows(&rows).select_columns(&cols);
            g = g.gcd(&minor.determinant()?);
        }
    }
    Ok(g)
}
