//! Decision procedures for separating sets of invariant monomials.
//!
//! For `M ⊆ B` the monomials `x^m, m ∈ M` separate iff for every coordinate
//! subset `J` the atoms supported in `J` lie in the lattice spanned by the
//! elements of `M` supported in `J` (characteristic 0), or the quotient of the
//! lattice spanned by `B_J` by that lattice is a finite `p`-group
//! (characteristic `p`). Only subsets with `|J| <= tau(B)` matter, and `tau(B)`
//! is bounded in terms of the group, which is what makes the check finite.
//!
//! The conditions depend on `J` only through the filtered sets `(A_J, M_J)`.
//! Each such class has a smallest member, the union of the supports of the
//! atoms in `A_J` (every `m ∈ M_J` is a sum of atoms supported in `supp(m)`),
//! and that union is used as the class representative and reported witness set.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact_linalg::{self, IntMatrix, Lattice, LinalgError};
use crate::hilbert::{AtomSet, ExponentVector};
use crate::repspec::{group_stats, realize_from_lattice, RepError, RepSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatingError {
    #[error("exponent vector {0:?} is not in the invariant monoid")]
    NotInB(Vec<u32>),
    #[error("exponent vector {0:?} is not in the family D")]
    NotInFamily(Vec<u32>),
    #[error("atom set is for {got} coordinates but the representation has {expected}")]
    AtomMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("subset enumeration supports at most 64 coordinates, got {0}")]
    TooManyCoordinates(usize),
    #[error("subset enumeration would visit {count} subsets, above the cap of {cap}")]
    SubsetCap { count: u128, cap: u128 },
    #[error("no failure to certify: the vector lies in the lattice (or has p-power order)")]
    NotAFailure,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl Characteristic {
    /// `0` for characteristic zero, otherwise a prime.
    pub fn new(p: u64) -> Result<Self, SeparatingError> {
        match p {
            0 => Ok(Characteristic::Zero),
            p if exact_linalg::is_prime(&BigInt::from(p)) => Ok(Characteristic::Prime(p)),
            p => Err(SeparatingError::NotPrime(p)),
        }
    }

    pub fn as_u64(self) -> u64 {
        match self {
            Characteristic::Zero => 0,
            Characteristic::Prime(p) => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Use the conjectured support bound `1 + dim G + rk X(G)` instead of the
    /// proven one. Verdicts obtained this way are flagged as conditional.
    pub unsafe_conjectural_bound: bool,
    pub max_subsets: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            unsafe_conjectural_bound: false,
            max_subsets: 1 << 26,
        }
    }
}

/// Refutation of lattice membership: `u·m ≡ 0 (mod k)` for every `m ∈ M_J`,
/// while `u·a` is nonzero mod `k` (and, in characteristic `p`, not killed by
/// any power of `p`). `k = 0` means the congruence is an equality over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureCertificate {
    /// Entries indexed by the positions of the witness subset `J`.
    pub dual: Vec<BigInt>,
    pub modulus: BigInt,
}

impl FailureCertificate {
    fn pair(&self, subset: &[usize], v: &ExponentVector) -> BigInt {
        subset
            .iter()
            .zip(&self.dual)
            .map(|(&j, u)| u * BigInt::from(v.coords()[j]))
            .sum()
    }

    /// Rechecks the certificate by direct integer arithmetic.
    pub fn validate(
        &self,
        subset: &[usize],
        m_j: &[ExponentVector],
        atom: &ExponentVector,
        characteristic: Characteristic,
    ) -> bool {
        if self.dual.len() != subset.len() || self.modulus.is_negative() {
            return false;
        }
        let mut mask = vec![false; atom.dim()];
        for &j in subset {
            if j >= mask.len() {
                return false;
            }
            mask[j] = true;
        }
        if !atom.support_within(&mask) {
            return false;
        }
        let k = &self.modulus;
        let vanishes = |x: &BigInt| if k.is_zero() { x.is_zero() } else { x.is_multiple_of(k) };
        for m in m_j {
            if m.dim() != atom.dim() || !m.support_within(&mask) || !vanishes(&self.pair(subset, m)) {
                return false;
            }
        }
        let ua = self.pair(subset, atom);
        if k.is_zero() {
            return !ua.is_zero();
        }
        let order = k / ua.gcd(k);
        match characteristic {
            Characteristic::Zero => !order.is_one(),
            Characteristic::Prime(p) => !exact_linalg::is_power_of(&order, &BigInt::from(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Coordinate subset `J`, sorted.
    pub subset: Vec<usize>,
    pub atom: ExponentVector,
    pub certificate: FailureCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingVerdict {
    pub is_separating: bool,
    pub characteristic: Characteristic,
    /// Number of distinct `(A_J, M_J)` classes checked.
    pub subsets_examined: usize,
    pub support_bound_used: usize,
    /// One per failing class, ordered by `J` then atom.
    pub witnesses: Vec<Witness>,
    /// Set when the conjectured support bound was used.
    pub conditional: bool,
}

/// Builds a certificate that `atom` is not in the lattice spanned by
/// `generators` (characteristic 0), or that no `p`-power multiple of it is
/// (characteristic `p`). Everything is read in the coordinates of `subset`;
/// the certificate comes from a row of the left transform of the Smith form.
pub fn make_failure_certificate(
    subset: &[usize],
    generators: &[ExponentVector],
    atom: &ExponentVector,
    characteristic: Characteristic,
) -> Result<FailureCertificate, SeparatingError> {
    let restrict =
        |v: &ExponentVector| -> Vec<BigInt> { subset.iter().map(|&j| BigInt::from(v.coords()[j])).collect() };
    let cols: Vec<Vec<BigInt>> = generators.iter().map(restrict).collect();
    let g = IntMatrix::from_columns(subset.len(), &cols)?;
    let (s, u, _) = exact_linalg::snf(&g);
    let y = u.mul_vec(&restrict(atom))?;
    let diag = s.rows().min(s.cols());
    let rank = (0..diag).filter(|&i| !s[(i, i)].is_zero()).count();

    // rank obstruction first
    if let Some(i) = (rank..subset.len()).find(|&i| !y[i].is_zero()) {
        let row = u.row(i);
        let content = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let dual = row.iter().map(|x| x / &content).collect();
        return Ok(FailureCertificate {
            dual,
            modulus: BigInt::zero(),
        });
    }
    for i in 0..rank {
        let d = &s[(i, i)];
        if d.is_one() {
            continue;
        }
        let order = d / y[i].gcd(d);
        let fails = match characteristic {
            Characteristic::Zero => !order.is_one(),
            Characteristic::Prime(p) => !exact_linalg::is_power_of(&order, &BigInt::from(p)),
        };
        if fails {
            let dual = u.row(i).iter().map(|x| x.mod_floor(d)).collect();
            return Ok(FailureCertificate {
                dual,
                modulus: d.clone(),
            });
        }
    }
    Err(SeparatingError::NotAFailure)
}

pub fn beta(atoms: &AtomSet) -> u64 {
    atoms.max_length()
}

fn mask_of(v: &ExponentVector) -> u64 {
    v.support().iter().fold(0u64, |acc, &j| acc | (1 << j))
}

fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).collect()
}

fn lattice_of<'a>(n: usize, vectors: impl Iterator<Item = &'a ExponentVector>) -> Lattice {
    let cols: Vec<Vec<u32>> = vectors.map(|v| v.coords().to_vec()).collect();
    exact_linalg::lattice_from_generators(n, &cols).expect("vector lengths match ambient dimension")
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Bitmasks of all subsets of `{0..n}` with at most `t` elements, by size then value.
fn small_subsets(n: usize, t: usize, cap: u128) -> Result<Vec<u64>, SeparatingError> {
    let total: u128 = (0..=t.min(n)).map(|k| binomial(n as u128, k as u128)).sum();
    if total > cap {
        return Err(SeparatingError::SubsetCap { count: total, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    out.push(0u64);
    for k in 1..=t.min(n) {
        // Gosper's hack over k-bit patterns
        let mut x: u64 = (1u64 << k) - 1;
        let limit: u128 = 1u128 << n;
        while (x as u128) < limit {
            out.push(x);
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 {
                break;
            }
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    Ok(out)
}

fn check_inputs(rep: &RepSpec, atoms: &AtomSet) -> Result<(), SeparatingError> {
    if atoms.n() != rep.n() {
        return Err(SeparatingError::AtomMismatch {
            expected: rep.n(),
            got: atoms.n(),
        });
    }
    if rep.n() > 64 {
        return Err(SeparatingError::TooManyCoordinates(rep.n()));
    }
    Ok(())
}

fn support_bound(rep: &RepSpec, options: &SearchOptions) -> usize {
    let stats = group_stats(rep);
    let t = if options.unsafe_conjectural_bound {
        stats.tau_upper_conjectural
    } else {
        stats.tau_upper
    };
    t.min(rep.n())
}

/// Whether `small ⊆ big` passes: equal lattices in characteristic 0, a finite
/// `p`-group quotient in characteristic `p`.
fn quotient_ok(big: &Lattice, small: &Lattice, characteristic: Characteristic) -> Result<bool, SeparatingError> {
    let q = exact_linalg::lattice_quotient(big, small)?;
    Ok(match characteristic {
        Characteristic::Zero => q.is_trivial(),
        Characteristic::Prime(p) => exact_linalg::is_finite_p_group(&q, &BigInt::from(p))?,
    })
}

/// Whether `v` (or some `p`-power multiple of it) lies in `l`.
fn member_ok(l: &Lattice, v: &ExponentVector, characteristic: Characteristic) -> Result<bool, SeparatingError> {
    match characteristic {
        Characteristic::Zero => Ok(l.contains(&v.to_bigints())?.is_some()),
        Characteristic::Prime(_) => {
            let mut gens = l.basis_vectors();
            gens.push(v.to_bigints());
            let big = exact_linalg::lattice_from_generators(l.ambient_dim(), &gens)?;
            quotient_ok(&big, l, characteristic)
        }
    }
}

/// Decides whether `M` is separating.
pub fn check_separating(
    rep: &RepSpec,
    atoms: &AtomSet,
    m: &[ExponentVector],
    characteristic: Characteristic,
    options: &SearchOptions,
) -> Result<SeparatingVerdict, SeparatingError> {
    check_inputs(rep, atoms)?;
    for v in m {
        if !rep.in_b(v)? {
            return Err(SeparatingError::NotInB(v.coords().to_vec()));
        }
    }
    let n = rep.n();
    let bound = support_bound(rep, options);
    let atom_masks: Vec<u64> = atoms.atoms().iter().map(mask_of).collect();
    let m_masks: Vec<u64> = m.iter().map(mask_of).collect();

    let mut classes = BTreeSet::new();
    for j in small_subsets(n, bound, options.max_subsets)? {
        let canonical = atom_masks
            .iter()
            .chain(&m_masks)
            .filter(|&&s| s & !j == 0)
            .fold(0u64, |acc, &s| acc | s);
        classes.insert(indices_of(canonical));
    }
    let classes: Vec<Vec<usize>> = classes.into_iter().collect();

    let results: Vec<Option<Witness>> = classes
        .par_iter()
        .map(|subset| check_class(n, atoms, &atom_masks, m, &m_masks, subset, characteristic))
        .collect::<Result<_, _>>()?;
    let witnesses: Vec<Witness> = results.into_iter().flatten().collect();
    Ok(SeparatingVerdict {
        is_separating: witnesses.is_empty(),
        characteristic,
        subsets_examined: classes.len(),
        support_bound_used: bound,
        witnesses,
        conditional: options.unsafe_conjectural_bound,
    })
}

fn check_class(
    n: usize,
    atoms: &AtomSet,
    atom_masks: &[u64],
    m: &[ExponentVector],
    m_masks: &[u64],
    subset: &[usize],
    characteristic: Characteristic,
) -> Result<Option<Witness>, SeparatingError> {
    let j = subset.iter().fold(0u64, |acc, &i| acc | (1 << i));
    let a_j: Vec<&ExponentVector> = atoms
        .atoms()
        .iter()
        .zip(atom_masks)
        .filter(|(_, &s)| s & !j == 0)
        .map(|(a, _)| a)
        .collect();
    let m_j: Vec<ExponentVector> = m
        .iter()
        .zip(m_masks)
        .filter(|(_, &s)| s & !j == 0)
        .map(|(v, _)| v.clone())
        .collect();
    let small = lattice_of(n, m_j.iter());
    if let Characteristic::Prime(_) = characteristic {
        // M ⊆ B makes this an inclusion; lattice_quotient verifies it
        let big = lattice_of(n, a_j.iter().copied());
        if quotient_ok(&big, &small, characteristic)? {
            return Ok(None);
        }
    }
    for a in a_j {
        if !member_ok(&small, a, characteristic)? {
            let certificate = make_failure_certificate(subset, &m_j, a, characteristic)?;
            return Ok(Some(Witness {
                subset: subset.to_vec(),
                atom: a.clone(),
                certificate,
            }));
        }
    }
    Ok(None)
}

pub fn check_separating_char0(
    rep: &RepSpec,
    atoms: &AtomSet,
    m: &[ExponentVector],
) -> Result<SeparatingVerdict, SeparatingError> {
    check_separating(rep, atoms, m, Characteristic::Zero, &SearchOptions::default())
}

pub fn check_separating_charp(
    rep: &RepSpec,
    atoms: &AtomSet,
    m: &[ExponentVector],
    p: u64,
) -> Result<SeparatingVerdict, SeparatingError> {
    let c = Characteristic::new(p)?;
    if c == Characteristic::Zero {
        return Err(SeparatingError::NotPrime(0));
    }
    check_separating(rep, atoms, m, c, &SearchOptions::default())
}

/// All distinct unions of atom supports with at most `max_size` coordinates.
/// These are exactly the class representatives of `I -> A_I`.
fn support_unions(atoms: &AtomSet, max_size: usize) -> Vec<u64> {
    let mut supports: Vec<u64> = atoms.atoms().iter().map(mask_of).collect();
    supports.sort_unstable();
    supports.dedup();
    let mut unions: BTreeSet<u64> = BTreeSet::new();
    unions.insert(0);
    for s in supports {
        let grown: Vec<u64> = unions
            .iter()
            .map(|&u| u | s)
            .filter(|u| u.count_ones() as usize <= max_size)
            .collect();
        unions.extend(grown);
    }
    unions.into_iter().collect()
}

fn atoms_in(atoms: &AtomSet, mask: u64) -> Vec<&ExponentVector> {
    atoms.atoms().iter().filter(|a| mask_of(a) & !mask == 0).collect()
}

/// Least `t` such that, for the class `A_I`, the atoms with support size at
/// most `t` pass the lattice condition against all of `A_I`.
fn class_tau(n: usize, a_i: &[&ExponentVector], characteristic: Characteristic) -> Result<usize, SeparatingError> {
    if a_i.is_empty() {
        return Ok(0);
    }
    let big = lattice_of(n, a_i.iter().copied());
    let mut sizes: Vec<usize> = a_i.iter().map(|a| a.support().len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for &t in &sizes {
        let small = lattice_of(n, a_i.iter().copied().filter(|a| a.support().len() <= t));
        if quotient_ok(&big, &small, characteristic)? {
            return Ok(t);
        }
    }
    Ok(*sizes.last().expect("nonempty"))
}

fn tau_generic(rep: &RepSpec, atoms: &AtomSet, characteristic: Characteristic) -> Result<usize, SeparatingError> {
    check_inputs(rep, atoms)?;
    let n = rep.n();
    let classes = support_unions(atoms, n);
    let taus: Vec<usize> = classes
        .par_iter()
        .map(|&mask| class_tau(n, &atoms_in(atoms, mask), characteristic))
        .collect::<Result<_, _>>()?;
    Ok(taus.into_iter().max().unwrap_or(0))
}

/// The support-size invariant `tau(B)`.
pub fn tau_exact(rep: &RepSpec, atoms: &AtomSet) -> Result<usize, SeparatingError> {
    tau_generic(rep, atoms, Characteristic::Zero)
}

/// The `p`-saturated support-size invariant `tau_p(B)`.
pub fn tau_p_exact(rep: &RepSpec, atoms: &AtomSet, p: u64) -> Result<usize, SeparatingError> {
    match Characteristic::new(p)? {
        Characteristic::Zero => Err(SeparatingError::NotPrime(0)),
        c => tau_generic(rep, atoms, c),
    }
}

/// Least degree `d` such that the invariants of degree at most `d` separate.
pub fn beta_sep(
    rep: &RepSpec,
    atoms: &AtomSet,
    characteristic: Characteristic,
    options: &SearchOptions,
) -> Result<u64, SeparatingError> {
    check_inputs(rep, atoms)?;
    let n = rep.n();
    let bound = support_bound(rep, options);
    let classes = support_unions(atoms, bound);
    let per_class: Vec<u64> = classes
        .par_iter()
        .map(|&mask| -> Result<u64, SeparatingError> {
            let a_j = atoms_in(atoms, mask);
            if a_j.is_empty() {
                return Ok(0);
            }
            let big = lattice_of(n, a_j.iter().copied());
            let mut lengths: Vec<u64> = a_j.iter().map(|a| a.length()).collect();
            lengths.sort_unstable();
            lengths.dedup();
            // d = max length always passes
            for &d in &lengths {
                let small = lattice_of(n, a_j.iter().copied().filter(|a| a.length() <= d));
                if quotient_ok(&big, &small, characteristic)? {
                    return Ok(d);
                }
            }
            Ok(*lengths.last().expect("nonempty"))
        })
        .collect::<Result<_, _>>()?;
    Ok(per_class.into_iter().max().unwrap_or(0))
}

/// Greedy inclusion-minimal separating subset of the atoms: atoms are tried
/// for removal longest first (then reverse grlex), keeping each removal that
/// leaves a separating set. Not a minimum-cardinality search.
pub fn minimize_separating(
    rep: &RepSpec,
    atoms: &AtomSet,
    characteristic: Characteristic,
    options: &SearchOptions,
) -> Result<Vec<ExponentVector>, SeparatingError> {
    let mut current: Vec<ExponentVector> = atoms.atoms().to_vec();
    for candidate in atoms.atoms().iter().rev() {
        let trial: Vec<ExponentVector> = current.iter().filter(|v| *v != candidate).cloned().collect();
        if check_separating(rep, atoms, &trial, characteristic, options)?.is_separating {
            current = trial;
        }
    }
    Ok(current)
}

/// The support bound `1 + 3s + rk(A)` for the monoid generated by `atoms`,
/// where `Z^n / ZB ≅ Z^s ⊕ A`, and whether the atoms of support size at most
/// that bound already span `ZB`.
pub fn support_generation_bound(atoms: &AtomSet) -> Result<(usize, bool), SeparatingError> {
    let n = atoms.n();
    let full = lattice_of(n, atoms.atoms().iter());
    let presentation = realize_from_lattice(&full);
    let bound = 1 + 3 * presentation.torus_rank() + presentation.torsion_orders().len();
    let small = lattice_of(n, atoms.atoms().iter().filter(|a| a.support().len() <= bound));
    Ok((bound, small == full))
}
