//! Atoms (Hilbert basis) of the invariant monoid `B`.
//!
//! `B` is cut out of `N^n` by the free rows (`r·m = 0`) and the torsion rows
//! (`r·m ≡ 0 mod d`). Each torsion row gets one slack variable `k >= 0` and
//! becomes the equation `r·m - d·k = 0`; with residues in `[0, d)` we have
//! `r·m >= 0`, so `k = r·m / d` is determined by `m` and monotone in it. The
//! projection from solutions of the extended homogeneous system onto their
//! first `n` coordinates is therefore an order isomorphism onto `B`, and the
//! minimal solutions map exactly onto the atoms.
//!
//! Minimal solutions of the extended system are found by the Contejean–Devie
//! completion: starting from unit vectors, a non-solution `x` is extended by
//! `e_j` only when `<Ax, Ae_j> < 0`, and any vector dominating a known solution
//! is discarded. The frontier is processed one total degree at a time in
//! graded-lexicographic order, so the output is reproducible.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::repspec::RepSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("resource cap exceeded: frontier of {frontier} vectors at degree {degree} (caps: frontier {max_frontier}, degree {max_degree})")]
    LimitExceeded {
        frontier: usize,
        degree: u64,
        max_frontier: usize,
        max_degree: u64,
    },
    #[error("weight entries do not fit in 64-bit machine integers")]
    Overflow,
}

/// Resource caps for the completion procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_frontier: usize,
    pub max_degree: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_frontier: 10_000_000,
            max_degree: 10_000,
        }
    }
}

/// A point of `N^n`, with cached support and length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    coords: Vec<u32>,
    support: Vec<usize>,
    length: u64,
}

impl ExponentVector {
    pub fn new(coords: Vec<u32>) -> Self {
        let support = coords
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(j, _)| j)
            .collect();
        let length = coords.iter().map(|&x| x as u64).sum();
        ExponentVector {
            coords,
            support,
            length,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut c = vec![0; n];
        c[j] = 1;
        Self::new(c)
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `|m|`, the sum of the coordinates.
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn is_zero(&self) -> bool {
        self.length == 0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &ExponentVector) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn support_within(&self, mask: &[bool]) -> bool {
        self.support.iter().all(|&j| mask[j])
    }

    pub fn to_bigints(&self) -> Vec<num_bigint::BigInt> {
        self.coords.iter().map(|&x| x.into()).collect()
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// Graded lexicographic: by length, then coordinates lexicographically.
impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The atoms of `B`, sorted graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSet {
    n: usize,
    atoms: Vec<ExponentVector>,
    max_length: u64,
    support_index: Vec<Vec<usize>>,
}

impl AtomSet {
    pub fn new(n: usize, mut atoms: Vec<ExponentVector>) -> Self {
        atoms.sort();
        atoms.dedup();
        let max_length = atoms.iter().map(ExponentVector::length).max().unwrap_or(0);
        let mut support_index = vec![Vec::new(); n];
        for (i, a) in atoms.iter().enumerate() {
            for &j in a.support() {
                support_index[j].push(i);
            }
        }
        AtomSet {
            n,
            atoms,
            max_length,
            support_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[ExponentVector] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn max_length(&self) -> u64 {
        self.max_length
    }

    /// Indices of atoms whose support contains coordinate `j`.
    pub fn containing(&self, j: usize) -> &[usize] {
        &self.support_index[j]
    }
}

/// Atoms of `B` for the given representation.
pub fn atoms(rep: &RepSpec, limits: &Limits) -> Result<AtomSet, HilbertError> {
    let small = rep.small_weights().ok_or(HilbertError::Overflow)?;
    let n = rep.n();
    let t = small.moduli.len();
    let width = n + t;
    // columns of the extended system
    let mut columns: Vec<Vec<i128>> = vec![vec![0; small.rows.len()]; width];
    for (r, row) in small.rows.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            columns[j][r] = w as i128;
        }
    }
    for (i, &d) in small.moduli.iter().enumerate() {
        columns[n + i][small.torus_rank + i] = -(d as i128);
    }
    let minimal = minimal_solutions(&columns, limits)?;
    let projected = minimal
        .into_iter()
        .map(|x| ExponentVector::new(x[..n].to_vec()))
        .filter(|m| !m.is_zero())
        .collect();
    Ok(AtomSet::new(n, projected))
}

struct Node {
    x: Vec<u32>,
    ax: Vec<i128>,
}

fn dominates_any(x: &[u32], solutions: &[Vec<u32>]) -> bool {
    solutions.iter().any(|s| s.iter().zip(x).all(|(a, b)| a <= b))
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let la: u64 = a.iter().map(|&v| v as u64).sum();
    let lb: u64 = b.iter().map(|&v| v as u64).sum();
    la.cmp(&lb).then_with(|| a.cmp(b))
}

/// Minimal nonzero solutions in `N^width` of `sum_j x_j * columns[j] = 0`.
fn minimal_solutions(columns: &[Vec<i128>], limits: &Limits) -> Result<Vec<Vec<u32>>, HilbertError> {
    let width = columns.len();
    let mut solutions: Vec<Vec<u32>> = Vec::new();
    let mut frontier: Vec<Node> = (0..width)
        .map(|j| {
            let mut x = vec![0; width];
            x[j] = 1;
            Node {
                x,
                ax: columns[j].clone(),
            }
        })
        .collect();
    let mut degree: u64 = 1;
    while !frontier.is_empty() {
        if degree > limits.max_degree || frontier.len() > limits.max_frontier {
            return Err(HilbertError::LimitExceeded {
                frontier: frontier.len(),
                degree,
                max_frontier: limits.max_frontier,
                max_degree: limits.max_degree,
            });
        }
        // Same-degree solutions cannot dominate each other, and the frontier
        // never contains a vector dominating an earlier solution.
        let (found, open): (Vec<Node>, Vec<Node>) =
            frontier.into_iter().partition(|node| node.ax.iter().all(|&v| v == 0));
        solutions.extend(found.into_iter().map(|node| node.x));

        let mut next: Vec<Node> = open
            .par_iter()
            .flat_map_iter(|node| {
                let solutions = &solutions;
                (0..width).filter_map(move |j| {
                    let dot: i128 = node.ax.iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
                    if dot >= 0 {
                        return None;
                    }
                    let mut x = node.x.clone();
                    x[j] += 1;
                    if dominates_any(&x, solutions) {
                        return None;
                    }
                    let ax = node.ax.iter().zip(&columns[j]).map(|(a, b)| a + b).collect();
                    Some(Node { x, ax })
                })
            })
            .collect();
        next.par_sort_unstable_by(|a, b| grlex(&a.x, &b.x));
        next.dedup_by(|a, b| a.x == b.x);
        frontier = next;
        degree += 1;
    }
    solutions.sort_by(|a, b| grlex(a, b));
    Ok(solutions)
}

/// Atoms supported inside `subset` (0-based coordinate indices).
pub fn atoms_restricted(atoms: &AtomSet, subset: &[usize]) -> AtomSet {
    let mut mask = vec![false; atoms.n()];
    for &j in subset {
        if j < mask.len() {
            mask[j] = true;
        }
    }
    let kept = atoms
        .atoms()
        .iter()
        .filter(|a| a.support_within(&mask))
        .cloned()
        .collect();
    AtomSet::new(atoms.n(), kept)
}

/// All elements of `B` of length at most `degree_cap`, in graded-lex order.
pub fn enumerate_b_up_to(rep: &RepSpec, degree_cap: u32) -> Vec<ExponentVector> {
    let n = rep.n();
    let fast = rep.small_weights();
    let member = |coords: &[u32]| match &fast {
        Some(w) => w.contains(coords),
        None => rep.in_b(&ExponentVector::new(coords.to_vec())).unwrap_or(false),
    };
    let mut out = Vec::new();
    let mut buf = vec![0u32; n];
    for d in 0..=degree_cap {
        compositions(&mut buf, 0, d, &mut |c| {
            if member(c) {
                out.push(ExponentVector::new(c.to_vec()));
            }
        });
    }
    out
}

/// Visits all vectors of `N^len` with coordinate sum `total`, lexicographically ascending.
pub(crate) fn compositions(buf: &mut [u32], pos: usize, total: u32, visit: &mut impl FnMut(&[u32])) {
    if pos + 1 == buf.len() {
        buf[pos] = total;
        visit(buf);
        return;
    }
    if buf.is_empty() {
        if total == 0 {
            visit(buf);
        }
        return;
    }
    for v in 0..=total {
        buf[pos] = v;
        compositions(buf, pos + 1, total - v, visit);
    }
    buf[pos] = 0;
}

/// Whether `target` is a sum of elements of `generators` (with repetition).
/// Dynamic programming over the box below `target`.
pub fn in_monoid_span(generators: &[ExponentVector], target: &ExponentVector) -> bool {
    let usable: Vec<&ExponentVector> = generators.iter().filter(|g| !g.is_zero() && (*g).le(target)).collect();
    let mut memo: HashMap<Vec<u32>, bool> = HashMap::new();
    fn go(rest: &[u32], gens: &[&ExponentVector], memo: &mut HashMap<Vec<u32>, bool>) -> bool {
        if rest.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&v) = memo.get(rest) {
            return v;
        }
        let mut ok = false;
        for g in gens {
            if g.coords().iter().zip(rest).all(|(a, b)| a <= b) {
                let next: Vec<u32> = rest.iter().zip(g.coords()).map(|(a, b)| a - b).collect();
                if go(&next, gens, memo) {
                    ok = true;
                    break;
                }
            }
        }
        memo.insert(rest.to_vec(), ok);
        ok
    }
    go(target.coords(), &usable, &mut memo)
}
