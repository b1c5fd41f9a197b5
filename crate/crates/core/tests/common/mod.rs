#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sepmon::{ExponentVector, Limits, RepSpec};

pub fn ev(v: &[u32]) -> ExponentVector {
    ExponentVector::new(v.to_vec())
}

/// The `s x (2s+1)` torus family: row `i` is `e_i + e_s - t e_{s+1+i}` (0-based).
pub fn family(s: usize, t: u32) -> RepSpec {
    let n = 2 * s + 1;
    let rows: Vec<Vec<i64>> = (0..s)
        .map(|i| {
            let mut r = vec![0i64; n];
            r[i] = 1;
            r[s] = 1;
            r[s + 1 + i] = -(t as i64);
            r
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    RepSpec::from_i64(n, s, &[], &refs).unwrap()
}

/// Closed-form atom `c_k`, `k` in `1..=s+t`.
pub fn family_atom(s: usize, t: u32, k: usize) -> ExponentVector {
    let n = 2 * s + 1;
    let mut v = vec![0u32; n];
    if k <= s {
        v[k - 1] = t;
        v[s + k] = 1;
    } else {
        let j = (k - s - 1) as u32; // c_{s+1+j}
        for x in v.iter_mut().take(s) {
            *x = j;
        }
        v[s] = t - j;
        for x in v.iter_mut().skip(s + 1) {
            *x = 1;
        }
    }
    ExponentVector::new(v)
}

pub fn family_atoms(s: usize, t: u32) -> Vec<ExponentVector> {
    let mut v: Vec<ExponentVector> = (1..=s + t as usize).map(|k| family_atom(s, t, k)).collect();
    v.sort();
    v
}

pub const FAMILY_PARAMS: [(usize, u32); 5] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 2)];

pub fn z2() -> RepSpec {
    RepSpec::from_i64(2, 0, &[2], &[&[1, 1]]).unwrap()
}

pub fn test_limits() -> Limits {
    Limits {
        max_frontier: 200_000,
        max_degree: 40,
    }
}

/// Random representation: `n <= 6`, `s <= 2` free rows with entries in
/// `[-3, 3]`, up to two torsion rows of order `<= 4`.
pub fn random_rep(rng: &mut ChaCha8Rng) -> RepSpec {
    let n = rng.gen_range(1..=6usize);
    let s = rng.gen_range(0..=2usize);
    let torsion_rows = rng.gen_range(0..=2usize);
    let torsion: Vec<i64> = (0..torsion_rows).map(|_| rng.gen_range(2..=4)).collect();
    let mut rows: Vec<Vec<i64>> = (0..s)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    for &d in &torsion {
        rows.push((0..n).map(|_| rng.gen_range(0..d)).collect());
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    RepSpec::from_i64(n, s, &torsion, &refs).unwrap()
}

pub fn random_torsion_free_rep(rng: &mut ChaCha8Rng) -> RepSpec {
    let n = rng.gen_range(1..=6usize);
    let s = rng.gen_range(1..=2usize);
    let rows: Vec<Vec<i64>> = (0..s)
        .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    RepSpec::from_i64(n, s, &[], &refs).unwrap()
}

pub fn json_of(rep: &RepSpec, m: Option<&[ExponentVector]>) -> String {
    let mut v = sepmon::cli::rep_to_json(rep);
    if let Some(m) = m {
        v["M"] = serde_json::json!(m.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>());
    }
    v.to_string()
}
