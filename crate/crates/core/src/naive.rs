//! Reference implementations and generators used as independent oracles by
//! the test and acceptance suites, and as baselines by the benchmarks.
//!
//! Nothing here shares code with the optimized paths: the dense Smith
//! reduction below is a separate routine, homology is assembled densely
//! without the unit-pivot pass, and invariant factors can be recomputed
//! from gcds of minors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::forms::{QuadraticRefinement, SkewForm};
use crate::homology::HomologyTable;
use crate::matrix::{AbelianInvariants, IntMatrix};
use crate::simplicial::SimplicialComplex;

/// Plain dense Smith diagonal: full pivoting on the minimal entry, no
/// sparsity pass, no transform bookkeeping.
pub fn dense_smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.rows();
    let cols = m.cols();
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            let mut pivot: Option<(usize, usize, BigInt)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = m.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    if pivot.as_ref().is_none_or(|(_, _, b)| v.abs() < *b) {
                        pivot = Some((i, j, v.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                return (0..n).map(|i| m.get(i, i).clone()).collect();
            };
            for j in 0..cols {
                let x = m.get(t, j).clone();
                let y = m.get(pi, j).clone();
                m.set(t, j, y);
                m.set(pi, j, x);
            }
            for i in 0..rows {
                let x = m.get(i, t).clone();
                let y = m.get(i, pj).clone();
                m.set(i, t, y);
                m.set(i, pj, x);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = m.get(i, t) / m.get(t, t);
                for j in t..cols {
                    let v = m.get(i, j) - &q * m.get(t, j);
                    m.set(i, j, v);
                }
                if !m.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m.get(t, j) / m.get(t, t);
                for i in t..rows {
                    let v = m.get(i, j) - &q * m.get(i, t);
                    m.set(i, j, v);
                }
                if !m.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut divisible = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m.get(i, j).mod_floor(m.get(t, t)).is_zero() {
                        for jj in t..cols {
                            let v = m.get(t, jj) + m.get(i, jj);
                            m.set(t, jj, v);
                        }
                        divisible = false;
                        break 'scan;
                    }
                }
            }
            if divisible {
                break;
            }
        }
        if m.get(t, t).is_negative() {
            for j in 0..cols {
                let v = -m.get(t, j);
                m.set(t, j, v);
            }
        }
    }
    (0..n).map(|i| m.get(i, i).clone()).collect()
}

/// Invariant factors from the gcds of k x k minors: d_k = delta_k /
/// delta_{k-1} with delta_k the gcd of all k x k minors. Exponential in the
/// matrix size; intended for small matrices only.
pub fn invariant_factors_by_minor_gcd(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows().min(a.cols());
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=n {
        let delta = minor_gcd(a, k);
        if delta.is_zero() {
            break;
        }
        out.push(&delta / &prev);
        prev = delta;
    }
    out
}

/// gcd of all k x k minors; zero when every minor vanishes.
pub fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    let rows: Vec<usize> = (0..a.rows()).collect();
    let cols: Vec<usize> = (0..a.cols()).collect();
    for rsel in combinations(&rows, k) {
        for csel in combinations(&cols, k) {
            let d = laplace_det(a, &rsel, &csel);
            g = g.gcd(&d);
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant by cofactor expansion along the first row.
fn laplace_det(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    if k == 1 {
        return a.get(rows[0], cols[0]).clone();
    }
    let mut acc = BigInt::zero();
    for (j, &c) in cols.iter().enumerate() {
        let v = a.get(rows[0], c);
        if v.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(jj, _)| jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let minor = laplace_det(a, &rows[1..], &sub_cols);
        if j % 2 == 0 {
            acc += v * minor;
        } else {
            acc -= v * minor;
        }
    }
    acc
}

/// Dense boundary matrix of degree k (columns are k-simplices).
pub fn dense_boundary(c: &SimplicialComplex, k: usize) -> IntMatrix {
    if k == 0 {
        let n0 = c.count(0);
        let mut m = IntMatrix::zero(1, n0);
        for j in 0..n0 {
            m.set(0, j, BigInt::one());
        }
        return m;
    }
    let cols = c.count(k);
    let rows = c.count(k.saturating_sub(1));
    let mut m = IntMatrix::zero(rows, cols);
    if cols == 0 {
        return m;
    }
    let level = c.level(k).expect("counted");
    let faces = c.level(k - 1).expect("closure");
    for j in 0..cols {
        let s = level.get(j);
        let mut face = Vec::with_capacity(k);
        for drop in 0..s.len() {
            face.clear();
            face.extend(
                s.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v),
            );
            let r = faces.position(&face).expect("face present");
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            m.set(r, j, BigInt::from(sign));
        }
    }
    m
}

/// Reduced homology computed entirely with dense matrices and the naive
/// Smith reduction. Oracle for the sparse engine.
pub fn reduced_homology_dense(c: &SimplicialComplex, max_degree: usize) -> HomologyTable {
    let mut groups = Vec::new();
    for k in 0..=max_degree {
        let n_k = c.count(k);
        let out_diag = dense_smith_diagonal(&dense_boundary(c, k));
        let rank_out = if k == 0 {
            usize::from(n_k > 0)
        } else {
            out_diag.iter().filter(|d| !d.is_zero()).count()
        };
        let in_diag = dense_smith_diagonal(&dense_boundary(c, k + 1));
        let rank_in = in_diag.iter().filter(|d| !d.is_zero()).count();
        let torsion: Vec<BigInt> = in_diag
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        groups.push((
            k,
            AbelianInvariants {
                torsion,
                free_rank: n_k - rank_out - rank_in,
            },
        ));
    }
    HomologyTable::from_groups(groups)
}

/// t(N, N') by brute force on minors of the generator matrix: the largest
/// k whose k x k minors have gcd 1. Independent of any Smith reduction.
pub fn t_by_minor_gcd(gens: &IntMatrix) -> usize {
    let n = gens.rows().min(gens.cols());
    let mut t = 0;
    for k in 1..=n {
        if minor_gcd(gens, k).is_one() {
            t = k;
        } else {
            break;
        }
    }
    t
}

/// Depth-first search for the largest set of vectors of N' with sup-norm
/// <= height that is jointly unimodular in N = Z^n. Returns the largest
/// size found, a lower bound for t(N, N') that is exact once it reaches
/// `stop_at`.
pub fn t_search(ambient_rank: usize, gens: &IntMatrix, height: i64, stop_at: usize) -> usize {
    use crate::arc::CosetMembership;
    let membership = CosetMembership::new(gens);
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![-height; ambient_rank];
    'outer: loop {
        if cur.iter().any(|&x| x != 0) {
            let as_big: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
            if membership.contains(&as_big) {
                candidates.push(cur.clone());
            }
        }
        for i in (0..ambient_rank).rev() {
            if cur[i] < height {
                cur[i] += 1;
                continue 'outer;
            }
            cur[i] = -height;
        }
        break;
    }
    // Prefer short vectors so unimodular sets are found early.
    candidates.sort_by_key(|v| {
        (
            v.iter().map(|&x| x.abs()).max().unwrap_or(0),
            v.iter().map(|&x| x.abs()).sum::<i64>(),
            v.clone(),
        )
    });
    let mut best = 0usize;
    let mut chosen: Vec<usize> = Vec::new();
    dfs(&candidates, 0, &mut chosen, &mut best, stop_at);
    best
}

fn dfs(
    candidates: &[Vec<i64>],
    from: usize,
    chosen: &mut Vec<usize>,
    best: &mut usize,
    stop_at: usize,
) {
    if *best >= stop_at {
        return;
    }
    if chosen.len() > *best {
        *best = chosen.len();
    }
    for i in from..candidates.len() {
        if chosen.len() + (candidates.len() - i) <= *best {
            break;
        }
        chosen.push(i);
        let vecs: Vec<&[i64]> = chosen.iter().map(|&j| candidates[j].as_slice()).collect();
        if crate::matrix::jointly_unimodular_i64(&vecs) {
            dfs(candidates, i + 1, chosen, best, stop_at);
        }
        chosen.pop();
        if *best >= stop_at {
            return;
        }
    }
}

/// Democratic Arf oracle: q takes the value 0 on a strict majority of the
/// 2^{2g} mod-2 vectors exactly when the Arf invariant is 0.
pub fn arf_by_majority(q: &QuadraticRefinement) -> u8 {
    let g = q.genus();
    assert!(g <= 12, "majority count is exponential in the genus");
    let mut zeros = 0u64;
    let mut ones = 0u64;
    for mask in 0..(1u64 << (2 * g)) {
        let coords: Vec<BigInt> = (0..2 * g)
            .map(|i| BigInt::from((mask >> i) & 1))
            .collect();
        if q.evaluate(&coords).expect("coordinate count matches") == 0 {
            zeros += 1;
        } else {
            ones += 1;
        }
    }
    u8::from(zeros <= ones)
}

// Deterministic generators. A tiny splitmix keeps the lib free of RNG deps;
// the statistical quality is irrelevant here.

pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.below((hi - lo + 1) as u64) as i64)
    }
}

/// Random unimodular matrix: a product of elementary shears, swaps and
/// sign flips with bounded coefficients.
pub fn random_unimodular(n: usize, seed: u64, ops: usize) -> IntMatrix {
    let mut rng = SplitMix(seed);
    let mut m = IntMatrix::identity(n);
    if n <= 1 {
        return m;
    }
    for _ in 0..ops.max(2 * n) {
        match rng.below(3) {
            0 => {
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64) as usize;
                if i == j {
                    j = (j + 1) % n;
                }
                let q = BigInt::from(rng.int_in(-2, 2));
                for r in 0..n {
                    let v = m.get(r, j) + &q * m.get(r, i);
                    m.set(r, j, v);
                }
            }
            1 => {
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64) as usize;
                if i == j {
                    j = (j + 1) % n;
                }
                for r in 0..n {
                    let x = m.get(r, i).clone();
                    let y = m.get(r, j).clone();
                    m.set(r, i, y);
                    m.set(r, j, x);
                }
            }
            _ => {
                let i = rng.below(n as u64) as usize;
                for r in 0..n {
                    let v = -m.get(r, i);
                    m.set(r, i, v);
                }
            }
        }
    }
    m
}

/// Random skew form of the given rank with entries bounded by `max_entry`.
pub fn random_skew_form(rank: usize, seed: u64, max_entry: i64) -> SkewForm {
    let mut rng = SplitMix(seed.wrapping_add(1));
    let mut gram = IntMatrix::zero(rank, rank);
    for i in 0..rank {
        for j in i + 1..rank {
            let v = rng.int_in(-max_entry, max_entry);
            gram.set(i, j, BigInt::from(v));
            gram.set(j, i, BigInt::from(-v));
        }
    }
    SkewForm::new(gram).expect("constructed skew")
}

/// Random small complex from random maximal simplices.
pub fn random_complex(seed: u64, max_vertices: usize, max_maximal: usize) -> SimplicialComplex {
    let mut rng = SplitMix(seed.wrapping_add(17));
    let n = 1 + rng.below(max_vertices as u64) as usize;
    let labels = (0..n).map(|i| i.to_string()).collect();
    let count = rng.below(max_maximal as u64) as usize;
    let mut maximal = Vec::with_capacity(count);
    for _ in 0..count {
        let size = 1 + rng.below(4.min(n as u64)) as usize;
        let mut s: Vec<u32> = (0..size).map(|_| rng.below(n as u64) as u32).collect();
        s.sort_unstable();
        s.dedup();
        maximal.push(s);
    }
    SimplicialComplex::from_maximal(labels, &maximal).expect("valid random complex")
}

