//! Integral simplicial homology via Smith normal form of boundary
//! matrices.
//!
//! Boundary matrices are assembled sparsely in coordinate form. Before any
//! dense Smith reduction, a density-reduction pass strips unit pivots:
//! every +-1 pivot is an invariant factor 1 and can be eliminated by
//! unimodular row and column operations. On boundary matrices this removes
//! almost everything, so the dense Smith normal form only ever sees a small
//! core. This pass is the dominant cost center of the crate.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exec::{self, Caps};
use crate::matrix::{AbelianInvariants, IntMatrix};
use crate::simplicial::SimplicialComplex;

/// Reduced homology groups, one per computed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    groups: Vec<(usize, AbelianInvariants)>,
}

impl HomologyTable {
    pub fn from_groups(groups: Vec<(usize, AbelianInvariants)>) -> Self {
        HomologyTable { groups }
    }

    pub fn group(&self, degree: usize) -> Option<&AbelianInvariants> {
        self.groups
            .iter()
            .find(|(d, _)| *d == degree)
            .map(|(_, g)| g)
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().map(|(d, _)| *d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &AbelianInvariants)> {
        self.groups.iter().map(|(d, g)| (*d, g))
    }

    pub fn is_zero_through(&self, degree: usize) -> bool {
        self.groups
            .iter()
            .filter(|(d, _)| *d <= degree)
            .all(|(_, g)| g.is_trivial())
    }

    /// Alternating sum of free ranks over the computed window.
    pub fn euler_characteristic_reduced(&self) -> i64 {
        self.groups
            .iter()
            .map(|(d, g)| {
                let b = g.free_rank as i64;
                if d % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum()
    }
}

impl std::fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (d, g) in &self.groups {
            writeln!(f, "H~_{d} = {g}")?;
        }
        Ok(())
    }
}

/// Rank and invariant factors of one boundary map.
#[derive(Clone, Debug, Default)]
struct MapProfile {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// Reduced homology of `c` in degrees `0..=max_degree`.
///
/// H~_k = ker(d_k) / im(d_{k+1}) with d_0 the augmentation, so the rank of
/// H~_k is n_k - rank(d_k) - rank(d_{k+1}) and its torsion is given by the
/// invariant factors of d_{k+1} that exceed 1.
pub fn reduced_homology(
    c: &SimplicialComplex,
    max_degree: usize,
    caps: &Caps,
) -> Result<HomologyTable> {
    let dim = c.dim();
    let top = max_degree.min(if dim < 0 { 0 } else { dim as usize + 1 });
    // Profiles of d_0 .. d_{top+1}; maps beyond the dimension are zero.
    let wanted: Vec<usize> = (0..=top + 1).collect();
    let profiles = exec::map_vec(wanted, |k| boundary_profile(c, k, caps));
    let mut by_degree = Vec::new();
    for k in 0..=top {
        let p = profiles[k].as_ref().map_err(clone_error)?;
        let incoming = profiles[k + 1].as_ref().map_err(clone_error)?;
        let n_k = c.count(k);
        let cycles = n_k - p.rank;
        assert!(
            cycles >= incoming.rank,
            "boundaries exceed cycles in degree {k}"
        );
        by_degree.push((
            k,
            AbelianInvariants {
                torsion: incoming.torsion.clone(),
                free_rank: cycles - incoming.rank,
            },
        ));
    }
    // Degrees above the complex dimension vanish without computation.
    for k in by_degree.len()..=max_degree {
        by_degree.push((k, AbelianInvariants::trivial()));
    }
    Ok(HomologyTable { groups: by_degree })
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::ResourceLimit { what, needed, cap } => Error::ResourceLimit {
            what,
            needed: *needed,
            cap: *cap,
        },
        other => Error::InvalidInput(other.to_string()),
    }
}

fn boundary_profile(c: &SimplicialComplex, k: usize, caps: &Caps) -> Result<MapProfile> {
    if k == 0 {
        // Augmentation: one row of ones.
        return Ok(MapProfile {
            rank: if c.count(0) > 0 { 1 } else { 0 },
            torsion: Vec::new(),
        });
    }
    let cols = c.count(k);
    if cols == 0 {
        return Ok(MapProfile::default());
    }
    let rows = c.count(k - 1);
    let nnz = cols * (k + 1);
    caps.check("boundary matrix nonzeros", nnz, caps.nnz_cap)?;
    let level = c.level(k).expect("nonzero count");
    let faces = c.level(k - 1).expect("faces exist by closure");

    let triplets: Vec<(u32, u32, i64)> = exec::flat_map_chunks(cols, 4096, |range| {
        let mut out = Vec::with_capacity(range.len() * (k + 1));
        let mut face = Vec::with_capacity(k);
        for j in range {
            let s = level.get(j);
            for drop in 0..s.len() {
                face.clear();
                face.extend(
                    s.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v),
                );
                let r = faces
                    .position(&face)
                    .expect("face of a simplex is a simplex") as u32;
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                out.push((r, j as u32, sign));
            }
        }
        out
    });
    let (rank, torsion) = rank_and_torsion(rows, cols, triplets, caps)?;
    Ok(MapProfile { rank, torsion })
}

/// Rank and torsion (invariant factors > 1) of a sparse integer matrix.
pub fn rank_and_torsion(
    rows: usize,
    cols: usize,
    triplets: Vec<(u32, u32, i64)>,
    caps: &Caps,
) -> Result<(usize, Vec<BigInt>)> {
    let mut sp = SparseInt::from_triplets(rows, cols, triplets)?;
    let units = sp.eliminate_unit_pivots(caps)?;
    let core = sp.into_dense();
    let core_factors = core.invariant_factors();
    let rank = units + core_factors.len();
    let torsion = core_factors.into_iter().filter(|d| !d.is_one()).collect();
    Ok((rank, torsion))
}

/// Sparse integer matrix supporting unimodular unit-pivot elimination.
struct SparseInt {
    rows: Vec<HashMap<u32, i128>>,
    col_rows: Vec<Vec<u32>>, // may contain stale row ids; validated on use
    col_len: Vec<u32>,       // live entry counts per column
    alive_row: Vec<bool>,
    alive_col: Vec<bool>,
}

impl SparseInt {
    fn from_triplets(rows: usize, cols: usize, triplets: Vec<(u32, u32, i64)>) -> Result<Self> {
        let mut m = SparseInt {
            rows: vec![HashMap::new(); rows],
            col_rows: vec![Vec::new(); cols],
            col_len: vec![0; cols],
            alive_row: vec![true; rows],
            alive_col: vec![true; cols],
        };
        for (r, c, v) in triplets {
            if v == 0 {
                continue;
            }
            let e = m.rows[r as usize].entry(c).or_insert(0);
            if *e == 0 {
                m.col_rows[c as usize].push(r);
                m.col_len[c as usize] += 1;
            }
            *e += v as i128;
            if *e == 0 {
                m.rows[r as usize].remove(&c);
                m.col_len[c as usize] -= 1;
            }
        }
        Ok(m)
    }

    fn live_col_rows(&mut self, c: u32) -> Vec<u32> {
        let list = &mut self.col_rows[c as usize];
        list.retain(|&r| self.alive_row[r as usize] && self.rows[r as usize].contains_key(&c));
        list.sort_unstable();
        list.dedup();
        self.col_len[c as usize] = list.len() as u32;
        list.clone()
    }

    /// Eliminates +-1 pivots until none remain, preferring low fill-in.
    /// Returns the number of eliminated pivots (unit invariant factors).
    fn eliminate_unit_pivots(&mut self, caps: &Caps) -> Result<usize> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let mut nnz: usize = self.rows.iter().map(|r| r.len()).sum();
        let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
        let push_candidates = |heap: &mut BinaryHeap<Reverse<(u64, u32, u32)>>,
                                   rows: &Vec<HashMap<u32, i128>>,
                                   col_len: &Vec<u32>,
                                   r: u32| {
            let row = &rows[r as usize];
            let rl = row.len() as u64;
            for (&c, &v) in row {
                if v == 1 || v == -1 {
                    let cost = (rl - 1) * (col_len[c as usize].max(1) as u64 - 1);
                    heap.push(Reverse((cost, r, c)));
                }
            }
        };
        for r in 0..self.rows.len() {
            push_candidates(&mut heap, &self.rows, &self.col_len, r as u32);
        }

        let mut eliminated = 0usize;
        while let Some(Reverse((cost, r, c))) = heap.pop() {
            if !self.alive_row[r as usize] || !self.alive_col[c as usize] {
                continue;
            }
            let Some(&v) = self.rows[r as usize].get(&c) else {
                continue;
            };
            if v != 1 && v != -1 {
                continue;
            }
            // Validate staleness of the recorded cost; requeue if off.
            let col_list = self.live_col_rows(c);
            let cur_cost = (self.rows[r as usize].len() as u64 - 1)
                * (col_list.len() as u64 - 1);
            if cur_cost > cost {
                heap.push(Reverse((cur_cost, r, c)));
                continue;
            }

            // Pivot row contents, without the pivot itself.
            let pivot_row: Vec<(u32, i128)> = self.rows[r as usize]
                .iter()
                .filter(|&(&cc, _)| cc != c)
                .map(|(&cc, &vv)| (cc, vv))
                .collect();

            for &r2 in &col_list {
                if r2 == r {
                    continue;
                }
                let a = *self.rows[r2 as usize].get(&c).expect("live entry");
                // row_{r2} -= (a / v) * row_r zeroes the (r2, c) entry.
                let factor = a * v; // v in {1, -1} so a / v = a * v
                self.rows[r2 as usize].remove(&c);
                self.col_len[c as usize] -= 1;
                nnz -= 1;
                for &(cc, w) in &pivot_row {
                    let delta = factor.checked_mul(w).ok_or(Error::ResourceLimit {
                        what: "sparse reduction coefficient overflow",
                        needed: usize::MAX,
                        cap: usize::MAX,
                    })?;
                    let e = self.rows[r2 as usize].entry(cc).or_insert(0);
                    let was_zero = *e == 0;
                    *e = e.checked_sub(delta).ok_or(Error::ResourceLimit {
                        what: "sparse reduction coefficient overflow",
                        needed: usize::MAX,
                        cap: usize::MAX,
                    })?;
                    if *e == 0 {
                        self.rows[r2 as usize].remove(&cc);
                        if !was_zero {
                            self.col_len[cc as usize] -= 1;
                            nnz -= 1;
                        }
                    } else {
                        if was_zero {
                            self.col_rows[cc as usize].push(r2);
                            self.col_len[cc as usize] += 1;
                            nnz += 1;
                        }
                        if *e == 1 || *e == -1 {
                            let cost = (self.rows[r2 as usize].len() as u64 - 1)
                                * (self.col_len[cc as usize].max(1) as u64 - 1);
                            heap.push(Reverse((cost, r2, cc)));
                        }
                    }
                }
                caps.check("sparse reduction fill", nnz, caps.nnz_cap.saturating_mul(4))?;
            }
            // Retire the pivot row and column; the remaining row entries
            // are cleared by column operations against the now-singleton
            // pivot column, which causes no fill.
            for &(cc, _) in &pivot_row {
                self.rows[r as usize].remove(&cc);
                self.col_len[cc as usize] -= 1;
                nnz -= 1;
            }
            self.rows[r as usize].remove(&c);
            self.col_len[c as usize] -= 1;
            nnz -= 1;
            self.alive_row[r as usize] = false;
            self.alive_col[c as usize] = false;
            eliminated += 1;
        }
        Ok(eliminated)
    }

    /// The remaining core as a dense matrix.
    fn into_dense(self) -> IntMatrix {
        let live_rows: Vec<u32> = (0..self.rows.len() as u32)
            .filter(|&r| self.alive_row[r as usize] && !self.rows[r as usize].is_empty())
            .collect();
        let mut live_cols: Vec<u32> = live_rows
            .iter()
            .flat_map(|&r| self.rows[r as usize].keys().copied())
            .collect();
        live_cols.sort_unstable();
        live_cols.dedup();
        let col_index: HashMap<u32, usize> = live_cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut dense = IntMatrix::zero(live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &self.rows[r as usize] {
                dense.set(i, col_index[&c], BigInt::from(v));
            }
        }
        dense
    }
}

/// Homological connectivity of a complex, capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// The exact homological connectivity: reduced homology vanishes up to
    /// and including this degree and is nonzero one above. -2 means empty,
    /// -1 means nonempty with nonvanishing H~_0.
    Exactly(i64),
    /// All reduced homology vanishes through the cap.
    AtLeast(i64),
}

impl Connectivity {
    pub fn meets(&self, required: i64) -> bool {
        match self {
            Connectivity::Exactly(k) | Connectivity::AtLeast(k) => *k >= required,
        }
    }

    pub fn value(&self) -> i64 {
        match self {
            Connectivity::Exactly(k) | Connectivity::AtLeast(k) => *k,
        }
    }
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Connectivity::Exactly(k) => write!(f, "{k}"),
            Connectivity::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Largest k <= cap with vanishing reduced homology through degree k;
/// -2 for the empty complex. This certifies homology only: 1-connectivity
/// additionally needs a fundamental-group check.
pub fn homological_connectivity(
    c: &SimplicialComplex,
    cap: i64,
    caps: &Caps,
) -> Result<Connectivity> {
    if c.is_empty() {
        return Ok(Connectivity::Exactly(-2));
    }
    if cap < 0 {
        return Ok(Connectivity::AtLeast(cap.max(-1)));
    }
    let window = cap.min(c.dim()).max(0) as usize;
    let table = reduced_homology(c, window, caps)?;
    for k in 0..=window {
        if !table.group(k).is_none_or(|g| g.is_trivial()) {
            return Ok(Connectivity::Exactly(k as i64 - 1));
        }
    }
    // Vanishing through min(cap, dim) extends past the dimension for free.
    Ok(Connectivity::AtLeast(cap))
}
