//! Best-effort fundamental-group triviality checking.
//!
//! Homology alone cannot certify 1-connectivity, so this module builds the
//! edge-path group presentation from a spanning tree and the 2-skeleton and
//! applies bounded Tietze simplification. Triviality of a presentation is
//! undecidable in general; "unknown" is an honest third verdict.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::matrix::{cokernel_invariants, IntMatrix};
use crate::simplicial::SimplicialComplex;

const MAX_STEPS: usize = 10_000;
const MAX_RELATOR_LEN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi1Status {
    Trivial,
    Nontrivial,
    Unknown,
}

impl std::fmt::Display for Pi1Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pi1Status::Trivial => write!(f, "trivial"),
            Pi1Status::Nontrivial => write!(f, "nontrivial"),
            Pi1Status::Unknown => write!(f, "unknown"),
        }
    }
}

/// Letters are generator ids; negative sign encodes inversion.
type Word = Vec<i32>;

fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

fn free_reduce(w: &mut Word) {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w.iter() {
        if out.last().is_some_and(|&y| y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *w = out;
}

fn cyclic_reduce(w: &mut Word) {
    free_reduce(w);
    while w.len() >= 2 && w.first().copied() == w.last().map(|&x| -x) {
        w.pop();
        w.remove(0);
        free_reduce(w);
    }
}

/// Edge-path group verdict for a connected complex. Disconnected or empty
/// inputs yield `Unknown` (the operation's precondition is connectedness).
pub fn pi1_trivial(c: &SimplicialComplex) -> Pi1Status {
    let n0 = c.count(0);
    if n0 == 0 {
        return Pi1Status::Unknown;
    }
    let vertices: Vec<u32> = c
        .level(0)
        .map(|l| l.iter().map(|s| s[0]).collect())
        .unwrap_or_default();
    let vid: HashMap<u32, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Spanning tree by BFS from the first vertex.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n0];
    let edges: Vec<(usize, usize)> = c
        .level(1)
        .map(|l| {
            l.iter()
                .map(|e| (vid[&e[0]], vid[&e[1]]))
                .collect::<Vec<_>>()
        })
        .unwrap_or_default();
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(i);
        adj[b].push(i);
    }
    let mut in_tree = vec![false; edges.len()];
    let mut seen = vec![false; n0];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    while let Some(v) = queue.pop_front() {
        for &ei in &adj[v] {
            let (a, b) = edges[ei];
            let w = if a == v { b } else { a };
            if !seen[w] {
                seen[w] = true;
                in_tree[ei] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Pi1Status::Unknown;
    }

    // Generators: non-tree edges, numbered from 1.
    let mut gen_of_edge: HashMap<(usize, usize), i32> = HashMap::new();
    let mut n_gens = 0i32;
    for (i, &(a, b)) in edges.iter().enumerate() {
        if !in_tree[i] {
            n_gens += 1;
            gen_of_edge.insert((a, b), n_gens);
        }
    }
    if n_gens == 0 {
        return Pi1Status::Trivial;
    }

    // Letter of the directed edge a -> b: tree edges vanish.
    let letter = |a: usize, b: usize| -> Option<i32> {
        if let Some(&g) = gen_of_edge.get(&(a, b)) {
            Some(g)
        } else {
            gen_of_edge.get(&(b, a)).map(|&g| -g)
        }
    };

    // One relator per 2-simplex.
    let mut relators: Vec<Word> = Vec::new();
    if let Some(level) = c.level(2) {
        for t in level.iter() {
            let (a, b, cc) = (vid[&t[0]], vid[&t[1]], vid[&t[2]]);
            let mut w: Word = Vec::new();
            for (x, y) in [(a, b), (b, cc), (cc, a)] {
                if let Some(l) = letter(x, y) {
                    w.push(l);
                }
            }
            cyclic_reduce(&mut w);
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }

    match tietze_reduce(n_gens as usize, relators) {
        TietzeOutcome::Trivial => Pi1Status::Trivial,
        TietzeOutcome::FreeOfPositiveRank => Pi1Status::Nontrivial,
        TietzeOutcome::Stuck { gens, relators } => {
            if abelianization_nontrivial(gens, &relators) {
                Pi1Status::Nontrivial
            } else {
                Pi1Status::Unknown
            }
        }
    }
}

enum TietzeOutcome {
    Trivial,
    FreeOfPositiveRank,
    Stuck { gens: usize, relators: Vec<Word> },
}

fn tietze_reduce(n_gens: usize, mut relators: Vec<Word>) -> TietzeOutcome {
    let mut alive: Vec<bool> = vec![true; n_gens + 1]; // 1-based
    let mut steps = 0usize;

    loop {
        relators.iter_mut().for_each(cyclic_reduce);
        relators.retain(|w| !w.is_empty());
        relators.sort();
        relators.dedup();
        let live_count = alive.iter().skip(1).filter(|&&a| a).count();
        if live_count == 0 {
            return TietzeOutcome::Trivial;
        }
        if relators.is_empty() {
            return TietzeOutcome::FreeOfPositiveRank;
        }
        if steps >= MAX_STEPS {
            return stuck(alive, relators);
        }

        // Pick the shortest relator owning a generator that occurs exactly
        // once in it; such a relator is a definition of that generator.
        let mut choice: Option<(usize, i32)> = None;
        for (ri, w) in relators.iter().enumerate() {
            let mut counts: HashMap<i32, usize> = HashMap::new();
            for &x in w {
                *counts.entry(x.abs()).or_insert(0) += 1;
            }
            if let Some((&g, _)) = counts.iter().find(|&(_, &n)| n == 1) {
                let better = match &choice {
                    None => true,
                    Some((best, _)) => w.len() < relators[*best].len(),
                };
                if better {
                    choice = Some((ri, g));
                }
            }
        }
        let Some((ri, g)) = choice else {
            return stuck(alive, relators);
        };

        // Solve the relator for g: rotate so the +-g letter leads, then
        // g = inverse of the remainder (after orienting positively).
        let w = relators.remove(ri);
        let pos = w
            .iter()
            .position(|&x| x.abs() == g)
            .expect("chosen generator occurs");
        let mut rot: Word = Vec::with_capacity(w.len());
        rot.extend_from_slice(&w[pos..]);
        rot.extend_from_slice(&w[..pos]);
        if rot[0] < 0 {
            rot = invert(&rot);
            let last = rot.pop().expect("nonempty");
            rot.insert(0, last);
        }
        let replacement = invert(&rot[1..]);

        // Substitute the definition everywhere.
        let mut blocked = false;
        for w in relators.iter_mut() {
            let mut out: Word = Vec::with_capacity(w.len());
            for &x in w.iter() {
                if x == g {
                    out.extend_from_slice(&replacement);
                } else if x == -g {
                    out.extend(invert(&replacement));
                } else {
                    out.push(x);
                }
            }
            free_reduce(&mut out);
            if out.len() > MAX_RELATOR_LEN {
                blocked = true;
            }
            *w = out;
        }
        if blocked {
            relators.push(w);
            return stuck(alive, relators);
        }
        alive[g as usize] = false;
        steps += 1;
    }
}

fn stuck(alive: Vec<bool>, relators: Vec<Word>) -> TietzeOutcome {
    // Renumber live generators densely for the abelianization.
    let mut remap: HashMap<i32, i32> = HashMap::new();
    let mut next = 0i32;
    for (g, &a) in alive.iter().enumerate().skip(1) {
        if a {
            next += 1;
            remap.insert(g as i32, next);
        }
    }
    let relators = relators
        .into_iter()
        .map(|w| {
            w.into_iter()
                .map(|x| {
                    let sign = x.signum();
                    sign * remap[&x.abs()]
                })
                .collect()
        })
        .collect();
    TietzeOutcome::Stuck {
        gens: next as usize,
        relators,
    }
}

/// Whether the abelianization Z^gens / exponent-sums is nontrivial.
fn abelianization_nontrivial(gens: usize, relators: &[Word]) -> bool {
    if gens == 0 {
        return false;
    }
    let mut m = IntMatrix::zero(gens, relators.len().max(1));
    for (j, w) in relators.iter().enumerate() {
        for &x in w {
            let i = (x.abs() - 1) as usize;
            let v = m.get(i, j) + BigInt::from(x.signum());
            m.set(i, j, v);
        }
    }
    !cokernel_invariants(&m).is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::face_poset;

    #[test]
    fn cone_is_trivial() {
        let c = SimplicialComplex::full_simplex(2);
        assert_eq!(pi1_trivial(&c), Pi1Status::Trivial);
    }

    #[test]
    fn circle_is_nontrivial() {
        let c = SimplicialComplex::simplex_boundary(1);
        assert_eq!(pi1_trivial(&c), Pi1Status::Nontrivial);
    }

    #[test]
    fn two_sphere_is_trivial() {
        let c = SimplicialComplex::simplex_boundary(2);
        assert_eq!(pi1_trivial(&c), Pi1Status::Trivial);
    }

    #[test]
    fn subdivided_two_sphere_is_trivial() {
        let sd = face_poset(&SimplicialComplex::simplex_boundary(2)).order_complex();
        assert_eq!(pi1_trivial(&sd), Pi1Status::Trivial);
    }

    #[test]
    fn torus_is_nontrivial() {
        // 7-vertex torus: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7.
        let mut faces: Vec<Vec<u32>> = Vec::new();
        for i in 0..7u32 {
            faces.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            faces.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        let labels = (0..7).map(|i| i.to_string()).collect();
        let c = SimplicialComplex::from_maximal(labels, &faces).unwrap();
        assert_eq!(c.count(1), 21);
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(pi1_trivial(&c), Pi1Status::Nontrivial);
    }
}
